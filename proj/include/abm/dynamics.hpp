#pragma once

// dynamics.hpp -- quasi-static current ramp-down: the induced E field
// transfers the charge's electromagnetic momentum Q A / c into mechanical
// momentum, conserving the generalized momentum p_m + p_e. A(t) follows
// I(t) instantaneously (no retardation).

#include <vector>

#include "abm/constants.hpp"
#include "abm/errors.hpp"
#include "abm/sources.hpp"
#include "abm/vec3.hpp"

namespace abm {

enum class RampShape { linear, constant };

struct RampProfile {
    double I0 = 0.0;       // [statA]
    double duration = 1.0;  // T [s]
    RampShape shape = RampShape::linear;

    void validate() const {
        if (!(duration > 0)) throw InvalidInput("RampProfile: duration must be > 0");
    }
    // I(t) = I0 (1 - t/T), clamped at 0.
    double current_at(double t) const {
        if (shape == RampShape::constant) return I0;
        if (t <= 0) return I0;
        if (t >= duration) return 0.0;
        return I0 * (1.0 - t / duration);
    }
    // Derivative used by the integrator; the ramp slope applies through t = T.
    double dI_dt(double t) const {
        if (shape == RampShape::constant) return 0.0;
        return (t <= duration) ? -I0 / duration : 0.0;
    }
    bool operator==(const RampProfile&) const = default;
};

enum class ChargeMode { frozen, free_motion };

struct TrajectoryRecord {
    double t = 0.0;
    Vec3 p_m;    // mechanical momentum [g cm/s]
    Vec3 p_e;    // q A(t) / c
    Vec3 p_gen;  // p_m + p_e
    double current = 0.0;
};

// E = -(1/c) dA/dt for the ideal solenoid; piecewise over both the
// interior and exterior branches of A.
Vec3 induced_E(const Solenoid& s, double dI_dt, const Vec3& x, const Constants& k);

// Exterior-only branch: throws InsideSolenoid for R < r.
Vec3 induced_E_exterior(const Solenoid& s, double dI_dt, const Vec3& x, const Constants& k);

// Classical RK4, fixed step (adjusted so an integer number of steps lands
// exactly on t_end). Frozen mode holds the position and accumulates
// momentum only; free mode also moves the charge (mass > 0 required).
// Throws StepTooLarge if dt > duration / 1000.
std::vector<TrajectoryRecord> ramp_simulation(const Solenoid& s, const RampProfile& ramp,
                                              const PointCharge& charge, ChargeMode mode, double dt,
                                              const Constants& k, double t_end = -1.0);

struct RampPairReport {
    Vec3 dp_m1, dp_e1;
    Vec3 dp_m2, dp_e2;
    // max of |dp_m + dp_e| / |dp_e| over the two charges and of
    // |dp_m1 + dp_m2| / |dp_m1|
    double max_residual = 0.0;
};

// Mirror-pair ramp: requires charge2 at the exact point reflection of
// charge1 through the solenoid center with equal q.
RampPairReport symmetric_ramp_check(const Solenoid& s, const RampProfile& ramp,
                                    const PointCharge& charge1, const PointCharge& charge2,
                                    double dt, const Constants& k, double t_end = -1.0);

}  // namespace abm
