#pragma once

// momentum.hpp -- the electromagnetic momentum of a charge/current-loop
// system by four independent formulations, cross-checked against each
// other:
//   p_qa          Q A / c with A summed numerically over the filament
//   p_drift_sum   sum of (mass-equivalent of carrier potential energy) x v_d
//   p_energy_flux pairwise energy-transport construction over the loop
//   p_dipole      (E x a) I / c^2 with E sampled at the loop center
// plus, where applicable, the closed two-arm form for a rectangular loop
// and the E x B / 4 pi c volume integral over a solenoid interior.
//
// Bare current filaments throughout: no induced-surface-charge modeling
// (the symmetric-pair setup makes the loop effectively equipotential).

#include <optional>
#include <span>
#include <sstream>
#include <variant>
#include <vector>

#include "abm/constants.hpp"
#include "abm/errors.hpp"
#include "abm/fields.hpp"
#include "abm/parallel.hpp"
#include "abm/sources.hpp"
#include "abm/vec3.hpp"

namespace abm {

// Delta m = q_j phi_j / c^2: relativistic mass assigned to the mutual
// electrostatic potential energy of a carrier element in the external
// charge's field. Sign is carried for opposite-sign pairs.
struct MassEquivalentElement {
    double delta_m = 0.0;  // [g]
    Vec3 velocity;         // [cm/s]
};

struct MomentumDiagnostics {
    std::size_t element_count = 0;
    double max_pairwise_rel_diff = 0.0;
};

struct MomentumReport {
    Vec3 p_qa;
    Vec3 p_drift_sum;
    Vec3 p_energy_flux;
    Vec3 p_dipole;
    std::optional<Vec3> p_two_arm;         // rectangular loop, charge on the gap axis
    std::optional<Vec3> p_field_integral;  // solenoid scenes only
    MomentumDiagnostics diagnostics;

    std::vector<std::pair<const char*, Vec3>> populated() const;
};

// p = q A / c; independent of the charge's mass and velocity.
Vec3 momentum_qa(const PointCharge& charge, const Vec3& A_at_charge, const Constants& k);

// p = sum_j delta_m_j v_d_j tangent_j with
// delta_m_j = q (n e sigma dl)_j / (c^2 |x_j - x0|). Algebraically the same
// sum as momentum_qa(charge, vector_potential_numeric(...)), reassociated.
template <ElementSource S>
Vec3 momentum_drift_sum(const S& elements, const PointCharge& charge, const Constants& k,
                        par::ExecMode mode = par::ExecMode::parallel) {
    const double c2 = k.c * k.c;
    return par::reduce_indexed<Vec3>(
        elements.size(),
        [&](std::size_t i) {
            const CircuitElement e = elements[i];
            const double dist = (e.position - charge.position).norm();
            if (dist < filament_guard_fraction * e.dl) {
                std::ostringstream os;
                os << "charge at " << charge.position << " within guard band of filament element at "
                   << e.position;
                throw TooCloseToFilament(os.str());
            }
            const double delta_m = charge.q * e.drift.line_charge_density() * e.dl / (c2 * dist);
            return e.tangent * (delta_m * e.drift.drift_speed);
        },
        mode);
}

MassEquivalentElement mass_equivalent(const CircuitElement& e, const PointCharge& charge,
                                      const Constants& k);

// Closed two-arm form for a rectangular loop with the charge on the gap
// axis at distance R1 from the center:
//   p = [Q n e sigma s v_d / c^2] (1/(R1 - r) - 1/(R1 + r)) t_near,
// t_near the drift direction of the nearer arm. The arms AB/CD cancel.
Vec3 momentum_two_arm_rect(const RectangularLoop& loop, const PointCharge& charge,
                           const Constants& k);

// p = (E x a) I / c^2 = E x m / c, with E treated as uniform over the loop.
Vec3 momentum_dipole(const Vec3& E_at_loop, const RectangularLoop& loop, const Constants& k);
Vec3 momentum_dipole(const Vec3& E_at_loop, const CircularLoop& loop, const Constants& k);

// Pairwise energy-flux construction (uniform E): for each centrally
// symmetric element pair, dP = I (E . dl) s / c^2 with s the separation
// vector from the draining element to the fed one. Elements must pair
// under point reflection through center (even count).
Vec3 momentum_energy_flux(std::span<const CircuitElement> elements, const Vec3& center,
                          const Vec3& E_uniform, const Constants& k);

// Tensor-product quadrature for the solenoid-interior volume integral.
// n_axial = 0 scales the axial count with L/r (128 at L/r = 100).
struct VolumeQuadSpec {
    int n_radial = 16;
    int n_azimuthal = 32;
    int n_axial = 0;
};

// Volume integral of (E x B) / 4 pi c over the solenoid interior (the
// exterior contributes exactly zero for the ideal solenoid). Converges to
// Q A(R1) / c as L / R1 grows.
Vec3 momentum_field_integral(const Solenoid& s, const PointCharge& charge,
                             const VolumeQuadSpec& quad, const Constants& k,
                             par::ExecMode mode = par::ExecMode::parallel);

// A momentum scene: one source plus one external charge.
struct MomentumScene {
    std::variant<RectangularLoop, CircularLoop, Solenoid> source;
    int elements_per_unit = 400;  // per side (rect), total (circle), per loop (solenoid)
    PointCharge charge;
    Constants constants = Constants::gaussian();
    VolumeQuadSpec volume_quad;

    Vec3 source_center() const;
};

// Evaluates every formulation applicable to the scene.
MomentumReport momentum_report(const MomentumScene& scene,
                               par::ExecMode mode = par::ExecMode::parallel);

struct SymmetricPairReport {
    MomentumReport first;
    MomentumReport second;
    // max over formulations of |p1 + p2| / max(|p1|, |p2|)
    double max_antisymmetry_residual = 0.0;
    // max over elements of |w1 + w2| / max |w| for the two charges'
    // center-sampled per-element powers w = I (E . t) dl
    double max_power_residual = 0.0;
};

// Requires charge2 to be the exact point reflection of scene.charge through
// the source center with equal q; throws AsymmetricScene otherwise.
SymmetricPairReport symmetric_pair_report(const MomentumScene& scene, const PointCharge& charge2,
                                          par::ExecMode mode = par::ExecMode::parallel);

struct NeutralLoopReport {
    Vec3 p_carriers;            // drift-sum momentum of the carriers alone
    Vec3 p_with_ions;           // same plus the static ion lattice (v = 0)
    double potential_energy;    // total carrier + ion energy in the charge's field
    double potential_energy_scale;  // sum of term magnitudes, for relative checks
};

// Adds a static ion line charge exactly canceling the carrier charge
// density: the net potential energy vanishes while the momentum is
// unchanged.
NeutralLoopReport neutral_loop_check(std::span<const CircuitElement> elements,
                                     const PointCharge& charge, const Constants& k);

}  // namespace abm
