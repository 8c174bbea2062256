#include "abm/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "abm/fields.hpp"

namespace abm {

Vec3 induced_E(const Solenoid& s, double dI_dt, const Vec3& x, const Constants& k) {
    // E = -(1/c) dA/dt with A linear in I: evaluate A at unit current.
    Solenoid unit = s;
    unit.current = 1.0;
    return solenoid_A_analytic(unit, x, k) * (-dI_dt / k.c);
}

Vec3 induced_E_exterior(const Solenoid& s, double dI_dt, const Vec3& x, const Constants& k) {
    const auto f = detail::axial_frame(s.center, s.axis, x);
    if (f.R < s.radius) {
        std::ostringstream os;
        os << "induced_E_exterior: point " << x << " lies inside the solenoid";
        throw InsideSolenoid(os.str());
    }
    return induced_E(s, dI_dt, x, k);
}

std::vector<TrajectoryRecord> ramp_simulation(const Solenoid& s, const RampProfile& ramp,
                                              const PointCharge& charge, ChargeMode mode, double dt,
                                              const Constants& k, double t_end) {
    s.validate();
    ramp.validate();
    if (t_end <= 0) t_end = ramp.duration;
    if (!(dt > 0)) throw InvalidInput("ramp_simulation: dt must be > 0");
    if (dt > ramp.duration / 1000.0) {
        std::ostringstream os;
        os << "ramp_simulation: dt = " << dt << " exceeds duration/1000 = " << ramp.duration / 1000.0;
        throw StepTooLarge(os.str());
    }
    if (mode == ChargeMode::free_motion && !(charge.mass > 0))
        throw InvalidInput("ramp_simulation: free-motion mode requires mass > 0");

    // A is linear in I, so precompute the unit-current potential once per
    // evaluation point; in frozen mode the point never moves.
    Solenoid unit = s;
    unit.current = 1.0;
    auto A_unit = [&](const Vec3& p) { return solenoid_A_analytic(unit, p, k); };
    auto E_at = [&](const Vec3& p, double t) { return A_unit(p) * (-ramp.dI_dt(t) / k.c); };

    const long n_steps = std::max(1L, std::lround(t_end / dt));
    const double h = t_end / static_cast<double>(n_steps);  // lands exactly on t_end

    std::vector<TrajectoryRecord> records;
    records.reserve(static_cast<std::size_t>(n_steps) + 1);

    Vec3 x = charge.position;
    Vec3 p_m = charge.mass > 0 ? charge.velocity * charge.mass : Vec3{};

    auto record = [&](double t) {
        TrajectoryRecord rec;
        rec.t = t;
        rec.p_m = p_m;
        rec.p_e = A_unit(x) * (ramp.current_at(t) * charge.q / k.c);
        rec.p_gen = rec.p_m + rec.p_e;
        rec.current = ramp.current_at(t);
        records.push_back(rec);
    };
    record(0.0);

    for (long step = 0; step < n_steps; ++step) {
        const double t = step * h;
        if (mode == ChargeMode::frozen) {
            // RK4 on dp/dt = q E(x0, t)
            const Vec3 k1 = E_at(x, t) * charge.q;
            const Vec3 k2 = E_at(x, t + 0.5 * h) * charge.q;
            const Vec3 k3 = k2;
            const Vec3 k4 = E_at(x, t + h) * charge.q;
            p_m += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        } else {
            // RK4 on (x, p): dx/dt = p/m, dp/dt = q E(x, t)
            const double m = charge.mass;
            const Vec3 kx1 = p_m / m;
            const Vec3 kp1 = E_at(x, t) * charge.q;
            const Vec3 kx2 = (p_m + kp1 * (0.5 * h)) / m;
            const Vec3 kp2 = E_at(x + kx1 * (0.5 * h), t + 0.5 * h) * charge.q;
            const Vec3 kx3 = (p_m + kp2 * (0.5 * h)) / m;
            const Vec3 kp3 = E_at(x + kx2 * (0.5 * h), t + 0.5 * h) * charge.q;
            const Vec3 kx4 = (p_m + kp3 * h) / m;
            const Vec3 kp4 = E_at(x + kx3 * h, t + h) * charge.q;
            x += (kx1 + kx2 * 2.0 + kx3 * 2.0 + kx4) * (h / 6.0);
            p_m += (kp1 + kp2 * 2.0 + kp3 * 2.0 + kp4) * (h / 6.0);
        }
        record((step + 1) * h);
    }
    records.back().t = t_end;
    return records;
}

RampPairReport symmetric_ramp_check(const Solenoid& s, const RampProfile& ramp,
                                    const PointCharge& charge1, const PointCharge& charge2,
                                    double dt, const Constants& k, double t_end) {
    const Vec3 mirror = s.center - (charge1.position - s.center);
    const double R1 = (charge1.position - s.center).norm();
    if ((charge2.position - mirror).norm() > 1e-12 * std::max(R1, 1.0) ||
        std::fabs(charge2.q - charge1.q) >
            1e-12 * std::max(std::fabs(charge1.q), std::fabs(charge2.q)))
        throw AsymmetricScene(
            "symmetric_ramp_check: charge2 must equal charge1 point-reflected through the solenoid "
            "center");

    const auto run1 = ramp_simulation(s, ramp, charge1, ChargeMode::frozen, dt, k, t_end);
    const auto run2 = ramp_simulation(s, ramp, charge2, ChargeMode::frozen, dt, k, t_end);

    RampPairReport rep;
    rep.dp_m1 = run1.back().p_m - run1.front().p_m;
    rep.dp_e1 = run1.back().p_e - run1.front().p_e;
    rep.dp_m2 = run2.back().p_m - run2.front().p_m;
    rep.dp_e2 = run2.back().p_e - run2.front().p_e;

    auto rel = [](const Vec3& a, const Vec3& b) {
        const double denom = std::max(a.norm(), b.norm());
        return denom > 0 ? (a + b).norm() / denom : 0.0;
    };
    rep.max_residual = std::max({rel(rep.dp_m1, rep.dp_e1), rel(rep.dp_m2, rep.dp_e2),
                                 rel(rep.dp_m1, rep.dp_m2)});
    return rep;
}

}  // namespace abm
