#include "abm/fields.hpp"

namespace abm {

Vec3 solenoid_B_analytic(const Solenoid& s, const Vec3& x, const Constants& k) {
    s.validate();
    if (s.current == 0.0) return {};
    const auto f = detail::axial_frame(s.center, s.axis, x);
    if (std::fabs(f.R - s.radius) < solenoid_surface_guard * s.radius) {
        std::ostringstream os;
        os << "point " << x << " lies on the solenoid surface R = " << s.radius;
        throw OnSurface(os.str());
    }
    if (f.R > s.radius) return {};
    return s.axis * (4.0 * pi * s.current * s.loops_per_length / k.c);
}

Vec3 solenoid_A_analytic(const Solenoid& s, const Vec3& x, const Constants& k) {
    s.validate();
    const auto f = detail::axial_frame(s.center, s.axis, x);
    const double coef = 2.0 * pi * s.current * s.loops_per_length / k.c;
    // axis_cross_radial = R * phi_hat, so the inner branch needs no division
    // and A -> 0 linearly as R -> 0.
    if (f.R <= s.radius) return f.axis_cross_radial * coef;
    return f.axis_cross_radial * (coef * s.radius * s.radius / (f.R * f.R));
}

Vec3 wire_B_analytic(const StraightWire& w, const Vec3& x, const Constants& k) {
    w.validate();
    const auto f = detail::axial_frame(w.point, w.direction, x);
    if (f.R < w.guard_radius) {
        std::ostringstream os;
        os << "point " << x << " within guard radius " << w.guard_radius << " of the wire";
        throw TooCloseToWire(os.str());
    }
    return f.axis_cross_radial * (2.0 * w.current / (k.c * f.R * f.R));
}

Vec3 wire_A_analytic(const StraightWire& w, const Vec3& x, const Constants& k) {
    w.validate();
    const auto f = detail::axial_frame(w.point, w.direction, x);
    if (f.R < w.guard_radius) {
        std::ostringstream os;
        os << "point " << x << " within guard radius " << w.guard_radius << " of the wire";
        throw TooCloseToWire(os.str());
    }
    return w.direction * (-2.0 * w.current / k.c * std::log(f.R));
}

Vec3 coulomb_E(const PointCharge& charge, const Vec3& x) {
    const Vec3 r = x - charge.position;
    const double dist = r.norm();
    if (!(dist > 0)) {
        std::ostringstream os;
        os << "coulomb_E evaluated at the charge position " << x;
        throw SamePoint(os.str());
    }
    return r * (charge.q / (dist * dist * dist));
}

double coulomb_phi(const PointCharge& charge, const Vec3& x) {
    const double dist = (x - charge.position).norm();
    if (!(dist > 0)) {
        std::ostringstream os;
        os << "coulomb_phi evaluated at the charge position " << x;
        throw SamePoint(os.str());
    }
    return charge.q / dist;
}

ScalarPotentialSample scalar_potential_sample(const PointCharge& charge, const Vec3& x) {
    return {x, coulomb_phi(charge, x)};
}

Vec3 dipole_A(const Vec3& m, const Vec3& R_vec) {
    const double R = R_vec.norm();
    if (!(R > 0)) throw ZeroSeparation("dipole_A: zero separation");
    return cross(m, R_vec) / (R * R * R);
}

Vec3 dipole_B(const Vec3& m, const Vec3& R_vec) {
    const double R = R_vec.norm();
    if (!(R > 0)) throw ZeroSeparation("dipole_B: zero separation");
    const Vec3 rhat = R_vec / R;
    return (rhat * (3.0 * dot(m, rhat)) - m) / (R * R * R);
}

}  // namespace abm
