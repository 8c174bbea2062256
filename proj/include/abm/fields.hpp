#pragma once

// fields.hpp -- E, B, and A evaluators. Analytic formulas cover the ideal
// (infinite) solenoid, the straight wire, the point charge, and the point
// dipole; numeric kernels sum over discretized filament elements. The two
// routes are distinct code paths, cross-validated in tests.

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "abm/constants.hpp"
#include "abm/errors.hpp"
#include "abm/fd_ops.hpp"
#include "abm/parallel.hpp"
#include "abm/sources.hpp"
#include "abm/vec3.hpp"

namespace abm {

struct FieldSample {
    Vec3 position;
    Vec3 E;  // [statvolt/cm]
    Vec3 B;  // [G]
    Vec3 A;  // [G cm]
};

struct ScalarPotentialSample {
    Vec3 position;
    double phi = 0.0;  // [statvolt]
};

// Evaluations closer to a filament element than this fraction of its dl
// throw TooCloseToFilament instead of returning huge values.
inline constexpr double filament_guard_fraction = 1e-6;
// Half-width of the excluded band around the ideal solenoid surface R = r.
inline constexpr double solenoid_surface_guard = 1e-9;

namespace detail {
// Perpendicular decomposition of x relative to an axis line.
struct AxialFrame {
    Vec3 radial;      // component of (x - point) perpendicular to axis
    double R;         // |radial|
    Vec3 axis_cross_radial;  // axis x radial  (= R * phi_hat)
};
inline AxialFrame axial_frame(const Vec3& axis_point, const Vec3& axis_dir, const Vec3& x) {
    const Vec3 rel = x - axis_point;
    const Vec3 radial = rel - axis_dir * dot(rel, axis_dir);
    return {radial, radial.norm(), cross(axis_dir, radial)};
}
}  // namespace detail

// Eqs. for the ideal solenoid, treated as infinite: B = (4 pi I M / c) zhat
// inside, 0 outside. Throws OnSurface within |R - r| < 1e-9 r.
Vec3 solenoid_B_analytic(const Solenoid& s, const Vec3& x, const Constants& k);

// A = (2 pi R I M / c) phi_hat inside, (2 pi r^2 I M / (c R)) phi_hat
// outside; continuous at the surface and -> 0 linearly on the axis.
Vec3 solenoid_A_analytic(const Solenoid& s, const Vec3& x, const Constants& k);

// Flux through any circuit winding once around the ideal solenoid.
inline double solenoid_flux(const Solenoid& s, const Constants& k) {
    return pi * s.radius * s.radius * (4.0 * pi * s.current * s.loops_per_length / k.c);
}

// B = (2 I / c R) phi_hat.
Vec3 wire_B_analytic(const StraightWire& w, const Vec3& x, const Constants& k);
// A = -(2 I / c) ln(R) dir; gauge reference radius fixed at 1 cm.
Vec3 wire_A_analytic(const StraightWire& w, const Vec3& x, const Constants& k);

// E(x) = q (x - pos) / |x - pos|^3 and phi = q / |x - pos|.
Vec3 coulomb_E(const PointCharge& charge, const Vec3& x);
double coulomb_phi(const PointCharge& charge, const Vec3& x);
ScalarPotentialSample scalar_potential_sample(const PointCharge& charge, const Vec3& x);

// Point dipole: A = m x Rhat / R^2, B = (3 (m.Rhat) Rhat - m) / R^3.
Vec3 dipole_A(const Vec3& m, const Vec3& R_vec);
Vec3 dipole_B(const Vec3& m, const Vec3& R_vec);

// A(x0) = (1/c) sum_j I dl_j tangent_j / |x_j - x0|   (filament reduction
// of the volume integral over rho v / |x - x0|).
template <ElementSource S>
Vec3 vector_potential_numeric(const S& elements, const Vec3& x0, const Constants& k,
                              par::ExecMode mode = par::ExecMode::parallel) {
    const Vec3 sum = par::reduce_indexed<Vec3>(
        elements.size(),
        [&](std::size_t i) {
            const CircuitElement e = elements[i];
            const double dist = (e.position - x0).norm();
            if (dist < filament_guard_fraction * e.dl) {
                std::ostringstream os;
                os << "evaluation point " << x0 << " within guard band of filament element at "
                   << e.position;
                throw TooCloseToFilament(os.str());
            }
            return e.tangent * (e.current * e.dl / dist);
        },
        mode);
    return sum / k.c;
}

// Direct Biot-Savart sum, B = (1/c) sum I dl t x (x0 - x_j) / |x0 - x_j|^3.
// Kept as an independent oracle for the curl route below.
template <ElementSource S>
Vec3 biot_savart_B(const S& elements, const Vec3& x0, const Constants& k,
                   par::ExecMode mode = par::ExecMode::parallel) {
    const Vec3 sum = par::reduce_indexed<Vec3>(
        elements.size(),
        [&](std::size_t i) {
            const CircuitElement e = elements[i];
            const Vec3 r = x0 - e.position;
            const double dist = r.norm();
            if (dist < filament_guard_fraction * e.dl) {
                std::ostringstream os;
                os << "evaluation point " << x0 << " within guard band of filament element at "
                   << e.position;
                throw TooCloseToFilament(os.str());
            }
            return cross(e.tangent, r) * (e.current * e.dl / (dist * dist * dist));
        },
        mode);
    return sum / k.c;
}

// Distance from x0 to the nearest element midpoint (used for stencil scale).
template <ElementSource S>
double nearest_element_distance(const S& elements, const Vec3& x0) {
    const std::size_t n = elements.size();
    double best = std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : best)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const double d = (elements[static_cast<std::size_t>(i)].position - x0).norm2();
        best = std::min(best, d);
    }
    return std::sqrt(best);
}

// B = curl A with A from vector_potential_numeric, via central differences.
// h = 0 selects the default 1e-4 * (distance to the nearest element).
template <ElementSource S>
Vec3 B_numeric(const S& elements, const Vec3& x0, const Constants& k, double h = 0.0,
               par::ExecMode mode = par::ExecMode::parallel) {
    if (h <= 0.0) {
        const double scale = nearest_element_distance(elements, x0);
        if (!(scale > 0)) throw TooCloseToFilament("B_numeric: evaluation point on a filament");
        h = 1e-4 * scale;
    }
    const VectorField A = [&](const Vec3& p) { return vector_potential_numeric(elements, p, k, mode); };
    return curl_fd(A, x0, h);
}

}  // namespace abm
