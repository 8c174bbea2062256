#pragma once

// fd_ops.hpp -- central-difference differential operators, O(h^2) accurate.

#include "abm/errors.hpp"
#include "abm/quadrature.hpp"
#include "abm/vec3.hpp"

namespace abm {

namespace detail {
inline Vec3 sample_finite(const VectorField& f, const Vec3& p) {
    Vec3 v = f(p);
    if (!v.finite()) throw NonFiniteField("non-finite field value at stencil point");
    return v;
}
}  // namespace detail

inline Vec3 curl_fd(const VectorField& f, const Vec3& x, double h) {
    if (!(h > 0)) throw InvalidInput("curl_fd: h must be > 0");
    const Vec3 fxp = detail::sample_finite(f, {x.x + h, x.y, x.z});
    const Vec3 fxm = detail::sample_finite(f, {x.x - h, x.y, x.z});
    const Vec3 fyp = detail::sample_finite(f, {x.x, x.y + h, x.z});
    const Vec3 fym = detail::sample_finite(f, {x.x, x.y - h, x.z});
    const Vec3 fzp = detail::sample_finite(f, {x.x, x.y, x.z + h});
    const Vec3 fzm = detail::sample_finite(f, {x.x, x.y, x.z - h});
    const double inv = 1.0 / (2.0 * h);
    return {(fyp.z - fym.z) * inv - (fzp.y - fzm.y) * inv,
            (fzp.x - fzm.x) * inv - (fxp.z - fxm.z) * inv,
            (fxp.y - fxm.y) * inv - (fyp.x - fym.x) * inv};
}

inline double divergence_fd(const VectorField& f, const Vec3& x, double h) {
    if (!(h > 0)) throw InvalidInput("divergence_fd: h must be > 0");
    const Vec3 fxp = detail::sample_finite(f, {x.x + h, x.y, x.z});
    const Vec3 fxm = detail::sample_finite(f, {x.x - h, x.y, x.z});
    const Vec3 fyp = detail::sample_finite(f, {x.x, x.y + h, x.z});
    const Vec3 fym = detail::sample_finite(f, {x.x, x.y - h, x.z});
    const Vec3 fzp = detail::sample_finite(f, {x.x, x.y, x.z + h});
    const Vec3 fzm = detail::sample_finite(f, {x.x, x.y, x.z - h});
    return ((fxp.x - fxm.x) + (fyp.y - fym.y) + (fzp.z - fzm.z)) / (2.0 * h);
}

inline Vec3 gradient_fd(const ScalarField& f, const Vec3& x, double h) {
    if (!(h > 0)) throw InvalidInput("gradient_fd: h must be > 0");
    const double inv = 1.0 / (2.0 * h);
    return {(f({x.x + h, x.y, x.z}) - f({x.x - h, x.y, x.z})) * inv,
            (f({x.x, x.y + h, x.z}) - f({x.x, x.y - h, x.z})) * inv,
            (f({x.x, x.y, x.z + h}) - f({x.x, x.y, x.z - h})) * inv};
}

}  // namespace abm
