#pragma once

// quadrature.hpp -- quadrature rules, polyline paths, and line integrals
// of vector fields along them.

#include <functional>
#include <vector>

#include "abm/errors.hpp"
#include "abm/vec3.hpp"

namespace abm {

enum class QuadratureRule { midpoint, gauss_legendre };

struct QuadratureSpec {
    QuadratureRule rule = QuadratureRule::midpoint;
    int n_points = 8;      // subdivisions (midpoint) or nodes (Gauss-Legendre) per segment
    double rel_tol = 1e-9;

    void validate() const {
        if (n_points < 1) throw InvalidInput("QuadratureSpec: n_points must be >= 1");
        if (!(rel_tol > 0)) throw InvalidInput("QuadratureSpec: rel_tol must be > 0");
    }

    bool operator==(const QuadratureSpec&) const = default;
};

// Nodes/weights on [-1, 1]. Nodes are ascending and exactly symmetric about 0.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

struct Polyline {
    std::vector<Vec3> vertices;

    std::size_t segment_count() const { return vertices.size() < 2 ? 0 : vertices.size() - 1; }
    bool closed() const { return vertices.size() >= 3 && vertices.front() == vertices.back(); }
    double length() const;
};

// Closed n-segment polygon inscribed in the circle of given radius around
// center, in the plane perpendicular to normal, traversed counterclockwise
// with respect to normal. For even n the second half is the exact point
// reflection of the first, so mirror-symmetry tests hold to round-off.
Polyline circle_path(const Vec3& center, double radius, const Vec3& normal, int n_segments);

using VectorField = std::function<Vec3(const Vec3&)>;
using ScalarField = std::function<double(const Vec3&)>;

// Integral of f . t ds along the polyline. Throws NonFiniteField if f is
// not finite at a quadrature node.
double line_integral(const VectorField& f, const Polyline& path, const QuadratureSpec& quad);

}  // namespace abm
