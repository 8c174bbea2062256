#include "abm/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "abm/constants.hpp"

namespace abm {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw InvalidInput("gauss_legendre: n must be >= 1");
    GaussLegendre gl;
    gl.nodes.assign(n, 0.0);
    gl.weights.assign(n, 0.0);
    if (n == 1) {
        gl.nodes[0] = 0.0;
        gl.weights[0] = 2.0;
        return gl;
    }
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton from the Chebyshev-type initial guess; roots land in (0, 1].
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const auto [p, d] = legendre(n, x);
            dp = d;
            const double dx = p / d;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const int hi = n - 1 - i;
        if (hi == i) {
            gl.nodes[i] = 0.0;  // middle node of odd rules is exactly 0
            gl.weights[i] = w;
        } else {
            gl.nodes[hi] = x;
            gl.nodes[i] = -x;  // exact mirror
            gl.weights[hi] = w;
            gl.weights[i] = w;
        }
    }
    return gl;
}

double Polyline::length() const {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) len += (vertices[i + 1] - vertices[i]).norm();
    return len;
}

Polyline circle_path(const Vec3& center, double radius, const Vec3& normal, int n_segments) {
    if (!(radius > 0)) throw InvalidInput("circle_path: radius must be > 0");
    if (n_segments < 3) throw InvalidInput("circle_path: need at least 3 segments");
    const Vec3 nhat = normal.normalized();
    if (nhat == Vec3{}) throw InvalidInput("circle_path: zero normal");
    const Vec3 u = any_perpendicular(nhat);
    const Vec3 v = cross(nhat, u);
    std::vector<Vec3> pts(static_cast<std::size_t>(n_segments) + 1);
    const int n = n_segments;
    const int half = n / 2;
    for (int i = 0; i < n; ++i) {
        if (n % 2 == 0 && i >= half) {
            // exact point reflection of the first half
            const Vec3 off = pts[static_cast<std::size_t>(i - half)] - center;
            pts[static_cast<std::size_t>(i)] = center - off;
        } else {
            const double th = two_pi * i / n;
            pts[static_cast<std::size_t>(i)] =
                center + u * (radius * std::cos(th)) + v * (radius * std::sin(th));
        }
    }
    pts[static_cast<std::size_t>(n)] = pts[0];
    return Polyline{std::move(pts)};
}

double line_integral(const VectorField& f, const Polyline& path, const QuadratureSpec& quad) {
    quad.validate();
    if (path.vertices.size() < 2) throw InvalidInput("line_integral: path needs >= 2 vertices");

    auto eval = [&](const Vec3& p, const Vec3& d) {
        const Vec3 v = f(p);
        if (!v.finite()) {
            std::ostringstream os;
            os << "non-finite field value at quadrature node " << p;
            throw NonFiniteField(os.str());
        }
        return dot(v, d);
    };

    double total = 0.0;
    if (quad.rule == QuadratureRule::midpoint) {
        const int n = quad.n_points;
        for (std::size_t s = 0; s + 1 < path.vertices.size(); ++s) {
            const Vec3 a = path.vertices[s];
            const Vec3 d = path.vertices[s + 1] - a;
            double seg = 0.0;
            for (int j = 0; j < n; ++j) {
                const double t = (j + 0.5) / n;
                seg += eval(a + d * t, d);
            }
            total += seg / n;
        }
    } else {
        const GaussLegendre gl = gauss_legendre(quad.n_points);
        for (std::size_t s = 0; s + 1 < path.vertices.size(); ++s) {
            const Vec3 a = path.vertices[s];
            const Vec3 d = path.vertices[s + 1] - a;
            double seg = 0.0;
            for (int j = 0; j < quad.n_points; ++j) {
                const double t = 0.5 * (gl.nodes[static_cast<std::size_t>(j)] + 1.0);
                seg += gl.weights[static_cast<std::size_t>(j)] * eval(a + d * t, d);
            }
            total += 0.5 * seg;
        }
    }
    return total;
}

}  // namespace abm
