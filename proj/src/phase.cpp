#include "abm/phase.hpp"

#include <algorithm>
#include <cmath>

#include "abm/fields.hpp"

namespace abm {

double phase_along_path(double q, const BeamPath& path, const VectorField& A,
                        const QuadratureSpec& quad, const Constants& k) {
    if (path.vertices.size() < 2) throw InvalidInput("phase_along_path: path needs >= 2 vertices");
    return q / (k.c * k.hbar) * line_integral(A, Polyline{path.vertices}, quad);
}

Polyline closed_circuit(const BeamPath& path1, const BeamPath& path2) {
    if (path1.vertices.size() < 2 || path2.vertices.size() < 2)
        throw InvalidInput("closed_circuit: paths need >= 2 vertices");
    if (!(path1.vertices.front() == path2.vertices.front()) ||
        !(path1.vertices.back() == path2.vertices.back()))
        throw EndpointMismatch("paths must share exact start and end points");
    Polyline circuit;
    circuit.vertices = path1.vertices;
    for (std::size_t i = path2.vertices.size() - 1; i-- > 0;)
        circuit.vertices.push_back(path2.vertices[i]);
    return circuit;
}

int winding_number(const Polyline& circuit, const Vec3& axis_point, const Vec3& axis_dir) {
    const Vec3 n = axis_dir.normalized();
    const Vec3 u = any_perpendicular(n);
    const Vec3 v = cross(n, u);
    double total = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < circuit.vertices.size(); ++i) {
        const Vec3 rel = circuit.vertices[i] - axis_point;
        const double a = std::atan2(dot(rel, v), dot(rel, u));
        if (i > 0) {
            double d = a - prev;
            while (d > pi) d -= two_pi;
            while (d < -pi) d += two_pi;
            total += d;
        }
        prev = a;
    }
    return static_cast<int>(std::lround(total / two_pi));
}

PhaseResult phase_difference(double q, const BeamPath& path1, const BeamPath& path2,
                             const VectorField& A, const QuadratureSpec& quad, const Constants& k,
                             std::optional<double> analytic_flux) {
    const Polyline circuit = closed_circuit(path1, path2);
    const double circulation = line_integral(A, circuit, quad);
    PhaseResult res;
    res.phi_path1 = phase_along_path(q, path1, A, quad, k);
    res.phi_path2 = phase_along_path(q, path2, A, quad, k);
    res.delta_phi = q / (k.c * k.hbar) * circulation;
    // By Stokes the circulation of A is the enclosed flux; an independent
    // analytic value takes precedence when the caller has one.
    res.enclosed_flux = analytic_flux.value_or(circulation);
    return res;
}

double gauge_invariance_check(double q, const BeamPath& path1, const BeamPath& path2,
                              const VectorField& A, const GaugeField& chi,
                              const QuadratureSpec& quad, const Constants& k) {
    if (!chi.value || !chi.gradient) throw InvalidInput("gauge_invariance_check: incomplete gauge");
    const Polyline circuit = closed_circuit(path1, path2);

    // A multivalued gauge shows up as a nonzero circulation of its gradient.
    double grad_scale = 0.0;
    for (const Vec3& p : circuit.vertices) grad_scale = std::max(grad_scale, chi.gradient(p).norm());
    const double circ = line_integral(chi.gradient, circuit, quad);
    const double circ_tol = 1e-6 * (circuit.length() * grad_scale + 1e-30);
    if (std::fabs(circ) > circ_tol)
        throw MultivaluedGauge(
            "gauge function is not single-valued (nonzero gradient circulation around the circuit)");

    const VectorField shifted = [&](const Vec3& p) { return A(p) + chi.gradient(p); };
    const double d0 = phase_difference(q, path1, path2, A, quad, k).delta_phi;
    const double d1 = phase_difference(q, path1, path2, shifted, quad, k).delta_phi;
    return std::fabs(d1 - d0);
}

AxialWireCheck axial_wire_flux_check(const Solenoid& s, double q, const BeamPath& path1,
                                     const BeamPath& path2, const QuadratureSpec& quad,
                                     const Constants& k) {
    Solenoid with_wire = s;
    with_wire.include_axial_wire = true;
    const std::optional<StraightWire> wire = solenoid_axial_wire(with_wire);

    const VectorField A_solenoid = [&](const Vec3& p) { return solenoid_A_analytic(s, p, k); };
    const VectorField A_with = [&](const Vec3& p) {
        return solenoid_A_analytic(s, p, k) + wire_A_analytic(*wire, p, k);
    };
    const VectorField A_wire_only = [&](const Vec3& p) { return wire_A_analytic(*wire, p, k); };

    AxialWireCheck out;
    // Circulation of the wire's A = flux of its azimuthal B through the
    // surface spanned by the two paths.
    out.wire_flux = line_integral(A_wire_only, closed_circuit(path1, path2), quad);
    out.delta_phi_with = phase_difference(q, path1, path2, A_with, quad, k).delta_phi;
    out.delta_phi_without = phase_difference(q, path1, path2, A_solenoid, quad, k).delta_phi;
    return out;
}

void FringeSpec::validate() const {
    if (!(wavelength > 0)) throw InvalidInput("FringeSpec: wavelength must be > 0");
    if (!(slit_separation > 0)) throw InvalidInput("FringeSpec: slit_separation must be > 0");
    if (!(screen_distance > 0)) throw InvalidInput("FringeSpec: screen_distance must be > 0");
    if (screen_samples < 1) throw InvalidInput("FringeSpec: screen_samples must be >= 1");
    if (screen_distance < 100.0 * slit_separation)
        throw InvalidInput("FringeSpec: far-field contract requires D >= 100 d");
}

FringeTable fringe_pattern(const FringeSpec& spec, double delta_phi) {
    spec.validate();
    FringeTable table;
    table.fringe_spacing = spec.wavelength * spec.screen_distance / spec.slit_separation;
    table.displacement = delta_phi / two_pi * table.fringe_spacing;

    // Reduce modulo 2 pi so the sampled pattern is exactly periodic.
    const double reduced = std::remainder(delta_phi, two_pi);
    const double half_phase = 0.5 * reduced;
    const double freq = pi * spec.slit_separation / (spec.wavelength * spec.screen_distance);
    const double y_max = 5.0 * table.fringe_spacing;

    const int n = spec.screen_samples;
    table.y.resize(static_cast<std::size_t>(n));
    table.intensity.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // symmetric sampling: the midpoint of an odd count lands exactly on 0
        const double y = (n == 1) ? 0.0 : y_max * ((2.0 * i - (n - 1)) / (n - 1));
        const double c = std::cos(freq * y + half_phase);
        table.y[static_cast<std::size_t>(i)] = y;
        table.intensity[static_cast<std::size_t>(i)] = c * c;
    }
    return table;
}

std::pair<BeamPath, BeamPath> semicircle_pair(const Vec3& center, double radius, const Vec3& normal,
                                              int segments_per_path) {
    if (!(radius > 0)) throw InvalidInput("semicircle_pair: radius must be > 0");
    if (segments_per_path < 2) throw InvalidInput("semicircle_pair: need >= 2 segments per path");
    const Vec3 n = normal.normalized();
    const Vec3 u = any_perpendicular(n);
    const Vec3 v = cross(n, u);

    const Vec3 start = center + u * radius;
    const Vec3 end = center - u * radius;

    auto arc = [&](double sign) {
        BeamPath path;
        path.vertices.reserve(static_cast<std::size_t>(segments_per_path) + 1);
        path.vertices.push_back(start);
        for (int i = 1; i < segments_per_path; ++i) {
            const double th = sign * pi * i / segments_per_path;
            path.vertices.push_back(center + u * (radius * std::cos(th)) + v * (radius * std::sin(th)));
        }
        path.vertices.push_back(end);  // exact shared endpoint
        return path;
    };
    return {arc(+1.0), arc(-1.0)};
}

}  // namespace abm
