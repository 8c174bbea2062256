#include <doctest.h>

#include <cmath>

#include "abm/constants.hpp"
#include "abm/fields.hpp"
#include "abm/phase.hpp"
#include "test_util.hpp"

using namespace abm;
using testutil::rel_diff;

namespace {

const Constants nat = Constants::natural();
const QuadratureSpec fine_quad{QuadratureRule::gauss_legendre, 12, 1e-9};

Solenoid make_solenoid(double r = 1.0, double M = 1.0, double I = 1.0) {
    Solenoid s;
    s.radius = r;
    s.loops_per_length = M;
    s.length = 1000.0;
    s.current = I;
    return s;
}

VectorField solenoid_A(const Solenoid& s) {
    return [s](const Vec3& p) { return solenoid_A_analytic(s, p, nat); };
}

}  // namespace

TEST_CASE("phase along a path") {
    const BeamPath straight{{{0, 0, 0}, {2, 0, 0}}};
    const VectorField zero = [](const Vec3&) { return Vec3{}; };
    CHECK(phase_along_path(1.0, straight, zero, fine_quad, nat) == 0.0);
    const VectorField uniform = [](const Vec3&) { return Vec3{1, 0, 0}; };
    CHECK(phase_along_path(0.0, straight, uniform, fine_quad, nat) == 0.0);
    CHECK(rel_diff(phase_along_path(1.0, straight, uniform, fine_quad, nat), 2.0) <= 1e-14);
}

TEST_CASE("phase difference equals q Phi / (c hbar)") {
    const Solenoid s = make_solenoid();
    const auto [p1, p2] = semicircle_pair({0, 0, 0}, 2.0, {0, 0, 1}, 512);
    const double flux = solenoid_flux(s, nat);  // pi r^2 (4 pi I M / c)
    const PhaseResult res = phase_difference(1.0, p1, p2, solenoid_A(s), fine_quad, nat, flux);
    CHECK(rel_diff(res.delta_phi, flux) <= 1e-6);  // q = c = hbar = 1
    CHECK(res.enclosed_flux == flux);
    CHECK(rel_diff(res.delta_phi, res.phi_path1 - res.phi_path2) <= 1e-12);
}

TEST_CASE("no enclosed solenoid, no phase difference") {
    Solenoid s = make_solenoid(0.2);
    s.center = {6.0, 0, 0};  // outside the region between the paths
    const auto [p1, p2] = semicircle_pair({0, 0, 0}, 2.0, {0, 0, 1}, 256);
    const PhaseResult res = phase_difference(1.0, p1, p2, solenoid_A(s), fine_quad, nat);
    const double scale = solenoid_flux(s, nat);  // q Phi / (c hbar) for an enclosing circuit
    CHECK(std::fabs(res.delta_phi) <= 1e-9 * scale);
}

TEST_CASE("flux-quantum fixture gives delta phi = 2 pi") {
    const Solenoid s = make_solenoid();
    const double flux = solenoid_flux(s, nat);
    const double q = two_pi / flux;  // Phi = 2 pi c hbar / q
    const auto [p1, p2] = semicircle_pair({0, 0, 0}, 2.0, {0, 0, 1}, 512);
    const PhaseResult res = phase_difference(q, p1, p2, solenoid_A(s), fine_quad, nat);
    CHECK(std::fabs(res.delta_phi - two_pi) <= 1e-12 * two_pi);
}

TEST_CASE("endpoint mismatch is rejected") {
    const BeamPath p1{{{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}}};
    const BeamPath p2{{{1, 0, 0}, {0, -1, 0}, {-1, 1e-12, 0}}};
    const VectorField zero = [](const Vec3&) { return Vec3{}; };
    CHECK_THROWS_AS(phase_difference(1.0, p1, p2, zero, fine_quad, nat), EndpointMismatch);
}

TEST_CASE("gauge invariance") {
    const Solenoid s = make_solenoid();
    const auto [p1, p2] = semicircle_pair({0, 0, 0}, 2.0, {0, 0, 1}, 256);

    const GaugeField constant{[](const Vec3&) { return 3.5; }, [](const Vec3&) { return Vec3{}; }};
    CHECK(gauge_invariance_check(1.0, p1, p2, solenoid_A(s), constant, fine_quad, nat) == 0.0);

    // chi = x^2 y
    const GaugeField poly{[](const Vec3& p) { return p.x * p.x * p.y; },
                          [](const Vec3& p) { return Vec3{2 * p.x * p.y, p.x * p.x, 0}; }};
    const double dphi = phase_difference(1.0, p1, p2, solenoid_A(s), fine_quad, nat).delta_phi;
    CHECK(gauge_invariance_check(1.0, p1, p2, solenoid_A(s), poly, fine_quad, nat) <=
          1e-10 * std::max(1.0, std::fabs(dphi)));

    // multivalued gauge (azimuthal angle) is invalid input
    const GaugeField azimuthal{
        [](const Vec3& p) { return std::atan2(p.y, p.x); },
        [](const Vec3& p) {
            const double r2 = p.x * p.x + p.y * p.y;
            return Vec3{-p.y / r2, p.x / r2, 0};
        }};
    CHECK_THROWS_AS(gauge_invariance_check(1.0, p1, p2, solenoid_A(s), azimuthal, fine_quad, nat),
                    MultivaluedGauge);
}

TEST_CASE("axial wire leaves the phase untouched") {
    const Solenoid s = make_solenoid();
    const auto [p1, p2] = semicircle_pair({0, 0, 0}, 2.0, {0, 0, 1}, 256);
    const AxialWireCheck res = axial_wire_flux_check(s, 1.0, p1, p2, fine_quad, nat);
    CHECK(std::fabs(res.wire_flux) <= 1e-10);
    CHECK(rel_diff(res.delta_phi_with, res.delta_phi_without) <= 1e-9);

    // the wire alone encloses no flux through the beam plane
    StraightWire wire;
    wire.point = {0, 0, 0};
    wire.direction = {0, 0, 1};
    wire.current = 1.0;
    const VectorField A_wire = [&](const Vec3& p) { return wire_A_analytic(wire, p, nat); };
    const PhaseResult alone = phase_difference(1.0, p1, p2, A_wire, fine_quad, nat);
    CHECK(std::fabs(alone.delta_phi) <= 1e-9);

    // doubling the wire current still changes nothing
    wire.current = 2.0;
    const PhaseResult doubled = phase_difference(1.0, p1, p2, A_wire, fine_quad, nat);
    CHECK(std::fabs(doubled.delta_phi) <= 1e-9);
}

TEST_CASE("phase is path independent within a flux class") {
    const Solenoid s = make_solenoid();
    const auto [p1, p2] = semicircle_pair({0, 0, 0}, 2.0, {0, 0, 1}, 256);
    // deform path1 outward without crossing the solenoid
    BeamPath bulged = p1;
    for (std::size_t i = 1; i + 1 < bulged.vertices.size(); ++i) {
        Vec3& v = bulged.vertices[i];
        const double scale = 1.0 + 0.35 * std::sin(pi * i / (bulged.vertices.size() - 1.0));
        v = Vec3{v.x * scale, v.y * scale, v.z};
    }
    const double d1 = phase_difference(1.0, p1, p2, solenoid_A(s), fine_quad, nat).delta_phi;
    const double d2 = phase_difference(1.0, bulged, p2, solenoid_A(s), fine_quad, nat).delta_phi;
    CHECK(rel_diff(d1, d2) <= 1e-9);
}

TEST_CASE("reversing the solenoid current negates the phase exactly") {
    const Solenoid s = make_solenoid();
    Solenoid rev = s;
    rev.current = -s.current;
    const auto [p1, p2] = semicircle_pair({0, 0, 0}, 2.0, {0, 0, 1}, 128);
    const double d_fwd = phase_difference(1.0, p1, p2, solenoid_A(s), fine_quad, nat).delta_phi;
    const double d_rev = phase_difference(1.0, p1, p2, solenoid_A(rev), fine_quad, nat).delta_phi;
    CHECK(d_rev == -d_fwd);
}

TEST_CASE("winding number") {
    const Polyline ccw = circle_path({0, 0, 0}, 2.0, {0, 0, 1}, 64);
    CHECK(winding_number(ccw, {0, 0, 0}, {0, 0, 1}) == 1);
    CHECK(winding_number(ccw, {5, 0, 0}, {0, 0, 1}) == 0);
}

TEST_CASE("fringe pattern: center, half shift, periodicity") {
    FringeSpec spec;
    spec.screen_samples = 401;

    const FringeTable flat = fringe_pattern(spec, 0.0);
    const std::size_t mid = flat.y.size() / 2;
    CHECK(flat.y[mid] == 0.0);
    CHECK(flat.intensity[mid] == 1.0);
    CHECK(flat.displacement == 0.0);

    const FringeTable half = fringe_pattern(spec, pi);
    CHECK(half.intensity[mid] <= 1e-12);
    CHECK(rel_diff(half.displacement, 0.5 * half.fringe_spacing) <= 1e-15);

    // exact 2 pi periodicity at the sample points
    const FringeTable shifted = fringe_pattern(spec, two_pi);
    for (std::size_t i = 0; i < flat.intensity.size(); ++i)
        CHECK(shifted.intensity[i] == flat.intensity[i]);
    const FringeTable a = fringe_pattern(spec, 1.234);
    const FringeTable b = fringe_pattern(spec, 1.234 + two_pi);
    for (std::size_t i = 0; i < a.intensity.size(); ++i)
        CHECK(std::fabs(a.intensity[i] - b.intensity[i]) <= 1e-12);
}

TEST_CASE("fringe spec contract") {
    FringeSpec bad;
    bad.screen_distance = 50 * bad.slit_separation;
    CHECK_THROWS_AS(fringe_pattern(bad, 0.0), InvalidInput);
    FringeSpec neg;
    neg.wavelength = -1.0;
    CHECK_THROWS_AS(fringe_pattern(neg, 0.0), InvalidInput);
}

TEST_CASE("consistency: delta phi vs independently enclosed flux") {
    const Solenoid s = make_solenoid(0.7, 3.0, 2.0);
    const auto [p1, p2] = semicircle_pair({0, 0, 0}, 2.5, {0, 0, 1}, 512);
    const PhaseResult res = phase_difference(0.8, p1, p2, solenoid_A(s), fine_quad, nat);
    CHECK(rel_diff(res.delta_phi, 0.8 * res.enclosed_flux / (nat.c * nat.hbar)) <= 1e-6);
}
