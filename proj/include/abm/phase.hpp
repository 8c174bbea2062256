#pragma once

// phase.hpp -- Aharonov-Bohm phase shifts from path integrals of A and
// enclosed flux, gauge-invariance and axial-wire checks, and the two-beam
// fringe model.

#include <functional>
#include <optional>
#include <vector>

#include "abm/constants.hpp"
#include "abm/errors.hpp"
#include "abm/quadrature.hpp"
#include "abm/sources.hpp"
#include "abm/vec3.hpp"

namespace abm {

struct BeamPath {
    std::vector<Vec3> vertices;  // >= 2; partner paths share endpoints exactly
    bool operator==(const BeamPath&) const = default;
};

struct PhaseResult {
    double phi_path1 = 0.0;      // [rad]
    double phi_path2 = 0.0;      // [rad]
    double delta_phi = 0.0;      // [rad]
    double enclosed_flux = 0.0;  // [G cm^2]
};

// phi = (q / c hbar) * integral of A . dx along the path.
double phase_along_path(double q, const BeamPath& path, const VectorField& A,
                        const QuadratureSpec& quad, const Constants& k);

// Delta phi = (q / c hbar) * circulation of A over path1 followed by
// reversed path2. enclosed_flux is the same circulation (Stokes) unless an
// independently computed analytic flux is supplied.
PhaseResult phase_difference(double q, const BeamPath& path1, const BeamPath& path2,
                             const VectorField& A, const QuadratureSpec& quad, const Constants& k,
                             std::optional<double> analytic_flux = std::nullopt);

// Closed circuit formed by path1 followed by path2 reversed.
Polyline closed_circuit(const BeamPath& path1, const BeamPath& path2);

// Net winding of the circuit around the axis, rounded to the nearest integer.
int winding_number(const Polyline& circuit, const Vec3& axis_point, const Vec3& axis_dir);

// A single-valued gauge function with its analytic gradient.
struct GaugeField {
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> gradient;
};

// Returns |delta_phi(A + grad chi) - delta_phi(A)|. Multivalued gauges
// (nonzero gradient circulation around the circuit) are rejected with
// MultivaluedGauge.
double gauge_invariance_check(double q, const BeamPath& path1, const BeamPath& path2,
                              const VectorField& A, const GaugeField& chi,
                              const QuadratureSpec& quad, const Constants& k);

struct AxialWireCheck {
    double wire_flux = 0.0;        // flux of the wire's B through the beam-plane surface
    double delta_phi_with = 0.0;   // axial wire included
    double delta_phi_without = 0.0;
};

// Paths lie in a plane perpendicular to the solenoid axis, so the wire's
// azimuthal B has no flux through the spanned surface and toggling the wire
// leaves delta phi unchanged.
AxialWireCheck axial_wire_flux_check(const Solenoid& s, double q, const BeamPath& path1,
                                     const BeamPath& path2, const QuadratureSpec& quad,
                                     const Constants& k);

struct FringeSpec {
    double wavelength = 5e-10;       // lambda_dB [cm]
    double slit_separation = 1e-4;   // d [cm]
    double screen_distance = 100.0;  // D [cm]
    int screen_samples = 801;

    void validate() const;
    bool operator==(const FringeSpec&) const = default;
};

struct FringeTable {
    std::vector<double> y;          // screen coordinate [cm]
    std::vector<double> intensity;  // cos^2(pi d y / (lambda D) + delta_phi / 2)
    double fringe_spacing = 0.0;    // lambda D / d [cm]
    double displacement = 0.0;      // (delta_phi / 2 pi) * lambda D / d [cm]
};

// Scalar two-beam model with equal amplitudes, sampled over +-5 fringes.
// The phase offset is reduced modulo 2 pi before sampling, so the pattern
// is exactly periodic in delta_phi.
FringeTable fringe_pattern(const FringeSpec& spec, double delta_phi);

// Two semicircular beam paths around center in the plane perpendicular to
// normal, sharing exact endpoints at center +- radius * e1. path1 runs
// through +e2, path2 through -e2; the closed circuit winds once
// counterclockwise with respect to normal.
std::pair<BeamPath, BeamPath> semicircle_pair(const Vec3& center, double radius,
                                              const Vec3& normal, int segments_per_path);

}  // namespace abm
