#pragma once

// sources.hpp -- geometric description and filament discretization of
// charges, current loops, solenoids, and straight wires. Loops are
// infinitely thin filaments; the wire cross-section enters only through
// the drift-parameter bookkeeping (I = n e v_d sigma).

#include <concepts>
#include <cstddef>
#include <optional>
#include <vector>

#include "abm/constants.hpp"
#include "abm/errors.hpp"
#include "abm/vec3.hpp"

namespace abm {

// Current-carrier bookkeeping for one filament. Carrier sign is free:
// negating carrier_charge and drift_speed together leaves the current and
// every momentum formula unchanged.
struct DriftParams {
    double carrier_density = 1.0;  // n [cm^-3]
    double carrier_charge = 1.0;   // e [esu]
    double cross_section = 1.0;    // sigma [cm^2]
    double drift_speed = 0.0;      // v_d [cm/s], along the local current direction

    static DriftParams for_current(double current) { return {1.0, 1.0, 1.0, current}; }

    double current() const { return carrier_density * carrier_charge * cross_section * drift_speed; }
    // Linear charge density of carriers along the filament [esu/cm].
    double line_charge_density() const { return carrier_density * carrier_charge * cross_section; }

    bool operator==(const DriftParams&) const = default;
};

void validate_drift(const DriftParams& drift, double loop_current);

struct PointCharge {
    double q = 0.0;   // [esu]
    Vec3 position;    // [cm]
    double mass = 0.0;  // [g]; required only by free-motion dynamics
    Vec3 velocity;    // [cm/s]

    bool operator==(const PointCharge&) const = default;
};

// Rectangular loop: two arms of length arm_length_s run along arm_axis,
// sitting at -/+ half_gap_r along gap_axis() = normal x arm_axis (gap 2 r
// between them); two cross arms of length 2 r close the circuit. Area
// vector = 2 s r normal; the current circulates counterclockwise with
// respect to normal (drift along +arm_axis in the arm at -half_gap_r).
struct RectangularLoop {
    Vec3 center;
    double arm_length_s = 0.0;  // s [cm]
    double half_gap_r = 0.0;    // r [cm], arms separated by 2 r
    Vec3 normal{0, 0, 1};
    Vec3 arm_axis{1, 0, 0};
    double current = 0.0;  // [statA]
    DriftParams drift = DriftParams::for_current(0.0);

    Vec3 gap_axis() const { return cross(normal, arm_axis); }
    double area() const { return 2.0 * arm_length_s * half_gap_r; }
    Vec3 area_vector() const { return normal * area(); }
    void validate() const;
    bool operator==(const RectangularLoop&) const = default;
};

struct CircularLoop {
    Vec3 center;
    double radius = 0.0;  // [cm]
    Vec3 normal{0, 0, 1};
    double current = 0.0;  // [statA]
    DriftParams drift = DriftParams::for_current(0.0);

    double area() const { return pi * radius * radius; }
    Vec3 area_vector() const { return normal * area(); }
    void validate() const;
    bool operator==(const CircularLoop&) const = default;
};

// Solenoid modeled as round(loops_per_length * length) planar circular
// loops stacked symmetrically about center along axis (no helical pitch);
// the helix's axial current component is represented solely by the
// optional axial wire.
struct Solenoid {
    Vec3 center;            // midpoint of the axis
    Vec3 axis{0, 0, 1};     // unit direction
    double radius = 0.0;    // r [cm]
    double loops_per_length = 0.0;  // M [cm^-1]
    double length = 0.0;    // L [cm]
    double current = 0.0;   // I [statA]
    bool include_axial_wire = false;

    long loop_count() const;
    double loop_spacing() const { return length / static_cast<double>(loop_count()); }
    void validate() const;
    bool operator==(const Solenoid&) const = default;
};

struct StraightWire {
    Vec3 point;             // any point on the wire
    Vec3 direction{0, 0, 1};  // unit direction of positive current
    double current = 0.0;   // [statA]
    double guard_radius = 1e-9;  // evaluations closer than this throw

    void validate() const;
    bool operator==(const StraightWire&) const = default;
};

// One discretized filament element: straight sub-segment of a circuit,
// located at its midpoint.
struct CircuitElement {
    Vec3 position;
    Vec3 tangent;   // unit, along the current
    double dl = 0.0;
    double current = 0.0;
    DriftParams drift;
};

// Any indexable, sized producer of CircuitElement. std::vector
// <CircuitElement> qualifies; SolenoidElements generates lazily.
template <class S>
concept ElementSource = requires(const S& s, std::size_t i) {
    { s.size() } -> std::convertible_to<std::size_t>;
    { s[i] } -> std::convertible_to<CircuitElement>;
};

// Elements traverse the loop in the current direction; for even counts the
// discretization is centrally symmetric to round-off, with the mirror of
// element i at index i + size/2 (mod size).
std::vector<CircuitElement> discretize(const RectangularLoop& loop, int elements_per_side);
std::vector<CircuitElement> discretize(const CircularLoop& loop, int elements_total);

std::vector<CircularLoop> solenoid_to_loops(const Solenoid& s);
std::optional<StraightWire> solenoid_axial_wire(const Solenoid& s);

// m = I a / c with a the loop's area vector.
Vec3 dipole_moment(const RectangularLoop& loop, const Constants& k);
Vec3 dipole_moment(const CircularLoop& loop, const Constants& k);

// Lazy element source for a discretized solenoid: one polygon template is
// shared by all loops and shifted along the axis. Loop k of element index
// i = k * per_loop + j sits at axis offset (2k + 1 - n_loops) * spacing/2.
class SolenoidElements {
public:
    SolenoidElements(const Solenoid& s, int elements_per_loop);

    std::size_t size() const { return static_cast<std::size_t>(n_loops_) * template_positions_.size(); }
    std::size_t per_loop() const { return template_positions_.size(); }
    long loops() const { return n_loops_; }
    double element_dl() const { return dl_; }
    Vec3 loop_center(long k) const;

    CircuitElement operator[](std::size_t i) const {
        const std::size_t per = template_positions_.size();
        const long k = static_cast<long>(i / per);
        const std::size_t j = i % per;
        CircuitElement e;
        e.position = loop_center(k) + template_positions_[j];
        e.tangent = template_tangents_[j];
        e.dl = dl_;
        e.current = current_;
        e.drift = drift_;
        return e;
    }

private:
    Vec3 center_;
    Vec3 axis_;
    long n_loops_ = 0;
    double spacing_ = 0.0;
    double dl_ = 0.0;
    double current_ = 0.0;
    DriftParams drift_;
    std::vector<Vec3> template_positions_;  // relative to the loop center
    std::vector<Vec3> template_tangents_;
};

}  // namespace abm
