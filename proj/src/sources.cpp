#include "abm/sources.hpp"

#include <cmath>
#include <sstream>

namespace abm {

namespace {
constexpr double axis_tol = 1e-12;

void require_unit(const Vec3& v, const char* what) {
    if (std::fabs(v.norm() - 1.0) > axis_tol) {
        std::ostringstream os;
        os << what << " must be a unit vector, got norm " << v.norm();
        throw InvalidInput(os.str());
    }
}
}  // namespace

void validate_drift(const DriftParams& drift, double loop_current) {
    const double I = drift.current();
    const double scale = std::fabs(loop_current) + std::fabs(I);
    if (std::fabs(I - loop_current) > 1e-12 * (scale > 0 ? scale : 1.0)) {
        std::ostringstream os;
        os << "drift parameters give current " << I << " but the loop carries " << loop_current
           << " (I = n e v_d sigma must hold)";
        throw InvalidInput(os.str());
    }
}

void RectangularLoop::validate() const {
    if (!(arm_length_s > 0)) throw DegenerateGeometry("RectangularLoop: arm_length_s must be > 0");
    if (!(half_gap_r > 0)) throw DegenerateGeometry("RectangularLoop: half_gap_r must be > 0");
    require_unit(normal, "RectangularLoop normal");
    require_unit(arm_axis, "RectangularLoop arm_axis");
    if (std::fabs(dot(normal, arm_axis)) > axis_tol)
        throw InvalidInput("RectangularLoop: normal and arm_axis must be orthogonal");
    validate_drift(drift, current);
}

void CircularLoop::validate() const {
    if (!(radius > 0)) throw DegenerateGeometry("CircularLoop: radius must be > 0");
    require_unit(normal, "CircularLoop normal");
    validate_drift(drift, current);
}

long Solenoid::loop_count() const { return std::lround(loops_per_length * length); }

void Solenoid::validate() const {
    if (!(radius > 0)) throw InvalidInput("Solenoid: radius must be > 0");
    if (!(loops_per_length > 0)) throw InvalidInput("Solenoid: loops_per_length must be > 0");
    if (!(length > 0)) throw InvalidInput("Solenoid: length must be > 0");
    require_unit(axis, "Solenoid axis");
    if (loop_count() < 1) throw InvalidInput("Solenoid: round(M L) must be >= 1");
}

void StraightWire::validate() const {
    require_unit(direction, "StraightWire direction");
    if (!(guard_radius > 0)) throw InvalidInput("StraightWire: guard_radius must be > 0");
}

std::vector<CircuitElement> discretize(const RectangularLoop& loop, int elements_per_side) {
    loop.validate();
    if (elements_per_side < 1) throw InvalidInput("discretize: need >= 1 element per side");

    const Vec3 u = loop.arm_axis;
    const Vec3 w = loop.gap_axis();
    const double s = loop.arm_length_s;
    const double r = loop.half_gap_r;
    const int n = elements_per_side;

    std::vector<CircuitElement> out;
    out.reserve(4 * static_cast<std::size_t>(n));

    // Centered offsets (2j + 1 - n) * (len / 2n) negate exactly under
    // j -> n-1-j, making the discretization centrally symmetric to
    // round-off: element i mirrors element i + 2n (mod 4n).
    auto centered = [n](int j, double len) { return (2 * j + 1 - n) * (len / (2 * n)); };

    auto add_side = [&](const Vec3& along, double len, const Vec3& offset) {
        for (int j = 0; j < n; ++j) {
            CircuitElement e;
            e.position = loop.center + offset + along * centered(j, len);
            e.tangent = along;
            e.dl = len / n;
            e.current = loop.current;
            e.drift = loop.drift;
            out.push_back(e);
        }
    };

    add_side(u, s, w * -r);           // DA: near arm, drift along +u
    add_side(w, 2.0 * r, u * (s / 2.0));  // AB
    add_side(-u, s, w * r);           // BC
    add_side(-w, 2.0 * r, u * (-s / 2.0));  // CD
    return out;
}

std::vector<CircuitElement> discretize(const CircularLoop& loop, int elements_total) {
    loop.validate();
    if (elements_total < 8) throw InvalidInput("discretize: circular loops need >= 8 elements");

    const int n = elements_total;
    const Vec3 u = any_perpendicular(loop.normal);
    const Vec3 v = cross(loop.normal, u);

    // Polygon vertices; for even n the second half is the exact point
    // reflection of the first.
    std::vector<Vec3> verts(static_cast<std::size_t>(n));
    const int half = n / 2;
    for (int i = 0; i < n; ++i) {
        if (n % 2 == 0 && i >= half) {
            verts[static_cast<std::size_t>(i)] =
                loop.center - (verts[static_cast<std::size_t>(i - half)] - loop.center);
        } else {
            const double th = two_pi * i / n;
            verts[static_cast<std::size_t>(i)] =
                loop.center + u * (loop.radius * std::cos(th)) + v * (loop.radius * std::sin(th));
        }
    }

    std::vector<CircuitElement> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Vec3 a = verts[static_cast<std::size_t>(i)];
        const Vec3 b = verts[static_cast<std::size_t>((i + 1) % n)];
        const Vec3 chord = b - a;
        CircuitElement e;
        e.dl = chord.norm();
        e.tangent = chord / e.dl;
        e.position = a + chord * 0.5;
        e.current = loop.current;
        e.drift = loop.drift;
        out.push_back(e);
    }
    return out;
}

std::vector<CircularLoop> solenoid_to_loops(const Solenoid& s) {
    s.validate();
    const long n = s.loop_count();
    const double spacing = s.loop_spacing();
    std::vector<CircularLoop> loops;
    loops.reserve(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
        CircularLoop loop;
        loop.center = s.center + s.axis * ((2 * k + 1 - n) * (spacing / 2.0));
        loop.radius = s.radius;
        loop.normal = s.axis;
        loop.current = s.current;
        loop.drift = DriftParams::for_current(s.current);
        loops.push_back(loop);
    }
    return loops;
}

std::optional<StraightWire> solenoid_axial_wire(const Solenoid& s) {
    if (!s.include_axial_wire) return std::nullopt;
    StraightWire w;
    w.point = s.center;
    w.direction = s.axis;
    w.current = s.current;
    return w;
}

Vec3 dipole_moment(const RectangularLoop& loop, const Constants& k) {
    return loop.area_vector() * (loop.current / k.c);
}

Vec3 dipole_moment(const CircularLoop& loop, const Constants& k) {
    return loop.area_vector() * (loop.current / k.c);
}

SolenoidElements::SolenoidElements(const Solenoid& s, int elements_per_loop) {
    s.validate();
    CircularLoop proto;
    proto.center = Vec3{};
    proto.radius = s.radius;
    proto.normal = s.axis;
    proto.current = s.current;
    proto.drift = DriftParams::for_current(s.current);
    const std::vector<CircuitElement> ring = discretize(proto, elements_per_loop);

    center_ = s.center;
    axis_ = s.axis;
    n_loops_ = s.loop_count();
    spacing_ = s.loop_spacing();
    current_ = s.current;
    drift_ = proto.drift;
    dl_ = ring.front().dl;
    template_positions_.reserve(ring.size());
    template_tangents_.reserve(ring.size());
    for (const CircuitElement& e : ring) {
        template_positions_.push_back(e.position);
        template_tangents_.push_back(e.tangent);
    }
}

Vec3 SolenoidElements::loop_center(long k) const {
    return center_ + axis_ * ((2 * k + 1 - n_loops_) * (spacing_ / 2.0));
}

}  // namespace abm
