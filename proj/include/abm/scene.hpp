#pragma once

// scene.hpp -- scene configuration: a single JSON document describing
// constants, sources, charges, and per-experiment blocks. Every physical
// quantity carries its unit in the key name (radius_cm, current_statA);
// unknown keys are rejected.

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "abm/constants.hpp"
#include "abm/dynamics.hpp"
#include "abm/errors.hpp"
#include "abm/phase.hpp"
#include "abm/quadrature.hpp"
#include "abm/sources.hpp"

namespace abm {

struct SolenoidSourceConfig {
    Solenoid solenoid;
    int elements_per_loop = 360;
    bool operator==(const SolenoidSourceConfig&) const = default;
};
struct RectSourceConfig {
    RectangularLoop loop;
    int elements_per_side = 400;
    bool operator==(const RectSourceConfig&) const = default;
};
struct CircSourceConfig {
    CircularLoop loop;
    int elements = 720;
    bool operator==(const CircSourceConfig&) const = default;
};
struct WireSourceConfig {
    StraightWire wire;
    bool operator==(const WireSourceConfig&) const = default;
};
using SourceConfig =
    std::variant<SolenoidSourceConfig, RectSourceConfig, CircSourceConfig, WireSourceConfig>;

struct PhasePathsConfig {
    BeamPath path1;
    BeamPath path2;
    bool operator==(const PhasePathsConfig&) const = default;
};

struct RampConfig {
    RampProfile profile;
    double dt = 0.0;  // 0 selects duration / 10^4
    ChargeMode mode = ChargeMode::frozen;
    bool operator==(const RampConfig&) const = default;
};

struct GridConfig {
    Vec3 min;
    Vec3 max;
    std::array<int, 3> counts{1, 1, 1};
    bool operator==(const GridConfig&) const = default;
};

struct SceneConfig {
    Constants constants = Constants::gaussian();
    QuadratureSpec quadrature;
    std::vector<SourceConfig> sources;
    std::vector<PointCharge> charges;
    std::optional<PhasePathsConfig> phase;
    std::optional<FringeSpec> fringe;
    std::optional<RampConfig> ramp;
    std::optional<GridConfig> field_grid;
};

bool scene_equal(const SceneConfig& a, const SceneConfig& b);

// Parse/serialize. parse_scene throws ConfigError naming the offending key.
SceneConfig parse_scene(const std::string& json_text);
SceneConfig load_scene_file(const std::string& path);
std::string scene_to_json(const SceneConfig& config);

// Total fields of the scene: analytic evaluators for solenoids (plus their
// axial wires) and straight wires, numeric filament sums for loops.
VectorField scene_A_field(const SceneConfig& config);
VectorField scene_B_field(const SceneConfig& config);
// Coulomb field of all point charges.
VectorField scene_E_field(const SceneConfig& config);

}  // namespace abm
