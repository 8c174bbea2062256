#pragma once

// constants.hpp -- physical constants in Gaussian (cgs) units, plus a
// natural-unit mode (c = hbar = 1) used by test fixtures.

#include <numbers>

namespace abm {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class UnitMode { gaussian, natural };

struct Constants {
    double c = 2.99792458e10;        // speed of light [cm/s]
    double hbar = 1.054571817e-27;   // reduced Planck constant [erg s]
    UnitMode mode = UnitMode::gaussian;

    static constexpr Constants gaussian() { return {2.99792458e10, 1.054571817e-27, UnitMode::gaussian}; }
    static constexpr Constants natural() { return {1.0, 1.0, UnitMode::natural}; }

    bool operator==(const Constants&) const = default;
};

}  // namespace abm
