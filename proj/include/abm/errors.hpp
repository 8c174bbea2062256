#pragma once

// errors.hpp -- exception hierarchy. Evaluation-domain errors signal that a
// field or kernel was asked for a value where the model is singular or
// undefined (on a filament, on the solenoid surface, ...); they map to CLI
// exit code 3. Config errors map to exit 2, physics-consistency failures
// to exit 4.

#include <stdexcept>
#include <string>

namespace abm {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments or violated type invariants detected at construction.
struct InvalidInput : Error {
    using Error::Error;
};

// Scene/config file problems (CLI exit 2).
struct ConfigError : Error {
    using Error::Error;
};

// Cross-formulation disagreement beyond tolerance (CLI exit 4).
struct PhysicsConsistencyError : Error {
    using Error::Error;
};

// Evaluation-domain errors (CLI exit 3).
struct EvaluationDomainError : Error {
    using Error::Error;
};

struct NonFiniteField : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct TooCloseToFilament : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct TooCloseToWire : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct OnSurface : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct SamePoint : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct ZeroSeparation : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct DegenerateGeometry : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct GeometryMismatch : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct UnpairableDiscretization : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct ChargeInsideSolenoid : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct InsideSolenoid : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct AsymmetricScene : EvaluationDomainError {
    using EvaluationDomainError::EvaluationDomainError;
};
struct EndpointMismatch : ConfigError {
    using ConfigError::ConfigError;
};
struct StepTooLarge : InvalidInput {
    using InvalidInput::InvalidInput;
};
struct MultivaluedGauge : InvalidInput {
    using InvalidInput::InvalidInput;
};

}  // namespace abm
