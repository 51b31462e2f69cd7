#pragma once

#include <stdexcept>
#include <string>

namespace mdof {

struct ZeroVector : std::runtime_error {
    explicit ZeroVector(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonQubitSpace : std::runtime_error {
    explicit NonQubitSpace(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonHermitianObservable : std::runtime_error {
    explicit NonHermitianObservable(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonPolarizationInput : std::runtime_error {
    explicit NonPolarizationInput(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParamOutOfRange : std::invalid_argument {
    explicit ParamOutOfRange(const std::string& msg) : std::invalid_argument(msg) {}
};

struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& msg) : std::out_of_range(msg) {}
};

struct DuplicateTarget : std::invalid_argument {
    explicit DuplicateTarget(const std::string& msg) : std::invalid_argument(msg) {}
};

struct UnsupportedStateShape : std::runtime_error {
    explicit UnsupportedStateShape(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonPositiveInput : std::invalid_argument {
    explicit NonPositiveInput(const std::string& msg) : std::invalid_argument(msg) {}
};

struct EmptySpectrum : std::invalid_argument {
    explicit EmptySpectrum(const std::string& msg) : std::invalid_argument(msg) {}
};

struct InconsistentIntensities : std::runtime_error {
    explicit InconsistentIntensities(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownExperiment : std::invalid_argument {
    explicit UnknownExperiment(const std::string& msg) : std::invalid_argument(msg) {}
};

struct InvalidOverride : std::invalid_argument {
    explicit InvalidOverride(const std::string& msg) : std::invalid_argument(msg) {}
};

struct CalibrationOutOfRange : std::runtime_error {
    explicit CalibrationOutOfRange(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoFailure : std::runtime_error {
    explicit IoFailure(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mdof
