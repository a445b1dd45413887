#pragma once

#include <stdexcept>
#include <string>

namespace billiards {

// Geometry-level failures (bad domains, queries off the boundary, ...).
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoHitError : GeometryError {
    explicit NoHitError(const std::string& msg) : GeometryError(msg) {}
};

struct DegenerateDirectionError : GeometryError {
    explicit DegenerateDirectionError(const std::string& msg) : GeometryError(msg) {}
};

struct NotOnBoundaryError : GeometryError {
    explicit NotOnBoundaryError(const std::string& msg) : GeometryError(msg) {}
};

struct NonRegularPointError : GeometryError {
    explicit NonRegularPointError(const std::string& msg) : GeometryError(msg) {}
};

struct UnsupportedDimensionError : GeometryError {
    explicit UnsupportedDimensionError(const std::string& msg) : GeometryError(msg) {}
};

struct OutOfRangeError : std::out_of_range {
    explicit OutOfRangeError(const std::string& msg) : std::out_of_range(msg) {}
};

// Sampler / chain failures.
struct StuckAtCornerError : std::runtime_error {
    explicit StuckAtCornerError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TimeOutOfRangeError : std::out_of_range {
    explicit TimeOutOfRangeError(const std::string& msg) : std::out_of_range(msg) {}
};

// Numerics / discretization failures.
struct RowSumOutOfToleranceError : std::runtime_error {
    explicit RowSumOutOfToleranceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Statistics preconditions.
struct InsufficientCountsError : std::invalid_argument {
    explicit InsufficientCountsError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct SeriesTooShortError : std::invalid_argument {
    explicit SeriesTooShortError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct BinMismatchError : std::invalid_argument {
    explicit BinMismatchError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Experiment-runner failures.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace billiards
