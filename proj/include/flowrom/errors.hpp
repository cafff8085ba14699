#pragma once

#include <stdexcept>
#include <string>

namespace flowrom {

/// Base class for all toolkit errors. Subcommands catch this at the top
/// level and map it to a nonzero exit code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched grids, field sizes, ranks or coefficient lengths.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// Bad configuration: unknown boundary label, invalid parameter, file
/// inconsistency (including case-hash mismatches between artifacts).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Time-step stability violation in an explicit solver.
class StabilityError : public Error {
public:
    explicit StabilityError(const std::string& msg) : Error(msg) {}
};

/// Iterative solver failed to converge; message carries the residual.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

/// Closure training failure (e.g. Levenberg-Marquardt divergence).
class TrainingError : public Error {
public:
    explicit TrainingError(const std::string& msg) : Error(msg) {}
};

/// Degenerate data where a model variant requires structure.
class DegeneracyError : public Error {
public:
    explicit DegeneracyError(const std::string& msg) : Error(msg) {}
};

}  // namespace flowrom
