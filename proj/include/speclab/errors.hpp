#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace speclab {

// Root of every error raised by the library. `module()` names the
// subsystem that raised it so the pipeline can tag failures.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error("linalg", what) {}
};

class SymmetryError : public Error {
public:
    explicit SymmetryError(const std::string& what) : Error("linalg", what) {}
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t index)
        : Error("linalg", what + " (stalled at index " + std::to_string(index) + ")"),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class SingularityError : public Error {
public:
    SingularityError(const std::string& what, std::size_t pivot)
        : Error("linalg", what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

class DomainError : public Error {
public:
    DomainError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

class ParameterError : public Error {
public:
    ParameterError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

class RangeError : public Error {
public:
    RangeError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

// Quadrature failed to stabilize; carries the last two estimates (log form).
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double previous, double last)
        : Error("landau-basis", what + " (last estimates " + std::to_string(previous) + ", " +
                                    std::to_string(last) + ")"),
          previous_(previous), last_(last) {}
    double previous() const noexcept { return previous_; }
    double last() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

class PoleError : public Error {
public:
    PoleError(const std::string& what, int level)
        : Error("birman-schwinger", what + " (level " + std::to_string(level) + ")"), level_(level) {}
    int level() const noexcept { return level_; }

private:
    int level_;
};

class ContourError : public Error {
public:
    explicit ContourError(const std::string& what) : Error("birman-schwinger", what) {}
};

class ResolutionError : public Error {
public:
    explicit ResolutionError(const std::string& what) : Error("birman-schwinger", what) {}
};

class ConsistencyError : public Error {
public:
    ConsistencyError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error("cli-io", "config " + path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class IoError : public Error {
public:
    IoError(std::string path, const std::string& what)
        : Error("cli-io", path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace speclab
