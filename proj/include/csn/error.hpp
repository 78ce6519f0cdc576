#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace csn {

/// Base class for every error raised by the library. Carries the name of the
/// module that raised it so front ends can report "module: message".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Violated precondition (bad ratio, negative exponent, inconsistent sizes...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& message)
        : Error("graph-core", path + ":" + std::to_string(line) + ": " + message),
          path_(path), line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Purification left nothing behind: thresholds too strict for the input.
class EmptyNetworkError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(std::uint32_t source, std::size_t iterations, double residual)
        : Error("similarity", "random walk from user " + std::to_string(source) +
                                  " did not converge in " + std::to_string(iterations) +
                                  " iterations (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A walker reached a user with no out-links; the input was not purified.
class DanglingNodeError : public Error {
public:
    explicit DanglingNodeError(std::uint32_t user)
        : Error("similarity", "user " + std::to_string(user) +
                                  " has no out-links (network not purified?)"),
          user_(user) {}

    std::uint32_t user() const noexcept { return user_; }

private:
    std::uint32_t user_;
};

/// A cached stage input no longer matches the hash recorded in the manifest.
class StaleInputError : public Error {
public:
    using Error::Error;
};

}  // namespace csn
