#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace meff {

enum class ErrorKind {
    invalid_argument,
    unsupported_kernel,
    domain,
    convergence,
    not_found,
    degenerate_fit,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Universal return of every integration routine.
struct IntegralResult {
    double value = 0.0;
    double abs_err = 0.0;
    std::int64_t n_eval = 0;
};

// Thrown when an adaptive rule exhausts its budget; carries the best estimate so far.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, IntegralResult best)
        : Error(ErrorKind::convergence, what), best_(best) {}
    const IntegralResult& best() const noexcept { return best_; }

private:
    IntegralResult best_;
};

}  // namespace meff
