#pragma once

#include <stdexcept>
#include <string>

namespace popper {

/// Invalid physical or numerical parameter. Maps to CLI exit code 1.
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Adaptive integration failed to reach the requested tolerance within the
/// subdivision budget. Carries the best estimate obtained so far.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, double best, double err)
        : std::runtime_error(msg), best_estimate(best), error_estimate(err) {}
    double best_estimate;
    double error_estimate;
};

/// Too few Monte Carlo samples survived a selection step.
class statistics_error : public std::runtime_error {
public:
    explicit statistics_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the documented accuracy window of complex_erf.
class erf_range_error : public domain_error {
public:
    explicit erf_range_error(const std::string& msg) : domain_error(msg) {}
};

/// File or stream failure. Maps to CLI exit code 3.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace popper
