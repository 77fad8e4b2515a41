#ifndef VANISHDAMP_ERRORS_HPP
#define VANISHDAMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vanishdamp {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operator matrix is not exactly symmetric.
struct NotSymmetric : Error {
    using Error::Error;
};

/// No mu > 0 exists for the stored shift, or the matrix fails the
/// positive-semidefinite check.
struct NotSemiCoercive : Error {
    using Error::Error;
};

/// A custom damping schedule was queried for gamma' without providing one.
struct MissingDerivative : Error {
    using Error::Error;
};

/// The minimizer search did not reach the gradient-norm target.
struct NoConvergence : Error {
    using Error::Error;
};

/// Integration produced NaN or Inf.
struct NonFinite : Error {
    using Error::Error;
};

/// Requested step exceeds the stability guard 0.5/sqrt(||A|| + L_f).
struct StepTooLarge : Error {
    using Error::Error;
};

/// The trajectory was not configured with the requested weight exponent.
struct MissingAccumulator : Error {
    using Error::Error;
};

/// Weight exponent outside the admissible range for the requested check.
struct BadExponent : Error {
    using Error::Error;
};

/// Energy reached zero (or < 1e-300) inside a fit window; the decay is
/// effectively superpolynomial and a log-log slope would be garbage.
struct EnergyUnderflow : Error {
    using Error::Error;
};

struct BadDimension : Error {
    using Error::Error;
};

/// Config file problem, annotated with the offending key and line.
class ConfigError : public Error {
public:
    ConfigError(const std::string& msg, std::string key = "", int line = 0)
        : Error(format(msg, key, line)), key_(std::move(key)), line_(line) {}

    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    static std::string format(const std::string& msg, const std::string& key, int line) {
        std::string out = "config error";
        if (line > 0) out += " (line " + std::to_string(line) + ")";
        if (!key.empty()) out += " [key: " + key + "]";
        out += ": " + msg;
        return out;
    }
    std::string key_;
    int line_;
};

} // namespace vanishdamp

#endif
