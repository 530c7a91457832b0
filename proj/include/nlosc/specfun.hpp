#pragma once

#include <optional>

namespace nlosc::specfun {

/// Result of an evaluation that may overflow double range.
/// When log_scaled is set it holds ln(value) for a strictly positive value;
/// value itself may then be +inf.
struct EvaluationResult {
    double value = 0.0;
    std::optional<double> log_scaled;
};

/// Gamma function for real x not a non-positive integer.
/// Lanczos approximation (g = 7, 9 terms) with reflection below 1/2.
double gamma_fn(double x);

/// ln|Gamma(x)| for x > 0.
double log_gamma(double x);

/// Confluent hypergeometric function 1F1(a; b; z) (Kummer's M).
///
/// Positive z is summed term by term with Neumaier compensation; above
/// z = 40 the running sum is periodically rescaled so the result is also
/// available as a logarithm. Negative z goes through Kummer's
/// transformation M(a,b,z) = e^z M(b-a,b,-z).
EvaluationResult kummer_phi(double a, double b, double z);

/// ln M(a, b, z); requires the function value to be positive.
double log_kummer_phi(double a, double b, double z);

/// Entropy of a single-mode Gaussian state with symplectic eigenvalue x:
/// (x+1/2) ln(x+1/2) - (x-1/2) ln(x-1/2).
/// Inputs up to 1e-9 below 1/2 are clamped to 1/2.
double entropy_h(double x);

inline constexpr double kEntropyClampTolerance = 1e-9;

}  // namespace nlosc::specfun
