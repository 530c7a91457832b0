#include "nlosc/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlosc/error.hpp"

namespace nlosc::specfun {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Series part A(z) of the Lanczos approximation Gamma(z+1).
double lanczos_sum(double z) {
    double sum = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        sum += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    }
    return sum;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// Neumaier (improved Kahan) accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double total() const { return sum + comp; }
    void scale(double f) {
        sum *= f;
        comp *= f;
    }
};

struct ScaledSeries {
    double mantissa = 0.0;  // series value = mantissa * exp(log_scale)
    double log_scale = 0.0;
};

// Direct summation of sum_n (a)_n z^n / ((b)_n n!) for z >= 0 with
// running rescaling so that huge partial sums never overflow.
ScaledSeries sum_series(double a, double b, double z) {
    constexpr double kRescaleAbove = 1e200;
    const double log_rescale = std::log(kRescaleAbove);
    const long max_terms = 100000 + static_cast<long>(20.0 * z);

    CompensatedSum acc;
    acc.add(1.0);
    double term = 1.0;
    double log_scale = 0.0;
    int small_run = 0;

    for (long n = 0; n < max_terms; ++n) {
        const double dn = static_cast<double>(n);
        const double ratio = (a + dn) / (b + dn) * z / (dn + 1.0);
        term *= ratio;
        if (term == 0.0) {
            return {acc.total(), log_scale};
        }
        acc.add(term);
        if (std::abs(term) > kRescaleAbove || std::abs(acc.sum) > kRescaleAbove) {
            term /= kRescaleAbove;
            acc.scale(1.0 / kRescaleAbove);
            log_scale += log_rescale;
        }
        // Terms are monotonically decreasing once |ratio| < 1 for good.
        const bool tail = std::abs(ratio) < 1.0 && (a + dn) * (b + dn) > 0.0 &&
                          std::abs(term) <= 1e-17 * std::abs(acc.sum);
        small_run = tail ? small_run + 1 : 0;
        if (small_run >= 3) {
            return {acc.total(), log_scale};
        }
    }
    throw Error(ErrorKind::NonConvergence,
                "kummer_phi: series did not converge for a=" + std::to_string(a) +
                    " b=" + std::to_string(b) + " z=" + std::to_string(z));
}

EvaluationResult finish(ScaledSeries s, double extra_log, bool want_log) {
    EvaluationResult out;
    const double total_log = s.log_scale + extra_log;
    out.value = s.mantissa * std::exp(total_log);
    if (s.mantissa > 0.0) {
        const double lv = std::log(s.mantissa) + total_log;
        if (want_log || lv > std::log(1e100)) {
            out.log_scaled = lv;
        }
        if (!std::isfinite(out.value)) {
            out.value = std::numeric_limits<double>::infinity();
        }
    } else if (!std::isfinite(out.value)) {
        throw Error(ErrorKind::Overflow, "kummer_phi: negative value overflows");
    }
    return out;
}

}  // namespace

double gamma_fn(double x) {
    if (!std::isfinite(x)) {
        throw Error(ErrorKind::Domain, "gamma_fn: non-finite argument");
    }
    if (is_nonpositive_integer(x)) {
        throw Error(ErrorKind::Pole, "gamma_fn: pole at x=" + std::to_string(x));
    }
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        const double s = std::sin(std::numbers::pi * x);
        return std::numbers::pi / (s * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    // t^(z+1/2) split in halves so that it stays finite up to x ~ 171.
    const double half_pow = std::pow(t, 0.5 * (z + 0.5));
    const double value = std::sqrt(2.0 * std::numbers::pi) * half_pow *
                         (half_pow * std::exp(-t)) * lanczos_sum(z);
    if (!std::isfinite(value)) {
        throw Error(ErrorKind::Overflow, "gamma_fn: overflow at x=" + std::to_string(x));
    }
    return value;
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::Domain, "log_gamma: requires finite x > 0");
    }
    if (x < 0.5) {
        return log_gamma(x + 1.0) - std::log(x);
    }
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(lanczos_sum(z));
}

EvaluationResult kummer_phi(double a, double b, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) {
        throw Error(ErrorKind::Domain, "kummer_phi: non-finite argument");
    }
    if (is_nonpositive_integer(b)) {
        throw Error(ErrorKind::Pole, "kummer_phi: b=" + std::to_string(b) + " is a pole");
    }
    if (z == 0.0) {
        return {1.0, 0.0};
    }
    constexpr double kLogSwitch = 40.0;
    if (z > 0.0) {
        return finish(sum_series(a, b, z), 0.0, z > kLogSwitch);
    }
    return finish(sum_series(b - a, b, -z), z, -z > kLogSwitch);
}

double log_kummer_phi(double a, double b, double z) {
    const EvaluationResult r = kummer_phi(a, b, z);
    if (r.log_scaled) {
        return *r.log_scaled;
    }
    if (!(r.value > 0.0)) {
        throw Error(ErrorKind::Domain, "log_kummer_phi: value is not positive");
    }
    return std::log(r.value);
}

double entropy_h(double x) {
    if (std::isnan(x) || x < 0.5 - kEntropyClampTolerance) {
        throw Error(ErrorKind::Domain,
                    "entropy_h: argument " + std::to_string(x) +
                        " below 1/2 (covariance violates the uncertainty bound)");
    }
    if (x <= 0.5) {
        return 0.0;
    }
    const double plus = x + 0.5;
    const double minus = x - 0.5;
    return plus * std::log(plus) - minus * std::log(minus);
}

}  // namespace nlosc::specfun
