#include "nlosc/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nlosc/error.hpp"
#include "nlosc/specfun.hpp"

namespace nlosc::perturbation {

namespace {

void check_guard(double eps, double guard, const char* name) {
    if (!std::isfinite(eps) || std::abs(eps) > guard) {
        throw Error(ErrorKind::GuardViolation,
                    std::string(name) + "=" + std::to_string(eps) +
                        " is outside the perturbative guard |eps| <= " + std::to_string(guard));
    }
}

}  // namespace

PerturbativeState make_state(double alpha1, double alpha2, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error(ErrorKind::Domain, "perturbative state: omega must be > 0");
    }
    return {alpha1, alpha2, 1.0 + alpha1 * alpha1 + alpha2 * alpha2, omega};
}

PerturbativeState alpha_coefficients(double eps3, double eps4, double omega, double guard) {
    check_guard(eps3, guard, "eps3");
    check_guard(eps4, guard, "eps4");
    const double alpha1 = -3.0 * eps3 / std::pow(2.0 * omega, 1.5);
    const double alpha2 = -0.5 * eps4 * (3.0 / std::numbers::sqrt2) / (omega * omega);
    return make_state(alpha1, alpha2, omega);
}

Variances perturbed_variances(const PerturbativeState& s) {
    const double a1 = s.alpha1;
    const double a2 = s.alpha2;
    const double n = s.norm_n;
    const double sqrt2 = std::numbers::sqrt2;
    const double a1sq = a1 * a1;
    const double a2sq = a2 * a2;
    Variances v;
    v.var_q = (3.0 * a1sq * a1sq - 6.0 * sqrt2 * a1sq * a2 +
               (1.0 + a2sq) * (1.0 + 2.0 * sqrt2 * a2 + 5.0 * a2sq)) /
              (2.0 * n * n);
    v.var_p = 1.5 - (1.0 + sqrt2 * a2 - a2sq) / n;
    return v;
}

double eta_b_perturbative(const PerturbativeState& s) {
    return std::sqrt(std::max(0.0, 1.0 - 1.0 / std::sqrt(s.norm_n)));
}

double eta_ng_perturbative(const PerturbativeState& s) {
    const Variances v = perturbed_variances(s);
    const double det = v.var_q * v.var_p;
    if (det < 0.25 - 1e-9) {
        throw Error(ErrorKind::Domain,
                    "eta_ng_perturbative: variance product " + std::to_string(det) +
                        " below 1/4");
    }
    return specfun::entropy_h(std::max(0.5, std::sqrt(det)));
}

CurvePoint parametric_curve(double eta_b) {
    if (!(eta_b >= 0.0) || !(eta_b < 1.0)) {
        throw Error(ErrorKind::Domain, "parametric_curve: eta_b must lie in [0, 1)");
    }
    const double e2 = eta_b * eta_b;
    const double bracket = e2 * (e2 - 2.0);
    CurvePoint out;
    const double printed_arg = 1.0 + 24.0 * bracket;
    // h is only defined from 1/2 upwards: the typeset argument must not dip below 1.
    if (printed_arg >= 1.0) {
        out.printed = specfun::entropy_h(0.5 * std::sqrt(printed_arg));
    }
    out.corrected = specfun::entropy_h(0.5 * std::sqrt(1.0 + 24.0 * bracket * bracket));
    return out;
}

std::vector<ScatterRecord> scatter_sample(std::size_t n, Range eps3_range, Range eps4_range,
                                          double omega, std::uint64_t seed, double guard) {
    for (const Range& r : {eps3_range, eps4_range}) {
        if (!(r.lo <= r.hi)) {
            throw Error(ErrorKind::Domain, "scatter_sample: range must satisfy lo <= hi");
        }
        check_guard(r.lo, guard, "range bound");
        check_guard(r.hi, guard, "range bound");
    }
    std::mt19937_64 rng(seed);
    const auto uniform = [&rng](const Range& r) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return r.lo + (r.hi - r.lo) * u;
    };
    std::vector<ScatterRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ScatterRecord rec;
        rec.eps3 = uniform(eps3_range);
        rec.eps4 = uniform(eps4_range);
        const PerturbativeState s = alpha_coefficients(rec.eps3, rec.eps4, omega, guard);
        rec.eta_b = eta_b_perturbative(s);
        rec.eta_ng = eta_ng_perturbative(s);
        out.push_back(rec);
    }
    return out;
}

}  // namespace nlosc::perturbation
