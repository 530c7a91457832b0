#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nlosc/potentials.hpp"

namespace nlosc::perturbation {

/// Ground state N^{-1/2}(|0> + alpha1 |1> + alpha2 |2>) of a weakly
/// perturbed oscillator, with N = 1 + alpha1^2 + alpha2^2.
struct PerturbativeState {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double norm_n = 1.0;
    double omega = 1.0;
};

PerturbativeState make_state(double alpha1, double alpha2, double omega = 1.0);

/// alpha1 = -3 eps3 / (2 omega)^{3/2},  alpha2 = -(eps4/2) (3/sqrt 2) / omega^2.
/// The omega dependence is taken as printed; the energy denominators that
/// produce it are only consistent at omega = 1.
PerturbativeState alpha_coefficients(double eps3, double eps4, double omega,
                                     double guard = kDefaultPerturbativeGuard);

struct Variances {
    double var_q = 0.5;
    double var_p = 0.5;
};

Variances perturbed_variances(const PerturbativeState& state);

/// sqrt(1 - N^{-1/2})
double eta_b_perturbative(const PerturbativeState& state);

/// h(sqrt(var_q var_p)); throws Domain if the product falls below 1/4.
double eta_ng_perturbative(const PerturbativeState& state);

struct CurvePoint {
    /// h((1/2) sqrt(1 + 24 e^2 (e^2 - 2))); absent where the argument of h
    /// drops below 1/2, which is every e > 0.
    std::optional<double> printed;
    /// h((1/2) sqrt(1 + 24 [e^2 (e^2 - 2)]^2)), the curve traced by even
    /// perturbations (alpha1 = 0).
    double corrected = 0.0;
};

CurvePoint parametric_curve(double eta_b);

struct ScatterRecord {
    double eps3 = 0.0;
    double eps4 = 0.0;
    double eta_b = 0.0;
    double eta_ng = 0.0;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// n samples with eps3, eps4 uniform on the given ranges. Draws come from
/// mt19937_64(seed) mapped to [0,1) by the top 53 bits, eps3 before eps4,
/// so the sequence is reproducible across platforms.
std::vector<ScatterRecord> scatter_sample(std::size_t n, Range eps3_range, Range eps4_range,
                                          double omega, std::uint64_t seed,
                                          double guard = kDefaultPerturbativeGuard);

}  // namespace nlosc::perturbation
