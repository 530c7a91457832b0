#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlosc/numerics.hpp"
#include "nlosc/potentials.hpp"

namespace nlosc {

struct Diagnostics {
    std::optional<Grid> grid;  // absent for closed-form (perturbative) evaluations
    double norm_defect = 0.0;
    std::vector<std::string> warnings;
};

struct MeasureReport {
    std::optional<double> eta_b;  // present iff omega_r is
    double eta_ng = 0.0;
    std::optional<double> omega_r;
    double ground_energy = 0.0;
    double det_sigma = 0.25;
    std::optional<double> fidelity_to_reference;
    Diagnostics diagnostics;
};

struct GaussianState {
    double mean_x = 0.0;
    double mean_p = 0.0;
    CovarianceMatrix covariance;
};

/// |<wf1|wf2>|^2 for pure states.
double fidelity_pure(const SampledWavefunction& wf1, const SampledWavefunction& wf2);

/// D_B = sqrt(2 (1 - sqrt F)); F is clamped to [0, 1].
double bures_distance(double fidelity);

/// Normalized harmonic ground state of frequency omega centred at `centre`,
/// using its exact normalization (the grid need not hold all of its mass).
SampledWavefunction harmonic_reference_state(const Grid& grid, double omega, double centre = 0.0);

/// Quantum-relative-entropy non-Gaussianity of a pure sampled state,
/// h(sqrt(det sigma)).
double non_gaussianity(const SampledWavefunction& wf);

/// Renormalized Bures distance sqrt(1 - |<0_H|0_V>|) to the reference
/// harmonic ground state; absent when no reference frequency exists.
std::optional<double> eta_bures(const PotentialSpec& spec, const GridOptions& options = {});

double eta_ng(const PotentialSpec& spec, const GridOptions& options = {});

MeasureReport measure_report(const PotentialSpec& spec, const GridOptions& options = {});

/// Same, on a caller-supplied grid (closed-form perturbative specs ignore it).
MeasureReport measure_report(const PotentialSpec& spec, const Grid& grid);

GaussianState reference_gaussian(const CovarianceMatrix& cov);

/// Gaussian Wigner function exp(-1/2 (X-Xbar)^T sigma^-1 (X-Xbar)) / (2 pi sqrt(det sigma)).
double wigner_gaussian(const GaussianState& state, double x, double p);

/// Morse inputs closer than this fraction of 2 sqrt(2D) get a proximity warning.
inline constexpr double kMorseEdgeWarningFraction = 0.98;

}  // namespace nlosc
