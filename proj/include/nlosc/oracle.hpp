#pragma once

#include <cstddef>
#include <vector>

#include "nlosc/numerics.hpp"
#include "nlosc/potentials.hpp"

namespace nlosc::oracle {

struct EigenResult {
    double energy = 0.0;
    SampledWavefunction wavefunction;
    double residual = 0.0;  // ||H phi - E phi|| for the unit-norm discrete vector
    int iterations = 0;
};

struct FdOptions {
    // Largest |phi| allowed next to a Dirichlet end, relative to max|phi|.
    double tail_threshold = 1e-6;
    int max_iterations = 50;
};

/// Lowest eigenpair of -1/2 d^2/dx^2 + V on the grid (3-point Laplacian,
/// Dirichlet ends) by Sturm-sequence bisection and shifted inverse iteration.
/// The returned wavefunction is normalized and positive at its maximum.
EigenResult fd_ground_state(const PotentialSpec& spec, const Grid& grid,
                            const FdOptions& options = {});

/// Number of discrete eigenvalues below zero for potentials that vanish at
/// large x (Morse, modified Poschl-Teller). The box is doubled until the
/// count stops changing.
int count_negative_eigenvalues(const PotentialSpec& spec, const Grid& grid);

/// Real state in the number basis of a harmonic oscillator of frequency omega.
class FockState {
public:
    static constexpr std::size_t kMinDimension = 8;
    static constexpr std::size_t kDefaultDimension = 16;

    /// Normalizes the coefficients and zero-pads them to `dimension`.
    FockState(std::vector<double> coefficients, double omega,
              std::size_t dimension = kDefaultDimension);

    const std::vector<double>& coefficients() const { return coefficients_; }
    double omega() const { return omega_; }
    std::size_t dimension() const { return coefficients_.size(); }

private:
    std::vector<double> coefficients_;
    double omega_;
};

/// Exact moments in the truncated basis using x = (a + a^dag)/sqrt(2 omega),
/// p = i sqrt(omega/2)(a^dag - a).
CovarianceMatrix fock_covariance(const FockState& state);

/// <0|state> against the vacuum of the same oscillator.
double fock_vacuum_overlap(const FockState& state);

}  // namespace nlosc::oracle
