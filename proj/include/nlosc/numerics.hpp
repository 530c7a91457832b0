#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nlosc/potentials.hpp"

namespace nlosc {

/// Uniform grid on [x_min, x_max] with n_points nodes (both ends included).
class Grid {
public:
    static constexpr std::size_t kMinPoints = 128;

    Grid(double x_min, double x_max, std::size_t n_points);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t n_points() const { return n_points_; }
    double spacing() const { return spacing_; }
    double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * spacing_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_points_;
    double spacing_;
};

/// Same extent, half the spacing.
Grid refine(const Grid& grid);

struct GridOptions {
    std::size_t n_points = 4097;  // minimum; raised when the state has finer features
    double target_tail = 1e-8;    // |phi(end)| <= target_tail * max|phi|
    double max_extent = 5000.0;   // distance from the seed centre at which growth gives up
    double points_per_feature = 64.0;
};

struct SampledWavefunction {
    Grid grid;
    std::vector<double> amplitude;
    bool normalized = false;
    double norm_defect = 0.0;
};

/// Second moments of (x, p) and the mean vector of a single-mode state.
struct CovarianceMatrix {
    double var_x = 0.5;
    double var_p = 0.5;
    double cov_xp = 0.0;
    double mean_x = 0.0;
    double mean_p = 0.0;

    double det() const { return var_x * var_p - cov_xp * cov_xp; }
};

/// Composite Simpson rule on the grid (3/8 rule on the last panel for an
/// even number of points).
double simpson(const Grid& grid, std::span<const double> values);

/// Grows an interval around the ground-state peak until the analytic
/// amplitude at both ends has dropped below target_tail times its maximum.
Grid auto_grid(const PotentialSpec& spec, const GridOptions& options = {});
Grid auto_grid(const PotentialSpec& spec, double target_tail);

SampledWavefunction sample_ground_state(const PotentialSpec& spec, const Grid& grid);
SampledWavefunction sample_function(const Grid& grid, const std::function<double(double)>& f);

/// True when |amplitude| at both grid ends is <= threshold * max|amplitude|.
bool satisfies_tail(const SampledWavefunction& wf, double threshold);

double norm_squared(const SampledWavefunction& wf);
SampledWavefunction normalize(SampledWavefunction wf);

/// Covariance matrix of a real, normalized wavefunction. mean_p and cov_xp
/// are identically zero for real states and are set, not integrated.
CovarianceMatrix covariance_of(const SampledWavefunction& wf);

/// Fourth-order centred first derivative (second order next to the ends).
std::vector<double> derivative(const SampledWavefunction& wf);

/// <wf1|wf2>. Identical grids integrate directly; otherwise both states are
/// interpolated (cubic Lagrange) onto a common grid over the shared interval
/// with half the finer spacing.
double overlap(const SampledWavefunction& wf1, const SampledWavefunction& wf2);

}  // namespace nlosc
