#include "nlosc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlosc/error.hpp"

namespace nlosc {

namespace {

// Smallest 2^k + 1 that is >= n.
std::size_t round_up_pow2_plus_one(std::size_t n) {
    std::size_t m = 2;
    while (m + 1 < n) m *= 2;
    return m + 1;
}

// Cubic Lagrange interpolation of sampled data; zero outside the grid.
double interpolate(const SampledWavefunction& wf, double x) {
    const Grid& g = wf.grid;
    if (x < g.x_min() || x > g.x_max()) return 0.0;
    const double h = g.spacing();
    const auto n = static_cast<std::ptrdiff_t>(g.n_points());
    auto i = static_cast<std::ptrdiff_t>(std::floor((x - g.x_min()) / h));
    // Stencil i-1 .. i+2 clamped to the grid.
    std::ptrdiff_t start = std::clamp<std::ptrdiff_t>(i - 1, 0, n - 4);
    double result = 0.0;
    for (std::ptrdiff_t j = start; j < start + 4; ++j) {
        double w = 1.0;
        const double xj = g.x(static_cast<std::size_t>(j));
        for (std::ptrdiff_t k = start; k < start + 4; ++k) {
            if (k == j) continue;
            const double xk = g.x(static_cast<std::size_t>(k));
            w *= (x - xk) / (xj - xk);
        }
        result += w * wf.amplitude[static_cast<std::size_t>(j)];
    }
    return result;
}

void require_normalized(const SampledWavefunction& wf, const char* where) {
    if (!wf.normalized) {
        throw Error(ErrorKind::NotNormalized, std::string(where) + ": wavefunction is not normalized");
    }
}

}  // namespace

Grid::Grid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points), spacing_(0.0) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
        throw Error(ErrorKind::Domain, "Grid: need finite x_min < x_max");
    }
    if (n_points < kMinPoints) {
        throw Error(ErrorKind::Domain, "Grid: need at least 128 points");
    }
    spacing_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

Grid refine(const Grid& grid) { return Grid(grid.x_min(), grid.x_max(), 2 * grid.n_points() - 1); }

double simpson(const Grid& grid, std::span<const double> values) {
    const std::size_t n = grid.n_points();
    if (values.size() != n) {
        throw Error(ErrorKind::Domain, "simpson: value count does not match the grid");
    }
    const double h = grid.spacing();
    // Simpson over an even number of intervals, 3/8 rule for a trailing odd panel.
    const std::size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 4;
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < simpson_end; i += 2) odd += values[i];
    for (std::size_t i = 2; i < simpson_end; i += 2) even += values[i];
    double total = h / 3.0 * (values[0] + 4.0 * odd + 2.0 * even + values[simpson_end]);
    if (n % 2 == 0) {
        const std::size_t k = simpson_end;
        total += 3.0 * h / 8.0 *
                 (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
    }
    return total;
}

Grid auto_grid(const PotentialSpec& spec, const GridOptions& options) {
    validate(spec);
    if (!(options.target_tail > 0.0) || options.target_tail > 1e-4) {
        throw Error(ErrorKind::Domain, "auto_grid: target_tail must lie in (0, 1e-4]");
    }
    // The perturbed oscillator is gridded like its unperturbed harmonic part.
    const PotentialSpec shape = std::holds_alternative<PerturbedHarmonic>(spec)
                                    ? PotentialSpec{Harmonic{std::get<PerturbedHarmonic>(spec).omega}}
                                    : spec;

    const double centre = ground_state_peak(shape);
    const double feature = feature_length(shape);
    const double log_tail = std::log(options.target_tail);
    const auto log_amp = [&](double x) { return log_ground_state_amplitude(shape, x); };

    double left = 4.0 * feature;
    double right = 4.0 * feature;
    constexpr double kGrowth = 1.25;
    constexpr std::size_t kProbe = 4097;
    while (true) {
        double log_max = log_amp(centre);
        for (std::size_t i = 0; i < kProbe; ++i) {
            const double x = centre - left + (left + right) * static_cast<double>(i) / (kProbe - 1);
            log_max = std::max(log_max, log_amp(x));
        }
        const bool left_ok = log_amp(centre - left) <= log_max + log_tail;
        const bool right_ok = log_amp(centre + right) <= log_max + log_tail;
        if (left_ok && right_ok) break;
        if (!left_ok) left *= kGrowth;
        if (!right_ok) right *= kGrowth;
        if (left > options.max_extent || right > options.max_extent) {
            throw Error(ErrorKind::GridExhausted,
                        "auto_grid: tail condition not met within |x - x0| <= " +
                            std::to_string(options.max_extent) + " for " +
                            format_potential(spec));
        }
    }

    const double width = left + right;
    const auto needed =
        static_cast<std::size_t>(std::ceil(width * options.points_per_feature / feature)) + 1;
    std::size_t n = std::max(options.n_points, Grid::kMinPoints);
    if (needed > n) n = round_up_pow2_plus_one(needed);
    return Grid(centre - left, centre + right, n);
}

Grid auto_grid(const PotentialSpec& spec, double target_tail) {
    GridOptions options;
    options.target_tail = target_tail;
    return auto_grid(spec, options);
}

SampledWavefunction sample_function(const Grid& grid, const std::function<double(double)>& f) {
    SampledWavefunction wf{grid, std::vector<double>(grid.n_points()), false, 0.0};
    for (std::size_t i = 0; i < grid.n_points(); ++i) wf.amplitude[i] = f(grid.x(i));
    return wf;
}

SampledWavefunction sample_ground_state(const PotentialSpec& spec, const Grid& grid) {
    validate(spec);
    return sample_function(grid, [&](double x) { return ground_state_amplitude(spec, x); });
}

bool satisfies_tail(const SampledWavefunction& wf, double threshold) {
    double peak = 0.0;
    for (double v : wf.amplitude) peak = std::max(peak, std::abs(v));
    return std::abs(wf.amplitude.front()) <= threshold * peak &&
           std::abs(wf.amplitude.back()) <= threshold * peak;
}

double norm_squared(const SampledWavefunction& wf) {
    std::vector<double> sq(wf.amplitude.size());
    std::transform(wf.amplitude.begin(), wf.amplitude.end(), sq.begin(),
                   [](double v) { return v * v; });
    return simpson(wf.grid, sq);
}

SampledWavefunction normalize(SampledWavefunction wf) {
    const double norm = norm_squared(wf);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorKind::ZeroNorm, "normalize: wavefunction has zero or non-finite norm");
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (double& v : wf.amplitude) v *= scale;
    wf.normalized = true;
    wf.norm_defect = std::abs(1.0 - norm);
    return wf;
}

std::vector<double> derivative(const SampledWavefunction& wf) {
    const auto& f = wf.amplitude;
    const std::size_t n = f.size();
    const double h = wf.grid.spacing();
    std::vector<double> d(n);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    d[1] = (f[2] - f[0]) / (2.0 * h);
    d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    return d;
}

CovarianceMatrix covariance_of(const SampledWavefunction& wf) {
    require_normalized(wf, "covariance_of");
    const Grid& g = wf.grid;
    const std::size_t n = g.n_points();
    std::vector<double> integrand(n);

    for (std::size_t i = 0; i < n; ++i) integrand[i] = g.x(i) * wf.amplitude[i] * wf.amplitude[i];
    const double mean_x = simpson(g, integrand);

    for (std::size_t i = 0; i < n; ++i) {
        const double dx = g.x(i) - mean_x;
        integrand[i] = dx * dx * wf.amplitude[i] * wf.amplitude[i];
    }
    const double var_x = simpson(g, integrand);

    const std::vector<double> d = derivative(wf);
    for (std::size_t i = 0; i < n; ++i) integrand[i] = d[i] * d[i];
    const double var_p = simpson(g, integrand);

    CovarianceMatrix cov;
    cov.mean_x = mean_x;
    cov.var_x = var_x;
    cov.var_p = var_p;
    cov.mean_p = 0.0;
    cov.cov_xp = 0.0;
    return cov;
}

double overlap(const SampledWavefunction& wf1, const SampledWavefunction& wf2) {
    require_normalized(wf1, "overlap");
    require_normalized(wf2, "overlap");
    if (wf1.grid == wf2.grid) {
        std::vector<double> prod(wf1.amplitude.size());
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = wf1.amplitude[i] * wf2.amplitude[i];
        return simpson(wf1.grid, prod);
    }
    const double lo = std::max(wf1.grid.x_min(), wf2.grid.x_min());
    const double hi = std::min(wf1.grid.x_max(), wf2.grid.x_max());
    if (!(hi > lo)) {
        throw Error(ErrorKind::IncompatibleDomain, "overlap: the two grids do not intersect");
    }
    const double h = 0.5 * std::min(wf1.grid.spacing(), wf2.grid.spacing());
    auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
    if (n % 2 == 0) ++n;
    n = std::max(n, Grid::kMinPoints + 1);
    const Grid common(lo, hi, n);
    std::vector<double> prod(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = common.x(i);
        prod[i] = interpolate(wf1, x) * interpolate(wf2, x);
    }
    return simpson(common, prod);
}

}  // namespace nlosc
