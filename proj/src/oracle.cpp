#include "nlosc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nlosc/error.hpp"

namespace nlosc::oracle {

namespace {

// Symmetric tridiagonal matrix with constant off-diagonal.
struct Tridiagonal {
    std::vector<double> diag;
    double off = 0.0;

    // Number of eigenvalues strictly below lambda (Sturm sequence).
    std::size_t count_below(double lambda) const {
        const double e2 = off * off;
        std::size_t count = 0;
        double q = 1.0;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            q = diag[i] - lambda - (i == 0 ? 0.0 : e2 / q);
            if (q == 0.0) q = -std::numeric_limits<double>::min();
            if (q < 0.0) ++count;
        }
        return count;
    }

    std::vector<double> apply(const std::vector<double>& v) const {
        const std::size_t m = diag.size();
        std::vector<double> out(m);
        for (std::size_t i = 0; i < m; ++i) {
            double s = diag[i] * v[i];
            if (i > 0) s += off * v[i - 1];
            if (i + 1 < m) s += off * v[i + 1];
            out[i] = s;
        }
        return out;
    }

    // Solves (T - shift) y = rhs by the Thomas algorithm.
    std::vector<double> solve_shifted(double shift, const std::vector<double>& rhs) const {
        const std::size_t m = diag.size();
        std::vector<double> c(m), y(m);
        double b = diag[0] - shift;
        if (b == 0.0) b = std::numeric_limits<double>::epsilon();
        c[0] = off / b;
        y[0] = rhs[0] / b;
        for (std::size_t i = 1; i < m; ++i) {
            b = diag[i] - shift - off * c[i - 1];
            if (b == 0.0) b = std::numeric_limits<double>::epsilon();
            c[i] = off / b;
            y[i] = (rhs[i] - off * y[i - 1]) / b;
        }
        for (std::size_t i = m - 1; i-- > 0;) y[i] -= c[i] * y[i + 1];
        return y;
    }
};

constexpr double kPotentialCap = 1e150;

template <class Potential>
Tridiagonal hamiltonian(const Potential& potential, const Grid& grid) {
    const double h = grid.spacing();
    Tridiagonal t;
    t.off = -0.5 / (h * h);
    t.diag.resize(grid.n_points() - 2);
    for (std::size_t i = 0; i < t.diag.size(); ++i) {
        const double v = potential(grid.x(i + 1));
        t.diag[i] = 1.0 / (h * h) + (std::isfinite(v) ? std::min(v, kPotentialCap) : kPotentialCap);
    }
    return t;
}

double norm2(const std::vector<double>& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

void require_fd_supported(const PotentialSpec& spec) {
    validate(spec);
    if (std::holds_alternative<PerturbedHarmonic>(spec)) {
        throw Error(ErrorKind::Unsupported,
                    "fd_ground_state: the perturbed oscillator is handled by the perturbation module");
    }
}

}  // namespace

EigenResult fd_ground_state(const PotentialSpec& spec, const Grid& grid, const FdOptions& options) {
    require_fd_supported(spec);
    const Tridiagonal t = hamiltonian([&spec](double x) { return evaluate_potential(spec, x); }, grid);
    const double h = grid.spacing();

    // Lowest eigenvalue lies in [min d - 2|e|, min d].
    const double dmin = *std::min_element(t.diag.begin(), t.diag.end());
    double lo = dmin - 2.0 * std::abs(t.off);
    double hi = dmin;
    for (int it = 0; it < 4000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (t.count_below(mid) >= 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const double lambda = 0.5 * (lo + hi);

    const double scale = 2.0 / (h * h) + std::abs(lambda) + 1.0;
    const double shift = lambda - 1e-11 * scale;
    std::vector<double> v(t.diag.size(), 1.0);
    double vn = norm2(v);
    for (double& x : v) x /= vn;

    int iterations = 0;
    for (; iterations < options.max_iterations; ++iterations) {
        std::vector<double> y = t.solve_shifted(shift, v);
        const double yn = norm2(y);
        for (double& x : y) x /= yn;
        double change = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) change = std::max(change, std::abs(y[i] - v[i]));
        v = std::move(y);
        if (change < 1e-14) {
            ++iterations;
            break;
        }
    }

    const std::vector<double> hv = t.apply(v);
    const double energy = std::inner_product(v.begin(), v.end(), hv.begin(), 0.0);
    double residual = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = hv[i] - energy * v[i];
        residual += r * r;
    }
    residual = std::sqrt(residual);
    if (!(residual <= 1e-8 * scale)) {
        throw Error(ErrorKind::NonConvergence,
                    "fd_ground_state: inverse iteration residual " + std::to_string(residual) +
                        " too large");
    }

    SampledWavefunction wf{grid, std::vector<double>(grid.n_points(), 0.0), false, 0.0};
    std::copy(v.begin(), v.end(), wf.amplitude.begin() + 1);
    const auto peak = std::max_element(wf.amplitude.begin(), wf.amplitude.end(),
                                       [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*peak < 0.0) {
        for (double& x : wf.amplitude) x = -x;
    }
    wf = normalize(std::move(wf));

    const double top = std::abs(*std::max_element(
        wf.amplitude.begin(), wf.amplitude.end(),
        [](double a, double b) { return std::abs(a) < std::abs(b); }));
    const std::size_t n = grid.n_points();
    if (std::abs(wf.amplitude[1]) > options.tail_threshold * top ||
        std::abs(wf.amplitude[n - 2]) > options.tail_threshold * top) {
        throw Error(ErrorKind::TailViolation,
                    "fd_ground_state: eigenfunction does not decay before the grid ends; "
                    "enlarge the grid");
    }
    return EigenResult{energy, std::move(wf), residual, iterations};
}

int count_negative_eigenvalues(const PotentialSpec& spec, const Grid& grid) {
    const auto* m = std::get_if<Morse>(&spec);
    const bool morse = m != nullptr;
    if (!morse && !std::holds_alternative<ModifiedPoschlTeller>(spec)) {
        throw Error(ErrorKind::Unsupported,
                    "count_negative_eigenvalues: only potentials vanishing at infinity "
                    "(morse, mpt) have a zero threshold");
    }
    // Morse beyond the bound-state limit is still a valid well (with zero
    // bound states), so only positivity is required here.
    if (morse) {
        if (!(m->depth > 0.0) || !(m->alpha > 0.0) || !std::isfinite(m->depth) ||
            !std::isfinite(m->alpha)) {
            throw Error(ErrorKind::InvalidSpec, "morse: D and alpha must be > 0");
        }
    } else {
        validate(spec);
    }
    const auto potential = [&](double x) {
        if (!morse) return evaluate_potential(spec, x);
        const double e = std::exp(-m->alpha * x);
        return m->depth * (e * e - 2.0 * e);
    };
    const auto count = [&](const Grid& g) {
        return static_cast<int>(hamiltonian(potential, g).count_below(0.0));
    };

    Grid current = grid;
    int previous = count(current);
    for (int doubling = 0; doubling < 8; ++doubling) {
        const double width = current.x_max() - current.x_min();
        // Morse is confined on the left by the exponential wall; grow to the right only.
        const Grid bigger = morse ? Grid(current.x_min(), current.x_max() + width,
                                         2 * current.n_points() - 1)
                                  : Grid(current.x_min() - 0.5 * width,
                                         current.x_max() + 0.5 * width,
                                         2 * current.n_points() - 1);
        const int next = count(bigger);
        if (next == previous) return next;
        previous = next;
        current = bigger;
    }
    throw Error(ErrorKind::NonConvergence,
                "count_negative_eigenvalues: count did not stabilise under box doubling");
}

FockState::FockState(std::vector<double> coefficients, double omega, std::size_t dimension)
    : coefficients_(std::move(coefficients)), omega_(omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error(ErrorKind::Domain, "FockState: omega must be > 0");
    }
    if (dimension < kMinDimension) {
        throw Error(ErrorKind::Domain, "FockState: dimension must be >= 8");
    }
    if (coefficients_.size() > dimension) {
        throw Error(ErrorKind::Truncation, "FockState: more coefficients than basis states");
    }
    coefficients_.resize(dimension, 0.0);
    const double norm = norm2(coefficients_);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorKind::ZeroNorm, "FockState: zero coefficient vector");
    }
    for (double& c : coefficients_) c /= norm;
}

CovarianceMatrix fock_covariance(const FockState& state) {
    const auto& c = state.coefficients();
    const std::size_t d = c.size();
    std::size_t highest = 0;
    for (std::size_t k = 0; k < d; ++k) {
        if (c[k] != 0.0) highest = k;
    }
    if (highest + 4 > d || std::abs(c[d - 1]) > 1e-10 || std::abs(c[d - 2]) > 1e-10) {
        throw Error(ErrorKind::Truncation,
                    "fock_covariance: state reaches the top of the truncated basis");
    }

    // (a + a^dag) c and (a^dag - a) c; both stay inside the basis because the
    // top two amplitudes vanish.
    std::vector<double> sum(d, 0.0), diff(d, 0.0);
    for (std::size_t n = 0; n < d; ++n) {
        const double up = n + 1 < d ? std::sqrt(static_cast<double>(n + 1)) * c[n + 1] : 0.0;
        const double down = n > 0 ? std::sqrt(static_cast<double>(n)) * c[n - 1] : 0.0;
        sum[n] = up + down;    // (a c)_n + (a^dag c)_n
        diff[n] = down - up;   // (a^dag c)_n - (a c)_n
    }
    const double x_scale = 1.0 / std::sqrt(2.0 * state.omega());
    const double p_scale = std::sqrt(0.5 * state.omega());

    const double mean_x = x_scale * std::inner_product(c.begin(), c.end(), sum.begin(), 0.0);
    const double x2 = x_scale * x_scale * std::inner_product(sum.begin(), sum.end(), sum.begin(), 0.0);
    // p = i K with K real antisymmetric: <p^2> = ||K c||^2, while <p> and the
    // symmetrized <xp + px>/2 are i times antisymmetric forms of a real vector, i.e. 0.
    const double p2 = p_scale * p_scale * std::inner_product(diff.begin(), diff.end(), diff.begin(), 0.0);

    CovarianceMatrix cov;
    cov.mean_x = mean_x;
    cov.var_x = x2 - mean_x * mean_x;
    cov.mean_p = 0.0;
    cov.var_p = p2;
    cov.cov_xp = 0.0;
    return cov;
}

double fock_vacuum_overlap(const FockState& state) { return state.coefficients().front(); }

}  // namespace nlosc::oracle
