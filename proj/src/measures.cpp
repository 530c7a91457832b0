#include "nlosc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlosc/error.hpp"
#include "nlosc/perturbation.hpp"
#include "nlosc/specfun.hpp"

namespace nlosc {

namespace {

MeasureReport perturbative_report(const PerturbedHarmonic& ph) {
    const auto state = perturbation::alpha_coefficients(ph.eps3, ph.eps4, ph.omega);
    const auto var = perturbation::perturbed_variances(state);
    MeasureReport r;
    r.omega_r = ph.omega;
    r.eta_b = perturbation::eta_b_perturbative(state);
    r.det_sigma = var.var_q * var.var_p;
    r.eta_ng = specfun::entropy_h(std::sqrt(r.det_sigma));
    r.fidelity_to_reference = 1.0 / state.norm_n;
    // First order in the perturbation: <0|eps4 x^4|0> = 3 eps4 / (4 omega^2); the x^3 term vanishes.
    r.ground_energy = 0.5 * ph.omega + 0.75 * ph.eps4 / (ph.omega * ph.omega);
    return r;
}

}  // namespace

double fidelity_pure(const SampledWavefunction& wf1, const SampledWavefunction& wf2) {
    const double ov = overlap(wf1, wf2);
    return ov * ov;
}

double bures_distance(double fidelity) {
    const double f = std::clamp(fidelity, 0.0, 1.0);
    return std::sqrt(2.0 * (1.0 - std::sqrt(f)));
}

SampledWavefunction harmonic_reference_state(const Grid& grid, double omega, double centre) {
    if (!(omega > 0.0)) {
        throw Error(ErrorKind::Domain, "harmonic_reference_state: omega must be > 0");
    }
    const double prefactor = std::pow(omega / std::numbers::pi, 0.25);
    SampledWavefunction wf = sample_function(grid, [&](double x) {
        const double d = x - centre;
        return prefactor * std::exp(-0.5 * omega * d * d);
    });
    wf.normalized = true;
    wf.norm_defect = std::abs(1.0 - norm_squared(wf));
    return wf;
}

double non_gaussianity(const SampledWavefunction& wf) {
    const CovarianceMatrix cov = covariance_of(wf);
    return specfun::entropy_h(std::sqrt(std::max(0.0, cov.det())));
}

MeasureReport measure_report(const PotentialSpec& spec, const GridOptions& options) {
    validate(spec);
    if (const auto* ph = std::get_if<PerturbedHarmonic>(&spec)) {
        return perturbative_report(*ph);
    }

    return measure_report(spec, auto_grid(spec, options));
}

MeasureReport measure_report(const PotentialSpec& spec, const Grid& grid) {
    validate(spec);
    if (const auto* ph = std::get_if<PerturbedHarmonic>(&spec)) {
        return perturbative_report(*ph);
    }

    MeasureReport r;
    const SampledWavefunction gs = normalize(sample_ground_state(spec, grid));
    const CovarianceMatrix cov = covariance_of(gs);

    r.det_sigma = cov.det();
    r.eta_ng = specfun::entropy_h(std::sqrt(std::max(0.0, r.det_sigma)));
    r.ground_energy = ground_energy(spec);
    r.omega_r = reference_frequency(spec);
    if (r.omega_r) {
        if (*r.omega_r > 0.0) {
            // The reference is centred at x = 0: the potential minimum for every
            // family here (Morse coordinates already measure displacement from it).
            const double ov = overlap(gs, harmonic_reference_state(grid, *r.omega_r, 0.0));
            r.fidelity_to_reference = ov * ov;
            r.eta_b = std::sqrt(std::max(0.0, 1.0 - std::abs(ov)));
        } else {
            // Zero-frequency reference (Fellows-Smith at p = p+) is infinitely
            // broad and orthogonal in the limit.
            r.fidelity_to_reference = 0.0;
            r.eta_b = 1.0;
        }
    }

    r.diagnostics.grid = grid;
    r.diagnostics.norm_defect = gs.norm_defect;
    if (const auto* m = std::get_if<Morse>(&spec)) {
        const double edge = 2.0 * std::sqrt(2.0 * m->depth);
        if (m->alpha > kMorseEdgeWarningFraction * edge) {
            std::ostringstream os;
            os << "alpha=" << m->alpha << " is within 2% of the bound-state limit " << edge
               << "; quadrature accuracy degrades as eta_ng diverges";
            r.diagnostics.warnings.push_back(os.str());
        }
    }
    return r;
}

std::optional<double> eta_bures(const PotentialSpec& spec, const GridOptions& options) {
    validate(spec);
    if (!reference_frequency(spec)) return std::nullopt;
    return measure_report(spec, options).eta_b;
}

double eta_ng(const PotentialSpec& spec, const GridOptions& options) {
    return measure_report(spec, options).eta_ng;
}

GaussianState reference_gaussian(const CovarianceMatrix& cov) {
    if (!(cov.det() >= 0.25 - 1e-6)) {
        throw Error(ErrorKind::UnphysicalCovariance,
                    "reference_gaussian: det sigma below the Heisenberg bound 1/4");
    }
    return GaussianState{cov.mean_x, cov.mean_p, cov};
}

double wigner_gaussian(const GaussianState& state, double x, double p) {
    const CovarianceMatrix& s = state.covariance;
    const double det = s.det();
    if (!(det > 0.0)) {
        throw Error(ErrorKind::SingularCovariance, "wigner_gaussian: singular covariance");
    }
    const double dx = x - state.mean_x;
    const double dp = p - state.mean_p;
    const double quad = (s.var_p * dx * dx - 2.0 * s.cov_xp * dx * dp + s.var_x * dp * dp) / det;
    return std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
}

}  // namespace nlosc
