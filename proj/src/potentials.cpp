#include "nlosc/potentials.hpp"

#include <algorithm>
#include <cassert>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>

#include "nlosc/error.hpp"
#include "nlosc/specfun.hpp"

namespace nlosc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kBoundStateEps = 1e-12;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); }

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// ln cosh(y) without overflow.
double log_cosh(double y) {
    const double ay = std::abs(y);
    return ay + std::log1p(std::exp(-2.0 * ay)) - std::numbers::ln2;
}

// (ln Phi((3+p)/2, 3/2; x^2) - ln Phi((1+p)/2, 1/2; x^2)), the ratio entering V_F.
double fellows_smith_log_ratio(double p, double x2) {
    return specfun::log_kummer_phi((3.0 + p) / 2.0, 1.5, x2) -
           specfun::log_kummer_phi((1.0 + p) / 2.0, 0.5, x2);
}

double number(std::string_view text, std::string_view key) {
    const std::string s(text);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw Error(ErrorKind::Parse,
                    "cannot parse value '" + s + "' for parameter " + std::string(key));
    }
    return v;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

void validate(const PotentialSpec& spec, double perturbative_guard) {
    std::visit(
        overloaded{
            [](const Harmonic& h) {
                if (!positive_finite(h.omega)) invalid("harmonic: omega must be > 0");
            },
            [](const Morse& m) {
                if (!positive_finite(m.depth) || !positive_finite(m.alpha)) {
                    invalid("morse: D and alpha must be > 0");
                }
                if (!(morse_n(m.depth, m.alpha) > kBoundStateEps)) {
                    invalid("morse: bound-state constraint violated, need alpha < 2*sqrt(2D) = " +
                            fmt(2.0 * std::sqrt(2.0 * m.depth)) + " (got alpha=" +
                            fmt(m.alpha) + ")");
                }
            },
            [](const ModifiedPoschlTeller& m) {
                if (!positive_finite(m.depth) || !positive_finite(m.alpha)) {
                    invalid("mpt: D and alpha must be > 0");
                }
            },
            [](const ModifiedIsotonic& m) {
                if (!positive_finite(m.a)) invalid("mio: a must be > 0");
            },
            [](const FellowsSmith& f) {
                if (!std::isfinite(f.p) || !(f.p > -1.0) || f.p > 0.0) {
                    invalid("fs: p must lie in (-1, 0] (got p=" + fmt(f.p) + ")");
                }
            },
            [perturbative_guard](const PerturbedHarmonic& ph) {
                if (!positive_finite(ph.omega)) invalid("pert: omega must be > 0");
                if (!std::isfinite(ph.eps3) || !std::isfinite(ph.eps4) ||
                    std::abs(ph.eps3) > perturbative_guard ||
                    std::abs(ph.eps4) > perturbative_guard) {
                    invalid("pert: |eps3|, |eps4| must not exceed the perturbative guard " +
                            fmt(perturbative_guard));
                }
            },
        },
        spec);
}

std::string_view family_name(const PotentialSpec& spec) {
    return std::visit(overloaded{
                          [](const Harmonic&) { return std::string_view("harmonic"); },
                          [](const Morse&) { return std::string_view("morse"); },
                          [](const ModifiedPoschlTeller&) { return std::string_view("mpt"); },
                          [](const ModifiedIsotonic&) { return std::string_view("mio"); },
                          [](const FellowsSmith&) { return std::string_view("fs"); },
                          [](const PerturbedHarmonic&) { return std::string_view("pert"); },
                      },
                      spec);
}

std::vector<std::string> parameter_names(const PotentialSpec& spec) {
    return std::visit(overloaded{
                          [](const Harmonic&) { return std::vector<std::string>{"omega"}; },
                          [](const Morse&) { return std::vector<std::string>{"D", "alpha"}; },
                          [](const ModifiedPoschlTeller&) {
                              return std::vector<std::string>{"D", "alpha"};
                          },
                          [](const ModifiedIsotonic&) { return std::vector<std::string>{"a"}; },
                          [](const FellowsSmith&) { return std::vector<std::string>{"p"}; },
                          [](const PerturbedHarmonic&) {
                              return std::vector<std::string>{"omega", "eps3", "eps4"};
                          },
                      },
                      spec);
}

double parameter(const PotentialSpec& spec, std::string_view name) {
    const auto get = [&](std::initializer_list<std::pair<std::string_view, double>> kv) {
        for (const auto& [k, v] : kv) {
            if (k == name) return v;
        }
        throw Error(ErrorKind::Parse, std::string(family_name(spec)) + " has no parameter '" +
                                          std::string(name) + "'");
    };
    return std::visit(
        overloaded{
            [&](const Harmonic& h) { return get({{"omega", h.omega}}); },
            [&](const Morse& m) { return get({{"D", m.depth}, {"alpha", m.alpha}}); },
            [&](const ModifiedPoschlTeller& m) {
                return get({{"D", m.depth}, {"alpha", m.alpha}});
            },
            [&](const ModifiedIsotonic& m) { return get({{"a", m.a}}); },
            [&](const FellowsSmith& f) { return get({{"p", f.p}}); },
            [&](const PerturbedHarmonic& ph) {
                return get({{"omega", ph.omega}, {"eps3", ph.eps3}, {"eps4", ph.eps4}});
            },
        },
        spec);
}

PotentialSpec with_parameter(PotentialSpec spec, std::string_view name, double value) {
    bool found = false;
    const auto set = [&](std::string_view key, double& slot) {
        if (key == name) {
            slot = value;
            found = true;
        }
    };
    std::visit(overloaded{
                   [&](Harmonic& h) { set("omega", h.omega); },
                   [&](Morse& m) {
                       set("D", m.depth);
                       set("alpha", m.alpha);
                   },
                   [&](ModifiedPoschlTeller& m) {
                       set("D", m.depth);
                       set("alpha", m.alpha);
                   },
                   [&](ModifiedIsotonic& m) { set("a", m.a); },
                   [&](FellowsSmith& f) { set("p", f.p); },
                   [&](PerturbedHarmonic& ph) {
                       set("omega", ph.omega);
                       set("eps3", ph.eps3);
                       set("eps4", ph.eps4);
                   },
               },
               spec);
    if (!found) {
        throw Error(ErrorKind::Parse, std::string(family_name(spec)) + " has no parameter '" +
                                          std::string(name) + "'");
    }
    return spec;
}

PotentialSpec parse_potential(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view family = text.substr(0, colon);
    std::map<std::string, double, std::less<>> values;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                throw Error(ErrorKind::Parse,
                            "expected key=value in potential spec, got '" + std::string(item) + "'");
            }
            const std::string key(item.substr(0, eq));
            if (values.contains(key)) {
                throw Error(ErrorKind::Parse, "duplicate parameter '" + key + "'");
            }
            values[key] = number(item.substr(eq + 1), key);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }

    PotentialSpec spec;
    if (family == "harmonic") {
        spec = Harmonic{};
    } else if (family == "morse") {
        spec = Morse{};
    } else if (family == "mpt") {
        spec = ModifiedPoschlTeller{};
    } else if (family == "mio") {
        spec = ModifiedIsotonic{};
    } else if (family == "fs") {
        spec = FellowsSmith{};
    } else if (family == "pert") {
        spec = PerturbedHarmonic{};
    } else {
        throw Error(ErrorKind::Parse,
                    "unknown potential family '" + std::string(family) +
                        "' (expected harmonic, morse, mpt, mio, fs or pert)");
    }

    // Perturbed oscillator parameters default to omega=1 and no perturbation.
    const bool all_required = !std::holds_alternative<PerturbedHarmonic>(spec);
    for (const auto& name : parameter_names(spec)) {
        const auto it = values.find(name);
        if (it == values.end()) {
            if (all_required) {
                throw Error(ErrorKind::Parse, std::string(family) + ": missing parameter '" +
                                                  name + "'");
            }
            continue;
        }
        spec = with_parameter(spec, name, it->second);
        values.erase(it);
    }
    if (!values.empty()) {
        throw Error(ErrorKind::Parse, std::string(family) + ": unknown parameter '" +
                                          values.begin()->first + "'");
    }
    return spec;
}

std::string format_potential(const PotentialSpec& spec) {
    std::string out(family_name(spec));
    char sep = ':';
    for (const auto& name : parameter_names(spec)) {
        out += sep;
        out += name + "=" + fmt(parameter(spec, name));
        sep = ',';
    }
    return out;
}

double evaluate_potential(const PotentialSpec& spec, double x) {
    validate(spec);
    return std::visit(
        overloaded{
            [x](const Harmonic& h) { return 0.5 * h.omega * h.omega * x * x; },
            [x](const Morse& m) {
                const double e = std::exp(-m.alpha * x);
                return m.depth * (e * e - 2.0 * e);
            },
            [x](const ModifiedPoschlTeller& m) {
                const double c = std::cosh(m.alpha * x);
                return -m.depth / (c * c);
            },
            [x](const ModifiedIsotonic& m) {
                const double ax2 = m.a * x * x;
                assert(ax2 + 1.0 > 0.0);
                return 0.5 * (x * x + 4.0 * (m.a + 2.0) * (ax2 - 1.0) /
                                          (m.a * (ax2 + 1.0) * (ax2 + 1.0)));
            },
            [x](const FellowsSmith& f) {
                const double p = f.p;
                const double x2 = x * x;
                // With r = Phi3/Phi1 (formed from logs, both grow like e^{x^2}):
                // 4(1+p) x^2 Phi3/Phi1^2 [(1+p)Phi3 - Phi1] = 4(1+p) x^2 r [(1+p) r - 1].
                const double ratio = std::exp(fellows_smith_log_ratio(p, x2));
                return -2.0 * p + 0.5 * x2 + 4.0 * (1.0 + p) * x2 * ratio * ((1.0 + p) * ratio - 1.0);
            },
            [x](const PerturbedHarmonic& ph) {
                const double x2 = x * x;
                return 0.5 * ph.omega * ph.omega * x2 + ph.eps3 * x2 * x + ph.eps4 * x2 * x2;
            },
        },
        spec);
}

double log_ground_state_amplitude(const PotentialSpec& spec, double x) {
    validate(spec);
    const double log_pi = std::log(std::numbers::pi);
    return std::visit(
        overloaded{
            [&](const Harmonic& h) {
                return 0.25 * (std::log(h.omega) - log_pi) - 0.5 * h.omega * x * x;
            },
            [&](const Morse& m) {
                const double n = morse_n(m.depth, m.alpha);
                const double prefactor = n * std::log(2.0 * n + 1.0) +
                                         0.5 * (std::log(m.alpha) - specfun::log_gamma(2.0 * n));
                return prefactor - m.alpha * n * x - (n + 0.5) * std::exp(-m.alpha * x);
            },
            [&](const ModifiedPoschlTeller& m) {
                const double s = poschl_teller_s(m.depth, m.alpha);
                const double prefactor =
                    -0.25 * log_pi + 0.5 * (std::log(m.alpha) + specfun::log_gamma(0.5 + s) -
                                            specfun::log_gamma(s));
                return prefactor - s * log_cosh(m.alpha * x);
            },
            [&](const ModifiedIsotonic& m) {
                const double a = m.a;
                const double prefactor =
                    -0.25 * log_pi - 0.5 * specfun::log_kummer_phi(4.0 / a, 0.5 + 4.0 / a, 1.0 / a);
                return prefactor - 0.5 * x * x - (2.0 / a) * std::log(1.0 / a + x * x);
            },
            [&](const FellowsSmith& f) {
                const double p = f.p;
                const double prefactor =
                    -0.25 * log_pi + 0.5 * (p * std::numbers::ln2 - specfun::log_gamma(1.0 + p)) +
                    specfun::log_gamma(1.0 + 0.5 * p);
                return prefactor + 0.5 * x * x -
                       specfun::log_kummer_phi((1.0 + p) / 2.0, 0.5, x * x);
            },
            [](const PerturbedHarmonic&) -> double {
                throw Error(ErrorKind::Unsupported,
                            "ground_state_amplitude: the perturbed oscillator has no closed-form "
                            "amplitude; use the perturbation module");
            },
        },
        spec);
}

double ground_state_amplitude(const PotentialSpec& spec, double x) {
    return std::exp(log_ground_state_amplitude(spec, x));
}

std::optional<double> reference_frequency(const PotentialSpec& spec) {
    validate(spec);
    return std::visit(
        overloaded{
            [](const Harmonic& h) -> std::optional<double> { return h.omega; },
            [](const Morse& m) -> std::optional<double> {
                return std::sqrt(2.0 * m.depth) * m.alpha;
            },
            [](const ModifiedPoschlTeller& m) -> std::optional<double> {
                return std::sqrt(2.0 * m.depth) * m.alpha;
            },
            [](const ModifiedIsotonic& m) -> std::optional<double> {
                return std::sqrt(25.0 + 12.0 * m.a);
            },
            [](const FellowsSmith& f) -> std::optional<double> {
                if (f.p < kFellowsSmithPPlus) return std::nullopt;
                // 1 + 8p(1+p) in factored form, exactly zero at p+.
                return std::sqrt(std::max(0.0, 8.0 * (f.p - kFellowsSmithPPlus) * (f.p - kFellowsSmithPMinus)));
            },
            [](const PerturbedHarmonic& ph) -> std::optional<double> { return ph.omega; },
        },
        spec);
}

double ground_energy(const PotentialSpec& spec) {
    validate(spec);
    return std::visit(overloaded{
                          [](const Harmonic& h) { return 0.5 * h.omega; },
                          [](const Morse& m) {
                              const double n = morse_n(m.depth, m.alpha);
                              return -0.5 * m.alpha * m.alpha * n * n;
                          },
                          [](const ModifiedPoschlTeller& m) {
                              const double s = poschl_teller_s(m.depth, m.alpha);
                              return -0.5 * m.alpha * m.alpha * s * s;
                          },
                          [](const ModifiedIsotonic& m) { return 0.5 - 4.0 / m.a; },
                          [](const FellowsSmith& f) { return 0.5 - f.p; },
                          [](const PerturbedHarmonic&) -> double {
                              throw Error(ErrorKind::Unsupported,
                                          "ground_energy: no closed form for the perturbed "
                                          "oscillator");
                          },
                      },
                      spec);
}

double morse_n(double depth, double alpha) { return -0.5 + std::sqrt(2.0 * depth) / alpha; }

int morse_bound_state_count(double depth, double alpha) {
    const double n = morse_n(depth, alpha);
    if (!(n > kBoundStateEps)) return 0;
    // Levels n' = 0, 1, ... are bound while n' < N.
    return static_cast<int>(std::ceil(n - kBoundStateEps));
}

double morse_energy_single_alpha(double depth, double alpha) {
    const double n = morse_n(depth, alpha);
    return -0.5 * alpha * n * n;
}

double poschl_teller_s(double depth, double alpha) {
    return 0.5 * (-1.0 + std::sqrt(1.0 + 8.0 * depth / (alpha * alpha)));
}

WellStructure fellows_smith_well_structure(double p) {
    if (!std::isfinite(p) || !(p > -1.0) || p > 0.0) {
        throw Error(ErrorKind::Domain, "fellows_smith_well_structure: p must lie in (-1, 0]");
    }
    WellStructure out;
    if (p >= kFellowsSmithPPlus) {
        out.region = WellRegion::SingleWell;
    } else if (p >= kFellowsSmithPMinus) {
        out.region = WellRegion::DoubleWell;
    } else {
        out.region = WellRegion::TripleWell;
    }
    return out;
}

const char* to_string(WellRegion region) {
    switch (region) {
        case WellRegion::SingleWell: return "single-well";
        case WellRegion::DoubleWell: return "double-well";
        case WellRegion::TripleWell: return "triple-well";
    }
    return "unknown";
}

double feature_length(const PotentialSpec& spec) {
    validate(spec);
    return std::visit(
        overloaded{
            [](const Harmonic& h) { return 1.0 / std::sqrt(h.omega); },
            [](const Morse& m) {
                return std::min(1.0 / m.alpha, 1.0 / std::sqrt(std::sqrt(2.0 * m.depth) * m.alpha));
            },
            [](const ModifiedPoschlTeller& m) {
                return std::min(1.0 / m.alpha, 1.0 / std::sqrt(std::sqrt(2.0 * m.depth) * m.alpha));
            },
            [](const ModifiedIsotonic& m) {
                return std::min({1.0, 1.0 / std::sqrt(m.a), 1.0 / std::sqrt(std::sqrt(25.0 + 12.0 * m.a))});
            },
            [](const FellowsSmith&) { return 0.25; },
            [](const PerturbedHarmonic& ph) { return 1.0 / std::sqrt(ph.omega); },
        },
        spec);
}

double ground_state_peak(const PotentialSpec& spec) {
    if (const auto* m = std::get_if<Morse>(&spec)) {
        const double n = morse_n(m->depth, m->alpha);
        return std::log((n + 0.5) / n) / m->alpha;
    }
    return 0.0;
}

}  // namespace nlosc
