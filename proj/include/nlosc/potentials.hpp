#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nlosc {

struct Harmonic {
    double omega = 1.0;
};

// V(x) = D (e^{-2 alpha x} - 2 e^{-alpha x}); x is the displacement from the minimum.
struct Morse {
    double depth = 1.0;
    double alpha = 1.0;
};

// V(x) = -D / cosh^2(alpha x)
struct ModifiedPoschlTeller {
    double depth = 1.0;
    double alpha = 1.0;
};

struct ModifiedIsotonic {
    double a = 1.0;
};

// Supersymmetric partner family of the harmonic oscillator, p in (-1, 0].
struct FellowsSmith {
    double p = 0.0;
};

// 1/2 omega^2 x^2 + eps3 x^3 + eps4 x^4, treated perturbatively.
struct PerturbedHarmonic {
    double omega = 1.0;
    double eps3 = 0.0;
    double eps4 = 0.0;
};

using PotentialSpec = std::variant<Harmonic, Morse, ModifiedPoschlTeller, ModifiedIsotonic,
                                   FellowsSmith, PerturbedHarmonic>;

inline constexpr double kDefaultPerturbativeGuard = 0.5;

/// Throws Error{InvalidSpec} when the parameters are outside the family's domain.
void validate(const PotentialSpec& spec, double perturbative_guard = kDefaultPerturbativeGuard);

/// Parses the textual form, e.g. "morse:D=1,alpha=1" or "pert:omega=1,eps3=0.1,eps4=0.2".
/// Only syntax is checked here; call validate() for the parameter domain.
PotentialSpec parse_potential(std::string_view text);
std::string format_potential(const PotentialSpec& spec);

/// Short family tag used in the text form ("morse", "mpt", ...).
std::string_view family_name(const PotentialSpec& spec);
std::vector<std::string> parameter_names(const PotentialSpec& spec);
double parameter(const PotentialSpec& spec, std::string_view name);
PotentialSpec with_parameter(PotentialSpec spec, std::string_view name, double value);

double evaluate_potential(const PotentialSpec& spec, double x);

/// Analytic ground-state amplitude (non-negative). The prefactors are not
/// relied on: everything downstream renormalizes on the grid.
double ground_state_amplitude(const PotentialSpec& spec, double x);

/// Natural log of ground_state_amplitude; finite wherever the amplitude
/// would underflow.
double log_ground_state_amplitude(const PotentialSpec& spec, double x);

/// Frequency of the harmonic approximation at the potential minimum, when
/// one is meaningful (absent for Fellows-Smith below p+).
std::optional<double> reference_frequency(const PotentialSpec& spec);

double ground_energy(const PotentialSpec& spec);

/// N = -1/2 + sqrt(2D)/alpha
double morse_n(double depth, double alpha);

/// Number of Morse bound states: ceil(N) for N > 0, else 0.
int morse_bound_state_count(double depth, double alpha);

/// Ground energy with the single power of alpha, -alpha N^2 / 2. Kept only
/// so the oracle can show the disagreement with the FD eigenvalue.
double morse_energy_single_alpha(double depth, double alpha);

/// s = (-1 + sqrt(1 + 8D/alpha^2)) / 2
double poschl_teller_s(double depth, double alpha);

enum class WellRegion { SingleWell, DoubleWell, TripleWell };

inline constexpr double kFellowsSmithPPlus = -0.5 + 0.35355339059327376220;
inline constexpr double kFellowsSmithPMinus = -0.5 - 0.35355339059327376220;

struct WellStructure {
    WellRegion region = WellRegion::SingleWell;
    double p_plus = kFellowsSmithPPlus;
    double p_minus = kFellowsSmithPMinus;
};

WellStructure fellows_smith_well_structure(double p);
const char* to_string(WellRegion region);

/// Smallest length over which the ground state changes appreciably.
double feature_length(const PotentialSpec& spec);

/// Approximate location of the ground-state maximum (used to seed grids).
double ground_state_peak(const PotentialSpec& spec);

}  // namespace nlosc
