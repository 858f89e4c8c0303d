#ifndef TOLLBOUND_TOLL_DESIGN_HPP
#define TOLLBOUND_TOLL_DESIGN_HPP

// Optimal scaled marginal-cost tolls and price-of-anarchy guarantees for the
// four information regimes:
//   A  network unknown, mean unknown
//   B  network unknown, mean known
//   C  network known,   mean unknown
//   D  network known,   mean known

#include "tollbound/game.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace tollbound {

enum class Regime { A, B, C, D };

char regime_letter(Regime r);
// Accepts "A".."D" (case-insensitive); throws std::invalid_argument otherwise.
Regime parse_regime(std::string_view text);
bool needs_mean(Regime r);
bool needs_network(Regime r);

struct Diagnostics {
    std::optional<double> R;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> gamma;
    // Regime B only: upper-side minus lower-side average-toll residual at k.
    std::optional<double> k_avg_residual;
    // Regime D only: fixed-point iterations and the extreme indifferent types.
    std::optional<int> iterations;
    std::optional<double> s_l1;
    std::optional<double> s_u2;
};

struct RegimeResult {
    TollScale k;
    double poa_bound;
    Regime regime;
    Diagnostics diagnostics;
};

// --- Regime A ---------------------------------------------------------------

TollScale k_regime_A(const SensitivityBounds& bounds);
double poa_bound_A(const SensitivityBounds& bounds);
// 4/(4x_L - x_L^2) - x_U^2/(4(x_U - 1)) with x = 1 + s k: the difference of the
// worst-case PoA of the low and high homogeneous populations. Zero at k_A.
double equal_poa_gap_A(const SensitivityBounds& bounds, double k);

// --- Regime B ---------------------------------------------------------------

// (R^2 - gamma R + gamma) / (gamma - gamma^2/4) for gamma in (0, 2].
double poa_linear_constant(double gamma, double R);

// l1 = f, l2 = (1 + sL k) R  and  l1 = f, l2 = (1 + sU k) R.
Network construct_G_beta(const SensitivityBounds& bounds, double sbar, double k);
Network construct_G_alpha(const SensitivityBounds& bounds, double sbar, double k);

// Two-point distribution on {sL, sU} with mean sbar.
SensitivityDistribution extreme_bimodal(const SensitivityBounds& bounds, double sbar);

double k_avg_residual(const SensitivityBounds& bounds, double sbar, double k);

TollScale k_regime_B(const SensitivityBounds& bounds, double sbar);
double poa_bound_B(const SensitivityBounds& bounds, double sbar);

// --- Regime C ---------------------------------------------------------------

double k_geometric_mean(const SensitivityBounds& bounds);
TollScale k_regime_C(const Network& network, const SensitivityBounds& bounds);
double poa_bound_C(const SensitivityBounds& bounds);

// --- Regime D ---------------------------------------------------------------

double extreme_type_u2(const SensitivityBounds& bounds, double sbar, double beta);
double solve_beta(const SensitivityBounds& bounds, double sbar);

struct FixedPointToll {
    double k;
    int iterations;
    double s_l1;
    double s_u2;
};

FixedPointToll k_regime_D_detail(const Network& network, const SensitivityBounds& bounds,
                                 double sbar);
TollScale k_regime_D(const Network& network, const SensitivityBounds& bounds, double sbar);
double poa_bound_D(const SensitivityBounds& bounds, double sbar);

// --- Dispatch ---------------------------------------------------------------

// B and D need `sbar`; C and D need `network`. Throws std::invalid_argument
// when a required argument is missing.
RegimeResult design_toll(Regime regime, const SensitivityBounds& bounds,
                         std::optional<double> sbar = std::nullopt,
                         std::optional<Network> network = std::nullopt);

struct WorstMean {
    double sbar;
    double bound;
};

// Maximum of poa_bound_B or poa_bound_D over sbar in [sL, sU]: 201-point grid,
// then golden-section refinement around the best grid point to 1e-6 in sbar.
WorstMean worst_case_over_mean(const SensitivityBounds& bounds, Regime regime);

} // namespace tollbound

#endif
