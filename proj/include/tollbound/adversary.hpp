#ifndef TOLLBOUND_ADVERSARY_HPP
#define TOLLBOUND_ADVERSARY_HPP

// Brute-force adversary: worst-case price of anarchy over linear-constant
// networks and bimodal sensitivity distributions, extreme distributions, and
// randomized checks of the reduction lemmas.

#include "tollbound/game.hpp"
#include "tollbound/toll_design.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tollbound {

struct GridSpec {
    int n_gamma = 400;
    int n_types = 200;
    int n_mass = 99;

    void validate() const;
    // Halves every spacing, so the refined grid contains the coarse one.
    GridSpec doubled() const { return {2 * n_gamma - 1, 2 * n_types - 1, 2 * n_mass + 1}; }
};

// s_l maximizes and s_u minimizes the Nash flow on link 1 over distributions
// with mean sbar. `pinned_l` / `pinned_u` are the types S_l1 and S_u2 of the
// returned bimodals.
struct ExtremeDistributions {
    SensitivityDistribution s_l;
    SensitivityDistribution s_u;
    double flow_l;
    double flow_u;
    double pinned_l;
    double pinned_u;
};

ExtremeDistributions extreme_distributions(const Network& network, const SensitivityBounds& bounds,
                                           double sbar, double k);

// Maps a normalized network to l1 = f, l2 = gamma such that the same
// distribution and toll produce a Nash flow with at least the same PoA.
// Shift by b1, rescale by 1/a1, then replace link 2 by the constant cost the
// marginal user perceives there at the Nash flow.
Network reduce_to_linear_constant(const Network& network, TollScale k,
                                  const SensitivityDistribution& dist);

struct AdversaryReport {
    Regime regime;
    SensitivityBounds bounds;
    std::optional<double> sbar;
    double empirical_poa;
    double gamma_witness;
    double k_witness;
    double s1;
    double s2;
    double mass1;
    double theoretical_bound;
    double gap;
    long long evaluations;

    Network witness_network() const { return Network::linear_constant(gamma_witness); }
    SensitivityDistribution witness_distribution() const;

    static std::string csv_header();
    std::string csv_row() const;
};

// Log-spaced grid on [1e-3, 4] with the regime's analytical witnesses
// inserted exactly; sorted and deduplicated.
std::vector<double> gamma_grid(Regime regime, const SensitivityBounds& bounds,
                               std::optional<double> sbar, int n_gamma);

// Max PoA over the gamma grid and bimodal distributions under the regime's
// optimal toll (per network for C and D). Ties keep the lowest gamma, then the
// lowest S1.
AdversaryReport empirical_poa_regime(Regime regime, const SensitivityBounds& bounds,
                                     std::optional<double> sbar, const GridSpec& grid = {});

struct LemmaReport {
    std::uint64_t seed;
    int samples;
    int bimodal_failures;
    int glc_failures;
    int extremal_failures;
    std::optional<std::string> first_counterexample;

    bool passed() const
    {
        return bimodal_failures == 0 && glc_failures == 0 && extremal_failures == 0;
    }
};

inline constexpr std::uint64_t default_seed = 20190611;

// (i) every sampled multi-atom distribution has a bimodal with the same mean
// and Nash flow; (ii) on the gamma grid the worst network is within grid
// resolution of G_alpha or G_beta; (iii) reduce_to_linear_constant never
// lowers the PoA.
LemmaReport lemma_checks(const SensitivityBounds& bounds, double sbar, double k, int samples,
                         std::uint64_t seed = default_seed);

} // namespace tollbound

#endif
