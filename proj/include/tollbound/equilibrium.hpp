#ifndef TOLLBOUND_EQUILIBRIUM_HPP
#define TOLLBOUND_EQUILIBRIUM_HPP

// Nash flows of the tolled two-link game for finite-support sensitivity
// distributions. All entry points expect a normalized network (b1 <= b2) and
// throw std::invalid_argument otherwise.

#include "tollbound/game.hpp"

#include <optional>
#include <vector>

namespace tollbound {

// How one atom of the distribution is routed: `on_first` of its `mass` uses
// link 1, the remainder link 2.
struct AtomRoute {
    double sensitivity;
    double mass;
    double on_first;
};

struct NashOutcome {
    Flow flow;
    // Sensitivity of a user with equal cost on both links at `flow`; empty
    // when k = 0 or when the costs are parallel in s.
    std::optional<double> indifferent;
    std::vector<AtomRoute> routes;
};

// Clipped homogeneous Nash flow on link 1,
//   f1 = ((1 + s k) a2 + b2 - b1) / ((1 + s k)(a1 + a2)),
// or 1 when both links are constant.
double homogeneous_first_flow(const Network& network, double sensitivity, TollScale k);

NashOutcome nash_flow_homogeneous(const Network& network, double sensitivity, TollScale k);

// Solves (1 + S k) a1 f1 + b1 = (1 + S k) a2 f2 + b2 for S. Requires k > 0.
// Empty when no single type is indifferent (a1 f1 == a2 f2 or b1 == b2).
std::optional<double> indifferent_sensitivity(const Network& network, TollScale k,
                                              const Flow& flow);

// Low sensitivities fill link 1 first; at most one atom splits.
NashOutcome nash_flow(const Network& network, const SensitivityDistribution& dist, TollScale k);

// Assigns the lowest sensitivities to link 1 until it carries flow.first().
NashOutcome threshold_outcome(const SensitivityDistribution& dist, const Flow& flow);

inline constexpr double nash_tolerance = 1e-9;

// True iff every atom only uses links that are cost-minimal for it (within tol)
// and the routes are consistent with the distribution and the flow.
bool verify_nash(const Network& network, const SensitivityDistribution& dist, TollScale k,
                 const NashOutcome& outcome, double tol = nash_tolerance);
bool verify_nash(const Network& network, const SensitivityDistribution& dist, TollScale k,
                 const Flow& flow, double tol = nash_tolerance);

double price_of_anarchy(const Network& network, const SensitivityDistribution& dist, TollScale k);

} // namespace tollbound

#endif
