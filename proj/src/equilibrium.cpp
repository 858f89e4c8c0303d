#include "tollbound/equilibrium.hpp"

#include "tollbound/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace tollbound {

namespace {

void require_normalized(const Network& network)
{
    if (!network.is_normalized())
        throw std::invalid_argument("network must be normalized (b1 <= b2)");
}

std::optional<double> indifferent_or_none(const Network& network, TollScale k, const Flow& flow)
{
    if (k.value() == 0.0)
        return std::nullopt;
    return indifferent_sensitivity(network, k, flow);
}

// Cost on link 1 minus cost on link 2 for a user of sensitivity s at flow f1.
double cost_gap(const Network& network, double s, double k, double f1)
{
    const double a1 = network.first().slope();
    const double a2 = network.second().slope();
    return (1.0 + s * k) * ((a1 + a2) * f1 - a2) + network.first().offset() -
           network.second().offset();
}

} // namespace

double homogeneous_first_flow(const Network& network, double sensitivity, TollScale k)
{
    require_normalized(network);
    const double a1 = network.first().slope();
    const double a2 = network.second().slope();
    if (a1 + a2 == 0.0)
        return 1.0;
    const double x = 1.0 + sensitivity * k.value();
    const double f1 =
        (x * a2 + network.second().offset() - network.first().offset()) / (x * (a1 + a2));
    return std::clamp(f1, 0.0, 1.0);
}

NashOutcome nash_flow_homogeneous(const Network& network, double sensitivity, TollScale k)
{
    const double f1 = homogeneous_first_flow(network, sensitivity, k);
    const Flow flow = Flow::with_first(f1);
    return {flow, indifferent_or_none(network, k, flow), {{sensitivity, 1.0, f1}}};
}

std::optional<double> indifferent_sensitivity(const Network& network, TollScale k,
                                              const Flow& flow)
{
    if (k.value() == 0.0)
        throw std::invalid_argument("indifferent sensitivity needs k > 0");
    const double c =
        network.first().slope() * flow.first() - network.second().slope() * flow.second();
    // equal offsets: costs tie for every type or for none
    if (c == 0.0 || network.first().offset() == network.second().offset())
        return std::nullopt;
    const double s = ((network.second().offset() - network.first().offset()) / c - 1.0) / k.value();
    if (!std::isfinite(s))
        return std::nullopt;
    return s;
}

NashOutcome nash_flow(const Network& network, const SensitivityDistribution& dist, TollScale k)
{
    require_normalized(network);
    const auto atoms = dist.atoms();
    const std::size_t n = atoms.size();

    // cum[j] is the mass of all atoms below atom j.
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        cum[j + 1] = cum[j] + atoms[j].mass;

    auto marginal = [&](double f1) {
        const auto it = std::upper_bound(cum.begin() + 1, cum.end() - 1, f1);
        return static_cast<std::size_t>(it - (cum.begin() + 1));
    };
    const double kv = k.value();

    double f1 = 1.0;
    if (cost_gap(network, atoms[n - 1].sensitivity, kv, 1.0) > 0.0) {
        // The sign of the gap is monotone in f1: negative while a1 f1 < a2 f2,
        // and nondecreasing across atoms afterwards.
        auto sign = [&](double f) {
            return cost_gap(network, atoms[marginal(f)].sensitivity, kv, f) > 0.0 ? 1.0 : -1.0;
        };
        double approx = 0.0;
        if (sign(0.0) < 0.0)
            approx = bisect(sign, {0.0, 1.0, 1e-10, 200});

        // Snap to the exact equilibrium next to the bisection point: either a
        // split atom at its own homogeneous flow or a boundary between atoms.
        std::size_t j = marginal(approx);
        j = j == 0 ? 0 : j - 1;
        f1 = 1.0;
        for (; j < n; ++j) {
            const double h = homogeneous_first_flow(network, atoms[j].sensitivity, k);
            if (h <= cum[j]) {
                f1 = cum[j];
                break;
            }
            if (h <= cum[j + 1]) {
                f1 = h;
                break;
            }
        }
        if (std::abs(f1 - approx) > 1e-8)
            throw NumericalFailure("nash_flow: snapped flow disagrees with bisection");
    }

    NashOutcome out = threshold_outcome(dist, Flow::with_first(f1));
    out.indifferent = indifferent_or_none(network, k, out.flow);
    return out;
}

NashOutcome threshold_outcome(const SensitivityDistribution& dist, const Flow& flow)
{
    NashOutcome out{flow, std::nullopt, {}};
    double remaining = flow.first();
    for (const Atom& a : dist.atoms()) {
        // cumulative sums drift by a few ulps; keep whole atoms whole
        double on_first = std::clamp(remaining, 0.0, a.mass);
        if (on_first >= a.mass - flow_tolerance)
            on_first = a.mass;
        else if (on_first <= flow_tolerance)
            on_first = 0.0;
        remaining -= on_first;
        out.routes.push_back({a.sensitivity, a.mass, on_first});
    }
    return out;
}

bool verify_nash(const Network& network, const SensitivityDistribution& dist, TollScale k,
                 const NashOutcome& outcome, double tol)
{
    const auto atoms = dist.atoms();
    if (outcome.routes.size() != atoms.size())
        return false;
    double routed = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        const AtomRoute& r = outcome.routes[j];
        if (r.sensitivity != atoms[j].sensitivity || std::abs(r.mass - atoms[j].mass) > mass_tolerance)
            return false;
        if (r.on_first < -flow_tolerance || r.on_first > r.mass + flow_tolerance)
            return false;
        routed += r.on_first;

        const double c1 = user_cost(network, k, r.sensitivity, Edge::first, outcome.flow);
        const double c2 = user_cost(network, k, r.sensitivity, Edge::second, outcome.flow);
        if (r.on_first > flow_tolerance && c1 > c2 + tol)
            return false;
        if (r.mass - r.on_first > flow_tolerance && c2 > c1 + tol)
            return false;
    }
    return std::abs(routed - outcome.flow.first()) <= 1e-10;
}

bool verify_nash(const Network& network, const SensitivityDistribution& dist, TollScale k,
                 const Flow& flow, double tol)
{
    return verify_nash(network, dist, k, threshold_outcome(dist, flow), tol);
}

double price_of_anarchy(const Network& network, const SensitivityDistribution& dist, TollScale k)
{
    return price_of_anarchy(network, nash_flow(network, dist, k).flow);
}

} // namespace tollbound
