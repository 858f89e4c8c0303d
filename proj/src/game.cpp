#include "tollbound/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tollbound {

namespace {

bool finite_nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

} // namespace

Latency::Latency(double slope, double offset) : slope_(slope), offset_(offset)
{
    if (!finite_nonnegative(slope) || !finite_nonnegative(offset))
        throw std::invalid_argument("latency coefficients must be finite and nonnegative");
}

Network::Network(Latency first, Latency second) : first_(first), second_(second)
{
    if (first_.is_zero() && second_.is_zero())
        throw std::invalid_argument("network has two identically zero links");
}

Network Network::linear_constant(double gamma) { return {Latency(1.0, 0.0), Latency(0.0, gamma)}; }

Network Network::scaled(double factor) const
{
    if (!(std::isfinite(factor) && factor > 0.0))
        throw std::invalid_argument("scale factor must be positive");
    return {Latency(first_.slope() * factor, first_.offset() * factor),
            Latency(second_.slope() * factor, second_.offset() * factor)};
}

Network normalize(const Network& network)
{
    if (network.is_normalized())
        return network;
    return {network.second(), network.first()};
}

Flow::Flow(double first, double second) : first_(first), second_(second)
{
    if (!std::isfinite(first) || !std::isfinite(second) || first < -flow_tolerance ||
        second < -flow_tolerance || std::abs(first + second - 1.0) > flow_tolerance)
        throw std::invalid_argument("flow must lie on the unit simplex");
    first_ = std::max(first_, 0.0);
    second_ = std::max(second_, 0.0);
}

Flow Flow::with_first(double first)
{
    const double f = std::clamp(first, 0.0, 1.0);
    return {f, 1.0 - f};
}

SensitivityBounds::SensitivityBounds(double lower, double upper) : lower_(lower), upper_(upper)
{
    if (!(std::isfinite(lower) && std::isfinite(upper) && lower > 0.0 && lower <= upper))
        throw std::invalid_argument("sensitivity bounds require 0 < sL <= sU");
}

void SensitivityBounds::require_mean(double mean) const
{
    if (!(mean >= lower_ && mean <= upper_))
        throw std::invalid_argument("mean sensitivity " + std::to_string(mean) +
                                    " outside [sL, sU]");
}

double SensitivityBounds::lower_mass(double mean) const
{
    require_mean(mean);
    if (is_degenerate())
        return 1.0;
    return (upper_ - mean) / (upper_ - lower_);
}

SensitivityDistribution::SensitivityDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms))
{
    if (atoms_.empty())
        throw std::invalid_argument("distribution needs at least one atom");
    double total = 0.0;
    for (const Atom& a : atoms_) {
        if (!(std::isfinite(a.sensitivity) && a.sensitivity > 0.0))
            throw std::invalid_argument("sensitivities must be positive");
        if (!(std::isfinite(a.mass) && a.mass > 0.0 && a.mass <= 1.0))
            throw std::invalid_argument("atom masses must lie in (0, 1]");
        total += a.mass;
    }
    if (std::abs(total - 1.0) > mass_tolerance)
        throw std::invalid_argument("atom masses must sum to 1");

    std::stable_sort(atoms_.begin(), atoms_.end(),
                     [](const Atom& x, const Atom& y) { return x.sensitivity < y.sensitivity; });
    std::vector<Atom> merged;
    merged.reserve(atoms_.size());
    for (const Atom& a : atoms_) {
        if (!merged.empty() && merged.back().sensitivity == a.sensitivity)
            merged.back().mass += a.mass;
        else
            merged.push_back(a);
    }
    atoms_ = std::move(merged);
}

SensitivityDistribution SensitivityDistribution::homogeneous(double sensitivity)
{
    return SensitivityDistribution({{sensitivity, 1.0}});
}

SensitivityDistribution SensitivityDistribution::bimodal(double low, double high, double mean)
{
    if (!(low <= mean && mean <= high))
        throw std::invalid_argument("bimodal mean must lie between its two types");
    if (mean == low)
        return homogeneous(low);
    if (mean == high)
        return homogeneous(high);
    const double m_low = (high - mean) / (high - low);
    return SensitivityDistribution({{low, m_low}, {high, 1.0 - m_low}});
}

double SensitivityDistribution::mean() const noexcept
{
    double m = 0.0;
    for (const Atom& a : atoms_)
        m += a.sensitivity * a.mass;
    return m;
}

bool SensitivityDistribution::within(const SensitivityBounds& bounds, double tol) const noexcept
{
    return bounds.contains(min_sensitivity(), tol) && bounds.contains(max_sensitivity(), tol);
}

TollScale::TollScale(double k) : k_(k)
{
    if (!finite_nonnegative(k))
        throw std::invalid_argument("toll scale k must be finite and nonnegative");
}

double total_latency(const Network& network, const Flow& flow)
{
    return flow.first() * network.first()(flow.first()) +
           flow.second() * network.second()(flow.second());
}

Flow optimal_flow(const Network& network)
{
    const double a1 = network.first().slope();
    const double a2 = network.second().slope();
    const double b1 = network.first().offset();
    const double b2 = network.second().offset();
    if (a1 + a2 == 0.0)
        return b1 <= b2 ? Flow(1.0, 0.0) : Flow(0.0, 1.0);
    return Flow::with_first((2.0 * a2 + b2 - b1) / (2.0 * (a1 + a2)));
}

double optimal_latency(const Network& network) { return total_latency(network, optimal_flow(network)); }

double user_cost(const Network& network, TollScale k, double sensitivity, Edge edge,
                 const Flow& flow)
{
    const Latency& l = network.edge(edge);
    const double f = flow.on(edge);
    return (1.0 + sensitivity * k.value()) * l.slope() * f + l.offset();
}

double price_of_anarchy(const Network& network, const Flow& equilibrium)
{
    const double opt = optimal_latency(network);
    const double eq = total_latency(network, equilibrium);
    if (opt == 0.0) {
        if (eq == 0.0)
            return 1.0;
        throw DegenerateNetwork("optimal total latency is zero but equilibrium latency is not");
    }
    return eq / opt;
}

} // namespace tollbound
