#include "tollbound/toll_design.hpp"

#include "tollbound/adversary.hpp"
#include "tollbound/equilibrium.hpp"
#include "tollbound/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace tollbound {

namespace {

bool endpoint_mean(const SensitivityBounds& bounds, double sbar)
{
    bounds.require_mean(sbar);
    return bounds.is_degenerate() || sbar == bounds.lower() || sbar == bounds.upper();
}

double poa_pair_B(const SensitivityBounds& bounds, double sbar, double k)
{
    const auto dist = extreme_bimodal(bounds, sbar);
    const double pb = price_of_anarchy(construct_G_beta(bounds, sbar, k), dist, TollScale(k));
    const double pa = price_of_anarchy(construct_G_alpha(bounds, sbar, k), dist, TollScale(k));
    return std::max(pa, pb);
}

// Indifferent type of an extreme distribution, or its pinned type when the
// indifference equation has no finite positive root.
double extreme_indifferent(const Network& network, double k, double flow, double pinned)
{
    const auto s = indifferent_sensitivity(network, TollScale(k), Flow::with_first(flow));
    if (s && std::isfinite(*s) && *s > 0.0)
        return *s;
    return pinned;
}

} // namespace

char regime_letter(Regime r)
{
    switch (r) {
    case Regime::A: return 'A';
    case Regime::B: return 'B';
    case Regime::C: return 'C';
    case Regime::D: return 'D';
    }
    return '?';
}

Regime parse_regime(std::string_view text)
{
    if (text.size() == 1) {
        switch (std::toupper(static_cast<unsigned char>(text[0]))) {
        case 'A': return Regime::A;
        case 'B': return Regime::B;
        case 'C': return Regime::C;
        case 'D': return Regime::D;
        default: break;
        }
    }
    throw std::invalid_argument("unknown regime '" + std::string(text) + "' (expected A, B, C or D)");
}

bool needs_mean(Regime r) { return r == Regime::B || r == Regime::D; }
bool needs_network(Regime r) { return r == Regime::C || r == Regime::D; }

TollScale k_regime_A(const SensitivityBounds& bounds)
{
    const double l = bounds.lower();
    const double u = bounds.upper();
    return TollScale((-l - u + std::sqrt(l * l + 14.0 * l * u + u * u)) / (2.0 * l * u));
}

double poa_bound_A(const SensitivityBounds& bounds)
{
    const double q = bounds.ratio();
    const double r = std::sqrt(q * q + 14.0 * q + 1.0);
    const double num = q - 1.0 + r;
    return num * num / (8.0 * q * (-q - 1.0 + r));
}

double equal_poa_gap_A(const SensitivityBounds& bounds, double k)
{
    const double xl = 1.0 + bounds.lower() * k;
    const double xu = 1.0 + bounds.upper() * k;
    return 4.0 / (4.0 * xl - xl * xl) - xu * xu / (4.0 * (xu - 1.0));
}

double poa_linear_constant(double gamma, double R)
{
    if (!(gamma > 0.0 && gamma <= 2.0))
        throw std::invalid_argument("poa_linear_constant needs gamma in (0, 2]");
    if (!(R >= 0.0 && R <= 1.0))
        throw std::invalid_argument("poa_linear_constant needs R in [0, 1]");
    return (R * R - gamma * R + gamma) / (gamma - gamma * gamma / 4.0);
}

Network construct_G_beta(const SensitivityBounds& bounds, double sbar, double k)
{
    return Network::linear_constant((1.0 + bounds.lower() * k) * bounds.lower_mass(sbar));
}

Network construct_G_alpha(const SensitivityBounds& bounds, double sbar, double k)
{
    return Network::linear_constant((1.0 + bounds.upper() * k) * bounds.lower_mass(sbar));
}

SensitivityDistribution extreme_bimodal(const SensitivityBounds& bounds, double sbar)
{
    bounds.require_mean(sbar);
    return SensitivityDistribution::bimodal(bounds.lower(), bounds.upper(), sbar);
}

double k_avg_residual(const SensitivityBounds& bounds, double sbar, double k)
{
    const double R = bounds.lower_mass(sbar);
    auto side = [&](double s) {
        const double sk = s * k;
        return 4.0 * (1.0 + sk - sk * R) / ((4.0 + R) * (1.0 + sk) + (sk + sk * sk) * R);
    };
    return side(bounds.upper()) - side(bounds.lower());
}

TollScale k_regime_B(const SensitivityBounds& bounds, double sbar)
{
    if (endpoint_mean(bounds, sbar))
        return TollScale(1.0 / sbar);
    const double k = minimize_unimodal([&](double k) { return poa_pair_B(bounds, sbar, k); },
                                       1.0 / bounds.upper(), 1.0 / bounds.lower());
    if (!std::isfinite(k))
        throw NumericalFailure("k_regime_B: no minimizing toll found");
    return TollScale(k);
}

double poa_bound_B(const SensitivityBounds& bounds, double sbar)
{
    if (endpoint_mean(bounds, sbar))
        return 1.0;
    return poa_pair_B(bounds, sbar, k_regime_B(bounds, sbar).value());
}

double k_geometric_mean(const SensitivityBounds& bounds)
{
    return 1.0 / std::sqrt(bounds.lower() * bounds.upper());
}

TollScale k_regime_C(const Network& network, const SensitivityBounds& bounds)
{
    const double kgm = k_geometric_mean(bounds);
    const double f1 = homogeneous_first_flow(normalize(network), bounds.lower(), TollScale(kgm));
    return TollScale(f1 >= 1.0 ? 0.0 : kgm);
}

double poa_bound_C(const SensitivityBounds& bounds)
{
    const double r = std::sqrt(bounds.ratio());
    return 4.0 / 3.0 * (1.0 - r / ((1.0 + r) * (1.0 + r)));
}

double extreme_type_u2(const SensitivityBounds& bounds, double sbar, double beta)
{
    const double R = bounds.lower_mass(sbar);
    const double denom = 1.0 + R - beta;
    if (!(denom > 0.0))
        throw std::invalid_argument("extreme_type_u2 needs 1 + R - beta > 0");
    return (sbar - bounds.lower()) / denom + bounds.lower();
}

double solve_beta(const SensitivityBounds& bounds, double sbar)
{
    const double R = bounds.lower_mass(sbar);
    if (R == 1.0)
        return 2.0;
    if (R == 0.0)
        return 0.0;
    const double ratio = sbar / bounds.lower();
    auto g = [&](double b) { return b - R * (1.0 + std::sqrt((1.0 + R - b) / (ratio + R - b))); };
    return bisect(g, {R, std::min(2.0, 1.0 + R), 1e-14, 200});
}

FixedPointToll k_regime_D_detail(const Network& network, const SensitivityBounds& bounds,
                                 double sbar)
{
    if (endpoint_mean(bounds, sbar))
        return {1.0 / sbar, 0, sbar, sbar};
    const Network net = normalize(network);
    double k = k_geometric_mean(bounds);
    for (int it = 1; it <= 500; ++it) {
        const auto ext = extreme_distributions(net, bounds, sbar, k);
        const double sl1 = extreme_indifferent(net, k, ext.flow_l, ext.pinned_l);
        const double su2 = extreme_indifferent(net, k, ext.flow_u, ext.pinned_u);
        // Everyone on link 1 at both extremes: S k is then independent of k,
        // so the update is k <- k / (S k) and, when S k > 1, it decays to 0
        // without any distribution leaving link 1.
        if (ext.flow_l >= 1.0 && ext.flow_u >= 1.0 && sl1 * k > 1.0)
            return {0.0, it, sl1, su2};
        const double next = 1.0 / std::sqrt(sl1 * su2);
        if (std::abs(next - k) <= 1e-10)
            return {next, it, sl1, su2};
        k = next;
    }
    throw NumericalFailure("k_regime_D: fixed point did not converge in 500 iterations");
}

TollScale k_regime_D(const Network& network, const SensitivityBounds& bounds, double sbar)
{
    return TollScale(k_regime_D_detail(network, bounds, sbar).k);
}

double poa_bound_D(const SensitivityBounds& bounds, double sbar)
{
    if (endpoint_mean(bounds, sbar))
        return 1.0;
    const double R = bounds.lower_mass(sbar);
    const double b = solve_beta(bounds, sbar);
    return (R * R - b * R + b) / (b - b * b / 4.0);
}

RegimeResult design_toll(Regime regime, const SensitivityBounds& bounds, std::optional<double> sbar,
                         std::optional<Network> network)
{
    if (needs_mean(regime) && !sbar)
        throw std::invalid_argument(std::string("regime ") + regime_letter(regime) +
                                    " requires the mean sensitivity");
    if (needs_network(regime) && !network)
        throw std::invalid_argument(std::string("regime ") + regime_letter(regime) +
                                    " requires a network");

    Diagnostics d;
    switch (regime) {
    case Regime::A: {
        const TollScale k = k_regime_A(bounds);
        d.gamma = 1.0 + bounds.lower() * k.value();
        return {k, poa_bound_A(bounds), regime, d};
    }
    case Regime::B: {
        const TollScale k = k_regime_B(bounds, *sbar);
        const double R = bounds.lower_mass(*sbar);
        d.R = R;
        d.beta = (1.0 + bounds.lower() * k.value()) * R;
        d.alpha = (1.0 + bounds.upper() * k.value()) * R;
        d.k_avg_residual = k_avg_residual(bounds, *sbar, k.value());
        return {k, poa_bound_B(bounds, *sbar), regime, d};
    }
    case Regime::C: {
        const Network net = normalize(*network);
        const TollScale k = k_regime_C(net, bounds);
        if (net.first().slope() > 0.0)
            d.gamma = (net.second().offset() - net.first().offset()) / net.first().slope();
        return {k, poa_bound_C(bounds), regime, d};
    }
    case Regime::D: {
        const FixedPointToll fp = k_regime_D_detail(*network, bounds, *sbar);
        d.R = bounds.lower_mass(*sbar);
        d.beta = solve_beta(bounds, *sbar);
        d.iterations = fp.iterations;
        d.s_l1 = fp.s_l1;
        d.s_u2 = fp.s_u2;
        return {TollScale(fp.k), poa_bound_D(bounds, *sbar), regime, d};
    }
    }
    throw std::invalid_argument("unknown regime");
}

WorstMean worst_case_over_mean(const SensitivityBounds& bounds, Regime regime)
{
    if (!needs_mean(regime))
        throw std::invalid_argument("worst_case_over_mean applies to regimes B and D");
    auto bound = [&](double s) {
        return regime == Regime::B ? poa_bound_B(bounds, s) : poa_bound_D(bounds, s);
    };
    const double lo = bounds.lower();
    const double hi = bounds.upper();
    if (bounds.is_degenerate())
        return {lo, bound(lo)};

    constexpr int n = 201;
    auto node = [&](int i) { return i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1); };
    int best_i = 0;
    double best = bound(lo);
    for (int i = 1; i < n; ++i) {
        const double v = bound(node(i));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    WorstMean out{node(best_i), best};
    const double a = node(std::max(best_i - 1, 0));
    const double b = node(std::min(best_i + 1, n - 1));
    const double s = maximize_unimodal(bound, a, b, 1e-6);
    const double v = bound(s);
    if (v > out.bound)
        out = {s, v};
    return out;
}

} // namespace tollbound
