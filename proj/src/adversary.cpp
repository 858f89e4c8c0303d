#include "tollbound/adversary.hpp"

#include "tollbound/equilibrium.hpp"
#include "tollbound/numerics.hpp"
#include "tollbound/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace tollbound {

void GridSpec::validate() const
{
    if (n_gamma < 2 || n_types < 2 || n_mass < 2)
        throw std::invalid_argument("grid sizes must be at least 2");
}

ExtremeDistributions extreme_distributions(const Network& network, const SensitivityBounds& bounds,
                                           double sbar, double k)
{
    bounds.require_mean(sbar);
    const Network net = normalize(network);
    const TollScale toll(k);
    auto h = [&](double s) { return homogeneous_first_flow(net, s, toll); };
    const double lo = bounds.lower();
    const double hi = bounds.upper();

    if (bounds.is_degenerate() || sbar == lo || sbar == hi) {
        const auto d = SensitivityDistribution::homogeneous(sbar);
        return {d, d, h(sbar), h(sbar), sbar, sbar};
    }

    // s_l: bimodal (S1, sU) with S1 indifferent. phi is decreasing in S1, so
    // the smallest feasible S1 is sL or the root of phi.
    auto phi = [&](double s1) { return h(s1) - (hi - sbar) / (hi - s1); };
    std::optional<SensitivityDistribution> s_l;
    double flow_l = 0.0;
    double pinned_l = sbar;
    if (phi(lo) <= 1e-12) {
        pinned_l = lo;
    } else if (phi(sbar) < 0.0) {
        pinned_l = bisect(phi, {lo, sbar, 1e-14, 200});
    }
    if (pinned_l < sbar) {
        s_l = SensitivityDistribution::bimodal(pinned_l, hi, sbar);
        flow_l = h(pinned_l);
    } else {
        s_l = SensitivityDistribution::homogeneous(sbar);
        flow_l = std::min(1.0, h(sbar));
    }

    // s_u: bimodal (sL, S2) with S2 indifferent; psi is decreasing in S2.
    auto psi = [&](double s2) { return h(s2) - (s2 - sbar) / (s2 - lo); };
    double pinned_u = hi;
    if (psi(hi) < -1e-12)
        pinned_u = bisect(psi, {sbar, hi, 1e-14, 200});
    const auto s_u = pinned_u > sbar ? SensitivityDistribution::bimodal(lo, pinned_u, sbar)
                                     : SensitivityDistribution::homogeneous(sbar);

    return {*s_l, s_u, flow_l, h(pinned_u), pinned_l, pinned_u};
}

Network reduce_to_linear_constant(const Network& network, TollScale k,
                                  const SensitivityDistribution& dist)
{
    const Network net = normalize(network);
    const double a1 = net.first().slope();
    const double a2 = net.second().slope();
    if (a1 + a2 == 0.0)
        throw std::invalid_argument("reduce_to_linear_constant needs a1 + a2 > 0");

    const NashOutcome nash = nash_flow(net, dist, k);
    const double f1 = nash.flow.first();
    if (a1 == 0.0) {
        // Link 1 is constant and cheapest: everyone uses it and the PoA is 1.
        return Network::linear_constant(std::max(2.0, 1.0 + dist.max_sensitivity() * k.value()));
    }

    const double b2 = (net.second().offset() - net.first().offset()) / a1;
    double gamma;
    if (f1 >= 1.0)
        gamma = b2;
    else if (k.value() == 0.0)
        gamma = (a2 / a1) * (1.0 - f1) + b2;
    else if (nash.indifferent)
        gamma = (1.0 + *nash.indifferent * k.value()) * f1;
    else
        gamma = 2.0 * f1;
    return Network::linear_constant(gamma);
}

SensitivityDistribution AdversaryReport::witness_distribution() const
{
    if (s1 == s2 || mass1 >= 1.0)
        return SensitivityDistribution::homogeneous(s1);
    return SensitivityDistribution({{s1, mass1}, {s2, 1.0 - mass1}});
}

std::string AdversaryReport::csv_header()
{
    return "regime,sL,sU,sbar,gamma_witness,S1,S2,mass1,empirical_poa,bound,gap";
}

std::string AdversaryReport::csv_row() const
{
    std::string row;
    row += regime_letter(regime);
    for (double v : {bounds.lower(), bounds.upper()})
        row += "," + format_fixed(v, 6);
    row += ",";
    if (sbar)
        row += format_fixed(*sbar, 6);
    for (double v : {gamma_witness, s1, s2, mass1, empirical_poa, theoretical_bound, gap})
        row += "," + format_fixed(v, 6);
    return row;
}

namespace {

double analytical_bound(Regime regime, const SensitivityBounds& bounds, std::optional<double> sbar)
{
    switch (regime) {
    case Regime::A: return poa_bound_A(bounds);
    case Regime::B: return poa_bound_B(bounds, *sbar);
    case Regime::C: return poa_bound_C(bounds);
    case Regime::D: return poa_bound_D(bounds, *sbar);
    }
    return 1.0;
}

double toll_for(Regime regime, const SensitivityBounds& bounds, std::optional<double> sbar,
                double gamma, double global_k)
{
    switch (regime) {
    case Regime::C: return k_regime_C(Network::linear_constant(gamma), bounds).value();
    case Regime::D: return k_regime_D(Network::linear_constant(gamma), bounds, *sbar).value();
    default: return global_k;
    }
}

struct Candidate {
    double latency = -1.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double mass1 = 1.0;
};

// Linear-constant total latency f^2 + (1 - f) gamma.
inline double lc_latency(double f, double gamma) { return f * f + (1.0 - f) * gamma; }

} // namespace

std::vector<double> gamma_grid(Regime regime, const SensitivityBounds& bounds,
                               std::optional<double> sbar, int n_gamma)
{
    if (n_gamma < 2)
        throw std::invalid_argument("n_gamma must be at least 2");
    constexpr double lo = 1e-3;
    constexpr double hi = 4.0;
    std::vector<double> g;
    g.reserve(n_gamma + 2);
    for (int i = 0; i < n_gamma; ++i)
        g.push_back(i == n_gamma - 1 ? hi : lo * std::pow(hi / lo, double(i) / (n_gamma - 1)));

    const double sl = bounds.lower();
    const double su = bounds.upper();
    switch (regime) {
    case Regime::A: {
        const double k = k_regime_A(bounds).value();
        const double xu = 1.0 + su * k;
        g.push_back(1.0 + sl * k);
        if (xu > 1.0)
            g.push_back(xu * xu / (2.0 * (xu - 1.0)));
        break;
    }
    case Regime::B: {
        const double k = k_regime_B(bounds, *sbar).value();
        const double R = bounds.lower_mass(*sbar);
        g.push_back((1.0 + sl * k) * R);
        g.push_back((1.0 + su * k) * R);
        break;
    }
    case Regime::C:
        g.push_back(1.0);
        g.push_back(1.0 + std::sqrt(bounds.ratio()));
        break;
    case Regime::D: {
        const double R = bounds.lower_mass(*sbar);
        const double beta = solve_beta(bounds, *sbar);
        g.push_back(beta);
        if (R > 0.0 && R < 1.0) {
            const double kb = (beta / R - 1.0) / sl;
            const double kd = k_regime_D(construct_G_beta(bounds, *sbar, kb), bounds, *sbar).value();
            g.push_back((1.0 + su * kd) * R);
        }
        break;
    }
    }
    std::erase_if(g, [&](double x) { return !(x > 0.0 && x <= hi); });
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

AdversaryReport empirical_poa_regime(Regime regime, const SensitivityBounds& bounds,
                                     std::optional<double> sbar, const GridSpec& grid)
{
    grid.validate();
    if (needs_mean(regime)) {
        if (!sbar)
            throw std::invalid_argument("regimes B and D need a mean sensitivity");
        bounds.require_mean(*sbar);
    }
    const bool mean_aware = needs_mean(regime);
    const double sl = bounds.lower();
    const double su = bounds.upper();

    std::vector<double> types(grid.n_types);
    for (int i = 0; i < grid.n_types; ++i)
        types[i] = i == grid.n_types - 1 ? su : sl + (su - sl) * i / (grid.n_types - 1);
    std::vector<double> masses(grid.n_mass);
    for (int j = 0; j < grid.n_mass; ++j)
        masses[j] = double(j + 1) / (grid.n_mass + 1);

    double global_k = 0.0;
    if (regime == Regime::A)
        global_k = k_regime_A(bounds).value();
    else if (regime == Regime::B)
        global_k = k_regime_B(bounds, *sbar).value();

    // Mean-aware regimes: pairs S1 < sbar < S2 with the mass fixed by the mean.
    std::size_t below = 0;
    std::size_t above = types.size();
    if (mean_aware) {
        below = std::lower_bound(types.begin(), types.end(), *sbar) - types.begin();
        above = std::upper_bound(types.begin(), types.end(), *sbar) - types.begin();
    }

    const auto gammas = gamma_grid(regime, bounds, sbar, grid.n_gamma);
    AdversaryReport rep{regime, bounds, sbar, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0,
                        analytical_bound(regime, bounds, sbar), 0.0, 0};
    double best_poa = -1.0;
    std::vector<double> h(types.size());

    for (const double gamma : gammas) {
        const double k = toll_for(regime, bounds, sbar, gamma, global_k);
        for (std::size_t t = 0; t < types.size(); ++t)
            h[t] = std::min(1.0, gamma / (1.0 + types[t] * k));
        const double f_opt = std::min(1.0, gamma / 2.0);
        const double l_opt = lc_latency(f_opt, gamma);

        Candidate best;
        auto offer = [&](double f, double s1, double s2, double m1) {
            const double l = lc_latency(f, gamma);
            if (l > best.latency)
                best = {l, s1, s2, m1};
        };

        if (mean_aware) {
            const double s = *sbar;
            // Pairs first (S1 < sbar), then the homogeneous population (S1 = sbar).
            for (std::size_t i = 0; i < below; ++i) {
                for (std::size_t j = above; j < types.size(); ++j) {
                    const double m = (types[j] - s) / (types[j] - types[i]);
                    const double f = h[i] <= m ? h[i] : (h[j] <= m ? m : h[j]);
                    offer(f, types[i], types[j], m);
                }
                rep.evaluations += static_cast<long long>(types.size() - above);
            }
            offer(std::min(1.0, gamma / (1.0 + s * k)), s, s, 1.0);
            ++rep.evaluations;
        } else {
            for (std::size_t i = 0; i < types.size(); ++i) {
                offer(h[i], types[i], types[i], 1.0);
                const double hi = h[i];
                for (std::size_t j = i + 1; j < types.size(); ++j) {
                    const double hj = h[j];
                    for (const double m : masses) {
                        const double f = hi <= m ? hi : (hj <= m ? m : hj);
                        const double l = f * f + (1.0 - f) * gamma;
                        if (l > best.latency)
                            best = {l, types[i], types[j], m};
                    }
                }
                rep.evaluations += 1 + static_cast<long long>(types.size() - i - 1) * grid.n_mass;
            }
        }

        const double poa = l_opt == 0.0 ? 1.0 : best.latency / l_opt;
        if (poa > best_poa) {
            best_poa = poa;
            rep.gamma_witness = gamma;
            rep.k_witness = k;
            rep.s1 = best.s1;
            rep.s2 = best.s2;
            rep.mass1 = best.mass1;
        }
    }

    // Re-evaluate the witness with the general equilibrium solver.
    rep.empirical_poa = price_of_anarchy(rep.witness_network(), rep.witness_distribution(),
                                         TollScale(rep.k_witness));
    if (std::abs(rep.empirical_poa - best_poa) > 1e-9)
        throw NumericalFailure("adversary: fast evaluator disagrees with nash_flow at the witness");
    rep.gap = rep.theoretical_bound - rep.empirical_poa;
    return rep;
}

namespace {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}
    // Uniform on [0, 1) from the top 53 bits, identical on every platform.
    double unit() { return double(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    int integer(int a, int b) { return a + int(gen_() % std::uint64_t(b - a + 1)); }

private:
    std::mt19937_64 gen_;
};

std::string describe(const Network& n, const SensitivityDistribution& d, double k)
{
    std::ostringstream os;
    os.precision(17);
    os << "network \"" << format_network(n) << "\" dist \"" << format_distribution(d) << "\" k " << k;
    return os.str();
}

// Random distribution on [sL, sU] with mean exactly sbar up to rounding: a
// random atomic part mixed with the bound on the far side of sbar.
SensitivityDistribution random_distribution(Sampler& rng, const SensitivityBounds& b, double sbar)
{
    if (b.is_degenerate() || sbar == b.lower() || sbar == b.upper())
        return SensitivityDistribution::homogeneous(sbar);
    const int n = rng.integer(2, 6);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        atoms.push_back({rng.uniform(b.lower(), b.upper()), rng.uniform(0.05, 1.0)});
        total += atoms.back().mass;
    }
    double mu = 0.0;
    for (Atom& a : atoms) {
        a.mass /= total;
        mu += a.sensitivity * a.mass;
    }
    const double anchor = mu < sbar ? b.upper() : b.lower();
    const double t = (anchor - sbar) / (anchor - mu);
    double used = 0.0;
    for (Atom& a : atoms) {
        a.mass *= t;
        used += a.mass;
    }
    if (1.0 - used > 0.0)
        atoms.push_back({anchor, 1.0 - used});
    return SensitivityDistribution(std::move(atoms));
}

// Bimodal with the same mean whose Nash flow matches `nash`: the indifferent
// type paired with the bound on the other side of the mean.
SensitivityDistribution matching_bimodal(const SensitivityBounds& b, double mean,
                                         const NashOutcome& nash)
{
    const double f1 = nash.flow.first();
    if (!nash.indifferent || f1 <= 0.0 || f1 >= 1.0)
        return SensitivityDistribution::homogeneous(mean);
    const double s = std::clamp(*nash.indifferent, b.lower(), b.upper());
    if (s <= mean)
        return s == mean ? SensitivityDistribution::homogeneous(mean)
                         : SensitivityDistribution::bimodal(s, b.upper(), mean);
    return SensitivityDistribution::bimodal(b.lower(), s, mean);
}

} // namespace

LemmaReport lemma_checks(const SensitivityBounds& bounds, double sbar, double k, int samples,
                         std::uint64_t seed)
{
    bounds.require_mean(sbar);
    if (samples < 1)
        throw std::invalid_argument("lemma_checks needs at least one sample");
    LemmaReport rep{seed, samples, 0, 0, 0, std::nullopt};
    Sampler rng(seed);
    const TollScale toll(k);
    auto fail = [&](int& counter, const std::string& what) {
        ++counter;
        if (!rep.first_counterexample)
            rep.first_counterexample = what;
    };

    const double R = bounds.lower_mass(sbar);
    const auto ext = extreme_bimodal(bounds, sbar);
    const double reference =
        std::max(price_of_anarchy(construct_G_beta(bounds, sbar, k), ext, toll),
                 price_of_anarchy(construct_G_alpha(bounds, sbar, k), ext, toll));

    for (int n = 0; n < samples; ++n) {
        // (i) bimodal realizability on a random affine network.
        const Network net = normalize(Network(Latency(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)),
                                              Latency(rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0))));
        const auto dist = random_distribution(rng, bounds, sbar);
        const NashOutcome nash = nash_flow(net, dist, toll);
        const auto bi = matching_bimodal(bounds, dist.mean(), nash);
        const double f_bi = nash_flow(net, bi, toll).flow.first();
        if (std::abs(f_bi - nash.flow.first()) > 1e-6)
            fail(rep.bimodal_failures, "bimodal match: " + describe(net, dist, k) +
                                           " flow " + format_fixed(nash.flow.first(), 12) +
                                           " vs bimodal \"" + format_distribution(bi) + "\" flow " +
                                           format_fixed(f_bi, 12));

        // (iii) the linear-constant reduction never lowers the PoA.
        if (net.first().slope() + net.second().slope() > 0.0) {
            const Network lc = reduce_to_linear_constant(net, toll, dist);
            const double before = price_of_anarchy(net, nash.flow);
            const double after = price_of_anarchy(lc, dist, toll);
            if (after < before - 1e-9)
                fail(rep.glc_failures, "reduction lowers PoA " + format_fixed(before, 12) + " -> " +
                                           format_fixed(after, 12) + ": " + describe(net, dist, k));
        }

        // (ii) no linear-constant network beats G_alpha / G_beta.
        if (R > 0.0 && R < 1.0) {
            const double gamma = 1e-3 * std::pow(4e3, rng.unit());
            const double s1 = rng.uniform(bounds.lower(), sbar);
            const double s2 = rng.uniform(sbar, bounds.upper());
            if (s1 < sbar && sbar < s2) {
                const Network lc = Network::linear_constant(gamma);
                const auto bd = SensitivityDistribution::bimodal(s1, s2, sbar);
                const double poa = price_of_anarchy(lc, bd, toll);
                if (poa > reference + 1e-9)
                    fail(rep.extremal_failures,
                         "extremal networks exceeded: PoA " + format_fixed(poa, 12) + " > " +
                             format_fixed(reference, 12) + " at " + describe(lc, bd, k));
            }
        }
    }
    return rep;
}

} // namespace tollbound
