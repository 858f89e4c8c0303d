#include "tollbound/adversary.hpp"
#include "tollbound/equilibrium.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace tollbound;

namespace {

const SensitivityBounds one_ten(1.0, 10.0);
const GridSpec small{60, 30, 19};

} // namespace

TEST_CASE("extreme distributions on the extremal networks")
{
    const double k = 0.21;
    const auto gb = extreme_distributions(construct_G_beta(one_ten, 5.5, k), one_ten, 5.5, k);
    REQUIRE(gb.s_l.size() == 2);
    CHECK(gb.s_l.atoms()[0].sensitivity == 1.0);
    CHECK(gb.s_l.atoms()[1].sensitivity == 10.0);
    CHECK(gb.s_l.atoms()[0].mass == doctest::Approx(0.5));

    const auto ga = extreme_distributions(construct_G_alpha(one_ten, 5.5, k), one_ten, 5.5, k);
    REQUIRE(ga.s_u.size() == 2);
    CHECK(ga.s_u.atoms()[0].sensitivity == 1.0);
    CHECK(ga.s_u.atoms()[1].sensitivity == 10.0);

    const auto at_lower = extreme_distributions(Network::linear_constant(0.7), one_ten, 1.0, k);
    CHECK(at_lower.s_l == SensitivityDistribution::homogeneous(1.0));
    CHECK(at_lower.s_u == SensitivityDistribution::homogeneous(1.0));
}

TEST_CASE("extreme distributions bound every mean-sbar Nash flow")
{
    oracle::Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        const Network n = Network::linear_constant(rng.uniform(0.05, 3.0));
        const double sbar = rng.uniform(1.05, 9.95);
        const double k = rng.uniform(0.05, 1.0);
        const auto ext = extreme_distributions(n, one_ten, sbar, k);
        CHECK(ext.s_l.mean() == doctest::Approx(sbar).epsilon(1e-12));
        CHECK(ext.s_u.mean() == doctest::Approx(sbar).epsilon(1e-12));
        CHECK(ext.flow_l == doctest::Approx(oracle::exact_nash_flow(n, ext.s_l, k)).epsilon(1e-9));
        CHECK(ext.flow_u == doctest::Approx(oracle::exact_nash_flow(n, ext.s_u, k)).epsilon(1e-9));
        for (int j = 0; j < 20; ++j) {
            const double s1 = rng.uniform(1.0, sbar);
            const double s2 = rng.uniform(sbar, 10.0);
            const double f = oracle::exact_nash_flow(n, SensitivityDistribution::bimodal(s1, s2, sbar), k);
            CHECK(f <= ext.flow_l + 1e-9);
            CHECK(f >= ext.flow_u - 1e-9);
        }
    }
}

TEST_CASE("linear-constant reduction")
{
    const auto one = SensitivityDistribution::homogeneous(1.0);
    const Network r = reduce_to_linear_constant(Network({2.0, 1.0}, {0.0, 3.0}), TollScale(0.0), one);
    CHECK(r == Network::linear_constant(1.0));

    const Network lc = Network::linear_constant(0.8);
    const auto dist = SensitivityDistribution({{1.0, 0.4}, {6.0, 0.6}});
    CHECK(reduce_to_linear_constant(lc, TollScale(0.3), dist).second().offset() ==
          doctest::Approx(0.8).epsilon(1e-12));
    CHECK(reduce_to_linear_constant(lc.scaled(3.0), TollScale(0.3), dist).second().offset() ==
          doctest::Approx(0.8).epsilon(1e-12));

    CHECK_THROWS_AS(reduce_to_linear_constant(Network({0.0, 1.0}, {0.0, 2.0}), TollScale(0.3), one),
                    std::invalid_argument);

    oracle::Rng rng(32);
    for (int i = 0; i < 2000; ++i) {
        const Network n = oracle::random_network(rng);
        if (n.first().slope() + n.second().slope() == 0.0)
            continue;
        const auto d = oracle::random_distribution(rng, 1.0, 10.0);
        const double k = rng.coin(0.1) ? 0.0 : rng.uniform(0.0, 1.0);
        const Network red = reduce_to_linear_constant(n, TollScale(k), d);
        const double before = oracle::poa(n, oracle::exact_nash_flow(n, d, k));
        const double after = oracle::poa(red, oracle::exact_nash_flow(red, d, k));
        CHECK(after >= before - 1e-9);
    }
}

TEST_CASE("gamma grid")
{
    const auto g = gamma_grid(Regime::A, one_ten, std::nullopt, 50);
    CHECK(g.size() == 52);
    CHECK(g.front() == doctest::Approx(1e-3));
    CHECK(g.back() == 4.0);
    CHECK(std::is_sorted(g.begin(), g.end()));
    const double k = k_regime_A(one_ten).value();
    CHECK(std::find(g.begin(), g.end(), 1.0 + k) != g.end());

    const auto d = gamma_grid(Regime::D, one_ten, 2.8, 50);
    CHECK(std::find(d.begin(), d.end(), solve_beta(one_ten, 2.8)) != d.end());
}

TEST_CASE("adversary on small grids")
{
    const AdversaryReport a = empirical_poa_regime(Regime::A, one_ten, std::nullopt, small);
    CHECK(a.empirical_poa <= a.theoretical_bound + 1e-6);
    CHECK(a.empirical_poa >= a.theoretical_bound - 0.01);
    // witness types sit on the bounds
    CHECK((a.s1 == 1.0 || a.s1 == 10.0));
    CHECK((a.s2 == 1.0 || a.s2 == 10.0));

    const AdversaryReport b = empirical_poa_regime(Regime::B, one_ten, 1.0, small);
    CHECK(b.empirical_poa == 1.0);
    CHECK(b.theoretical_bound == 1.0);

    const AdversaryReport b28 = empirical_poa_regime(Regime::B, one_ten, 2.8, small);
    CHECK(b28.s1 == 1.0);
    CHECK(b28.s2 == 10.0);

    for (double sbar : {2.8, 5.5, 8.2}) {
        const AdversaryReport d = empirical_poa_regime(Regime::D, one_ten, sbar, small);
        CHECK(d.empirical_poa <= d.theoretical_bound + 1e-6);
        CHECK(d.empirical_poa >= d.theoretical_bound - 0.01);
    }
    CHECK_THROWS_AS(empirical_poa_regime(Regime::B, one_ten, std::nullopt, small), std::invalid_argument);
    CHECK_THROWS_AS(empirical_poa_regime(Regime::A, one_ten, std::nullopt, GridSpec{1, 5, 5}),
                    std::invalid_argument);
}

TEST_CASE("grid refinement never lowers the empirical PoA")
{
    const GridSpec tiny{25, 12, 7};
    for (Regime r : {Regime::A, Regime::B, Regime::C, Regime::D}) {
        const std::optional<double> sbar = needs_mean(r) ? std::optional<double>(5.5) : std::nullopt;
        const double coarse = empirical_poa_regime(r, one_ten, sbar, tiny).empirical_poa;
        const double fine = empirical_poa_regime(r, one_ten, sbar, tiny.doubled()).empirical_poa;
        CHECK(fine >= coarse - 1e-9);
    }
}

TEST_CASE("adversary report is deterministic and serializes")
{
    const AdversaryReport x = empirical_poa_regime(Regime::D, one_ten, 2.8, small);
    const AdversaryReport y = empirical_poa_regime(Regime::D, one_ten, 2.8, small);
    CHECK(x.csv_row() == y.csv_row());
    CHECK(AdversaryReport::csv_header() == "regime,sL,sU,sbar,gamma_witness,S1,S2,mass1,empirical_poa,bound,gap");
    CHECK(x.csv_row().rfind("D,1.000000,10.000000,2.800000,", 0) == 0);
    const AdversaryReport c = empirical_poa_regime(Regime::C, one_ten, std::nullopt, small);
    CHECK(c.csv_row().rfind("C,1.000000,10.000000,,", 0) == 0);
    CHECK(x.gap == doctest::Approx(x.theoretical_bound - x.empirical_poa));
}

TEST_CASE("lemma checks")
{
    const LemmaReport ok = lemma_checks(one_ten, 2.8, 0.21, 1000);
    CHECK(ok.seed == default_seed);
    CHECK(ok.bimodal_failures == 0);
    CHECK(ok.glc_failures == 0);
    CHECK(ok.extremal_failures == 0);
    CHECK(ok.passed());

    const LemmaReport single = lemma_checks(one_ten, 1.0, 0.21, 200);
    CHECK(single.passed());

    // At sbar = 5.5 the worst network has a corner optimum (gamma > 2), which
    // the extremal-network claim misses; the first failure is reported verbatim.
    const LemmaReport bad = lemma_checks(one_ten, 5.5, 0.21, 1000);
    CHECK(bad.bimodal_failures == 0);
    CHECK(bad.glc_failures == 0);
    CHECK(bad.extremal_failures > 0);
    REQUIRE(bad.first_counterexample.has_value());
    CHECK(bad.first_counterexample->find("extremal") != std::string::npos);

    const LemmaReport again = lemma_checks(one_ten, 5.5, 0.21, 1000);
    CHECK(again.first_counterexample == bad.first_counterexample);
}
