#include "tollbound/equilibrium.hpp"
#include "tollbound/game.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace tollbound;

namespace {

const Network pigou{{1.0, 0.0}, {0.0, 1.0}};

} // namespace

TEST_CASE("latency and network validation")
{
    CHECK_THROWS_AS(Latency(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Latency(0.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(Network({0.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
    CHECK(Latency(2.0, 1.0)(0.25) == 1.5);
    CHECK_NOTHROW(Network({1.0, 0.0}, {0.0, 0.0}));
}

TEST_CASE("normalize")
{
    const Network swapped{{0.0, 1.0}, {1.0, 0.0}};
    CHECK(normalize(swapped) == pigou);
    CHECK(normalize(pigou) == pigou);
    const Network tie{{2.0, 1.0}, {1.0, 1.0}};
    CHECK(normalize(tie) == tie);

    oracle::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Network n({rng.uniform(0, 2), rng.uniform(0, 2)}, {rng.uniform(0, 2), rng.uniform(0, 2)});
        CHECK(normalize(normalize(n)) == normalize(n));
        CHECK(normalize(n).is_normalized());
    }
}

TEST_CASE("flow and distribution invariants")
{
    CHECK_THROWS_AS(Flow(0.6, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(Flow(-0.1, 1.1), std::invalid_argument);
    CHECK_NOTHROW(Flow(0.3, 0.7 + 5e-13));
    CHECK(Flow::with_first(1.5).first() == 1.0);

    CHECK_THROWS_AS(SensitivityDistribution({{1.0, 0.5}, {2.0, 0.4}}), std::invalid_argument);
    CHECK_THROWS_AS(SensitivityDistribution({{0.0, 1.0}}), std::invalid_argument);
    const SensitivityDistribution d({{3.0, 0.25}, {1.0, 0.5}, {3.0, 0.25}});
    REQUIRE(d.size() == 2);
    CHECK(d.atoms()[0].sensitivity == 1.0);
    CHECK(d.atoms()[1].mass == 0.5);
    CHECK(d.mean() == doctest::Approx(2.0));

    const auto b = SensitivityDistribution::bimodal(1.0, 10.0, 5.5);
    CHECK(b.atoms()[0].mass == doctest::Approx(0.5));
    CHECK(b.mean() == doctest::Approx(5.5));
    CHECK(SensitivityDistribution::bimodal(1.0, 10.0, 1.0).size() == 1);

    const SensitivityBounds bounds(1.0, 10.0);
    CHECK(bounds.ratio() == doctest::Approx(0.1));
    CHECK(bounds.spread() == doctest::Approx(10.0));
    CHECK(bounds.lower_mass(2.8) == doctest::Approx(0.8));
    CHECK_THROWS_AS(bounds.lower_mass(11.0), std::invalid_argument);
    CHECK_THROWS_AS(SensitivityBounds(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TollScale(-0.1), std::invalid_argument);
}

TEST_CASE("total latency")
{
    CHECK(total_latency(pigou, Flow(1.0, 0.0)) == 1.0);
    CHECK(total_latency(pigou, Flow(0.5, 0.5)) == 0.75);
    const Network n{{2.0, 0.5}, {3.0, 0.25}};
    CHECK(total_latency(n, Flow(0.0, 1.0)) == 3.25);
}

TEST_CASE("optimal flow")
{
    CHECK(optimal_flow(pigou).first() == 0.5);
    CHECK(optimal_flow(Network({1.0, 0.0}, {1.0, 0.0})).first() == 0.5);
    CHECK(optimal_flow(Network({1.0, 0.0}, {0.0, 3.0})).first() == 1.0);
    CHECK(oracle::grid_min_latency(Network({1.0, 0.0}, {0.0, 3.0})) == doctest::Approx(1.0));
    CHECK(optimal_flow(Network({0.0, 1.0}, {0.0, 2.0})).first() == 1.0);
}

TEST_CASE("optimal flow never loses to a grid search")
{
    oracle::Rng rng(12);
    for (int i = 0; i < 300; ++i) {
        const Network n = oracle::random_network(rng);
        CHECK(optimal_latency(n) <= oracle::grid_min_latency(n) + 1e-9);
    }
}

TEST_CASE("user cost")
{
    const Flow half(0.5, 0.5);
    CHECK(user_cost(pigou, TollScale(0.0), 1.0, Edge::first, half) == 0.5);
    CHECK(user_cost(pigou, TollScale(1.0), 1.0, Edge::first, half) == 1.0);
    for (double k : {0.0, 0.3, 2.0})
        for (double s : {0.5, 1.0, 7.0})
            CHECK(user_cost(pigou, TollScale(k), s, Edge::second, Flow(0.2, 0.8)) == 1.0);

    // affine and increasing in s when k a f > 0
    const Flow f(0.4, 0.6);
    const double c1 = user_cost(pigou, TollScale(0.5), 1.0, Edge::first, f);
    const double c2 = user_cost(pigou, TollScale(0.5), 2.0, Edge::first, f);
    const double c3 = user_cost(pigou, TollScale(0.5), 3.0, Edge::first, f);
    CHECK(c2 > c1);
    CHECK(c3 - c2 == doctest::Approx(c2 - c1));
}

TEST_CASE("price of anarchy on the Pigou network")
{
    const auto one = SensitivityDistribution::homogeneous(1.0);
    CHECK(price_of_anarchy(pigou, one, TollScale(0.0)) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(price_of_anarchy(pigou, one, TollScale(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    const auto bi = SensitivityDistribution({{1.0, 0.5}, {10.0, 0.5}});
    CHECK(price_of_anarchy(pigou, bi, TollScale(0.2262)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate optimum")
{
    const Network zero_second{{1.0, 0.0}, {0.0, 0.0}};
    CHECK(price_of_anarchy(zero_second, Flow(0.0, 1.0)) == 1.0);
    CHECK_THROWS_AS(price_of_anarchy(zero_second, Flow(0.5, 0.5)), DegenerateNetwork);
}

TEST_CASE("price of anarchy properties")
{
    oracle::Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const Network n = oracle::random_network(rng);
        const auto d = oracle::random_distribution(rng, 0.5, 12.0);
        const TollScale k(rng.coin(0.2) ? 0.0 : rng.uniform(0.0, 2.0));
        const double p = price_of_anarchy(n, d, k);
        CHECK(p >= 1.0 - 1e-9);
        const double c = rng.uniform(0.01, 50.0);
        CHECK(price_of_anarchy(n.scaled(c), d, k) == doctest::Approx(p).epsilon(1e-9));
    }
}
