// Independent reference computations used only by the tests. None of these
// call into the code under test beyond the plain value types.
#pragma once

#include "tollbound/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

using tollbound::Network;
using tollbound::SensitivityDistribution;

// splitmix64; fixed seeds make every generated suite reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double unit() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    int integer(int a, int b) { return a + int(next() % std::uint64_t(b - a + 1)); }
    bool coin(double p = 0.5) { return unit() < p; }

private:
    std::uint64_t state_;
};

inline double total_latency(const Network& n, double f1)
{
    const double f2 = 1.0 - f1;
    return f1 * (n.first().slope() * f1 + n.first().offset()) +
           f2 * (n.second().slope() * f2 + n.second().offset());
}

// Minimum of the total latency over a uniform grid of `points` flows.
inline double grid_min_latency(const Network& n, int points = 10001)
{
    double best = total_latency(n, 0.0);
    for (int i = 1; i < points; ++i)
        best = std::min(best, total_latency(n, double(i) / (points - 1)));
    return best;
}

inline double cost(const Network& n, double s, double k, int edge, double f1)
{
    const auto& l = edge == 1 ? n.first() : n.second();
    const double f = edge == 1 ? f1 : 1.0 - f1;
    return (1.0 + s * k) * l.slope() * f + l.offset();
}

// Homogeneous equilibrium by scanning the flow grid for the point with the
// smallest violation of the equilibrium condition.
inline double grid_homogeneous_flow(const Network& n, double s, double k, int points = 10001)
{
    double best_f = 0.0;
    double best_v = 1e300;
    for (int i = 0; i < points; ++i) {
        const double f = double(i) / (points - 1);
        const double gap = cost(n, s, k, 1, f) - cost(n, s, k, 2, f);
        double v = 0.0;
        if (f > 0.0 && gap > 0.0)
            v = std::max(v, gap);
        if (f < 1.0 && gap < 0.0)
            v = std::max(v, -gap);
        if (v < best_v) {
            best_v = v;
            best_f = f;
        }
    }
    return best_f;
}

// Exact threshold equilibrium: walk the atoms from low to high sensitivity
// and stop at the first one that does not want all of its mass on link 1.
inline double exact_nash_flow(const Network& n, const SensitivityDistribution& d, double k)
{
    const double a1 = n.first().slope();
    const double a2 = n.second().slope();
    const double db = n.second().offset() - n.first().offset();
    double cum = 0.0;
    for (const auto& atom : d.atoms()) {
        double h = 1.0;
        if (a1 + a2 > 0.0) {
            const double x = 1.0 + atom.sensitivity * k;
            h = std::clamp((x * a2 + db) / (x * (a1 + a2)), 0.0, 1.0);
        }
        if (h <= cum)
            return cum;
        if (h <= cum + atom.mass)
            return h;
        cum += atom.mass;
    }
    return 1.0;
}

inline double poa(const Network& n, double f1)
{
    const double a1 = n.first().slope();
    const double a2 = n.second().slope();
    double fo = 1.0;
    if (a1 + a2 > 0.0)
        fo = std::clamp((2.0 * a2 + n.second().offset() - n.first().offset()) / (2.0 * (a1 + a2)),
                        0.0, 1.0);
    const double lo = total_latency(n, fo);
    const double le = total_latency(n, f1);
    return lo == 0.0 ? 1.0 : le / lo;
}

inline Network random_network(Rng& rng)
{
    auto coef = [&] { return rng.coin(0.15) ? 0.0 : rng.uniform(0.0, 3.0); };
    for (;;) {
        double a1 = coef(), b1 = coef(), a2 = coef(), b2 = coef();
        if (a1 + b1 + a2 + b2 == 0.0)
            continue;
        if (b1 > b2) {
            std::swap(a1, a2);
            std::swap(b1, b2);
        }
        return Network({a1, b1}, {a2, b2});
    }
}

inline SensitivityDistribution random_distribution(Rng& rng, double lo, double hi, int max_atoms = 6)
{
    const int n = rng.integer(1, max_atoms);
    std::vector<tollbound::Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        atoms.push_back({rng.uniform(lo, hi), rng.uniform(0.05, 1.0)});
        total += atoms.back().mass;
    }
    double used = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        atoms[i].mass /= total;
        used += atoms[i].mass;
    }
    atoms.back().mass = 1.0 - used;
    return SensitivityDistribution(atoms);
}

} // namespace oracle
