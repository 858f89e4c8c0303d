#ifndef TOLLBOUND_GAME_HPP
#define TOLLBOUND_GAME_HPP

// Domain types of the two-link parallel routing game: affine latencies, the
// network, flows, sensitivity distributions and the scaled marginal-cost toll.
//
// A unit mass of users is split over two parallel links. Link e has latency
// a_e * f_e + b_e. A user with price sensitivity s on link e pays
//   (1 + s k) a_e f_e + b_e
// under the toll tau_e(f) = k a_e f_e. Everything here is immutable once built.

#include <span>
#include <stdexcept>
#include <vector>

namespace tollbound {

// Flows that should sum to one are accepted within this absolute tolerance.
inline constexpr double flow_tolerance = 1e-12;
// Masses of a sensitivity distribution must sum to one within this tolerance.
inline constexpr double mass_tolerance = 1e-12;

// Thrown when an operation would divide by a zero optimal latency while the
// equilibrium latency is positive. Valid networks never reach this.
class DegenerateNetwork : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Edge { first = 1, second = 2 };

class Latency {
public:
    Latency(double slope, double offset);

    double slope() const noexcept { return slope_; }
    double offset() const noexcept { return offset_; }
    bool is_zero() const noexcept { return slope_ == 0.0 && offset_ == 0.0; }

    double operator()(double flow) const noexcept { return slope_ * flow + offset_; }

    friend bool operator==(const Latency&, const Latency&) = default;

private:
    double slope_;
    double offset_;
};

class Network {
public:
    Network(Latency first, Latency second);

    // l1(f) = f, l2(f) = gamma.
    static Network linear_constant(double gamma);

    const Latency& first() const noexcept { return first_; }
    const Latency& second() const noexcept { return second_; }
    const Latency& edge(Edge e) const noexcept { return e == Edge::first ? first_ : second_; }

    // Links ordered so that b_1 <= b_2.
    bool is_normalized() const noexcept { return first_.offset() <= second_.offset(); }

    Network scaled(double factor) const;

    friend bool operator==(const Network&, const Network&) = default;

private:
    Latency first_;
    Latency second_;
};

// Swaps the links when b_1 > b_2; ties keep the input order.
Network normalize(const Network& network);

class Flow {
public:
    Flow(double first, double second);

    // (f1, 1 - f1) with f1 clamped into [0, 1].
    static Flow with_first(double first);

    double first() const noexcept { return first_; }
    double second() const noexcept { return second_; }
    double on(Edge e) const noexcept { return e == Edge::first ? first_ : second_; }

private:
    double first_;
    double second_;
};

class SensitivityBounds {
public:
    SensitivityBounds(double lower, double upper);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    // q = sL / sU in (0, 1].
    double ratio() const noexcept { return lower_ / upper_; }
    // p = sU / sL >= 1.
    double spread() const noexcept { return upper_ / lower_; }
    bool is_degenerate() const noexcept { return lower_ == upper_; }
    bool contains(double s, double tol = 0.0) const noexcept
    {
        return s >= lower_ - tol && s <= upper_ + tol;
    }

    // R = (sU - sbar) / (sU - sL): the mass on sL of the two-point distribution
    // supported on {sL, sU} with mean sbar. Equals 1 when sL == sU.
    double lower_mass(double mean) const;

    // Throws std::invalid_argument unless mean lies in [sL, sU].
    void require_mean(double mean) const;

private:
    double lower_;
    double upper_;
};

struct Atom {
    double sensitivity;
    double mass;

    friend bool operator==(const Atom&, const Atom&) = default;
};

// Finite-support distribution of price sensitivities. Atoms are kept sorted by
// sensitivity; atoms sharing a sensitivity are merged.
class SensitivityDistribution {
public:
    explicit SensitivityDistribution(std::vector<Atom> atoms);

    static SensitivityDistribution homogeneous(double sensitivity);
    // Two types low < high with masses fixed by the mean. Collapses to a single
    // atom when the mean sits on one of the types.
    static SensitivityDistribution bimodal(double low, double high, double mean);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    double mean() const noexcept;
    double min_sensitivity() const noexcept { return atoms_.front().sensitivity; }
    double max_sensitivity() const noexcept { return atoms_.back().sensitivity; }
    bool within(const SensitivityBounds& bounds, double tol = 1e-12) const noexcept;

    friend bool operator==(const SensitivityDistribution&, const SensitivityDistribution&) = default;

private:
    std::vector<Atom> atoms_;
};

class TollScale {
public:
    explicit TollScale(double k);

    double value() const noexcept { return k_; }
    // tau_e(f_e) = k a_e f_e.
    double toll(const Latency& latency, double flow) const noexcept
    {
        return k_ * latency.slope() * flow;
    }

private:
    double k_;
};

// sum_e f_e (a_e f_e + b_e).
double total_latency(const Network& network, const Flow& flow);

// Minimizer of total latency over the simplex. Interior formula
// f1 = (2 a2 + b2 - b1) / (2 (a1 + a2)) clipped to [0, 1]; (1, 0) when both
// links are constant.
Flow optimal_flow(const Network& network);

double optimal_latency(const Network& network);

// (1 + s k) a_e f_e + b_e.
double user_cost(const Network& network, TollScale k, double sensitivity, Edge edge,
                 const Flow& flow);

// total_latency(equilibrium) / optimal_latency. A network whose optimal latency
// is zero has ratio 1 when the equilibrium latency is also zero.
double price_of_anarchy(const Network& network, const Flow& equilibrium);

} // namespace tollbound

#endif
