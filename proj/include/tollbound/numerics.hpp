#ifndef TOLLBOUND_NUMERICS_HPP
#define TOLLBOUND_NUMERICS_HPP

// Scalar root finding and bounded one-dimensional minimization.
//
// Every equation handled by this library is a cheap scalar function on a known
// bracket, so only derivative-free, deterministic methods are provided.

#include <cmath>
#include <stdexcept>
#include <string>

namespace tollbound {

// Raised when an iterative routine cannot honour its contract (no sign change
// on the bracket, iteration ceiling reached, fixed point not found).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Bracket {
    double lo;
    double hi;
    double tol = 1e-10;
    int max_iter = 200;
};

// Midpoint bisection. Returns as soon as the bracket is no wider than `tol`, the
// midpoint is an exact root, or the midpoint stops moving in floating point.
template <class F>
double bisect(F&& f, const Bracket& bracket)
{
    if (!(bracket.lo < bracket.hi))
        throw std::invalid_argument("bisect: bracket requires lo < hi");
    if (!(bracket.tol > 0.0) || bracket.max_iter < 1)
        throw std::invalid_argument("bisect: tol must be positive and max_iter >= 1");

    double lo = bracket.lo;
    double hi = bracket.hi;
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (std::isnan(f_lo) || std::isnan(f_hi))
        throw NumericalFailure("bisect: function is NaN at a bracket end");
    if (f_lo == 0.0)
        return lo;
    if (f_hi == 0.0)
        return hi;
    if (std::signbit(f_lo) == std::signbit(f_hi))
        throw NumericalFailure("bisect: no sign change on [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");

    for (int it = 0; it < bracket.max_iter; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (hi - lo <= bracket.tol || mid == lo || mid == hi)
            return mid;
        const double f_mid = f(mid);
        if (f_mid == 0.0)
            return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    throw NumericalFailure("bisect: iteration limit exceeded");
}

// Golden-section search for the minimizer of a unimodal function on [lo, hi].
// Equal probe values shrink the interval from both sides, so a constant
// function yields the midpoint.
template <class F>
double minimize_unimodal(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 200)
{
    if (!(lo <= hi))
        throw std::invalid_argument("minimize_unimodal: requires lo <= hi");
    constexpr double inv_phi = 0.61803398874989484820;
    double a = lo;
    double b = hi;
    for (int it = 0; it < max_iter; ++it) {
        if (b - a <= tol)
            return a + 0.5 * (b - a);
        const double c = b - inv_phi * (b - a);
        const double d = a + inv_phi * (b - a);
        const double fc = f(c);
        const double fd = f(d);
        if (fc < fd) {
            b = d;
        } else if (fd < fc) {
            a = c;
        } else {
            a = c;
            b = d;
        }
    }
    throw NumericalFailure("minimize_unimodal: iteration limit exceeded");
}

template <class F>
double maximize_unimodal(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 200)
{
    return minimize_unimodal([&](double x) { return -f(x); }, lo, hi, tol, max_iter);
}

} // namespace tollbound

#endif
