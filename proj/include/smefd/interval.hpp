#ifndef SMEFD_INTERVAL_HPP
#define SMEFD_INTERVAL_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace smefd
{

/**
 * Closed interval [lo, hi] with outward-rounded arithmetic.
 *
 * Every elementary operation widens its result by one unit in the last place
 * on each side, so the result encloses the exact real result and the
 * round-to-nearest double result of the same operation on any operands taken
 * from the input intervals.
 */
struct Interval {
	double lo{0.0};
	double hi{0.0};

	Interval() = default;
	explicit Interval(double point) : lo(point), hi(point) {}
	/// Throws BoundError when lo > hi or either endpoint is NaN.
	Interval(double lower, double upper);

	double width() const { return hi - lo; }
	double mid() const { return 0.5 * (lo + hi); }
	bool contains(double x) const { return lo <= x && x <= hi; }
	bool contains(const Interval &other) const { return lo <= other.lo && other.hi <= hi; }
	bool is_point() const { return lo == hi; }
};

Interval operator+(const Interval &a, const Interval &b);
Interval operator-(const Interval &a, const Interval &b);
Interval operator*(const Interval &a, const Interval &b);
Interval operator-(const Interval &a);
Interval sin(const Interval &a);
Interval cos(const Interval &a);

/// Convex hull of two intervals.
Interval hull(const Interval &a, const Interval &b);

/// Strict disjointness with margin: true iff a.hi < b.lo - margin or b.hi < a.lo - margin.
bool disjoint(const Interval &a, const Interval &b, double margin);

using IntervalVector = std::vector<Interval>;

/// Box [y - n_bar, y + n_bar] enclosing the true state behind a noisy measurement.
IntervalVector state_box(std::span<const double> y, std::span<const double> n_bar);

/// Component-wise containment of vectors.
bool contains(const IntervalVector &outer, const IntervalVector &inner);

} // namespace smefd

#endif // SMEFD_INTERVAL_HPP
