#include "smefd/interval.hpp"

#include "smefd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace smefd
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval outward(double lo, double hi)
{
	Interval r;
	r.lo = std::nextafter(lo, -kInf);
	r.hi = std::nextafter(hi, kInf);
	return r;
}

// True if [lo, hi] may contain anchor + 2*pi*k for some integer k. Errs towards true.
bool crosses(double lo, double hi, double anchor)
{
	constexpr double two_pi = 2.0 * std::numbers::pi;
	const double slack = 1e-12 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
	const double k_lo = std::ceil((lo - slack - anchor) / two_pi);
	const double k_hi = std::floor((hi + slack - anchor) / two_pi);
	return k_lo <= k_hi;
}

} // namespace

Interval::Interval(double lower, double upper) : lo(lower), hi(upper)
{
	if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
		throw BoundError("invalid interval [" + std::to_string(lower) + ", " + std::to_string(upper) + "]");
	}
}

Interval operator+(const Interval &a, const Interval &b)
{
	return outward(a.lo + b.lo, a.hi + b.hi);
}

Interval operator-(const Interval &a, const Interval &b)
{
	return outward(a.lo - b.hi, a.hi - b.lo);
}

Interval operator-(const Interval &a)
{
	// negation is exact
	Interval r;
	r.lo = -a.hi;
	r.hi = -a.lo;
	return r;
}

Interval operator*(const Interval &a, const Interval &b)
{
	const double p1 = a.lo * b.lo;
	const double p2 = a.lo * b.hi;
	const double p3 = a.hi * b.lo;
	const double p4 = a.hi * b.hi;
	return outward(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

Interval sin(const Interval &a)
{
	if (a.width() >= 2.0 * std::numbers::pi) {
		return Interval(-1.0, 1.0);
	}

	const double s_lo = std::sin(a.lo);
	const double s_hi = std::sin(a.hi);
	Interval r = outward(std::min(s_lo, s_hi), std::max(s_lo, s_hi));

	if (crosses(a.lo, a.hi, 0.5 * std::numbers::pi)) {
		r.hi = 1.0;
	}

	if (crosses(a.lo, a.hi, -0.5 * std::numbers::pi)) {
		r.lo = -1.0;
	}

	r.lo = std::max(r.lo, -1.0);
	r.hi = std::min(r.hi, 1.0);
	return r;
}

Interval cos(const Interval &a)
{
	if (a.width() >= 2.0 * std::numbers::pi) {
		return Interval(-1.0, 1.0);
	}

	const double c_lo = std::cos(a.lo);
	const double c_hi = std::cos(a.hi);
	Interval r = outward(std::min(c_lo, c_hi), std::max(c_lo, c_hi));

	if (crosses(a.lo, a.hi, 0.0)) {
		r.hi = 1.0;
	}

	if (crosses(a.lo, a.hi, std::numbers::pi)) {
		r.lo = -1.0;
	}

	r.lo = std::max(r.lo, -1.0);
	r.hi = std::min(r.hi, 1.0);
	return r;
}

Interval hull(const Interval &a, const Interval &b)
{
	Interval r;
	r.lo = std::min(a.lo, b.lo);
	r.hi = std::max(a.hi, b.hi);
	return r;
}

bool disjoint(const Interval &a, const Interval &b, double margin)
{
	return a.hi < b.lo - margin || b.hi < a.lo - margin;
}

IntervalVector state_box(std::span<const double> y, std::span<const double> n_bar)
{
	if (y.size() != n_bar.size()) {
		throw DimensionError("state_box: measurement has " + std::to_string(y.size()) + " components, noise bound has "
				     + std::to_string(n_bar.size()));
	}

	IntervalVector box;
	box.reserve(y.size());

	for (std::size_t i = 0; i < y.size(); ++i) {
		if (!(n_bar[i] >= 0.0)) {
			throw BoundError("state_box: noise bound component " + std::to_string(i) + " is negative");
		}

		if (n_bar[i] == 0.0) {
			box.emplace_back(y[i]);

		} else {
			box.push_back(outward(y[i] - n_bar[i], y[i] + n_bar[i]));
		}
	}

	return box;
}

bool contains(const IntervalVector &outer, const IntervalVector &inner)
{
	if (outer.size() != inner.size()) {
		return false;
	}

	for (std::size_t i = 0; i < outer.size(); ++i) {
		if (!outer[i].contains(inner[i])) {
			return false;
		}
	}

	return true;
}

} // namespace smefd
