#ifndef SMEFD_TESTS_SUPPORT_HPP
#define SMEFD_TESTS_SUPPORT_HPP

// Independent brute-force oracles and random instance generators shared by the tests.

#include "smefd/polytope.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace smefd::testing
{

class Rng
{
public:
	explicit Rng(std::uint64_t seed) : _gen(seed) {}

	double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(_gen); }
	int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(_gen); }

	Eigen::VectorXd vector(Eigen::Index n, double lo, double hi)
	{
		Eigen::VectorXd v(n);

		for (Eigen::Index i = 0; i < n; ++i) {
			v(i) = uniform(lo, hi);
		}

		return v;
	}

	Eigen::VectorXd unit(Eigen::Index n)
	{
		std::normal_distribution<double> g;
		Eigen::VectorXd v(n);

		do {
			for (Eigen::Index i = 0; i < n; ++i) {
				v(i) = g(_gen);
			}
		} while (v.norm() < 1e-6);

		return v.normalized();
	}

	std::mt19937_64 &engine() { return _gen; }

private:
	std::mt19937_64 _gen;
};

/// Unit box intersected with random slabs that all contain a common interior point.
inline HPolytope random_slab_polytope(Rng &rng, Eigen::Index p, int slabs)
{
	const Eigen::VectorXd centre = rng.vector(p, 0.3, 0.7);
	Eigen::MatrixXd A(2 * p + 2 * slabs, p);
	Eigen::VectorXd b(2 * p + 2 * slabs);
	A.topRows(p) = Eigen::MatrixXd::Identity(p, p);
	A.middleRows(p, p) = -Eigen::MatrixXd::Identity(p, p);
	b.head(p).setOnes();
	b.segment(p, p).setZero();

	for (int s = 0; s < slabs; ++s) {
		const Eigen::VectorXd g = rng.unit(p);
		const double c = g.dot(centre);
		const double lo = rng.uniform(0.02, 0.4);
		const double hi = rng.uniform(0.02, 0.4);
		A.row(2 * p + 2 * s) = g.transpose();
		b(2 * p + 2 * s) = c + hi;
		A.row(2 * p + 2 * s + 1) = -g.transpose();
		b(2 * p + 2 * s + 1) = -(c - lo);
	}

	return {A, b};
}

/// Every p-subset of rows solved with a full-pivot LU, filtered for feasibility and deduplicated.
inline std::vector<Eigen::VectorXd> brute_force_vertices(const HPolytope &P, double tol = 1e-7)
{
	const auto m = static_cast<int>(P.rows());
	const auto p = static_cast<int>(P.dim());
	std::vector<Eigen::VectorXd> out;
	std::vector<int> idx(static_cast<std::size_t>(p));

	for (int i = 0; i < p; ++i) {
		idx[static_cast<std::size_t>(i)] = i;
	}

	while (true) {
		Eigen::MatrixXd S(p, p);
		Eigen::VectorXd r(p);

		for (int i = 0; i < p; ++i) {
			S.row(i) = P.A().row(idx[static_cast<std::size_t>(i)]);
			r(i) = P.b()(idx[static_cast<std::size_t>(i)]);
		}

		Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
		lu.setThreshold(1e-10);

		if (lu.isInvertible()) {
			const Eigen::VectorXd x = lu.solve(r);

			if (((P.A() * x - P.b()).array() <= tol).all()) {
				const bool dup = std::any_of(out.begin(), out.end(), [&](const Eigen::VectorXd &v) {
					return (v - x).lpNorm<Eigen::Infinity>() < 1e-7;
				});

				if (!dup) {
					out.push_back(x);
				}
			}
		}

		int k = p - 1;

		while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - p + k) {
			--k;
		}

		if (k < 0) {
			break;
		}

		++idx[static_cast<std::size_t>(k)];

		for (int j = k + 1; j < p; ++j) {
			idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
		}
	}

	return out;
}

/// Symmetric Hausdorff distance between two finite point sets (infinity on emptiness mismatch).
inline double hausdorff(const std::vector<Eigen::VectorXd> &a, const std::vector<Eigen::VectorXd> &b)
{
	if (a.empty() || b.empty()) {
		return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
	}

	const auto directed = [](const auto &from, const auto &to) {
		double worst = 0.0;

		for (const auto &x : from) {
			double best = std::numeric_limits<double>::infinity();

			for (const auto &y : to) {
				best = std::min(best, (x - y).norm());
			}

			worst = std::max(worst, best);
		}

		return worst;
	};

	return std::max(directed(a, b), directed(b, a));
}

inline bool has_point(const std::vector<Eigen::VectorXd> &set, const Eigen::VectorXd &x, double tol = 1e-9)
{
	return std::any_of(set.begin(), set.end(), [&](const Eigen::VectorXd &v) { return (v - x).norm() <= tol; });
}

} // namespace smefd::testing

#endif // SMEFD_TESTS_SUPPORT_HPP
