#include "smefd/polytope.hpp"

#include "smefd/errors.hpp"
#include "smefd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace smefd
{

namespace
{

// Copies rows with their norms; zero rows are kept out of the geometric core.
struct UnitRows {
	Eigen::MatrixXd A;
	Eigen::VectorXd b;
};

UnitRows unit_rows(const HPolytope &P)
{
	UnitRows u;
	std::vector<Eigen::Index> keep;

	for (Eigen::Index i = 0; i < P.A().rows(); ++i) {
		if (P.A().row(i).norm() > 1e-14) {
			keep.push_back(i);
		}
	}

	u.A.resize(static_cast<Eigen::Index>(keep.size()), P.A().cols());
	u.b.resize(static_cast<Eigen::Index>(keep.size()));

	for (std::size_t r = 0; r < keep.size(); ++r) {
		const auto ri = static_cast<Eigen::Index>(r);
		const double nrm = P.A().row(keep[r]).norm();
		u.A.row(ri) = P.A().row(keep[r]) / nrm;
		u.b(ri) = P.b()(keep[r]) / nrm;
	}

	return u;
}

HPolytope remove_redundant_nonempty(const HPolytope &P)
{
	const Eigen::Index m = P.A().rows();
	std::vector<bool> alive(static_cast<std::size_t>(m), true);
	std::vector<double> norms(static_cast<std::size_t>(m));

	for (Eigen::Index i = 0; i < m; ++i) {
		norms[static_cast<std::size_t>(i)] = P.A().row(i).norm();
	}

	Eigen::MatrixXd A_sub;
	Eigen::VectorXd b_sub;

	for (Eigen::Index i = 0; i < m; ++i) {
		const double ni = norms[static_cast<std::size_t>(i)];

		if (ni <= 1e-14) {
			// zero row: vacuous on a nonempty set
			alive[static_cast<std::size_t>(i)] = false;
			continue;
		}

		Eigen::Index count = 0;

		for (Eigen::Index j = 0; j < m; ++j) {
			count += alive[static_cast<std::size_t>(j)] ? 1 : 0;
		}

		A_sub.resize(count, P.A().cols());
		b_sub.resize(count);
		Eigen::Index r = 0;

		for (Eigen::Index j = 0; j < m; ++j) {
			if (!alive[static_cast<std::size_t>(j)]) {
				continue;
			}

			A_sub.row(r) = P.A().row(j);
			b_sub(r) = P.b()(j);

			if (j == i) {
				b_sub(r) += ni; // relax by one unit of normalized distance
			}

			++r;
		}

		const Eigen::VectorXd c = P.A().row(i).transpose() / ni;
		const lp::Result res = lp::maximize(c, A_sub, b_sub);

		if (res.status == lp::Status::Optimal && res.value <= P.b()(i) / ni + kEpsLp) {
			alive[static_cast<std::size_t>(i)] = false;
		}
	}

	Eigen::Index count = 0;

	for (bool a : alive) {
		count += a ? 1 : 0;
	}

	Eigen::MatrixXd A(count, P.A().cols());
	Eigen::VectorXd b(count);
	Eigen::Index r = 0;

	for (Eigen::Index i = 0; i < m; ++i) {
		if (alive[static_cast<std::size_t>(i)]) {
			A.row(r) = P.A().row(i);
			b(r) = P.b()(i);
			++r;
		}
	}

	return HPolytope(std::move(A), std::move(b));
}

bool bounded(const HPolytope &P)
{
	const auto p = static_cast<Eigen::Index>(P.dim());

	for (Eigen::Index j = 0; j < p; ++j) {
		for (double s : {1.0, -1.0}) {
			Eigen::VectorXd c = Eigen::VectorXd::Zero(p);
			c(j) = s;

			if (lp::maximize(c, P.A(), P.b()).status == lp::Status::Unbounded) {
				return false;
			}
		}
	}

	return true;
}

// Solves the p x p system in place by Gaussian elimination with partial
// pivoting. Returns false on a pivot below the threshold.
bool solve_small(std::vector<double> &M, std::vector<double> &rhs, int p)
{
	for (int col = 0; col < p; ++col) {
		int piv = col;
		double best = std::abs(M[static_cast<std::size_t>(col * p + col)]);

		for (int r = col + 1; r < p; ++r) {
			const double v = std::abs(M[static_cast<std::size_t>(r * p + col)]);

			if (v > best) {
				best = v;
				piv = r;
			}
		}

		if (best < kPivotThreshold) {
			return false;
		}

		if (piv != col) {
			for (int k = 0; k < p; ++k) {
				std::swap(M[static_cast<std::size_t>(col * p + k)], M[static_cast<std::size_t>(piv * p + k)]);
			}

			std::swap(rhs[static_cast<std::size_t>(col)], rhs[static_cast<std::size_t>(piv)]);
		}

		const double d = M[static_cast<std::size_t>(col * p + col)];

		for (int r = col + 1; r < p; ++r) {
			const double f = M[static_cast<std::size_t>(r * p + col)] / d;

			if (f == 0.0) {
				continue;
			}

			for (int k = col; k < p; ++k) {
				M[static_cast<std::size_t>(r * p + k)] -= f * M[static_cast<std::size_t>(col * p + k)];
			}

			rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
		}
	}

	for (int r = p - 1; r >= 0; --r) {
		double s = rhs[static_cast<std::size_t>(r)];

		for (int k = r + 1; k < p; ++k) {
			s -= M[static_cast<std::size_t>(r * p + k)] * rhs[static_cast<std::size_t>(k)];
		}

		rhs[static_cast<std::size_t>(r)] = s / M[static_cast<std::size_t>(r * p + r)];
	}

	return true;
}

} // namespace

HPolytope::HPolytope(Eigen::MatrixXd A, Eigen::VectorXd b) : _A(std::move(A)), _b(std::move(b))
{
	if (_A.rows() != _b.size()) {
		throw DimensionError("polytope has " + std::to_string(_A.rows()) + " constraint rows but "
				     + std::to_string(_b.size()) + " offsets");
	}
}

HPolytope HPolytope::box(const Eigen::VectorXd &lower, const Eigen::VectorXd &upper)
{
	if (lower.size() != upper.size()) {
		throw DimensionError("box bounds differ in length");
	}

	const Eigen::Index p = lower.size();
	Eigen::MatrixXd A(2 * p, p);
	A.topRows(p).setIdentity();
	A.bottomRows(p) = -Eigen::MatrixXd::Identity(p, p);
	Eigen::VectorXd b(2 * p);
	b.head(p) = upper;
	b.tail(p) = -lower;
	return HPolytope(std::move(A), std::move(b));
}

HPolytope HPolytope::full_space(std::size_t dim)
{
	return HPolytope(Eigen::MatrixXd(0, static_cast<Eigen::Index>(dim)), Eigen::VectorXd(0));
}

double HPolytope::min_slack(const Eigen::VectorXd &x) const
{
	if (x.size() != _A.cols()) {
		throw DimensionError("point dimension differs from polytope dimension");
	}

	double best = std::numeric_limits<double>::infinity();

	for (Eigen::Index i = 0; i < _A.rows(); ++i) {
		const double nrm = _A.row(i).norm();
		const double slack = _b(i) - _A.row(i).dot(x);

		if (nrm > 1e-14) {
			best = std::min(best, slack / nrm);

		} else {
			best = std::min(best, slack >= 0.0 ? std::numeric_limits<double>::infinity() : slack);
		}
	}

	return best;
}

bool is_empty(const HPolytope &P)
{
	return lp::max_violation_lower_bound(P.A(), P.b()) > kEpsLp;
}

HPolytope remove_redundant(const HPolytope &P)
{
	if (is_empty(P)) {
		throw EmptinessError("remove_redundant: polytope is empty");
	}

	return remove_redundant_nonempty(P);
}

VertexSet enumerate_vertices(const HPolytope &P, const VertexOptions &options)
{
	if (!options.assume_nonempty && is_empty(P)) {
		throw EmptinessError("enumerate_vertices: polytope is empty");
	}

	const HPolytope R = options.assume_irredundant ? P : remove_redundant_nonempty(P);

	if (!options.assume_bounded && !bounded(R)) {
		throw UnboundednessError("enumerate_vertices: polytope is unbounded");
	}

	const UnitRows u = unit_rows(R);
	const int p = static_cast<int>(P.dim());
	const int m = static_cast<int>(u.A.rows());

	VertexSet out;
	out.dim = P.dim();

	if (p == 0 || m < p) {
		return out;
	}

	std::vector<int> idx(static_cast<std::size_t>(p));

	for (int i = 0; i < p; ++i) {
		idx[static_cast<std::size_t>(i)] = i;
	}

	std::vector<double> M(static_cast<std::size_t>(p * p));
	std::vector<double> rhs(static_cast<std::size_t>(p));
	Eigen::VectorXd x(p);

	while (true) {
		for (int r = 0; r < p; ++r) {
			const auto row = static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]);

			for (int k = 0; k < p; ++k) {
				M[static_cast<std::size_t>(r * p + k)] = u.A(row, k);
			}

			rhs[static_cast<std::size_t>(r)] = u.b(row);
		}

		if (solve_small(M, rhs, p)) {
			for (int k = 0; k < p; ++k) {
				x(k) = rhs[static_cast<std::size_t>(k)];
			}

			bool feasible = true;

			for (int i = 0; i < m && feasible; ++i) {
				feasible = u.A.row(i).dot(x) <= u.b(i) + kEpsFeas;
			}

			if (feasible) {
				const bool dup = std::any_of(out.vertices.begin(), out.vertices.end(), [&x](const Eigen::VectorXd &v) {
					return (v - x).lpNorm<Eigen::Infinity>() <= kEpsDup;
				});

				if (!dup) {
					out.vertices.push_back(x);
				}
			}
		}

		// next combination in lexicographic order
		int pos = p - 1;

		while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == m - p + pos) {
			--pos;
		}

		if (pos < 0) {
			break;
		}

		++idx[static_cast<std::size_t>(pos)];

		for (int k = pos + 1; k < p; ++k) {
			idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
		}
	}

	return out;
}

HPolytope intersect(const HPolytope &P, const HPolytope &Q)
{
	if (P.dim() != Q.dim()) {
		throw DimensionError("intersect: dimensions " + std::to_string(P.dim()) + " and " + std::to_string(Q.dim()));
	}

	Eigen::MatrixXd A(P.A().rows() + Q.A().rows(), P.A().cols());
	A << P.A(), Q.A();
	Eigen::VectorXd b(P.b().size() + Q.b().size());
	b << P.b(), Q.b();
	return HPolytope(std::move(A), std::move(b));
}

Interval project_axis(const VertexSet &V, std::size_t axis)
{
	if (V.empty()) {
		throw EmptinessError("project_axis: empty vertex set");
	}

	if (axis >= V.dim) {
		throw DimensionError("project_axis: axis " + std::to_string(axis) + " out of range");
	}

	const auto a = static_cast<Eigen::Index>(axis);
	double lo = V.vertices.front()(a);
	double hi = lo;

	for (const Eigen::VectorXd &v : V.vertices) {
		lo = std::min(lo, v(a));
		hi = std::max(hi, v(a));
	}

	return Interval(lo, hi);
}

Eigen::VectorXd vertex_centroid(const VertexSet &V)
{
	if (V.empty()) {
		throw EmptinessError("vertex_centroid: empty vertex set");
	}

	Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(V.dim));

	for (const Eigen::VectorXd &v : V.vertices) {
		c += v;
	}

	return c / static_cast<double>(V.size());
}

double support(const HPolytope &P, const Eigen::VectorXd &direction)
{
	const lp::Result r = lp::maximize(direction, P.A(), P.b());

	if (r.status == lp::Status::Infeasible) {
		throw EmptinessError("support: polytope is empty");
	}

	if (r.status == lp::Status::Unbounded) {
		throw UnboundednessError("support: unbounded in the given direction");
	}

	return r.value;
}

bool vertices_inside(const VertexSet &V, const HPolytope &Q, double tol)
{
	return std::all_of(V.vertices.begin(), V.vertices.end(),
			   [&](const Eigen::VectorXd &v) { return Q.contains(v, tol); });
}

} // namespace smefd
