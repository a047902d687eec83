#include "smefd/lp.hpp"

#include "smefd/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace smefd::lp
{

namespace
{

enum class DualStatus { Optimal, DualInfeasible, DualUnbounded };

struct DualOutcome {
	DualStatus status{DualStatus::DualInfeasible};
	Eigen::VectorXd x;
	int iterations{0};
};

/**
 * Dense tableau for min b^T y s.t. A^T y = c, y >= 0.
 * Columns: m structural (y), n artificial, rhs. Rows: n constraints plus one
 * reduced-cost row.
 */
class DualTableau
{
public:
	DualTableau(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, const Eigen::VectorXd &c)
		: _m(static_cast<int>(A.rows())), _n(static_cast<int>(A.cols())), _cols(_m + _n + 1),
		  _t(static_cast<std::size_t>((_n + 1) * _cols), 0.0), _basis(static_cast<std::size_t>(_n)),
		  _sign(static_cast<std::size_t>(_n)), _cost(b)
	{
		for (int j = 0; j < _n; ++j) {
			const double s = c(j) >= 0.0 ? 1.0 : -1.0;
			_sign[static_cast<std::size_t>(j)] = s;

			for (int i = 0; i < _m; ++i) {
				at(j, i) = s * A(i, j);
			}

			at(j, _m + j) = 1.0;
			at(j, rhs()) = s * c(j);
			_basis[static_cast<std::size_t>(j)] = _m + j;
		}
	}

	/// Returns false if the dual equality system has no nonnegative solution.
	bool phase_one(int &iterations, int max_iterations)
	{
		// cost 1 on artificials: reduced costs of structurals are minus column sums
		for (int k = 0; k < _cols; ++k) {
			obj(k) = 0.0;
		}

		for (int j = 0; j < _n; ++j) {
			for (int k = 0; k < _m; ++k) {
				obj(k) -= at(j, k);
			}

			obj(rhs()) -= at(j, rhs());
		}

		if (!iterate(iterations, max_iterations)) {
			// phase one is bounded below by zero; hitting this means numerical trouble
			throw NumericalError("simplex phase one reported an unbounded direction");
		}

		if (-obj(rhs()) > kPhaseOneTol) {
			return false;
		}

		drive_out_artificials();
		return true;
	}

	/// Returns false if the dual is unbounded below.
	bool phase_two(int &iterations, int max_iterations)
	{
		for (int k = 0; k < _cols; ++k) {
			obj(k) = 0.0;
		}

		for (int k = 0; k < _m; ++k) {
			obj(k) = _cost(k);
		}

		for (int j = 0; j < _n; ++j) {
			const int bj = _basis[static_cast<std::size_t>(j)];

			if (bj < _m) {
				const double cb = _cost(bj);

				for (int k = 0; k < _cols; ++k) {
					obj(k) -= cb * at(j, k);
				}
			}
		}

		return iterate(iterations, max_iterations);
	}

	/// Simplex multipliers of the original (unsigned) equality rows.
	Eigen::VectorXd multipliers() const
	{
		Eigen::VectorXd x(_n);

		for (int j = 0; j < _n; ++j) {
			x(j) = -_sign[static_cast<std::size_t>(j)] * obj_c(_m + j);
		}

		return x;
	}

private:
	double &at(int r, int k) { return _t[static_cast<std::size_t>(r * _cols + k)]; }
	double at_c(int r, int k) const { return _t[static_cast<std::size_t>(r * _cols + k)]; }
	double &obj(int k) { return at(_n, k); }
	double obj_c(int k) const { return at_c(_n, k); }
	int rhs() const { return _cols - 1; }

	void pivot(int r, int k)
	{
		const double inv = 1.0 / at(r, k);

		for (int q = 0; q < _cols; ++q) {
			at(r, q) *= inv;
		}

		at(r, k) = 1.0;

		for (int i = 0; i <= _n; ++i) {
			if (i == r) {
				continue;
			}

			const double f = at(i, k);

			if (f == 0.0) {
				continue;
			}

			for (int q = 0; q < _cols; ++q) {
				at(i, q) -= f * at(r, q);
			}

			at(i, k) = 0.0;
		}

		_basis[static_cast<std::size_t>(r)] = k;
	}

	// Runs simplex iterations on the current reduced-cost row. Artificial
	// columns never enter. Returns false on an unbounded direction.
	bool iterate(int &iterations, int max_iterations)
	{
		bool bland = false;

		while (true) {
			int enter = -1;
			double best = -kCostTol;

			for (int k = 0; k < _m; ++k) {
				const double d = obj(k);

				if (d < best) {
					enter = k;

					if (bland) {
						break;
					}

					best = d;
				}
			}

			if (enter < 0) {
				return true;
			}

			int leave = -1;
			double ratio = std::numeric_limits<double>::infinity();

			for (int r = 0; r < _n; ++r) {
				const double a = at(r, enter);

				if (a > kPivotTol) {
					const double q = at(r, rhs()) / a;

					if (q < ratio - 1e-12
					    || (q <= ratio + 1e-12 && leave >= 0
						&& _basis[static_cast<std::size_t>(r)] < _basis[static_cast<std::size_t>(leave)])) {
						ratio = std::min(ratio, q);
						leave = r;
					}
				}
			}

			if (leave < 0) {
				return false;
			}

			if (ratio <= 1e-12) {
				bland = true;
			}

			pivot(leave, enter);

			if (++iterations > max_iterations) {
				throw NumericalError("simplex iteration limit exceeded");
			}
		}
	}

	void drive_out_artificials()
	{
		for (int r = 0; r < _n; ++r) {
			if (_basis[static_cast<std::size_t>(r)] < _m) {
				continue;
			}

			int best = -1;
			double mag = kPivotTol;

			for (int k = 0; k < _m; ++k) {
				if (std::abs(at(r, k)) > mag) {
					mag = std::abs(at(r, k));
					best = k;
				}
			}

			// a row without structural entries is a redundant equality; its
			// artificial stays basic at zero
			if (best >= 0) {
				pivot(r, best);
			}
		}
	}

	int _m;
	int _n;
	int _cols;
	std::vector<double> _t;
	std::vector<int> _basis;
	std::vector<double> _sign;
	Eigen::VectorXd _cost;
};

struct Scaled {
	Eigen::MatrixXd A;
	Eigen::VectorXd b;
	bool inconsistent{false};
};

// Unit-norm rows; zero rows are dropped after checking 0 <= b_i.
Scaled scale_rows(const Eigen::MatrixXd &A, const Eigen::VectorXd &b)
{
	Scaled s;
	std::vector<Eigen::Index> keep;
	std::vector<double> norms;
	keep.reserve(static_cast<std::size_t>(A.rows()));

	for (Eigen::Index i = 0; i < A.rows(); ++i) {
		const double nrm = A.row(i).norm();

		if (nrm <= 1e-14) {
			if (b(i) < -kPhaseOneTol) {
				s.inconsistent = true;
			}

			continue;
		}

		keep.push_back(i);
		norms.push_back(nrm);
	}

	s.A.resize(static_cast<Eigen::Index>(keep.size()), A.cols());
	s.b.resize(static_cast<Eigen::Index>(keep.size()));

	for (std::size_t r = 0; r < keep.size(); ++r) {
		const auto ri = static_cast<Eigen::Index>(r);
		s.A.row(ri) = A.row(keep[r]) / norms[r];
		s.b(ri) = b(keep[r]) / norms[r];
	}

	return s;
}

DualOutcome solve_dual_form(const Eigen::VectorXd &c, const Eigen::MatrixXd &A, const Eigen::VectorXd &b)
{
	DualOutcome out;
	DualTableau tab(A, b, c);
	const int max_iterations = 50 * static_cast<int>(A.rows() + A.cols()) + 100;

	if (!tab.phase_one(out.iterations, max_iterations)) {
		out.status = DualStatus::DualInfeasible;
		return out;
	}

	if (!tab.phase_two(out.iterations, max_iterations)) {
		out.status = DualStatus::DualUnbounded;
		return out;
	}

	out.status = DualStatus::Optimal;
	out.x = tab.multipliers();
	return out;
}

void check_shapes(const Eigen::MatrixXd &A, const Eigen::VectorXd &b)
{
	if (A.rows() != b.size()) {
		throw DimensionError("constraint matrix and right-hand side row counts differ");
	}
}

} // namespace

double max_violation_lower_bound(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, Eigen::VectorXd *witness)
{
	check_shapes(A, b);
	const Scaled s = scale_rows(A, b);

	if (s.inconsistent) {
		return std::numeric_limits<double>::infinity();
	}

	const Eigen::Index n = A.cols();
	Eigen::MatrixXd Aug(s.A.rows(), n + 1);
	Aug.leftCols(n) = s.A;
	Aug.col(n).setConstant(-1.0);
	Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
	c(n) = -1.0;

	const DualOutcome d = solve_dual_form(c, Aug, s.b);

	if (d.status == DualStatus::Optimal) {
		if (witness) {
			*witness = d.x.head(n);
		}

		return d.x(n);
	}

	if (d.status == DualStatus::DualInfeasible) {
		// the program is always feasible, so an infeasible dual means unbounded depth
		if (witness) {
			witness->resize(0);
		}

		return -std::numeric_limits<double>::infinity();
	}

	throw NumericalError("phase-one program reported infeasibility");
}

Result maximize(const Eigen::VectorXd &c, const Eigen::MatrixXd &A, const Eigen::VectorXd &b)
{
	check_shapes(A, b);

	if (c.size() != A.cols()) {
		throw DimensionError("objective length differs from constraint column count");
	}

	Result res;
	const Scaled s = scale_rows(A, b);

	if (s.inconsistent) {
		res.status = Status::Infeasible;
		return res;
	}

	const DualOutcome d = solve_dual_form(c, s.A, s.b);
	res.iterations = d.iterations;

	switch (d.status) {
	case DualStatus::Optimal:
		res.status = Status::Optimal;
		res.x = d.x;
		res.value = c.dot(d.x);
		break;

	case DualStatus::DualUnbounded: res.status = Status::Infeasible; break;

	case DualStatus::DualInfeasible:
		res.status = max_violation_lower_bound(A, b) > kPhaseOneTol ? Status::Infeasible : Status::Unbounded;
		break;
	}

	return res;
}

} // namespace smefd::lp
