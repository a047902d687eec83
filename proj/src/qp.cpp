#include "smefd/qp.hpp"

#include "smefd/errors.hpp"
#include "smefd/lp.hpp"
#include "smefd/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace smefd::qp
{

Result solve(const Eigen::MatrixXd &P, const Eigen::VectorXd &q, const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
	     const Eigen::VectorXd &x0)
{
	const Eigen::Index n = P.rows();

	if (P.cols() != n || q.size() != n || A.cols() != n || A.rows() != b.size() || x0.size() != n) {
		throw DimensionError("qp::solve: inconsistent problem dimensions");
	}

	// unit rows; zero rows are checked and dropped
	std::vector<Eigen::Index> rows;
	std::vector<double> norms;

	for (Eigen::Index i = 0; i < A.rows(); ++i) {
		const double nrm = A.row(i).norm();

		if (nrm > 1e-14) {
			rows.push_back(i);
			norms.push_back(nrm);

		} else if (b(i) < -kEpsLp) {
			throw InfeasibleError("qp::solve: constant constraint row is violated");
		}
	}

	const auto m = static_cast<Eigen::Index>(rows.size());
	Eigen::MatrixXd An(m, n);
	Eigen::VectorXd bn(m);

	for (Eigen::Index r = 0; r < m; ++r) {
		An.row(r) = A.row(rows[static_cast<std::size_t>(r)]) / norms[static_cast<std::size_t>(r)];
		bn(r) = b(rows[static_cast<std::size_t>(r)]) / norms[static_cast<std::size_t>(r)];
	}

	const Eigen::MatrixXd H = P + P.transpose();
	Eigen::VectorXd x = x0;

	if (m > 0 && (bn - An * x).minCoeff() < -kEpsFeas) {
		Eigen::VectorXd witness;
		const double depth = lp::max_violation_lower_bound(An, bn, &witness);

		if (depth > kEpsLp) {
			throw InfeasibleError("qp::solve: constraint set is empty");
		}

		if (witness.size() == n) {
			x = witness;
		}
	}

	std::vector<Eigen::Index> work;
	std::vector<bool> in_work(static_cast<std::size_t>(m), false);
	Result res;
	const int max_iterations = 200 + 20 * static_cast<int>(m + n);

	for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
		const Eigen::VectorXd g = H * x + q;
		const auto w = static_cast<Eigen::Index>(work.size());
		Eigen::MatrixXd Aw(w, n);

		for (Eigen::Index r = 0; r < w; ++r) {
			Aw.row(r) = An.row(work[static_cast<std::size_t>(r)]);
		}

		Eigen::MatrixXd Z;

		if (w == 0) {
			Z = Eigen::MatrixXd::Identity(n, n);

		} else {
			Eigen::HouseholderQR<Eigen::MatrixXd> qr(Aw.transpose());
			const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
			Z = Q.rightCols(n - w);
		}

		Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
		bool zero_curvature = false;

		if (Z.cols() > 0) {
			const Eigen::MatrixXd Hz = Z.transpose() * H * Z;
			const Eigen::VectorXd gz = Z.transpose() * g;
			Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Hz);
			const Eigen::VectorXd &lam = eig.eigenvalues();
			const Eigen::MatrixXd &U = eig.eigenvectors();
			const Eigen::VectorXd c = U.transpose() * gz;
			const double lam_tol = 1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff());
			const double g_tol = 1e-12 * (1.0 + g.norm());
			Eigen::VectorXd dz = Eigen::VectorXd::Zero(Z.cols());

			for (Eigen::Index j = 0; j < lam.size(); ++j) {
				if (lam(j) <= lam_tol && std::abs(c(j)) > g_tol) {
					dz -= c(j) * U.col(j);
					zero_curvature = true;
				}
			}

			if (!zero_curvature) {
				for (Eigen::Index j = 0; j < lam.size(); ++j) {
					if (lam(j) > lam_tol) {
						dz -= (c(j) / lam(j)) * U.col(j);
					}
				}
			}

			d = Z * dz;
		}

		if (d.lpNorm<Eigen::Infinity>() <= 1e-13 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
			if (w == 0) {
				break;
			}

			const Eigen::VectorXd lambda = Aw.transpose().colPivHouseholderQr().solve(-g);
			Eigen::Index worst = -1;
			double most_negative = -1e-12 * (1.0 + g.norm());

			for (Eigen::Index r = 0; r < w; ++r) {
				if (lambda(r) < most_negative) {
					most_negative = lambda(r);
					worst = r;
				}
			}

			if (worst < 0) {
				break;
			}

			in_work[static_cast<std::size_t>(work[static_cast<std::size_t>(worst)])] = false;
			work.erase(work.begin() + worst);
			continue;
		}

		double alpha = zero_curvature ? std::numeric_limits<double>::infinity() : 1.0;
		Eigen::Index blocking = -1;
		const double dn = d.norm();

		for (Eigen::Index i = 0; i < m; ++i) {
			if (in_work[static_cast<std::size_t>(i)]) {
				continue;
			}

			const double ad = An.row(i).dot(d);

			if (ad > 1e-12 * dn) {
				const double slack = std::max(0.0, bn(i) - An.row(i).dot(x));
				const double step = slack / ad;

				if (step < alpha) {
					alpha = step;
					blocking = i;
				}
			}
		}

		if (!std::isfinite(alpha)) {
			throw NumericalError("qp::solve: objective unbounded below on the feasible set");
		}

		x += alpha * d;

		if (blocking >= 0) {
			work.push_back(blocking);
			in_work[static_cast<std::size_t>(blocking)] = true;
		}
	}

	if (res.iterations >= max_iterations) {
		throw NumericalError("qp::solve: iteration limit exceeded");
	}

	res.x = x;
	res.multipliers = Eigen::VectorXd::Zero(A.rows());

	if (!work.empty()) {
		const auto w = static_cast<Eigen::Index>(work.size());
		Eigen::MatrixXd Aw(w, n);

		for (Eigen::Index r = 0; r < w; ++r) {
			Aw.row(r) = An.row(work[static_cast<std::size_t>(r)]);
		}

		const Eigen::VectorXd lambda = Aw.transpose().colPivHouseholderQr().solve(-(H * x + q));

		for (Eigen::Index r = 0; r < w; ++r) {
			const auto local = static_cast<std::size_t>(work[static_cast<std::size_t>(r)]);
			res.multipliers(rows[local]) = std::max(0.0, lambda(r)) / norms[local];
		}
	}

	return res;
}

double stationarity_residual(const Eigen::MatrixXd &P, const Eigen::VectorXd &q, const Eigen::MatrixXd &A,
			     const Eigen::VectorXd &x, const Eigen::VectorXd &multipliers)
{
	return ((P + P.transpose()) * x + q + A.transpose() * multipliers).lpNorm<Eigen::Infinity>();
}

} // namespace smefd::qp
