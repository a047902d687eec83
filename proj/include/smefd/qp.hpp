#ifndef SMEFD_QP_HPP
#define SMEFD_QP_HPP

#include <Eigen/Dense>

namespace smefd::qp
{

struct Result {
	Eigen::VectorXd x;
	/// KKT multipliers for the original rows (zero for inactive rows).
	Eigen::VectorXd multipliers;
	int iterations{0};
};

/**
 * Primal active-set method for
 *
 *     minimize x^T P x + q^T x   subject to   A x <= b
 *
 * with P symmetric positive semidefinite, warm-started at x0.
 *
 * Zero-curvature directions of the reduced Hessian are handled explicitly: if
 * the reduced gradient has a component there, the iterate moves along it to
 * the nearest blocking constraint; otherwise a minimum-norm Newton step on the
 * positive-curvature subspace is taken. An infeasible x0 is replaced by the
 * phase-one point of the constraint set.
 *
 * Throws InfeasibleError if the constraints are empty and NumericalError if
 * the objective is unbounded below on the feasible set.
 */
Result solve(const Eigen::MatrixXd &P, const Eigen::VectorXd &q, const Eigen::MatrixXd &A, const Eigen::VectorXd &b,
	     const Eigen::VectorXd &x0);

/// Infinity norm of 2 P x + q + A^T lambda.
double stationarity_residual(const Eigen::MatrixXd &P, const Eigen::VectorXd &q, const Eigen::MatrixXd &A,
			     const Eigen::VectorXd &x, const Eigen::VectorXd &multipliers);

} // namespace smefd::qp

#endif // SMEFD_QP_HPP
