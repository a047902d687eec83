#ifndef SMEFD_LP_HPP
#define SMEFD_LP_HPP

#include <Eigen/Dense>

namespace smefd::lp
{

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
	Status status{Status::Infeasible};
	Eigen::VectorXd x;   ///< maximizer when Optimal
	double value{0.0};   ///< c^T x when Optimal
	int iterations{0};
};

/// Optimality and pivot tolerances of the simplex kernel (rows are scaled to unit norm).
inline constexpr double kPivotTol = 1e-11;
inline constexpr double kCostTol = 1e-11;
inline constexpr double kPhaseOneTol = 1e-9;

/**
 * maximize c^T x  subject to  A x <= b,  x free.
 *
 * Solved through its dual, min b^T y s.t. A^T y = c, y >= 0, with a two-phase
 * dense tableau simplex. The tableau has one row per primal variable, so cost
 * grows with the number of constraints only linearly. Dantzig pricing is used
 * until a degenerate pivot occurs, after which Bland's rule takes over to
 * rule out cycling. The primal maximizer is recovered from the simplex
 * multipliers of the dual.
 *
 * Rows are scaled to unit Euclidean norm internally; all-zero rows are checked
 * for consistency (b_i >= -tol) and otherwise ignored.
 */
Result maximize(const Eigen::VectorXd &c, const Eigen::MatrixXd &A, const Eigen::VectorXd &b);

/**
 * Phase-one feasibility program: t* = min_x max_i (a_i^T x - b_i) / ||a_i||.
 *
 * Returns t* (or -infinity when the program is unbounded below, i.e. the set
 * has unbounded depth) and, when finite, the minimizing x in `witness`.
 * The set {A x <= b} is empty iff t* > tolerance.
 */
double max_violation_lower_bound(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, Eigen::VectorXd *witness = nullptr);

} // namespace smefd::lp

#endif // SMEFD_LP_HPP
