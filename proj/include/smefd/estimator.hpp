#ifndef SMEFD_ESTIMATOR_HPP
#define SMEFD_ESTIMATOR_HPP

#include "smefd/polytope.hpp"
#include "smefd/sme.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <deque>
#include <optional>

namespace smefd
{

/// Sliding window of regression blocks G(u_{k-1}) theta = y_k - f(y_{k-1}).
class RegressionBuffer
{
public:
	/// Throws DimensionError if any argument is zero.
	RegressionBuffer(std::size_t window, std::size_t n, std::size_t p);

	/// Appends one block, evicting the oldest when the window is full.
	void push(const Eigen::MatrixXd &g_block, const Eigen::VectorXd &xi_block);
	void clear() { _blocks.clear(); }

	std::size_t window() const { return _window; }
	std::size_t blocks() const { return _blocks.size(); }
	bool empty() const { return _blocks.empty(); }
	std::size_t n() const { return _n; }
	std::size_t p() const { return _p; }

	/// Stacked regressor, blocks() * n rows by p columns (oldest first).
	Eigen::MatrixXd phi() const;
	/// Stacked observations, blocks() * n entries.
	Eigen::VectorXd xi() const;

private:
	struct Block {
		Eigen::MatrixXd g;
		Eigen::VectorXd xi;
	};

	std::size_t _window;
	std::size_t _n;
	std::size_t _p;
	std::deque<Block> _blocks;
};

/// Evaluates f at the noisy y_prev and pushes {G(u_prev), y_now - f(y_prev)}.
void push_measurement(RegressionBuffer &buf, const Eigen::VectorXd &u_prev, const Eigen::VectorXd &y_prev,
		      const Eigen::VectorXd &y_now, const SystemModel &model);

enum class ThetaTildeMode {
	PreviousEstimate, ///< last estimate, the centroid before the first one
	Centroid          ///< always the current centroid
};

struct RegularizationPolicy {
	Eigen::VectorXd lambda_bar; ///< diagonal of the maximum weights
	double alpha{10.0};
	ThetaTildeMode theta_tilde_mode{ThetaTildeMode::PreviousEstimate};

	/// Throws DimensionError on length != p, BoundError on negative weights or alpha <= 0.
	void validate(std::size_t p) const;
};

/**
 * Lambda_ii = lambda_bar_i * exp(-alpha * sigma_i), sigma sorted descending and
 * padded with zeros up to p. Returns the diagonal.
 */
Eigen::VectorXd adaptive_lambda(const RegressionBuffer &buf, const RegularizationPolicy &policy);

/**
 * Minimizer of theta^T P theta + q^T theta over the polytope, P = Phi^T Phi + Lambda,
 * q = -2 (Phi^T xi + Lambda theta_tilde), started at the centroid. When P vanishes
 * the projection of theta_tilde is returned. Throws InfeasibleError on an empty polytope.
 */
Eigen::VectorXd estimate(const RegressionBuffer &buf, const HPolytope &fps, const Eigen::VectorXd &centroid,
			 const std::optional<Eigen::VectorXd> &prev_estimate, const RegularizationPolicy &policy);

} // namespace smefd

#endif // SMEFD_ESTIMATOR_HPP
