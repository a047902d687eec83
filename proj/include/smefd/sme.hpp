#ifndef SMEFD_SME_HPP
#define SMEFD_SME_HPP

#include "smefd/approximation.hpp"
#include "smefd/expression.hpp"
#include "smefd/polytope.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace smefd
{

/// Known bounds |d_k| <= d_bar (discrete-step units) and |n_k| <= n_bar.
struct UncertaintyBounds {
	Eigen::VectorXd d_bar;
	Eigen::VectorXd n_bar;

	/// Throws DimensionError on length != n, BoundError on negative or NaN entries.
	void validate(std::size_t n) const;
};

/**
 * Discrete plant z_{k+1} = f(z_k) + G(u_k) theta + d_k observed through
 * y_k = z_k + n_k.
 */
struct SystemModel {
	std::shared_ptr<const DynamicsExpr> f;
	std::function<Eigen::MatrixXd(const Eigen::VectorXd &)> G; ///< n x p
	std::size_t n{0};
	std::size_t m{0};
	std::size_t p{0};
	/// State components that are angles; differences are taken modulo 2 pi.
	std::vector<std::size_t> angle_components;
};

enum class UpsMode {
	NoiseAware, ///< dilate by h_n and the interval enclosure of f
	NoiseBlind  ///< disturbance bound only, f evaluated at the measurement
};

/// y_now with its angle components shifted by multiples of 2 pi to lie within pi of y_prev.
Eigen::VectorXd unwrap_angles(const Eigen::VectorXd &y_prev, const Eigen::VectorXd &y_now,
			      const std::vector<std::size_t> &angle_components);

/**
 * Unfalsified parameter set of one triple {u_{k-1}, y_{k-1}, y_k}:
 * {theta : -H G(u_{k-1}) theta <= h_d + h_n + h_f(y_{k-1}) - H y_k}, H = [I; -I],
 * with [f_lo, f_hi] the interval enclosure of f over [y_{k-1} - n_bar, y_{k-1} + n_bar]
 * and h_f = [f_hi; -f_lo]. Always 2n rows and p columns.
 */
HPolytope build_ups(const Eigen::VectorXd &u_prev, const Eigen::VectorXd &y_prev, const Eigen::VectorXd &y_now,
		    const UncertaintyBounds &bounds, const SystemModel &model, UpsMode mode = UpsMode::NoiseAware);

/// Running outer approximation of the feasible parameter set.
struct FpsState {
	HPolytope current;  ///< committed outer approximation
	VertexSet vertices; ///< vertices of `current`
	std::shared_ptr<const DirectionSet> directions;
	HPolytope theta0;   ///< initial box
	VertexSet theta0_vertices;
};

/// State at the initial box; throws DimensionError if the box and directions disagree.
FpsState make_fps_state(const Eigen::VectorXd &lower, const Eigen::VectorXd &upper,
			std::shared_ptr<const DirectionSet> directions);

struct FpsStep {
	FpsState state;
	bool empty{false}; ///< current ∩ ups is empty; state left unchanged
	/// Vertices of current ∩ ups before outer approximation (empty when `empty`).
	VertexSet exact_vertices;
};

/**
 * One recursion: intersect with the UPS, test emptiness, and if nonempty remove
 * redundancy, enumerate vertices and commit the outer approximation along the
 * state's directions.
 */
FpsStep step_fps(const FpsState &state, const HPolytope &ups);

/// current := theta0, vertices := box corners.
FpsState reset_fps(const FpsState &state);

/// Axis projections of the committed set.
std::vector<Interval> fps_projections(const FpsState &state);

} // namespace smefd

#endif // SMEFD_SME_HPP
