#include "smefd/sme.hpp"

#include "smefd/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace smefd
{

void UncertaintyBounds::validate(std::size_t n) const
{
	const auto ni = static_cast<Eigen::Index>(n);

	if (d_bar.size() != ni || n_bar.size() != ni) {
		throw DimensionError("uncertainty bounds must have " + std::to_string(n) + " components");
	}

	for (Eigen::Index i = 0; i < ni; ++i) {
		if (!(d_bar(i) >= 0.0) || !(n_bar(i) >= 0.0)) {
			throw BoundError("uncertainty bounds must be nonnegative (component " + std::to_string(i) + ")");
		}
	}
}

Eigen::VectorXd unwrap_angles(const Eigen::VectorXd &y_prev, const Eigen::VectorXd &y_now,
			      const std::vector<std::size_t> &angle_components)
{
	Eigen::VectorXd out = y_now;

	for (std::size_t c : angle_components) {
		const auto i = static_cast<Eigen::Index>(c);
		const double two_pi = 2.0 * std::numbers::pi;
		const double delta = y_now(i) - y_prev(i);
		out(i) = y_now(i) - two_pi * std::round(delta / two_pi);
	}

	return out;
}

HPolytope build_ups(const Eigen::VectorXd &u_prev, const Eigen::VectorXd &y_prev, const Eigen::VectorXd &y_now,
		    const UncertaintyBounds &bounds, const SystemModel &model, UpsMode mode)
{
	const auto n = static_cast<Eigen::Index>(model.n);
	const auto p = static_cast<Eigen::Index>(model.p);

	if (y_prev.size() != n || y_now.size() != n || u_prev.size() != static_cast<Eigen::Index>(model.m)) {
		throw DimensionError("build_ups: measurement or input length disagrees with the model");
	}

	bounds.validate(model.n);

	const Eigen::MatrixXd G = model.G(u_prev);

	if (G.rows() != n || G.cols() != p) {
		throw DimensionError("build_ups: input map returned a wrongly sized matrix");
	}

	const Eigen::VectorXd y = unwrap_angles(y_prev, y_now, model.angle_components);

	const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
	const Eigen::VectorXd &box_radius = mode == UpsMode::NoiseAware ? bounds.n_bar : zero;
	const IntervalVector fbox = model.f->include(
		state_box(std::span<const double>(y_prev.data(), static_cast<std::size_t>(n)),
			  std::span<const double>(box_radius.data(), static_cast<std::size_t>(n))));

	Eigen::MatrixXd A(2 * n, p);
	Eigen::VectorXd b(2 * n);

	for (Eigen::Index i = 0; i < n; ++i) {
		const double hn = mode == UpsMode::NoiseAware ? bounds.n_bar(i) : 0.0;
		const auto &fi = fbox[static_cast<std::size_t>(i)];
		// upper half of H: -G_i theta <= d + n + f_hi - y
		A.row(i) = -G.row(i);
		b(i) = bounds.d_bar(i) + hn + fi.hi - y(i);
		// lower half: G_i theta <= d + n - f_lo + y
		A.row(n + i) = G.row(i);
		b(n + i) = bounds.d_bar(i) + hn - fi.lo + y(i);
	}

	return HPolytope(std::move(A), std::move(b));
}

FpsState make_fps_state(const Eigen::VectorXd &lower, const Eigen::VectorXd &upper,
			std::shared_ptr<const DirectionSet> directions)
{
	if (!directions || directions->p != static_cast<std::size_t>(lower.size())) {
		throw DimensionError("make_fps_state: direction set does not match the parameter dimension");
	}

	for (Eigen::Index i = 0; i < lower.size(); ++i) {
		if (!(lower(i) <= upper(i))) {
			throw BoundError("make_fps_state: inverted parameter bounds");
		}
	}

	FpsState s;
	s.theta0 = HPolytope::box(lower, upper);
	s.theta0_vertices = enumerate_vertices(s.theta0);
	s.current = s.theta0;
	s.vertices = s.theta0_vertices;
	s.directions = std::move(directions);
	return s;
}

FpsStep step_fps(const FpsState &state, const HPolytope &ups)
{
	if (ups.dim() != state.current.dim()) {
		throw DimensionError("step_fps: UPS dimension differs from the FPS dimension");
	}

	FpsStep out;
	const HPolytope candidate = intersect(state.current, ups);

	if (is_empty(candidate)) {
		out.state = state;
		out.empty = true;
		return out;
	}

	const HPolytope reduced = remove_redundant(candidate);
	// the committed set is bounded, so every intersection with it is too
	out.exact_vertices = enumerate_vertices(reduced, {.assume_nonempty = true, .assume_irredundant = true, .assume_bounded = true});

	if (out.exact_vertices.empty()) {
		throw NumericalError("step_fps: nonempty intersection produced no vertices");
	}

	out.state.current = outer_approximate(out.exact_vertices, *state.directions);
	out.state.vertices = enumerate_vertices(out.state.current,
						{.assume_nonempty = true, .assume_irredundant = true, .assume_bounded = true});
	out.state.directions = state.directions;
	out.state.theta0 = state.theta0;
	out.state.theta0_vertices = state.theta0_vertices;
	return out;
}

FpsState reset_fps(const FpsState &state)
{
	FpsState s = state;
	s.current = state.theta0;
	s.vertices = state.theta0_vertices;
	return s;
}

std::vector<Interval> fps_projections(const FpsState &state)
{
	std::vector<Interval> out;

	for (std::size_t i = 0; i < state.current.dim(); ++i) {
		out.push_back(project_axis(state.vertices, i));
	}

	return out;
}

} // namespace smefd
