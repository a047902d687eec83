#include "smefd/errors.hpp"
#include "smefd/sme.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace smefd;
using smefd::testing::Rng;

namespace
{

/// n = p = m = 1, f == 0, G(u) = u.
SystemModel scalar_model()
{
	ExprBuilder b;
	SystemModel m;
	m.f = std::make_shared<const DynamicsExpr>(b, std::vector<Expr>{b.constant(0.0)}, 1);
	m.G = [](const Eigen::VectorXd &u) { return Eigen::MatrixXd::Constant(1, 1, u(0)); };
	m.n = 1;
	m.m = 1;
	m.p = 1;
	return m;
}

Eigen::VectorXd v1(double x)
{
	return Eigen::VectorXd::Constant(1, x);
}

/// n = 2, p = 2: z+ = 0.9 z + diag(u) theta (linear, so sampling the truth is easy).
SystemModel planar_model()
{
	ExprBuilder b;
	const auto z = b.vars(2);
	SystemModel m;
	m.f = std::make_shared<const DynamicsExpr>(b, std::vector<Expr>{0.9 * z[0], 0.9 * z[1] + 0.1 * z[0]}, 2);
	m.G = [](const Eigen::VectorXd &u) {
		Eigen::MatrixXd G(2, 2);
		G << u(0), 0.3 * u(1), 0.2 * u(0), u(1);
		return G;
	};
	m.n = 2;
	m.m = 2;
	m.p = 2;
	return m;
}

} // namespace

TEST_CASE("scalar slab")
{
	const UncertaintyBounds bounds{v1(0.1), v1(0.1)};
	const HPolytope ups = build_ups(v1(1.0), v1(3.0), v1(0.5), bounds, scalar_model());
	REQUIRE(ups.rows() == 2);
	// 0.5 - 0.2 <= theta <= 0.5 + 0.2
	CHECK(ups.contains(v1(0.3), 1e-12));
	CHECK(ups.contains(v1(0.7), 1e-12));
	CHECK_FALSE(ups.contains(v1(0.29), 0.0));
	CHECK_FALSE(ups.contains(v1(0.71), 0.0));
}

TEST_CASE("zero bounds collapse the slab onto the hyperplane")
{
	const UncertaintyBounds bounds{v1(0.0), v1(0.0)};
	const HPolytope ups = build_ups(v1(2.0), v1(0.0), v1(0.5), bounds, scalar_model());
	CHECK(ups.contains(v1(0.25), 1e-12));
	CHECK_FALSE(ups.contains(v1(0.25 + 1e-6), 0.0));
	CHECK_FALSE(ups.contains(v1(0.25 - 1e-6), 0.0));
}

TEST_CASE("the true parameter is always inside the slab")
{
	const SystemModel model = planar_model();
	const UncertaintyBounds bounds{Eigen::Vector2d(0.02, 0.03), Eigen::Vector2d(0.01, 0.02)};
	const Eigen::Vector2d theta(0.7, 0.4);
	Rng rng(1);

	for (int trial = 0; trial < 2000; ++trial) {
		const Eigen::VectorXd z_prev = rng.vector(2, -3, 3);
		const Eigen::VectorXd u = rng.vector(2, -2, 2);
		const Eigen::VectorXd n_prev = rng.vector(2, -1, 1).cwiseProduct(bounds.n_bar);
		const Eigen::VectorXd n_now = rng.vector(2, -1, 1).cwiseProduct(bounds.n_bar);
		const Eigen::VectorXd d = rng.vector(2, -1, 1).cwiseProduct(bounds.d_bar);
		const auto fz = model.f->evaluate(std::span<const double>(z_prev.data(), 2));
		const Eigen::VectorXd z_now = Eigen::Vector2d(fz[0], fz[1]) + model.G(u) * theta + d;
		const HPolytope ups = build_ups(u, z_prev + n_prev, z_now + n_now, bounds, model);
		REQUIRE(ups.rows() == 4);
		REQUIRE(ups.contains(theta, 1e-12));
	}
}

TEST_CASE("enlarging the noise bound never shrinks the slab")
{
	const SystemModel model = planar_model();
	Rng rng(2);

	for (int trial = 0; trial < 200; ++trial) {
		const Eigen::VectorXd u = rng.vector(2, -2, 2);
		const Eigen::VectorXd y0 = rng.vector(2, -2, 2);
		const Eigen::VectorXd y1 = rng.vector(2, -2, 2);
		const UncertaintyBounds small{Eigen::Vector2d(0.02, 0.02), Eigen::Vector2d(0.01, 0.01)};
		const UncertaintyBounds large{Eigen::Vector2d(0.02, 0.02), Eigen::Vector2d(0.02, 0.015)};
		const HPolytope a = build_ups(u, y0, y1, small, model);
		const HPolytope b = build_ups(u, y0, y1, large, model);
		REQUIRE(a.A().isApprox(b.A()));
		REQUIRE(((b.b() - a.b()).array() >= 0.0).all());
	}
}

TEST_CASE("noise-blind slab drops the noise dilation")
{
	const UncertaintyBounds bounds{v1(0.1), v1(0.1)};
	const HPolytope blind = build_ups(v1(1.0), v1(3.0), v1(0.5), bounds, scalar_model(), UpsMode::NoiseBlind);
	CHECK(blind.contains(v1(0.4), 1e-12));
	CHECK(blind.contains(v1(0.6), 1e-12));
	CHECK_FALSE(blind.contains(v1(0.39), 0.0));
	CHECK_FALSE(blind.contains(v1(0.61), 0.0));
}

TEST_CASE("slab construction validates its inputs")
{
	const UncertaintyBounds bounds{v1(0.1), v1(0.1)};
	CHECK_THROWS_AS(build_ups(Eigen::Vector2d(1, 1), v1(0), v1(0), bounds, scalar_model()), DimensionError);
	const UncertaintyBounds negative{v1(-0.1), v1(0.1)};
	CHECK_THROWS_AS(build_ups(v1(1), v1(0), v1(0), negative, scalar_model()), BoundError);
	const UncertaintyBounds wrong_len{Eigen::Vector2d(0.1, 0.1), v1(0.1)};
	CHECK_THROWS_AS(build_ups(v1(1), v1(0), v1(0), wrong_len, scalar_model()), DimensionError);
}

TEST_CASE("angle components are unwrapped")
{
	const double pi = std::numbers::pi;
	const Eigen::Vector2d prev(0.0, pi - 0.01);
	const Eigen::Vector2d now(0.0, -pi + 0.01);
	const Eigen::VectorXd u = unwrap_angles(prev, now, {1});
	CHECK(u(1) == doctest::Approx(pi + 0.01));
	CHECK(unwrap_angles(prev, now, {})(1) == now(1));
}

TEST_CASE("fps step keeps, shrinks and detects")
{
	auto dirs = std::make_shared<const DirectionSet>(generate_directions(2, 1));
	const FpsState s0 = make_fps_state(Eigen::Vector2d::Zero(), Eigen::Vector2d::Ones(), dirs);
	CHECK(s0.vertices.size() == 4);

	// redundant slab leaves the set unchanged
	const FpsStep keep = step_fps(s0, HPolytope::box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(2, 2)));
	CHECK_FALSE(keep.empty);
	CHECK(smefd::testing::hausdorff(keep.state.vertices.vertices, s0.vertices.vertices) < 1e-12);

	// disjoint slab: flagged, nothing committed
	const FpsStep gone = step_fps(s0, HPolytope::box(Eigen::Vector2d(1.5, 0), Eigen::Vector2d(2, 1)));
	CHECK(gone.empty);
	CHECK(gone.state.current.A().isApprox(s0.current.A()));
	CHECK(gone.state.current.b().isApprox(s0.current.b()));

	// shrinking synthetic slabs around (1, 1) nest and converge
	const Eigen::Vector2d star(0.9, 0.8);
	FpsState s = s0;
	Rng rng(4);

	for (int k = 0; k < 60; ++k) {
		const Eigen::Vector2d g = rng.unit(2);
		const double w = 0.05 + 0.5 / (k + 1);
		Eigen::MatrixXd A(2, 2);
		A << g.transpose(), -g.transpose();
		const HPolytope ups(A, Eigen::Vector2d(g.dot(star) + w, -(g.dot(star) - w)));
		const FpsStep next = step_fps(s, ups);
		REQUIRE_FALSE(next.empty);
		REQUIRE(vertices_inside(next.state.vertices, s.current));
		REQUIRE(next.state.current.contains(star));
		s = next.state;
	}

	CHECK(project_axis(s.vertices, 0).width() < 0.25);
	CHECK(project_axis(s.vertices, 1).width() < 0.25);

	const FpsState r = reset_fps(s);
	CHECK(smefd::testing::hausdorff(r.vertices.vertices, s0.vertices.vertices) < 1e-15);
	const FpsState rr = reset_fps(r);
	CHECK(rr.current.b().isApprox(r.current.b()));

	const auto proj = fps_projections(s0);
	REQUIRE(proj.size() == 2);
	CHECK(proj[0].lo == 0.0);
	CHECK(proj[0].hi == 1.0);
}

TEST_CASE("reset then step matches a fresh state")
{
	auto dirs = std::make_shared<const DirectionSet>(generate_directions(3, 1));
	const FpsState fresh = make_fps_state(Eigen::Vector3d::Zero(), Eigen::Vector3d::Ones(), dirs);
	Rng rng(8);
	const HPolytope slab = smefd::testing::random_slab_polytope(rng, 3, 1);
	FpsState dirty = step_fps(fresh, smefd::testing::random_slab_polytope(rng, 3, 2)).state;
	const FpsStep a = step_fps(reset_fps(dirty), slab);
	const FpsStep b = step_fps(fresh, slab);
	CHECK(smefd::testing::hausdorff(a.state.vertices.vertices, b.state.vertices.vertices) < 1e-12);
	CHECK_THROWS_AS(make_fps_state(Eigen::Vector2d::Zero(), Eigen::Vector2d::Ones(), dirs), DimensionError);
}
