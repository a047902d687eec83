#include "smefd/errors.hpp"
#include "smefd/estimator.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace smefd;
using smefd::testing::Rng;

namespace
{

SystemModel identity_model(std::size_t p)
{
	ExprBuilder b;
	std::vector<Expr> zero(p, b.constant(0.0));
	SystemModel m;
	m.f = std::make_shared<const DynamicsExpr>(b, zero, p);
	m.G = [p](const Eigen::VectorXd &u) { return Eigen::MatrixXd(u(0) * Eigen::MatrixXd::Identity(p, p)); };
	m.n = p;
	m.m = 1;
	m.p = p;
	return m;
}

RegularizationPolicy policy(std::size_t p, double lambda, double alpha = 10.0)
{
	RegularizationPolicy r;
	r.lambda_bar = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p), lambda);
	r.alpha = alpha;
	return r;
}

} // namespace

TEST_CASE("buffer keeps the newest window")
{
	RegressionBuffer buf(2, 1, 1);
	CHECK(buf.empty());

	for (int i = 1; i <= 3; ++i) {
		buf.push(Eigen::MatrixXd::Constant(1, 1, i), Eigen::VectorXd::Constant(1, 10 * i));
	}

	CHECK(buf.blocks() == 2);
	CHECK(buf.phi()(0, 0) == 2.0);
	CHECK(buf.phi()(1, 0) == 3.0);
	CHECK(buf.xi()(0) == 20.0);
	CHECK(buf.xi()(1) == 30.0);
	CHECK(buf.phi().rows() == buf.xi().size());
	buf.clear();
	CHECK(buf.empty());
	CHECK(buf.phi().rows() == 0);

	CHECK_THROWS_AS(RegressionBuffer(0, 1, 1), DimensionError);
	CHECK_THROWS_AS(buf.push(Eigen::MatrixXd::Zero(2, 1), Eigen::VectorXd::Zero(1)), DimensionError);
}

TEST_CASE("noiseless observation equals the true parameter")
{
	const SystemModel m = identity_model(1);
	RegressionBuffer buf(5, 1, 1);
	push_measurement(buf, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, 7.0), Eigen::VectorXd::Constant(1, 0.42), m);
	CHECK(buf.xi()(0) == doctest::Approx(0.42));
	CHECK(buf.phi()(0, 0) == 1.0);
}

TEST_CASE("adaptive weights")
{
	RegressionBuffer buf(4, 2, 2);
	CHECK(adaptive_lambda(buf, policy(2, 3.0)).isApprox(Eigen::Vector2d(3, 3)));

	// single block with singular values (ln 2, 0)
	Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
	g(0, 0) = std::log(2.0);
	buf.push(g, Eigen::Vector2d::Zero());
	const Eigen::VectorXd lam = adaptive_lambda(buf, policy(2, 1.0, 1.0));
	CHECK(lam(0) == doctest::Approx(0.5));
	CHECK(lam(1) == doctest::Approx(1.0));

	buf.push(100.0 * Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero());
	CHECK(adaptive_lambda(buf, policy(2, 1.0)).norm() < 1e-300);

	RegularizationPolicy bad = policy(2, 1.0);
	bad.alpha = 0.0;
	CHECK_THROWS_AS(bad.validate(2), BoundError);
	CHECK_THROWS_AS(policy(3, 1.0).validate(2), DimensionError);
	CHECK_THROWS_AS(policy(2, -1.0).validate(2), BoundError);
}

TEST_CASE("empty buffer projects the regularization target")
{
	const RegressionBuffer buf(3, 2, 2);
	const HPolytope box = HPolytope::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
	const Eigen::VectorXd c(Eigen::Vector2d(0.5, 0.5));
	CHECK((estimate(buf, box, c, std::nullopt, policy(2, 1.0)) - c).norm() < 1e-9);
	const Eigen::VectorXd prev(Eigen::Vector2d(1.5, 0.2));
	CHECK((estimate(buf, box, c, prev, policy(2, 1.0)) - Eigen::Vector2d(1.0, 0.2)).norm() < 1e-9);
	// no regularization and no data: still well defined
	CHECK((estimate(buf, box, c, prev, policy(2, 0.0)) - Eigen::Vector2d(1.0, 0.2)).norm() < 1e-9);
}

TEST_CASE("estimate matches constrained least squares on a grid")
{
	RegressionBuffer buf(10, 2, 2);
	Eigen::MatrixXd g(2, 2);
	g << 1, 1, 0, 0; // rank one: only the sum is observed
	buf.push(g, Eigen::Vector2d(1.4, 0));
	const HPolytope box = HPolytope::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
	const Eigen::VectorXd c(Eigen::Vector2d(0.5, 0.5));
	const RegularizationPolicy pol = policy(2, 0.0);
	const Eigen::VectorXd th = estimate(buf, box, c, std::nullopt, pol);
	CHECK(th.sum() == doctest::Approx(1.4).epsilon(1e-9));
	CHECK(box.contains(th));

	// regularized: the grid minimum of the full objective
	const RegularizationPolicy reg = policy(2, 0.3, 1.0);
	const Eigen::VectorXd lam = adaptive_lambda(buf, reg);
	const Eigen::VectorXd prev(Eigen::Vector2d(0.9, 0.1));
	const Eigen::VectorXd est = estimate(buf, box, c, prev, reg);
	const auto cost = [&](const Eigen::Vector2d &t) {
		const Eigen::VectorXd r = buf.phi() * t - buf.xi();
		const Eigen::VectorXd d = t - prev;
		return r.squaredNorm() + d.dot(lam.asDiagonal() * d);
	};
	double best = cost(est);

	for (int i = 0; i <= 500; ++i) {
		for (int j = 0; j <= 500; ++j) {
			best = std::min(best, cost(Eigen::Vector2d(i / 500.0, j / 500.0)));
		}
	}

	CHECK(cost(est) <= best + 1e-12);
}

TEST_CASE("estimate is continuous in the regularization weight")
{
	Rng rng(5);
	RegressionBuffer buf(10, 3, 3);

	for (int i = 0; i < 3; ++i) {
		buf.push(Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return rng.uniform(-0.2, 0.2); }), rng.vector(3, -0.1, 0.1));
	}

	const HPolytope box = HPolytope::box(Eigen::Vector3d::Zero(), Eigen::Vector3d::Ones());
	const Eigen::VectorXd c = Eigen::Vector3d::Constant(0.5);
	const Eigen::VectorXd prev = Eigen::Vector3d(0.2, 0.8, 0.4);
	const Eigen::VectorXd a = estimate(buf, box, c, prev, policy(3, 0.0));
	const Eigen::VectorXd b = estimate(buf, box, c, prev, policy(3, 1e-9));
	CHECK((a - b).norm() < 1e-5);
}

TEST_CASE("estimate rejects an empty set")
{
	const RegressionBuffer buf(3, 1, 1);
	Eigen::MatrixXd A(2, 1);
	A << 1, -1;
	const HPolytope none(A, Eigen::Vector2d(0, -1));
	CHECK_THROWS_AS(estimate(buf, none, Eigen::VectorXd::Zero(1), std::nullopt, policy(1, 1.0)), InfeasibleError);
}
