#include "smefd/errors.hpp"
#include "smefd/polytope.hpp"
#include "smefd/qp.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace smefd;
using smefd::testing::Rng;

namespace
{

double objective(const Eigen::MatrixXd &P, const Eigen::VectorXd &q, const Eigen::VectorXd &x)
{
	return x.dot(P * x) + q.dot(x);
}

} // namespace

TEST_CASE("interior optimum equals the unconstrained least squares")
{
	Rng rng(3);

	for (int trial = 0; trial < 50; ++trial) {
		const Eigen::MatrixXd Phi = Eigen::MatrixXd::NullaryExpr(12, 3, [&] { return rng.uniform(-1, 1); });
		const Eigen::VectorXd truth = rng.vector(3, -0.5, 0.5);
		const Eigen::VectorXd xi = Phi * truth;
		const Eigen::MatrixXd P = Phi.transpose() * Phi;
		const Eigen::VectorXd q = -2.0 * Phi.transpose() * xi;
		const HPolytope box = HPolytope::box(Eigen::Vector3d::Constant(-10), Eigen::Vector3d::Constant(10));
		const qp::Result r = qp::solve(P, q, box.A(), box.b(), Eigen::Vector3d::Zero());
		const Eigen::VectorXd ls = Phi.colPivHouseholderQr().solve(xi);
		CHECK((r.x - ls).lpNorm<Eigen::Infinity>() <= 1e-8);
		CHECK(r.multipliers.lpNorm<Eigen::Infinity>() <= 1e-12);
	}
}

TEST_CASE("box-constrained optimum is the clamped point for separable objectives")
{
	const Eigen::MatrixXd P = Eigen::Vector2d(1, 2).asDiagonal();
	// unconstrained minimum at (2, -1)
	const Eigen::VectorXd q = -2.0 * P * Eigen::Vector2d(2, -1);
	const HPolytope box = HPolytope::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
	const qp::Result r = qp::solve(P, q, box.A(), box.b(), Eigen::Vector2d(0.5, 0.5));
	CHECK(r.x(0) == doctest::Approx(1.0));
	CHECK(r.x(1) == doctest::Approx(0.0));
	CHECK(qp::stationarity_residual(P, q, box.A(), r.x, r.multipliers) <= 1e-9);
	CHECK((r.multipliers.array() >= -1e-12).all());
}

TEST_CASE("random convex programs agree with a dense grid")
{
	Rng rng(11);

	for (int trial = 0; trial < 20; ++trial) {
		const Eigen::MatrixXd B = Eigen::MatrixXd::NullaryExpr(2, 2, [&] { return rng.uniform(-1, 1); });
		// rank-deficient half of the time
		const Eigen::MatrixXd P = trial % 2 ? Eigen::MatrixXd(B.transpose() * B)
						    : Eigen::MatrixXd(B.row(0).transpose() * B.row(0));
		const Eigen::VectorXd q = rng.vector(2, -2, 2);
		const HPolytope S = smefd::testing::random_slab_polytope(rng, 2, 2);
		const VertexSet V = enumerate_vertices(S);
		const qp::Result r = qp::solve(P, q, S.A(), S.b(), vertex_centroid(V));
		REQUIRE(S.contains(r.x, 1e-9));

		double best = objective(P, q, r.x);
		const int N = 400;

		for (int i = 0; i <= N; ++i) {
			for (int j = 0; j <= N; ++j) {
				const Eigen::Vector2d x(double(i) / N, double(j) / N);

				if (S.contains(x, 0.0)) {
					best = std::min(best, objective(P, q, x));
				}
			}
		}

		CHECK(objective(P, q, r.x) <= best + 1e-12);
		CHECK(qp::stationarity_residual(P, q, S.A(), r.x, r.multipliers) <= 1e-6);
	}
}

TEST_CASE("KKT conditions hold on random instances")
{
	Rng rng(12);

	for (int trial = 0; trial < 200; ++trial) {
		const int p = rng.integer(1, 3);
		const Eigen::MatrixXd B = Eigen::MatrixXd::NullaryExpr(rng.integer(0, 4), p, [&] { return rng.uniform(-3, 3); });
		const Eigen::MatrixXd P = B.transpose() * B + 1e-3 * rng.uniform(0, 1) * Eigen::MatrixXd::Identity(p, p);
		const Eigen::VectorXd q = rng.vector(p, -5, 5);
		const HPolytope S = smefd::testing::random_slab_polytope(rng, p, rng.integer(0, 3));
		const qp::Result r = qp::solve(P, q, S.A(), S.b(), rng.vector(p, -2, 2));
		REQUIRE(S.contains(r.x, 1e-7));
		CHECK(qp::stationarity_residual(P, q, S.A(), r.x, r.multipliers) <= 1e-6);
		CHECK((r.multipliers.array() >= -1e-9).all());
		const Eigen::ArrayXd slack = (S.b() - S.A() * r.x).array();
		CHECK((slack * r.multipliers.array()).abs().maxCoeff() <= 1e-6);
	}
}

TEST_CASE("infeasible warm start is repaired")
{
	const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2, 2);
	const HPolytope box = HPolytope::box(Eigen::Vector2d(1, 1), Eigen::Vector2d(2, 2));
	const qp::Result r = qp::solve(P, Eigen::Vector2d::Zero(), box.A(), box.b(), Eigen::Vector2d(-5, 9));
	CHECK(r.x(0) == doctest::Approx(1.0));
	CHECK(r.x(1) == doctest::Approx(1.0));
}

TEST_CASE("qp errors")
{
	Eigen::MatrixXd A(2, 1);
	A << 1, -1;
	const Eigen::Vector2d b(0, -1); // x <= 0 and x >= 1
	CHECK_THROWS_AS(qp::solve(Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1), A, b, Eigen::VectorXd::Zero(1)),
			InfeasibleError);

	// minimize -x over x >= 0
	Eigen::MatrixXd H(1, 1);
	H << -1;
	CHECK_THROWS_AS(qp::solve(Eigen::MatrixXd::Zero(1, 1), -Eigen::VectorXd::Ones(1), H, Eigen::VectorXd::Zero(1),
				  Eigen::VectorXd::Ones(1)),
			NumericalError);

	// the same objective over x in [0, 1] is fine
	Eigen::MatrixXd I2(2, 1);
	I2 << -1, 1;
	const qp::Result r = qp::solve(Eigen::MatrixXd::Zero(1, 1), -Eigen::VectorXd::Ones(1), I2, Eigen::Vector2d(0, 1),
				       Eigen::VectorXd::Zero(1));
	CHECK(r.x(0) == doctest::Approx(1.0));
}
