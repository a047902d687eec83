#include "smefd/asv.hpp"
#include "smefd/config.hpp"
#include "smefd/errors.hpp"
#include "smefd/runner.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace smefd;
using smefd::testing::Rng;

namespace
{

const Eigen::VectorXd kNoDisturbance = Eigen::VectorXd::Zero(6);

VesselParams vessel(double dt = 0.05)
{
	VesselParams v = default_scenario().vessel;
	v.dt = dt;
	return v;
}

Eigen::VectorXd state_diff(const AsvState &a, const AsvState &b)
{
	Eigen::VectorXd d = a.to_vector() - b.to_vector();
	d(2) = wrap_angle(d(2));
	return d;
}

} // namespace

TEST_CASE("zero input at rest is an equilibrium")
{
	const AsvModel model(vessel());
	AsvState s;
	s.x = 3;
	s.y = -2;
	s.psi = 0.7;
	const AsvState next = model.step_truth(s, AsvInput{}, Eigen::Vector3d::Ones(), kNoDisturbance);
	CHECK(state_diff(next, s).norm() == 0.0);
	CHECK(model.input_map(AsvInput{}).norm() == 0.0);
}

TEST_CASE("input map columns")
{
	const AsvModel model(vessel());
	const VesselParams &p = model.params();
	AsvInput in;
	in.tau_l = 1.0;
	const Eigen::MatrixXd G = model.input_map(in);
	const Eigen::Vector3d expected = p.M.inverse() * Eigen::Vector3d(1, 0, -p.w_lr);
	CHECK(G.topRows(3).norm() == 0.0);
	CHECK((G.col(0).tail(3) - expected).norm() < 1e-15);
	CHECK(G.col(1).norm() == 0.0);
	CHECK(G.col(2).norm() == 0.0);

	// theta = 1 recovers the healthy generalized force
	in = AsvInput{12.0, -3.0, 4.0, 0.2, -0.3};
	const Eigen::Vector3d force = model.thrust_matrix(in).rowwise().sum();
	const double cl = 12.0 * std::cos(0.2), sl = 12.0 * std::sin(0.2);
	const double cr = -3.0 * std::cos(-0.3), sr = -3.0 * std::sin(-0.3);
	const Eigen::Vector3d hand(cl + cr, sl + sr, -p.w_lr * cl - p.l_lr * sl + p.w_lr * cr - p.l_lr * sr + p.l_b * 4.0);
	CHECK((force - hand).norm() < 1e-12);
	CHECK((model.input_map(in) * Eigen::Vector3d::Ones()).tail(3).isApprox(p.M.inverse() * hand));
}

TEST_CASE("pure surge keeps sway and yaw at zero")
{
	const AsvModel model(vessel());
	AsvState s;
	AsvInput in;
	in.tau_l = 10;
	in.tau_r = 10;

	for (int k = 0; k < 400; ++k) {
		s = model.step_truth(s, in, Eigen::Vector3d(0.6, 0.6, 1.0), kNoDisturbance);
	}

	CHECK(s.u > 0.1);
	CHECK(s.v == 0.0);
	CHECK(s.r == 0.0);
	CHECK(s.psi == 0.0);
}

TEST_CASE("unforced kinetic energy never increases")
{
	const AsvModel model(vessel());
	Rng rng(9);

	for (int trial = 0; trial < 20; ++trial) {
		AsvState s = AsvState::from_vector(rng.vector(6, -2, 2));
		s.psi = wrap_angle(s.psi);
		double e = model.kinetic_energy(s);

		for (int k = 0; k < 400; ++k) {
			s = model.step_truth(s, AsvInput{}, Eigen::Vector3d::Ones(), kNoDisturbance);
			const double next = model.kinetic_energy(s);
			REQUIRE(next <= e * (1.0 + 1e-14));
			e = next;
		}
	}
}

TEST_CASE("integrator is fourth order")
{
	const AsvInput in{20.0, 12.0, 3.0, 0.2, 0.2};
	const Eigen::Vector3d theta(1.0, 0.8, 1.0);
	AsvState start;
	start.u = 0.5;
	start.r = 0.1;

	const auto simulate = [&](double dt) {
		const AsvModel model(vessel(dt));
		AsvState s = start;
		const int steps = static_cast<int>(std::lround(10.0 / dt));

		for (int k = 0; k < steps; ++k) {
			s = model.step_truth(s, in, theta, kNoDisturbance);
		}

		return s;
	};

	const AsvState a = simulate(0.2);
	const AsvState b = simulate(0.1);
	const AsvState c = simulate(0.05);
	const double order = std::log2(state_diff(a, b).norm() / state_diff(b, c).norm());
	CAPTURE(order);
	CHECK(order >= 3.5);
}

TEST_CASE("loss of effectiveness equals pre-scaled actuator forces")
{
	const AsvModel model(vessel());
	Rng rng(10);

	for (int trial = 0; trial < 50; ++trial) {
		AsvState s = AsvState::from_vector(rng.vector(6, -1, 1));
		const AsvInput in{rng.uniform(-10, 40), rng.uniform(-10, 40), rng.uniform(-10, 10), rng.uniform(-0.5, 0.5),
				  rng.uniform(-0.5, 0.5)};
		const Eigen::Vector3d theta = rng.vector(3, 0, 1);
		AsvInput scaled = in;
		scaled.tau_l *= theta(0);
		scaled.tau_r *= theta(1);
		scaled.tau_b *= theta(2);
		const Eigen::VectorXd d = rng.vector(6, -0.01, 0.01);
		const AsvState a = model.step_truth(s, in, theta, d);
		const AsvState b = model.step_truth(s, scaled, Eigen::Vector3d::Ones(), d);
		CHECK(state_diff(a, b).lpNorm<Eigen::Infinity>() <= 1e-13);
	}
}

TEST_CASE("right-thruster fault creates a yaw asymmetry")
{
	const AsvModel model(vessel());
	const AsvInput in{20.0, 20.0, 0.0, 0.0, 0.0};
	AsvState healthy, faulty;

	for (int k = 0; k < 40; ++k) {
		healthy = model.step_truth(healthy, in, Eigen::Vector3d::Ones(), kNoDisturbance);
		faulty = model.step_truth(faulty, in, Eigen::Vector3d(1.0, 0.2, 1.0), kNoDisturbance);
	}

	CHECK(healthy.r == 0.0);
	CHECK(faulty.r < -1e-3);
}

TEST_CASE("measurement and noise streams")
{
	AsvState s;
	s.x = 1;
	s.psi = 0.5;
	CHECK(measure(s, Eigen::VectorXd::Zero(6)) == s.to_vector());
	const Eigen::VectorXd n_bar = default_scenario().bounds.n_bar;
	CHECK((measure(s, n_bar) - s.to_vector() - n_bar).norm() < 1e-15);
	s.psi = 3.14159;
	CHECK(measure(s, n_bar)(2) < 0.0); // wrapped

	UniformStream a(42), b(42), c(43);
	bool differs = false;

	for (int i = 0; i < 1000; ++i) {
		const double x = a.unit();
		REQUIRE(x == b.unit());
		REQUIRE(x >= 0.0);
		REQUIRE(x < 1.0);
		differs = differs || x != c.unit();
	}

	CHECK(differs);
	const Eigen::VectorXd v = a.symmetric(n_bar);
	CHECK((v.array().abs() <= n_bar.array()).all());
}

TEST_CASE("controller signs and dither")
{
	const ScenarioConfig cfg = default_scenario();
	const AsvModel model(cfg.vessel);
	ReferencePath line;

	// on the path and heading: azimuths and bow are the only asymmetry
	Eigen::VectorXd y = Eigen::VectorXd::Zero(6);
	y(3) = cfg.gains.cruise_speed;
	ControllerGains quiet = cfg.gains;
	quiet.bow_dither = 0;
	quiet.alpha_amplitude = 0;
	AsvInput in = controller_step(y, 0.0, line, quiet, cfg.vessel);
	CHECK(in.tau_l == doctest::Approx(in.tau_r));
	CHECK(in.tau_b == 0.0);
	CHECK(model.input_map(in).col(2).norm() == 0.0);

	// offset to the left (+y) turns right (negative yaw moment)
	y(1) = 2.0;
	in = controller_step(y, 0.0, line, quiet, cfg.vessel);
	CHECK(in.tau_l > in.tau_r);
	CHECK(model.thrust_matrix(in).row(2).sum() < 0.0);

	// outputs respect the limits
	y(1) = 50.0;
	y(5) = 3.0;
	in = controller_step(y, 1.0, line, cfg.gains, cfg.vessel);
	const ActuatorLimits &lim = cfg.vessel.limits;
	CHECK(in.tau_l <= lim.tau_max);
	CHECK(in.tau_l >= lim.tau_min);
	CHECK(in.tau_r <= lim.tau_max);
	CHECK(in.tau_r >= lim.tau_min);
	CHECK(std::abs(in.tau_b) <= lim.tau_b_max);
	CHECK(std::abs(in.alpha_l) <= lim.alpha_max);
}

TEST_CASE("discrete input map agrees with one RK4 step of the linear part")
{
	const AsvModel model(vessel());
	const Eigen::Vector3d theta(0.9, 0.7, 0.5);
	// tiny forcing from rest: quadratic terms vanish, heading and velocity rows are linear
	const AsvInput small{15e-4, 10e-4, 2e-4, 0.1, 0.1};
	const Eigen::VectorXd predicted = model.discrete_input_map(small) * theta;
	const Eigen::VectorXd actual = model.step_truth(AsvState{}, small, theta, kNoDisturbance).to_vector();
	CHECK((predicted - actual).tail(4).norm() <= 1e-6 * predicted.norm());
	// positions pick up the h^2/2 velocity term that the map leaves to the disturbance bound
	CHECK(predicted.head(2).norm() == 0.0);
}

TEST_CASE("discrete model mismatch along closed-loop runs fits in the reserved disturbance margin")
{
	// The mismatch grows with speed and turn rate (Coriolis terms times forcing), so it is
	// checked on the trajectories the controller actually produces, healthy and faulty.
	for (const char *profile : {"/asv_healthy.jsonc", "/asv_fault.jsonc"}) {
		const ScenarioConfig cfg = load_config(std::string(SMEFD_CONFIG_DIR) + profile);
		const AsvModel model(cfg.vessel);
		const SystemModel sys = model.system_model();
		const Eigen::VectorXd margin = (1.0 - cfg.disturbance_fill) * cfg.bounds.d_bar;
		Eigen::VectorXd worst = Eigen::VectorXd::Zero(6);

		for (std::uint64_t seed = 1; seed <= 10; ++seed) {
			ScenarioConfig c = cfg;
			c.seed = seed;
			c.vertex_every = 0;
			const RunLog log = run_scenario(c);

			for (std::size_t k = 0; k + 1 < log.records.size(); ++k) {
				const StepRecord &r = log.records[k];
				const Eigen::Vector3d theta = theta_at(c, static_cast<Timestep>(k));
				const auto fz = sys.f->evaluate(std::span<const double>(r.z.data(), 6));
				const Eigen::VectorXd predicted = Eigen::Map<const Eigen::VectorXd>(fz.data(), 6) + sys.G(r.u) * theta;
				Eigen::VectorXd gap = model.step_truth(AsvState::from_vector(r.z), AsvInput::from_vector(r.u), theta,
								       kNoDisturbance)
							      .to_vector()
						      - predicted;
				gap(2) = wrap_angle(gap(2));
				worst = worst.cwiseMax(gap.cwiseAbs());
			}
		}

		CAPTURE(profile);
		CAPTURE(worst.transpose());
		CAPTURE(margin.transpose());
		CHECK((worst.array() <= margin.array()).all());
	}
}

TEST_CASE("vessel validation")
{
	VesselParams v = vessel();
	v.M(0, 0) = -1;
	CHECK_THROWS_AS(AsvModel{v}, BoundError);
	v = vessel();
	v.D(1, 1) = -1;
	CHECK_THROWS_AS(v.validate(), BoundError);
	v = vessel();
	v.w_lr = 0;
	CHECK_THROWS_AS(v.validate(), BoundError);
	v = vessel();
	v.dt = 0;
	CHECK_THROWS_AS(v.validate(), BoundError);
	CHECK(wrap_angle(3 * 3.141592653589793) == doctest::Approx(3.141592653589793));
	CHECK(wrap_angle(-0.5) == -0.5);
}
