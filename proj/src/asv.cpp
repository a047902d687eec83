#include "smefd/asv.hpp"

#include "smefd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace smefd
{

Eigen::VectorXd AsvState::to_vector() const
{
	Eigen::VectorXd z(6);
	z << x, y, psi, u, v, r;
	return z;
}

AsvState AsvState::from_vector(const Eigen::VectorXd &z)
{
	if (z.size() != 6) {
		throw DimensionError("AsvState: expected 6 components");
	}

	return {z(0), z(1), z(2), z(3), z(4), z(5)};
}

Eigen::VectorXd AsvInput::to_vector() const
{
	Eigen::VectorXd u(5);
	u << tau_l, tau_r, tau_b, alpha_l, alpha_r;
	return u;
}

AsvInput AsvInput::from_vector(const Eigen::VectorXd &u)
{
	if (u.size() != 5) {
		throw DimensionError("AsvInput: expected 5 components");
	}

	return {u(0), u(1), u(2), u(3), u(4)};
}

AsvInput saturate(const AsvInput &in, const ActuatorLimits &limits)
{
	AsvInput out;
	out.tau_l = std::clamp(in.tau_l, limits.tau_min, limits.tau_max);
	out.tau_r = std::clamp(in.tau_r, limits.tau_min, limits.tau_max);
	out.tau_b = std::clamp(in.tau_b, -limits.tau_b_max, limits.tau_b_max);
	out.alpha_l = std::clamp(in.alpha_l, -limits.alpha_max, limits.alpha_max);
	out.alpha_r = std::clamp(in.alpha_r, -limits.alpha_max, limits.alpha_max);
	return out;
}

void VesselParams::validate() const
{
	if (!M.allFinite() || !D.allFinite()) {
		throw BoundError("VesselParams: M and D must be finite");
	}

	if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + M.cwiseAbs().maxCoeff())) {
		throw BoundError("VesselParams: M must be symmetric");
	}

	if (Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(M).eigenvalues().minCoeff() <= 0.0) {
		throw BoundError("VesselParams: M must be positive definite");
	}

	const Eigen::Matrix3d Ds = 0.5 * (D + D.transpose());

	if (Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(Ds).eigenvalues().minCoeff() < -1e-12) {
		throw BoundError("VesselParams: D must be positive semidefinite");
	}

	if (!(w_lr > 0.0) || !(l_lr > 0.0) || !(l_b > 0.0) || !(dt > 0.0)) {
		throw BoundError("VesselParams: geometry lengths and dt must be positive");
	}

	if (!(limits.tau_min <= 0.0 && limits.tau_max > 0.0 && limits.tau_b_max >= 0.0 && limits.alpha_max >= 0.0)) {
		throw BoundError("VesselParams: actuator limits out of order");
	}
}

double wrap_angle(double a)
{
	constexpr double two_pi = 2.0 * std::numbers::pi;
	a = std::fmod(a, two_pi);

	if (a > std::numbers::pi) {
		a -= two_pi;

	} else if (a <= -std::numbers::pi) {
		a += two_pi;
	}

	return a;
}

namespace
{

std::shared_ptr<const DynamicsExpr> build_continuous_f(const Eigen::Matrix3d &M, const Eigen::Matrix3d &D)
{
	ExprBuilder b;
	const std::vector<Expr> z = b.vars(6);
	const Expr &psi = z[2];
	const Expr nu[3] = {z[3], z[4], z[5]};
	const Expr c = cos(psi);
	const Expr s = sin(psi);

	// skew-symmetric Coriolis: C(nu) nu = (-a r, b r, a u - b v)
	const Expr a = M(1, 0) * nu[0] + M(1, 1) * nu[1] + M(1, 2) * nu[2];
	const Expr bb = M(0, 0) * nu[0] + M(0, 1) * nu[1] + M(0, 2) * nu[2];
	const Expr cn[3] = {-(a * nu[2]), bb * nu[2], a * nu[0] - bb * nu[1]};

	Expr force[3];

	for (int i = 0; i < 3; ++i) {
		force[i] = cn[i] + D(i, 0) * nu[0] + D(i, 1) * nu[1] + D(i, 2) * nu[2];
	}

	const Eigen::Matrix3d m_inv = M.inverse();
	std::vector<Expr> out(6);
	out[0] = c * nu[0] - s * nu[1];
	out[1] = s * nu[0] + c * nu[1];
	out[2] = nu[2];

	for (int i = 0; i < 3; ++i) {
		out[static_cast<std::size_t>(3 + i)] =
			-(m_inv(i, 0) * force[0] + m_inv(i, 1) * force[1] + m_inv(i, 2) * force[2]);
	}

	return std::make_shared<const DynamicsExpr>(b, std::move(out), 6);
}

Eigen::Matrix3d thrust_columns(const AsvInput &in, const VesselParams &params)
{
	const double cl = in.tau_l * std::cos(in.alpha_l);
	const double sl = in.tau_l * std::sin(in.alpha_l);
	const double cr = in.tau_r * std::cos(in.alpha_r);
	const double sr = in.tau_r * std::sin(in.alpha_r);
	Eigen::Matrix3d T;
	T << cl, cr, 0.0,
	  sl, sr, 0.0,
	  -params.w_lr * cl - params.l_lr * sl, params.w_lr * cr - params.l_lr * sr, params.l_b * in.tau_b;
	return T;
}

} // namespace

AsvModel::AsvModel(const VesselParams &params) : _params(params)
{
	_params.validate();
	_m_inv = _params.M.inverse();
	_f_cont = build_continuous_f(_params.M, _params.D);
	_f_disc = std::make_shared<const DynamicsExpr>(rk4_discretize(*_f_cont, _params.dt));

	Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
	A(2, 5) = 1.0;
	A.block<3, 3>(3, 3) = -_m_inv * _params.D;
	const double h = _params.dt;
	const Eigen::Matrix<double, 6, 6> I = Eigen::Matrix<double, 6, 6>::Identity();
	const Eigen::Matrix<double, 6, 6> hA = h * A;
	_gamma = h * (I + hA / 2.0 + hA * hA / 6.0 + hA * hA * hA / 24.0);
}

Eigen::Matrix3d AsvModel::thrust_matrix(const AsvInput &in) const
{
	return thrust_columns(in, _params);
}

Eigen::MatrixXd AsvModel::input_map(const AsvInput &in) const
{
	Eigen::MatrixXd G = Eigen::MatrixXd::Zero(6, 3);
	G.bottomRows(3) = _m_inv * thrust_matrix(in);
	return G;
}

Eigen::MatrixXd AsvModel::discrete_input_map(const AsvInput &in) const
{
	return _gamma * input_map(in);
}

AsvState AsvModel::step_truth(const AsvState &state, const AsvInput &input, const Eigen::Vector3d &theta,
			      const Eigen::VectorXd &disturbance) const
{
	if (disturbance.size() != 6) {
		throw DimensionError("step_truth: disturbance must have 6 components");
	}

	const double h = _params.dt;
	const Eigen::VectorXd forcing = input_map(input) * theta + disturbance / h;

	const auto rhs = [&](const Eigen::VectorXd &z) {
		const std::vector<double> fz = _f_cont->evaluate(std::span<const double>(z.data(), 6));
		return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(fz.data(), 6) + forcing);
	};

	const Eigen::VectorXd z = state.to_vector();
	const Eigen::VectorXd k1 = rhs(z);
	const Eigen::VectorXd k2 = rhs(z + 0.5 * h * k1);
	const Eigen::VectorXd k3 = rhs(z + 0.5 * h * k2);
	const Eigen::VectorXd k4 = rhs(z + h * k3);
	AsvState next = AsvState::from_vector(z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
	next.psi = wrap_angle(next.psi);
	return next;
}

double AsvModel::kinetic_energy(const AsvState &state) const
{
	const Eigen::Vector3d nu(state.u, state.v, state.r);
	return 0.5 * nu.dot(_params.M * nu);
}

SystemModel AsvModel::system_model() const
{
	SystemModel model;
	model.f = _f_disc;
	const Eigen::Matrix<double, 6, 6> gamma = _gamma;
	const Eigen::Matrix3d m_inv = _m_inv;
	const VesselParams params = _params;
	model.G = [gamma, m_inv, params](const Eigen::VectorXd &u) {
		const Eigen::Matrix3d T = thrust_columns(AsvInput::from_vector(u), params);
		return Eigen::MatrixXd(gamma.rightCols<3>() * (m_inv * T));
	};
	model.n = 6;
	model.m = 5;
	model.p = 3;
	model.angle_components = {2};
	return model;
}

Eigen::VectorXd measure(const AsvState &state, const Eigen::VectorXd &noise)
{
	if (noise.size() != 6) {
		throw DimensionError("measure: noise must have 6 components");
	}

	Eigen::VectorXd y = state.to_vector() + noise;
	y(2) = wrap_angle(y(2));
	return y;
}

double UniformStream::unit()
{
	return static_cast<double>(_rng() >> 11) * 0x1.0p-53;
}

Eigen::VectorXd UniformStream::symmetric(const Eigen::VectorXd &bound)
{
	Eigen::VectorXd out(bound.size());

	for (Eigen::Index i = 0; i < bound.size(); ++i) {
		out(i) = bound(i) * (2.0 * unit() - 1.0);
	}

	return out;
}

double ReferencePath::y_at(double x) const
{
	if (kind == Kind::Line) {
		return offset;
	}

	return offset + amplitude * std::sin(2.0 * std::numbers::pi * x / wavelength);
}

double ReferencePath::slope_at(double x) const
{
	if (kind == Kind::Line) {
		return 0.0;
	}

	const double k = 2.0 * std::numbers::pi / wavelength;
	return amplitude * k * std::cos(k * x);
}

AsvInput controller_step(const Eigen::VectorXd &y, double t, const ReferencePath &path, const ControllerGains &gains,
			 const VesselParams &params)
{
	if (y.size() != 6) {
		throw DimensionError("controller_step: measurement must have 6 components");
	}

	const double gamma = std::atan(path.slope_at(y(0)));
	const double cross = (y(1) - path.y_at(y(0))) * std::cos(gamma);
	const double psi_d = gamma - std::atan2(cross, gains.lookahead);

	const double surge = params.D(0, 0) * gains.cruise_speed + gains.k_surge * (gains.cruise_speed - y(3));
	const double yaw = gains.k_heading * wrap_angle(psi_d - y(2)) - gains.k_yaw_rate * y(5);

	AsvInput in;
	const double two_pi = 2.0 * std::numbers::pi;
	const double alpha = gains.alpha_period > 0.0 ? gains.alpha_amplitude * std::sin(two_pi * t / gains.alpha_period) : 0.0;
	in.alpha_l = alpha;
	in.alpha_r = alpha;
	in.tau_b = (gains.bow_period > 0.0 && std::sin(two_pi * t / gains.bow_period) < 0.0) ? -gains.bow_dither
		   : gains.bow_dither;

	// azimuth angle and bow moments are cancelled in the allocation
	const double ca = std::cos(alpha);
	const double total = surge / ca;
	const double moment = yaw - params.l_b * in.tau_b + params.l_lr * total * std::sin(alpha);
	in.tau_l = 0.5 * total - moment / (2.0 * params.w_lr * ca);
	in.tau_r = 0.5 * total + moment / (2.0 * params.w_lr * ca);
	return saturate(in, params.limits);
}

} // namespace smefd
