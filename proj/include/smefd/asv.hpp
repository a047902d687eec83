#ifndef SMEFD_ASV_HPP
#define SMEFD_ASV_HPP

#include "smefd/expression.hpp"
#include "smefd/sme.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace smefd
{

/// Planar vessel state (x, y, psi, u, v, r); psi is kept in (-pi, pi].
struct AsvState {
	double x{0}, y{0}, psi{0}, u{0}, v{0}, r{0};

	Eigen::VectorXd to_vector() const;
	static AsvState from_vector(const Eigen::VectorXd &z);
};

/// Two azimuth thrusters and a bow thruster: (tau_l, tau_r, tau_b, alpha_l, alpha_r).
struct AsvInput {
	double tau_l{0}, tau_r{0}, tau_b{0}, alpha_l{0}, alpha_r{0};

	Eigen::VectorXd to_vector() const;
	static AsvInput from_vector(const Eigen::VectorXd &u);
};

struct ActuatorLimits {
	double tau_max{40.0};      ///< azimuth thrust, forward
	double tau_min{-10.0};     ///< azimuth thrust, reverse
	double tau_b_max{10.0};    ///< bow thrust magnitude
	double alpha_max{0.5};     ///< azimuth angle magnitude (rad)
};

AsvInput saturate(const AsvInput &in, const ActuatorLimits &limits);

struct VesselParams {
	Eigen::Matrix3d M;
	Eigen::Matrix3d D;
	double w_lr{0.25};
	double l_lr{0.5};
	double l_b{0.6};
	ActuatorLimits limits;
	double dt{0.05};

	/// Throws BoundError unless M is symmetric positive definite, D positive
	/// semidefinite, lengths and dt positive and limits ordered.
	void validate() const;
};

/// Loss-of-effectiveness step change applied from `time` on.
struct FaultEvent {
	double time{0};
	int axis{0};      ///< 0 left, 1 right, 2 bow
	double value{1.0}; ///< in [0, 1]
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/**
 * Continuous model z' = f(z) + G(u) theta with
 * f = [R(psi) nu; -M^-1 (C(nu) + D) nu] and G = [0; M^-1 T(u)],
 * plus its discrete counterpart used by the estimator.
 */
class AsvModel
{
public:
	explicit AsvModel(const VesselParams &params);

	const VesselParams &params() const { return _params; }
	const DynamicsExpr &continuous_f() const { return *_f_cont; }
	std::shared_ptr<const DynamicsExpr> discrete_f() const { return _f_disc; }

	/// 3x3 generalized-force matrix T(u); column j is actuator j at full effectiveness.
	Eigen::Matrix3d thrust_matrix(const AsvInput &in) const;
	/// Continuous 6x3 input map [0; M^-1 T(u)].
	Eigen::MatrixXd input_map(const AsvInput &in) const;
	/**
	 * Discrete 6x3 input map Gamma * input_map(u), Gamma = h (I + hA/2 + h^2 A^2/6 + h^3 A^3/24)
	 * with A the linear part of f (yaw kinematics and damping). This is what RK4
	 * does to a constant forcing on the linear part.
	 */
	Eigen::MatrixXd discrete_input_map(const AsvInput &in) const;
	const Eigen::Matrix<double, 6, 6> &gamma() const { return _gamma; }

	/**
	 * One RK4 step of z' = f(z) + G(u) theta + d / dt with the disturbance held over
	 * the step; d is given in the same discrete units as the SME bound.
	 */
	AsvState step_truth(const AsvState &state, const AsvInput &input, const Eigen::Vector3d &theta,
			    const Eigen::VectorXd &disturbance) const;

	/// M-weighted kinetic energy 0.5 nu^T M nu.
	double kinetic_energy(const AsvState &state) const;

	/// n = 6, m = 5, p = 3 with the heading flagged as an angle.
	SystemModel system_model() const;

private:
	VesselParams _params;
	Eigen::Matrix3d _m_inv;
	std::shared_ptr<const DynamicsExpr> _f_cont;
	std::shared_ptr<const DynamicsExpr> _f_disc;
	Eigen::Matrix<double, 6, 6> _gamma;
};

/// y = z + n with the heading re-wrapped.
Eigen::VectorXd measure(const AsvState &state, const Eigen::VectorXd &noise);

/// Seeded uniform generator whose output does not depend on the standard library vendor.
class UniformStream
{
public:
	explicit UniformStream(std::uint64_t seed) : _rng(seed) {}

	/// Uniform on [0, 1).
	double unit();
	/// Componentwise uniform on [-bound, bound].
	Eigen::VectorXd symmetric(const Eigen::VectorXd &bound);

private:
	std::mt19937_64 _rng;
};

struct ReferencePath {
	enum class Kind { Line, Sine };
	Kind kind{Kind::Line};
	double offset{0};      ///< y of the line, or the sine's centre line
	double amplitude{0};   ///< sine only
	double wavelength{60}; ///< sine only (m)

	double y_at(double x) const;
	double slope_at(double x) const;
};

struct ControllerGains {
	double cruise_speed{1.2};
	double lookahead{5.0};
	double k_surge{20.0};
	double k_heading{10.0};
	double k_yaw_rate{4.0};
	double alpha_amplitude{0.15}; ///< azimuth excitation
	double alpha_period{7.0};
	double bow_dither{4.0};       ///< square-wave amplitude (N)
	double bow_period{3.0};
};

/**
 * Line-of-sight heading guidance with PD surge and yaw laws, differential
 * allocation to the azimuth thrusters, periodic azimuth and bow excitation.
 * The output is saturated.
 */
AsvInput controller_step(const Eigen::VectorXd &y, double t, const ReferencePath &path, const ControllerGains &gains,
			 const VesselParams &params);

} // namespace smefd

#endif // SMEFD_ASV_HPP
