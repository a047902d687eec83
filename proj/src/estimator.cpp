#include "smefd/estimator.hpp"

#include "smefd/errors.hpp"
#include "smefd/qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace smefd
{

RegressionBuffer::RegressionBuffer(std::size_t window, std::size_t n, std::size_t p) : _window(window), _n(n), _p(p)
{
	if (window == 0 || n == 0 || p == 0) {
		throw DimensionError("RegressionBuffer: window, n and p must be positive");
	}
}

void RegressionBuffer::push(const Eigen::MatrixXd &g_block, const Eigen::VectorXd &xi_block)
{
	if (static_cast<std::size_t>(g_block.rows()) != _n || static_cast<std::size_t>(g_block.cols()) != _p
	    || static_cast<std::size_t>(xi_block.size()) != _n) {
		throw DimensionError("RegressionBuffer::push: block shape mismatch");
	}

	if (_blocks.size() == _window) {
		_blocks.pop_front();
	}

	_blocks.push_back({g_block, xi_block});
}

Eigen::MatrixXd RegressionBuffer::phi() const
{
	const auto n = static_cast<Eigen::Index>(_n);
	Eigen::MatrixXd out(n * static_cast<Eigen::Index>(_blocks.size()), static_cast<Eigen::Index>(_p));
	Eigen::Index row = 0;

	for (const auto &blk : _blocks) {
		out.middleRows(row, n) = blk.g;
		row += n;
	}

	return out;
}

Eigen::VectorXd RegressionBuffer::xi() const
{
	const auto n = static_cast<Eigen::Index>(_n);
	Eigen::VectorXd out(n * static_cast<Eigen::Index>(_blocks.size()));
	Eigen::Index row = 0;

	for (const auto &blk : _blocks) {
		out.segment(row, n) = blk.xi;
		row += n;
	}

	return out;
}

void push_measurement(RegressionBuffer &buf, const Eigen::VectorXd &u_prev, const Eigen::VectorXd &y_prev,
		      const Eigen::VectorXd &y_now, const SystemModel &model)
{
	if (!model.f || static_cast<std::size_t>(y_prev.size()) != model.n
	    || static_cast<std::size_t>(y_now.size()) != model.n || static_cast<std::size_t>(u_prev.size()) != model.m) {
		throw DimensionError("push_measurement: dimension mismatch");
	}

	const Eigen::VectorXd y_next = unwrap_angles(y_prev, y_now, model.angle_components);
	const std::vector<double> fy = model.f->evaluate(std::span<const double>(y_prev.data(), y_prev.size()));
	const Eigen::VectorXd xi = y_next - Eigen::Map<const Eigen::VectorXd>(fy.data(), static_cast<Eigen::Index>(fy.size()));
	buf.push(model.G(u_prev), xi);
}

void RegularizationPolicy::validate(std::size_t p) const
{
	if (static_cast<std::size_t>(lambda_bar.size()) != p) {
		throw DimensionError("RegularizationPolicy: lambda_bar length must equal p");
	}

	for (Eigen::Index i = 0; i < lambda_bar.size(); ++i) {
		if (!(lambda_bar(i) >= 0.0) || !std::isfinite(lambda_bar(i))) {
			throw BoundError("RegularizationPolicy: lambda_bar entries must be finite and >= 0");
		}
	}

	if (!(alpha > 0.0) || !std::isfinite(alpha)) {
		throw BoundError("RegularizationPolicy: alpha must be positive");
	}
}

Eigen::VectorXd adaptive_lambda(const RegressionBuffer &buf, const RegularizationPolicy &policy)
{
	policy.validate(buf.p());
	const auto p = static_cast<Eigen::Index>(buf.p());
	Eigen::VectorXd sigma = Eigen::VectorXd::Zero(p);

	if (!buf.empty()) {
		// JacobiSVD returns singular values in decreasing order
		const Eigen::JacobiSVD<Eigen::MatrixXd> svd(buf.phi());
		const Eigen::VectorXd &s = svd.singularValues();
		sigma.head(std::min(p, s.size())) = s.head(std::min(p, s.size()));
	}

	return (policy.lambda_bar.array() * (-policy.alpha * sigma.array()).exp()).matrix();
}

Eigen::VectorXd estimate(const RegressionBuffer &buf, const HPolytope &fps, const Eigen::VectorXd &centroid,
			 const std::optional<Eigen::VectorXd> &prev_estimate, const RegularizationPolicy &policy)
{
	const auto p = static_cast<Eigen::Index>(buf.p());

	if (static_cast<Eigen::Index>(fps.dim()) != p || centroid.size() != p
	    || (prev_estimate && prev_estimate->size() != p)) {
		throw DimensionError("estimate: dimension mismatch");
	}

	const Eigen::VectorXd lambda = adaptive_lambda(buf, policy);
	Eigen::VectorXd theta_tilde = centroid;

	if (policy.theta_tilde_mode == ThetaTildeMode::PreviousEstimate && prev_estimate) {
		theta_tilde = *prev_estimate;
	}

	Eigen::MatrixXd P = lambda.asDiagonal();
	Eigen::VectorXd q = -2.0 * lambda.cwiseProduct(theta_tilde);

	if (!buf.empty()) {
		const Eigen::MatrixXd phi = buf.phi();
		P += phi.transpose() * phi;
		q -= 2.0 * (phi.transpose() * buf.xi());
	}

	if (P.lpNorm<Eigen::Infinity>() < 1e-14) {
		P = Eigen::MatrixXd::Identity(p, p);
		q = -2.0 * theta_tilde;
	}

	return qp::solve(P, q, fps.A(), fps.b(), centroid).x;
}

} // namespace smefd
