#include "smefd/config.hpp"

#include "smefd/approximation.hpp"
#include "smefd/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace smefd
{

using nlohmann::json;

std::size_t ScenarioConfig::steps() const
{
	return static_cast<std::size_t>(std::llround(duration / vessel.dt));
}

void ScenarioConfig::validate() const
{
	try {
		vessel.validate();
		bounds.validate(6);
		regularization.validate(3);

	} catch (const Error &e) {
		throw ConfigError(e.what());
	}

	if (theta0_lower.size() != 3 || theta0_upper.size() != 3) {
		throw ConfigError("theta0 bounds must have 3 components");
	}

	if ((theta0_upper - theta0_lower).minCoeff() <= 0.0) {
		throw ConfigError("theta0 box must have positive width on every axis");
	}

	if (phi > kMaxPhi) {
		throw ConfigError("phi must not exceed " + std::to_string(kMaxPhi));
	}

	if (window == 0) {
		throw ConfigError("estimator window must be positive");
	}

	if (!(disturbance_fill >= 0.0 && disturbance_fill <= 1.0) || !(noise_fill >= 0.0 && noise_fill <= 1.0)) {
		throw ConfigError("disturbance_fill and noise_fill must lie in [0, 1]");
	}

	if (!(eps_iso >= 0.0) || isolation_timeout <= 0) {
		throw ConfigError("diagnosis: eps_iso >= 0 and isolation_timeout > 0 required");
	}

	if (!(duration > 0.0)) {
		throw ConfigError("duration must be positive");
	}

	const double ratio = duration / vessel.dt;

	if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
		throw ConfigError("duration must be an integer multiple of dt");
	}

	for (const auto &f : faults) {
		if (f.axis < 0 || f.axis > 2) {
			throw ConfigError("fault axis must be l, r or b");
		}

		if (!(f.value >= 0.0 && f.value <= 1.0)) {
			throw ConfigError("fault value must lie in [0, 1]");
		}

		if (!(f.time >= 0.0)) {
			throw ConfigError("fault time must be non-negative");
		}
	}

	if (path.kind == ReferencePath::Kind::Sine && !(path.wavelength > 0.0)) {
		throw ConfigError("sine path wavelength must be positive");
	}
}

ScenarioConfig default_scenario()
{
	ScenarioConfig c;
	c.vessel.M = Eigen::Vector3d(62.0, 68.0, 4.3).asDiagonal();
	c.vessel.D = Eigen::Vector3d(22.0, 35.0, 6.0).asDiagonal();
	c.vessel.w_lr = 0.5;
	c.vessel.l_lr = 1.35;
	c.vessel.l_b = 0.8;
	c.vessel.limits = {40.0, -10.0, 15.0, 0.5};
	c.gains.bow_dither = 3.2;
	c.gains.alpha_amplitude = 0.13;
	c.bounds.d_bar.resize(6);
	c.bounds.d_bar << 0.02, 0.03, 0.003, 0.02, 0.03, 0.01;
	c.bounds.n_bar.resize(6);
	c.bounds.n_bar << 0.01, 0.01, 0.001, 0.007, 0.005, 0.012;
	c.theta0_lower = Eigen::Vector3d::Zero();
	c.theta0_upper = Eigen::Vector3d::Ones();
	c.regularization.lambda_bar = Eigen::Vector3d::Ones();
	c.regularization.alpha = 10.0;
	c.validate();
	return c;
}

namespace
{

void check_keys(const json &j, std::initializer_list<const char *> allowed, const std::string &where)
{
	if (!j.is_object()) {
		throw ConfigError(where + ": expected an object");
	}

	for (const auto &item : j.items()) {
		bool ok = false;

		for (const char *a : allowed) {
			ok = ok || item.key() == a;
		}

		if (!ok) {
			throw ConfigError(where + ": unknown key '" + item.key() + "'");
		}
	}
}

double number(const json &j, const std::string &where)
{
	if (!j.is_number()) {
		throw ConfigError(where + ": expected a number");
	}

	return j.get<double>();
}

Eigen::VectorXd vector(const json &j, std::size_t n, const std::string &where)
{
	if (!j.is_array() || j.size() != n) {
		throw ConfigError(where + ": expected an array of " + std::to_string(n) + " numbers");
	}

	Eigen::VectorXd v(static_cast<Eigen::Index>(n));

	for (std::size_t i = 0; i < n; ++i) {
		v(static_cast<Eigen::Index>(i)) = number(j[i], where);
	}

	return v;
}

/// Either three rows of three numbers or a three-number diagonal.
Eigen::Matrix3d matrix3(const json &j, const std::string &where)
{
	if (j.is_array() && j.size() == 3 && j[0].is_number()) {
		return vector(j, 3, where).asDiagonal();
	}

	if (!j.is_array() || j.size() != 3) {
		throw ConfigError(where + ": expected a 3x3 matrix or a diagonal");
	}

	Eigen::Matrix3d m;

	for (int i = 0; i < 3; ++i) {
		m.row(i) = vector(j[static_cast<std::size_t>(i)], 3, where).transpose();
	}

	return m;
}

int axis_index(const json &j)
{
	if (j.is_string()) {
		const auto s = j.get<std::string>();

		if (s == "l") {
			return 0;
		}

		if (s == "r") {
			return 1;
		}

		if (s == "b") {
			return 2;
		}

		throw ConfigError("faults.axis: expected l, r or b");
	}

	if (j.is_number_integer()) {
		return j.get<int>();
	}

	throw ConfigError("faults.axis: expected l, r, b or an index");
}

template <class T>
void set_if(const json &j, const char *key, T &target, const std::string &where)
{
	if (j.contains(key)) {
		if constexpr (std::is_same_v<T, bool>) {
			if (!j[key].is_boolean()) {
				throw ConfigError(where + "." + key + ": expected a boolean");
			}

			target = j[key].get<bool>();

		} else {
			target = static_cast<T>(number(j[key], where + "." + key));
		}
	}
}

void read_vessel(const json &j, VesselParams &v)
{
	check_keys(j, {"M", "D", "w_lr", "l_lr", "l_b", "limits"}, "vessel");

	if (j.contains("M")) {
		v.M = matrix3(j["M"], "vessel.M");
	}

	if (j.contains("D")) {
		v.D = matrix3(j["D"], "vessel.D");
	}

	set_if(j, "w_lr", v.w_lr, "vessel");
	set_if(j, "l_lr", v.l_lr, "vessel");
	set_if(j, "l_b", v.l_b, "vessel");

	if (j.contains("limits")) {
		const json &l = j["limits"];
		check_keys(l, {"tau_max", "tau_min", "tau_b_max", "alpha_max"}, "vessel.limits");
		set_if(l, "tau_max", v.limits.tau_max, "vessel.limits");
		set_if(l, "tau_min", v.limits.tau_min, "vessel.limits");
		set_if(l, "tau_b_max", v.limits.tau_b_max, "vessel.limits");
		set_if(l, "alpha_max", v.limits.alpha_max, "vessel.limits");
	}
}

void read_path(const json &j, ReferencePath &p)
{
	check_keys(j, {"kind", "offset", "amplitude", "wavelength"}, "path");

	if (j.contains("kind")) {
		const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";

		if (kind == "line") {
			p.kind = ReferencePath::Kind::Line;

		} else if (kind == "sine") {
			p.kind = ReferencePath::Kind::Sine;

		} else {
			throw ConfigError("path.kind: expected line or sine");
		}
	}

	set_if(j, "offset", p.offset, "path");
	set_if(j, "amplitude", p.amplitude, "path");
	set_if(j, "wavelength", p.wavelength, "path");
}

void read_controller(const json &j, ControllerGains &g)
{
	check_keys(j, {"cruise_speed", "lookahead", "k_surge", "k_heading", "k_yaw_rate", "alpha_amplitude",
		       "alpha_period", "bow_dither", "bow_period"},
		   "controller");
	set_if(j, "cruise_speed", g.cruise_speed, "controller");
	set_if(j, "lookahead", g.lookahead, "controller");
	set_if(j, "k_surge", g.k_surge, "controller");
	set_if(j, "k_heading", g.k_heading, "controller");
	set_if(j, "k_yaw_rate", g.k_yaw_rate, "controller");
	set_if(j, "alpha_amplitude", g.alpha_amplitude, "controller");
	set_if(j, "alpha_period", g.alpha_period, "controller");
	set_if(j, "bow_dither", g.bow_dither, "controller");
	set_if(j, "bow_period", g.bow_period, "controller");
}

void read_estimator(const json &j, ScenarioConfig &c)
{
	check_keys(j, {"window", "lambda_bar", "alpha", "theta_tilde"}, "estimator");

	if (j.contains("window")) {
		if (!j["window"].is_number_unsigned()) {
			throw ConfigError("estimator.window: expected a positive integer");
		}

		c.window = j["window"].get<std::size_t>();
	}

	if (j.contains("lambda_bar")) {
		c.regularization.lambda_bar = vector(j["lambda_bar"], 3, "estimator.lambda_bar");
	}

	set_if(j, "alpha", c.regularization.alpha, "estimator");

	if (j.contains("theta_tilde")) {
		const std::string mode = j["theta_tilde"].is_string() ? j["theta_tilde"].get<std::string>() : "";

		if (mode == "previous") {
			c.regularization.theta_tilde_mode = ThetaTildeMode::PreviousEstimate;

		} else if (mode == "centroid") {
			c.regularization.theta_tilde_mode = ThetaTildeMode::Centroid;

		} else {
			throw ConfigError("estimator.theta_tilde: expected previous or centroid");
		}
	}
}

} // namespace

ScenarioConfig parse_config(const std::string &text)
{
	json root;

	try {
		root = json::parse(text, nullptr, true, true);

	} catch (const json::parse_error &e) {
		throw ConfigError(std::string("config is not valid JSON: ") + e.what());
	}

	ScenarioConfig c = default_scenario();
	check_keys(root, {"vessel", "dt", "duration", "seed", "bounds", "theta0", "fps", "estimator", "diagnosis",
			  "initial_state", "faults", "path", "controller", "output"},
		   "config");

	if (root.contains("vessel")) {
		read_vessel(root["vessel"], c.vessel);
	}

	set_if(root, "dt", c.vessel.dt, "config");
	set_if(root, "duration", c.duration, "config");

	if (root.contains("seed")) {
		if (!root["seed"].is_number_unsigned()) {
			throw ConfigError("config.seed: expected a non-negative integer");
		}

		c.seed = root["seed"].get<std::uint64_t>();
	}

	if (root.contains("bounds")) {
		const json &b = root["bounds"];
		check_keys(b, {"d_bar", "n_bar", "disturbance_fill", "noise_fill"}, "bounds");

		if (b.contains("d_bar")) {
			c.bounds.d_bar = vector(b["d_bar"], 6, "bounds.d_bar");
		}

		if (b.contains("n_bar")) {
			c.bounds.n_bar = vector(b["n_bar"], 6, "bounds.n_bar");
		}

		set_if(b, "disturbance_fill", c.disturbance_fill, "bounds");
		set_if(b, "noise_fill", c.noise_fill, "bounds");
	}

	if (root.contains("theta0")) {
		const json &t = root["theta0"];
		check_keys(t, {"lower", "upper"}, "theta0");

		if (t.contains("lower")) {
			c.theta0_lower = vector(t["lower"], 3, "theta0.lower");
		}

		if (t.contains("upper")) {
			c.theta0_upper = vector(t["upper"], 3, "theta0.upper");
		}
	}

	if (root.contains("fps")) {
		const json &f = root["fps"];
		check_keys(f, {"phi", "ups_mode"}, "fps");

		if (f.contains("phi")) {
			if (!f["phi"].is_number_unsigned()) {
				throw ConfigError("fps.phi: expected a non-negative integer");
			}

			c.phi = f["phi"].get<unsigned>();
		}

		if (f.contains("ups_mode")) {
			const std::string mode = f["ups_mode"].is_string() ? f["ups_mode"].get<std::string>() : "";

			if (mode == "noise_aware") {
				c.ups_mode = UpsMode::NoiseAware;

			} else if (mode == "noise_blind") {
				c.ups_mode = UpsMode::NoiseBlind;

			} else {
				throw ConfigError("fps.ups_mode: expected noise_aware or noise_blind");
			}
		}
	}

	if (root.contains("estimator")) {
		read_estimator(root["estimator"], c);
	}

	if (root.contains("diagnosis")) {
		const json &d = root["diagnosis"];
		check_keys(d, {"eps_iso", "isolation_timeout"}, "diagnosis");
		set_if(d, "eps_iso", c.eps_iso, "diagnosis");
		set_if(d, "isolation_timeout", c.isolation_timeout, "diagnosis");
	}

	if (root.contains("initial_state")) {
		c.initial_state = AsvState::from_vector(vector(root["initial_state"], 6, "initial_state"));
	}

	if (root.contains("faults")) {
		if (!root["faults"].is_array()) {
			throw ConfigError("faults: expected an array");
		}

		c.faults.clear();

		for (const json &f : root["faults"]) {
			check_keys(f, {"time", "axis", "value"}, "faults[]");

			if (!f.contains("time") || !f.contains("axis") || !f.contains("value")) {
				throw ConfigError("faults[]: time, axis and value are required");
			}

			c.faults.push_back({number(f["time"], "faults.time"), axis_index(f["axis"]),
					    number(f["value"], "faults.value")});
		}
	}

	if (root.contains("path")) {
		read_path(root["path"], c.path);
	}

	if (root.contains("controller")) {
		read_controller(root["controller"], c.gains);
	}

	if (root.contains("output")) {
		const json &o = root["output"];
		check_keys(o, {"dir", "vertex_every", "deterministic"}, "output");

		if (o.contains("dir")) {
			if (!o["dir"].is_string()) {
				throw ConfigError("output.dir: expected a string");
			}

			c.out_dir = o["dir"].get<std::string>();
		}

		if (o.contains("vertex_every")) {
			if (!o["vertex_every"].is_number_unsigned()) {
				throw ConfigError("output.vertex_every: expected a non-negative integer");
			}

			c.vertex_every = o["vertex_every"].get<std::size_t>();
		}

		set_if(o, "deterministic", c.deterministic, "output");
	}

	c.validate();
	return c;
}

ScenarioConfig load_config(const std::filesystem::path &path)
{
	std::ifstream in(path);

	if (!in) {
		throw ConfigError("cannot open config file " + path.string());
	}

	std::ostringstream text;
	text << in.rdbuf();
	return parse_config(text.str());
}

void apply_variant(ScenarioConfig &config, const std::string &variant)
{
	if (const auto plus = variant.find('+'); plus != std::string::npos) {
		apply_variant(config, variant.substr(0, plus));
		apply_variant(config, variant.substr(plus + 1));
		return;
	}

	const auto value_after = [&](const std::string &prefix) {
		try {
			std::size_t used = 0;
			const std::string rest = variant.substr(prefix.size());
			const unsigned long long v = std::stoull(rest, &used);

			if (used != rest.size()) {
				throw ConfigError("variant '" + variant + "': trailing characters");
			}

			return v;

		} catch (const std::logic_error &) {
			throw ConfigError("variant '" + variant + "': expected an integer");
		}
	};

	if (variant == "baseline") {
		return;
	}

	if (variant == "noise_blind") {
		config.ups_mode = UpsMode::NoiseBlind;

	} else if (variant == "lambda_bar=0") {
		config.regularization.lambda_bar.setZero();

	} else if (variant == "dither=0") {
		config.gains.bow_dither = 0.0;

	} else if (variant.rfind("phi=", 0) == 0) {
		config.phi = static_cast<unsigned>(value_after("phi="));

	} else if (variant.rfind("seed=", 0) == 0) {
		config.seed = value_after("seed=");

	} else {
		throw ConfigError("unknown variant '" + variant + "'");
	}

	config.validate();
}

} // namespace smefd
