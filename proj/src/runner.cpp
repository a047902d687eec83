#include "smefd/runner.hpp"

#include "smefd/approximation.hpp"
#include "smefd/asv.hpp"
#include "smefd/errors.hpp"
#include "smefd/estimator.hpp"
#include "smefd/sme.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

namespace smefd
{

namespace
{

constexpr std::uint64_t kDisturbanceSalt = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kNoiseSalt = 0xC2B2AE3D27D4EB4FULL;

double percentile(std::vector<double> v, double q)
{
	if (v.empty()) {
		return 0.0;
	}

	std::sort(v.begin(), v.end());
	const double pos = q * static_cast<double>(v.size() - 1);
	const auto lo = static_cast<std::size_t>(std::floor(pos));
	const auto hi = std::min(lo + 1, v.size() - 1);
	return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::string event_label(const Event &e)
{
	std::string s = to_string(e.kind);

	if (e.axis >= 0) {
		s += ":" + std::to_string(e.axis);
	}

	return s;
}

std::string fmt(double v)
{
	char buf[32];
	std::snprintf(buf, sizeof(buf), "%.12g", v);
	return buf;
}

} // namespace

Eigen::Vector3d theta_at(const ScenarioConfig &config, Timestep k)
{
	Eigen::Vector3d theta = Eigen::Vector3d::Ones();
	std::vector<FaultEvent> faults = config.faults;
	std::stable_sort(faults.begin(), faults.end(), [](const auto &a, const auto &b) { return a.time < b.time; });

	for (const auto &f : faults) {
		if (std::llround(f.time / config.vessel.dt) <= k) {
			theta(f.axis) = f.value;
		}
	}

	return theta;
}

std::optional<Timestep> fault_step(const ScenarioConfig &config)
{
	std::optional<Timestep> first;

	for (const auto &f : config.faults) {
		const Timestep k = std::llround(f.time / config.vessel.dt);
		first = first ? std::min(*first, k) : k;
	}

	return first;
}

RunLog run_scenario(const ScenarioConfig &config, const RunOptions &options)
{
	config.validate();

	const AsvModel plant(config.vessel);
	const SystemModel model = plant.system_model();
	const double dt = config.vessel.dt;
	const auto steps = static_cast<Timestep>(config.steps());
	const std::optional<Timestep> k_F = fault_step(config);

	auto directions = std::make_shared<const DirectionSet>(generate_directions(3, config.phi));
	FpsState fps = make_fps_state(config.theta0_lower, config.theta0_upper, directions);
	RegressionBuffer buffer(config.window, 6, 3);
	const DiagnosisConfig diag_cfg{3, config.eps_iso, config.isolation_timeout};
	DiagnosisState diag = DiagnosisState::initial(3);

	UniformStream disturbance_rng(config.seed * kDisturbanceSalt + 1);
	UniformStream noise_rng(config.seed * kNoiseSalt + 2);
	const Eigen::VectorXd d_scale = config.disturbance_fill * config.bounds.d_bar;
	const Eigen::VectorXd n_scale = config.noise_fill * config.bounds.n_bar;

	RunLog log;
	log.dt = dt;
	RunSummary &sum = log.summary;
	sum.k_F = k_F;
	sum.k_I.assign(3, std::nullopt);
	sum.isolation_delays.assign(3, std::nullopt);

	const auto trace = [&](const char *stage) {
		if (options.trace) {
			log.trace.emplace_back(stage);
		}
	};

	const auto snapshot = [&](Timestep k) {
		if (config.vertex_every > 0 && k % static_cast<Timestep>(config.vertex_every) == 0) {
			log.snapshots.push_back({k, fps.vertices.vertices, fps.current.A(), fps.current.b()});
		}
	};

	AsvState z = config.initial_state;
	Eigen::VectorXd y = measure(z, noise_rng.symmetric(n_scale));
	AsvInput u = controller_step(y, 0.0, config.path, config.gains, config.vessel);
	Eigen::VectorXd centroid = vertex_centroid(fps.vertices);
	std::optional<Eigen::VectorXd> estimate_prev;
	Eigen::VectorXd theta_hat = centroid;

	Timestep last_reset = 0;
	Timestep theta_changed = 0;
	std::vector<double> step_ms;
	step_ms.reserve(static_cast<std::size_t>(steps));
	double variation_sum = 0.0;
	std::size_t variation_count = 0;

	if (options.keep_records) {
		log.records.reserve(static_cast<std::size_t>(steps) + 1);
		log.records.push_back({0, 0.0, z.to_vector(), y, u.to_vector(), theta_hat, fps_projections(fps), false, "", 0.0});
	}

	snapshot(0);

	for (Timestep k = 1; k <= steps; ++k) {
		const Eigen::Vector3d theta = theta_at(config, k - 1);

		if (k >= 2 && theta != theta_at(config, k - 2)) {
			theta_changed = k - 1;
		}

		// plant
		const Eigen::VectorXd y_prev = y;
		const Eigen::VectorXd u_prev = u.to_vector();
		z = plant.step_truth(z, u, theta, disturbance_rng.symmetric(d_scale));
		y = measure(z, noise_rng.symmetric(n_scale));

		const auto start = std::chrono::steady_clock::now();
		std::vector<Event> events;
		bool empty = false;
		bool reset = false;

		try {
			trace("get_data");
			const HPolytope ups = build_ups(u_prev, y_prev, y, config.bounds, model, config.ups_mode);
			trace("ups");
			FpsStep next = step_fps(fps, ups);
			trace("fps_update");
			empty = next.empty;
			fps = std::move(next.state);
			const std::vector<Interval> projections = fps_projections(fps);
			trace("projections");

			DiagnosisStep d = on_step(diag, empty, projections, k, diag_cfg);
			trace("diagnosis");
			diag = std::move(d.state);
			events = std::move(d.events);

			if (d.reset_requested) {
				trace("reset");
				fps = reset_fps(fps);
				buffer.clear();
				estimate_prev.reset();
				last_reset = k;
				reset = true;
			}

			centroid = vertex_centroid(fps.vertices);
			trace("centroid");
			push_measurement(buffer, u_prev, y_prev, y, model);
			theta_hat = estimate(buffer, fps.current, centroid, estimate_prev, config.regularization);
			trace("estimate");

		} catch (const Error &e) {
			throw NumericalError("step " + std::to_string(k) + ": " + e.what());
		}

		const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
		step_ms.push_back(ms);

		if (!reset && estimate_prev) {
			variation_sum += (theta_hat - *estimate_prev).norm();
			++variation_count;
		}

		estimate_prev = theta_hat;

		// invariants on the committed set
		if (theta_changed <= last_reset) {
			const double slack = fps.current.min_slack(theta_at(config, k - 1));
			sum.worst_membership_slack = std::min(sum.worst_membership_slack, slack);

			if (slack < -kEpsFeas) {
				++sum.membership_violations;
			}
		}

		if (!fps.current.contains(theta_hat)) {
			++sum.estimate_violations;
		}

		for (const Event &e : events) {
			const bool detection_like = e.kind == EventKind::Detection || e.kind == EventKind::Redetection;

			if (detection_like && (!k_F || e.k <= *k_F)) {
				++sum.false_alarms;
			}

			if (e.kind == EventKind::Detection) {
				++sum.detections;

				if (!sum.k_D && (!k_F || e.k > *k_F)) {
					sum.k_D = e.k;
				}
			}

			if (e.kind == EventKind::Isolation && sum.k_D && e.k >= *sum.k_D) {
				auto &slot = sum.k_I[static_cast<std::size_t>(e.axis)];

				if (!slot) {
					slot = e.k;
				}
			}

			log.events.push_back(e);
		}

		sum.flagged = sum.flagged || diag.flagged;

		u = controller_step(y, static_cast<double>(k) * dt, config.path, config.gains, config.vessel);

		if (options.keep_records) {
			std::string label;

			for (const Event &e : events) {
				label += (label.empty() ? "" : ";") + event_label(e);
			}

			log.records.push_back({k, static_cast<double>(k) * dt, z.to_vector(), y, u.to_vector(), theta_hat,
					       fps_projections(fps), empty, label, config.deterministic ? 0.0 : ms});
		}

		snapshot(k);
	}

	if (sum.k_D) {
		sum.t_D = static_cast<double>(*sum.k_D) * dt;

		if (k_F) {
			sum.detection_delay = *sum.k_D - *k_F;

			for (std::size_t i = 0; i < 3; ++i) {
				if (sum.k_I[i]) {
					sum.isolation_delays[i] = *sum.k_I[i] - *k_F;
				}
			}
		}
	}

	sum.estimate_variation = variation_count > 0 ? variation_sum / static_cast<double>(variation_count) : 0.0;
	sum.p50_ms = config.deterministic ? 0.0 : percentile(step_ms, 0.5);
	sum.p99_ms = config.deterministic ? 0.0 : percentile(step_ms, 0.99);
	return log;
}

void write_steps_csv(std::ostream &os, const RunLog &log)
{
	os << "k,t";

	for (int i = 0; i < 6; ++i) {
		os << ",z" << i;
	}

	for (int i = 0; i < 6; ++i) {
		os << ",y" << i;
	}

	for (int i = 0; i < 5; ++i) {
		os << ",u" << i;
	}

	for (int i = 0; i < 3; ++i) {
		os << ",theta_hat" << i;
	}

	for (int i = 0; i < 3; ++i) {
		os << ",proj_lo" << i;
	}

	for (int i = 0; i < 3; ++i) {
		os << ",proj_hi" << i;
	}

	os << ",empty_flag,event,step_ms\n";

	for (const StepRecord &r : log.records) {
		os << r.k << ',' << fmt(r.t);

		for (const Eigen::VectorXd *v : {&r.z, &r.y, &r.u, &r.theta_hat}) {
			for (Eigen::Index i = 0; i < v->size(); ++i) {
				os << ',' << fmt((*v)(i));
			}
		}

		for (const Interval &iv : r.projections) {
			os << ',' << fmt(iv.lo);
		}

		for (const Interval &iv : r.projections) {
			os << ',' << fmt(iv.hi);
		}

		os << ',' << (r.empty ? 1 : 0) << ',' << r.event << ',' << fmt(r.step_ms) << '\n';
	}
}

void write_snapshots_csv(std::ostream &os, const RunLog &log)
{
	os << "k,vertex,theta0,theta1,theta2\n";

	for (const Snapshot &s : log.snapshots) {
		for (std::size_t j = 0; j < s.vertices.size(); ++j) {
			os << s.k << ',' << j;

			for (Eigen::Index i = 0; i < s.vertices[j].size(); ++i) {
				os << ',' << fmt(s.vertices[j](i));
			}

			os << '\n';
		}
	}
}

void write_constraints_csv(std::ostream &os, const RunLog &log)
{
	os << "k,row,a0,a1,a2,b\n";

	for (const Snapshot &s : log.snapshots) {
		for (Eigen::Index r = 0; r < s.A.rows(); ++r) {
			os << s.k << ',' << r;

			for (Eigen::Index i = 0; i < s.A.cols(); ++i) {
				os << ',' << fmt(s.A(r, i));
			}

			os << ',' << fmt(s.b(r)) << '\n';
		}
	}
}

void write_summary_json(std::ostream &os, const RunLog &log, const ScenarioConfig &config)
{
	using nlohmann::json;
	const RunSummary &s = log.summary;
	const auto opt = [](const std::optional<Timestep> &v) { return v ? json(*v) : json(nullptr); };

	json k_I = json::array();
	json iso = json::array();

	for (std::size_t i = 0; i < 3; ++i) {
		k_I.push_back(opt(s.k_I[i]));
		iso.push_back(opt(s.isolation_delays[i]));
	}

	json events = json::array();

	for (const Event &e : log.events) {
		events.push_back({{"kind", to_string(e.kind)},
				  {"k", e.k},
				  {"t", static_cast<double>(e.k) * log.dt},
				  {"axis", e.axis >= 0 ? json(e.axis) : json(nullptr)}});
	}

	const json out = {
		{"csv_schema", kCsvSchemaVersion},
		{"seed", config.seed},
		{"phi", config.phi},
		{"k_F", opt(s.k_F)},
		{"k_D", opt(s.k_D)},
		{"t_D", s.t_D ? json(*s.t_D) : json(nullptr)},
		{"k_I", k_I},
		{"delays", {{"detection", opt(s.detection_delay)}, {"isolation", iso}}},
		{"false_alarms", s.false_alarms},
		{"flagged", s.flagged},
		{"membership_violations", s.membership_violations},
		{"estimate_variation", s.estimate_variation},
		{"timing", {{"p50_ms", s.p50_ms}, {"p99_ms", s.p99_ms}}},
		{"events", events},
	};
	os << out.dump(2) << '\n';
}

void write_run(const std::filesystem::path &dir, const RunLog &log, const ScenarioConfig &config)
{
	std::filesystem::create_directories(dir);
	const auto open = [&](const char *name) {
		std::ofstream f(dir / name);

		if (!f) {
			throw Error("cannot write " + (dir / name).string());
		}

		return f;
	};

	auto steps = open("steps.csv");
	write_steps_csv(steps, log);
	auto vertices = open("vertices.csv");
	write_snapshots_csv(vertices, log);
	auto constraints = open("constraints.csv");
	write_constraints_csv(constraints, log);
	auto summary = open("summary.json");
	write_summary_json(summary, log, config);
}

RunOutcome outcome_of(const RunLog &log, std::uint64_t seed)
{
	const RunSummary &s = log.summary;
	RunOutcome o;
	o.seed = seed;
	o.false_alarms = s.false_alarms;
	o.detection_delay = s.detection_delay;

	for (std::size_t i = 0; i < s.k_I.size(); ++i) {
		if (s.k_I[i]) {
			o.isolated_axes.push_back(static_cast<int>(i));
		}
	}

	o.flagged = s.flagged;
	o.membership_violations = s.membership_violations;
	o.estimate_variation = s.estimate_variation;
	o.p50_ms = s.p50_ms;
	return o;
}

std::vector<VariantSummary> compare_variants(const ScenarioConfig &base, const std::vector<std::string> &variants,
					     std::size_t seeds)
{
	std::vector<VariantSummary> table;

	for (const std::string &name : variants) {
		VariantSummary row;
		row.name = name;
		std::vector<double> delays;
		std::vector<double> variation;
		std::vector<double> medians;

		for (std::size_t s = 0; s < seeds; ++s) {
			ScenarioConfig cfg = base;
			apply_variant(cfg, name);
			cfg.seed = base.seed + s;
			cfg.vertex_every = 0;
			const RunLog log = run_scenario(cfg, {false, false});
			const RunSummary &sum = log.summary;
			row.outcomes.push_back(outcome_of(log, cfg.seed));
			++row.runs;
			row.false_alarms += sum.false_alarms;
			row.runs_with_false_alarm += sum.false_alarms > 0 ? 1 : 0;

			if (sum.detection_delay) {
				++row.runs_detected;
				delays.push_back(static_cast<double>(*sum.detection_delay));
			}

			variation.push_back(sum.estimate_variation);
			medians.push_back(sum.p50_ms);
		}

		if (!delays.empty()) {
			row.median_delay_steps = percentile(delays, 0.5);
		}

		row.median_estimate_variation = percentile(variation, 0.5);
		row.median_step_ms = percentile(medians, 0.5);
		table.push_back(row);
	}

	return table;
}

void write_comparison(std::ostream &os, const std::vector<VariantSummary> &table)
{
	os << "variant,runs,runs_with_false_alarm,false_alarms,runs_detected,median_delay_steps,"
	      "median_estimate_variation,median_step_ms\n";

	for (const auto &r : table) {
		os << r.name << ',' << r.runs << ',' << r.runs_with_false_alarm << ',' << r.false_alarms << ','
		   << r.runs_detected << ',' << (r.median_delay_steps ? fmt(*r.median_delay_steps) : "") << ','
		   << fmt(r.median_estimate_variation) << ',' << fmt(r.median_step_ms) << '\n';
	}
}

} // namespace smefd

namespace smefd
{

void write_outcomes(std::ostream &os, const std::vector<VariantSummary> &table)
{
	os << "variant,seed,false_alarms,detection_delay,isolated_axes,flagged,membership_violations,estimate_variation,"
	      "p50_ms\n";

	for (const auto &r : table) {
		for (const auto &o : r.outcomes) {
			std::string axes;

			for (int a : o.isolated_axes) {
				axes += (axes.empty() ? "" : " ") + std::to_string(a);
			}

			os << r.name << ',' << o.seed << ',' << o.false_alarms << ','
			   << (o.detection_delay ? std::to_string(*o.detection_delay) : "") << ',' << axes << ','
			   << (o.flagged ? 1 : 0) << ',' << o.membership_violations << ',' << fmt(o.estimate_variation) << ','
			   << fmt(o.p50_ms) << '\n';
		}
	}
}

} // namespace smefd
