#ifndef SMEFD_RUNNER_HPP
#define SMEFD_RUNNER_HPP

#include "smefd/config.hpp"
#include "smefd/diagnosis.hpp"
#include "smefd/interval.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace smefd
{

/// Bumped whenever the step CSV columns change.
inline constexpr int kCsvSchemaVersion = 1;

struct StepRecord {
	Timestep k{0};
	double t{0};
	Eigen::VectorXd z;         ///< truth (6)
	Eigen::VectorXd y;         ///< measurement (6)
	Eigen::VectorXd u;         ///< input applied from this step on (5)
	Eigen::VectorXd theta_hat; ///< (3)
	std::vector<Interval> projections;
	bool empty{false};
	std::string event; ///< ';'-separated, empty when nothing happened
	double step_ms{0};
};

struct Snapshot {
	Timestep k{0};
	std::vector<Eigen::VectorXd> vertices;
	Eigen::MatrixXd A;
	Eigen::VectorXd b;
};

struct RunSummary {
	std::optional<Timestep> k_F;
	std::optional<Timestep> k_D; ///< first detection after the fault (or the first at all without one)
	std::optional<double> t_D;
	std::vector<std::optional<Timestep>> k_I;
	std::optional<Timestep> detection_delay;
	std::vector<std::optional<Timestep>> isolation_delays;
	std::size_t false_alarms{0}; ///< detection-type events no later than k_F
	std::size_t detections{0};
	bool flagged{false};
	double p50_ms{0};
	double p99_ms{0};
	/// Steps at which the true parameter (constant since the last reset) left the set.
	std::size_t membership_violations{0};
	double worst_membership_slack{0};
	std::size_t estimate_violations{0};
	/// Mean step-to-step change of the estimate, reset steps excluded.
	double estimate_variation{0};
};

struct RunLog {
	std::vector<StepRecord> records;
	std::vector<Snapshot> snapshots;
	std::vector<Event> events;
	RunSummary summary;
	std::vector<std::string> trace; ///< pipeline stage order, filled when requested
	double dt{0};
};

struct RunOptions {
	bool keep_records{true};
	bool trace{false};
};

/// Parameter vector in effect for the transition k -> k+1.
Eigen::Vector3d theta_at(const ScenarioConfig &config, Timestep k);

/// First fault step round(t_F / dt), if any fault is configured.
std::optional<Timestep> fault_step(const ScenarioConfig &config);

/**
 * Simulates the plant and runs get data, UPS, FPS update, emptiness test,
 * detection/isolation with resets, outer approximation, centroid and
 * estimation once per step. Numerical failures are rethrown with the step index.
 */
RunLog run_scenario(const ScenarioConfig &config, const RunOptions &options = {});

void write_steps_csv(std::ostream &os, const RunLog &log);
void write_snapshots_csv(std::ostream &os, const RunLog &log);
void write_constraints_csv(std::ostream &os, const RunLog &log);
void write_summary_json(std::ostream &os, const RunLog &log, const ScenarioConfig &config);

/// Writes steps.csv, vertices.csv, constraints.csv and summary.json into dir.
void write_run(const std::filesystem::path &dir, const RunLog &log, const ScenarioConfig &config);

struct RunOutcome {
	std::uint64_t seed{0};
	std::size_t false_alarms{0};
	std::optional<Timestep> detection_delay;
	std::vector<int> isolated_axes;
	bool flagged{false};
	std::size_t membership_violations{0};
	double estimate_variation{0};
	double p50_ms{0};
};

RunOutcome outcome_of(const RunLog &log, std::uint64_t seed);

struct VariantSummary {
	std::string name;
	std::vector<RunOutcome> outcomes;
	std::size_t runs{0};
	std::size_t runs_with_false_alarm{0};
	std::size_t false_alarms{0};
	std::size_t runs_detected{0};
	std::optional<double> median_delay_steps;
	double median_estimate_variation{0};
	double median_step_ms{0};
};

/// Runs every variant on the seeds base.seed, base.seed + 1, ... .
std::vector<VariantSummary> compare_variants(const ScenarioConfig &base, const std::vector<std::string> &variants,
					     std::size_t seeds);

void write_comparison(std::ostream &os, const std::vector<VariantSummary> &table);
/// One line per variant and seed.
void write_outcomes(std::ostream &os, const std::vector<VariantSummary> &table);

} // namespace smefd

#endif // SMEFD_RUNNER_HPP
