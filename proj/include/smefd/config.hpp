#ifndef SMEFD_CONFIG_HPP
#define SMEFD_CONFIG_HPP

#include "smefd/asv.hpp"
#include "smefd/diagnosis.hpp"
#include "smefd/estimator.hpp"
#include "smefd/sme.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace smefd
{

/// Everything one simulated scenario needs.
struct ScenarioConfig {
	VesselParams vessel;
	UncertaintyBounds bounds;
	/// Fraction of the bounds that the simulated disturbance actually spans; the
	/// remainder absorbs the gap between the RK4 plant and the discrete model.
	double disturbance_fill{0.8};
	double noise_fill{1.0};

	Eigen::VectorXd theta0_lower;
	Eigen::VectorXd theta0_upper;
	unsigned phi{1};
	UpsMode ups_mode{UpsMode::NoiseAware};

	std::size_t window{50};
	RegularizationPolicy regularization;

	double eps_iso{1e-9};
	Timestep isolation_timeout{200};

	double duration{50.0};
	std::uint64_t seed{1};
	AsvState initial_state;
	std::vector<FaultEvent> faults;
	ReferencePath path;
	ControllerGains gains;

	std::filesystem::path out_dir{"out"};
	std::size_t vertex_every{20}; ///< 0 disables vertex snapshots
	bool deterministic{false};    ///< log step_ms as zero so reruns are byte-identical

	/// Number of simulated steps, duration / dt.
	std::size_t steps() const;
	/// Throws ConfigError describing the first inconsistency.
	void validate() const;
};

/// Defaults for the three-thruster vessel; validated.
ScenarioConfig default_scenario();

/**
 * Reads a JSON document (comments allowed) on top of default_scenario().
 * Unknown keys are rejected. Throws ConfigError.
 */
ScenarioConfig load_config(const std::filesystem::path &path);
ScenarioConfig parse_config(const std::string &text);

/**
 * Applies a named override: "baseline", "noise_blind", "phi=N", "lambda_bar=0",
 * "dither=0" or "seed=N"; several may be joined with '+'. Throws ConfigError on an
 * unknown name.
 */
void apply_variant(ScenarioConfig &config, const std::string &variant);

} // namespace smefd

#endif // SMEFD_CONFIG_HPP
