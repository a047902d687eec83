#ifndef SMEFD_DIAGNOSIS_HPP
#define SMEFD_DIAGNOSIS_HPP

#include "smefd/interval.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smefd
{

using Timestep = std::int64_t;

enum class Mode { Healthy, FaultDetected, FaultIsolated };

enum class EventKind {
	Detection,        ///< FPS became empty while healthy (or re-armed)
	Isolation,        ///< axis projection disjoint from the pre-fault one
	IsolationTimeout, ///< pending axes gave up
	Redetection       ///< FPS emptied again while isolation was pending
};

struct Event {
	EventKind kind{EventKind::Detection};
	Timestep k{0};
	int axis{-1}; ///< parameter index for Isolation, -1 otherwise
};

std::string to_string(EventKind kind);
std::string to_string(Mode mode);

struct DiagnosisConfig {
	std::size_t p{0};
	double eps_iso{1e-9};
	Timestep isolation_timeout{200};
};

struct DiagnosisState {
	Mode mode{Mode::Healthy};
	std::optional<Timestep> k_D;
	std::vector<std::optional<Timestep>> k_I;
	std::vector<Interval> prefault_projections;
	std::vector<bool> awaiting_isolation;
	bool flagged{false}; ///< a redetection happened during the post-reset transient

	static DiagnosisState initial(std::size_t p);
};

struct DiagnosisStep {
	DiagnosisState state;
	std::vector<Event> events;
	bool reset_requested{false}; ///< caller resets the FPS and clears the regression buffer
};

/**
 * Advances the state machine by one step. `projections` are the axis projections
 * of the committed set; on an empty step that set is still the last nonempty one,
 * which is what gets frozen as the pre-fault reference.
 */
DiagnosisStep on_step(const DiagnosisState &state, bool empty_flag, const std::vector<Interval> &projections,
		      Timestep k, const DiagnosisConfig &config);

/// k_D - k_F; throws Error when nothing has been detected.
Timestep detection_delay(const DiagnosisState &state, Timestep k_F);

} // namespace smefd

#endif // SMEFD_DIAGNOSIS_HPP
