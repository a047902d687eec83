#include "smefd/diagnosis.hpp"

#include "smefd/errors.hpp"

#include <algorithm>

namespace smefd
{

std::string to_string(EventKind kind)
{
	switch (kind) {
	case EventKind::Detection: return "detection";

	case EventKind::Isolation: return "isolation";

	case EventKind::IsolationTimeout: return "isolation_timeout";

	case EventKind::Redetection: return "redetection";
	}

	return "unknown";
}

std::string to_string(Mode mode)
{
	switch (mode) {
	case Mode::Healthy: return "healthy";

	case Mode::FaultDetected: return "fault_detected";

	case Mode::FaultIsolated: return "fault_isolated";
	}

	return "unknown";
}

DiagnosisState DiagnosisState::initial(std::size_t p)
{
	DiagnosisState s;
	s.k_I.assign(p, std::nullopt);
	s.awaiting_isolation.assign(p, false);
	return s;
}

DiagnosisStep on_step(const DiagnosisState &state, bool empty_flag, const std::vector<Interval> &projections,
		      Timestep k, const DiagnosisConfig &config)
{
	if (projections.size() != config.p || state.k_I.size() != config.p
	    || state.awaiting_isolation.size() != config.p) {
		throw DimensionError("diagnosis::on_step: projections must have one interval per parameter");
	}

	DiagnosisStep out{state, {}, false};
	DiagnosisState &s = out.state;

	if (empty_flag) {
		if (s.mode == Mode::FaultDetected) {
			s.flagged = true;
			out.events.push_back({EventKind::Redetection, k, -1});

		} else {
			// healthy, or re-armed after a resolved fault
			s.mode = Mode::FaultDetected;
			s.k_D = k;
			s.k_I.assign(config.p, std::nullopt);
			s.prefault_projections = projections;
			s.awaiting_isolation.assign(config.p, true);
			out.events.push_back({EventKind::Detection, k, -1});
		}

		out.reset_requested = true;
		return out;
	}

	if (s.mode != Mode::FaultDetected) {
		return out;
	}

	for (std::size_t i = 0; i < config.p; ++i) {
		if (s.awaiting_isolation[i] && disjoint(projections[i], s.prefault_projections[i], config.eps_iso)) {
			s.awaiting_isolation[i] = false;
			s.k_I[i] = k;
			out.events.push_back({EventKind::Isolation, k, static_cast<int>(i)});
		}
	}

	const bool any_isolated = std::any_of(s.k_I.begin(), s.k_I.end(), [](const auto &v) { return v.has_value(); });
	const bool pending = std::find(s.awaiting_isolation.begin(), s.awaiting_isolation.end(), true)
			     != s.awaiting_isolation.end();

	// healthy axes never separate, so once one axis has isolated the rest run to the timeout
	if (pending && k - *s.k_D >= config.isolation_timeout) {
		s.awaiting_isolation.assign(config.p, false);

		if (!any_isolated) {
			out.events.push_back({EventKind::IsolationTimeout, k, -1});
		}

		s.mode = Mode::FaultIsolated;

	} else if (!pending) {
		s.mode = Mode::FaultIsolated;
	}

	return out;
}

Timestep detection_delay(const DiagnosisState &state, Timestep k_F)
{
	if (!state.k_D) {
		throw Error("detection_delay: no detection recorded");
	}

	return *state.k_D - k_F;
}

} // namespace smefd
