#ifndef SMEFD_APPROXIMATION_HPP
#define SMEFD_APPROXIMATION_HPP

#include "smefd/polytope.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace smefd
{

/// Two generated directions closer than this (infinity norm) are merged.
inline constexpr double kEpsDir = 1e-9;
/// Largest recursion depth accepted by scenario validation.
inline constexpr unsigned kMaxPhi = 3;

/// Unit face normals of the outer-approximating polytope.
struct DirectionSet {
	std::vector<Eigen::VectorXd> directions;
	std::size_t p{0};
	unsigned phi{0};

	std::size_t size() const { return directions.size(); }
};

/**
 * Offline face-normal generator.
 *
 * Starts from the 2p signed axes. Each recursion replaces the set by the
 * normalized nonzero sums of all combinations of 1..p distinct members,
 * deduplicated within kEpsDir. Singletons reproduce the current members, so
 * every level contains the previous one.
 *
 * Throws DimensionError for p = 0.
 */
DirectionSet generate_directions(std::size_t p, unsigned phi);

/**
 * Support-function outer approximation of conv(V) along E: one row e^T x <= e^T v*
 * per direction, where v* is the first vertex attaining the maximum of e^T v,
 * followed by redundancy removal.
 */
HPolytope outer_approximate(const VertexSet &V, const DirectionSet &E);

/// Plain-text form: "# directions p=<p> phi=<phi> count=<n>" then one vector per line.
void write_directions(std::ostream &os, const DirectionSet &E);
DirectionSet read_directions(std::istream &is);

} // namespace smefd

#endif // SMEFD_APPROXIMATION_HPP
