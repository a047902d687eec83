#ifndef SMEFD_POLYTOPE_HPP
#define SMEFD_POLYTOPE_HPP

#include "smefd/interval.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace smefd
{

/// LP decision tolerance (emptiness, redundancy), in unit-normal row units.
inline constexpr double kEpsLp = 1e-9;
/// Constraint satisfaction tolerance for vertices and membership.
inline constexpr double kEpsFeas = 1e-7;
/// Two vertices closer than this in the infinity norm are the same vertex.
inline constexpr double kEpsDup = 1e-7;
/// p-subsets whose elimination meets a smaller pivot are treated as singular.
inline constexpr double kPivotThreshold = 1e-10;

/**
 * Half-space polytope {x in R^dim : A x <= b}.
 *
 * May be empty or unbounded; both are queryable states.
 */
class HPolytope
{
public:
	HPolytope() = default;
	/// Throws DimensionError if A and b row counts disagree.
	HPolytope(Eigen::MatrixXd A, Eigen::VectorXd b);

	/// Axis-aligned box lower <= x <= upper as [I; -I] x <= [upper; -lower].
	static HPolytope box(const Eigen::VectorXd &lower, const Eigen::VectorXd &upper);
	/// R^dim (no constraints).
	static HPolytope full_space(std::size_t dim);

	const Eigen::MatrixXd &A() const { return _A; }
	const Eigen::VectorXd &b() const { return _b; }
	std::size_t dim() const { return static_cast<std::size_t>(_A.cols()); }
	std::size_t rows() const { return static_cast<std::size_t>(_A.rows()); }

	/// Smallest normalized slack min_i (b_i - a_i^T x) / ||a_i||; +inf without rows.
	double min_slack(const Eigen::VectorXd &x) const;
	bool contains(const Eigen::VectorXd &x, double tol = kEpsFeas) const { return min_slack(x) >= -tol; }

private:
	Eigen::MatrixXd _A;
	Eigen::VectorXd _b;
};

struct VertexSet {
	std::vector<Eigen::VectorXd> vertices;
	std::size_t dim{0};

	bool empty() const { return vertices.empty(); }
	std::size_t size() const { return vertices.size(); }
};

/// Phase-one feasibility decision at tolerance kEpsLp.
bool is_empty(const HPolytope &P);

/**
 * Drops every row implied by the others. Row i goes iff
 * max{a_i^T x : other rows, a_i^T x <= b_i + 1} <= b_i + kEpsLp (unit rows).
 * Rows are tested in order and removed as found, so exact duplicates keep
 * their last copy. Throws EmptinessError on an empty input.
 */
HPolytope remove_redundant(const HPolytope &P);

struct VertexOptions {
	/// Skip the checks when the caller already established them.
	bool assume_nonempty{false};
	bool assume_irredundant{false};
	bool assume_bounded{false};
};

/**
 * Vertices by solving every p-subset of the non-redundant rows and keeping the
 * feasible, distinct solutions. Throws EmptinessError or UnboundednessError.
 */
VertexSet enumerate_vertices(const HPolytope &P, const VertexOptions &options = {});

/// Row-wise concatenation; the feasible set is the exact intersection.
HPolytope intersect(const HPolytope &P, const HPolytope &Q);

/// [min_v v_i, max_v v_i].
Interval project_axis(const VertexSet &V, std::size_t axis);

/// Arithmetic mean of the vertices.
Eigen::VectorXd vertex_centroid(const VertexSet &V);

/// Support value max{d^T x : x in P} by LP. Throws on empty/unbounded.
double support(const HPolytope &P, const Eigen::VectorXd &direction);

/// True if every vertex of V satisfies Q within tol.
bool vertices_inside(const VertexSet &V, const HPolytope &Q, double tol = kEpsFeas);

} // namespace smefd

#endif // SMEFD_POLYTOPE_HPP
