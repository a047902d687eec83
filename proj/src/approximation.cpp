#include "smefd/approximation.hpp"

#include "smefd/errors.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace smefd
{

namespace
{

bool known(const std::vector<Eigen::VectorXd> &set, const Eigen::VectorXd &v)
{
	for (const Eigen::VectorXd &w : set) {
		if ((w - v).lpNorm<Eigen::Infinity>() <= kEpsDir) {
			return true;
		}
	}

	return false;
}

// Visits every j-combination of {0..n-1} in lexicographic order.
template <class Visit>
void for_each_combination(std::size_t n, std::size_t j, Visit visit)
{
	if (j == 0 || j > n) {
		return;
	}

	std::vector<std::size_t> idx(j);

	for (std::size_t i = 0; i < j; ++i) {
		idx[i] = i;
	}

	while (true) {
		visit(idx);
		std::size_t pos = j;

		while (pos > 0 && idx[pos - 1] == n - j + (pos - 1)) {
			--pos;
		}

		if (pos == 0) {
			return;
		}

		++idx[pos - 1];

		for (std::size_t k = pos; k < j; ++k) {
			idx[k] = idx[k - 1] + 1;
		}
	}
}

} // namespace

DirectionSet generate_directions(std::size_t p, unsigned phi)
{
	if (p == 0) {
		throw DimensionError("generate_directions: dimension must be positive");
	}

	const auto pi = static_cast<Eigen::Index>(p);
	DirectionSet E;
	E.p = p;
	E.phi = phi;

	for (Eigen::Index i = 0; i < pi; ++i) {
		for (double s : {1.0, -1.0}) {
			Eigen::VectorXd e = Eigen::VectorXd::Zero(pi);
			e(i) = s;
			E.directions.push_back(e);
		}
	}

	for (unsigned level = 0; level < phi; ++level) {
		std::vector<Eigen::VectorXd> next;
		const std::vector<Eigen::VectorXd> &cur = E.directions;

		for (std::size_t j = 1; j <= p; ++j) {
			for_each_combination(cur.size(), j, [&](const std::vector<std::size_t> &idx) {
				Eigen::VectorXd sum = Eigen::VectorXd::Zero(pi);

				for (std::size_t k : idx) {
					sum += cur[k];
				}

				const double nrm = sum.norm();

				if (nrm == 0.0) {
					return;
				}

				sum /= nrm;

				if (!known(next, sum)) {
					next.push_back(std::move(sum));
				}
			});
		}

		E.directions = std::move(next);
	}

	return E;
}

HPolytope outer_approximate(const VertexSet &V, const DirectionSet &E)
{
	if (V.empty()) {
		throw EmptinessError("outer_approximate: empty vertex set");
	}

	if (V.dim != E.p) {
		throw DimensionError("outer_approximate: vertices live in R^" + std::to_string(V.dim) + ", directions in R^"
				     + std::to_string(E.p));
	}

	const auto rows = static_cast<Eigen::Index>(E.size());
	Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(E.p));
	Eigen::VectorXd b(rows);

	for (Eigen::Index i = 0; i < rows; ++i) {
		const Eigen::VectorXd &e = E.directions[static_cast<std::size_t>(i)];
		double best = -std::numeric_limits<double>::infinity();

		for (const Eigen::VectorXd &v : V.vertices) {
			const double s = e.dot(v);

			if (s > best) {
				best = s;
			}
		}

		A.row(i) = e.transpose();
		b(i) = best;
	}

	// nonempty by construction: it contains every vertex
	return remove_redundant(HPolytope(std::move(A), std::move(b)));
}

void write_directions(std::ostream &os, const DirectionSet &E)
{
	os << "# directions p=" << E.p << " phi=" << E.phi << " count=" << E.size() << '\n';
	os << std::setprecision(17);

	for (const Eigen::VectorXd &e : E.directions) {
		for (Eigen::Index k = 0; k < e.size(); ++k) {
			os << (k ? " " : "") << e(k);
		}

		os << '\n';
	}
}

DirectionSet read_directions(std::istream &is)
{
	std::string header;

	if (!std::getline(is, header)) {
		throw ConfigError("directions file: missing header");
	}

	DirectionSet E;
	std::size_t count = 0;

	if (std::sscanf(header.c_str(), "# directions p=%zu phi=%u count=%zu", &E.p, &E.phi, &count) != 3 || E.p == 0) {
		throw ConfigError("directions file: malformed header '" + header + "'");
	}

	std::string line;

	while (std::getline(is, line)) {
		if (line.empty()) {
			continue;
		}

		std::istringstream ls(line);
		Eigen::VectorXd e(static_cast<Eigen::Index>(E.p));

		for (Eigen::Index k = 0; k < e.size(); ++k) {
			if (!(ls >> e(k))) {
				throw DimensionError("directions file: short vector '" + line + "'");
			}
		}

		if (std::abs(e.norm() - 1.0) > 1e-12) {
			throw BoundError("directions file: vector is not unit length");
		}

		E.directions.push_back(std::move(e));
	}

	if (E.directions.size() != count) {
		throw DimensionError("directions file: header announces " + std::to_string(count) + " vectors, found "
				     + std::to_string(E.directions.size()));
	}

	return E;
}

} // namespace smefd
