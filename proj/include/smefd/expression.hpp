#ifndef SMEFD_EXPRESSION_HPP
#define SMEFD_EXPRESSION_HPP

#include "smefd/interval.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace smefd
{

namespace detail
{
struct ExprGraph;
}

/**
 * Handle to a scalar node of an expression graph.
 *
 * Expressions are built from variables, constants, +, -, *, sin and cos.
 * One graph describes a map once; it is then evaluated over doubles (the
 * simulator) and over intervals (the inclusion function) without a second
 * hand-written copy. Mixing handles from different graphs is an error.
 */
class Expr
{
public:
	Expr() = default;

	bool valid() const { return _graph != nullptr; }
	/// True if the node is a literal constant; `value` receives it.
	bool is_constant(double *value = nullptr) const;

	friend Expr operator+(const Expr &a, const Expr &b);
	friend Expr operator-(const Expr &a, const Expr &b);
	friend Expr operator*(const Expr &a, const Expr &b);
	friend Expr operator-(const Expr &a);
	friend Expr operator+(const Expr &a, double b);
	friend Expr operator+(double a, const Expr &b);
	friend Expr operator-(const Expr &a, double b);
	friend Expr operator-(double a, const Expr &b);
	friend Expr operator*(const Expr &a, double b);
	friend Expr operator*(double a, const Expr &b);
	friend Expr sin(const Expr &a);
	friend Expr cos(const Expr &a);

private:
	friend class ExprBuilder;
	friend class DynamicsExpr;

	Expr(std::shared_ptr<detail::ExprGraph> graph, std::int32_t id) : _graph(std::move(graph)), _id(id) {}

	static Expr constant_in(const Expr &like, double value);

	std::shared_ptr<detail::ExprGraph> _graph;
	std::int32_t _id{-1};
};

/// Creates variables and constants that share one graph.
class ExprBuilder
{
public:
	ExprBuilder();

	Expr var(std::size_t index);
	Expr constant(double value);
	/// Variables 0..n-1 in order.
	std::vector<Expr> vars(std::size_t n);

private:
	friend class DynamicsExpr;
	std::shared_ptr<detail::ExprGraph> _graph;
};

/**
 * A vector-valued map R^n -> R^m described by an expression graph.
 */
class DynamicsExpr
{
public:
	/// Throws DimensionError if any output references a variable index >= input_dim,
	/// or if the outputs come from a different builder.
	DynamicsExpr(const ExprBuilder &builder, std::vector<Expr> outputs, std::size_t input_dim);

	std::size_t input_dim() const { return _input_dim; }
	std::size_t output_dim() const { return _outputs.size(); }
	std::size_t node_count() const;

	std::vector<double> evaluate(std::span<const double> x) const;
	/// Natural interval extension: encloses evaluate(x) for every x in box.
	IntervalVector include(const IntervalVector &box) const;
	/// Substitutes symbolic inputs; the result lives in the inputs' graph.
	std::vector<Expr> compose(std::span<const Expr> x) const;

private:
	template <class T, class MakeConst>
	std::vector<T> run(std::span<const T> x, MakeConst make_const) const;

	std::shared_ptr<detail::ExprGraph> _graph;
	std::vector<std::int32_t> _outputs;
	std::size_t _input_dim;
	std::int32_t _last_node{-1};
};

/// Interval enclosure of f over box; checks the box dimension.
IntervalVector include(const DynamicsExpr &f, const IntervalVector &box);

/// Vector helpers for building dynamics.
std::vector<Expr> operator+(const std::vector<Expr> &a, const std::vector<Expr> &b);
std::vector<Expr> operator*(double s, const std::vector<Expr> &a);

/**
 * One classical Runge-Kutta step of the autonomous ODE z' = f(z) as a new map
 * z_k -> z_{k+1}. Stage evaluations are composed symbolically so the interval
 * inclusion of the discrete map encloses the whole step.
 */
DynamicsExpr rk4_discretize(const DynamicsExpr &f, double dt);

} // namespace smefd

#endif // SMEFD_EXPRESSION_HPP
