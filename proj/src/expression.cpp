#include "smefd/expression.hpp"

#include "smefd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smefd
{

namespace detail
{

enum class Op : std::uint8_t { Var, Const, Add, Sub, Mul, Neg, Sin, Cos };

struct Node {
	Op op;
	std::int32_t a{-1};
	std::int32_t b{-1};
	double value{0.0};
	std::size_t var{0};
};

struct ExprGraph {
	std::vector<Node> nodes;

	std::int32_t push(const Node &n)
	{
		nodes.push_back(n);
		return static_cast<std::int32_t>(nodes.size() - 1);
	}
};

} // namespace detail

using detail::Node;
using detail::Op;

namespace
{

void require_same_graph(const std::shared_ptr<detail::ExprGraph> &ga, const std::shared_ptr<detail::ExprGraph> &gb)
{
	if (!ga || ga != gb) {
		throw DimensionError("expression operands belong to different graphs");
	}
}

Node constant_node(double v)
{
	return Node{Op::Const, -1, -1, v, 0};
}

} // namespace

bool Expr::is_constant(double *value) const
{
	if (!_graph) {
		return false;
	}

	const Node &n = _graph->nodes[static_cast<std::size_t>(_id)];

	if (n.op != Op::Const) {
		return false;
	}

	if (value) {
		*value = n.value;
	}

	return true;
}

Expr Expr::constant_in(const Expr &like, double value)
{
	if (!like._graph) {
		throw DimensionError("constant attached to an empty expression");
	}

	return Expr(like._graph, like._graph->push(constant_node(value)));
}

Expr operator+(const Expr &a, const Expr &b)
{
	require_same_graph(a._graph, b._graph);
	double ca = 0.0;
	double cb = 0.0;
	const bool ka = a.is_constant(&ca);
	const bool kb = b.is_constant(&cb);

	if (ka && kb) {
		return Expr::constant_in(a, ca + cb);
	}

	if (ka && ca == 0.0) {
		return b;
	}

	if (kb && cb == 0.0) {
		return a;
	}

	return Expr(a._graph, a._graph->push(Node{Op::Add, a._id, b._id, 0.0, 0}));
}

Expr operator-(const Expr &a, const Expr &b)
{
	require_same_graph(a._graph, b._graph);
	double ca = 0.0;
	double cb = 0.0;
	const bool ka = a.is_constant(&ca);
	const bool kb = b.is_constant(&cb);

	if (ka && kb) {
		return Expr::constant_in(a, ca - cb);
	}

	if (kb && cb == 0.0) {
		return a;
	}

	if (ka && ca == 0.0) {
		return -b;
	}

	return Expr(a._graph, a._graph->push(Node{Op::Sub, a._id, b._id, 0.0, 0}));
}

Expr operator*(const Expr &a, const Expr &b)
{
	require_same_graph(a._graph, b._graph);
	double ca = 0.0;
	double cb = 0.0;
	const bool ka = a.is_constant(&ca);
	const bool kb = b.is_constant(&cb);

	if (ka && kb) {
		return Expr::constant_in(a, ca * cb);
	}

	if ((ka && ca == 0.0) || (kb && cb == 0.0)) {
		return Expr::constant_in(a, 0.0);
	}

	if (ka && ca == 1.0) {
		return b;
	}

	if (kb && cb == 1.0) {
		return a;
	}

	return Expr(a._graph, a._graph->push(Node{Op::Mul, a._id, b._id, 0.0, 0}));
}

Expr operator-(const Expr &a)
{
	if (!a._graph) {
		throw DimensionError("negating an empty expression");
	}

	double ca = 0.0;

	if (a.is_constant(&ca)) {
		return Expr::constant_in(a, -ca);
	}

	return Expr(a._graph, a._graph->push(Node{Op::Neg, a._id, -1, 0.0, 0}));
}

Expr operator+(const Expr &a, double b) { return a + Expr::constant_in(a, b); }
Expr operator+(double a, const Expr &b) { return Expr::constant_in(b, a) + b; }
Expr operator-(const Expr &a, double b) { return a - Expr::constant_in(a, b); }
Expr operator-(double a, const Expr &b) { return Expr::constant_in(b, a) - b; }
Expr operator*(const Expr &a, double b) { return a * Expr::constant_in(a, b); }
Expr operator*(double a, const Expr &b) { return Expr::constant_in(b, a) * b; }

Expr sin(const Expr &a)
{
	double ca = 0.0;

	if (a.is_constant(&ca)) {
		return Expr::constant_in(a, std::sin(ca));
	}

	return Expr(a._graph, a._graph->push(Node{Op::Sin, a._id, -1, 0.0, 0}));
}

Expr cos(const Expr &a)
{
	double ca = 0.0;

	if (a.is_constant(&ca)) {
		return Expr::constant_in(a, std::cos(ca));
	}

	return Expr(a._graph, a._graph->push(Node{Op::Cos, a._id, -1, 0.0, 0}));
}

ExprBuilder::ExprBuilder() : _graph(std::make_shared<detail::ExprGraph>()) {}

Expr ExprBuilder::var(std::size_t index)
{
	return Expr(_graph, _graph->push(Node{Op::Var, -1, -1, 0.0, index}));
}

Expr ExprBuilder::constant(double value)
{
	return Expr(_graph, _graph->push(constant_node(value)));
}

std::vector<Expr> ExprBuilder::vars(std::size_t n)
{
	std::vector<Expr> out;
	out.reserve(n);

	for (std::size_t i = 0; i < n; ++i) {
		out.push_back(var(i));
	}

	return out;
}

DynamicsExpr::DynamicsExpr(const ExprBuilder &builder, std::vector<Expr> outputs, std::size_t input_dim)
	: _graph(builder._graph), _input_dim(input_dim)
{
	_outputs.reserve(outputs.size());

	for (const Expr &e : outputs) {
		if (e._graph != _graph) {
			throw DimensionError("dynamics output built with a different builder");
		}

		_outputs.push_back(e._id);
		_last_node = std::max(_last_node, e._id);
	}

	// The builder may hold nodes the outputs never reach; only reachable variables must fit.
	std::vector<bool> reachable(static_cast<std::size_t>(_last_node + 1), false);

	for (std::int32_t id : _outputs) {
		reachable[static_cast<std::size_t>(id)] = true;
	}

	for (std::int32_t i = _last_node; i >= 0; --i) {
		const Node &n = _graph->nodes[static_cast<std::size_t>(i)];

		if (!reachable[static_cast<std::size_t>(i)]) {
			continue;
		}

		if (n.a >= 0) {
			reachable[static_cast<std::size_t>(n.a)] = true;
		}

		if (n.b >= 0) {
			reachable[static_cast<std::size_t>(n.b)] = true;
		}

		if (n.op == Op::Var && n.var >= input_dim) {
			throw DimensionError("expression references component " + std::to_string(n.var)
					     + " of a " + std::to_string(input_dim) + "-dimensional input");
		}
	}
}

std::size_t DynamicsExpr::node_count() const
{
	return static_cast<std::size_t>(_last_node + 1);
}

template <class T, class MakeConst>
std::vector<T> DynamicsExpr::run(std::span<const T> x, MakeConst make_const) const
{
	if (x.size() != _input_dim) {
		throw DimensionError("dynamics expects " + std::to_string(_input_dim) + " inputs, got "
				     + std::to_string(x.size()));
	}

	using std::cos;
	using std::sin;

	const auto count = static_cast<std::size_t>(_last_node + 1);
	std::vector<T> values;
	values.reserve(count);

	for (std::size_t i = 0; i < count; ++i) {
		const Node &n = _graph->nodes[i];
		const auto a = static_cast<std::size_t>(n.a);
		const auto b = static_cast<std::size_t>(n.b);

		switch (n.op) {
		case Op::Var: values.push_back(n.var < x.size() ? x[n.var] : make_const(0.0)); break;

		case Op::Const: values.push_back(make_const(n.value)); break;

		case Op::Add: values.push_back(values[a] + values[b]); break;

		case Op::Sub: values.push_back(values[a] - values[b]); break;

		case Op::Mul: values.push_back(values[a] * values[b]); break;

		case Op::Neg: values.push_back(-values[a]); break;

		case Op::Sin: values.push_back(sin(values[a])); break;

		case Op::Cos: values.push_back(cos(values[a])); break;
		}
	}

	std::vector<T> out;
	out.reserve(_outputs.size());

	for (std::int32_t id : _outputs) {
		out.push_back(values[static_cast<std::size_t>(id)]);
	}

	return out;
}

std::vector<double> DynamicsExpr::evaluate(std::span<const double> x) const
{
	return run<double>(x, [](double c) { return c; });
}

IntervalVector DynamicsExpr::include(const IntervalVector &box) const
{
	return run<Interval>(std::span<const Interval>(box), [](double c) { return Interval(c); });
}

std::vector<Expr> DynamicsExpr::compose(std::span<const Expr> x) const
{
	if (x.empty() && _input_dim > 0) {
		throw DimensionError("compose: no inputs given");
	}

	const Expr anchor = x.empty() ? Expr{} : x[0];
	return run<Expr>(x, [&anchor](double c) { return Expr::constant_in(anchor, c); });
}

IntervalVector include(const DynamicsExpr &f, const IntervalVector &box)
{
	return f.include(box);
}

std::vector<Expr> operator+(const std::vector<Expr> &a, const std::vector<Expr> &b)
{
	if (a.size() != b.size()) {
		throw DimensionError("vector expression sizes differ");
	}

	std::vector<Expr> out;
	out.reserve(a.size());

	for (std::size_t i = 0; i < a.size(); ++i) {
		out.push_back(a[i] + b[i]);
	}

	return out;
}

std::vector<Expr> operator*(double s, const std::vector<Expr> &a)
{
	std::vector<Expr> out;
	out.reserve(a.size());

	for (const Expr &e : a) {
		out.push_back(s * e);
	}

	return out;
}

DynamicsExpr rk4_discretize(const DynamicsExpr &f, double dt)
{
	if (f.input_dim() != f.output_dim()) {
		throw DimensionError("rk4_discretize needs a square map");
	}

	ExprBuilder b;
	const std::vector<Expr> z = b.vars(f.input_dim());

	const std::vector<Expr> k1 = f.compose(z);
	const std::vector<Expr> k2 = f.compose(z + (0.5 * dt) * k1);
	const std::vector<Expr> k3 = f.compose(z + (0.5 * dt) * k2);
	const std::vector<Expr> k4 = f.compose(z + dt * k3);

	const std::vector<Expr> incr = k1 + 2.0 * k2 + 2.0 * k3 + k4;
	return DynamicsExpr(b, z + (dt / 6.0) * incr, f.input_dim());
}

} // namespace smefd
