#pragma once

// Parsed scalar expressions over named coordinates and parameters.
//
// Grammar (EBNF, also documented in docs/formats.md):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = atom [ "^" unary ] ;            (right-associative)
//   atom    = number | name | name "(" expr ")" | "(" expr ")" ;
//   name    = letter { letter | digit | "_" } ;
//
// "^" binds tighter than unary minus: -x^2 parses as -(x^2).  Exponents must
// fold to a real constant at parse time (e.g. t^(9/2), q1^2, t^-1); integer
// exponents evaluate by repeated squaring, non-integer ones require a
// positive base.  Recognized functions: sqrt, sin, cos, exp, ln.
//
// Symbols are bound by position against the ordered list given at parse;
// parameters are bound by value at evaluation, so one parsed expression
// serves parameter sweeps.

#include <hjsep/jets.hpp>

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hjsep {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int column)
        : std::runtime_error(what), column_(column) {}
    // 1-based column in the source text
    int column() const { return column_; }

private:
    int column_;
};

class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& what, std::string subexpr, int column)
        : std::runtime_error(what), subexpr_(std::move(subexpr)), column_(column) {}
    const std::string& subexpression() const { return subexpr_; }
    int column() const { return column_; }

private:
    std::string subexpr_;
    int column_;
};

namespace detail {

enum class NodeKind : std::uint8_t { Constant, Variable, Parameter, Unary, Binary, Pow };
enum class UnaryOp : std::uint8_t { Neg, Sqrt, Sin, Cos, Exp, Ln };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div };

struct ExprNode {
    NodeKind kind{};
    double constant = 0.0;   // Constant value or Pow exponent
    int index = 0;           // Variable / Parameter slot
    UnaryOp uop{};
    BinaryOp bop{};
    bool integer_exponent = false;
    long exponent_int = 0;
    std::shared_ptr<const ExprNode> a, b;
    int src_begin = 0, src_end = 0;  // byte span in the original source
};

template <class S>
struct ScalarTraits {
    static S constant(double v) { return S(v); }
};

template <>
struct ScalarTraits<double> {
    static double constant(double v) { return v; }
};

template <class S>
struct ScalarTraits<D1<S>> {
    static D1<S> constant(double v) { return D1<S>(ScalarTraits<S>::constant(v)); }
};

// x^e for e >= 1 by repeated squaring in the scalar ring
template <class S>
S ipow_positive(const S& x, long e) {
    S sq = x;
    S acc{};
    bool have = false;
    while (e > 0) {
        if (e & 1) {
            acc = have ? S(acc * sq) : sq;
            have = true;
        }
        e >>= 1;
        if (e) sq = sq * sq;
    }
    return acc;
}

}  // namespace detail

class Expr {
public:
    Expr() = default;

    // `symbols` is the ordered coordinate list; `parameters` supplies the
    // parameter names and their default values.
    static Expr parse(std::string_view source,
                      const std::vector<std::string>& symbols,
                      const std::map<std::string, double>& parameters = {});

    bool valid() const { return root_ != nullptr; }
    const std::vector<std::string>& symbols() const { return symbols_; }
    const std::vector<std::string>& parameter_names() const { return param_names_; }
    const std::vector<double>& parameter_defaults() const { return param_defaults_; }
    const std::string& source() const { return source_; }

    // Canonical printed form; re-parsing it evaluates identically.
    std::string to_string() const;

    double eval(std::span<const double> vars) const;
    double eval(std::span<const double> vars, std::span<const double> params) const;

    // Second-order jet; `active` lists symbol indices, in jet-slot order.
    Jet2 eval_jet2(std::span<const double> vars, std::span<const int> active) const;
    Jet2 eval_jet2(std::span<const double> vars, std::span<const int> active,
                   std::span<const double> params) const;

    // Name-keyed conveniences.
    double eval_at(const std::map<std::string, double>& point) const;
    Jet2 eval_jet2_at(const std::map<std::string, double>& point,
                      const std::vector<std::string>& active) const;

    // Evaluation over an arbitrary scalar ring; `vars` holds one pre-seeded
    // scalar per symbol.  This is how derivative orders beyond the plain
    // Jet2 facade are reached (e.g. jets composed through a coordinate
    // change are evaluated with S = D1<Jet2>).
    template <class S>
    S eval_scalar(std::span<const S> vars, std::span<const double> params) const {
        if (static_cast<int>(vars.size()) != static_cast<int>(symbols_.size()))
            throw std::invalid_argument("expression: variable count mismatch");
        if (static_cast<int>(params.size()) != static_cast<int>(param_names_.size()))
            throw std::invalid_argument("expression: parameter count mismatch");
        return eval_node<S>(*root_, vars, params);
    }

private:
    template <class S>
    S eval_node(const detail::ExprNode& nd, std::span<const S> vars,
                std::span<const double> params) const {
        using detail::BinaryOp;
        using detail::NodeKind;
        using detail::UnaryOp;
        switch (nd.kind) {
            case NodeKind::Constant:
                return detail::ScalarTraits<S>::constant(nd.constant);
            case NodeKind::Variable:
                return vars[nd.index];
            case NodeKind::Parameter:
                return detail::ScalarTraits<S>::constant(params[nd.index]);
            case NodeKind::Unary: {
                using std::cos;
                using std::exp;
                using std::log;
                using std::sin;
                using std::sqrt;
                S x = eval_node<S>(*nd.a, vars, params);
                switch (nd.uop) {
                    case UnaryOp::Neg: return -x;
                    case UnaryOp::Sqrt:
                        if (!(value_of(x) > 0.0)) domain_error(nd, "sqrt of a non-positive value");
                        return sqrt(x);
                    case UnaryOp::Sin: return sin(x);
                    case UnaryOp::Cos: return cos(x);
                    case UnaryOp::Exp: return exp(x);
                    case UnaryOp::Ln:
                        if (!(value_of(x) > 0.0)) domain_error(nd, "ln of a non-positive value");
                        return log(x);
                }
                break;
            }
            case NodeKind::Binary: {
                S x = eval_node<S>(*nd.a, vars, params);
                S y = eval_node<S>(*nd.b, vars, params);
                switch (nd.bop) {
                    case BinaryOp::Add: return x + y;
                    case BinaryOp::Sub: return x - y;
                    case BinaryOp::Mul: return x * y;
                    case BinaryOp::Div:
                        if (value_of(y) == 0.0) domain_error(nd, "division by zero");
                        return x / y;
                }
                break;
            }
            case NodeKind::Pow: {
                S x = eval_node<S>(*nd.a, vars, params);
                if (nd.integer_exponent) {
                    const long e = nd.exponent_int;
                    if (e == 0) return detail::ScalarTraits<S>::constant(1.0);
                    if (e > 0) return detail::ipow_positive(x, e);
                    if (value_of(x) == 0.0)
                        domain_error(nd, "zero base with a negative exponent");
                    return recip(detail::ipow_positive(x, -e));
                }
                using std::pow;
                if (!(value_of(x) > 0.0))
                    domain_error(nd, "non-integer exponent needs a positive base");
                return pow(x, nd.constant);
            }
        }
        throw std::logic_error("expression: corrupt node");
    }

    [[noreturn]] void domain_error(const detail::ExprNode& nd, const std::string& what) const;

    std::shared_ptr<const detail::ExprNode> root_;
    std::string source_;
    std::vector<std::string> symbols_;
    std::vector<std::string> param_names_;
    std::vector<double> param_defaults_;
};

}  // namespace hjsep
