#include <hjsep/expr.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

namespace hjsep {

using detail::BinaryOp;
using detail::ExprNode;
using detail::NodeKind;
using detail::UnaryOp;

namespace {

struct Token {
    enum class Kind { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    double number = 0.0;
    std::string_view text;
    int begin = 0;  // byte offset into the source
    int end = 0;
};

bool name_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool name_char(char c) { return name_start(c) || (c >= '0' && c <= '9') || c == '_'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
        tok_.begin = static_cast<int>(pos_);
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.end = tok_.begin;
            return;
        }
        const char c = src_[pos_];
        switch (c) {
            case '+': single(Token::Kind::Plus); return;
            case '-': single(Token::Kind::Minus); return;
            case '*': single(Token::Kind::Star); return;
            case '/': single(Token::Kind::Slash); return;
            case '^': single(Token::Kind::Caret); return;
            case '(': single(Token::Kind::LParen); return;
            case ')': single(Token::Kind::RParen); return;
            default: break;
        }
        if ((c >= '0' && c <= '9') || c == '.') {
            lex_number();
            return;
        }
        if (name_start(c)) {
            size_t e = pos_;
            while (e < src_.size() && name_char(src_[e])) ++e;
            tok_.kind = Token::Kind::Name;
            tok_.text = src_.substr(pos_, e - pos_);
            tok_.end = static_cast<int>(e);
            pos_ = e;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'",
                         static_cast<int>(pos_) + 1);
    }

    void single(Token::Kind k) {
        tok_.kind = k;
        tok_.text = src_.substr(pos_, 1);
        tok_.end = static_cast<int>(pos_) + 1;
        ++pos_;
    }

    void lex_number() {
        size_t e = pos_;
        while (e < src_.size() && ((src_[e] >= '0' && src_[e] <= '9') || src_[e] == '.')) ++e;
        if (e < src_.size() && (src_[e] == 'e' || src_[e] == 'E')) {
            size_t m = e + 1;
            if (m < src_.size() && (src_[m] == '+' || src_[m] == '-')) ++m;
            if (m < src_.size() && src_[m] >= '0' && src_[m] <= '9') {
                while (m < src_.size() && src_[m] >= '0' && src_[m] <= '9') ++m;
                e = m;
            }
        }
        const std::string_view text = src_.substr(pos_, e - pos_);
        double value = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
            throw ParseError("malformed number '" + std::string(text) + "'",
                             static_cast<int>(pos_) + 1);
        tok_.kind = Token::Kind::Number;
        tok_.number = value;
        tok_.text = text;
        tok_.end = static_cast<int>(e);
        pos_ = e;
    }

    std::string_view src_;
    size_t pos_ = 0;
    Token tok_;
};

using NodePtr = std::shared_ptr<const ExprNode>;

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& symbols,
           const std::map<std::string, double>& parameters)
        : lex_(src), symbols_(symbols), parameters_(parameters) {}

    NodePtr run() {
        NodePtr e = parse_expr();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End)
            throw ParseError("unexpected trailing input", t.begin + 1);
        return e;
    }

private:
    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            const Token::Kind k = lex_.peek().kind;
            if (k != Token::Kind::Plus && k != Token::Kind::Minus) return lhs;
            lex_.take();
            NodePtr rhs = parse_term();
            lhs = binary(k == Token::Kind::Plus ? BinaryOp::Add : BinaryOp::Sub, lhs, rhs);
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            const Token::Kind k = lex_.peek().kind;
            if (k != Token::Kind::Star && k != Token::Kind::Slash) return lhs;
            lex_.take();
            NodePtr rhs = parse_unary();
            lhs = binary(k == Token::Kind::Star ? BinaryOp::Mul : BinaryOp::Div, lhs, rhs);
        }
    }

    NodePtr parse_unary() {
        if (lex_.peek().kind == Token::Kind::Minus) {
            const Token minus = lex_.take();
            NodePtr arg = parse_unary();
            auto n = std::make_shared<ExprNode>();
            n->kind = NodeKind::Unary;
            n->uop = UnaryOp::Neg;
            n->a = arg;
            n->src_begin = minus.begin;
            n->src_end = arg->src_end;
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (lex_.peek().kind != Token::Kind::Caret) return base;
        const Token caret = lex_.take();
        NodePtr exponent = parse_unary();  // right-associative, tighter than unary minus
        const std::optional<double> folded = fold_constant(exponent);
        if (!folded)
            throw ParseError("exponent must be a constant expression", caret.begin + 2);
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Pow;
        n->a = base;
        n->constant = *folded;
        const double r = std::round(*folded);
        if (r == *folded && std::abs(r) <= 1e9) {
            n->integer_exponent = true;
            n->exponent_int = static_cast<long>(r);
        }
        n->src_begin = base->src_begin;
        n->src_end = exponent->src_end;
        return n;
    }

    NodePtr parse_atom() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Token::Kind::Number: {
                lex_.take();
                auto n = std::make_shared<ExprNode>();
                n->kind = NodeKind::Constant;
                n->constant = t.number;
                n->src_begin = t.begin;
                n->src_end = t.end;
                return n;
            }
            case Token::Kind::LParen: {
                lex_.take();
                NodePtr inner = parse_expr();
                const Token rp = expect_rparen(t);
                auto widened = std::make_shared<ExprNode>(*inner);
                widened->src_begin = t.begin;
                widened->src_end = rp.end;
                return widened;
            }
            case Token::Kind::Name: {
                lex_.take();
                if (lex_.peek().kind == Token::Kind::LParen) {
                    const std::optional<UnaryOp> f = function_named(t.text);
                    if (!f)
                        throw ParseError("unknown function '" + std::string(t.text) + "'",
                                         t.begin + 1);
                    const Token lp = lex_.take();
                    NodePtr arg = parse_expr();
                    const Token rp = expect_rparen(lp);
                    auto n = std::make_shared<ExprNode>();
                    n->kind = NodeKind::Unary;
                    n->uop = *f;
                    n->a = arg;
                    n->src_begin = t.begin;
                    n->src_end = rp.end;
                    return n;
                }
                return name_node(t);
            }
            default:
                throw ParseError("expected a number, name, or '('", t.begin + 1);
        }
    }

    Token expect_rparen(const Token& opener) {
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::RParen)
            throw ParseError("missing ')' for '(' at column " +
                                 std::to_string(opener.begin + 1),
                             t.begin + 1);
        return lex_.take();
    }

    NodePtr name_node(const Token& t) {
        auto n = std::make_shared<ExprNode>();
        n->src_begin = t.begin;
        n->src_end = t.end;
        const auto sym = std::find(symbols_.begin(), symbols_.end(), t.text);
        if (sym != symbols_.end()) {
            n->kind = NodeKind::Variable;
            n->index = static_cast<int>(sym - symbols_.begin());
            return n;
        }
        const auto par = parameters_.find(std::string(t.text));
        if (par != parameters_.end()) {
            n->kind = NodeKind::Parameter;
            n->index = static_cast<int>(std::distance(parameters_.begin(), par));
            return n;
        }
        throw ParseError("unknown name '" + std::string(t.text) + "'", t.begin + 1);
    }

    static std::optional<UnaryOp> function_named(std::string_view s) {
        if (s == "sqrt") return UnaryOp::Sqrt;
        if (s == "sin") return UnaryOp::Sin;
        if (s == "cos") return UnaryOp::Cos;
        if (s == "exp") return UnaryOp::Exp;
        if (s == "ln") return UnaryOp::Ln;
        return std::nullopt;
    }

    static NodePtr binary(BinaryOp op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Binary;
        n->bop = op;
        n->src_begin = a->src_begin;
        n->src_end = b->src_end;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    // Exponents must fold to a real constant: literals and +,-,*,/,^ over
    // them (covers t^(9/2), q^-2, 2^3^2); names make folding fail.
    static std::optional<double> fold_constant(const NodePtr& n) {
        switch (n->kind) {
            case NodeKind::Constant:
                return n->constant;
            case NodeKind::Unary: {
                if (n->uop != UnaryOp::Neg) return std::nullopt;
                const auto a = fold_constant(n->a);
                return a ? std::optional<double>(-*a) : std::nullopt;
            }
            case NodeKind::Binary: {
                const auto a = fold_constant(n->a);
                const auto b = fold_constant(n->b);
                if (!a || !b) return std::nullopt;
                switch (n->bop) {
                    case BinaryOp::Add: return *a + *b;
                    case BinaryOp::Sub: return *a - *b;
                    case BinaryOp::Mul: return *a * *b;
                    case BinaryOp::Div:
                        if (*b == 0.0) return std::nullopt;
                        return *a / *b;
                }
                return std::nullopt;
            }
            case NodeKind::Pow: {
                const auto a = fold_constant(n->a);
                return a ? std::optional<double>(std::pow(*a, n->constant)) : std::nullopt;
            }
            default:
                return std::nullopt;
        }
    }

    Lexer lex_;
    const std::vector<std::string>& symbols_;
    const std::map<std::string, double>& parameters_;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

enum class Prec { Add, Mul, Unary, Pow, Atom };

void print_node(const ExprNode& n, std::string& out);

void print_child(const ExprNode& n, std::string& out, Prec min) {
    Prec p = Prec::Atom;
    switch (n.kind) {
        case NodeKind::Binary:
            p = (n.bop == BinaryOp::Add || n.bop == BinaryOp::Sub) ? Prec::Add : Prec::Mul;
            break;
        case NodeKind::Unary:
            p = n.uop == UnaryOp::Neg ? Prec::Unary : Prec::Atom;
            break;
        case NodeKind::Pow:
            p = Prec::Pow;
            break;
        case NodeKind::Constant:
            p = n.constant < 0.0 ? Prec::Unary : Prec::Atom;
            break;
        default:
            break;
    }
    if (static_cast<int>(p) < static_cast<int>(min)) {
        out += '(';
        print_node(n, out);
        out += ')';
    } else {
        print_node(n, out);
    }
}

const char* function_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Ln: return "ln";
        default: return "";
    }
}

struct PrintContext {
    const std::vector<std::string>* symbols;
    const std::vector<std::string>* params;
};

thread_local const PrintContext* g_print_ctx = nullptr;

void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::Constant:
            out += format_double(n.constant);
            return;
        case NodeKind::Variable:
            out += (*g_print_ctx->symbols)[n.index];
            return;
        case NodeKind::Parameter:
            out += (*g_print_ctx->params)[n.index];
            return;
        case NodeKind::Unary:
            if (n.uop == UnaryOp::Neg) {
                out += '-';
                print_child(*n.a, out, Prec::Unary);
            } else {
                out += function_name(n.uop);
                out += '(';
                print_node(*n.a, out);
                out += ')';
            }
            return;
        case NodeKind::Binary: {
            const char* op = nullptr;
            Prec lhs = Prec::Add, rhs = Prec::Add;
            switch (n.bop) {
                case BinaryOp::Add: op = " + "; lhs = Prec::Add; rhs = Prec::Add; break;
                case BinaryOp::Sub: op = " - "; lhs = Prec::Add; rhs = Prec::Mul; break;
                case BinaryOp::Mul: op = "*"; lhs = Prec::Mul; rhs = Prec::Mul; break;
                case BinaryOp::Div: op = "/"; lhs = Prec::Mul; rhs = Prec::Unary; break;
            }
            print_child(*n.a, out, lhs);
            out += op;
            print_child(*n.b, out, rhs);
            return;
        }
        case NodeKind::Pow: {
            print_child(*n.a, out, Prec::Atom);
            out += '^';
            if (n.integer_exponent && n.exponent_int >= 0) {
                out += std::to_string(n.exponent_int);
            } else {
                out += '(';
                out += format_double(n.constant);
                out += ')';
            }
            return;
        }
    }
}

}  // namespace

Expr Expr::parse(std::string_view source, const std::vector<std::string>& symbols,
                 const std::map<std::string, double>& parameters) {
    for (const auto& s : symbols) {
        if (parameters.count(s))
            throw ParseError("name '" + s + "' is both a symbol and a parameter", 1);
    }
    Expr e;
    e.source_ = std::string(source);
    e.symbols_ = symbols;
    for (const auto& [name, value] : parameters) {
        e.param_names_.push_back(name);
        e.param_defaults_.push_back(value);
    }
    Parser p(e.source_, e.symbols_, parameters);
    e.root_ = p.run();
    return e;
}

std::string Expr::to_string() const {
    PrintContext ctx{&symbols_, &param_names_};
    g_print_ctx = &ctx;
    std::string out;
    print_node(*root_, out);
    g_print_ctx = nullptr;
    return out;
}

double Expr::eval(std::span<const double> vars) const {
    return eval(vars, param_defaults_);
}

double Expr::eval(std::span<const double> vars, std::span<const double> params) const {
    return eval_scalar<double>(vars, params);
}

Jet2 Expr::eval_jet2(std::span<const double> vars, std::span<const int> active) const {
    return eval_jet2(vars, active, param_defaults_);
}

Jet2 Expr::eval_jet2(std::span<const double> vars, std::span<const int> active,
                     std::span<const double> params) const {
    const int k = static_cast<int>(active.size());
    std::vector<Jet2> seeds;
    seeds.reserve(vars.size());
    for (int i = 0; i < static_cast<int>(vars.size()); ++i) {
        int slot = -1;
        for (int j = 0; j < k; ++j)
            if (active[j] == i) { slot = j; break; }
        seeds.push_back(slot >= 0 ? Jet2::variable(k, slot, vars[i]) : Jet2::constant(vars[i]));
    }
    return eval_scalar<Jet2>(seeds, params);
}

double Expr::eval_at(const std::map<std::string, double>& point) const {
    std::vector<double> vars(symbols_.size());
    for (size_t i = 0; i < symbols_.size(); ++i) {
        const auto it = point.find(symbols_[i]);
        if (it == point.end())
            throw std::invalid_argument("expression: no value for symbol '" + symbols_[i] + "'");
        vars[i] = it->second;
    }
    return eval(vars);
}

Jet2 Expr::eval_jet2_at(const std::map<std::string, double>& point,
                        const std::vector<std::string>& active) const {
    std::vector<double> vars(symbols_.size());
    for (size_t i = 0; i < symbols_.size(); ++i) {
        const auto it = point.find(symbols_[i]);
        if (it == point.end())
            throw std::invalid_argument("expression: no value for symbol '" + symbols_[i] + "'");
        vars[i] = it->second;
    }
    std::vector<int> idx;
    idx.reserve(active.size());
    for (const auto& name : active) {
        const auto it = std::find(symbols_.begin(), symbols_.end(), name);
        if (it == symbols_.end())
            throw std::invalid_argument("expression: unknown active symbol '" + name + "'");
        idx.push_back(static_cast<int>(it - symbols_.begin()));
    }
    return eval_jet2(vars, idx);
}

void Expr::domain_error(const detail::ExprNode& nd, const std::string& what) const {
    const std::string sub = source_.substr(nd.src_begin, nd.src_end - nd.src_begin);
    throw EvalError(what + " in '" + sub + "'", sub, nd.src_begin + 1);
}

}  // namespace hjsep
