#include "casorati/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace casorati {

namespace {

NodePtr make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Constant;
    n->number = v;
    return n;
}

NodePtr make_var(int idx) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Variable;
    n->var_index = idx;
    return n;
}

NodePtr make_param(std::string name, double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Parameter;
    n->param_name = std::move(name);
    n->number = v;
    return n;
}

NodePtr make_unary(NodeKind k, NodePtr child) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->left = std::move(child);
    return n;
}

/// Negation of a bare constant folds into the constant, so no tree ever holds
/// Neg(Constant); this keeps render/parse round trips structural.
NodePtr make_neg(NodePtr child) {
    if (child->kind == NodeKind::Constant) return make_const(-child->number);
    return make_unary(NodeKind::Neg, std::move(child));
}

NodePtr make_binary(NodeKind k, NodePtr l, NodePtr r) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->left = std::move(l);
    n->right = std::move(r);
    return n;
}

NodePtr make_call(FnCode fn, NodePtr arg) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Call;
    n->fn = fn;
    n->left = std::move(arg);
    return n;
}

constexpr std::array<std::pair<std::string_view, FnCode>, 9> kFunctions = {{
    {"sin", FnCode::Sin},
    {"cos", FnCode::Cos},
    {"tan", FnCode::Tan},
    {"exp", FnCode::Exp},
    {"log", FnCode::Log},
    {"sqrt", FnCode::Sqrt},
    {"sinh", FnCode::Sinh},
    {"cosh", FnCode::Cosh},
    {"atan", FnCode::Atan},
}};

std::string_view fn_name(FnCode fn) {
    for (const auto& [name, code] : kFunctions)
        if (code == fn) return name;
    return "?";
}

class Parser {
  public:
    Parser(std::string_view src, int n, const ParamMap& params)
        : src_(src), n_(n), params_(params) {}

    NodePtr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError(pos_, "an expression");
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ < src_.size()) throw SyntaxError(pos_, "end of input");
        return e;
    }

  private:
    std::string_view src_;
    int n_;
    const ParamMap& params_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr e = parse_term();
        for (;;) {
            if (eat('+'))
                e = make_binary(NodeKind::Add, e, parse_term());
            else if (eat('-'))
                e = make_binary(NodeKind::Sub, e, parse_term());
            else
                return e;
        }
    }

    NodePtr parse_term() {
        NodePtr e = parse_unary();
        for (;;) {
            if (eat('*'))
                e = make_binary(NodeKind::Mul, e, parse_unary());
            else if (eat('/'))
                e = make_binary(NodeKind::Div, e, parse_unary());
            else
                return e;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make_neg(parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) return make_binary(NodeKind::Pow, base, parse_unary());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError(pos_, "a number, identifier or '('");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            if (!eat(')')) throw SyntaxError(pos_, "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw SyntaxError(pos_, "a number, identifier or '('");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // lone 'e' is not an exponent
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (res.ec != std::errc{} || res.ptr != src_.data() + pos_)
            throw SyntaxError(start, "a number");
        return make_const(v);
    }

    NodePtr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_'))
            ++pos_;
        const std::string name(src_.substr(start, pos_ - start));

        if (peek() == '(') {
            for (const auto& [fname, code] : kFunctions) {
                if (name == fname) {
                    eat('(');
                    NodePtr arg = parse_expr();
                    if (!eat(')')) throw SyntaxError(pos_, "')'");
                    return make_call(code, arg);
                }
            }
            throw UnknownIdentifier(name, start, "not a known function");
        }

        if (name.size() >= 2 && name[0] == 'u') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (digits && name[1] != '0') {
                const long idx = std::strtol(name.c_str() + 1, nullptr, 10);
                if (idx >= 1 && idx <= n_) return make_var(static_cast<int>(idx - 1));
                throw UnknownIdentifier(name, start,
                                        "variable index exceeds dimension n=" + std::to_string(n_));
            }
        }
        if (auto it = params_.find(name); it != params_.end()) return make_param(name, it->second);
        if (name == "pi") return make_const(3.14159265358979323846);
        if (name == "e") return make_const(2.71828182845904523536);
        throw UnknownIdentifier(name, start);
    }
};

bool node_equal(const NodePtr& a, const NodePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case NodeKind::Constant:
            return a->number == b->number;
        case NodeKind::Variable:
            return a->var_index == b->var_index;
        case NodeKind::Parameter:
            return a->param_name == b->param_name && a->number == b->number;
        case NodeKind::Call:
            if (a->fn != b->fn) return false;
            return node_equal(a->left, b->left);
        case NodeKind::Neg:
            return node_equal(a->left, b->left);
        default:
            return node_equal(a->left, b->left) && node_equal(a->right, b->right);
    }
}

std::string render_number(double v) {
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void render_node(const NodePtr& n, std::string& out) {
    switch (n->kind) {
        case NodeKind::Constant:
            if (n->number < 0) {
                out += "(";
                out += render_number(n->number);
                out += ")";
            } else {
                out += render_number(n->number);
            }
            return;
        case NodeKind::Variable:
            out += "u" + std::to_string(n->var_index + 1);
            return;
        case NodeKind::Parameter:
            out += n->param_name;
            return;
        case NodeKind::Neg:
            out += "(-";
            render_node(n->left, out);
            out += ")";
            return;
        case NodeKind::Call:
            out += fn_name(n->fn);
            out += "(";
            render_node(n->left, out);
            out += ")";
            return;
        default: {
            const char* op = n->kind == NodeKind::Add   ? " + "
                             : n->kind == NodeKind::Sub ? " - "
                             : n->kind == NodeKind::Mul ? " * "
                             : n->kind == NodeKind::Div ? " / "
                                                        : " ^ ";
            out += "(";
            render_node(n->left, out);
            out += op;
            render_node(n->right, out);
            out += ")";
            return;
        }
    }
}

/// True when the node is a constant holding an integral value small enough for
/// the repeated-multiplication power path.
bool integer_constant(const NodePtr& n, long long& k) {
    if (!n || n->kind != NodeKind::Constant) return false;
    const double v = n->number;
    if (std::fabs(v) > 1e15) return false;
    const double r = std::nearbyint(v);
    if (std::fabs(v - r) > 1e-9) return false;
    k = static_cast<long long>(r);
    return true;
}

Jet2 eval_node(const ExprNode& n, std::span<const double> u) {
    const int dim = static_cast<int>(u.size());
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Parameter:
            return Jet2::constant(n.number, dim);
        case NodeKind::Variable:
            return Jet2::variable(n.var_index, u[n.var_index], dim);
        case NodeKind::Neg:
            return -eval_node(*n.left, u);
        case NodeKind::Add:
            return eval_node(*n.left, u) + eval_node(*n.right, u);
        case NodeKind::Sub:
            return eval_node(*n.left, u) - eval_node(*n.right, u);
        case NodeKind::Mul:
            return eval_node(*n.left, u) * eval_node(*n.right, u);
        case NodeKind::Div:
            return eval_node(*n.left, u) / eval_node(*n.right, u);
        case NodeKind::Pow: {
            long long k = 0;
            if (integer_constant(n.right, k)) return jet_powi(eval_node(*n.left, u), k);
            return jet_pow(eval_node(*n.left, u), eval_node(*n.right, u));
        }
        case NodeKind::Call: {
            const Jet2 x = eval_node(*n.left, u);
            switch (n.fn) {
                case FnCode::Sin: return jet_sin(x);
                case FnCode::Cos: return jet_cos(x);
                case FnCode::Tan: return jet_tan(x);
                case FnCode::Exp: return jet_exp(x);
                case FnCode::Log: return jet_log(x);
                case FnCode::Sqrt: return jet_sqrt(x);
                case FnCode::Sinh: return jet_sinh(x);
                case FnCode::Cosh: return jet_cosh(x);
                case FnCode::Atan: return jet_atan(x);
            }
            throw Error("unreachable");
        }
    }
    throw Error("unreachable");
}

double eval_value(const ExprNode& n, std::span<const double> u) {
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Parameter:
            return n.number;
        case NodeKind::Variable:
            return u[n.var_index];
        case NodeKind::Neg:
            return -eval_value(*n.left, u);
        case NodeKind::Add:
            return eval_value(*n.left, u) + eval_value(*n.right, u);
        case NodeKind::Sub:
            return eval_value(*n.left, u) - eval_value(*n.right, u);
        case NodeKind::Mul:
            return eval_value(*n.left, u) * eval_value(*n.right, u);
        case NodeKind::Div: {
            const double d = eval_value(*n.right, u);
            if (std::fabs(d) < 1e-300) throw DomainError("divide", d);
            return eval_value(*n.left, u) / d;
        }
        case NodeKind::Pow: {
            const double b = eval_value(*n.left, u);
            long long k = 0;
            if (integer_constant(n.right, k)) return std::pow(b, static_cast<double>(k));
            if (b <= 0.0) throw DomainError("pow", b);
            return std::pow(b, eval_value(*n.right, u));
        }
        case NodeKind::Call: {
            const double x = eval_value(*n.left, u);
            switch (n.fn) {
                case FnCode::Sin: return std::sin(x);
                case FnCode::Cos: return std::cos(x);
                case FnCode::Tan: return std::tan(x);
                case FnCode::Exp: return std::exp(x);
                case FnCode::Log:
                    if (x <= 0.0) throw DomainError("log", x);
                    return std::log(x);
                case FnCode::Sqrt:
                    if (x <= 0.0) throw DomainError("sqrt", x);
                    return std::sqrt(x);
                case FnCode::Sinh: return std::sinh(x);
                case FnCode::Cosh: return std::cosh(x);
                case FnCode::Atan: return std::atan(x);
            }
            throw Error("unreachable");
        }
    }
    throw Error("unreachable");
}

bool is_const(const NodePtr& n, double v) {
    return n->kind == NodeKind::Constant && n->number == v;
}

// peephole builders used by the symbolic derivative
NodePtr fold_add(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
        return make_const(a->number + b->number);
    return make_binary(NodeKind::Add, std::move(a), std::move(b));
}

NodePtr fold_sub(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return a;
    if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
        return make_const(a->number - b->number);
    if (is_const(a, 0.0)) return make_neg(std::move(b));
    return make_binary(NodeKind::Sub, std::move(a), std::move(b));
}

NodePtr fold_mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->kind == NodeKind::Constant && b->kind == NodeKind::Constant)
        return make_const(a->number * b->number);
    return make_binary(NodeKind::Mul, std::move(a), std::move(b));
}

NodePtr fold_div(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return make_const(0.0);
    if (is_const(b, 1.0)) return a;
    return make_binary(NodeKind::Div, std::move(a), std::move(b));
}

NodePtr fold_pow(NodePtr a, NodePtr b) {
    if (is_const(b, 1.0)) return a;
    if (is_const(b, 0.0)) return make_const(1.0);
    return make_binary(NodeKind::Pow, std::move(a), std::move(b));
}

NodePtr derive_node(const NodePtr& n, int var) {
    switch (n->kind) {
        case NodeKind::Constant:
        case NodeKind::Parameter:
            return make_const(0.0);
        case NodeKind::Variable:
            return make_const(n->var_index == var ? 1.0 : 0.0);
        case NodeKind::Neg:
            return make_neg(derive_node(n->left, var));
        case NodeKind::Add:
            return fold_add(derive_node(n->left, var), derive_node(n->right, var));
        case NodeKind::Sub:
            return fold_sub(derive_node(n->left, var), derive_node(n->right, var));
        case NodeKind::Mul:
            return fold_add(fold_mul(derive_node(n->left, var), n->right),
                            fold_mul(n->left, derive_node(n->right, var)));
        case NodeKind::Div:
            if (n->right->kind == NodeKind::Constant || n->right->kind == NodeKind::Parameter)
                return fold_div(derive_node(n->left, var), n->right);
            return fold_div(fold_sub(fold_mul(derive_node(n->left, var), n->right),
                                     fold_mul(n->left, derive_node(n->right, var))),
                            fold_mul(n->right, n->right));
        case NodeKind::Pow: {
            long long k = 0;
            if (integer_constant(n->right, k)) {
                if (k == 0) return make_const(0.0);
                return fold_mul(
                    fold_mul(make_const(static_cast<double>(k)),
                             fold_pow(n->left, make_const(static_cast<double>(k - 1)))),
                    derive_node(n->left, var));
            }
            // d(x^y) = x^y * (y' log x + y x'/x)
            return fold_mul(
                make_binary(NodeKind::Pow, n->left, n->right),
                fold_add(fold_mul(derive_node(n->right, var), make_call(FnCode::Log, n->left)),
                         fold_div(fold_mul(n->right, derive_node(n->left, var)), n->left)));
        }
        case NodeKind::Call: {
            NodePtr inner = derive_node(n->left, var);
            if (is_const(inner, 0.0)) return make_const(0.0);
            NodePtr outer;
            switch (n->fn) {
                case FnCode::Sin: outer = make_call(FnCode::Cos, n->left); break;
                case FnCode::Cos:
                    outer = make_neg(make_call(FnCode::Sin, n->left));
                    break;
                case FnCode::Tan:
                    outer = fold_add(make_const(1.0),
                                     fold_pow(make_call(FnCode::Tan, n->left), make_const(2.0)));
                    break;
                case FnCode::Exp: outer = make_call(FnCode::Exp, n->left); break;
                case FnCode::Log: return fold_div(inner, n->left);
                case FnCode::Sqrt:
                    return fold_div(inner, fold_mul(make_const(2.0),
                                                    make_call(FnCode::Sqrt, n->left)));
                case FnCode::Sinh: outer = make_call(FnCode::Cosh, n->left); break;
                case FnCode::Cosh: outer = make_call(FnCode::Sinh, n->left); break;
                case FnCode::Atan:
                    return fold_div(inner, fold_add(make_const(1.0),
                                                    fold_mul(n->left, n->left)));
            }
            return fold_mul(outer, inner);
        }
    }
    throw Error("unreachable");
}

}  // namespace

Expression Expression::parse(std::string_view src, int n, const ParamMap& params) {
    if (src.empty()) throw SyntaxError(0, "a nonempty expression");
    Parser p(src, n, params);
    return Expression(p.run(), n);
}

Jet2 Expression::eval_jet2(std::span<const double> u) const {
    if (static_cast<int>(u.size()) != arity_)
        throw DimensionMismatch("evaluation point has wrong dimension");
    return eval_node(*root_, u);
}

double Expression::eval(std::span<const double> u) const {
    if (static_cast<int>(u.size()) != arity_)
        throw DimensionMismatch("evaluation point has wrong dimension");
    return eval_value(*root_, u);
}

std::string Expression::render() const {
    std::string out;
    render_node(root_, out);
    return out;
}

Expression Expression::derivative(int var) const {
    return Expression(derive_node(root_, var), arity_);
}

bool Expression::operator==(const Expression& other) const {
    return arity_ == other.arity_ && node_equal(root_, other.root_);
}

}  // namespace casorati
