#include "dynkit/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace dynkit {

void Env::set(std::string_view name, double value) {
    for (auto& [n, v] : vars) {
        if (n == name) {
            v = value;
            return;
        }
    }
    vars.emplace_back(std::string(name), value);
}

const double* Env::find(std::string_view name) const {
    for (const auto& [n, v] : vars)
        if (n == name) return &v;
    return nullptr;
}

struct Expression::Node {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind;
    double value = 0.0;                                  // Number
    std::string name;                                    // Var / Call
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->value = v;
    return n;
}

NodePtr make_var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Var;
    n->name = std::move(name);
    return n;
}

NodePtr make_op(Node::Kind k, std::vector<NodePtr> args, std::string name = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->args = std::move(args);
    return n;
}

int function_arity(std::string_view fn) {
    if (fn == "sin" || fn == "cos" || fn == "tan" || fn == "exp" || fn == "log" || fn == "sqrt" ||
        fn == "abs" || fn == "floor")
        return 1;
    if (fn == "atan2" || fn == "min" || fn == "max") return 2;
    return -1;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = make_op(Node::Kind::Add, {lhs, parse_term()});
            else if (eat('-'))
                lhs = make_op(Node::Kind::Sub, {lhs, parse_term()});
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (eat('*'))
                lhs = make_op(Node::Kind::Mul, {lhs, parse_unary()});
            else if (eat('/'))
                lhs = make_op(Node::Kind::Div, {lhs, parse_unary()});
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make_op(Node::Kind::Neg, {parse_unary()});
        return parse_power();
    }

    // Right-associative, binds tighter than unary minus: -x^2 = -(x^2).
    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) return make_op(Node::Kind::Pow, {base, parse_unary()});
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark; // "e" was the constant or an identifier, not an exponent
            }
        }
        try {
            size_t used = 0;
            std::string tok(text_.substr(start, pos_ - start));
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument("");
            return make_number(v);
        } catch (const std::exception&) {
            throw ParseError("malformed number", start);
        }
    }

    NodePtr parse_ident() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (peek() == '(') {
            int arity = function_arity(name);
            if (arity < 0) throw ParseError("unknown function '" + name + "'", start);
            eat('(');
            std::vector<NodePtr> args;
            args.push_back(parse_sum());
            while (eat(',')) args.push_back(parse_sum());
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            if (static_cast<int>(args.size()) != arity)
                throw ParseError("function '" + name + "' takes " + std::to_string(arity) + " argument(s)",
                                 start);
            return make_op(Node::Kind::Call, std::move(args), name);
        }
        if (name == "pi") return make_number(M_PI);
        if (name == "e") return make_number(M_E);
        return make_var(std::move(name));
    }
};

double eval_node(const Node& n, const Env& env) {
    using K = Node::Kind;
    switch (n.kind) {
        case K::Number:
            return n.value;
        case K::Var: {
            const double* v = env.find(n.name);
            if (!v) throw DomainError("unbound variable '" + n.name + "'");
            return *v;
        }
        case K::Neg:
            return -eval_node(*n.args[0], env);
        case K::Add:
            return eval_node(*n.args[0], env) + eval_node(*n.args[1], env);
        case K::Sub:
            return eval_node(*n.args[0], env) - eval_node(*n.args[1], env);
        case K::Mul:
            return eval_node(*n.args[0], env) * eval_node(*n.args[1], env);
        case K::Div: {
            double a = eval_node(*n.args[0], env);
            double b = eval_node(*n.args[1], env);
            if (b == 0.0) throw DomainError("division by zero");
            return a / b;
        }
        case K::Pow: {
            double a = eval_node(*n.args[0], env);
            double b = eval_node(*n.args[1], env);
            if (a < 0.0 && b != std::floor(b))
                throw DomainError("negative base with non-integer exponent");
            if (a == 0.0 && b < 0.0) throw DomainError("zero base with negative exponent");
            return std::pow(a, b);
        }
        case K::Call: {
            double a = eval_node(*n.args[0], env);
            if (n.name == "sin") return std::sin(a);
            if (n.name == "cos") return std::cos(a);
            if (n.name == "tan") return std::tan(a);
            if (n.name == "exp") return std::exp(a);
            if (n.name == "abs") return std::fabs(a);
            if (n.name == "floor") return std::floor(a);
            if (n.name == "log") {
                if (a <= 0.0) throw DomainError("log of non-positive value " + std::to_string(a));
                return std::log(a);
            }
            if (n.name == "sqrt") {
                if (a < 0.0) throw DomainError("sqrt of negative value " + std::to_string(a));
                return std::sqrt(a);
            }
            double b = eval_node(*n.args[1], env);
            if (n.name == "atan2") return std::atan2(a, b);
            if (n.name == "min") return std::min(a, b);
            if (n.name == "max") return std::max(a, b);
            throw DomainError("unknown function '" + n.name + "'");
        }
    }
    throw DomainError("corrupt expression node");
}

void collect_vars(const Node& n, std::set<std::string>& out) {
    if (n.kind == Node::Kind::Var) out.insert(n.name);
    for (const auto& a : n.args) collect_vars(*a, out);
}

void print_node(const Node& n, std::ostream& os) {
    using K = Node::Kind;
    auto binary = [&](const char* op) {
        os << "(";
        print_node(*n.args[0], os);
        os << " " << op << " ";
        print_node(*n.args[1], os);
        os << ")";
    };
    switch (n.kind) {
        case K::Number: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << n.value;
            os << tmp.str();
            break;
        }
        case K::Var:
            os << n.name;
            break;
        case K::Neg:
            os << "(-";
            print_node(*n.args[0], os);
            os << ")";
            break;
        case K::Add:
            binary("+");
            break;
        case K::Sub:
            binary("-");
            break;
        case K::Mul:
            binary("*");
            break;
        case K::Div:
            binary("/");
            break;
        case K::Pow:
            binary("^");
            break;
        case K::Call:
            os << n.name << "(";
            for (size_t i = 0; i < n.args.size(); ++i) {
                if (i) os << ", ";
                print_node(*n.args[i], os);
            }
            os << ")";
            break;
    }
}

bool nodes_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) return false;
    if (a.kind == Node::Kind::Number && a.value != b.value) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!nodes_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

} // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.root_ = Parser(text).run();
    e.source_ = std::string(text);
    return e;
}

double Expression::eval(const Env& env) const {
    if (!root_) throw DomainError("evaluating empty expression");
    return eval_node(*root_, env);
}

std::set<std::string> Expression::free_variables() const {
    std::set<std::string> out;
    if (root_) collect_vars(*root_, out);
    return out;
}

std::string Expression::to_string() const {
    if (!root_) return "";
    std::ostringstream os;
    print_node(*root_, os);
    return os.str();
}

bool Expression::structurally_equal(const Expression& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return nodes_equal(*root_, *other.root_);
}

} // namespace dynkit
