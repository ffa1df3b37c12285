#ifndef DYNKIT_EXPR_HPP
#define DYNKIT_EXPR_HPP

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dynkit/errors.hpp"

namespace dynkit {

/// Malformed expression source. Carries the 0-based character offset.
struct ParseError : Error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// Variable bindings for evaluation. Linear search; expressions here have at
/// most a handful of variables and this sits in integrator inner loops.
struct Env {
    std::vector<std::pair<std::string, double>> vars;

    void set(std::string_view name, double value);
    const double* find(std::string_view name) const;
};

/// Immutable scalar arithmetic expression over named variables.
///
/// Grammar (precedence lowest to highest): +,- ; *,/ ; unary - ; ^
/// (right-associative); parentheses. An identifier followed by "(" is a
/// function call, otherwise a variable. Constants pi and e are recognized.
/// Functions: sin cos tan exp log sqrt abs floor (1 arg), atan2 min max (2).
class Expression {
public:
    Expression() = default;

    static Expression parse(std::string_view text); // throws ParseError

    double eval(const Env& env) const; // throws DomainError
    std::set<std::string> free_variables() const;
    std::string to_string() const;
    bool structurally_equal(const Expression& other) const;

    bool valid() const { return root_ != nullptr; }
    const std::string& source() const { return source_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

} // namespace dynkit

#endif
