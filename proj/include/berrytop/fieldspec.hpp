#pragma once

// Small arithmetic language for user-defined effective fields b(k).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
//
// Functions: sin, cos, sqrt, abs. Variables: kx, ky, kz plus declared
// parameters. Errors carry 0-based byte offsets into the source string.

#include "berrytop/errors.hpp"
#include "berrytop/types.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace berrytop {

using ParamMap = std::map<std::string, double>;

enum class TokenKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t position;
    double number = 0.0;
};

const char* to_string(TokenKind kind);

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Sqrt, Abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    struct Const {
        double value;
    };
    struct Var {
        std::string name;
    };
    struct Neg {
        ExprPtr operand;
    };
    struct Binary {
        BinaryOp op;
        ExprPtr lhs;
        ExprPtr rhs;
    };
    struct Call {
        Function fn;
        ExprPtr arg;
    };

    std::variant<Const, Var, Neg, Binary, Call> node;
    std::size_t position = 0;

    static ExprPtr constant(double value, std::size_t position = 0);
    static ExprPtr variable(std::string name, std::size_t position = 0);
    static ExprPtr negate(ExprPtr operand, std::size_t position = 0);
    static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, std::size_t position = 0);
    static ExprPtr call(Function fn, ExprPtr arg, std::size_t position = 0);
};

std::vector<Token> tokenize(std::string_view source);
ExprPtr parse_expr(const std::vector<Token>& tokens);
ExprPtr parse_expr(std::string_view source);

/// Evaluates with kx, ky, kz bound from `k`. Parameters shadow nothing:
/// the names kx/ky/kz are reserved.
double eval_expr(const Expr& e, const KVector& k, const ParamMap& params);

/// Prints with the minimum parentheses needed to reparse the same tree.
/// Numbers use the shortest round-trip representation.
std::string to_source(const Expr& e);

/// Fully parenthesized prefix form, e.g. "(+ kx (* ky kz))".
std::string to_sexpr(const Expr& e);

/// Identifiers referenced anywhere in the tree, with the first position.
std::map<std::string, std::size_t> referenced_identifiers(const Expr& e);

bool is_reserved_name(std::string_view name);

struct FieldSpec {
    std::string name;
    ParamMap params;
    std::string bx_source, by_source, bz_source;
    ExprPtr bx, by, bz;

    BVector evaluate(const KVector& k) const;
};

/// Builds a FieldSpec from the three component sources and checks that
/// every identifier resolves against {kx, ky, kz} and `params`.
FieldSpec make_field_spec(std::string name, ParamMap params, std::string bx, std::string by, std::string bz);

/// Accepts {"name": str, "params": {str: number}, "bx": str, "by": str, "bz": str}.
/// Missing components default to "0"; missing name defaults to "custom".
FieldSpec parse_field_spec(const nlohmann::json& document);

nlohmann::json to_json(const FieldSpec& spec);

}  // namespace berrytop
