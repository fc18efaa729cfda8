#include "berrytop/fieldspec.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>

namespace berrytop {

namespace {

constexpr std::array<std::string_view, 4> kFunctionNames = {"sin", "cos", "sqrt", "abs"};

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::optional<Function> function_from_name(std::string_view name) {
    if (name == "sin") return Function::Sin;
    if (name == "cos") return Function::Cos;
    if (name == "sqrt") return Function::Sqrt;
    if (name == "abs") return Function::Abs;
    return std::nullopt;
}

const char* function_name(Function fn) {
    switch (fn) {
        case Function::Sin: return "sin";
        case Function::Cos: return "cos";
        case Function::Sqrt: return "sqrt";
        case Function::Abs: return "abs";
    }
    return "?";
}

const char* op_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Pow: return "^";
    }
    return "?";
}

// Scans a number starting at `i`: digits [. digits] [(e|E) [+|-] digits].
// Returns the end offset.
std::size_t scan_number(std::string_view s, std::size_t i) {
    const std::size_t start = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
    }
    if (i == start + 1 && s[start] == '.') throw LexError("malformed number '.'", start);
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j >= s.size() || !is_digit(s[j])) throw LexError("malformed exponent in number", i);
        while (j < s.size() && is_digit(s[j])) ++j;
        i = j;
    }
    return i;
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    ExprPtr parse() {
        if (tokens_.empty() || tokens_.back().kind != TokenKind::End)
            throw SyntaxError("token stream is not terminated", tokens_.empty() ? 0 : tokens_.back().position);
        ExprPtr e = expression();
        if (peek().kind != TokenKind::End) fail("end of input");
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        std::string found = t.kind == TokenKind::End ? std::string("end of input") : "'" + t.lexeme + "'";
        throw SyntaxError("expected " + expected + ", found " + found, t.position);
    }

    ExprPtr expression() {
        ExprPtr lhs = term();
        while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
            const Token& op = advance();
            ExprPtr rhs = term();
            lhs = Expr::binary(op.kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub, lhs, rhs, op.position);
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = unary();
        while (peek().kind == TokenKind::Star || peek().kind == TokenKind::Slash) {
            const Token& op = advance();
            ExprPtr rhs = unary();
            lhs = Expr::binary(op.kind == TokenKind::Star ? BinaryOp::Mul : BinaryOp::Div, lhs, rhs, op.position);
        }
        return lhs;
    }

    ExprPtr unary() {
        if (peek().kind == TokenKind::Minus) {
            const std::size_t at = advance().position;
            return Expr::negate(unary(), at);
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (peek().kind == TokenKind::Caret) {
            const std::size_t at = advance().position;
            return Expr::binary(BinaryOp::Pow, base, unary(), at);
        }
        return base;
    }

    ExprPtr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Number:
                advance();
                return Expr::constant(t.number, t.position);
            case TokenKind::Ident: {
                advance();
                if (peek().kind == TokenKind::LParen) {
                    auto fn = function_from_name(t.lexeme);
                    if (!fn) throw SyntaxError("unknown function '" + t.lexeme + "'", t.position);
                    advance();
                    ExprPtr arg = expression();
                    if (peek().kind != TokenKind::RParen) fail("')'");
                    advance();
                    return Expr::call(*fn, arg, t.position);
                }
                if (function_from_name(t.lexeme)) fail("'(' after function name '" + t.lexeme + "'");
                return Expr::variable(t.lexeme, t.position);
            }
            case TokenKind::LParen: {
                advance();
                ExprPtr inner = expression();
                if (peek().kind != TokenKind::RParen) fail("')'");
                advance();
                return inner;
            }
            default:
                fail("number, identifier or '('");
        }
    }

    const std::vector<Token>& tokens_;
    std::size_t pos_ = 0;
};

// Binding strength used by the printer; larger binds tighter.
enum Prec : int { kAdd = 1, kMul = 2, kNeg = 3, kPow = 4, kAtom = 5 };

int precedence(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Binary>) {
                switch (n.op) {
                    case BinaryOp::Add:
                    case BinaryOp::Sub: return kAdd;
                    case BinaryOp::Mul:
                    case BinaryOp::Div: return kMul;
                    case BinaryOp::Pow: return kPow;
                }
                return kAtom;
            } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                return kNeg;
            } else {
                return kAtom;
            }
        },
        e.node);
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string wrap_if(bool cond, std::string s) { return cond ? "(" + s + ")" : s; }

double integer_power(double base, long long n) {
    const bool negative = n < 0;
    const unsigned long long e = negative ? static_cast<unsigned long long>(-(n + 1)) + 1ULL : static_cast<unsigned long long>(n);
    double result = 1.0;
    if (e <= 64) {
        for (unsigned long long i = 0; i < e; ++i) result *= base;
    } else {
        double x = base;
        for (unsigned long long r = e; r > 0; r >>= 1ULL) {
            if (r & 1ULL) result *= x;
            x *= x;
        }
    }
    return negative ? 1.0 / result : result;
}

}  // namespace

const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Number: return "Number";
        case TokenKind::Ident: return "Ident";
        case TokenKind::Plus: return "Plus";
        case TokenKind::Minus: return "Minus";
        case TokenKind::Star: return "Star";
        case TokenKind::Slash: return "Slash";
        case TokenKind::Caret: return "Caret";
        case TokenKind::LParen: return "LParen";
        case TokenKind::RParen: return "RParen";
        case TokenKind::Comma: return "Comma";
        case TokenKind::End: return "End";
    }
    return "?";
}

ExprPtr Expr::constant(double value, std::size_t position) {
    return std::make_shared<const Expr>(Expr{Const{value}, position});
}
ExprPtr Expr::variable(std::string name, std::size_t position) {
    return std::make_shared<const Expr>(Expr{Var{std::move(name)}, position});
}
ExprPtr Expr::negate(ExprPtr operand, std::size_t position) {
    return std::make_shared<const Expr>(Expr{Neg{std::move(operand)}, position});
}
ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, std::size_t position) {
    return std::make_shared<const Expr>(Expr{Binary{op, std::move(lhs), std::move(rhs)}, position});
}
ExprPtr Expr::call(Function fn, ExprPtr arg, std::size_t position) {
    return std::make_shared<const Expr>(Expr{Call{fn, std::move(arg)}, position});
}

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < source.size()) {
        const char c = source[i];
        if (is_space(c)) {
            ++i;
            continue;
        }
        if (is_digit(c) || (c == '.' && i + 1 < source.size() && is_digit(source[i + 1]))) {
            const std::size_t end = scan_number(source, i);
            if (end < source.size() && is_ident_start(source[end]))
                throw LexError("identifier directly after number (implicit multiplication is not supported)", end);
            const std::string lexeme(source.substr(i, end - i));
            char* parse_end = nullptr;
            const double value = std::strtod(lexeme.c_str(), &parse_end);
            if (!std::isfinite(value)) throw LexError("number out of range '" + lexeme + "'", i);
            out.push_back({TokenKind::Number, lexeme, i, value});
            i = end;
            continue;
        }
        if (is_ident_start(c)) {
            std::size_t end = i + 1;
            while (end < source.size() && is_ident_char(source[end])) ++end;
            out.push_back({TokenKind::Ident, std::string(source.substr(i, end - i)), i});
            i = end;
            continue;
        }
        TokenKind kind;
        switch (c) {
            case '+': kind = TokenKind::Plus; break;
            case '-': kind = TokenKind::Minus; break;
            case '*': kind = TokenKind::Star; break;
            case '/': kind = TokenKind::Slash; break;
            case '^': kind = TokenKind::Caret; break;
            case '(': kind = TokenKind::LParen; break;
            case ')': kind = TokenKind::RParen; break;
            case ',': kind = TokenKind::Comma; break;
            default: {
                const auto byte = static_cast<unsigned char>(c);
                std::string shown = byte >= 0x20 && byte < 0x7f ? std::string(1, c) : "\\x" + std::to_string(byte);
                throw LexError("illegal character '" + shown + "'", i);
            }
        }
        out.push_back({kind, std::string(1, c), i});
        ++i;
    }
    out.push_back({TokenKind::End, "", source.size()});
    return out;
}

ExprPtr parse_expr(const std::vector<Token>& tokens) { return Parser(tokens).parse(); }

ExprPtr parse_expr(std::string_view source) { return parse_expr(tokenize(source)); }

double eval_expr(const Expr& e, const KVector& k, const ParamMap& params) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Const>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                if (n.name == "kx") return k.kx;
                if (n.name == "ky") return k.ky;
                if (n.name == "kz") return k.kz;
                auto it = params.find(n.name);
                if (it == params.end()) throw NameError(n.name, e.position);
                return it->second;
            } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                return -eval_expr(*n.operand, k, params);
            } else if constexpr (std::is_same_v<T, Expr::Call>) {
                const double x = eval_expr(*n.arg, k, params);
                switch (n.fn) {
                    case Function::Sin: return std::sin(x);
                    case Function::Cos: return std::cos(x);
                    case Function::Abs: return std::abs(x);
                    case Function::Sqrt:
                        if (x < 0.0) throw EvalError("sqrt of negative value", e.position);
                        return std::sqrt(x);
                }
                return 0.0;
            } else {
                const double a = eval_expr(*n.lhs, k, params);
                const double b = eval_expr(*n.rhs, k, params);
                switch (n.op) {
                    case BinaryOp::Add: return a + b;
                    case BinaryOp::Sub: return a - b;
                    case BinaryOp::Mul: return a * b;
                    case BinaryOp::Div:
                        if (b == 0.0) throw EvalError("division by zero", e.position);
                        return a / b;
                    case BinaryOp::Pow: {
                        if (b == std::trunc(b) && std::abs(b) < 9.0e15) {
                            if (a == 0.0 && b < 0.0) throw EvalError("division by zero (zero to a negative power)", e.position);
                            return integer_power(a, static_cast<long long>(b));
                        }
                        if (!(a > 0.0)) throw EvalError("non-integer power of a non-positive base", e.position);
                        return std::exp(b * std::log(a));
                    }
                }
                return 0.0;
            }
        },
        e.node);
}

std::string to_source(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Const>) {
                return format_number(n.value);
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                return "-" + wrap_if(precedence(*n.operand) < kNeg, to_source(*n.operand));
            } else if constexpr (std::is_same_v<T, Expr::Call>) {
                return std::string(function_name(n.fn)) + "(" + to_source(*n.arg) + ")";
            } else {
                const int p = precedence(e);
                const int lp = precedence(*n.lhs);
                const int rp = precedence(*n.rhs);
                std::string lhs, rhs;
                if (n.op == BinaryOp::Pow) {
                    lhs = wrap_if(lp <= kPow, to_source(*n.lhs));
                    rhs = wrap_if(rp < kNeg, to_source(*n.rhs));
                } else {
                    lhs = wrap_if(lp < p, to_source(*n.lhs));
                    rhs = wrap_if(rp <= p, to_source(*n.rhs));
                }
                return lhs + " " + op_symbol(n.op) + " " + rhs;
            }
        },
        e.node);
}

std::string to_sexpr(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Const>) {
                return format_number(n.value);
            } else if constexpr (std::is_same_v<T, Expr::Var>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                return "(neg " + to_sexpr(*n.operand) + ")";
            } else if constexpr (std::is_same_v<T, Expr::Call>) {
                return "(" + std::string(function_name(n.fn)) + " " + to_sexpr(*n.arg) + ")";
            } else {
                return "(" + std::string(op_symbol(n.op)) + " " + to_sexpr(*n.lhs) + " " + to_sexpr(*n.rhs) + ")";
            }
        },
        e.node);
}

std::map<std::string, std::size_t> referenced_identifiers(const Expr& e) {
    std::map<std::string, std::size_t> out;
    auto walk = [&](auto&& self, const Expr& x) -> void {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Expr::Var>) {
                    out.emplace(n.name, x.position);
                } else if constexpr (std::is_same_v<T, Expr::Neg>) {
                    self(self, *n.operand);
                } else if constexpr (std::is_same_v<T, Expr::Call>) {
                    self(self, *n.arg);
                } else if constexpr (std::is_same_v<T, Expr::Binary>) {
                    self(self, *n.lhs);
                    self(self, *n.rhs);
                }
            },
            x.node);
    };
    walk(walk, e);
    return out;
}

bool is_reserved_name(std::string_view name) {
    if (name == "kx" || name == "ky" || name == "kz") return true;
    for (auto fn : kFunctionNames)
        if (name == fn) return true;
    return false;
}

BVector FieldSpec::evaluate(const KVector& k) const {
    BVector b;
    const std::pair<const ExprPtr*, double*> parts[] = {{&bx, &b.bx}, {&by, &b.by}, {&bz, &b.bz}};
    const char* names[] = {"bx", "by", "bz"};
    for (int i = 0; i < 3; ++i) {
        try {
            *parts[i].second = eval_expr(**parts[i].first, k, params);
        } catch (const ParseError& err) {
            err.rethrow_with_component(names[i]);
        }
    }
    return b;
}

FieldSpec make_field_spec(std::string name, ParamMap params, std::string bx, std::string by, std::string bz) {
    for (const auto& [key, value] : params) {
        if (key.empty() || !is_ident_start(key[0]) ||
            !std::all_of(key.begin(), key.end(), [](char c) { return is_ident_char(c); }))
            throw InvalidArgument("parameter name '" + key + "' is not a valid identifier");
        if (is_reserved_name(key)) throw InvalidArgument("parameter name '" + key + "' is reserved");
        if (!std::isfinite(value)) throw InvalidArgument("parameter '" + key + "' is not finite");
    }
    FieldSpec spec;
    spec.name = std::move(name);
    spec.params = std::move(params);
    spec.bx_source = std::move(bx);
    spec.by_source = std::move(by);
    spec.bz_source = std::move(bz);
    const std::pair<const std::string*, ExprPtr*> parts[] = {
        {&spec.bx_source, &spec.bx}, {&spec.by_source, &spec.by}, {&spec.bz_source, &spec.bz}};
    const char* names[] = {"bx", "by", "bz"};
    for (int i = 0; i < 3; ++i) {
        try {
            *parts[i].second = parse_expr(*parts[i].first);
            for (const auto& [ident, pos] : referenced_identifiers(**parts[i].second)) {
                if (ident == "kx" || ident == "ky" || ident == "kz") continue;
                if (!spec.params.count(ident)) throw NameError(ident, pos);
            }
        } catch (const ParseError& err) {
            err.rethrow_with_component(names[i]);
        }
    }
    return spec;
}

FieldSpec parse_field_spec(const nlohmann::json& document) {
    if (!document.is_object()) throw InvalidArgument("field spec must be a JSON object");
    auto component = [&](const char* key) -> std::string {
        if (!document.contains(key)) return "0";
        const auto& v = document.at(key);
        if (!v.is_string()) throw InvalidArgument(std::string("field spec key '") + key + "' must be a string");
        return v.get<std::string>();
    };
    std::string name = "custom";
    if (document.contains("name")) {
        if (!document.at("name").is_string()) throw InvalidArgument("field spec key 'name' must be a string");
        name = document.at("name").get<std::string>();
    }
    ParamMap params;
    if (document.contains("params")) {
        const auto& p = document.at("params");
        if (!p.is_object()) throw InvalidArgument("field spec key 'params' must be an object of numbers");
        for (const auto& [key, value] : p.items()) {
            if (!value.is_number()) throw InvalidArgument("parameter '" + key + "' must be a number");
            params[key] = value.get<double>();
        }
    }
    for (const auto& [key, value] : document.items()) {
        if (key != "name" && key != "params" && key != "bx" && key != "by" && key != "bz")
            throw InvalidArgument("unknown field spec key '" + key + "'");
    }
    return make_field_spec(std::move(name), std::move(params), component("bx"), component("by"), component("bz"));
}

nlohmann::json to_json(const FieldSpec& spec) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : spec.params) params[k] = v;
    return {{"name", spec.name}, {"params", params}, {"bx", spec.bx_source}, {"by", spec.by_source}, {"bz", spec.bz_source}};
}

}  // namespace berrytop
