#include "berrytop/fieldspec.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace berrytop;

namespace {

double eval(std::string_view src, KVector k = {}, const ParamMap& p = {}) { return eval_expr(*parse_expr(src), k, p); }

template <typename E>
std::size_t error_position(std::string_view src) {
    try {
        (void)parse_expr(src);
    } catch (const E& e) {
        return e.position();
    }
    ADD_FAILURE() << "no error for '" << src << "'";
    return static_cast<std::size_t>(-1);
}

ExprPtr random_tree(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    switch (pick(rng)) {
        case 0: {
            std::uniform_int_distribution<int> n(0, 40);
            return Expr::constant(n(rng) / 8.0);
        }
        case 1: {
            static const char* names[] = {"kx", "ky", "kz", "a"};
            return Expr::variable(names[std::uniform_int_distribution<int>(0, 3)(rng)]);
        }
        case 2: return Expr::negate(random_tree(rng, depth - 1));
        case 3: return Expr::call(static_cast<Function>(std::uniform_int_distribution<int>(0, 3)(rng)), random_tree(rng, depth - 1));
        default: {
            const auto op = static_cast<BinaryOp>(std::uniform_int_distribution<int>(0, 4)(rng));
            if (op == BinaryOp::Pow)
                return Expr::binary(op, random_tree(rng, depth - 1),
                                    Expr::constant(std::uniform_int_distribution<int>(0, 3)(rng)));
            return Expr::binary(op, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        }
    }
}

}  // namespace

TEST(Lexer, TokenKindsAndPositions) {
    const auto t = tokenize("kx*2.5e1 + (ky)");
    ASSERT_EQ(t.size(), 8u);
    EXPECT_EQ(t[0].kind, TokenKind::Ident);
    EXPECT_EQ(t[1].kind, TokenKind::Star);
    EXPECT_EQ(t[2].kind, TokenKind::Number);
    EXPECT_DOUBLE_EQ(t[2].number, 25.0);
    EXPECT_EQ(t[4].position, 11u);
    EXPECT_EQ(t.back().kind, TokenKind::End);
}

TEST(Lexer, ImplicitMultiplicationRejected) { EXPECT_EQ(error_position<LexError>("2kx"), 1u); }

TEST(Lexer, IllegalCharacter) { EXPECT_EQ(error_position<LexError>("kx # 2"), 3u); }

TEST(Parser, Precedence) {
    EXPECT_DOUBLE_EQ(eval("2+3*4"), 14.0);
    EXPECT_DOUBLE_EQ(eval("(2+3)*4"), 20.0);
    EXPECT_DOUBLE_EQ(eval("2^3^2"), 512.0);
    EXPECT_DOUBLE_EQ(eval("-2^2"), -4.0);
    EXPECT_DOUBLE_EQ(eval("2*-3"), -6.0);
    EXPECT_DOUBLE_EQ(eval("8/4/2"), 1.0);
    EXPECT_DOUBLE_EQ(eval("10-4-3"), 3.0);
    EXPECT_DOUBLE_EQ(eval("2^-1"), 0.5);
}

TEST(Parser, SexprShowsTreeShape) {
    EXPECT_EQ(to_sexpr(*parse_expr("kx + ky*kz")), "(+ kx (* ky kz))");
    EXPECT_EQ(to_sexpr(*parse_expr("kx^2^3")), "(^ kx (^ 2 3))");
}

TEST(Parser, VariablesParamsAndFunctions) {
    const KVector k{0.5, -2.0, 3.0};
    EXPECT_DOUBLE_EQ(eval("eta*kx - ky^2 + kz", k, {{"eta", 4.0}}), 2.0 - 4.0 + 3.0);
    EXPECT_NEAR(eval("sin(kx)^2 + cos(kx)^2", k), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(eval("sqrt(abs(ky))*sqrt(2)", k), 2.0);
}

TEST(Parser, SyntaxErrorPositions) {
    EXPECT_EQ(error_position<SyntaxError>("kx + * ky"), 5u);
    EXPECT_EQ(error_position<SyntaxError>("(kx + ky"), 8u);
    EXPECT_EQ(error_position<SyntaxError>("kx ky"), 3u);
    EXPECT_EQ(error_position<SyntaxError>(""), 0u);
    EXPECT_EQ(error_position<SyntaxError>("tan(kx)"), 0u);
}

TEST(Eval, UnknownNameIsPositioned) {
    try {
        (void)eval("kx + foo");
        FAIL();
    } catch (const NameError& e) {
        EXPECT_EQ(e.identifier(), "foo");
        EXPECT_EQ(e.position(), 5u);
    }
}

TEST(Eval, DomainErrors) {
    EXPECT_THROW((void)eval("1/kx"), EvalError);
    EXPECT_THROW((void)eval("sqrt(-1)"), EvalError);
    EXPECT_THROW((void)eval("kx^-1"), EvalError);
    EXPECT_THROW((void)eval("(0-2)^0.5"), EvalError);
    EXPECT_DOUBLE_EQ(eval("kx^0"), 1.0);
}

TEST(Eval, IntegerPowersAreExactProducts) {
    const KVector k{1.1, 0, 0};
    EXPECT_EQ(eval("kx^3", k), 1.1 * 1.1 * 1.1);
    EXPECT_NEAR(eval("kx^100", k), std::pow(1.1, 100), 1e-12 * std::pow(1.1, 100));
}

TEST(Printer, RoundTripPreservesTreeAndValue) {
    std::mt19937_64 rng(7);
    const ParamMap params{{"a", 0.75}};
    const KVector k{0.3, -1.2, 0.9};
    for (int i = 0; i < 1000; ++i) {
        const ExprPtr tree = random_tree(rng, 5);
        const std::string src = to_source(*tree);
        const ExprPtr back = parse_expr(src);
        ASSERT_EQ(to_sexpr(*back), to_sexpr(*tree)) << src;
        double a = 0, b = 0;
        bool ta = false, tb = false;
        try { a = eval_expr(*tree, k, params); } catch (const EvalError&) { ta = true; }
        try { b = eval_expr(*back, k, params); } catch (const EvalError&) { tb = true; }
        ASSERT_EQ(ta, tb) << src;
        if (!ta && std::isfinite(a)) ASSERT_EQ(a, b) << src;
    }
}

TEST(Parser, TotalOnArbitraryInput) {
    std::mt19937_64 rng(11);
    const std::string alphabet = "kxyz0123456789.e+-*/^() ,abc#";
    for (int i = 0; i < 5000; ++i) {
        std::string s(std::uniform_int_distribution<int>(0, 16)(rng), ' ');
        for (char& c : s) c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
        try {
            (void)parse_expr(s);
        } catch (const ParseError& e) {
            EXPECT_LE(e.position(), s.size()) << s;
        }
    }
}

TEST(FieldSpecJson, ParsesAndDefaults) {
    const auto spec = parse_field_spec(nlohmann::json::parse(R"({"name":"g","params":{"d":0.5},"bx":"ky","bz":"d"})"));
    EXPECT_EQ(spec.name, "g");
    const BVector b = spec.evaluate({1.0, 2.0, 3.0});
    EXPECT_DOUBLE_EQ(b.bx, 2.0);
    EXPECT_DOUBLE_EQ(b.by, 0.0);
    EXPECT_DOUBLE_EQ(b.bz, 0.5);
    const auto again = parse_field_spec(to_json(spec));
    EXPECT_EQ(again.bz_source, spec.bz_source);
}

TEST(FieldSpecJson, ErrorsNameComponent) {
    try {
        (void)parse_field_spec(nlohmann::json::parse(R"({"bx":"kx","by":"kx + * 2"})"));
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.component(), "by");
        EXPECT_EQ(e.position(), 5u);
        EXPECT_NE(std::string(e.what()).find("by"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("byte 5"), std::string::npos);
    }
    EXPECT_THROW((void)parse_field_spec(nlohmann::json::parse(R"({"bq":"kx"})")), InvalidArgument);
    EXPECT_THROW((void)make_field_spec("x", {{"kx", 1.0}}, "kx", "0", "0"), InvalidArgument);
    EXPECT_THROW((void)make_field_spec("x", {}, "q*kx", "0", "0"), NameError);
}
