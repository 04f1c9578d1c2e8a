#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "elemrank/parse.hpp"

#include "gen.hpp"

using namespace elemrank;

namespace {
Ordinal fin(long long n) { return Ordinal::from_int(BigInt(n)); }
}

TEST_CASE("ordinal grammar basics") {
    CHECK(parse_ordinal("w*2+1") == add(mul(Ordinal::omega(), fin(2)), fin(1)));
    CHECK(parse_ordinal("w^(w)+w^2*3")
          == add(pow(Ordinal::omega(), Ordinal::omega()), Ordinal::omega_power(fin(2), 3)));
    CHECK(parse_ordinal("1+w") == Ordinal::omega()); // absorbed on parse
    CHECK(parse_ordinal("  w ^ w  ") == pow(Ordinal::omega(), Ordinal::omega()));
    CHECK(parse_ordinal("0") == Ordinal());
    CHECK(parse_ordinal("w*0+5") == fin(5));
    CHECK(parse_ordinal("2^w") == Ordinal::omega());
}

TEST_CASE("ordinal parse errors carry positions") {
    try {
        parse_ordinal("w^(w+1");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() <= std::string("w^(w+1").size());
        CHECK(e.expected() == "')'");
    }
    CHECK_THROWS_AS(parse_ordinal(""), ParseError);
    CHECK_THROWS_AS(parse_ordinal("q"), ParseError);
    CHECK_THROWS_AS(parse_ordinal("w+"), ParseError);
    CHECK_THROWS_AS(parse_ordinal("w w"), ParseError);
}

TEST_CASE("ordinal print/parse round trip") {
    gen::Rng rng(5150);
    for (int i = 0; i < 10000; ++i) {
        Ordinal a = gen::random_ordinal(rng, 4);
        CHECK(parse_ordinal(to_string(a)) == a);
    }
}

TEST_CASE("group expression grammar") {
    CHECK(parse_group_expr("EX(Seed(g))") == GroupExpr::ex(GroupExpr::seed("g")));
    CHECK(parse_group_expr("Wr(Pow(F(2,g),2), F(1,g))")
          == GroupExpr::wreath(GroupExpr::power(GroupExpr::fn(2, "g"), 2),
                               GroupExpr::fn(1, "g")));
    CHECK(parse_group_expr("LDP(Profinite(p), inf)")
          == GroupExpr::ldp_infinite(GroupExpr::profinite("p")));
    CHECK(parse_group_expr("Discrete(d, fg, perfect)") == GroupExpr::discrete("d", true, true));
    CHECK(parse_group_expr("Pow(Seed(g), 0)") == GroupExpr::trivial());
    CHECK(parse_group_expr("F(0, g)") == GroupExpr::seed("g"));
    CHECK(parse_group_expr(" Prod( Trivial , Seed(g) ) ")
          == GroupExpr::prod({GroupExpr::trivial(), GroupExpr::seed("g")}));
}

TEST_CASE("group expression arity and constructor errors") {
    try {
        parse_group_expr("Ext(F(1,g))");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.expected().find("Ext expects 2 arguments") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_group_expr("Frob(x)"), ParseError);
    CHECK_THROWS_AS(parse_group_expr("Wr(Seed(g))"), ParseError);
    CHECK_THROWS_AS(parse_group_expr("EX(Seed(g)) trailing"), ParseError);
    CHECK_THROWS_AS(parse_group_expr("LDP(Seed(g), many)"), ParseError);
    CHECK_THROWS_AS(parse_group_expr("Discrete(d, huge)"), ParseError);
}

TEST_CASE("group expression print/parse round trip") {
    gen::Rng rng(8675309);
    for (int i = 0; i < 10000; ++i) {
        GroupExpr e = gen::random_group_expr(rng, 3);
        CHECK(parse_group_expr(print_group_expr(e)) == e);
    }
}

TEST_CASE("parsers survive fuzz input") {
    const std::string charset = "wW()+*^0123456789FSPERLTXof,armginx \"";
    gen::Rng rng(0xf22d);
    auto attempt = [](auto&& parse, const std::string& s) {
        try {
            parse(s);
        } catch (const ParseError&) {
        } catch (const InvalidInputError&) {
        } catch (const EvalError&) {
            // arithmetic overflow from a parsed but huge expression
        }
        return true;
    };
    auto biased = [&] {
        std::string s;
        std::size_t len = rng.next(24);
        for (std::size_t i = 0; i < len; ++i) s += charset[rng.next(charset.size())];
        return s;
    };
    auto raw_bytes = [&] {
        std::string s;
        std::size_t len = rng.next(24);
        for (std::size_t i = 0; i < len; ++i) s += static_cast<char>(rng.next(256));
        return s;
    };
    bool all_ok = true;
    for (int i = 0; i < 40000; ++i) {
        all_ok = all_ok && attempt([](const std::string& s) { parse_ordinal(s); }, biased());
        all_ok = all_ok && attempt([](const std::string& s) { parse_group_expr(s); }, biased());
        all_ok = all_ok && attempt([](const std::string& s) { parse_ordinal(s); }, raw_bytes());
        all_ok = all_ok && attempt([](const std::string& s) { parse_group_expr(s); }, raw_bytes());
    }
    CHECK(all_ok);
}

TEST_CASE("exponentiation in the grammar is right associative") {
    CHECK(parse_ordinal("w^w^2") == pow(Ordinal::omega(), Ordinal::omega_power(fin(2))));
    CHECK(parse_ordinal("2^2^3") == fin(256));
}

TEST_CASE("deep nesting is rejected, not crashed") {
    std::string deep;
    for (int i = 0; i < 5000; ++i) deep += "(";
    CHECK_THROWS_AS(parse_ordinal(deep), ParseError);
    std::string deep_group;
    for (int i = 0; i < 5000; ++i) deep_group += "Res(";
    CHECK_THROWS_AS(parse_group_expr(deep_group), ParseError);
}
