#include "nilinv/trace_invariants.hpp"

#include "nilinv/catalog.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace nilinv;

TEST_CASE("spec parsing", "[traceinv]") {
    const TraceSpec s1 = parse_spec("aabb");
    CHECK(s1.groups == std::vector<std::string>{"aabb"});
    CHECK(s1.letters == "ab");
    CHECK(s1.q() == 2);

    const TraceSpec s2 = parse_spec("ab|ab");
    CHECK(s2.groups == std::vector<std::string>{"ab", "ab"});
    CHECK(s2.str() == "ab|ab");

    try {
        parse_spec("aab");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("'b'") != std::string::npos);
        CHECK(e.pos == 2);
    }
    try {
        parse_spec("aa|");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("empty group") != std::string::npos);
    }
    try {
        parse_spec("a a|aa");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.pos == 1);
    }
    CHECK_THROWS_AS(parse_spec(""), ParseError);
}

TEST_CASE("golden trace invariant values", "[traceinv]") {
    const JMap four = catalog_get("fourthree").j;
    const JMap five = catalog_get("fivethree").j;
    const JMap fivep = catalog_get("fivethree-prime").j;
    CHECK(eval_trace_invariant("aa", four) == Rational(-24));
    CHECK(eval_trace_invariant("aabccb", five) == Rational(-24));
    CHECK(eval_trace_invariant("aabccb", fivep) == Rational(-26));
}

TEST_CASE("volume-element invariant distinguishes the Clifford modules", "[traceinv]") {
    const JMap j20 = catalog_get("heis3-2-0").j;
    const JMap j11 = catalog_get("heis3-1-1").j;
    // independent brute-force triple sum over the explicit matrices
    Rational brute;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t c = 0; c < 3; ++c) {
                const Rational t = trace_product({j20.mats[a], j20.mats[b], j20.mats[c]});
                brute += t * t;
            }
    CHECK(brute == Rational(384));
    CHECK(eval_trace_invariant("abc|abc", j20) == Rational(384));
    CHECK(eval_trace_invariant("abc|abc", j11) == Rational(0));
}

TEST_CASE("shortcut identities against powers of J", "[traceinv]") {
    for (const std::string& id : catalog_ids()) {
        const JMap j = catalog_get(id).j;
        const Mat J = j.big_j();
        CHECK(eval_trace_invariant("aa", j) == J.trace());
        CHECK(eval_trace_invariant("aabb", j) == trace_product({J, J}));
        CHECK(eval_trace_invariant("aabbcc", j) == trace_product({J, J, J}));
    }
}

TEST_CASE("cyclic shifts within a group do not change the value", "[traceinv]") {
    for (const std::string& id : {"fourthree", "fivethree", "sixtwo"}) {
        const JMap j = catalog_get(id).j;
        CHECK(eval_trace_invariant("aabccb", j) == eval_trace_invariant("abccba", j));
        CHECK(eval_trace_invariant("aabc|bc", j) == eval_trace_invariant("abca|bc", j));
        CHECK(eval_trace_invariant("abc|abc", j) == eval_trace_invariant("bca|abc", j));
    }
}

TEST_CASE("equivalent maps share every named invariant", "[traceinv]") {
    for (const std::string& id : {"fourthree", "fivethree"}) {
        const JMap j = catalog_get(id).j;
        for (int trial = 0; trial < 3; ++trial) {
            const Mat a = niltest::rational_orthogonal(j.m);
            const Mat b = niltest::rational_orthogonal(j.r);
            const JMap jt = niltest::apply_equivalence(j, a, b);
            const auto lhs = eval_named_basics(j);
            const auto rhs = eval_named_basics(jt);
            REQUIRE(lhs.size() == rhs.size());
            for (std::size_t i = 0; i < lhs.size(); ++i) {
                CHECK(lhs[i].first == rhs[i].first);
                CHECK(lhs[i].second == rhs[i].second);
            }
        }
    }
}

TEST_CASE("isospectral pairs share I_ab|ab", "[traceinv]") {
    for (const CatalogPair& p : catalog_pairs()) {
        const JMap l = catalog_get(p.left).j;
        const JMap r = catalog_get(p.right).j;
        CHECK(eval_trace_invariant("ab|ab", l) == eval_trace_invariant("ab|ab", r));
    }
}

TEST_CASE("named basics on the catalog", "[traceinv]") {
    const auto named = [](const JMap& j, const std::string& key) {
        for (const auto& [k, v] : eval_named_basics(j))
            if (k == key) return v;
        throw std::out_of_range(key);
    };
    const JMap five = catalog_get("fivethree").j;
    CHECK(named(five, "I_aa") == Rational(-8));
    CHECK(named(five, "I_aabb") == Rational(14));
    CHECK(named(catalog_get("sixtwo").j, "I_aabb") == Rational(630));
    CHECK(named(catalog_get("sixtwo-prime").j, "I_aabb") == Rational(598));
    // all named invariants vanish on the abelian algebra
    for (const auto& [k, v] : eval_named_basics(niltest::zero_jmap(4, 3))) {
        (void)k;
        CHECK(v == Rational(0));
    }
}
