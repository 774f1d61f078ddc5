// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "shlin/terms.hpp"

using namespace shlin;

namespace {

Term T(const char* s) { return parse_term(s); }
Substitution S(const char* s) { return parse_substitution(s); }
Multiset M(const char* s) { return parse_multiset(s); }

const Substitution kExampleTheta = parse_substitution("{x/s(y,u,y), z/s(u,u), v/u}");

Substitution random_idempotent(std::mt19937_64& rng) {
    // Domain from {u..z}, range over {k1..k4}, so the result is idempotent.
    static const std::vector<Var> dom = {"u", "v", "w", "x", "y", "z"};
    static const std::vector<Var> rng_vars = {"k1", "k2", "k3", "k4"};
    Substitution s;
    for (const auto& d : dom)
        if (rng() % 2) s.bind(d, oracle_ref::random_term(rng, rng_vars, 2));
    return s;
}

} // namespace

TEST_CASE("occurrence counts") {
    CHECK(occ("y", T("s(y,u,y)")) == 2);
    CHECK(occ("x", T("a")) == 0);
    CHECK(occ("u", T("s(u,u)")) == 2);
}

TEST_CASE("apply replaces simultaneously") {
    CHECK(apply(S("{x/a}"), T("f(x,y)")) == T("f(a,y)"));
    CHECK(apply(Substitution{}, T("f(x,g(y))")) == T("f(x,g(y))"));
    CHECK(apply(S("{y/b}"), T("r(y)")) == T("r(b)"));
    CHECK(apply(S("{x/y, y/x}"), T("f(x,y)")) == T("f(y,x)"));
}

TEST_CASE("compose applies the first substitution, then the second") {
    Substitution theta = S("{v/a, w/s(x,x)}");
    Substitution eta = S("{x/s(y,u,y), z/s(u,u), v/u}");
    CHECK(compose(theta, eta) == S("{v/a, w/s(s(y,u,y),s(y,u,y)), x/s(y,u,y), z/s(u,u)}"));
    CHECK(compose(Substitution{}, theta) == theta);
    CHECK(compose(theta, Substitution{}) == theta);
    CHECK(compose(S("{x/y}"), S("{y/x}")) == S("{y/x}"));
}

TEST_CASE("unification") {
    auto r = mgu_terms({{T("x"), T("a")}, {T("z"), T("r(y)")}, {T("y"), T("b")}});
    REQUIRE(r.ok());
    CHECK(*r.subst == S("{x/a, y/b, z/r(b)}"));
    auto id = mgu_terms({{T("x"), T("x")}});
    REQUIRE(id.ok());
    CHECK(id.subst->empty());
    auto clash = mgu_terms({{T("a"), T("f(a)")}});
    CHECK(!clash.ok());
    CHECK(clash.error == ErrorKind::Clash);
    auto occurs = mgu_terms({{T("x"), T("f(x)")}});
    CHECK(occurs.error == ErrorKind::OccurCheck);
    CHECK(mgu_terms({{T("f(x,y)"), T("f(a)")}}).error == ErrorKind::Clash);
    CHECK_THROWS_AS(mgu_or_throw({{T("a"), T("b")}}), Error);
}

TEST_CASE("preimages") {
    CHECK(preimage_var(kExampleTheta, "u") == M("uvxz^2"));
    CHECK(preimage_var(kExampleTheta, "y") == M("x^2y"));
    CHECK(preimage_var(kExampleTheta, "z").empty());
    CHECK(preimage_var(kExampleTheta, "w") == M("w"));
    Substitution theta = S("{v/a, w/s(x,x)}");
    CHECK(preimage_group(theta, M("uvxz^2")) == M("uw^2xz^2"));
    CHECK(preimage_group(Substitution{}, M("x^2y")) == M("x^2y"));
    CHECK(preimage_group(theta, Multiset{}).empty());
}

TEST_CASE("text forms") {
    CHECK(format_term(T("f(x, g(y), a)")) == "f(x,g(y),a)");
    CHECK(format_term(T("[u|v]")) == "[u|v]");
    CHECK(format_term(T("[a,b]")) == "[a,b]");
    CHECK(T("[]").name() == "[]");
    CHECK(format_substitution(S("{y/b, x/a}")) == "{x/a, y/b}");
    CHECK(S("x/a, y/b") == S("{x/a, y/b}"));
    CHECK_THROWS_AS(T("f(x"), Error);
    CHECK_THROWS_AS(S("{a/x}"), Error);
}

TEST_CASE("unifiers are idempotent and unify", "[property]") {
    std::mt19937_64 rng(11);
    const std::vector<Var> pool = {"x", "y", "z", "w"};
    int unified = 0;
    for (int i = 0; i < 3000; ++i) {
        std::vector<Equation> eqs;
        for (int k = 0; k < 2; ++k)
            eqs.emplace_back(oracle_ref::random_term(rng, pool, 3), oracle_ref::random_term(rng, pool, 3));
        auto r = mgu_terms(eqs);
        if (!r.ok()) continue;
        ++unified;
        const Substitution& s = *r.subst;
        REQUIRE(s.is_idempotent());
        for (const auto& [l, rhs] : eqs) REQUIRE(apply(s, l) == apply(s, rhs));
        Term t = oracle_ref::random_term(rng, pool, 3);
        REQUIRE(apply(s, apply(s, t)) == apply(s, t));
    }
    CHECK(unified > 300);
}

TEST_CASE("preimage of a composition is the composed preimage", "[property]") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 2000; ++i) {
        Substitution theta = random_idempotent(rng);
        Substitution eta = random_idempotent(rng);
        Multiset b;
        for (const char* v : {"u", "x", "k1", "k2"})
            if (rng() % 2) b.add(v, 1 + rng() % 3);
        REQUIRE(preimage_group(compose(theta, eta), b) == preimage_group(theta, preimage_group(eta, b)));
    }
}

TEST_CASE("occurrences are bilinear under application", "[property]") {
    std::mt19937_64 rng(13);
    const std::vector<Var> pool = {"u", "x", "y", "k1", "k2"};
    for (int i = 0; i < 2000; ++i) {
        Substitution theta = random_idempotent(rng);
        Term t = oracle_ref::random_term(rng, pool, 3);
        for (const Var v : {"k1", "k2", "u"}) {
            unsigned expected = 0;
            VarSet vs = term_vars(t);
            for (const auto& w : vs) expected += oracle_ref::count_occ(w, t) * oracle_ref::count_occ(v, oracle_ref::image_of(theta, w));
            REQUIRE(occ(v, apply(theta, t)) == expected);
        }
    }
}

TEST_CASE("one-way matching treats target variables as constants") {
    auto d = match_terms({{T("r(y)"), T("r(b)")}});
    REQUIRE(d);
    CHECK(*d == S("{y/b}"));
    CHECK(!match_terms({{T("r(b)"), T("r(y)")}}));
    CHECK(!match_terms({{T("f(x,x)"), T("f(a,b)")}}));
    auto same = match_terms({{T("f(x,y)"), T("f(y,x)")}});
    REQUIRE(same);
    CHECK(*same == S("{x/y, y/x}"));
}
