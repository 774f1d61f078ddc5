// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "shlin/existential.hpp"

using namespace shlin;

namespace {

Substitution S(const char* s) { return parse_substitution(s); }
ExistentialSubstitution E(const char* s) { return parse_existential(s); }

Substitution random_subst(std::mt19937_64& rng, const VarSet& dom, const std::vector<Var>& range, int depth) {
    Substitution s;
    for (const auto& d : dom)
        if (rng() % 4) s.bind(d, oracle_ref::random_term(rng, range, depth));
    return s;
}

// Renames the range variables k1..k4 by a random permutation onto m1..m4.
Substitution shuffle_range(const Substitution& s, std::mt19937_64& rng) {
    std::vector<Var> targets = {"m1", "m2", "m3", "m4"};
    std::shuffle(targets.begin(), targets.end(), rng);
    std::map<Var, Var> r{{"k1", targets[0]}, {"k2", targets[1]}, {"k3", targets[2]}, {"k4", targets[3]}};
    Substitution out;
    for (const auto& [x, t] : s.bindings()) out.bind(x, rename(t, r));
    return out;
}

} // namespace

TEST_CASE("canonical representatives") {
    const Term k = Term::var("k");
    const Substitution fk{{"x", Term::app("f", {k})}};
    const Substitution fk_k{{"x", Term::app("f", {k})}, {"y", k}};
    CHECK(format_substitution(canonicalize(fk, {"x"}).rep()) == "{x/f(_1)}");
    CHECK(format_substitution(canonicalize(fk_k, {"x", "y"}).rep()) == "{x/f(_1), y/_1}");
    Substitution extra = S("{x/a, y/b}");
    extra.bind("q", Term::app("c"));
    CHECK(canonicalize(S("{x/a, y/b}"), {"x", "y"}) == canonicalize(extra, {"x", "y"}));
    CHECK(format_existential(canonicalize(Substitution{}, {"x"})) == "[{x/_1}]_{x}");
    // Bindings outside U are applied before being dropped.
    CHECK(format_existential(canonicalize(S("{x/f(w), w/a}"), {"x"})) == "[{x/f(a)}]_{x}");
    auto c = canonicalize(fk_k, {"x", "y"});
    CHECK(canonicalize(c.rep(), c.interest()) == c);
}

TEST_CASE("instance ordering") {
    CHECK(eleq(S("{x/a, y/b, z/r(b)}"), S("{z/r(y)}"), {"y", "z"}));
    Substitution any = S("{x/f(w, a)}");
    CHECK(eleq(any, any, {"x", "y"}));
    CHECK_FALSE(eleq(S("{z/r(y)}"), S("{x/a, y/b, z/r(b)}"), {"y", "z"}));
}

TEST_CASE("unification of classes") {
    auto r = emgu(E("[x/a, y/b]_{x,y}"), E("[z/r(y)]_{y,z}"));
    CHECK(format_existential(r) == "[{x/a, y/b, z/r(b)}]_{x,y,z}");
    auto c = E("[x/f(w), y/w]_{x,y}");
    CHECK(emgu(c, canonicalize(Substitution{}, {})) == c);
    CHECK_THROWS_AS(emgu(E("[x/a]_{x}"), E("[x/b]_{x}")), Error);
    // Existential variables of the two sides are unrelated.
    auto apart = emgu(E("[x/f(w)]_{x}"), E("[y/g(w)]_{y}"));
    CHECK(format_existential(apart) == "[{x/f(_1), y/g(_2)}]_{x,y}");
}

TEST_CASE("unification with a plain substitution") {
    auto r = emgu_subst(canonicalize(Substitution{}, {"x", "z"}), S("{u/x, v/f(x,z), w/z}"));
    auto expected = emgu(canonicalize(Substitution{}, {"x", "z"}), canonicalize(S("{u/x, v/f(x,z), w/z}"), {"u", "v", "w", "x", "z"}));
    CHECK(r == expected);
    CHECK(r.interest() == VarSet{"u", "v", "w", "x", "z"});
    CHECK(oracle_ref::equivalent(r.rep(), S("{u/x, v/f(x,z), w/z}"), r.interest()));
    auto c = E("[x/f(w)]_{x}");
    CHECK(emgu_subst(c, Substitution{}) == c);
    CHECK_THROWS_AS(emgu_subst(E("[x/a]_{x}"), S("{x/b}")), Error);
}

TEST_CASE("matching of classes") {
    auto m = ematch(E("[x/a, y/b]_{x,y}"), E("[z/r(y)]_{y,z}"));
    REQUIRE(m);
    CHECK(format_existential(*m) == "[{x/a, y/b, z/r(b)}]_{x,y,z}");
    CHECK_FALSE(ematch(E("[z/r(y)]_{y,z}"), E("[x/a, y/b]_{x,y}")));
    auto c = E("[x/f(w), y/w]_{x,y}");
    REQUIRE(ematch(c, c));
    CHECK(*ematch(c, c) == c);
}

TEST_CASE("projection") {
    CHECK(format_existential(eproject(E("[x/a, y/b, z/r(b)]_{x,y,z}"), {"x", "z"})) == "[{x/a, z/r(b)}]_{x,z}");
    auto c = E("[x/f(w), y/w]_{x,y}");
    CHECK(eproject(c, {"x", "y"}) == c);
    auto theta = E("[u/r(w1,w7), v/r(w7,w3), x/r(w1,w2,w2,w3,w3), y/a, z/r(w1)]_{u,v,x,y,z}");
    auto p = eproject(theta, {"u", "v", "x"});
    CHECK(p.interest() == VarSet{"u", "v", "x"});
    CHECK(oracle_ref::equivalent(p.rep(), S("{u/r(w11,w17), v/r(w17,w13), x/r(w11,w12,w12,w13,w13)}"), p.interest()));
}

TEST_CASE("canonical form is exactly variance on U", "[property]") {
    std::mt19937_64 rng(21);
    const VarSet u{"x", "y", "z"};
    const std::vector<Var> range = {"k1", "k2", "k3", "k4"};
    for (int i = 0; i < 2000; ++i) {
        Substitution a = random_subst(rng, u, range, 2);
        Substitution b = rng() % 2 ? shuffle_range(a, rng) : random_subst(rng, u, range, 2);
        bool same_class = canonicalize(a, u) == canonicalize(b, u);
        REQUIRE(same_class == oracle_ref::equivalent(a, b, u));
        auto c = canonicalize(a, u);
        REQUIRE(canonicalize(c.rep(), u) == c);
        REQUIRE(c.rep().is_idempotent());
        REQUIRE(c.rep().domain() == u);
    }
}

TEST_CASE("class unification is a commutative lower bound", "[property]") {
    std::mt19937_64 rng(22);
    const std::vector<Var> range = {"k1", "k2", "k3", "k4"};
    int ok = 0;
    for (int i = 0; i < 2000; ++i) {
        VarSet u1{"x", "y"}, u2{"y", "z"};
        auto c1 = canonicalize(random_subst(rng, u1, range, 2), u1);
        auto c2 = canonicalize(random_subst(rng, u2, range, 2), u2);
        auto m = try_emgu(c1, c2);
        auto m2 = try_emgu(c2, c1);
        REQUIRE(m.has_value() == m2.has_value());
        if (!m) continue;
        ++ok;
        REQUIRE(*m == *m2);
        REQUIRE(oracle_ref::instance_of(m->rep(), c1.rep(), u1));
        REQUIRE(oracle_ref::instance_of(m->rep(), c2.rep(), u2));
    }
    CHECK(ok > 200);
}

TEST_CASE("a defined match projects back onto its first argument", "[property]") {
    std::mt19937_64 rng(23);
    const std::vector<Var> range = {"k1", "k2", "k3"};
    int defined = 0;
    for (int i = 0; i < 3000; ++i) {
        VarSet u1{"x", "y"}, u2{"y", "z"};
        Substitution t2 = random_subst(rng, u2, range, 2);
        // Make the first argument an instance on y half of the time.
        Substitution t1 = random_subst(rng, u1, range, 2);
        if (rng() % 2) {
            Substitution delta;
            for (const auto& v : range)
                if (rng() % 2) delta.bind(v, oracle_ref::random_term(rng, {"m1", "m2"}, 1));
            t1.bind("y", apply(delta, oracle_ref::image_of(t2, "y")));
        }
        auto c1 = canonicalize(t1, u1), c2 = canonicalize(t2, u2);
        auto m = ematch(c1, c2);
        REQUIRE(m.has_value() == oracle_ref::instance_of(c1.rep(), c2.rep(), {"y"}));
        if (!m) continue;
        ++defined;
        REQUIRE(eproject(*m, u1) == c1);
    }
    CHECK(defined > 500);
}
