// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "shlin/oracle.hpp"

using namespace shlin;

namespace {

OmegaElement W(const char* s) { return parse_omega(s); }
TwoElement T(const char* s) { return parse_two(s); }
Multiset M(const char* s) { return parse_multiset(s); }
ExistentialSubstitution E(const char* s) { return parse_existential(s); }

const char* kTheta2 = "[x/r(w4,w5,w6,w8,w8), u/r(w4,w7), v/r(w7,w8)]_{u,v,x}";

bool all_verified(const std::vector<WitnessReport>& rs) {
    for (const auto& r : rs)
        if (!r.verified) return false;
    return true;
}

TrialConfig small(std::size_t trials) {
    TrialConfig cfg;
    cfg.seed = 7;
    cfg.trials = trials;
    return cfg;
}

} // namespace

TEST_CASE("second witness binds one variable per group") {
    auto t = witness_theta2({M("ux"), M("ux")}, {"u", "v", "x"});
    const VarSet u2{"u", "v", "x"};
    CHECK(mrestrict(preimage_var(t, "_h1"), u2) == M("ux"));
    CHECK(format_term(t.image("v")) == "a");

    auto two = witness_theta2({M("uv"), M("ux^2")}, {"u", "v", "x"});
    Multiset seen;
    for (const char* h : {"_h1", "_h2"}) seen = msum(seen, mrestrict(preimage_var(two, h), u2));
    CHECK(seen == M("u^2vx^2"));
    CHECK(mrestrict(preimage_var(two, "_h3"), u2).empty());

    auto none = witness_theta2({}, {"u", "v"});
    CHECK(format_term(none.image("u")) == "a");
    CHECK(format_term(none.image("v")) == "a");
}

TEST_CASE("first witness on the worked setting") {
    auto e1 = W("[x^2, xz]_{x,y,z}");
    auto c2 = E(kTheta2);
    for (const char* b : {"xz", "u^2x^2", "uxz", "x^2", "uv", "vx^2", "ux^2"}) {
        auto t1 = witness_theta1(e1, c2, M(b));
        CAPTURE(b, format_existential(t1));
        CHECK(approx_omega(e1, t1));
        auto m = ematch(t1, c2);
        REQUIRE(m);
        CHECK(alpha_omega(*m).contains(M(b)));
    }
    CHECK_THROWS_AS(witness_theta1(e1, c2, M("u")), Error);
    CHECK_THROWS_AS(witness_theta1(e1, c2, M("x^3z")), Error);
    try {
        witness_theta1(e1, c2, M("y"));
        FAIL("expected NotInMatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotInMatch);
    }
}

TEST_CASE("every group of the worked matching has a witness") {
    auto rs = check_optimality_omega(W("[x^2, xz]_{x,y,z}"), W("[uv, ux, vx^2, x]_{u,v,x}"));
    CHECK(rs.size() == 8);
    CHECK(all_verified(rs));
    for (const auto& r : rs) {
        auto m = ematch(r.theta1, r.theta2);
        REQUIRE(m);
        CHECK(alpha_omega(*m).contains(r.group));
    }
}

TEST_CASE("ShLin2 and sharing-linearity witnesses on the worked inputs") {
    auto rs = check_optimality_two(T("[x^*, xz]_{x,y,z}"), T("[uv, ux, vx^*, x]_{u,v,x}"));
    // Eight maximal groups plus the empty one.
    CHECK(rs.size() == 9);
    CHECK(all_verified(rs));
    std::set<std::string> labels;
    for (const auto& r : rs) labels.insert(r.label);
    CHECK(labels.count("u^*v^*x^*"));

    auto sl = check_optimality_sl(parse_sl("[{x, xz}, lin={y,z}]_{x,y,z}"), parse_sl("[{uv, ux, vx, x}, lin={u,v}]_{u,v,x}"));
    CHECK(all_verified(sl));
    CHECK(sl.back().label == "sl-abstraction");
}

TEST_CASE("ground first argument keeps only groups outside its interest") {
    auto rs = check_optimality_omega(OmegaElement::ground({"x"}), W("[uv, ux]_{u,v,x}"));
    CHECK(all_verified(rs));
    std::set<Multiset> gs;
    for (const auto& r : rs) gs.insert(r.group);
    CHECK(gs == std::set<Multiset>{Multiset{}, M("uv")});
}

TEST_CASE("equivalence instance on the worked inputs") {
    auto r = check_equivalence_instance(T("[x^*, xz]_{x,y,z}"), T("[uv, ux, vx^*, x]_{u,v,x}"),
                                        parse_sl("[{x, xz}, lin={y,z}]_{x,y,z}"), parse_sl("[{uv, ux, vx, x}, lin={u,v}]_{u,v,x}"));
    CHECK(r.two_equal);
    CHECK(r.sl_equal);
    CHECK(r.detail.empty());
}

TEST_CASE("generators respect the configuration", "[property]") {
    TrialConfig cfg;
    cfg.max_vars = 4;
    cfg.multiplicity_cap = 2;
    auto pool = variable_pool(cfg.max_vars);
    VarSet all(pool.begin(), pool.end());
    for (std::uint64_t i = 0; i < 500; ++i) {
        Rng rng = trial_rng(3, i);
        auto [c1, c2] = gen_match_pair(cfg, rng);
        REQUIRE(is_subset(c1.interest(), all));
        REQUIRE(c2.rep().domain() == c2.interest());
        auto e = gen_omega_element(all, cfg, rng);
        REQUIRE(e.contains(Multiset{}));
        for (const auto& g : e.groups()) REQUIRE(g.max_count() <= 2);
        auto s = gen_sl_element(all, rng);
        REQUIRE(s.sharing().count(VarSet{}));
    }
    CHECK(variable_pool(8) == std::vector<Var>{"u", "v", "w", "x", "y", "z", "u1", "v1"});
}

TEST_CASE("trial streams depend only on seed and index") {
    Rng a = trial_rng(1, 5), b = trial_rng(1, 5), c = trial_rng(1, 6), d = trial_rng(2, 5);
    auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("serial and parallel runners agree byte for byte") {
    auto cfg = small(300);
    for (auto d : {DomainTag::Omega, DomainTag::Two, DomainTag::Sl}) {
        auto s = run_correctness(cfg, d, 1);
        auto p = run_correctness(cfg, d, 3);
        CHECK(s.text() == p.text());
        CHECK(s.json() == p.json());
        CHECK(s.ok());
        CHECK(s.non_vacuous > 0);
        auto o1 = run_optimality(small(60), d, 1);
        auto o2 = run_optimality(small(60), d, 2);
        CHECK(o1.text() == o2.text());
        CHECK(o1.ok());
    }
    auto e1 = check_equivalences(cfg, 1), e2 = check_equivalences(cfg, 4);
    CHECK(e1.text() == e2.text());
    CHECK(e1.ok());
    auto p1 = run_proposition(cfg, 1), p2 = run_proposition(cfg, 0);
    CHECK(p1.json() == p2.json());
    CHECK(p1.ok());
}

TEST_CASE("reports count failures and list the first ones") {
    TrialFn flaky = [](std::uint64_t i, Rng&) {
        TrialOutcome o;
        o.checks = 1;
        if (i % 3 == 0) {
            o.ok = false;
            o.detail = "bad " + std::to_string(i);
        }
        if (i == 4) throw std::runtime_error("boom");
        return o;
    };
    auto cfg = small(40);
    auto r = summarize("demo", "omega", cfg, run_trials_serial(cfg, flaky));
    CHECK(r.failures == 15);
    CHECK(r.failed.size() == 10);
    CHECK(r.failed[2].second == "exception: boom");
    CHECK(r.text().rfind("suite=demo domain=omega seed=7 trials=40 non_vacuous=40 checks=39 failures=15\n", 0) == 0);
    CHECK(r.json().find(R"("failures":15)") != std::string::npos);
}

TEST_CASE("configuration validation") {
    TrialConfig cfg;
    cfg.max_vars = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = TrialConfig{};
    cfg.multiplicity_cap = 0;
    CHECK_THROWS_AS(run_correctness(cfg, DomainTag::Omega), Error);
    CHECK(parse_domain("sl") == DomainTag::Sl);
    CHECK_THROWS_AS(parse_domain("sharing"), Error);
}
