// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "shlin/analyzer.hpp"

using namespace shlin;

namespace {

AbstractElement O(const char* s) { return parse_element(DomainTag::Omega, s); }
AbstractElement T(const char* s) { return parse_element(DomainTag::Two, s); }
AbstractElement L(const char* s) { return parse_element(DomainTag::Sl, s); }

std::string slurp(const std::string& rel) {
    std::ifstream f(std::string(SHLIN_SOURCE_DIR) + "/" + rel);
    REQUIRE(f);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

AnalysisRequest p61(const AbstractElement& call, BackwardMode mode) {
    AnalysisRequest r;
    r.program = parse_program(slurp("data/p61.pl"));
    r.goal = parse_goal("p(x, f(x,z), z)");
    r.call = call;
    r.mode = mode;
    return r;
}

AnalysisRequest member(BackwardMode mode, bool inject) {
    AnalysisRequest r;
    r.program = parse_program(slurp("data/member.pl"));
    r.goal = parse_goal("member(x, [y])");
    r.call = T("[xy, xz]_{x,y,z}");
    r.mode = mode;
    if (inject) r.injection = parse_injection(DomainTag::Two, slurp("data/member_trace.txt"));
    return r;
}

AbstractElement abstract_of(const ExistentialSubstitution& c, DomainTag d) {
    switch (d) {
    case DomainTag::Omega: return alpha_omega(c);
    case DomainTag::Two: return alpha2(alpha_omega(c));
    case DomainTag::Sl: return alpha_sl(alpha2(alpha_omega(c)));
    }
    return {};
}

// Concrete answer approximated by an abstract one; ω counts are compared after clipping at the analysis cap.
bool covers(const AbstractElement& answer, const ExistentialSubstitution& c, Multiset::Count cap) {
    return leq_element(saturate(abstract_of(c, domain_of(answer)), cap), answer);
}

Program random_program(std::mt19937_64& rng) {
    const std::vector<Var> pool = {"u", "v"};
    Program p;
    const std::vector<std::pair<std::string, int>> preds = {{"p", 2}, {"q", 1}};
    for (const auto& [name, arity] : preds) {
        int n = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < n; ++i) {
            Clause c;
            c.head.predicate = name;
            for (int k = 0; k < arity; ++k) c.head.args.push_back(oracle_ref::random_term(rng, pool, 2));
            int body = static_cast<int>(rng() % 3);
            for (int b = 0; b < body; ++b) {
                const auto& [callee, ca] = preds[rng() % preds.size()];
                Atom a{callee, {}};
                for (int k = 0; k < ca; ++k) a.args.push_back(oracle_ref::random_term(rng, pool, 1));
                c.body.push_back(a);
            }
            p.clauses.push_back(c);
        }
    }
    return p;
}

} // namespace

TEST_CASE("program parsing") {
    auto one = parse_program("p(u,v,w).");
    REQUIRE(one.clauses.size() == 1);
    CHECK(one.clauses[0].body.empty());
    CHECK(format_atom(one.clauses[0].head) == "p(u,v,w)");

    auto m = parse_program(slurp("data/member.pl"));
    REQUIRE(m.clauses.size() == 2);
    const Term& list = m.clauses[0].head.args[1];
    CHECK(list.name() == ".");
    CHECK(list.args()[0] == Term::var("u"));
    CHECK(list.args()[1] == Term::var("v"));
    CHECK(format_atom(m.clauses[1].body[0]) == "member(u,w)");
    CHECK(m.clauses[1].line == 2);
    CHECK(clause_vars(m.clauses[1]) == VarSet{"u", "v", "w"});
    CHECK(parse_goal("member(x, [a,b])").args[1] == parse_term("'.'(a, '.'(b, '[]'))"));

    try {
        parse_program("p(x :-");
        FAIL("expected a syntax error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SyntaxError);
        CHECK(std::string(e.what()).find("line 1, column 5") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_program("p(x).\nx :- q."), Error);
    CHECK_THROWS_AS(parse_goal("p(x). q(y)"), Error);
}

TEST_CASE("baseline abstract unification") {
    auto e = extend_free(T("[xy, xz]_{x,y,z}"), {"u"});
    CHECK(baseline_amgu(e, "x", Term::var("u")) == T("[uxy, uxz]_{u,x,y,z}"));

    auto w = extend_free(O("[x, z]_{x,z}"), {"u", "v", "w"});
    w = baseline_amgu(w, "u", Term::var("x"));
    w = baseline_amgu(w, "v", parse_term("f(x,z)"));
    w = baseline_amgu(w, "w", Term::var("z"));
    CHECK(w == O("[uvx, vwz]_{u,v,w,x,z}"));

    auto g = T("[uvxy, uxz, w]_{u,v,w,x,y,z}");
    CHECK(baseline_amgu(g, "w", parse_term("[]")) == T("[uvxy, uxz]_{u,v,w,x,y,z}"));

    // A non-linear binding falls back to the closure and saturates.
    auto nl = baseline_amgu(O("[x, y]_{x,y}"), "x", parse_term("f(y,y)"));
    CHECK(nl == O("[xy, xy^2, xy^3, x^2y, x^2y^2, x^2y^3, x^3y, x^3y^2, x^3y^3]_{x,y}"));
    auto nl2 = baseline_amgu(T("[x, y]_{x,y}"), "x", parse_term("f(y,y)"));
    CHECK(nl2 == T("[x^*y^*]_{x,y}"));

    CHECK(is_bottom_element(baseline_amgu(T("[x]_{x}"), "x", parse_term("f(x)"))));
    CHECK(baseline_amgu(T("[x]_{x}"), "x", Term::var("x")) == T("[x]_{x}"));
    CHECK_THROWS_AS(baseline_amgu(T("[x]_{x}"), "x", Term::var("y")), Error);
}

TEST_CASE("forward unification") {
    auto f = forward_unify(O("[x, z]_{x,z}"), parse_goal("p(x,f(x,z),z)"), parse_goal("p(u,v,w)"));
    REQUIRE(f.unified);
    CHECK(f.full == O("[uvx, vwz]_{u,v,w,x,z}"));
    CHECK(f.entry == O("[uv, vw]_{u,v,w}"));

    auto m2 = forward_unify(T("[xy, xz]_{x,y,z}"), parse_goal("member(x,[y])"), parse_goal("member(u,[v|w])"));
    CHECK(format_substitution(m2.theta) == "{w/[], x/u, y/v}");
    CHECK(m2.full == T("[uvxy, uxz]_{u,v,w,x,y,z}"));
    // The baseline derives [uv, u]; the lone singleton is u.
    CHECK(m2.entry == T("[uv, u]_{u,v,w}"));

    auto clash = forward_unify(T("[x]_{x}"), parse_goal("p(x, a)"), parse_goal("p(u, b)"));
    CHECK_FALSE(clash.unified);
    CHECK(is_bottom_element(clash.entry));
    CHECK_THROWS_AS(forward_unify(T("[x]_{x}"), parse_goal("p(x)"), parse_goal("p(u,v)")), Error);
    try {
        forward_unify(T("[x]_{x}"), parse_goal("p(x)"), parse_goal("q(u)"));
        FAIL("expected a predicate mismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PredicateMismatch);
    }
}

TEST_CASE("backward unification") {
    auto call = O("[x, z]_{x,z}");
    auto f = forward_unify(call, parse_goal("p(x,f(x,z),z)"), parse_goal("p(u,v,w)"));
    CHECK(match_element(f.entry, f.full) == O("[uvx, vwz]_{u,v,w,x,z}"));
    CHECK(backward_unify(call, f.entry, f, BackwardMode::Matching) == O("[x, z]_{x,z}"));
    auto viamgu = std::get<OmegaElement>(backward_unify(call, f.entry, f, BackwardMode::Mgu));
    CHECK(viamgu.contains(parse_multiset("xz")));

    // Member, first clause, with the forward values supplied by hand.
    auto tcall = T("[xy, xz]_{x,y,z}");
    ForwardResult inj;
    inj.unified = true;
    inj.theta = parse_substitution("{x/u, y/u, v/[]}");
    inj.full = T("[u^*x^*y^*]_{u,v,x,y,z}");
    inj.entry = T("[u^*]_{u,v}");
    CHECK(match_element(inj.entry, inj.full) == T("[u^*x^*y^*]_{u,v,x,y,z}"));
    CHECK(backward_unify(tcall, inj.entry, inj, BackwardMode::Matching) == T("[x^*y^*]_{x,y,z}"));
    CHECK(backward_unify(tcall, inj.entry, inj, BackwardMode::Mgu) == T("[x^*y^*, x^*y^*z^*]_{x,y,z}"));
    CHECK(juxtapose(tcall, inj.entry) == T("[u^*, xy, xz]_{u,v,x,y,z}"));
}

TEST_CASE("analysis of the single-fact program") {
    auto m = analyze(p61(O("[x, z]_{x,z}"), BackwardMode::Matching));
    CHECK(m.answer == O("[x, z]_{x,z}"));
    REQUIRE(m.trace.size() == 1);
    CHECK(m.trace[0].entry == O("[uv, vw]_{u,v,w}"));
    auto g = analyze(p61(O("[x, z]_{x,z}"), BackwardMode::Mgu));
    CHECK(std::get<OmegaElement>(g.answer).contains(parse_multiset("xz")));
    CHECK(group_difference(m.answer, g.answer) ==
          std::vector<std::string>{"x^2", "x^3", "xz", "xz^2", "xz^3", "x^2z", "x^2z^2", "x^2z^3", "x^3z", "x^3z^2",
                                   "x^3z^3", "z^2", "z^3"});

    auto sm = analyze(p61(L("[{x, z}, lin={x,z}]_{x,z}"), BackwardMode::Matching));
    auto sg = analyze(p61(L("[{x, z}, lin={x,z}]_{x,z}"), BackwardMode::Mgu));
    CHECK(sm.answer == L("[{x, z}, lin={x,z}]_{x,z}"));
    CHECK(group_difference(sm.answer, sg.answer) == std::vector<std::string>{"xz"});

    // Ground call: both modes agree.
    auto gm = analyze(p61(O("[0]_{x,z}"), BackwardMode::Matching));
    auto gg = analyze(p61(O("[0]_{x,z}"), BackwardMode::Mgu));
    CHECK(gm.answer == gg.answer);
    CHECK(group_difference(gm.answer, gg.answer).empty());
}

TEST_CASE("analysis of member with and without injected forward values") {
    auto m = analyze(member(BackwardMode::Matching, true));
    CHECK(m.answer == T("[x^*y^*]_{x,y,z}"));
    auto g = analyze(member(BackwardMode::Mgu, true));
    CHECK(g.answer == T("[x^*y^*, x^*y^*z^*]_{x,y,z}"));
    CHECK(group_difference(m.answer, g.answer) == std::vector<std::string>{"x^*y^*z^*"});
    REQUIRE(m.trace.size() >= 2);
    CHECK(m.trace[0].injected == std::vector<Step>{Step::Full, Step::Entry});
    CHECK(m.trace[1].exit == T("[0]_{u,v,w}"));
    CHECK(m.trace[1].answer == T("[0]_{x,y,z}"));

    // Without injection the baseline keeps the z-group in both modes.
    auto plain = analyze(member(BackwardMode::Matching, false));
    CHECK(plain.answer == T("[x^*y^*, x^*y^*z^*]_{x,y,z}"));
    CHECK(plain.iterations == 2);
    CHECK(format_trace(plain) == format_trace(analyze(member(BackwardMode::Matching, false))));
}

TEST_CASE("analysis errors") {
    auto r = member(BackwardMode::Matching, false);
    r.limits.max_iterations = 1;
    try {
        analyze(r);
        FAIL("expected the iteration limit to trip");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FixpointLimitExceeded);
    }
    auto wrong = member(BackwardMode::Matching, false);
    wrong.call = T("[x]_{x}");
    CHECK_THROWS_AS(analyze(wrong), Error);
    auto undefined = member(BackwardMode::Matching, false);
    undefined.goal = parse_goal("elem(x, [y])");
    CHECK_THROWS_AS(analyze(undefined), Error);
    auto bad_inj = member(BackwardMode::Matching, false);
    bad_inj.injection = parse_injection(DomainTag::Two, "1 entry [u]_{u}");
    CHECK_THROWS_AS(analyze(bad_inj), Error);

    CHECK_THROWS_AS(parse_injection(DomainTag::Two, "0 full [x]_{x}"), Error);
    CHECK_THROWS_AS(parse_injection(DomainTag::Two, "1 body [x]_{x}"), Error);
    CHECK_THROWS_AS(parse_injection(DomainTag::Two, "1 full"), Error);
    CHECK_THROWS_AS(parse_injection(DomainTag::Two, "1 full [x^2]_{x}"), Error);
    CHECK(parse_injection(DomainTag::Two, "% nothing\n\n").steps.empty());
}

TEST_CASE("answers cover bounded concrete derivations", "[property]") {
    std::mt19937_64 rng(61);
    const VarSet ctx{"x", "y", "z"};
    const std::vector<Var> range = {"k1", "k2", "k3"};
    int checked = 0, skipped = 0;
    for (int i = 0; i < 150; ++i) {
        Program prog = random_program(rng);
        Atom goal = rng() % 2 ? Atom{"p", {oracle_ref::random_term(rng, {"x", "y"}, 1), oracle_ref::random_term(rng, {"y", "z"}, 1)}}
                              : Atom{"q", {oracle_ref::random_term(rng, {"x", "z"}, 1)}};
        Substitution theta;
        for (const auto& x : ctx)
            if (rng() % 3) theta.bind(x, oracle_ref::random_term(rng, range, 2));
        auto call = canonicalize(theta, ctx);
        auto answers = oracle_ref::sld_answers(prog, goal, call.rep(), ctx, 5, 40);
        for (auto d : {DomainTag::Omega, DomainTag::Two, DomainTag::Sl}) {
            std::optional<AbstractElement> results[2];
            for (auto mode : {BackwardMode::Matching, BackwardMode::Mgu}) {
                AnalysisRequest r;
                r.program = prog;
                r.goal = goal;
                r.call = abstract_of(call, d);
                r.mode = mode;
                r.limits.omega_cap = 2; // cap 3 blows up the closure on a few programs
                try {
                    results[mode == BackwardMode::Mgu] = analyze(r).answer;
                } catch (const Error& e) {
                    REQUIRE(e.kind() == ErrorKind::TooLarge);
                    ++skipped;
                    continue;
                }
                for (const auto& a : answers) {
                    CAPTURE(i, to_string(d), to_string(mode), format_element(*results[mode == BackwardMode::Mgu]),
                            format_substitution(a), format_atom(goal), format_substitution(call.rep()));
                    REQUIRE(covers(*results[mode == BackwardMode::Mgu], canonicalize(a, ctx), r.limits.omega_cap));
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 300);
    CHECK(skipped < 20);
}
