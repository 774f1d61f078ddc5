// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/existential.hpp"

#include <vector>

#include "group_syntax.hpp"

namespace shlin {

namespace {

// Applies θ until no bound variable remains, which tolerates non-idempotent input.
Term resolve(const Substitution& theta, const Term& t) {
    Term cur = t;
    for (size_t i = 0; i <= theta.size(); ++i) {
        Term nxt = apply(theta, cur);
        if (nxt == cur) return cur;
        cur = nxt;
    }
    throw Error(ErrorKind::InvalidArgument, "cyclic substitution");
}

} // namespace

ExistentialSubstitution canonicalize(const Substitution& theta, const VarSet& u) {
    std::vector<Term> images;
    images.reserve(u.size());
    std::vector<Var> order;
    VarSet seen;
    for (const auto& x : u) {
        images.push_back(resolve(theta, Term::var(x)));
        collect_vars_ordered(images.back(), order, seen);
    }
    std::map<Var, Var> ren;
    for (size_t i = 0; i < order.size(); ++i) ren.emplace(order[i], "_" + std::to_string(i + 1));
    ExistentialSubstitution c;
    c.interest_ = u;
    size_t i = 0;
    for (const auto& x : u) c.rep_.bind(x, rename(images[i++], ren));
    return c;
}

bool eleq(const Substitution& theta1, const Substitution& theta2, const VarSet& u) {
    std::vector<Equation> pt;
    pt.reserve(u.size());
    for (const auto& x : u) pt.emplace_back(theta2.image(x), theta1.image(x));
    return match_terms(pt).has_value();
}

namespace {

std::vector<Equation> equations_of(const Substitution& s, const std::map<Var, Var>& ren) {
    std::vector<Equation> eqs;
    for (const auto& [v, t] : s.bindings()) eqs.emplace_back(Term::var(v), rename(t, ren));
    return eqs;
}

} // namespace

std::optional<ExistentialSubstitution> try_emgu(const ExistentialSubstitution& c1, const ExistentialSubstitution& c2) {
    // Canonical range variables are `_k` on both sides; the second side moves to `_k'`-style names.
    std::map<Var, Var> apart;
    for (const auto& v : c2.rep().range_vars()) apart.emplace(v, v + "_r");
    std::vector<Equation> eqs = equations_of(c1.rep(), {});
    for (auto& e : equations_of(c2.rep(), apart)) eqs.push_back(std::move(e));
    UnifyResult r = mgu_terms(eqs);
    if (!r.ok()) return std::nullopt;
    return canonicalize(*r.subst, set_union(c1.interest(), c2.interest()));
}

ExistentialSubstitution emgu(const ExistentialSubstitution& c1, const ExistentialSubstitution& c2) {
    auto r = try_emgu(c1, c2);
    if (!r) throw Error(ErrorKind::UnificationFailure, format_existential(c1) + " and " + format_existential(c2));
    return *r;
}

ExistentialSubstitution emgu_subst(const ExistentialSubstitution& c, const Substitution& delta) {
    return emgu(c, canonicalize(delta, delta.vars()));
}

std::optional<ExistentialSubstitution> ematch(const ExistentialSubstitution& c1, const ExistentialSubstitution& c2) {
    if (!eleq(c1.rep(), c2.rep(), set_intersection(c1.interest(), c2.interest()))) return std::nullopt;
    auto r = try_emgu(c1, c2);
    if (!r) throw Error(ErrorKind::UnificationFailure, "matching side condition held but unification failed");
    return r;
}

ExistentialSubstitution eproject(const ExistentialSubstitution& c, const VarSet& v) {
    return canonicalize(c.rep(), set_intersection(c.interest(), v));
}

std::string format_existential(const ExistentialSubstitution& c) {
    return "[" + format_substitution(c.rep()) + "]_" + format_varset(c.interest());
}

ExistentialSubstitution parse_existential(std::string_view text) {
    auto [body, vars] = detail::split_element(text);
    std::string b = trim(body);
    Substitution s = parse_substitution(b.empty() || b.front() == '{' ? b : "{" + b + "}");
    return canonicalize(s, parse_varset(vars));
}

} // namespace shlin
