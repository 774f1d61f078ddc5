// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/terms.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "group_syntax.hpp"
#include "lexer.hpp"

namespace shlin {

Term Term::var(Var name) { return Term(std::make_shared<const Node>(Node{true, std::move(name), {}})); }

Term Term::app(std::string symbol, std::vector<Term> args) {
    return Term(std::make_shared<const Node>(Node{false, std::move(symbol), std::move(args)}));
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.is_var() != b.is_var() || a.name() != b.name() || a.arity() != b.arity()) return false;
    for (size_t i = 0; i < a.arity(); ++i)
        if (!(a.args()[i] == b.args()[i])) return false;
    return true;
}

bool operator<(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return false;
    if (a.is_var() != b.is_var()) return a.is_var();
    if (a.name() != b.name()) return a.name() < b.name();
    if (a.arity() != b.arity()) return a.arity() < b.arity();
    for (size_t i = 0; i < a.arity(); ++i) {
        if (a.args()[i] < b.args()[i]) return true;
        if (b.args()[i] < a.args()[i]) return false;
    }
    return false;
}

Substitution::Substitution(std::initializer_list<std::pair<const Var, Term>> bindings) {
    for (const auto& [v, t] : bindings) bind(v, t);
}

void Substitution::bind(const Var& v, const Term& t) {
    if (t.is_var() && t.name() == v) {
        bindings_.erase(v);
        return;
    }
    bindings_.insert_or_assign(v, t);
}

const Term* Substitution::find(const Var& v) const {
    auto it = bindings_.find(v);
    return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::image(const Var& v) const {
    const Term* t = find(v);
    return t ? *t : Term::var(v);
}

VarSet Substitution::domain() const {
    VarSet d;
    for (const auto& b : bindings_) d.insert(d.end(), b.first);
    return d;
}

VarSet Substitution::range_vars() const {
    VarSet r;
    for (const auto& b : bindings_) collect_vars(b.second, r);
    return r;
}

VarSet Substitution::vars() const { return set_union(domain(), range_vars()); }

bool Substitution::is_idempotent() const {
    VarSet r = range_vars();
    return std::none_of(bindings_.begin(), bindings_.end(), [&](const auto& b) { return r.count(b.first) > 0; });
}

Substitution Substitution::restrict(const VarSet& vs) const {
    Substitution out;
    for (const auto& [v, t] : bindings_)
        if (vs.count(v)) out.bindings_.emplace(v, t);
    return out;
}

void collect_vars(const Term& t, VarSet& out) {
    if (t.is_var()) {
        out.insert(t.name());
        return;
    }
    for (const auto& a : t.args()) collect_vars(a, out);
}

VarSet term_vars(const Term& t) {
    VarSet s;
    collect_vars(t, s);
    return s;
}

void collect_vars_ordered(const Term& t, std::vector<Var>& out, VarSet& seen) {
    if (t.is_var()) {
        if (seen.insert(t.name()).second) out.push_back(t.name());
        return;
    }
    for (const auto& a : t.args()) collect_vars_ordered(a, out, seen);
}

size_t term_depth(const Term& t) {
    size_t d = 0;
    for (const auto& a : t.args()) d = std::max(d, term_depth(a) + 1);
    return d;
}

Multiset::Count occ(const Var& v, const Term& t) {
    if (t.is_var()) return t.name() == v ? 1 : 0;
    Multiset::Count n = 0;
    for (const auto& a : t.args()) n = checked_add(n, occ(v, a));
    return n;
}

Term apply(const Substitution& s, const Term& t) {
    if (s.empty()) return t;
    if (t.is_var()) {
        const Term* b = s.find(t.name());
        return b ? *b : t;
    }
    if (t.arity() == 0) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(apply(s, a));
        changed = changed || !(args.back() == a);
    }
    return changed ? Term::app(t.name(), std::move(args)) : t;
}

Substitution compose(const Substitution& first, const Substitution& second) {
    Substitution out;
    for (const auto& [v, t] : first.bindings()) out.bind(v, apply(second, t));
    for (const auto& [v, t] : second.bindings())
        if (!first.find(v)) out.bind(v, t);
    return out;
}

Term rename(const Term& t, const std::map<Var, Var>& r) {
    if (t.is_var()) {
        auto it = r.find(t.name());
        return it == r.end() ? t : Term::var(it->second);
    }
    if (t.arity() == 0) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(rename(a, r));
    return Term::app(t.name(), std::move(args));
}

UnifyResult mgu_terms(const std::vector<Equation>& equations) {
    Substitution sigma;
    std::deque<Equation> work(equations.begin(), equations.end());
    while (!work.empty()) {
        Term s = apply(sigma, work.front().first);
        Term t = apply(sigma, work.front().second);
        work.pop_front();
        if (s == t) continue;
        if (!s.is_var() && t.is_var()) std::swap(s, t);
        if (s.is_var()) {
            if (occ(s.name(), t) > 0) return {std::nullopt, ErrorKind::OccurCheck};
            sigma = compose(sigma, Substitution{{s.name(), t}});
            continue;
        }
        if (s.name() != t.name() || s.arity() != t.arity()) return {std::nullopt, ErrorKind::Clash};
        for (size_t i = s.arity(); i-- > 0;) work.emplace_front(s.args()[i], t.args()[i]);
    }
    return {std::move(sigma), ErrorKind::Clash};
}

Substitution mgu_or_throw(const std::vector<Equation>& equations) {
    UnifyResult r = mgu_terms(equations);
    if (!r.ok()) throw Error(r.error, "terms do not unify");
    return *r.subst;
}

namespace {

bool match_into(const Term& pattern, const Term& target, std::map<Var, Term>& delta) {
    if (pattern.is_var()) {
        auto [it, inserted] = delta.emplace(pattern.name(), target);
        return inserted || it->second == target;
    }
    if (target.is_var() || pattern.name() != target.name() || pattern.arity() != target.arity()) return false;
    for (size_t i = 0; i < pattern.arity(); ++i)
        if (!match_into(pattern.args()[i], target.args()[i], delta)) return false;
    return true;
}

} // namespace

std::optional<Substitution> match_terms(const std::vector<Equation>& pattern_target) {
    std::map<Var, Term> delta;
    for (const auto& [p, t] : pattern_target)
        if (!match_into(p, t, delta)) return std::nullopt;
    Substitution out;
    for (const auto& [v, t] : delta) out.bind(v, t);
    return out;
}

Multiset preimage_var(const Substitution& s, const Var& v) {
    Multiset m;
    if (!s.find(v)) m.add(v, 1);
    for (const auto& [w, t] : s.bindings()) m.add(w, occ(v, t));
    return m;
}

Multiset preimage_group(const Substitution& s, const Multiset& b) {
    Multiset out;
    for (const auto& [v, n] : b.entries()) out = msum(out, mscale(preimage_var(s, v), n));
    return out;
}

namespace {

bool plain_symbol(const std::string& name) {
    if (name.empty() || is_variable_name(name)) return false;
    return std::all_of(name.begin(), name.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

void format_into(const Term& t, std::string& out) {
    if (t.is_var()) {
        out += t.name();
        return;
    }
    if (t.name() == "[]" && t.arity() == 0) {
        out += "[]";
        return;
    }
    if (t.name() == "." && t.arity() == 2) {
        out += '[';
        format_into(t.args()[0], out);
        Term tail = t.args()[1];
        while (!tail.is_var() && tail.name() == "." && tail.arity() == 2) {
            out += ",";
            format_into(tail.args()[0], out);
            tail = tail.args()[1];
        }
        if (tail.is_var() || !(tail.name() == "[]" && tail.arity() == 0)) {
            out += '|';
            format_into(tail, out);
        }
        out += ']';
        return;
    }
    if (plain_symbol(t.name()))
        out += t.name();
    else
        out += "'" + t.name() + "'";
    if (t.arity() == 0) return;
    out += '(';
    for (size_t i = 0; i < t.arity(); ++i) {
        if (i) out += ',';
        format_into(t.args()[i], out);
    }
    out += ')';
}

} // namespace

std::string format_term(const Term& t) {
    std::string out;
    format_into(t, out);
    return out;
}

std::string format_substitution(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : s.bindings()) {
        if (!first) out += ", ";
        out += v + "/" + format_term(t);
        first = false;
    }
    return out + "}";
}

Term parse_term(std::string_view text) {
    detail::TermReader r(detail::tokenize(text));
    Term t = r.term();
    if (!r.at_end()) r.fail("trailing input after term");
    return t;
}

Substitution parse_substitution(std::string_view text) {
    detail::TermReader r(detail::tokenize(text));
    bool braced = r.accept(detail::Tok::LBrace);
    Substitution s;
    auto closing = braced ? detail::Tok::RBrace : detail::Tok::End;
    if (r.peek().kind != closing) {
        do {
            const detail::Token& v = r.expect(detail::Tok::Ident, "a variable");
            if (!is_variable_name(v.text)) r.fail("'" + v.text + "' is not a variable");
            Var name = v.text;
            r.expect(detail::Tok::Slash, "'/'");
            Term t = r.term();
            if (s.find(name)) r.fail("variable '" + name + "' bound twice");
            s.bind(name, t);
        } while (r.accept(detail::Tok::Comma));
    }
    if (braced) r.expect(detail::Tok::RBrace, "'}'");
    if (!r.at_end()) r.fail("trailing input after substitution");
    return s;
}

} // namespace shlin
