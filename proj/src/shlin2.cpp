// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/shlin2.hpp"

#include <algorithm>
#include <map>

#include "group_syntax.hpp"

namespace shlin {

TwoGroup::TwoGroup(std::initializer_list<Entry> entries) {
    for (const auto& [v, e] : entries) set(v, e);
}

int TwoGroup::exp(const Var& v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v, [](const Entry& e, const Var& k) { return e.first < k; });
    return (it != entries_.end() && it->first == v) ? static_cast<int>(it->second) : 0;
}

void TwoGroup::set(const Var& v, Exp e) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v, [](const Entry& x, const Var& k) { return x.first < k; });
    if (it != entries_.end() && it->first == v)
        it->second = e;
    else
        entries_.insert(it, {v, e});
}

bool TwoGroupLess::operator()(const TwoGroup& a, const TwoGroup& b) const {
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    size_t n = std::min(ea.size(), eb.size());
    for (size_t i = 0; i < n; ++i)
        if (ea[i].first != eb[i].first) return ea[i].first < eb[i].first;
    if (ea.size() != eb.size()) return ea.size() < eb.size();
    for (size_t i = 0; i < n; ++i)
        if (ea[i].second != eb[i].second) return ea[i].second < eb[i].second;
    return false;
}

TwoGroup alpha2_group(const Multiset& b) {
    TwoGroup o;
    for (const auto& [v, n] : b.entries()) o.set(v, n <= 1 ? Exp::One : Exp::Inf);
    return o;
}

TwoGroup oplus(const TwoGroup& o, const TwoGroup& p) {
    TwoGroup r = o;
    for (const auto& [v, e] : p.entries()) r.set(v, o.exp(v) == 0 ? e : Exp::Inf);
    return r;
}

TwoGroup square(const TwoGroup& o) { return oplus(o, o); }

bool leq2(const TwoGroup& o, const TwoGroup& p) {
    const auto& a = o.entries();
    const auto& b = p.entries();
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].first != b[i].first || a[i].second > b[i].second) return false;
    return true;
}

TwoGroup restrict2(const TwoGroup& o, const VarSet& v) {
    TwoGroup r;
    for (const auto& [x, e] : o.entries())
        if (v.count(x)) r.set(x, e);
    return r;
}

VarSet support2(const TwoGroup& o) {
    VarSet s;
    for (const auto& e : o.entries()) s.insert(s.end(), e.first);
    return s;
}

TwoGroup linearize(const TwoGroup& o) {
    TwoGroup r;
    for (const auto& e : o.entries()) r.set(e.first, Exp::One);
    return r;
}

TwoGroup meet_on(const TwoGroup& o, const TwoGroup& p, const VarSet& u1, const VarSet& u2) {
    TwoGroup r;
    for (const auto& [v, e] : o.entries())
        if (u1.count(v) && !u2.count(v)) r.set(v, e);
    for (const auto& [v, e] : p.entries()) {
        if (u1.count(v) && !u2.count(v)) continue;
        if (u1.count(v) && u2.count(v)) {
            int m = std::min(o.exp(v), static_cast<int>(e));
            if (m > 0) r.set(v, static_cast<Exp>(m));
        } else {
            r.set(v, e);
        }
    }
    return r;
}

Multiset lift_group(const TwoGroup& o, Multiset::Count inf_as) {
    Multiset m;
    for (const auto& [v, e] : o.entries()) m.add(v, e == Exp::One ? 1 : inf_as);
    return m;
}

TwoGroupSet maximal_antichain(const TwoGroupSet& s) {
    // ≤ only relates groups with equal support, so the set ordering keeps each support in one contiguous run.
    TwoGroupSet out;
    std::vector<const TwoGroup*> run;
    auto flush = [&]() {
        for (const auto* a : run) {
            bool dominated = std::any_of(run.begin(), run.end(), [&](const TwoGroup* b) { return b != a && leq2(*a, *b); });
            if (!dominated) out.insert(*a);
        }
        run.clear();
    };
    for (const auto& g : s) {
        if (!run.empty() && support2(*run.front()) != support2(g)) flush();
        run.push_back(&g);
    }
    flush();
    return out;
}

TwoGroupSet down_closure(const TwoGroupSet& maximals) {
    TwoGroupSet out;
    for (const auto& m : maximals) {
        std::vector<Var> infs;
        for (const auto& [v, e] : m.entries())
            if (e == Exp::Inf) infs.push_back(v);
        for (size_t mask = 0; mask < (size_t{1} << infs.size()); ++mask) {
            TwoGroup g = m;
            for (size_t i = 0; i < infs.size(); ++i)
                if (mask & (size_t{1} << i)) g.set(infs[i], Exp::One);
            out.insert(g);
        }
    }
    return out;
}

bool in_down_closure(const TwoGroup& o, const TwoGroupSet& maximals) {
    return std::any_of(maximals.begin(), maximals.end(), [&](const TwoGroup& m) { return leq2(o, m); });
}

TwoElement::TwoElement(TwoGroupSet groups, VarSet interest) : interest_(std::move(interest)) {
    for (const auto& g : groups)
        for (const auto& [v, e] : g.entries())
            if (!interest_.count(v))
                throw Error(ErrorKind::InvalidArgument, "group " + format_two_group(g) + " leaves the interest set " + format_varset(interest_));
    if (!groups.empty()) groups.insert(TwoGroup{});
    maximals_ = maximal_antichain(groups);
}

TwoElement TwoElement::bottom(VarSet interest) { return TwoElement({}, std::move(interest)); }
TwoElement TwoElement::ground(VarSet interest) { return TwoElement({TwoGroup{}}, std::move(interest)); }
TwoElement TwoElement::top_free(VarSet interest) { return alpha2(OmegaElement::top_free(std::move(interest))); }

TwoElement alpha2(const OmegaElement& e) {
    TwoGroupSet g;
    for (const auto& b : e.groups()) g.insert(alpha2_group(b));
    return TwoElement(std::move(g), e.interest());
}

bool gamma2_contains(const TwoElement& e, const Multiset& b) { return e.contains(alpha2_group(b)); }

OmegaElement gamma2_capped(const TwoElement& e, Multiset::Count cap) {
    GroupSet out;
    for (const auto& m : e.maximals()) {
        std::vector<Var> vars;
        std::vector<Multiset::Count> hi;
        for (const auto& [v, x] : m.entries()) {
            vars.push_back(v);
            hi.push_back(x == Exp::One ? 1 : cap);
        }
        std::vector<Multiset::Count> cur(vars.size(), 1);
        while (true) {
            Multiset b;
            for (size_t i = 0; i < vars.size(); ++i) b.add(vars[i], cur[i]);
            out.insert(b);
            size_t i = 0;
            while (i < cur.size() && cur[i] == hi[i]) cur[i++] = 1;
            if (i == cur.size()) break;
            ++cur[i];
        }
    }
    return OmegaElement(std::move(out), e.interest());
}

bool leq2_elem(const TwoElement& a, const TwoElement& b) {
    if (a.interest() != b.interest()) return false;
    return std::all_of(a.maximals().begin(), a.maximals().end(), [&](const TwoGroup& o) { return b.contains(o); });
}

bool prop_abstraction2_check(const Multiset& b, const VarSet& v, const std::vector<Multiset>& xs) {
    bool c1 = msupport(b) == support2(alpha2_group(b));
    bool c2 = alpha2_group(mrestrict(b, v)) == restrict2(alpha2_group(b), v);
    Multiset sum;
    TwoGroup osum;
    for (const auto& x : xs) {
        sum = msum(sum, x);
        osum = oplus(osum, alpha2_group(x));
    }
    bool c3 = alpha2_group(sum) == osum;
    bool c4 = alpha2_group(msum(b, b)) == square(alpha2_group(b));
    return c1 && c2 && c3 && c4;
}

namespace {

// All values ⊕X for X a subset of `items`.
TwoGroupSet subset_sums(const std::vector<TwoGroup>& items) {
    TwoGroupSet sums{TwoGroup{}};
    for (const auto& h : items) {
        std::vector<TwoGroup> add;
        for (const auto& s : sums) add.push_back(oplus(s, h));
        sums.insert(add.begin(), add.end());
    }
    return sums;
}

} // namespace

TwoElement match2_ref(const TwoElement& e1, const TwoElement& e2, const Match2Options& opt) {
    const VarSet& u1 = e1.interest();
    const VarSet& u2 = e2.interest();
    VarSet u = set_union(u1, u2);
    if (u.size() > opt.max_vars)
        throw Error(ErrorKind::TooLarge, std::to_string(u.size()) + " variables exceed the cap of " + std::to_string(opt.max_vars));
    TwoGroupSet result;
    std::vector<TwoGroup> second;
    for (const auto& o : down_closure(e2.maximals())) {
        if (restrict2(o, u1).empty())
            result.insert(o);
        else
            second.push_back(o);
    }
    std::vector<TwoGroup> with_squares = second;
    for (const auto& o : second) with_squares.push_back(square(o));
    TwoGroupSet star = subset_sums(with_squares);

    std::vector<Var> vars(u.begin(), u.end());
    std::vector<int> digits(vars.size(), 0);
    while (true) {
        TwoGroup o;
        for (size_t i = 0; i < vars.size(); ++i)
            if (digits[i]) o.set(vars[i], static_cast<Exp>(digits[i]));
        if (in_down_closure(restrict2(o, u1), e1.maximals()) && star.count(restrict2(o, u2))) result.insert(o);
        size_t i = 0;
        while (i < digits.size() && digits[i] == 2) digits[i++] = 0;
        if (i == digits.size()) break;
        ++digits[i];
    }
    return TwoElement(std::move(result), u);
}

TwoGroupSet match2_opt(const TwoGroupSet& t1, const VarSet& u1, const TwoGroupSet& t2, const VarSet& u2) {
    TwoGroupSet result;
    std::vector<TwoGroup> second;
    for (const auto& o : t2) {
        if (restrict2(o, u1).empty())
            result.insert(o);
        else
            second.push_back(o);
    }
    const size_t n = second.size();
    for (const auto& o : t1) {
        TwoGroup o_common = restrict2(o, u2);
        std::vector<bool> bar(n);
        for (size_t i = 0; i < n; ++i) {
            bar[i] = true;
            for (const auto& [v, e] : second[i].entries())
                if (u1.count(v) && o.exp(v) != 2) bar[i] = false;
        }
        for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
            TwoGroup lin_sum, sum;
            for (size_t i = 0; i < n; ++i) {
                if (!(mask & (size_t{1} << i))) continue;
                lin_sum = oplus(lin_sum, linearize(second[i]));
                sum = oplus(sum, second[i]);
            }
            if (!leq2(restrict2(lin_sum, u1), o_common)) continue;
            TwoGroup r = meet_on(o, sum, u1, u2);
            for (size_t i = 0; i < n; ++i)
                if ((mask & (size_t{1} << i)) && bar[i]) r = oplus(r, second[i]);
            result.insert(r);
        }
    }
    return maximal_antichain(result);
}

TwoElement match2(const TwoElement& e1, const TwoElement& e2) {
    return TwoElement(match2_opt(e1.maximals(), e1.interest(), e2.maximals(), e2.interest()), set_union(e1.interest(), e2.interest()));
}

TwoElement project2(const TwoElement& e, const VarSet& v) {
    VarSet u = set_intersection(e.interest(), v);
    TwoGroupSet g;
    for (const auto& o : e.maximals()) g.insert(restrict2(o, u));
    return TwoElement(std::move(g), std::move(u));
}

TwoElement rename2(const TwoElement& e, const std::map<Var, Var>& rho) {
    auto map_var = [&](const Var& v) {
        auto it = rho.find(v);
        return it == rho.end() ? v : it->second;
    };
    VarSet u;
    for (const auto& v : e.interest()) u.insert(map_var(v));
    if (u.size() != e.interest().size()) throw Error(ErrorKind::InvalidArgument, "renaming is not injective on the interest set");
    TwoGroupSet g;
    for (const auto& o : e.maximals()) {
        TwoGroup r;
        for (const auto& [v, x] : o.entries()) r.set(map_var(v), x);
        g.insert(std::move(r));
    }
    return TwoElement(std::move(g), std::move(u));
}

TwoElement union2(const TwoElement& a, const TwoElement& b) {
    if (a.interest() != b.interest())
        throw Error(ErrorKind::InterestMismatch, format_varset(a.interest()) + " vs " + format_varset(b.interest()));
    TwoGroupSet g = a.maximals();
    g.insert(b.maximals().begin(), b.maximals().end());
    return TwoElement(std::move(g), a.interest());
}

std::string format_two_group(const TwoGroup& o) {
    if (o.empty()) return "0";
    std::vector<detail::Factor> f;
    for (const auto& [v, e] : o.entries()) f.emplace_back(v, e == Exp::Inf ? "*" : "");
    return detail::format_factors(f);
}

TwoGroup parse_two_group(std::string_view text) {
    TwoGroup o;
    for (const auto& [v, exp] : detail::parse_factors(text)) {
        Exp e;
        if (exp.empty() || exp == "1")
            e = Exp::One;
        else if (exp == "*")
            e = Exp::Inf;
        else
            throw Error(ErrorKind::SyntaxError, "exponent must be 1 or * in a 2-sharing group: " + std::string(text));
        if (o.exp(v)) throw Error(ErrorKind::SyntaxError, "repeated variable in 2-sharing group: " + std::string(text));
        o.set(v, e);
    }
    return o;
}

std::string format_two(const TwoElement& e) {
    std::string body;
    if (e.maximals().size() == 1) {
        body = "0";
    } else {
        bool first = true;
        for (const auto& o : e.maximals()) {
            if (o.empty()) continue;
            if (!first) body += ", ";
            body += format_two_group(o);
            first = false;
        }
    }
    return "[" + body + "]_" + format_varset(e.interest());
}

TwoElement parse_two(std::string_view text) {
    auto [body, vars] = detail::split_element(text);
    VarSet u = parse_varset(vars);
    TwoGroupSet g;
    for (const auto& item : detail::split_top_level(body)) g.insert(parse_two_group(item));
    return TwoElement(std::move(g), std::move(u));
}

} // namespace shlin
