// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/shlin_sl.hpp"

#include <algorithm>
#include <vector>

#include "group_syntax.hpp"

namespace shlin {

namespace {

VarSet vars_of(const SharingSet& s) {
    VarSet out;
    for (const auto& b : s) out.insert(b.begin(), b.end());
    return out;
}

} // namespace

SlElement::SlElement(SharingSet sharing, VarSet linear, VarSet interest)
    : sharing_(std::move(sharing)), interest_(std::move(interest)) {
    for (const auto& b : sharing_)
        if (!is_subset(b, interest_))
            throw Error(ErrorKind::InvalidArgument, "sharing group " + format_varset(b) + " leaves the interest set " + format_varset(interest_));
    if (!sharing_.empty()) sharing_.insert(VarSet{});
    linear_ = set_union(set_intersection(linear, interest_), set_difference(interest_, vars_of(sharing_)));
}

SlElement SlElement::bottom(VarSet interest) { return SlElement({}, {}, std::move(interest)); }
SlElement SlElement::ground(VarSet interest) { return SlElement({VarSet{}}, {}, std::move(interest)); }

SlElement SlElement::top_free(VarSet interest) {
    SharingSet s{VarSet{}};
    for (const auto& v : interest) s.insert(VarSet{v});
    VarSet lin = interest;
    return SlElement(std::move(s), std::move(lin), std::move(interest));
}

SlElement alpha_sl(const TwoElement& e) {
    SharingSet s;
    VarSet lin = e.interest();
    for (const auto& o : e.maximals()) {
        s.insert(support2(o));
        for (const auto& [v, x] : o.entries())
            if (x == Exp::Inf) lin.erase(v);
    }
    return SlElement(std::move(s), std::move(lin), e.interest());
}

TwoGroup group_with_linearity(const VarSet& b, const VarSet& l) {
    TwoGroup o;
    for (const auto& v : b) o.set(v, l.count(v) ? Exp::One : Exp::Inf);
    return o;
}

TwoGroupSet gamma_sl_maximals(const SlElement& e) {
    TwoGroupSet g;
    for (const auto& b : e.sharing()) g.insert(group_with_linearity(b, e.linear()));
    return maximal_antichain(g);
}

TwoElement gamma_sl(const SlElement& e) { return TwoElement(gamma_sl_maximals(e), e.interest()); }

bool leq_sl(const SlElement& a, const SlElement& b) {
    if (a.interest() != b.interest()) return false;
    return std::includes(b.sharing().begin(), b.sharing().end(), a.sharing().begin(), a.sharing().end()) &&
           is_subset(b.linear(), a.linear());
}

VarSet nl(const SharingSet& x) {
    VarSet seen, out;
    for (const auto& b : x)
        for (const auto& v : b)
            if (!seen.insert(v).second) out.insert(v);
    return out;
}

SlElement match_sl(const SlElement& e1, const SlElement& e2) {
    const VarSet& u1 = e1.interest();
    const VarSet& u2 = e2.interest();
    const VarSet& l1 = e1.linear();
    const VarSet& l2 = e2.linear();
    VarSet u = set_union(u1, u2);

    std::vector<std::pair<VarSet, VarSet>> h;
    std::vector<VarSet> second;
    for (const auto& b : e2.sharing()) {
        if (set_intersection(b, u1).empty())
            h.emplace_back(b, l2);
        else
            second.push_back(b);
    }
    const size_t n = second.size();
    std::vector<bool> bar(n);
    for (size_t i = 0; i < n; ++i) bar[i] = set_intersection(second[i], l1).empty();

    for (const auto& b : e1.sharing()) {
        VarSet b_common = set_intersection(b, u2);
        for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
            SharingSet x;
            VarSet joined, bar_vars;
            for (size_t i = 0; i < n; ++i) {
                if (!(mask & (size_t{1} << i))) continue;
                x.insert(second[i]);
                joined.insert(second[i].begin(), second[i].end());
                if (bar[i]) bar_vars.insert(second[i].begin(), second[i].end());
            }
            if (set_intersection(joined, u1) != b_common) continue;
            VarSet nonlin = nl(x);
            if (!set_intersection(l1, nonlin).empty()) continue;
            h.emplace_back(set_union(b, joined), set_difference(set_difference(l2, nonlin), bar_vars));
        }
    }

    SharingSet sharing;
    VarSet linear = u;
    for (const auto& [b, l] : h) {
        sharing.insert(b);
        VarSet keep = set_union(set_union(l1, l), set_difference(u, b));
        linear = set_intersection(linear, keep);
    }
    return SlElement(std::move(sharing), std::move(linear), std::move(u));
}

SlElement project_sl(const SlElement& e, const VarSet& v) {
    VarSet u = set_intersection(e.interest(), v);
    SharingSet s;
    for (const auto& b : e.sharing()) s.insert(set_intersection(b, u));
    VarSet lin = set_intersection(e.linear(), u);
    return SlElement(std::move(s), std::move(lin), std::move(u));
}

SlElement rename_sl(const SlElement& e, const std::map<Var, Var>& rho) {
    auto map_set = [&](const VarSet& in) {
        VarSet out;
        for (const auto& v : in) {
            auto it = rho.find(v);
            out.insert(it == rho.end() ? v : it->second);
        }
        return out;
    };
    VarSet u = map_set(e.interest());
    if (u.size() != e.interest().size()) throw Error(ErrorKind::InvalidArgument, "renaming is not injective on the interest set");
    SharingSet s;
    for (const auto& b : e.sharing()) s.insert(map_set(b));
    return SlElement(std::move(s), map_set(e.linear()), std::move(u));
}

SlElement union_sl(const SlElement& a, const SlElement& b) {
    if (a.interest() != b.interest())
        throw Error(ErrorKind::InterestMismatch, format_varset(a.interest()) + " vs " + format_varset(b.interest()));
    SharingSet s = a.sharing();
    s.insert(b.sharing().begin(), b.sharing().end());
    return SlElement(std::move(s), set_intersection(a.linear(), b.linear()), a.interest());
}

std::string format_sl(const SlElement& e) {
    std::string body;
    if (e.sharing().size() == 1) {
        body = "0";
    } else {
        bool first = true;
        for (const auto& b : e.sharing()) {
            if (b.empty()) continue;
            std::vector<detail::Factor> f;
            for (const auto& v : b) f.emplace_back(v, "");
            if (!first) body += ", ";
            body += detail::format_factors(f);
            first = false;
        }
    }
    std::string lin = format_varset(e.linear());
    return "[{" + body + "}, lin=" + lin + "]_" + format_varset(e.interest());
}

SlElement parse_sl(std::string_view text) {
    auto [body, vars] = detail::split_element(text);
    VarSet u = parse_varset(vars);
    auto parts = detail::split_top_level(body);
    if (parts.size() != 2 || parts[0].empty() || parts[0].front() != '{' || parts[0].back() != '}')
        throw Error(ErrorKind::SyntaxError, "expected '[{groups}, lin={vars}]_{vars}': " + std::string(text));
    std::string lin = trim(parts[1]);
    if (lin.rfind("lin", 0) != 0) throw Error(ErrorKind::SyntaxError, "missing 'lin=' component: " + std::string(text));
    lin = trim(std::string_view(lin).substr(3));
    if (lin.empty() || lin.front() != '=') throw Error(ErrorKind::SyntaxError, "missing '=' after 'lin': " + std::string(text));
    SharingSet s;
    for (const auto& item : detail::split_top_level(std::string_view(parts[0]).substr(1, parts[0].size() - 2))) {
        VarSet b;
        for (const auto& [v, exp] : detail::parse_factors(item)) {
            if (!exp.empty()) throw Error(ErrorKind::SyntaxError, "sharing groups carry no exponents: " + item);
            b.insert(v);
        }
        s.insert(std::move(b));
    }
    return SlElement(std::move(s), parse_varset(lin.substr(1)), std::move(u));
}

} // namespace shlin
