// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/shlin_omega.hpp"

#include <algorithm>
#include <functional>

#include "group_syntax.hpp"

namespace shlin {

OmegaElement::OmegaElement(GroupSet groups, VarSet interest) : groups_(std::move(groups)), interest_(std::move(interest)) {
    for (const auto& g : groups_)
        for (const auto& [v, n] : g.entries())
            if (!interest_.count(v))
                throw Error(ErrorKind::InvalidArgument, "group " + format_multiset(g) + " leaves the interest set " + format_varset(interest_));
    if (!groups_.empty()) groups_.insert(Multiset{});
}

OmegaElement OmegaElement::bottom(VarSet interest) { return OmegaElement({}, std::move(interest)); }

OmegaElement OmegaElement::ground(VarSet interest) { return OmegaElement({Multiset{}}, std::move(interest)); }

OmegaElement OmegaElement::top_free(VarSet interest) {
    GroupSet g{Multiset{}};
    for (const auto& v : interest) g.insert(Multiset::singleton(v));
    return OmegaElement(std::move(g), std::move(interest));
}

OmegaElement alpha_omega(const ExistentialSubstitution& c) {
    const Substitution& rep = c.rep();
    VarSet vs = set_union(rep.vars(), c.interest());
    GroupSet groups{Multiset{}};
    for (const auto& v : vs) groups.insert(mrestrict(preimage_var(rep, v), c.interest()));
    return OmegaElement(std::move(groups), c.interest());
}

bool leq_omega(const OmegaElement& a, const OmegaElement& b) {
    if (a.interest() != b.interest()) return false;
    return std::includes(b.groups().begin(), b.groups().end(), a.groups().begin(), a.groups().end(), GroupLess{});
}

bool approx_omega(const OmegaElement& e, const ExistentialSubstitution& c) { return leq_omega(alpha_omega(c), e); }

std::optional<std::map<Multiset, Multiset::Count>> star_decompose(const Multiset& x, const std::vector<Multiset>& s,
                                                                   const VarSet& u1) {
    std::vector<Multiset> items;
    for (const auto& g : s)
        if (!mrestrict(g, u1).empty() && std::find(items.begin(), items.end(), g) == items.end()) items.push_back(g);
    std::vector<Multiset::Count> counts(items.size(), 0);
    std::function<bool(size_t, const Multiset&)> go = [&](size_t i, const Multiset& rest) -> bool {
        if (rest.empty()) return true;
        if (i == items.size()) return false;
        // Try the largest feasible count first, then fewer copies.
        Multiset::Count maxc = 0;
        Multiset acc;
        while (true) {
            Multiset nxt = msum(acc, items[i]);
            if (!mleq(nxt, rest)) break;
            acc = std::move(nxt);
            ++maxc;
        }
        for (Multiset::Count c = maxc + 1; c-- > 0;) {
            Multiset used = mscale(items[i], c);
            Multiset r;
            for (const auto& [v, n] : rest.entries()) r.add(v, n - used.count(v));
            counts[i] = c;
            if (go(i + 1, r)) return true;
        }
        counts[i] = 0;
        return false;
    };
    if (!go(0, x)) return std::nullopt;
    std::map<Multiset, Multiset::Count> witness;
    for (size_t i = 0; i < items.size(); ++i)
        if (counts[i] > 0) witness[items[i]] = counts[i];
    return witness;
}

OmegaElement match_omega(const OmegaElement& e1, const OmegaElement& e2) {
    const VarSet& u1 = e1.interest();
    const VarSet& u2 = e2.interest();
    VarSet both = set_intersection(u1, u2);
    VarSet only2 = set_difference(u2, u1);
    GroupSet out;
    struct Item {
        Multiset common;
        Multiset outside;
    };
    std::vector<Item> items;
    for (const auto& g : e2.groups()) {
        Multiset common = mrestrict(g, u1);
        if (common.empty())
            out.insert(g);
        else
            items.push_back({common, mrestrict(g, only2)});
    }
    for (const auto& b : e1.groups()) {
        Multiset target = mrestrict(b, both);
        std::function<void(size_t, const Multiset&, const Multiset&)> go = [&](size_t i, const Multiset& rest,
                                                                             const Multiset& outside) {
            if (rest.empty()) {
                out.insert(msum(b, outside));
                return;
            }
            if (i == items.size()) return;
            Multiset used, extra;
            for (Multiset::Count c = 0;; ++c) {
                if (!mleq(used, rest)) break;
                Multiset r;
                for (const auto& [v, n] : rest.entries()) r.add(v, n - used.count(v));
                go(i + 1, r, msum(outside, extra));
                used = msum(used, items[i].common);
                extra = msum(extra, items[i].outside);
            }
        };
        go(0, target, Multiset{});
    }
    return OmegaElement(std::move(out), set_union(u1, u2));
}

OmegaElement project_omega(const OmegaElement& e, const VarSet& v) {
    VarSet u = set_intersection(e.interest(), v);
    GroupSet g;
    for (const auto& b : e.groups()) g.insert(mrestrict(b, u));
    return OmegaElement(std::move(g), std::move(u));
}

OmegaElement rename_omega(const OmegaElement& e, const std::map<Var, Var>& rho) {
    auto map_var = [&](const Var& v) {
        auto it = rho.find(v);
        return it == rho.end() ? v : it->second;
    };
    VarSet u;
    for (const auto& v : e.interest()) u.insert(map_var(v));
    if (u.size() != e.interest().size()) throw Error(ErrorKind::InvalidArgument, "renaming is not injective on the interest set");
    GroupSet g;
    for (const auto& b : e.groups()) {
        Multiset m;
        for (const auto& [v, n] : b.entries()) m.add(map_var(v), n);
        g.insert(std::move(m));
    }
    return OmegaElement(std::move(g), std::move(u));
}

OmegaElement union_omega(const OmegaElement& a, const OmegaElement& b) {
    if (a.interest() != b.interest())
        throw Error(ErrorKind::InterestMismatch, format_varset(a.interest()) + " vs " + format_varset(b.interest()));
    GroupSet g = a.groups();
    g.insert(b.groups().begin(), b.groups().end());
    return OmegaElement(std::move(g), a.interest());
}

std::string format_omega(const OmegaElement& e) {
    std::string body;
    if (e.groups().size() == 1) {
        body = "0";
    } else {
        bool first = true;
        for (const auto& g : e.groups()) {
            if (g.empty()) continue;
            if (!first) body += ", ";
            body += format_multiset(g);
            first = false;
        }
    }
    return "[" + body + "]_" + format_varset(e.interest());
}

OmegaElement parse_omega(std::string_view text) {
    auto [body, vars] = detail::split_element(text);
    VarSet u = parse_varset(vars);
    GroupSet g;
    for (const auto& item : detail::split_top_level(body)) {
        if (item.find('*') != std::string::npos || item.find("inf") != std::string::npos)
            throw Error(ErrorKind::SyntaxError, "infinite exponent in an omega group: " + item);
        g.insert(parse_multiset(item));
    }
    return OmegaElement(std::move(g), std::move(u));
}

} // namespace shlin
