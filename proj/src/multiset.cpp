// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/multiset.hpp"

#include <algorithm>
#include <limits>

#include "group_syntax.hpp"

namespace shlin {

Multiset::Count checked_add(Multiset::Count a, Multiset::Count b) {
    if (a > std::numeric_limits<Multiset::Count>::max() - b) throw Error(ErrorKind::Overflow, "multiset count overflow");
    return a + b;
}

Multiset::Count checked_mul(Multiset::Count a, Multiset::Count b) {
    if (a != 0 && b > std::numeric_limits<Multiset::Count>::max() / a)
        throw Error(ErrorKind::Overflow, "multiset count overflow");
    return a * b;
}

Multiset::Multiset(std::initializer_list<Entry> entries) {
    for (const auto& [v, n] : entries) add(v, n);
}

Multiset Multiset::singleton(const Var& v, Count n) {
    Multiset m;
    m.add(v, n);
    return m;
}

Multiset::Count Multiset::count(const Var& v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, const Var& key) { return e.first < key; });
    return (it != entries_.end() && it->first == v) ? it->second : 0;
}

void Multiset::add(const Var& v, Count n) {
    if (n == 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, const Var& key) { return e.first < key; });
    if (it != entries_.end() && it->first == v)
        it->second = checked_add(it->second, n);
    else
        entries_.insert(it, {v, n});
}

void Multiset::set(const Var& v, Count n) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, const Var& key) { return e.first < key; });
    bool present = it != entries_.end() && it->first == v;
    if (n == 0) {
        if (present) entries_.erase(it);
    } else if (present) {
        it->second = n;
    } else {
        entries_.insert(it, {v, n});
    }
}

Multiset::Count Multiset::mass() const {
    Count total = 0;
    for (const auto& e : entries_) total = checked_add(total, e.second);
    return total;
}

Multiset::Count Multiset::max_count() const {
    Count m = 0;
    for (const auto& e : entries_) m = std::max(m, e.second);
    return m;
}

Multiset msum(const Multiset& a, const Multiset& b) {
    Multiset r = a;
    for (const auto& [v, n] : b.entries()) r.add(v, n);
    return r;
}

Multiset mrestrict(const Multiset& a, const VarSet& x) {
    Multiset r;
    for (const auto& [v, n] : a.entries())
        if (x.count(v)) r.add(v, n);
    return r;
}

VarSet msupport(const Multiset& a) {
    VarSet s;
    for (const auto& e : a.entries()) s.insert(s.end(), e.first);
    return s;
}

Multiset mscale(const Multiset& a, Multiset::Count k) {
    Multiset r;
    if (k == 0) return r;
    for (const auto& [v, n] : a.entries()) r.add(v, checked_mul(n, k));
    return r;
}

bool mleq(const Multiset& a, const Multiset& b) {
    return std::all_of(a.entries().begin(), a.entries().end(),
                       [&](const Multiset::Entry& e) { return e.second <= b.count(e.first); });
}

bool group_less(const Multiset& a, const Multiset& b) {
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

std::string format_multiset(const Multiset& m) {
    if (m.empty()) return "0";
    std::vector<std::pair<Var, std::string>> factors;
    for (const auto& [v, n] : m.entries()) factors.emplace_back(v, n == 1 ? "" : std::to_string(n));
    return detail::format_factors(factors);
}

Multiset parse_multiset(std::string_view text) {
    Multiset m;
    for (const auto& [v, exp] : detail::parse_factors(text)) {
        Multiset::Count n = 1;
        if (!exp.empty()) {
            if (!std::all_of(exp.begin(), exp.end(), [](char c) { return c >= '0' && c <= '9'; }))
                throw Error(ErrorKind::SyntaxError, "bad exponent '" + exp + "' in group '" + std::string(text) + "'");
            unsigned long long parsed = std::stoull(exp);
            if (parsed > std::numeric_limits<Multiset::Count>::max())
                throw Error(ErrorKind::Overflow, "exponent too large");
            n = static_cast<Multiset::Count>(parsed);
        }
        m.add(v, n);
    }
    return m;
}

} // namespace shlin
