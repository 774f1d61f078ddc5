// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shlin/common.hpp"

namespace shlin {

// Finite-support multiset of variables. Entries are kept sorted by variable with strictly positive counts.
class Multiset {
  public:
    using Count = std::uint32_t;
    using Entry = std::pair<Var, Count>;

    Multiset() = default;
    Multiset(std::initializer_list<Entry> entries);

    static Multiset singleton(const Var& v, Count n = 1);

    [[nodiscard]] Count count(const Var& v) const;
    void add(const Var& v, Count n);
    // Sets the count of `v`; a zero count removes it.
    void set(const Var& v, Count n);

    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
    [[nodiscard]] Count mass() const;
    [[nodiscard]] Count max_count() const;

    friend bool operator==(const Multiset&, const Multiset&) = default;
    friend auto operator<=>(const Multiset& a, const Multiset& b) { return a.entries_ <=> b.entries_; }

  private:
    std::vector<Entry> entries_;
};

Multiset msum(const Multiset& a, const Multiset& b);
Multiset mrestrict(const Multiset& a, const VarSet& x);
VarSet msupport(const Multiset& a);
// a scaled by k (used for repeated summands).
Multiset mscale(const Multiset& a, Multiset::Count k);
// Pointwise a <= b.
bool mleq(const Multiset& a, const Multiset& b);

// Canonical group order: support compared lexicographically as a sorted variable list, then counts.
bool group_less(const Multiset& a, const Multiset& b);

// `x^2y`, `uvxz^2`; `0` for the empty multiset. Factors are joined with `.` when some variable name is longer
// than one character, as in `w1.w2^2`.
std::string format_multiset(const Multiset& m);
Multiset parse_multiset(std::string_view text);

Multiset::Count checked_add(Multiset::Count a, Multiset::Count b);
Multiset::Count checked_mul(Multiset::Count a, Multiset::Count b);

} // namespace shlin
