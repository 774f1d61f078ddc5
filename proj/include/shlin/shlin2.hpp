// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shlin/shlin_omega.hpp"

namespace shlin {

enum class Exp : std::uint8_t { One = 1, Inf = 2 };

// Map from variables to {1, ∞}; absent variables have exponent 0.
class TwoGroup {
  public:
    using Entry = std::pair<Var, Exp>;
    TwoGroup() = default;
    TwoGroup(std::initializer_list<Entry> entries);

    [[nodiscard]] int exp(const Var& v) const; // 0, 1 or 2 (= ∞)
    void set(const Var& v, Exp e);
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

    friend bool operator==(const TwoGroup&, const TwoGroup&) = default;
    friend auto operator<=>(const TwoGroup& a, const TwoGroup& b) { return a.entries_ <=> b.entries_; }

  private:
    std::vector<Entry> entries_;
};

struct TwoGroupLess {
    bool operator()(const TwoGroup& a, const TwoGroup& b) const;
};
using TwoGroupSet = std::set<TwoGroup, TwoGroupLess>;

TwoGroup alpha2_group(const Multiset& b);
TwoGroup oplus(const TwoGroup& o, const TwoGroup& p);
TwoGroup square(const TwoGroup& o);
// Same support and pointwise ≤.
bool leq2(const TwoGroup& o, const TwoGroup& p);
TwoGroup restrict2(const TwoGroup& o, const VarSet& v);
VarSet support2(const TwoGroup& o);
// All exponents set to 1.
TwoGroup linearize(const TwoGroup& o);
// Three-way meet used by the optimized matcher: o on U1∖U2, min on U1∩U2, p elsewhere.
TwoGroup meet_on(const TwoGroup& o, const TwoGroup& p, const VarSet& u1, const VarSet& u2);
// Representative multiset with ∞ mapped to `inf_as`.
Multiset lift_group(const TwoGroup& o, Multiset::Count inf_as = 2);

// Reduces a set of 2-groups to its maximal elements.
TwoGroupSet maximal_antichain(const TwoGroupSet& s);
// All groups below some member of `maximals`.
TwoGroupSet down_closure(const TwoGroupSet& maximals);
bool in_down_closure(const TwoGroup& o, const TwoGroupSet& maximals);

// Downward-closed element [T]_U of ShLin² kept as its maximal antichain.
class TwoElement {
  public:
    TwoElement() = default;
    TwoElement(TwoGroupSet groups, VarSet interest);

    static TwoElement bottom(VarSet interest);
    static TwoElement ground(VarSet interest);
    static TwoElement top_free(VarSet interest);

    [[nodiscard]] const TwoGroupSet& maximals() const { return maximals_; }
    [[nodiscard]] const VarSet& interest() const { return interest_; }
    [[nodiscard]] bool is_bottom() const { return maximals_.empty(); }
    [[nodiscard]] bool contains(const TwoGroup& o) const { return in_down_closure(o, maximals_); }

    friend bool operator==(const TwoElement&, const TwoElement&) = default;

  private:
    TwoGroupSet maximals_;
    VarSet interest_;
};

TwoElement alpha2(const OmegaElement& e);
bool gamma2_contains(const TwoElement& e, const Multiset& b);
// Finite part of the concretization: every ω-group with counts ≤ cap whose abstraction lies in e.
OmegaElement gamma2_capped(const TwoElement& e, Multiset::Count cap);
bool leq2_elem(const TwoElement& a, const TwoElement& b);

// Conjunction of the four clauses relating α₂ to support, restriction, sums and squares.
bool prop_abstraction2_check(const Multiset& b, const VarSet& v, const std::vector<Multiset>& xs);

struct Match2Options {
    size_t max_vars = 10;
};
// Literal definition over the full downward closures; enumerates Sg²(U1 ∪ U2). Throws Error(TooLarge).
TwoElement match2_ref(const TwoElement& e1, const TwoElement& e2, const Match2Options& opt = {});
// Maximal-element algorithm; returns an antichain.
TwoGroupSet match2_opt(const TwoGroupSet& t1, const VarSet& u1, const TwoGroupSet& t2, const VarSet& u2);
TwoElement match2(const TwoElement& e1, const TwoElement& e2);

TwoElement project2(const TwoElement& e, const VarSet& v);
TwoElement rename2(const TwoElement& e, const std::map<Var, Var>& rho);
TwoElement union2(const TwoElement& a, const TwoElement& b);

std::string format_two_group(const TwoGroup& o);
TwoGroup parse_two_group(std::string_view text);
// `[x^*y, xz^*]_{x,y,z}`; `↓` prefix accepted on input.
std::string format_two(const TwoElement& e);
TwoElement parse_two(std::string_view text);

} // namespace shlin
