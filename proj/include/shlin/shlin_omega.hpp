// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "shlin/existential.hpp"
#include "shlin/multiset.hpp"

namespace shlin {

struct GroupLess {
    bool operator()(const Multiset& a, const Multiset& b) const { return group_less(a, b); }
};
using GroupSet = std::set<Multiset, GroupLess>;

// Element [S]_U of ShLin^ω: a finite set of ω-sharing groups over U. A nonempty set always holds the empty group.
class OmegaElement {
  public:
    OmegaElement() = default;
    OmegaElement(GroupSet groups, VarSet interest);

    // The element with no groups, which describes no substitution.
    static OmegaElement bottom(VarSet interest);
    // [{∅}]_U
    static OmegaElement ground(VarSet interest);
    // Every variable of U free and unaliased.
    static OmegaElement top_free(VarSet interest);

    [[nodiscard]] const GroupSet& groups() const { return groups_; }
    [[nodiscard]] const VarSet& interest() const { return interest_; }
    [[nodiscard]] bool is_bottom() const { return groups_.empty(); }
    [[nodiscard]] bool contains(const Multiset& b) const { return groups_.count(b) > 0; }

    friend bool operator==(const OmegaElement&, const OmegaElement&) = default;

  private:
    GroupSet groups_;
    VarSet interest_;
};

OmegaElement alpha_omega(const ExistentialSubstitution& c);
bool leq_omega(const OmegaElement& a, const OmegaElement& b);
bool approx_omega(const OmegaElement& e, const ExistentialSubstitution& c);

// Decides x ∈ (S)* where every member of s has nonempty restriction to u1. On success the witness lists how many
// copies of each member of s were used.
std::optional<std::map<Multiset, Multiset::Count>> star_decompose(const Multiset& x, const std::vector<Multiset>& s,
                                                                   const VarSet& u1);

OmegaElement match_omega(const OmegaElement& e1, const OmegaElement& e2);

OmegaElement project_omega(const OmegaElement& e, const VarSet& v);
OmegaElement rename_omega(const OmegaElement& e, const std::map<Var, Var>& rho);
// Throws Error(InterestMismatch) when the interest sets differ.
OmegaElement union_omega(const OmegaElement& a, const OmegaElement& b);

// Groups are printed in canonical order and the empty group is left implicit unless it is alone (`[0]_U`).
std::string format_omega(const OmegaElement& e);
OmegaElement parse_omega(std::string_view text);

} // namespace shlin
