// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "shlin/shlin2.hpp"

namespace shlin {

using SharingSet = std::set<VarSet>;

// [S, L, U]: set-sharing groups, linear variables and the interest set. Ground variables are always linear.
class SlElement {
  public:
    SlElement() = default;
    SlElement(SharingSet sharing, VarSet linear, VarSet interest);

    static SlElement bottom(VarSet interest);
    static SlElement ground(VarSet interest);
    static SlElement top_free(VarSet interest);

    [[nodiscard]] const SharingSet& sharing() const { return sharing_; }
    [[nodiscard]] const VarSet& linear() const { return linear_; }
    [[nodiscard]] const VarSet& interest() const { return interest_; }
    [[nodiscard]] bool is_bottom() const { return sharing_.empty(); }

    friend bool operator==(const SlElement&, const SlElement&) = default;

  private:
    SharingSet sharing_;
    VarSet linear_;
    VarSet interest_;
};

SlElement alpha_sl(const TwoElement& e);
// B_L: ∞ on B∖L, 1 on B∩L.
TwoGroup group_with_linearity(const VarSet& b, const VarSet& l);
TwoGroupSet gamma_sl_maximals(const SlElement& e);
TwoElement gamma_sl(const SlElement& e);
bool leq_sl(const SlElement& a, const SlElement& b);

// Variables occurring in at least two distinct groups of x.
VarSet nl(const SharingSet& x);

SlElement match_sl(const SlElement& e1, const SlElement& e2);

SlElement project_sl(const SlElement& e, const VarSet& v);
SlElement rename_sl(const SlElement& e, const std::map<Var, Var>& rho);
SlElement union_sl(const SlElement& a, const SlElement& b);

// `[{uv, ux}, lin={u,v}]_{u,v,x}`
std::string format_sl(const SlElement& e);
SlElement parse_sl(std::string_view text);

} // namespace shlin
