// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "shlin/terms.hpp"

namespace shlin {

// Class [θ]_U of an idempotent substitution modulo renaming outside U. The stored representative is canonical:
// dom(rep) = U, and every range variable is `_k`, numbered by first occurrence in a depth-first walk of rep(u)
// for u ∈ U in sorted order.
class ExistentialSubstitution {
  public:
    ExistentialSubstitution() = default;

    [[nodiscard]] const Substitution& rep() const { return rep_; }
    [[nodiscard]] const VarSet& interest() const { return interest_; }

    friend bool operator==(const ExistentialSubstitution&, const ExistentialSubstitution&) = default;

  private:
    friend ExistentialSubstitution canonicalize(const Substitution& theta, const VarSet& u);
    Substitution rep_;
    VarSet interest_;
};

ExistentialSubstitution canonicalize(const Substitution& theta, const VarSet& u);

// θ1 ⪯_U θ2: some δ gives θ1(x) = δ(θ2(x)) for every x ∈ U.
bool eleq(const Substitution& theta1, const Substitution& theta2, const VarSet& u);

std::optional<ExistentialSubstitution> try_emgu(const ExistentialSubstitution& c1, const ExistentialSubstitution& c2);
// Throws Error(UnificationFailure).
ExistentialSubstitution emgu(const ExistentialSubstitution& c1, const ExistentialSubstitution& c2);
ExistentialSubstitution emgu_subst(const ExistentialSubstitution& c, const Substitution& delta);

// std::nullopt is the Undefined result.
std::optional<ExistentialSubstitution> ematch(const ExistentialSubstitution& c1, const ExistentialSubstitution& c2);

ExistentialSubstitution eproject(const ExistentialSubstitution& c, const VarSet& v);

// `[{x/a, y/b}]_{x,y}`
std::string format_existential(const ExistentialSubstitution& c);
// Accepts the braced form and `[x/a, y/b]_{x,y}`.
ExistentialSubstitution parse_existential(std::string_view text);

} // namespace shlin
