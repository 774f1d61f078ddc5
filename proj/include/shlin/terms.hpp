// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shlin/common.hpp"
#include "shlin/multiset.hpp"

namespace shlin {

// Immutable first-order term: a variable or a symbol applied to arguments (arity >= 0).
class Term {
  public:
    static Term var(Var name);
    static Term app(std::string symbol, std::vector<Term> args = {});

    [[nodiscard]] bool is_var() const { return node_->is_var; }
    [[nodiscard]] const std::string& name() const { return node_->name; }
    [[nodiscard]] const std::vector<Term>& args() const { return node_->args; }
    [[nodiscard]] size_t arity() const { return node_->args.size(); }

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator<(const Term& a, const Term& b);

  private:
    struct Node {
        bool is_var;
        std::string name;
        std::vector<Term> args;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

// Bindings var -> term; trivial bindings x/x are never stored.
class Substitution {
  public:
    Substitution() = default;
    Substitution(std::initializer_list<std::pair<const Var, Term>> bindings);

    void bind(const Var& v, const Term& t);
    [[nodiscard]] const Term* find(const Var& v) const;
    [[nodiscard]] Term image(const Var& v) const;
    [[nodiscard]] bool empty() const { return bindings_.empty(); }
    [[nodiscard]] size_t size() const { return bindings_.size(); }
    [[nodiscard]] const std::map<Var, Term>& bindings() const { return bindings_; }
    [[nodiscard]] VarSet domain() const;
    [[nodiscard]] VarSet range_vars() const;
    // dom ∪ vars(rng)
    [[nodiscard]] VarSet vars() const;
    [[nodiscard]] bool is_idempotent() const;
    [[nodiscard]] Substitution restrict(const VarSet& vs) const;

    friend bool operator==(const Substitution&, const Substitution&) = default;

  private:
    std::map<Var, Term> bindings_;
};

VarSet term_vars(const Term& t);
void collect_vars(const Term& t, VarSet& out);
// Variables in depth-first left-to-right first-occurrence order.
void collect_vars_ordered(const Term& t, std::vector<Var>& out, VarSet& seen);
size_t term_depth(const Term& t);

Multiset::Count occ(const Var& v, const Term& t);
Term apply(const Substitution& s, const Term& t);
// Applies `first`, then `second`: x ↦ apply(second, apply(first, x)). Trivial bindings are dropped.
Substitution compose(const Substitution& first, const Substitution& second);
// Variable renaming; unmapped variables are kept.
Term rename(const Term& t, const std::map<Var, Var>& r);

using Equation = std::pair<Term, Term>;

struct UnifyResult {
    std::optional<Substitution> subst;
    ErrorKind error = ErrorKind::Clash;
    [[nodiscard]] bool ok() const { return subst.has_value(); }
};

// Martelli-Montanari rewriting with eager occur check; the result is idempotent.
UnifyResult mgu_terms(const std::vector<Equation>& equations);
// Throws Error(Clash|OccurCheck) on failure.
Substitution mgu_or_throw(const std::vector<Equation>& equations);

// One-way matching: finds δ with δ(pattern_i) = target_i for all i. Target variables are treated as constants.
std::optional<Substitution> match_terms(const std::vector<Equation>& pattern_target);

// λw. occ(v, θ(w)) over dom(θ) ∪ {v}; unbound w counts as w itself.
Multiset preimage_var(const Substitution& s, const Var& v);
// ⊎ of preimage_var(s, v)^{b(v)}.
Multiset preimage_group(const Substitution& s, const Multiset& b);

std::string format_term(const Term& t);
std::string format_substitution(const Substitution& s);
Term parse_term(std::string_view text);
// `{x/a, y/f(x)}`; the braces are optional.
Substitution parse_substitution(std::string_view text);

} // namespace shlin
