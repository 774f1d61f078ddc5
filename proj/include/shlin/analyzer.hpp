// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "shlin/oracle.hpp"

namespace shlin {

struct Atom {
    std::string predicate;
    std::vector<Term> args;
};

struct Clause {
    Atom head;
    std::vector<Atom> body;
    int line = 0;
};

struct Program {
    std::vector<Clause> clauses;
};

// Facts `p(t1,...,tn).` and rules `p(...) :- q(...), r(...).`; `%` starts a line comment.
// List sugar becomes '.'/2 and '[]'. Throws Error(SyntaxError) with line and column.
Program parse_program(std::string_view text);
// A single atom with an optional trailing '.'.
Atom parse_goal(std::string_view text);
std::string format_atom(const Atom& a);
VarSet atom_vars(const Atom& a);
VarSet clause_vars(const Clause& c);

// ---- domain-polymorphic elements ----

using AbstractElement = std::variant<OmegaElement, TwoElement, SlElement>;

DomainTag domain_of(const AbstractElement& e);
AbstractElement parse_element(DomainTag d, std::string_view text);
std::string format_element(const AbstractElement& e);
const VarSet& element_interest(const AbstractElement& e);
bool is_bottom_element(const AbstractElement& e);
AbstractElement bottom_element(DomainTag d, const VarSet& u);
AbstractElement project_element(const AbstractElement& e, const VarSet& v);
AbstractElement union_element(const AbstractElement& a, const AbstractElement& b);
bool leq_element(const AbstractElement& a, const AbstractElement& b);
AbstractElement match_element(const AbstractElement& a, const AbstractElement& b);
AbstractElement rename_element(const AbstractElement& e, const std::map<Var, Var>& rho);
// Both elements over disjoint interest sets, describing independent substitutions.
AbstractElement juxtapose(const AbstractElement& a, const AbstractElement& b);
// Adds every variable of `fresh` as a free, unaliased variable.
AbstractElement extend_free(const AbstractElement& e, const VarSet& fresh);
// Counts above `cap` are clipped (ω only; other domains are returned unchanged).
AbstractElement saturate(const AbstractElement& e, Multiset::Count cap);
// Groups of `b` not covered by `a`, printed in b's domain. For ShLin² only maximal groups are listed.
std::vector<std::string> group_difference(const AbstractElement& a, const AbstractElement& b);

// Sound binding-at-a-time abstract unification with x/t. Not optimal.
// ω multiplicities produced by the closure fallback are clipped at `cap`.
AbstractElement baseline_amgu(const AbstractElement& e, const Var& x, const Term& t, Multiset::Count cap = 3);
// Folds baseline_amgu over the bindings of an idempotent substitution.
AbstractElement amgu_subst(const AbstractElement& e, const Substitution& theta, Multiset::Count cap = 3);

// ---- forward and backward unification ----

enum class BackwardMode { Matching, Mgu };
const char* to_string(BackwardMode m);
BackwardMode parse_mode(const std::string& s);

struct ForwardResult {
    Substitution theta;    // mgu of goal and head arguments
    bool unified = false;
    AbstractElement full;  // over vars(call) ∪ clause variables
    AbstractElement entry; // projection onto the clause variables
};

// The clause variables (`head` plus `extra`) must be disjoint from the call's interest set.
// Throws Error(PredicateMismatch) when name or arity differ.
ForwardResult forward_unify(const AbstractElement& call, const Atom& goal, const Atom& head, const VarSet& extra = {},
                            Multiset::Count cap = 3);
// Answer over the call's interest set.
AbstractElement backward_unify(const AbstractElement& call, const AbstractElement& exit, const ForwardResult& fwd,
                               BackwardMode mode, Multiset::Count cap = 3);

// ---- analysis ----

enum class Step { Full, Entry, Exit };
const char* to_string(Step s);

// Replacement values for steps of the top-level call, keyed by 1-based clause index.
struct TraceInjection {
    std::map<std::pair<std::size_t, Step>, AbstractElement> steps;
};
// Lines `<clause-index> <full|entry|exit> <element>`; blank lines and `%` comments are skipped.
TraceInjection parse_injection(DomainTag d, std::string_view text);

struct FixpointLimits {
    int max_iterations = 100;
    Multiset::Count omega_cap = 3;
};

struct AnalysisRequest {
    Program program;
    Atom goal;
    AbstractElement call; // interest set ⊇ vars(goal); the answer ranges over the same set
    BackwardMode mode = BackwardMode::Matching;
    FixpointLimits limits;
    std::optional<TraceInjection> injection;
};

struct ClauseTrace {
    int depth = 0;
    std::size_t clause = 0; // 1-based
    std::string goal;
    AbstractElement call, full, entry, exit, answer;
    bool unified = false;
    std::vector<Step> injected;
};

struct AnalysisResult {
    AbstractElement answer;
    std::vector<ClauseTrace> trace; // final iteration, in visiting order
    int iterations = 0;
    std::size_t memo_entries = 0;
};

// Throws Error(FixpointLimitExceeded), Error(InterestMismatch) or Error(InvalidArgument) for undefined predicates.
AnalysisResult analyze(const AnalysisRequest& req);

std::string format_trace(const AnalysisResult& r);

} // namespace shlin
