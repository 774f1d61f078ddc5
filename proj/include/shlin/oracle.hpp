// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "shlin/existential.hpp"
#include "shlin/shlin2.hpp"
#include "shlin/shlin_omega.hpp"
#include "shlin/shlin_sl.hpp"

namespace shlin {

enum class DomainTag { Omega, Two, Sl };
const char* to_string(DomainTag d);
// "omega", "two" or "sl"; throws Error(InvalidArgument) otherwise.
DomainTag parse_domain(const std::string& s);

struct TrialConfig {
    std::uint64_t seed = 42;
    std::size_t trials = 1000;
    int max_term_depth = 3;
    int max_vars = 5;
    int multiplicity_cap = 3;
    void validate() const;
};

using Rng = std::mt19937_64;
// Independent stream for trial `index`, derived from the suite seed.
Rng trial_rng(std::uint64_t seed, std::uint64_t index);
std::uint64_t below(Rng& rng, std::uint64_t n);
bool chance(Rng& rng, unsigned percent);

// The first `n` names of u, v, w, x, y, z, u1, v1, ...
std::vector<Var> variable_pool(int n);
VarSet random_subset(const std::vector<Var>& pool, Rng& rng, bool nonempty);

ExistentialSubstitution gen_existential(const VarSet& u, const TrialConfig& cfg, Rng& rng);
// Pairs biased towards ones whose concrete match is defined.
std::pair<ExistentialSubstitution, ExistentialSubstitution> gen_match_pair(const TrialConfig& cfg, Rng& rng);
OmegaElement gen_omega_element(const VarSet& u, const TrialConfig& cfg, Rng& rng);
TwoElement gen_two_element(const VarSet& u, Rng& rng);
SlElement gen_sl_element(const VarSet& u, Rng& rng);

// Vacuously true when the concrete match is undefined.
bool check_match_correct(const ExistentialSubstitution& c1, const ExistentialSubstitution& c2, DomainTag domain);

// One fresh variable per distinct group H of xs; each u ∈ u2 is bound to t(...) holding H(u) copies of that
// variable for every H, or to the constant a when no copy is needed.
Substitution witness_theta2(const std::vector<Multiset>& xs, const VarSet& u2);
// Builds θ1 with e1 approximating [θ1] and b in the abstraction of the concrete match with c2.
// Requires dom(rep(c2)) = interest(c2). Throws Error(NotInMatch).
ExistentialSubstitution witness_theta1(const OmegaElement& e1, const ExistentialSubstitution& c2, const Multiset& b);

struct WitnessReport {
    Multiset group;
    std::string label; // the group as printed in the checked domain
    ExistentialSubstitution theta1;
    ExistentialSubstitution theta2;
    bool verified = false;
};

std::vector<WitnessReport> check_optimality_omega(const OmegaElement& e1, const OmegaElement& e2);
std::vector<WitnessReport> check_optimality_two(const TwoElement& e1, const TwoElement& e2);
// Witnesses every maximal 2-group behind the result and requires the result to equal their abstraction.
std::vector<WitnessReport> check_optimality_sl(const SlElement& e1, const SlElement& e2);

struct EquivalenceOutcome {
    bool two_equal = true;
    bool sl_equal = true;
    std::string detail;
};
EquivalenceOutcome check_equivalence_instance(const TwoElement& t1, const TwoElement& t2, const SlElement& s1, const SlElement& s2);

// Per-trial outcome of a randomized suite.
struct TrialOutcome {
    bool vacuous = false;
    bool ok = true;
    std::size_t checks = 0; // groups witnessed, comparisons made, ...
    std::string detail;     // instance text for failures
};

struct SuiteReport {
    std::string suite;
    std::string domain;
    TrialConfig cfg;
    std::size_t trials = 0;
    std::size_t non_vacuous = 0;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::vector<std::pair<std::size_t, std::string>> failed; // first few, by trial index
    double seconds = 0.0;                                     // not part of the deterministic text

    [[nodiscard]] bool ok() const { return failures == 0; }
    [[nodiscard]] std::string text() const;
    [[nodiscard]] std::string json() const;
};

using TrialFn = std::function<TrialOutcome(std::uint64_t index, Rng& rng)>;

// Reference runner: trials in index order on the calling thread.
std::vector<TrialOutcome> run_trials_serial(const TrialConfig& cfg, const TrialFn& fn);
// OpenMP runner with `jobs` threads (0 = runtime default); outcomes are stored by index.
std::vector<TrialOutcome> run_trials_parallel(const TrialConfig& cfg, const TrialFn& fn, int jobs);

SuiteReport summarize(const std::string& suite, const std::string& domain, const TrialConfig& cfg,
                      const std::vector<TrialOutcome>& outcomes);

TrialFn correctness_trial(const TrialConfig& cfg, DomainTag domain);
TrialFn optimality_trial(const TrialConfig& cfg, DomainTag domain);
TrialFn equivalence_trial(const TrialConfig& cfg);
TrialFn proposition_trial(const TrialConfig& cfg);

// jobs == 1 runs the serial reference runner.
SuiteReport run_suite(const std::string& suite, const std::string& domain, const TrialConfig& cfg, const TrialFn& fn,
                      int jobs = 1);
SuiteReport run_correctness(const TrialConfig& cfg, DomainTag domain, int jobs = 1);
SuiteReport run_optimality(const TrialConfig& cfg, DomainTag domain, int jobs = 1);
SuiteReport check_equivalences(const TrialConfig& cfg, int jobs = 1);
SuiteReport run_proposition(const TrialConfig& cfg, int jobs = 1);

} // namespace shlin
