// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <deque>
#include <sstream>

#include "json.hpp"

namespace shlin {

const char* to_string(DomainTag d) {
    switch (d) {
    case DomainTag::Omega: return "omega";
    case DomainTag::Two: return "two";
    case DomainTag::Sl: return "sl";
    }
    return "?";
}

DomainTag parse_domain(const std::string& s) {
    if (s == "omega") return DomainTag::Omega;
    if (s == "two") return DomainTag::Two;
    if (s == "sl") return DomainTag::Sl;
    throw Error(ErrorKind::InvalidArgument, "unknown domain '" + s + "' (expected omega, two or sl)");
}

void TrialConfig::validate() const {
    if (max_vars < 1 || max_vars > 10) throw Error(ErrorKind::InvalidArgument, "max_vars must be in 1..10");
    if (max_term_depth < 0 || max_term_depth > 8) throw Error(ErrorKind::InvalidArgument, "max_term_depth must be in 0..8");
    if (multiplicity_cap < 1 || multiplicity_cap > 16) throw Error(ErrorKind::InvalidArgument, "multiplicity_cap must be in 1..16");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

const Term& const_a() {
    static const Term a = Term::app("a");
    return a;
}

Term tuple(const std::vector<Term>& args) { return args.empty() ? const_a() : Term::app("t", args); }

Term repeated(const Var& v, Multiset::Count n) { return tuple(std::vector<Term>(n, Term::var(v))); }

class TermGen {
  public:
    TermGen(const TrialConfig& cfg, Rng& rng, std::string prefix) : cfg_(cfg), rng_(rng), prefix_(std::move(prefix)) {}

    std::vector<Var> pool;

    Term leaf() {
        if (chance(rng_, 20)) return const_a();
        if (!pool.empty() && chance(rng_, 50)) return Term::var(pool[below(rng_, pool.size())]);
        Var v = prefix_ + std::to_string(++fresh_);
        pool.push_back(v);
        return Term::var(v);
    }

    Term gen(int depth) {
        if (depth <= 0 || chance(rng_, 35)) return leaf();
        if (chance(rng_, 25)) return Term::app("f", {gen(depth - 1)});
        return Term::app("t", {gen(depth - 1), gen(depth - 1)});
    }

    Term random() { return gen(static_cast<int>(below(rng_, cfg_.max_term_depth + 1))); }

  private:
    const TrialConfig& cfg_;
    Rng& rng_;
    std::string prefix_;
    int fresh_ = 0;
};

Multiset random_group(const VarSet& u, int cap, Rng& rng) {
    Multiset m;
    std::vector<Var> pool(u.begin(), u.end());
    for (const auto& v : random_subset(pool, rng, true)) m.add(v, 1 + static_cast<Multiset::Count>(below(rng, cap)));
    return m;
}

std::pair<VarSet, VarSet> random_interests(const TrialConfig& cfg, Rng& rng) {
    auto pool = variable_pool(cfg.max_vars);
    VarSet u1 = random_subset(pool, rng, true);
    VarSet u2 = random_subset(pool, rng, true);
    return {u1, u2};
}

std::vector<Multiset> nonempty_on(const GroupSet& groups, const VarSet& u) {
    std::vector<Multiset> out;
    for (const auto& g : groups)
        if (!mrestrict(g, u).empty()) out.push_back(g);
    return out;
}

WitnessReport unverified(const Multiset& b, std::string label) {
    WitnessReport r;
    r.group = b;
    r.label = std::move(label);
    return r;
}

} // namespace

Rng trial_rng(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix64(seed ^ splitmix64(index))); }

std::uint64_t below(Rng& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

bool chance(Rng& rng, unsigned percent) { return below(rng, 100) < percent; }

std::vector<Var> variable_pool(int n) {
    static const char* base[] = {"u", "v", "w", "x", "y", "z"};
    std::vector<Var> out;
    for (int i = 0; i < n; ++i) {
        Var v = base[i % 6];
        if (i >= 6) v += std::to_string(i / 6);
        out.push_back(v);
    }
    return out;
}

VarSet random_subset(const std::vector<Var>& pool, Rng& rng, bool nonempty) {
    VarSet out;
    if (pool.empty()) return out;
    for (const auto& v : pool)
        if (chance(rng, 50)) out.insert(v);
    if (nonempty && out.empty()) out.insert(pool[below(rng, pool.size())]);
    return out;
}

ExistentialSubstitution gen_existential(const VarSet& u, const TrialConfig& cfg, Rng& rng) {
    TermGen g(cfg, rng, "_g");
    Substitution s;
    for (const auto& x : u) s.bind(x, g.random());
    return canonicalize(s, u);
}

std::pair<ExistentialSubstitution, ExistentialSubstitution> gen_match_pair(const TrialConfig& cfg, Rng& rng) {
    auto [u1, u2] = random_interests(cfg, rng);
    ExistentialSubstitution c2 = gen_existential(u2, cfg, rng);
    if (!chance(rng, 70)) return {gen_existential(u1, cfg, rng), c2};

    // θ1 agrees with an instance of θ2 on the shared variables.
    VarSet shared = set_intersection(u1, u2);
    VarSet y;
    for (const auto& x : shared) collect_vars(c2.rep().image(x), y);
    TermGen g(cfg, rng, "_s");
    std::vector<Var> rebound;
    for (const auto& v : y) {
        if (chance(rng, 50))
            g.pool.push_back(v);
        else
            rebound.push_back(v);
    }
    Substitution sigma;
    for (const auto& v : rebound) sigma.bind(v, g.random());
    Substitution theta1;
    for (const auto& x : u1) theta1.bind(x, shared.count(x) ? apply(sigma, c2.rep().image(x)) : g.random());
    return {canonicalize(theta1, u1), c2};
}

OmegaElement gen_omega_element(const VarSet& u, const TrialConfig& cfg, Rng& rng) {
    GroupSet groups{Multiset{}};
    if (!u.empty()) {
        auto n = below(rng, 5);
        for (std::uint64_t i = 0; i < n; ++i) groups.insert(random_group(u, cfg.multiplicity_cap, rng));
    }
    return OmegaElement(std::move(groups), u);
}

TwoElement gen_two_element(const VarSet& u, Rng& rng) {
    TwoGroupSet groups{TwoGroup{}};
    std::vector<Var> pool(u.begin(), u.end());
    if (!u.empty()) {
        auto n = below(rng, 5);
        for (std::uint64_t i = 0; i < n; ++i) {
            TwoGroup o;
            for (const auto& v : random_subset(pool, rng, true)) o.set(v, chance(rng, 50) ? Exp::One : Exp::Inf);
            groups.insert(o);
        }
    }
    return TwoElement(maximal_antichain(groups), u);
}

SlElement gen_sl_element(const VarSet& u, Rng& rng) {
    SharingSet s{VarSet{}};
    std::vector<Var> pool(u.begin(), u.end());
    if (!u.empty()) {
        auto n = below(rng, 5);
        for (std::uint64_t i = 0; i < n; ++i) s.insert(random_subset(pool, rng, true));
    }
    VarSet lin = random_subset(pool, rng, false);
    return SlElement(std::move(s), std::move(lin), u);
}

bool check_match_correct(const ExistentialSubstitution& c1, const ExistentialSubstitution& c2, DomainTag domain) {
    auto m = ematch(c1, c2);
    if (!m) return true;
    OmegaElement a1 = alpha_omega(c1), a2 = alpha_omega(c2), am = alpha_omega(*m);
    switch (domain) {
    case DomainTag::Omega: return approx_omega(match_omega(a1, a2), *m);
    case DomainTag::Two: return leq2_elem(alpha2(am), match2(alpha2(a1), alpha2(a2)));
    case DomainTag::Sl:
        return leq_sl(alpha_sl(alpha2(am)), match_sl(alpha_sl(alpha2(a1)), alpha_sl(alpha2(a2))));
    }
    return false;
}

Substitution witness_theta2(const std::vector<Multiset>& xs, const VarSet& u2) {
    GroupSet distinct;
    for (const auto& h : xs)
        if (!h.empty()) distinct.insert(h);
    std::vector<std::pair<Var, const Multiset*>> named;
    int k = 0;
    for (const auto& h : distinct) named.emplace_back("_h" + std::to_string(++k), &h);
    Substitution theta;
    for (const auto& u : u2) {
        std::vector<Term> args;
        for (const auto& [v, h] : named)
            for (Multiset::Count i = 0; i < h->count(u); ++i) args.push_back(Term::var(v));
        theta.bind(u, tuple(args));
    }
    return theta;
}

ExistentialSubstitution witness_theta1(const OmegaElement& e1, const ExistentialSubstitution& c2, const Multiset& b) {
    const Substitution& theta2 = c2.rep();
    const VarSet& u1 = e1.interest();
    const VarSet& u2 = c2.interest();
    if (theta2.domain() != u2) throw Error(ErrorKind::InvalidArgument, "witness needs a representative with domain equal to the interest set");
    OmegaElement s2 = alpha_omega(c2);
    if (!match_omega(e1, s2).contains(b))
        throw Error(ErrorKind::NotInMatch, format_multiset(b) + " is not in the abstract match");

    VarSet shared = set_intersection(u1, u2);
    VarSet only1 = set_difference(u1, u2);
    VarSet y;
    for (const auto& x : shared) collect_vars(theta2.image(x), y);
    Multiset b1 = mrestrict(b, u1);

    Substitution delta, eta;
    if (b1.empty() && s2.contains(b)) {
        for (const auto& v : y) delta.bind(v, const_a());
        for (const auto& w : only1) eta.bind(w, const_a());
    } else {
        if (!e1.contains(b1)) throw Error(ErrorKind::NotInMatch, format_multiset(b1) + " is not a group of the first argument");
        auto dec = star_decompose(mrestrict(b, u2), nonempty_on(s2.groups(), u1), u1);
        if (!dec) throw Error(ErrorKind::NotInMatch, "no decomposition of " + format_multiset(mrestrict(b, u2)));
        const Var fresh = "_z";
        VarSet used;
        for (const auto& [h, n] : *dec) {
            const Var* pick = nullptr;
            for (const auto& v : y) // sorted, so the first hit is the smallest
                if (mrestrict(preimage_var(theta2, v), u2) == h) {
                    pick = &v;
                    break;
                }
            if (!pick) throw Error(ErrorKind::NotInMatch, "no variable has preimage " + format_multiset(h));
            used.insert(*pick);
            delta.bind(*pick, repeated(fresh, n));
        }
        for (const auto& v : y)
            if (!used.count(v)) delta.bind(v, const_a());
        for (const auto& w : only1) eta.bind(w, repeated(fresh, b.count(w)));
    }
    Substitution theta1 = eta;
    const Substitution shared_part = compose(theta2, delta).restrict(u1);
    for (const auto& [x, t] : shared_part.bindings()) theta1.bind(x, t);
    return canonicalize(theta1, u1);
}

std::vector<WitnessReport> check_optimality_omega(const OmegaElement& e1, const OmegaElement& e2) {
    const VarSet& u1 = e1.interest();
    const VarSet& u2 = e2.interest();
    std::vector<WitnessReport> out;
    const OmegaElement matched = match_omega(e1, e2);
    for (const auto& b : matched.groups()) {
        std::vector<Multiset> xs;
        if (mrestrict(b, u1).empty() && e2.contains(b)) {
            xs.push_back(b);
        } else {
            auto dec = star_decompose(mrestrict(b, u2), nonempty_on(e2.groups(), u1), u1);
            if (!dec) {
                out.push_back(unverified(b, format_multiset(b)));
                continue;
            }
            for (const auto& [h, n] : *dec) xs.push_back(h);
        }
        WitnessReport r = unverified(b, format_multiset(b));
        try {
            r.theta2 = canonicalize(witness_theta2(xs, u2), u2);
            r.theta1 = witness_theta1(e1, r.theta2, b);
            auto m = ematch(r.theta1, r.theta2);
            r.verified = m && alpha_omega(*m).contains(b) && approx_omega(e1, r.theta1) && approx_omega(e2, r.theta2);
        } catch (const Error&) {
            r.verified = false;
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<WitnessReport> check_optimality_two(const TwoElement& e1, const TwoElement& e2) {
    const VarSet& u1 = e1.interest();
    const VarSet& u2 = e2.interest();

    // Every ⊕-sum of the second argument's groups that meet u1 (and their squares), with one derivation each.
    struct Part {
        TwoGroup base;
        bool squared;
    };
    std::vector<Part> parts;
    for (const auto& o : down_closure(e2.maximals()))
        if (!restrict2(o, u1).empty()) {
            parts.push_back({o, false});
            parts.push_back({o, true});
        }
    std::map<TwoGroup, std::vector<Part>> reach{{TwoGroup{}, {}}};
    std::deque<TwoGroup> queue{TwoGroup{}};
    while (!queue.empty()) {
        TwoGroup s = queue.front();
        queue.pop_front();
        for (const auto& p : parts) {
            TwoGroup n = oplus(s, p.squared ? square(p.base) : p.base);
            if (reach.count(n)) continue;
            auto path = reach.at(s);
            path.push_back(p);
            reach.emplace(n, std::move(path));
            queue.push_back(n);
        }
    }

    std::vector<WitnessReport> out;
    const TwoElement matched = match2(e1, e2);
    for (const auto& o : matched.maximals()) {
        Multiset b;
        std::vector<Multiset> xs;
        if (restrict2(o, u1).empty()) {
            b = lift_group(o);
            xs.push_back(b);
        } else {
            auto it = reach.find(restrict2(o, u2));
            if (it == reach.end()) {
                out.push_back(unverified(lift_group(o), format_two_group(o)));
                continue;
            }
            for (const auto& p : it->second) {
                Multiset g = lift_group(p.base);
                b = msum(b, p.squared ? mscale(g, 2) : g);
                xs.push_back(g);
            }
            b = msum(b, lift_group(restrict2(o, set_difference(u1, u2))));
        }
        WitnessReport r = unverified(b, format_two_group(o));
        try {
            GroupSet g1{mrestrict(b, u1)};
            OmegaElement s1(std::move(g1), u1);
            r.theta2 = canonicalize(witness_theta2(xs, u2), u2);
            r.theta1 = witness_theta1(s1, r.theta2, b);
            auto m = ematch(r.theta1, r.theta2);
            r.verified = m && alpha_omega(*m).contains(b) && alpha2_group(b) == o &&
                         leq2_elem(alpha2(alpha_omega(r.theta1)), e1) && leq2_elem(alpha2(alpha_omega(r.theta2)), e2);
        } catch (const Error&) {
            r.verified = false;
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<WitnessReport> check_optimality_sl(const SlElement& e1, const SlElement& e2) {
    TwoElement t1 = gamma_sl(e1), t2 = gamma_sl(e2);
    auto out = check_optimality_two(t1, t2);
    for (auto& r : out)
        if (r.verified)
            r.verified = leq_sl(alpha_sl(alpha2(alpha_omega(r.theta1))), e1) &&
                         leq_sl(alpha_sl(alpha2(alpha_omega(r.theta2))), e2);
    WitnessReport eq;
    eq.label = "sl-abstraction";
    eq.verified = match_sl(e1, e2) == alpha_sl(match2(t1, t2));
    out.push_back(std::move(eq));
    return out;
}

EquivalenceOutcome check_equivalence_instance(const TwoElement& t1, const TwoElement& t2, const SlElement& s1,
                                              const SlElement& s2) {
    EquivalenceOutcome r;
    TwoElement ref = match2_ref(t1, t2);
    TwoElement opt(match2_opt(t1.maximals(), t1.interest(), t2.maximals(), t2.interest()),
                   set_union(t1.interest(), t2.interest()));
    r.two_equal = ref == opt;
    SlElement direct = match_sl(s1, s2);
    TwoElement lifted(match2_opt(gamma_sl_maximals(s1), s1.interest(), gamma_sl_maximals(s2), s2.interest()),
                      set_union(s1.interest(), s2.interest()));
    r.sl_equal = direct == alpha_sl(lifted);
    std::ostringstream d;
    if (!r.two_equal)
        d << "t1=" << format_two(t1) << " t2=" << format_two(t2) << " ref=" << format_two(ref) << " opt=" << format_two(opt);
    if (!r.sl_equal) {
        if (!r.two_equal) d << ' ';
        d << "s1=" << format_sl(s1) << " s2=" << format_sl(s2) << " sl=" << format_sl(direct)
          << " via2=" << format_sl(alpha_sl(lifted));
    }
    r.detail = d.str();
    return r;
}

namespace {

TrialOutcome guarded(const TrialFn& fn, std::uint64_t seed, std::uint64_t index) {
    Rng rng = trial_rng(seed, index);
    try {
        return fn(index, rng);
    } catch (const std::exception& e) {
        TrialOutcome o;
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
        return o;
    }
}

} // namespace

std::vector<TrialOutcome> run_trials_serial(const TrialConfig& cfg, const TrialFn& fn) {
    std::vector<TrialOutcome> out;
    out.reserve(cfg.trials);
    for (std::size_t i = 0; i < cfg.trials; ++i) out.push_back(guarded(fn, cfg.seed, i));
    return out;
}

std::vector<TrialOutcome> run_trials_parallel(const TrialConfig& cfg, const TrialFn& fn, int jobs) {
    std::vector<TrialOutcome> out(cfg.trials);
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
    const auto n = static_cast<long long>(cfg.trials);
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = guarded(fn, cfg.seed, static_cast<std::uint64_t>(i));
    return out;
}

SuiteReport summarize(const std::string& suite, const std::string& domain, const TrialConfig& cfg,
                      const std::vector<TrialOutcome>& outcomes) {
    constexpr std::size_t kMaxListed = 10;
    SuiteReport r;
    r.suite = suite;
    r.domain = domain;
    r.cfg = cfg;
    r.trials = outcomes.size();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.vacuous) ++r.non_vacuous;
        r.checks += o.checks;
        if (!o.ok) {
            ++r.failures;
            if (r.failed.size() < kMaxListed) r.failed.emplace_back(i, o.detail);
        }
    }
    return r;
}

std::string SuiteReport::text() const {
    std::ostringstream s;
    s << "suite=" << suite << " domain=" << domain << " seed=" << cfg.seed << " trials=" << trials
      << " non_vacuous=" << non_vacuous << " checks=" << checks << " failures=" << failures << '\n';
    for (const auto& [i, d] : failed) s << "failure index=" << i << ' ' << d << '\n';
    return s.str();
}

std::string SuiteReport::json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["domain"] = domain;
    j["seed"] = cfg.seed;
    j["max_vars"] = cfg.max_vars;
    j["max_term_depth"] = cfg.max_term_depth;
    j["multiplicity_cap"] = cfg.multiplicity_cap;
    j["trials"] = trials;
    j["non_vacuous"] = non_vacuous;
    j["checks"] = checks;
    j["failures"] = failures;
    j["failed"] = nlohmann::ordered_json::array();
    for (const auto& [i, d] : failed) j["failed"].push_back({{"index", i}, {"detail", d}});
    return j.dump();
}

TrialFn correctness_trial(const TrialConfig& cfg, DomainTag domain) {
    return [cfg, domain](std::uint64_t, Rng& rng) {
        TrialOutcome o;
        auto [c1, c2] = gen_match_pair(cfg, rng);
        if (!ematch(c1, c2)) {
            o.vacuous = true;
            return o;
        }
        o.checks = 1;
        o.ok = check_match_correct(c1, c2, domain);
        if (!o.ok) o.detail = "c1=" + format_existential(c1) + " c2=" + format_existential(c2);
        return o;
    };
}

TrialFn optimality_trial(const TrialConfig& cfg, DomainTag domain) {
    return [cfg, domain](std::uint64_t, Rng& rng) {
        TrialOutcome o;
        auto [u1, u2] = random_interests(cfg, rng);
        std::vector<WitnessReport> reports;
        std::string instance;
        switch (domain) {
        case DomainTag::Omega: {
            auto e1 = gen_omega_element(u1, cfg, rng), e2 = gen_omega_element(u2, cfg, rng);
            reports = check_optimality_omega(e1, e2);
            instance = "e1=" + format_omega(e1) + " e2=" + format_omega(e2);
            break;
        }
        case DomainTag::Two: {
            auto e1 = gen_two_element(u1, rng), e2 = gen_two_element(u2, rng);
            reports = check_optimality_two(e1, e2);
            instance = "e1=" + format_two(e1) + " e2=" + format_two(e2);
            break;
        }
        case DomainTag::Sl: {
            auto e1 = gen_sl_element(u1, rng), e2 = gen_sl_element(u2, rng);
            reports = check_optimality_sl(e1, e2);
            instance = "e1=" + format_sl(e1) + " e2=" + format_sl(e2);
            break;
        }
        }
        o.vacuous = reports.empty();
        o.checks = reports.size();
        for (const auto& r : reports)
            if (!r.verified) {
                o.ok = false;
                o.detail = instance + " group=" + r.label;
                break;
            }
        return o;
    };
}

TrialFn equivalence_trial(const TrialConfig& cfg) {
    return [cfg](std::uint64_t, Rng& rng) {
        TrialOutcome o;
        auto [u1, u2] = random_interests(cfg, rng);
        auto t1 = gen_two_element(u1, rng), t2 = gen_two_element(u2, rng);
        auto s1 = gen_sl_element(u1, rng), s2 = gen_sl_element(u2, rng);
        auto r = check_equivalence_instance(t1, t2, s1, s2);
        o.checks = 2;
        o.ok = r.two_equal && r.sl_equal;
        o.detail = r.detail;
        return o;
    };
}

TrialFn proposition_trial(const TrialConfig& cfg) {
    return [cfg](std::uint64_t, Rng& rng) {
        TrialOutcome o;
        auto pool = variable_pool(cfg.max_vars);
        VarSet all(pool.begin(), pool.end());
        Multiset b = chance(rng, 90) ? random_group(all, cfg.multiplicity_cap, rng) : Multiset{};
        VarSet v = random_subset(pool, rng, false);
        std::vector<Multiset> xs;
        auto n = below(rng, 4);
        for (std::uint64_t i = 0; i < n; ++i) xs.push_back(random_group(all, cfg.multiplicity_cap, rng));
        o.checks = 1;
        o.ok = prop_abstraction2_check(b, v, xs);
        if (!o.ok) {
            o.detail = "b=" + format_multiset(b) + " v=" + format_varset(v) + " xs=";
            for (const auto& x : xs) o.detail += format_multiset(x) + ";";
        }
        return o;
    };
}

SuiteReport run_suite(const std::string& suite, const std::string& domain, const TrialConfig& cfg, const TrialFn& fn,
                      int jobs) {
    cfg.validate();
    double start = omp_get_wtime();
    auto outcomes = jobs == 1 ? run_trials_serial(cfg, fn) : run_trials_parallel(cfg, fn, jobs);
    SuiteReport r = summarize(suite, domain, cfg, outcomes);
    r.seconds = omp_get_wtime() - start;
    return r;
}

SuiteReport run_correctness(const TrialConfig& cfg, DomainTag domain, int jobs) {
    return run_suite("correctness", to_string(domain), cfg, correctness_trial(cfg, domain), jobs);
}

SuiteReport run_optimality(const TrialConfig& cfg, DomainTag domain, int jobs) {
    return run_suite("optimality", to_string(domain), cfg, optimality_trial(cfg, domain), jobs);
}

SuiteReport check_equivalences(const TrialConfig& cfg, int jobs) {
    return run_suite("equivalence", "two+sl", cfg, equivalence_trial(cfg), jobs);
}

SuiteReport run_proposition(const TrialConfig& cfg, int jobs) {
    return run_suite("proposition", "two", cfg, proposition_trial(cfg), jobs);
}

} // namespace shlin
