// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/analyzer.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "lexer.hpp"

namespace shlin {

// ---- programs ----

namespace {

Atom read_atom(detail::TermReader& r) {
    const detail::Token& at = r.peek();
    if (at.kind == detail::Tok::Ident && is_variable_name(at.text)) r.fail("expected an atom, found variable '" + at.text + "'");
    Term t = r.term();
    return Atom{t.name(), t.args()};
}

void collect_atom_vars(const Atom& a, VarSet& out) {
    for (const auto& t : a.args) collect_vars(t, out);
}

Atom rename_atom(const Atom& a, const std::map<Var, Var>& rho) {
    Atom out{a.predicate, {}};
    for (const auto& t : a.args) out.args.push_back(rename(t, rho));
    return out;
}

} // namespace

Program parse_program(std::string_view text) {
    detail::TermReader r(detail::tokenize(text));
    Program p;
    while (!r.at_end()) {
        Clause c;
        c.line = r.peek().line;
        c.head = read_atom(r);
        if (r.accept(detail::Tok::Neck)) {
            c.body.push_back(read_atom(r));
            while (r.accept(detail::Tok::Comma)) c.body.push_back(read_atom(r));
        }
        r.expect(detail::Tok::Dot, "'.'");
        p.clauses.push_back(std::move(c));
    }
    return p;
}

Atom parse_goal(std::string_view text) {
    detail::TermReader r(detail::tokenize(text));
    Atom a = read_atom(r);
    r.accept(detail::Tok::Dot);
    if (!r.at_end()) r.fail("unexpected '" + r.peek().text + "' after the goal");
    return a;
}

std::string format_atom(const Atom& a) {
    if (a.args.empty()) return a.predicate;
    return format_term(Term::app(a.predicate, a.args));
}

VarSet atom_vars(const Atom& a) {
    VarSet out;
    collect_atom_vars(a, out);
    return out;
}

VarSet clause_vars(const Clause& c) {
    VarSet out = atom_vars(c.head);
    for (const auto& b : c.body) collect_atom_vars(b, out);
    return out;
}

// ---- elements ----

namespace {

[[noreturn]] void domain_clash() { throw Error(ErrorKind::InvalidArgument, "operands belong to different domains"); }

Multiset clip(const Multiset& m, Multiset::Count cap) {
    Multiset out;
    for (const auto& [v, n] : m.entries()) out.add(v, std::min(n, cap));
    return out;
}

Multiset unit_group(const VarSet& b) {
    Multiset m;
    for (const auto& v : b) m.add(v, 1);
    return m;
}

} // namespace

DomainTag domain_of(const AbstractElement& e) {
    switch (e.index()) {
    case 0: return DomainTag::Omega;
    case 1: return DomainTag::Two;
    default: return DomainTag::Sl;
    }
}

AbstractElement parse_element(DomainTag d, std::string_view text) {
    switch (d) {
    case DomainTag::Omega: return parse_omega(text);
    case DomainTag::Two: return parse_two(text);
    case DomainTag::Sl: return parse_sl(text);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown domain");
}

std::string format_element(const AbstractElement& e) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, OmegaElement>)
                return format_omega(x);
            else if constexpr (std::is_same_v<T, TwoElement>)
                return format_two(x);
            else
                return format_sl(x);
        },
        e);
}

const VarSet& element_interest(const AbstractElement& e) {
    return std::visit([](const auto& x) -> const VarSet& { return x.interest(); }, e);
}

bool is_bottom_element(const AbstractElement& e) {
    return std::visit([](const auto& x) { return x.is_bottom(); }, e);
}

AbstractElement bottom_element(DomainTag d, const VarSet& u) {
    switch (d) {
    case DomainTag::Omega: return OmegaElement::bottom(u);
    case DomainTag::Two: return TwoElement::bottom(u);
    case DomainTag::Sl: return SlElement::bottom(u);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown domain");
}

AbstractElement project_element(const AbstractElement& e, const VarSet& v) {
    switch (e.index()) {
    case 0: return project_omega(std::get<0>(e), v);
    case 1: return project2(std::get<1>(e), v);
    default: return project_sl(std::get<2>(e), v);
    }
}

AbstractElement union_element(const AbstractElement& a, const AbstractElement& b) {
    if (a.index() != b.index()) domain_clash();
    switch (a.index()) {
    case 0: return union_omega(std::get<0>(a), std::get<0>(b));
    case 1: return union2(std::get<1>(a), std::get<1>(b));
    default: return union_sl(std::get<2>(a), std::get<2>(b));
    }
}

bool leq_element(const AbstractElement& a, const AbstractElement& b) {
    if (a.index() != b.index()) domain_clash();
    switch (a.index()) {
    case 0: return leq_omega(std::get<0>(a), std::get<0>(b));
    case 1: return leq2_elem(std::get<1>(a), std::get<1>(b));
    default: return leq_sl(std::get<2>(a), std::get<2>(b));
    }
}

AbstractElement match_element(const AbstractElement& a, const AbstractElement& b) {
    if (a.index() != b.index()) domain_clash();
    switch (a.index()) {
    case 0: return match_omega(std::get<0>(a), std::get<0>(b));
    case 1: return match2(std::get<1>(a), std::get<1>(b));
    default: return match_sl(std::get<2>(a), std::get<2>(b));
    }
}

AbstractElement rename_element(const AbstractElement& e, const std::map<Var, Var>& rho) {
    if (rho.empty()) return e;
    switch (e.index()) {
    case 0: return rename_omega(std::get<0>(e), rho);
    case 1: return rename2(std::get<1>(e), rho);
    default: return rename_sl(std::get<2>(e), rho);
    }
}

AbstractElement juxtapose(const AbstractElement& a, const AbstractElement& b) {
    if (a.index() != b.index()) domain_clash();
    if (!set_intersection(element_interest(a), element_interest(b)).empty())
        throw Error(ErrorKind::InterestMismatch, "juxtaposed elements share interest variables");
    VarSet u = set_union(element_interest(a), element_interest(b));
    if (is_bottom_element(a) || is_bottom_element(b)) return bottom_element(domain_of(a), u);
    switch (a.index()) {
    case 0: {
        GroupSet g = std::get<0>(a).groups();
        g.insert(std::get<0>(b).groups().begin(), std::get<0>(b).groups().end());
        return OmegaElement(std::move(g), std::move(u));
    }
    case 1: {
        TwoGroupSet g = std::get<1>(a).maximals();
        g.insert(std::get<1>(b).maximals().begin(), std::get<1>(b).maximals().end());
        return TwoElement(std::move(g), std::move(u));
    }
    default: {
        const auto& x = std::get<2>(a);
        const auto& y = std::get<2>(b);
        SharingSet s = x.sharing();
        s.insert(y.sharing().begin(), y.sharing().end());
        return SlElement(std::move(s), set_union(x.linear(), y.linear()), std::move(u));
    }
    }
}

AbstractElement extend_free(const AbstractElement& e, const VarSet& fresh) {
    if (fresh.empty()) return e;
    switch (e.index()) {
    case 0: return juxtapose(e, OmegaElement::top_free(fresh));
    case 1: return juxtapose(e, TwoElement::top_free(fresh));
    default: return juxtapose(e, SlElement::top_free(fresh));
    }
}

AbstractElement saturate(const AbstractElement& e, Multiset::Count cap) {
    if (e.index() != 0) return e;
    const auto& w = std::get<0>(e);
    GroupSet g;
    for (const auto& b : w.groups()) g.insert(clip(b, cap));
    return OmegaElement(std::move(g), w.interest());
}

std::vector<std::string> group_difference(const AbstractElement& a, const AbstractElement& b) {
    if (a.index() != b.index()) domain_clash();
    std::vector<std::string> out;
    switch (b.index()) {
    case 0:
        for (const auto& g : std::get<0>(b).groups())
            if (!std::get<0>(a).contains(g)) out.push_back(format_multiset(g));
        break;
    case 1:
        for (const auto& o : std::get<1>(b).maximals())
            if (!std::get<1>(a).contains(o)) out.push_back(format_two_group(o));
        break;
    default: {
        std::vector<Multiset> gs;
        for (const auto& s : std::get<2>(b).sharing())
            if (!std::get<2>(a).sharing().count(s)) gs.push_back(unit_group(s));
        std::sort(gs.begin(), gs.end(), group_less);
        for (const auto& g : gs) out.push_back(format_multiset(g));
    }
    }
    return out;
}

// ---- baseline abstract unification ----

namespace {

constexpr std::size_t kClosureLimit = 400000;

// Shared skeleton over a group representation: `exp(g, v)` gives 0, 1 or more; `sum` adds two groups.
template <class G, class Less, class ExpFn, class SumFn>
std::set<G, Less> amgu_groups(const std::set<G, Less>& groups, const Var& x, const Term& t, ExpFn exp, SumFn sum) {
    VarSet tv = term_vars(t);
    auto meets_t = [&](const G& g) {
        return std::any_of(tv.begin(), tv.end(), [&](const Var& v) { return exp(g, v) > 0; });
    };
    std::vector<G> rx, rt, both;
    std::set<G, Less> out;
    for (const auto& g : groups) {
        bool in_x = exp(g, x) > 0, in_t = meets_t(g);
        if (in_x) rx.push_back(g);
        if (in_t) rt.push_back(g);
        if (in_x && in_t) both.push_back(g);
        if (!in_x && !in_t) out.insert(g);
    }
    if (tv.empty() || rx.empty() || rt.empty()) return out;

    auto linear_everywhere = [&](const Var& v) {
        return std::all_of(groups.begin(), groups.end(), [&](const G& g) { return exp(g, v) <= 1; });
    };
    bool linear = both.empty() && linear_everywhere(x);
    for (const auto& v : tv) linear = linear && occ(v, t) == 1 && linear_everywhere(v);
    if (linear)
        for (const auto& g : groups) {
            int hits = 0;
            for (const auto& v : tv) hits += exp(g, v) > 0;
            if (hits > 1) linear = false;
        }
    if (linear) {
        for (const auto& bx : rx)
            for (const auto& bt : rt) out.insert(sum(bx, bt));
        return out;
    }

    // Every sum of relevant groups (repetition allowed) that uses both an x-group and a t-group.
    std::vector<std::pair<G, int>> parts; // flag bit 1: x-group, bit 2: t-group
    for (const auto& g : rx) parts.emplace_back(g, 1 | (meets_t(g) ? 2 : 0));
    for (const auto& g : rt)
        if (exp(g, x) == 0) parts.emplace_back(g, 2);
    std::set<std::pair<G, int>> seen;
    std::deque<std::pair<G, int>> queue;
    for (const auto& p : parts)
        if (seen.insert(p).second) queue.push_back(p);
    while (!queue.empty()) {
        auto [s, flags] = queue.front();
        queue.pop_front();
        if (flags == 3) out.insert(s);
        for (const auto& [g, f] : parts) {
            std::pair<G, int> n{sum(s, g), flags | f};
            if (seen.insert(n).second) {
                if (seen.size() > kClosureLimit) throw Error(ErrorKind::TooLarge, "abstract unification closure is too large");
                queue.push_back(std::move(n));
            }
        }
    }
    return out;
}

OmegaElement amgu_omega(const OmegaElement& e, const Var& x, const Term& t, Multiset::Count cap) {
    auto exp = [](const Multiset& g, const Var& v) { return static_cast<int>(std::min<Multiset::Count>(g.count(v), 2)); };
    auto sum = [cap](const Multiset& a, const Multiset& b) { return clip(msum(a, b), cap); };
    return OmegaElement(amgu_groups(e.groups(), x, t, exp, sum), e.interest());
}

TwoElement amgu_two(const TwoElement& e, const Var& x, const Term& t) {
    auto exp = [](const TwoGroup& g, const Var& v) { return g.exp(v); };
    auto sum = [](const TwoGroup& a, const TwoGroup& b) { return oplus(a, b); };
    return TwoElement(maximal_antichain(amgu_groups(e.maximals(), x, t, exp, sum)), e.interest());
}

} // namespace

AbstractElement baseline_amgu(const AbstractElement& e, const Var& x, const Term& t, Multiset::Count cap) {
    const VarSet& u = element_interest(e);
    VarSet tv = term_vars(t);
    if (!u.count(x) || !is_subset(tv, u))
        throw Error(ErrorKind::InvalidArgument, "binding " + x + "/" + format_term(t) + " leaves the interest set");
    if (t.is_var() && t.name() == x) return e;
    if (tv.count(x) || is_bottom_element(e)) return bottom_element(domain_of(e), u);
    switch (e.index()) {
    case 0: return amgu_omega(std::get<0>(e), x, t, cap);
    case 1: return amgu_two(std::get<1>(e), x, t);
    default: {
        const auto& s = std::get<2>(e);
        return alpha_sl(amgu_two(gamma_sl(s), x, t));
    }
    }
}

AbstractElement amgu_subst(const AbstractElement& e, const Substitution& theta, Multiset::Count cap) {
    AbstractElement cur = e;
    for (const auto& [x, t] : theta.bindings()) cur = baseline_amgu(cur, x, t, cap);
    return cur;
}

// ---- forward and backward unification ----

const char* to_string(BackwardMode m) { return m == BackwardMode::Matching ? "matching" : "mgu"; }

BackwardMode parse_mode(const std::string& s) {
    if (s == "matching") return BackwardMode::Matching;
    if (s == "mgu") return BackwardMode::Mgu;
    throw Error(ErrorKind::InvalidArgument, "unknown backward mode '" + s + "' (expected matching or mgu)");
}

ForwardResult forward_unify(const AbstractElement& call, const Atom& goal, const Atom& head, const VarSet& extra,
                            Multiset::Count cap) {
    if (goal.predicate != head.predicate || goal.args.size() != head.args.size())
        throw Error(ErrorKind::PredicateMismatch, format_atom(goal) + " does not match the head " + format_atom(head));
    VarSet cv = set_union(atom_vars(head), extra);
    const VarSet& u = element_interest(call);
    if (!set_intersection(cv, u).empty())
        throw Error(ErrorKind::InvalidArgument, "clause variables must be renamed apart from the call");
    ForwardResult r;
    std::vector<Equation> eqs;
    for (std::size_t i = 0; i < goal.args.size(); ++i) eqs.emplace_back(goal.args[i], head.args[i]);
    UnifyResult m = mgu_terms(eqs);
    if (!m.ok()) {
        r.full = bottom_element(domain_of(call), set_union(u, cv));
        r.entry = bottom_element(domain_of(call), cv);
        return r;
    }
    r.unified = true;
    r.theta = *m.subst;
    r.full = amgu_subst(extend_free(call, cv), r.theta, cap);
    r.entry = project_element(r.full, cv);
    return r;
}

AbstractElement backward_unify(const AbstractElement& call, const AbstractElement& exit, const ForwardResult& fwd,
                               BackwardMode mode, Multiset::Count cap) {
    const VarSet& u = element_interest(call);
    if (!fwd.unified || is_bottom_element(exit)) return bottom_element(domain_of(call), u);
    if (mode == BackwardMode::Matching) return project_element(saturate(match_element(exit, fwd.full), cap), u);
    return project_element(amgu_subst(juxtapose(call, exit), fwd.theta, cap), u);
}

// ---- analysis ----

const char* to_string(Step s) {
    switch (s) {
    case Step::Full: return "full";
    case Step::Entry: return "entry";
    case Step::Exit: return "exit";
    }
    return "?";
}

TraceInjection parse_injection(DomainTag d, std::string_view text) {
    TraceInjection inj;
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        std::string s = trim(line);
        if (s.empty() || s[0] == '%') continue;
        std::istringstream ls(s);
        std::string idx, step;
        ls >> idx >> step;
        std::string rest;
        std::getline(ls, rest);
        auto bad = [&](const std::string& why) {
            throw Error(ErrorKind::SyntaxError, "line " + std::to_string(no) + ": " + why);
        };
        if (idx.empty() || !std::all_of(idx.begin(), idx.end(), ::isdigit) || std::stoul(idx) == 0)
            bad("expected a clause index starting at 1");
        Step st;
        if (step == "full")
            st = Step::Full;
        else if (step == "entry")
            st = Step::Entry;
        else if (step == "exit")
            st = Step::Exit;
        else
            bad("expected full, entry or exit, found '" + step + "'");
        if (trim(rest).empty()) bad("missing element");
        try {
            inj.steps.insert_or_assign({std::stoul(idx), st}, parse_element(d, trim(rest)));
        } catch (const Error& e) {
            bad(e.what());
        }
    }
    return inj;
}

namespace {

class Engine {
  public:
    explicit Engine(const AnalysisRequest& req) : req_(req), dom_(domain_of(req.call)) {
        for (std::size_t i = 0; i < req.program.clauses.size(); ++i) {
            const Atom& h = req.program.clauses[i].head;
            by_pred_[{h.predicate, h.args.size()}].push_back(i);
        }
    }

    AnalysisResult run() {
        if (!is_subset(atom_vars(req_.goal), element_interest(req_.call)))
            throw Error(ErrorKind::InterestMismatch, "the call must range over the goal variables " + format_varset(atom_vars(req_.goal)));
        if (req_.injection)
            for (const auto& [k, e] : req_.injection->steps)
                if (domain_of(e) != dom_) throw Error(ErrorKind::InvalidArgument, "injected element in the wrong domain");
        AnalysisResult r;
        for (int it = 1;; ++it) {
            if (it > req_.limits.max_iterations)
                throw Error(ErrorKind::FixpointLimitExceeded, "no fixpoint after " + std::to_string(req_.limits.max_iterations) + " iterations");
            changed_ = false;
            done_.clear();
            trace_.clear();
            counter_ = 0;
            r.answer = solve(req_.goal, req_.call, 0);
            r.iterations = it;
            if (!changed_) break;
        }
        r.trace = std::move(trace_);
        r.memo_entries = memo_.size();
        return r;
    }

  private:
    Multiset::Count cap() const { return req_.limits.omega_cap; }

    const AbstractElement* injected(int depth, std::size_t clause, Step s) const {
        if (depth != 0 || !req_.injection) return nullptr;
        auto it = req_.injection->steps.find({clause, s});
        return it == req_.injection->steps.end() ? nullptr : &it->second;
    }

    void check_interest(const AbstractElement& e, const VarSet& u, std::size_t clause, Step s) const {
        if (element_interest(e) != u)
            throw Error(ErrorKind::InterestMismatch, "injected " + std::string(to_string(s)) + " for clause " + std::to_string(clause) +
                                                         " must range over " + format_varset(u));
    }

    AbstractElement solve(const Atom& goal, const AbstractElement& call, int depth) {
        const VarSet& u = element_interest(call);
        if (is_bottom_element(call)) return call;
        auto it = by_pred_.find({goal.predicate, goal.args.size()});
        if (it == by_pred_.end())
            throw Error(ErrorKind::InvalidArgument, "undefined predicate " + goal.predicate + "/" + std::to_string(goal.args.size()));
        AbstractElement answer = bottom_element(dom_, u);
        for (std::size_t ci : it->second) {
            const Clause& c = req_.program.clauses[ci];
            const std::size_t number = ci + 1;
            VarSet cv = clause_vars(c);
            std::map<Var, Var> apart, back;
            if (!set_intersection(cv, u).empty()) {
                ++counter_;
                for (const auto& v : cv) {
                    Var fresh = v + "_" + std::to_string(counter_);
                    while (u.count(fresh) || cv.count(fresh)) fresh += "_";
                    apart[v] = fresh;
                    back[fresh] = v;
                }
            }
            Atom head = rename_atom(c.head, apart);
            VarSet rcv;
            for (const auto& v : cv) rcv.insert(apart.count(v) ? apart.at(v) : v);

            std::size_t slot = trace_.size();
            trace_.push_back({});
            ClauseTrace tr;
            tr.depth = depth;
            tr.clause = number;
            tr.goal = format_atom(goal);
            tr.call = call;

            ForwardResult f = forward_unify(call, goal, head, rcv, cap());
            if (f.unified) {
                if (const auto* inj = injected(depth, number, Step::Full)) {
                    check_interest(*inj, set_union(u, rcv), number, Step::Full);
                    f.full = *inj;
                    f.entry = project_element(f.full, rcv);
                    tr.injected.push_back(Step::Full);
                }
                if (const auto* inj = injected(depth, number, Step::Entry)) {
                    check_interest(*inj, rcv, number, Step::Entry);
                    f.entry = *inj;
                    tr.injected.push_back(Step::Entry);
                }
            }
            tr.unified = f.unified;
            tr.full = f.full;
            tr.entry = f.entry;
            AbstractElement exit = f.entry;
            if (f.unified && !c.body.empty())
                exit = rename_element(body_exit(ci, rename_element(f.entry, back), depth), apart);
            if (const auto* inj = injected(depth, number, Step::Exit); inj && f.unified) {
                check_interest(*inj, rcv, number, Step::Exit);
                exit = *inj;
                tr.injected.push_back(Step::Exit);
            }
            tr.exit = exit;
            tr.answer = backward_unify(call, exit, f, req_.mode, cap());
            answer = union_element(answer, tr.answer);
            trace_[slot] = std::move(tr);
        }
        return answer;
    }

    AbstractElement body_exit(std::size_t ci, const AbstractElement& entry, int depth) {
        const std::string key = std::to_string(ci) + "|" + format_element(entry);
        auto known = memo_.find(key);
        if (done_.count(key) || active_.count(key))
            return known != memo_.end() ? known->second : bottom_element(dom_, element_interest(entry));
        active_.insert(key);
        AbstractElement cur = entry;
        for (const auto& atom : req_.program.clauses[ci].body) {
            if (is_bottom_element(cur)) break;
            cur = solve(atom, cur, depth + 1);
        }
        active_.erase(key);
        done_.insert(key);
        known = memo_.find(key);
        if (known == memo_.end()) {
            changed_ = true;
            memo_.emplace(key, cur);
            return cur;
        }
        AbstractElement grown = union_element(known->second, cur);
        if (!(grown == known->second)) {
            changed_ = true;
            known->second = grown;
        }
        return known->second;
    }

    const AnalysisRequest& req_;
    DomainTag dom_;
    std::map<std::pair<std::string, std::size_t>, std::vector<std::size_t>> by_pred_;
    std::map<std::string, AbstractElement> memo_;
    std::set<std::string> done_, active_;
    std::vector<ClauseTrace> trace_;
    bool changed_ = false;
    int counter_ = 0;
};

} // namespace

AnalysisResult analyze(const AnalysisRequest& req) { return Engine(req).run(); }

std::string format_trace(const AnalysisResult& r) {
    std::ostringstream s;
    for (const auto& t : r.trace) {
        std::string pad(static_cast<std::size_t>(t.depth) * 2, ' ');
        s << pad << t.goal << " clause " << t.clause;
        if (!t.unified) {
            s << ": no unifier\n";
            continue;
        }
        s << '\n';
        auto mark = [&](Step st) {
            return std::find(t.injected.begin(), t.injected.end(), st) != t.injected.end() ? " (injected)" : "";
        };
        s << pad << "  call   " << format_element(t.call) << '\n';
        s << pad << "  full   " << format_element(t.full) << mark(Step::Full) << '\n';
        s << pad << "  entry  " << format_element(t.entry) << mark(Step::Entry) << '\n';
        s << pad << "  exit   " << format_element(t.exit) << mark(Step::Exit) << '\n';
        s << pad << "  answer " << format_element(t.answer) << '\n';
    }
    s << "iterations " << r.iterations << ", memo entries " << r.memo_entries << '\n';
    return s.str();
}

} // namespace shlin
