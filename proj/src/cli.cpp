// Copyright (c) shlin contributors.
// SPDX-License-Identifier: Apache-2.0
#include "shlin/cli.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shlin/analyzer.hpp"

namespace shlin {

namespace {

using Json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

// `@path` reads the operand from a file.
std::string operand_text(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') return read_file(arg.substr(1));
    return arg;
}

struct Options {
    std::string config;

    std::string domain = "omega";
    bool json = false;

    std::string op;
    std::vector<std::string> operands;

    std::string program, goal, call, inject, mode = "matching";
    bool trace = false;
    int max_iterations = 100;
    int omega_cap = 3;

    std::string kind;
    int jobs = 0;
    TrialConfig cfg;
};

struct App {
    std::unique_ptr<CLI::App> root;
    CLI::App* eval = nullptr;
    CLI::App* analyze = nullptr;
    CLI::App* diff = nullptr;
    CLI::App* verify = nullptr;
    CLI::App* equiv = nullptr;
};

void add_suite_flags(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.cfg.seed, "Suite seed");
    sub->add_option("--trials", o.cfg.trials, "Number of trials");
    sub->add_option("--max-vars", o.cfg.max_vars, "Size of the variable pool");
    sub->add_option("--max-term-depth", o.cfg.max_term_depth, "Depth of generated terms");
    sub->add_option("--multiplicity-cap", o.cfg.multiplicity_cap, "Largest generated group multiplicity");
    sub->add_option("--jobs", o.jobs, "Worker threads; 1 runs the serial reference, 0 the OpenMP default");
    sub->add_flag("--json", o.json, "Machine-readable report");
}

void add_program_flags(CLI::App* sub, Options& o) {
    sub->add_option("--program", o.program, "Program file")->required();
    sub->add_option("--goal", o.goal, "Goal atom")->required();
    sub->add_option("--call", o.call, "Call element; defaults to every goal variable free");
    sub->add_option("--domain", o.domain, "omega, two or sl");
    sub->add_option("--inject", o.inject, "Trace injection file");
    sub->add_option("--max-iterations", o.max_iterations, "Fixpoint iteration limit");
    sub->add_option("--omega-cap", o.omega_cap, "Multiplicity clipping in the omega domain");
    sub->add_flag("--json", o.json, "Machine-readable output");
}

App build_app(Options& o) {
    App a;
    a.root = std::make_unique<CLI::App>("Sharing and linearity domains with abstract matching", "shlin");
    a.root->require_subcommand(1, 1);
    a.root->add_option("--config", o.config, "key=value file supplying flag defaults");

    a.eval = a.root->add_subcommand("eval", "Apply a domain operation");
    a.eval->add_option("--domain", o.domain, "omega, two, sl or concrete");
    a.eval->add_option("--op", o.op, "match, match-ref, mgu, union, leq, project, alpha")->required();
    a.eval->add_flag("--json", o.json, "Machine-readable output");
    a.eval->add_option("operands", o.operands, "Inline operands, or @file");

    a.analyze = a.root->add_subcommand("analyze", "Goal-dependent analysis");
    add_program_flags(a.analyze, o);
    a.analyze->add_option("--mode", o.mode, "matching or mgu");
    a.analyze->add_flag("--trace", o.trace, "Print every clause visit");

    a.diff = a.root->add_subcommand("diff", "Compare both backward modes");
    add_program_flags(a.diff, o);

    a.verify = a.root->add_subcommand("verify", "Randomized correctness or optimality suite");
    a.verify->add_option("kind", o.kind, "correctness, optimality or proposition")->required();
    a.verify->add_option("--domain", o.domain, "omega, two or sl");
    add_suite_flags(a.verify, o);

    a.equiv = a.root->add_subcommand("equiv", "Equivalence of reference and optimized matchings");
    add_suite_flags(a.equiv, o);
    return a;
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
    for (const auto& a : args)
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
}

// Appends `--key=value` for config entries that the chosen subcommand accepts and the command line omits.
std::vector<std::string> apply_config(const std::vector<std::string>& args, const std::string& path, const App& app) {
    std::string text = read_file(path);
    std::vector<std::string> out = args;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    CLI::App* sub = app.root->get_subcommands().front();
    std::vector<CLI::App*> subs = {app.eval, app.analyze, app.diff, app.verify, app.equiv};
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == '%') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::SyntaxError, path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = "--" + trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        bool known = false;
        for (auto* s : subs) known = known || s->get_option_no_throw(key) != nullptr;
        if (!known) throw Error(ErrorKind::InvalidArgument, path + ":" + std::to_string(lineno) + ": unknown key " + key);
        if (sub->get_option_no_throw(key) && !given(args, key)) out.push_back(key + "=" + value);
    }
    return out;
}

void parse(App& app, const std::vector<std::string>& args) {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.root->parse(rev);
}

AbstractElement free_call(DomainTag d, const VarSet& u) {
    auto top = OmegaElement::top_free(u);
    switch (d) {
    case DomainTag::Omega: return top;
    case DomainTag::Two: return alpha2(top);
    case DomainTag::Sl: return alpha_sl(alpha2(top));
    }
    return top;
}

AbstractElement abstract_of(const ExistentialSubstitution& c, DomainTag d) {
    auto w = alpha_omega(c);
    switch (d) {
    case DomainTag::Omega: return w;
    case DomainTag::Two: return alpha2(w);
    case DomainTag::Sl: return alpha_sl(alpha2(w));
    }
    return w;
}

void need_operands(const Options& o, std::size_t n) {
    if (o.operands.size() != n)
        throw Error(ErrorKind::InvalidArgument,
                    "--op " + o.op + " takes " + std::to_string(n) + " operand" + (n == 1 ? "" : "s"));
}

void emit_eval(const Options& o, std::ostream& out, const Json& result, const std::string& text) {
    if (o.json) {
        Json j;
        j["command"] = "eval";
        j["domain"] = o.domain;
        j["op"] = o.op;
        j["result"] = result;
        out << j.dump() << '\n';
    } else {
        out << text << '\n';
    }
}

int eval_concrete(const Options& o, std::ostream& out) {
    auto subst = [&](std::size_t i) { return parse_existential(operand_text(o.operands[i])); };
    std::optional<ExistentialSubstitution> r;
    if (o.op == "match") {
        need_operands(o, 2);
        r = ematch(subst(0), subst(1));
    } else if (o.op == "mgu") {
        need_operands(o, 2);
        r = try_emgu(subst(0), subst(1));
    } else if (o.op == "project") {
        need_operands(o, 2);
        r = eproject(subst(0), parse_varset(operand_text(o.operands[1])));
    } else if (o.op == "alpha") {
        need_operands(o, 1);
        r = subst(0);
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown op " + o.op + " for the concrete domain");
    }
    if (!r) {
        emit_eval(o, out, nullptr, "undefined");
    } else {
        auto text = format_existential(*r);
        emit_eval(o, out, text, text);
    }
    return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
    if (o.domain == "concrete") return eval_concrete(o, out);
    DomainTag d = parse_domain(o.domain);
    auto element = [&](std::size_t i) { return parse_element(d, operand_text(o.operands[i])); };
    AbstractElement r;
    if (o.op == "match") {
        need_operands(o, 2);
        r = match_element(element(0), element(1));
    } else if (o.op == "match-ref") {
        if (d != DomainTag::Two) throw Error(ErrorKind::InvalidArgument, "match-ref is defined for the two domain");
        need_operands(o, 2);
        r = match2_ref(std::get<TwoElement>(element(0)), std::get<TwoElement>(element(1)));
    } else if (o.op == "union") {
        need_operands(o, 2);
        r = union_element(element(0), element(1));
    } else if (o.op == "leq") {
        need_operands(o, 2);
        bool b = leq_element(element(0), element(1));
        emit_eval(o, out, b, b ? "true" : "false");
        return kExitOk;
    } else if (o.op == "project") {
        need_operands(o, 2);
        r = project_element(element(0), parse_varset(operand_text(o.operands[1])));
    } else if (o.op == "alpha") {
        need_operands(o, 1);
        r = abstract_of(parse_existential(operand_text(o.operands[0])), d);
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown op " + o.op);
    }
    auto text = format_element(r);
    emit_eval(o, out, text, text);
    return kExitOk;
}

AnalysisRequest make_request(const Options& o, BackwardMode mode) {
    AnalysisRequest r;
    DomainTag d = parse_domain(o.domain);
    r.program = parse_program(read_file(o.program));
    r.goal = parse_goal(o.goal);
    r.call = o.call.empty() ? free_call(d, atom_vars(r.goal)) : parse_element(d, operand_text(o.call));
    r.mode = mode;
    if (o.max_iterations < 1) throw Error(ErrorKind::InvalidArgument, "--max-iterations must be positive");
    if (o.omega_cap < 1) throw Error(ErrorKind::InvalidArgument, "--omega-cap must be positive");
    r.limits.max_iterations = o.max_iterations;
    r.limits.omega_cap = static_cast<Multiset::Count>(o.omega_cap);
    if (!o.inject.empty()) r.injection = parse_injection(d, read_file(o.inject));
    return r;
}

Json trace_json(const AnalysisResult& res) {
    Json arr = Json::array();
    for (const auto& t : res.trace) {
        Json j;
        j["depth"] = t.depth;
        j["clause"] = t.clause;
        j["goal"] = t.goal;
        j["unified"] = t.unified;
        if (t.unified) {
            j["call"] = format_element(t.call);
            j["full"] = format_element(t.full);
            j["entry"] = format_element(t.entry);
            j["exit"] = format_element(t.exit);
            j["answer"] = format_element(t.answer);
            j["injected"] = Json::array();
            for (auto s : t.injected) j["injected"].push_back(to_string(s));
        }
        arr.push_back(j);
    }
    return arr;
}

int cmd_analyze(const Options& o, std::ostream& out) {
    auto req = make_request(o, parse_mode(o.mode));
    auto res = analyze(req);
    if (o.json) {
        Json j;
        j["command"] = "analyze";
        j["domain"] = o.domain;
        j["mode"] = to_string(req.mode);
        j["goal"] = format_atom(req.goal);
        j["call"] = format_element(req.call);
        j["answer"] = format_element(res.answer);
        j["iterations"] = res.iterations;
        j["memo_entries"] = res.memo_entries;
        if (o.trace) j["trace"] = trace_json(res);
        out << j.dump() << '\n';
        return kExitOk;
    }
    if (o.trace) out << format_trace(res);
    out << format_element(res.answer) << '\n';
    return kExitOk;
}

int cmd_diff(const Options& o, std::ostream& out) {
    auto matching = analyze(make_request(o, BackwardMode::Matching));
    auto req = make_request(o, BackwardMode::Mgu);
    auto mgu = analyze(req);
    auto diff = group_difference(matching.answer, mgu.answer);
    if (o.json) {
        Json j;
        j["command"] = "diff";
        j["domain"] = o.domain;
        j["goal"] = format_atom(req.goal);
        j["call"] = format_element(req.call);
        j["matching"] = format_element(matching.answer);
        j["mgu"] = format_element(mgu.answer);
        j["difference"] = diff;
        out << j.dump() << '\n';
        return kExitOk;
    }
    std::string set = "{";
    for (std::size_t i = 0; i < diff.size(); ++i) set += (i ? ", " : "") + diff[i];
    set += "}";
    out << "matching    " << format_element(matching.answer) << '\n';
    out << "mgu         " << format_element(mgu.answer) << '\n';
    out << "difference  " << set << '\n';
    return kExitOk;
}

int report(const Options& o, const SuiteReport& r, std::ostream& out, std::ostream& err) {
    out << (o.json ? r.json() + "\n" : r.text());
    if (r.ok()) return kExitOk;
    for (const auto& [i, d] : r.failed)
        err << "counterexample suite=" << r.suite << " domain=" << r.domain << " seed=" << r.cfg.seed << " index=" << i
            << ' ' << d << '\n';
    return kExitCounterexample;
}

TrialFn pick(const CliHooks& hooks, const std::string& suite, const TrialConfig& cfg, DomainTag d, TrialFn fallback) {
    if (hooks.trial) {
        if (TrialFn f = hooks.trial(suite, cfg, d)) return f;
    }
    return fallback;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err, const CliHooks& hooks) {
    o.cfg.validate();
    if (o.jobs < 0) throw Error(ErrorKind::InvalidArgument, "--jobs must be non-negative");
    if (o.kind == "proposition") {
        auto fn = pick(hooks, "proposition", o.cfg, DomainTag::Two, proposition_trial(o.cfg));
        return report(o, run_suite("proposition", "two", o.cfg, fn, o.jobs), out, err);
    }
    DomainTag d = parse_domain(o.domain);
    if (o.kind == "correctness") {
        auto fn = pick(hooks, "correctness", o.cfg, d, correctness_trial(o.cfg, d));
        return report(o, run_suite("correctness", to_string(d), o.cfg, fn, o.jobs), out, err);
    }
    if (o.kind == "optimality") {
        auto fn = pick(hooks, "optimality", o.cfg, d, optimality_trial(o.cfg, d));
        return report(o, run_suite("optimality", to_string(d), o.cfg, fn, o.jobs), out, err);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown verification kind " + o.kind);
}

int cmd_equiv(const Options& o, std::ostream& out, std::ostream& err, const CliHooks& hooks) {
    o.cfg.validate();
    if (o.jobs < 0) throw Error(ErrorKind::InvalidArgument, "--jobs must be non-negative");
    auto fn = pick(hooks, "equivalence", o.cfg, DomainTag::Two, equivalence_trial(o.cfg));
    return report(o, run_suite("equivalence", "two+sl", o.cfg, fn, o.jobs), out, err);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliHooks& hooks) {
    Options o;
    App app = build_app(o);
    try {
        parse(app, args);
        if (!o.config.empty()) {
            auto full = apply_config(args, o.config, app);
            o = Options{};
            app = build_app(o);
            parse(app, full);
        }
    } catch (const CLI::CallForHelp&) {
        out << app.root->help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.root->help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (app.eval->parsed()) return cmd_eval(o, out);
        if (app.analyze->parsed()) return cmd_analyze(o, out);
        if (app.diff->parsed()) return cmd_diff(o, out);
        if (app.verify->parsed()) return cmd_verify(o, out, err, hooks);
        if (app.equiv->parsed()) return cmd_equiv(o, out, err, hooks);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace shlin
