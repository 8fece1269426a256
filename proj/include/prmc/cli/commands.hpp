#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "prmc/semantics.hpp"

namespace prmc::cli {

enum Exit { kValid = 0, kFailed = 1, kInputError = 2, kResourceError = 3 };

struct ScriptCommand {
    enum Kind { Announce, Check, Learn } kind;
    std::string formula;
    std::size_t line = 0;
};

/// Scripts: `announce <formula>`, `check <formula>` and `learn <formula>`
/// lines. `#` starts a comment; an indented line continues the previous command.
inline std::vector<ScriptCommand> parse_script(const std::string& text) {
    std::vector<ScriptCommand> out;
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++n;
        std::string line = raw.substr(0, raw.find('#'));
        if (detail::trim_ws(line).empty()) continue;
        if (std::isspace(static_cast<unsigned char>(line[0]))) {
            if (out.empty()) throw ParseError("continuation line without a command", n);
            out.back().formula += " " + detail::trim_ws(line);
            continue;
        }
        auto sp = line.find_first_of(" \t");
        std::string kw = line.substr(0, sp);
        std::string rest = sp == std::string::npos ? "" : detail::trim_ws(line.substr(sp));
        ScriptCommand c{ScriptCommand::Check, rest, n};
        if (kw == "announce") c.kind = ScriptCommand::Announce;
        else if (kw == "check") c.kind = ScriptCommand::Check;
        else if (kw == "learn") c.kind = ScriptCommand::Learn;
        else throw ParseError("unknown script command '" + kw + "'", n);
        out.push_back(std::move(c));
    }
    for (const auto& c : out)
        if (detail::trim_ws(c.formula).empty()) throw ParseError("missing formula", c.line);
    return out;
}

inline std::vector<ScriptCommand> load_script(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open script '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_script(ss.str());
}

struct RunConfig {
    std::string model;
    std::vector<std::string> formulas;
    std::string script;
    std::string dot_out;
    std::string transcript;
    std::size_t max_states = Limits{}.max_states;
    std::size_t max_enum = Limits{}.max_enum;
    std::size_t eq_budget = LearnBudget{}.max_equivalence;
    std::size_t length_cap = LearnBudget{}.length_cap;
    std::vector<std::string> var_order;

    EvalOptions eval_options() const {
        if (max_states == 0 || max_enum == 0 || eq_budget == 0) throw Error("caps and budgets must be positive");
        EvalOptions o;
        o.limits.max_states = max_states;
        o.limits.max_enum = max_enum;
        o.budget.max_equivalence = eq_budget;
        o.budget.length_cap = length_cap;
        o.var_order = var_order;
        return o;
    }
};

namespace detail {

inline std::string seconds(double s) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(2) << s << " s";
    return o.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw Error("cannot write '" + p.string() + "'");
    f << content;
}

/// Maps an exception to an exit code, printing it.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kInputError;
    } catch (const ValidationError& e) {
        err << "invalid model: " << e.what() << '\n';
        return kInputError;
    } catch (const UnsupportedStar& e) {
        err << "unsupported: " << e.what() << '\n';
        return kInputError;
    } catch (const CapacityError& e) {
        err << "capacity exceeded: " << e.what() << '\n';
        return kResourceError;
    } catch (const Diverged& e) {
        err << "diverged: " << e.what() << '\n';
        return kResourceError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kInputError;
    }
}

/// Script commands followed by the -f formulas as `as` commands.
inline std::vector<ScriptCommand> commands(const RunConfig& cfg, ScriptCommand::Kind as) {
    std::vector<ScriptCommand> cmds;
    if (!cfg.script.empty()) cmds = load_script(cfg.script);
    for (const auto& f : cfg.formulas) cmds.push_back({as, f, 0});
    return cmds;
}

inline Analysis closed(const std::string& text, const RegularKripke& m) {
    Analysis a = prepare(text, m);
    if (!a.closed) throw Error("formula has free variable '" + a.free[0] + "'");
    return a;
}

}  // namespace detail

/// Applies an announcement, reporting the new state space.
inline ExtTransducer apply_announcement(Evaluator& ev, const ExtTransducer& T, const RegularKripke& m, const std::string& text, std::ostream& out,
                                        const std::string& dot_out, std::size_t& counter) {
    Analysis a = detail::closed(text, m);
    ev.set_var_order(a.vars);
    ExtTransducer T2 = ev.announce(T, a.formula);
    Nfa states = reduce(keep_tracks(T2.nfa, {tracks::src}), ev.limits());
    ++counter;
    out << "announce " << text << "\n  state space: " << states.num_states() << " states, transducer: " << T2.nfa.num_states() << " states\n";
    if (!dot_out.empty()) detail::write_file(std::filesystem::path(dot_out) / ("statespace_" + std::to_string(counter) + ".dot"), to_dot(states, "statespace"));
    return T2;
}

inline int cmd_check(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        EvalOptions opts = cfg.eval_options();
        std::ofstream log;
        if (!cfg.transcript.empty()) {
            log.open(cfg.transcript);
            if (!log) throw Error("cannot write '" + cfg.transcript + "'");
            opts.transcript = &log;
        }
        RegularKripke m = load_model(cfg.model, opts.limits);
        auto cmds = detail::commands(cfg, ScriptCommand::Check);
        if (cmds.empty()) throw Error("nothing to check: give -f or --script");
        Evaluator ev(opts);
        ExtTransducer T = init_extended(m, {}, opts.limits);
        std::size_t announced = 0, checked = 0, failed = 0;
        for (const auto& c : cmds) {
            if (c.kind == ScriptCommand::Announce) {
                T = apply_announcement(ev, T, m, c.formula, out, cfg.dot_out, announced);
            } else if (c.kind == ScriptCommand::Check) {
                ++checked;
                auto r = check_valid(ev, T, detail::closed(c.formula, m));
                out << "check " << c.formula << "\n  " << (r.valid ? "VALID" : "INVALID") << " (" << detail::seconds(r.seconds)
                    << ", peak automaton " << r.peak_states << " states)\n";
                if (!r.valid) {
                    ++failed;
                    out << "  shortest counterexample: " << m.state_layout().word_to_string(*r.witness) << '\n';
                    out << "  counterexample automaton: " << r.counterexamples.num_states() << " states\n";
                    if (!cfg.dot_out.empty()) {
                        auto base = std::filesystem::path(cfg.dot_out) / ("counterexamples_" + std::to_string(checked));
                        detail::write_file(base.string() + ".aut", print_automaton(r.counterexamples));
                        detail::write_file(base.string() + ".dot", to_dot(r.counterexamples, "counterexamples"));
                        out << "  written to " << base.string() << ".aut\n";
                    }
                }
            }
        }
        return failed ? kFailed : kValid;
    });
}

struct LearnReport {
    DisappearanceRelation relation;
    double seconds = 0;
};

/// Learns L_≼ of announcing `text` on T.
inline LearnReport learn_on(const ExtTransducer& T, const RegularKripke& m, const std::string& text, const EvalOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    FormulaOperator op(as_kripke(T), detail::closed(text, m), opts);
    LearnReport r{learn_relation(op, opts.budget, opts.limits, opts.transcript), 0};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline int cmd_learn(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        EvalOptions opts = cfg.eval_options();
        std::ofstream log;
        if (!cfg.transcript.empty()) {
            log.open(cfg.transcript);
            if (!log) throw Error("cannot write '" + cfg.transcript + "'");
            opts.transcript = &log;
        }
        RegularKripke m = load_model(cfg.model, opts.limits);
        auto cmds = detail::commands(cfg, ScriptCommand::Learn);
        Evaluator ev(opts);
        ExtTransducer T = init_extended(m, {}, opts.limits);
        std::size_t announced = 0, learned = 0;
        int status = kValid;
        for (const auto& c : cmds) {
            if (c.kind == ScriptCommand::Announce) {
                T = apply_announcement(ev, T, m, c.formula, out, cfg.dot_out, announced);
                continue;
            }
            if (c.kind != ScriptCommand::Learn) continue;
            ++learned;
            auto r = learn_on(T, m, c.formula, opts);
            const auto& d = r.relation;
            out << "learn " << c.formula << "\n  " << (d.converged ? "LEARNED" : "DIVERGED") << " (" << detail::seconds(r.seconds) << ")\n"
                << "  minimal DFA: " << d.dfa_states() << " states (trimmed " << d.relation.num_states() << ")\n"
                << "  hypotheses: " << d.hypotheses << ", equivalence queries: " << d.equivalence_queries
                << ", membership queries: " << d.membership_queries << '\n';
            if (!d.converged) {
                out << "  reason: " << d.reason << "\n  last hypothesis reported above\n";
                status = kResourceError;
            }
            if (!cfg.dot_out.empty()) {
                auto base = std::filesystem::path(cfg.dot_out) / ("relation_" + std::to_string(learned));
                detail::write_file(base.string() + ".aut", print_automaton(d.relation));
                detail::write_file(base.string() + ".dot", to_dot(d.relation, "relation"));
                out << "  written to " << base.string() << ".aut\n";
            }
        }
        if (learned == 0) throw Error("nothing to learn: give -f or a script with 'learn' lines");
        return status;
    });
}

inline int cmd_inspect(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        EvalOptions opts = cfg.eval_options();
        RegularKripke m = load_model(cfg.model, opts.limits);
        out << "alphabet:";
        for (const auto& a : m.alphabet()) out << ' ' << a;
        out << "\nprops:";
        for (const auto& p : m.props()) out << ' ' << p;
        out << '\n';
        if (!m.agents().empty()) {
            out << "agents:";
            for (const auto& [n, i] : m.agents()) out << ' ' << n << '=' << i;
            out << '\n';
        }
        Nfa states = state_space(m);
        out << "transducer: " << m.trans().num_states() << " states, " << m.trans().num_transitions() << " transitions\n";
        if (is_empty(states)) out << "state space: empty\n";
        else out << "state space: " << states.num_states() << " states, shortest state " << m.state_layout().word_to_string(*shortest_word(states)) << '\n';
        S5Report s5 = check_s5(m, opts.limits);
        out << "S5: reflexive=" << (s5.reflexive ? "yes" : "no " + s5.reflexive_witness) << " symmetric=" << (s5.symmetric ? "yes" : "no " + s5.symmetric_witness)
            << " transitive=" << (s5.transitive ? "yes" : "no " + s5.transitive_witness) << '\n';
        if (!cfg.dot_out.empty()) {
            auto dir = std::filesystem::path(cfg.dot_out);
            detail::write_file(dir / "transducer.dot", to_dot(m.trans(), "transducer"));
            detail::write_file(dir / "statespace_0.dot", to_dot(states, "statespace"));
            opts.dot_dir = (dir / "steps").string();
        }
        auto cmds = detail::commands(cfg, ScriptCommand::Check);
        Evaluator ev(opts);
        ExtTransducer T = init_extended(m, {}, opts.limits);
        std::size_t announced = 0;
        for (const auto& c : cmds) {
            if (c.kind == ScriptCommand::Announce) {
                T = apply_announcement(ev, T, m, c.formula, out, cfg.dot_out, announced);
            } else if (c.kind == ScriptCommand::Check) {
                Nfa s = sat_states(ev, T, detail::closed(c.formula, m));
                out << "eval " << c.formula << "\n  satisfaction set: " << s.num_states() << " states\n";
            }
        }
        return s5.ok() ? kValid : kFailed;
    });
}

}  // namespace prmc::cli
