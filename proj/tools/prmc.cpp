#include <CLI11.hpp>

#include "prmc/cli/commands.hpp"

namespace {

void add_common(CLI::App* sub, prmc::cli::RunConfig& cfg) {
    sub->add_option("model", cfg.model, "model file")->required();
    sub->add_option("-f,--formula", cfg.formulas, "formula (repeatable)");
    sub->add_option("--script", cfg.script, "script of announce/check/learn lines");
    sub->add_option("--dot-out", cfg.dot_out, "directory for DOT and automaton dumps");
    sub->add_option("--transcript", cfg.transcript, "learner transcript file");
    sub->add_option("--max-states", cfg.max_states, "state cap for intermediate automata")->check(CLI::PositiveNumber);
    sub->add_option("--max-enum", cfg.max_enum, "cap on enumerated words")->check(CLI::PositiveNumber);
    sub->add_option("--eq-budget", cfg.eq_budget, "equivalence query budget of the learner")->check(CLI::PositiveNumber);
    sub->add_option("--length-cap", cfg.length_cap, "longest length the learner brute-forces");
    sub->add_option("--var-order", cfg.var_order, "variable track order, e.g. i,j")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prmc: symbolic model checking of parameterized public announcement logic"};
    app.require_subcommand(1);
    prmc::cli::RunConfig cfg;
    auto* check = app.add_subcommand("check", "check formulas for validity");
    auto* learn = app.add_subcommand("learn", "learn the disappearance relation of an announcement");
    auto* inspect = app.add_subcommand("inspect", "print model information and dump automata");
    for (auto* s : {check, learn, inspect}) add_common(s, cfg);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : prmc::cli::kInputError;
    }
    if (check->parsed()) return prmc::cli::cmd_check(cfg);
    if (learn->parsed()) return prmc::cli::cmd_learn(cfg);
    return prmc::cli::cmd_inspect(cfg);
}
