#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "prmc/cli/commands.hpp"

using namespace prmc;
using namespace prmc::cli;

namespace {

std::string model(const std::string& name) { return std::string(PRMC_SOURCE_DIR) + "/models/" + name; }

struct Run {
    int code;
    std::string out, err;
};

using Command = int (*)(const RunConfig&, std::ostream&, std::ostream&);

Run run(Command cmd, const RunConfig& cfg) {
    std::ostringstream out, err;
    int code = cmd(cfg, out, err);
    return {code, out.str(), err.str()};
}

RunConfig check_config(const std::string& m, std::vector<std::string> formulas) {
    RunConfig c;
    c.model = model(m);
    c.formulas = std::move(formulas);
    return c;
}

TEST(Script, Parse) {
    auto cmds = parse_script(
        "# comment\n"
        "announce E i: m_i   # trailing\n"
        "\n"
        "check A i: m_i &\n"
        "    E j: m_j\n"
        "learn A i: <i> !m_i\n");
    ASSERT_EQ(cmds.size(), 3u);
    EXPECT_EQ(cmds[0].kind, ScriptCommand::Announce);
    EXPECT_EQ(cmds[0].formula, "E i: m_i");
    EXPECT_EQ(cmds[1].kind, ScriptCommand::Check);
    EXPECT_EQ(cmds[1].formula, "A i: m_i & E j: m_j");
    EXPECT_EQ(cmds[1].line, 4u);
    EXPECT_EQ(cmds[2].kind, ScriptCommand::Learn);
}

TEST(Script, Errors) {
    EXPECT_THROW(parse_script("verify true\n"), ParseError);
    EXPECT_THROW(parse_script("  true\n"), ParseError);
    EXPECT_THROW(parse_script("check\n"), ParseError);
}

TEST(Script, BundledScriptsParse) {
    for (const auto& e : std::filesystem::directory_iterator(std::string(PRMC_SOURCE_DIR) + "/models"))
        if (e.path().extension() == ".script") {
            EXPECT_FALSE(load_script(e.path().string()).empty()) << e.path();
        }
}

TEST(Cli, BundledModelsAreS5) {
    for (const char* m : {"muddy.kripke", "muddy_abs.kripke", "highest.kripke", "russian.kripke"}) {
        RunConfig c;
        c.model = model(m);
        auto r = run(cmd_inspect, c);
        EXPECT_EQ(r.code, kValid) << m << r.err;
        EXPECT_NE(r.out.find("S5: reflexive=yes symmetric=yes transitive=yes"), std::string::npos) << r.out;
    }
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run(cmd_check, check_config("muddy.kripke", {"E i: m_i | A i: !m_i"})).code, kValid);
    auto r = run(cmd_check, check_config("muddy.kripke", {"E i: m_i"}));
    EXPECT_EQ(r.code, kFailed);
    EXPECT_NE(r.out.find("shortest counterexample: c"), std::string::npos) << r.out;
    EXPECT_EQ(run(cmd_check, check_config("muddy.kripke", {"E i: m_"})).code, kInputError);
    EXPECT_EQ(run(cmd_check, check_config("muddy.kripke", {"m_i"})).code, kInputError);
    EXPECT_EQ(run(cmd_check, check_config("muddy.kripke", {"E i: [! m_i]* false"})).code, kInputError);
    EXPECT_EQ(run(cmd_check, check_config("missing.kripke", {"true"})).code, kInputError);
    auto tiny = check_config("muddy.kripke", {"E i: E j: i != j & K i (K j m_j | m_i)"});
    tiny.max_states = 3;
    EXPECT_EQ(run(cmd_check, tiny).code, kResourceError);
}

// `announce φ` then `check ψ` gives the verdict of checking [! φ] ψ.
TEST(Cli, PreambleCommutes) {
    auto dir = std::filesystem::temp_directory_path() / "prmc_cli_test";
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"E i: m_i", "E i: m_i"},
        {"E i: m_i", "E i: K i m_i"},
        {"E i: m_i & A j: (i != j -> !m_j)", "E i: K i m_i"},
        {"A i: <i> !m_i", "A i: K i m_i"},
    };
    for (const auto& [phi, psi] : cases) {
        auto path = dir / "case.script";
        cli::detail::write_file(path, "announce " + phi + "\ncheck " + psi + "\n");
        RunConfig scripted;
        scripted.model = model("muddy.kripke");
        scripted.script = path.string();
        int a = run(cmd_check, scripted).code;
        int b = run(cmd_check, check_config("muddy.kripke", {"[! " + phi + "] " + psi})).code;
        EXPECT_EQ(a, b) << phi << " / " << psi;
    }
    std::filesystem::remove_all(dir);
}

TEST(Cli, LearnBoundedMuddy) {
    auto dir = std::filesystem::temp_directory_path() / "prmc_cli_learn";
    RunConfig c;
    c.model = model("muddy.kripke");
    c.script = model("muddy_bounded_2.script");
    c.dot_out = dir.string();
    auto r = run(cmd_learn, c);
    EXPECT_EQ(r.code, kValid) << r.err;
    EXPECT_NE(r.out.find("LEARNED"), std::string::npos) << r.out;
    EXPECT_TRUE(std::filesystem::exists(dir / "relation_1.aut"));
    EXPECT_TRUE(std::filesystem::exists(dir / "statespace_1.dot"));
    std::ifstream f(dir / "relation_1.aut");
    std::stringstream text;
    text << f.rdbuf();
    Nfa rel = parse_automaton(text.str());
    EXPECT_EQ(rel.layout().arity(), 2u);
    std::filesystem::remove_all(dir);

    auto v = run(cmd_check, c);
    EXPECT_EQ(v.code, kValid) << v.out << v.err;
}

TEST(Cli, LearnDivergenceIsResourceError) {
    RunConfig c;
    c.model = model("muddy.kripke");
    c.formulas = {"E i: m_i & <i> !m_i"};
    c.length_cap = 4;
    auto r = run(cmd_learn, c);
    EXPECT_EQ(r.code, kResourceError);
    EXPECT_NE(r.out.find("DIVERGED"), std::string::npos) << r.out;
}

}  // namespace
