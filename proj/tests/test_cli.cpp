#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "corpus.hpp"
#include "tablr/cli.hpp"

using namespace tablr;

namespace {

struct TempGrammar {
  std::filesystem::path path;
  explicit TempGrammar(const std::string& text) {
    path = std::filesystem::temp_directory_path() /
           ("tablr_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".cfg");
    std::ofstream out(path);
    out << text;
  }
  ~TempGrammar() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("parse command exit codes and output") {
  TempGrammar g(corpus::g_ab);
  std::ostringstream out, err;

  ParseOptions accept{g.path.string(), "a b", "2lr", false, 0, ""};
  CHECK(cmd_parse(accept, out, err) == 0);
  CHECK(out.str().find("accepted") == 0);
  CHECK(out.str().find("\"accepted\":true") != std::string::npos);

  out.str("");
  ParseOptions reject{g.path.string(), "b a", "2lr", false, 0, ""};
  CHECK(cmd_parse(reject, out, err) == 1);
  CHECK(out.str().find("rejected") == 0);

  out.str("");
  err.str("");
  ParseOptions unknown{g.path.string(), "a c", "2lr", false, 0, ""};
  CHECK(cmd_parse(unknown, out, err) == 2);
  CHECK(err.str().find("'c'") != std::string::npos);

  out.str("");
  err.str("");
  ParseOptions missing{"/nonexistent/grammar.cfg", "a", "2lr", false, 0, ""};
  CHECK(cmd_parse(missing, out, err) == 2);
}

TEST_CASE("parse command extras: table, trees, forest") {
  TempGrammar g(corpus::g_amb);
  std::ostringstream out, err;
  ParseOptions opt{g.path.string(), "a a a", "2lr", true, 10, "-"};
  CHECK(cmd_parse(opt, out, err) == 0);
  CHECK(out.str().find("U[0,1]:") != std::string::npos);
  CHECK(out.str().find("S(S(a) S(S(a) S(a)))") != std::string::npos);
  CHECK(out.str().find("\"root\"") != std::string::npos);

  // Trees are a 2lr feature.
  std::ostringstream out2, err2;
  ParseOptions blr_trees{g.path.string(), "a", "blr", false, 1, ""};
  CHECK(cmd_parse(blr_trees, out2, err2) == 2);
}

TEST_CASE("stats command") {
  TempGrammar g(corpus::g_ab);
  std::ostringstream out, err;
  CHECK(cmd_stats(g.path.string(), false, out, err) == 0);
  auto j = nlohmann::json::parse(out.str());
  CHECK(j["G"] == 5);
  CHECK(j["N"] == 1);
  CHECK(j["P"] == 2);
  CHECK(j["R_LR"] == 6);
  CHECK(j["R_2LR"] == 5);
  CHECK(j["Q_BLR"] == j["R_LR"].get<int>() + 9);  // states plus the 9 items of g-dagger
  CHECK(j["R_2LR"] <= j["R_LR"]);

  // Q_2LR is the image pairs plus the designated initial pair plus all
  // right-hand-side suffixes: 5 + 1 + 7 for this grammar.
  CHECK(j["Q_2LR"] == 13);

  std::ostringstream csv;
  CHECK(cmd_stats(g.path.string(), true, csv, err) == 0);
  CHECK(csv.str().find("grammar,G,N,P,R_LR,Q_BLR,T_BLR,R_2LR,Q_2LR,T_2LR\n") == 0);
}

TEST_CASE("static report for the one-rule grammar") {
  tablr::Pipeline p = make_pipeline(parse_grammar("S -> a\n"));
  StaticReport r = static_report(p);
  CHECK(r.size == 2);
  CHECK(r.nonterminals == 1);
  CHECK(r.rules == 1);
  CHECK(r.r_lr == 4);
  CHECK(r.r_2lr == 3);
}

TEST_CASE("bench command over generated sentences") {
  TempGrammar g(corpus::g_amb);
  std::ostringstream out, err;
  BenchOptions opt;
  opt.grammar_path = g.path.string();
  opt.gen_count = 5;
  opt.seed = 3;
  opt.max_len = 6;
  CHECK(cmd_bench(opt, out, err) == 0);
  auto j = nlohmann::json::parse(out.str());
  CHECK(j["sentences"] == 5);
  CHECK(j["per_sentence"].size() == 5);
  CHECK(j["total"]["2lr"]["space"].get<std::uint64_t>() <=
        j["total"]["blr"]["space"].get<std::uint64_t>());

  // Determinism under the same seed.
  std::ostringstream out2;
  CHECK(cmd_bench(opt, out2, err) == 0);
  CHECK(out.str() == out2.str());

  // An single sentence averages to itself.
  std::ostringstream out3;
  BenchOptions one = opt;
  one.gen_count = 1;
  CHECK(cmd_bench(one, out3, err) == 0);
  auto j3 = nlohmann::json::parse(out3.str());
  CHECK(j3["average"]["2lr"]["space"].get<double>() ==
        j3["per_sentence"][0]["2lr"]["space"].get<double>());
}

TEST_CASE("bench command with empty generation errors out") {
  TempGrammar g("S -> a S\n");  // nothing derivable, generation always fails
  std::ostringstream out, err;
  BenchOptions opt;
  opt.grammar_path = g.path.string();
  opt.gen_count = 3;
  CHECK(cmd_bench(opt, out, err) == 2);
  CHECK(err.str().find("no sentences generated") != std::string::npos);
}

TEST_CASE("check command passes on the corpus") {
  for (const auto& [name, text] : corpus::all()) {
    TempGrammar g(text);
    std::ostringstream out, err;
    CheckOptions opt;
    opt.grammar_path = g.path.string();
    opt.max_len = name == "g_lr0" ? 3 : 4;
    INFO(name);
    CHECK(cmd_check(opt, out, err) == 0);
    CHECK(out.str().find("all passed") != std::string::npos);
  }
}

TEST_CASE("check command reports a witness for a corrupted pred table") {
  Cfg g = corpus::cfg(corpus::g_ab);
  tablr::Pipeline p = make_pipeline(g);
  PredTables corrupted = p.tlr_preds;
  // Admit everything unconditionally: the chart over-fills and the span
  // oracle disagrees.
  for (auto& u : corrupted.unconditional) u = 1;
  CheckOptions opt;
  opt.max_len = 3;
  opt.override_pred_2lr = &corrupted;
  CheckReport report = run_conformance_check(g, opt);
  CHECK(report.failures > 0);
  REQUIRE_FALSE(report.witnesses.empty());
  CHECK(report.witnesses.front().find("sentence") != std::string::npos);
}

TEST_CASE("automaton and cover dumps") {
  TempGrammar g(corpus::g_ab);
  std::ostringstream out, err;
  CHECK(cmd_automaton(g.path.string(), "2lr", out, err) == 0);
  CHECK(out.str().find("state q0:") != std::string::npos);
  CHECK(out.str().find("[shift]") != std::string::npos);
  CHECK(out.str().find("[gathering]") != std::string::npos);

  std::ostringstream cover_out;
  CHECK(cmd_cover(g.path.string(), "2lr", cover_out, err) == 0);
  CHECK(cover_out.str().find("%start") != std::string::npos);
}
