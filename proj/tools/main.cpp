// Command-line front end: parse, stats, bench, check, automaton, cover.

#include <CLI11.hpp>
#include <iostream>

#include "tablr/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tabular LR parsing toolkit"};
  app.require_subcommand(1);

  tablr::ParseOptions parse_opt;
  auto* parse = app.add_subcommand("parse", "parse a sentence and report metrics");
  parse->add_option("grammar", parse_opt.grammar_path, "grammar file")->required();
  parse->add_option("sentence", parse_opt.sentence, "whitespace-separated tokens")->required();
  parse->add_option("--method", parse_opt.method, "blr or 2lr")
      ->check(CLI::IsMember({"blr", "2lr"}))
      ->capture_default_str();
  parse->add_flag("--table", parse_opt.table, "dump the recognition table");
  parse->add_option("--trees", parse_opt.trees, "print up to N parse trees");
  parse->add_option("--forest", parse_opt.forest_path, "write the packed forest JSON ('-' for stdout)");

  std::string stats_grammar;
  bool stats_csv = false;
  auto* stats = app.add_subcommand("stats", "static automaton sizes for a grammar");
  stats->add_option("grammar", stats_grammar)->required();
  stats->add_flag("--csv", stats_csv, "emit CSV instead of JSON");

  tablr::BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "space/time counts for both methods over a corpus");
  bench->add_option("grammar", bench_opt.grammar_path)->required();
  bench->add_option("sentences", bench_opt.sentences_path, "sentence file, one per line");
  bench->add_option("--gen", bench_opt.gen_count, "generate N random sentences instead");
  bench->add_option("--seed", bench_opt.seed)->capture_default_str();
  bench->add_option("--max-len", bench_opt.max_len)->capture_default_str();
  bench->add_flag("--csv", bench_opt.csv, "emit CSV instead of JSON");

  tablr::CheckOptions check_opt;
  auto* check = app.add_subcommand("check", "cross-check the chart against reference semantics");
  check->add_option("grammar", check_opt.grammar_path)->required();
  check->add_option("--max-len", check_opt.max_len)->capture_default_str();
  check->add_option("--cap", check_opt.universe_cap, "sentence universe cap before sampling")
      ->capture_default_str();

  std::string autom_grammar, autom_method = "2lr";
  auto* autom = app.add_subcommand("automaton", "dump states and transitions");
  autom->add_option("grammar", autom_grammar)->required();
  autom->add_option("--method", autom_method)->check(CLI::IsMember({"blr", "2lr"}));

  std::string cover_grammar, cover_method = "2lr";
  auto* cover = app.add_subcommand("cover", "emit the cover grammar in grammar-file format");
  cover->add_option("grammar", cover_grammar)->required();
  cover->add_option("--method", cover_method)->check(CLI::IsMember({"blr", "2lr"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed()) return tablr::cmd_parse(parse_opt, std::cout, std::cerr);
    if (stats->parsed()) return tablr::cmd_stats(stats_grammar, stats_csv, std::cout, std::cerr);
    if (bench->parsed()) {
      if (bench_opt.sentences_path.empty() && bench_opt.gen_count <= 0) {
        std::cerr << "error: provide a sentence file or --gen N\n";
        return 2;
      }
      return tablr::cmd_bench(bench_opt, std::cout, std::cerr);
    }
    if (check->parsed()) return tablr::cmd_check(check_opt, std::cout, std::cerr);
    if (autom->parsed())
      return tablr::cmd_automaton(autom_grammar, autom_method, std::cout, std::cerr);
    if (cover->parsed()) return tablr::cmd_cover(cover_grammar, cover_method, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
