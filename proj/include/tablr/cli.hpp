#pragma once

// Command implementations behind the command-line tool: grammar loading,
// the blr/2lr pipelines, parsing with metrics, static and dynamic reports,
// the conformance sweep, and automaton/cover dumps. Kept out of main() so
// tests can drive the commands directly.

#include <fstream>
#include <json.hpp>

#include "tablr/chart.hpp"
#include "tablr/cover.hpp"
#include "tablr/derivation.hpp"
#include "tablr/forest.hpp"
#include "tablr/lr.hpp"
#include "tablr/pda_sim.hpp"
#include "tablr/two_lr.hpp"

namespace tablr {

using json = nlohmann::ordered_json;

struct Pipeline {
  Cfg source, augmented;
  LrAutomaton lr;
  Pda blr_pda;
  CoverGrammar blr_cover;
  PredTables blr_preds;
  TwoLrAutomaton two;
  Pda tlr_pda;
  CoverGrammar tlr_cover;
  PredTables tlr_preds;
};

inline Pipeline make_pipeline(const Cfg& source) {
  Pipeline p;
  p.source = source;
  p.augmented = augment(source);
  p.lr = build_r_lr(p.augmented);
  p.blr_pda = build_a_lr_prime(p.lr);
  p.blr_cover = build_cover_blr(p.blr_pda);
  p.blr_preds = build_pred_tables(p.blr_pda);
  p.two = build_r_2lr(p.augmented);
  p.tlr_pda = build_a_2lr(p.two);
  p.tlr_cover = build_cover(p.tlr_pda);
  p.tlr_preds = build_pred_tables(p.tlr_pda);
  return p;
}

inline Cfg load_grammar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open grammar file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_grammar(ss.str());
}

inline json metrics_json(const RunMetrics& m) {
  return json{{"space", m.space}, {"time", m.time}, {"accepted", m.accepted}};
}

// ---------------------------------------------------------------- parse ---

struct ParseOptions {
  std::string grammar_path;
  std::string sentence;
  std::string method = "2lr";  // "blr" or "2lr"
  bool table = false;
  int trees = 0;
  std::string forest_path;  // "-" for stdout
};

inline int cmd_parse(const ParseOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    Cfg g = load_grammar_file(opt.grammar_path);
    Sentence v = Sentence::parse(g, opt.sentence);
    Pipeline p = make_pipeline(g);
    const bool two_lr = opt.method != "blr";
    if (!two_lr && (opt.trees > 0 || !opt.forest_path.empty())) {
      err << "error: trees and forests are read from the 2lr cover; use --method 2lr\n";
      return 2;
    }
    const CoverGrammar& cover = two_lr ? p.tlr_cover : p.blr_cover;
    const PredTables& preds = two_lr ? p.tlr_preds : p.blr_preds;
    ChartResult res = recognize(cover, preds, v);
    out << (res.metrics.accepted ? "accepted" : "rejected") << '\n';
    out << metrics_json(res.metrics).dump() << '\n';
    if (opt.table) res.table.dump(out, cover);
    if (res.metrics.accepted && opt.trees > 0) {
      for (const auto& t : extract_trees(res.table, cover, opt.trees))
        out << to_string(t) << '\n';
    }
    if (!opt.forest_path.empty()) {
      json forest = Forest(res.table, cover).to_json();
      if (opt.forest_path == "-") {
        out << forest.dump(2) << '\n';
      } else {
        std::ofstream f(opt.forest_path);
        if (!f) throw Error("cannot write forest file '" + opt.forest_path + "'");
        f << forest.dump(2) << '\n';
      }
    }
    return res.metrics.accepted ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

// ---------------------------------------------------------------- stats ---

struct StaticReport {
  std::size_t size = 0, nonterminals = 0, rules = 0;
  std::size_t r_lr = 0, q_blr = 0, t_blr = 0;
  std::size_t r_2lr = 0, q_2lr = 0, t_2lr = 0;
};

inline StaticReport static_report(const Pipeline& p) {
  StaticReport r;
  r.size = grammar_size(p.source);
  r.nonterminals = p.source.nonterminals.size();
  r.rules = p.source.rules.size();
  r.r_lr = p.lr.states.size();
  r.q_blr = p.blr_pda.symbols.size();
  r.t_blr = p.blr_pda.transitions.size();
  r.r_2lr = p.two.states.size();
  r.q_2lr = p.tlr_pda.symbols.size();
  r.t_2lr = p.tlr_pda.transitions.size();
  return r;
}

inline constexpr const char* k_stats_csv_header =
    "grammar,G,N,P,R_LR,Q_BLR,T_BLR,R_2LR,Q_2LR,T_2LR";

inline int cmd_stats(const std::string& grammar_path, bool csv, std::ostream& out,
                     std::ostream& err) {
  try {
    Pipeline p = make_pipeline(load_grammar_file(grammar_path));
    StaticReport r = static_report(p);
    if (csv) {
      out << k_stats_csv_header << '\n'
          << grammar_path << ',' << r.size << ',' << r.nonterminals << ',' << r.rules << ','
          << r.r_lr << ',' << r.q_blr << ',' << r.t_blr << ',' << r.r_2lr << ',' << r.q_2lr << ','
          << r.t_2lr << '\n';
    } else {
      json j{{"grammar", grammar_path}, {"G", r.size},     {"N", r.nonterminals},
             {"P", r.rules},            {"R_LR", r.r_lr},  {"Q_BLR", r.q_blr},
             {"T_BLR", r.t_blr},        {"R_2LR", r.r_2lr},{"Q_2LR", r.q_2lr},
             {"T_2LR", r.t_2lr}};
      out << j.dump() << '\n';
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

// ---------------------------------------------------------------- bench ---

struct BenchOptions {
  std::string grammar_path;
  std::string sentences_path;  // one sentence per line; empty when generating
  int gen_count = 0;
  std::uint64_t seed = 1;
  std::size_t max_len = 10;
  bool csv = false;
};

inline std::vector<Sentence> generate_corpus(const Cfg& g, int count, std::uint64_t seed,
                                             std::size_t max_len) {
  std::vector<Sentence> out;
  std::uint64_t s = seed;
  // Bounded number of attempts so unproductive grammars terminate.
  for (std::uint64_t tries = 0; static_cast<int>(out.size()) < count && tries < 200u * count;
       ++tries, ++s) {
    if (auto v = generate_sentence(g, s, max_len)) out.push_back(std::move(*v));
  }
  return out;
}

inline int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    Cfg g = load_grammar_file(opt.grammar_path);
    Pipeline p = make_pipeline(g);
    std::vector<Sentence> corpus;
    if (!opt.sentences_path.empty()) {
      std::ifstream in(opt.sentences_path);
      if (!in) throw Error("cannot open sentence file '" + opt.sentences_path + "'");
      for (std::string line; std::getline(in, line);) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        corpus.push_back(Sentence::parse(g, line));
      }
    } else {
      corpus = generate_corpus(g, opt.gen_count, opt.seed, opt.max_len);
    }
    if (corpus.empty()) throw Error("no sentences generated");

    struct Totals {
      std::uint64_t space = 0, time = 0;
    } blr_total, tlr_total;
    json rows = json::array();
    for (const auto& v : corpus) {
      RunMetrics mb = recognize(p.blr_cover, p.blr_preds, v).metrics;
      RunMetrics mt = recognize(p.tlr_cover, p.tlr_preds, v).metrics;
      blr_total.space += mb.space;
      blr_total.time += mb.time;
      tlr_total.space += mt.space;
      tlr_total.time += mt.time;
      rows.push_back(json{{"sentence", v.to_string()},
                          {"blr", metrics_json(mb)},
                          {"2lr", metrics_json(mt)}});
    }
    const double n = static_cast<double>(corpus.size());
    json report{
        {"grammar", opt.grammar_path},
        {"sentences", corpus.size()},
        {"per_sentence", rows},
        {"average",
         {{"blr", {{"space", blr_total.space / n}, {"time", blr_total.time / n}}},
          {"2lr", {{"space", tlr_total.space / n}, {"time", tlr_total.time / n}}}}},
        {"total",
         {{"blr", {{"space", blr_total.space}, {"time", blr_total.time}}},
          {"2lr", {{"space", tlr_total.space}, {"time", tlr_total.time}}}}}};
    if (opt.csv) {
      out << "index,sentence,blr_space,blr_time,2lr_space,2lr_time\n";
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& row = rows[k];
        out << k << ',' << row["sentence"].get<std::string>() << ','
            << row["blr"]["space"] << ',' << row["blr"]["time"] << ','
            << row["2lr"]["space"] << ',' << row["2lr"]["time"] << '\n';
      }
      out << "total,," << blr_total.space << ',' << blr_total.time << ',' << tlr_total.space
          << ',' << tlr_total.time << '\n';
    } else {
      out << report.dump(2) << '\n';
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

// ---------------------------------------------------------------- check ---

struct CheckOptions {
  std::string grammar_path;
  int max_len = 4;
  std::size_t universe_cap = 20000;
  std::size_t span_budget = 500000;
  const PredTables* override_pred_2lr = nullptr;  // fault-injection hook for tests
};

struct CheckReport {
  std::size_t sentences = 0;
  std::size_t failures = 0;
  std::vector<std::string> witnesses;
};

inline CheckReport run_conformance_check(const Cfg& g, const CheckOptions& opt) {
  Pipeline p = make_pipeline(g);
  const PredTables& tlr_preds = opt.override_pred_2lr ? *opt.override_pred_2lr : p.tlr_preds;
  CheckReport report;
  auto fail = [&](const std::string& what, const Sentence& v) {
    ++report.failures;
    if (report.witnesses.size() < 20)
      report.witnesses.push_back("sentence '" + v.to_string() + "': " + what);
  };

  for (const Sentence& v : sentence_universe(g, opt.max_len, opt.universe_cap)) {
    ++report.sentences;
    ChartResult tlr = recognize(p.tlr_cover, tlr_preds, v);
    ChartResult blr = recognize(p.blr_cover, p.blr_preds, v);

    // Chart entries against the pushed-span oracle.
    std::set<std::array<int, 3>> chart_facts = tlr.table.facts();
    std::set<std::array<int, 3>> pda_facts;
    for (const SpanFact& f : push_spans(p.tlr_pda, v, opt.span_budget))
      pda_facts.insert({f.symbol, f.i, f.j});
    if (chart_facts != pda_facts) {
      for (const auto& f : chart_facts)
        if (!pda_facts.count(f))
          fail("symbol " + p.tlr_cover.symbols[f[0]].name + " in U[" + std::to_string(f[1]) +
                   "," + std::to_string(f[2]) + "] but not pushed by the automaton",
               v);
      for (const auto& f : pda_facts)
        if (!chart_facts.count(f))
          fail("symbol " + p.tlr_cover.symbols[f[0]].name + " pushed over (" +
                   std::to_string(f[1]) + "," + std::to_string(f[2]) + ") but missing from U",
               v);
    }

    bool member = derives(g, v);
    if (tlr.metrics.accepted != member) fail("2lr acceptance disagrees with membership", v);
    if (blr.metrics.accepted != member) fail("blr acceptance disagrees with membership", v);

    BigCount expect = tree_count(g, v);
    BigCount got = count_parses(tlr.table, p.tlr_cover);
    if (expect != got)
      fail("parse count " + got.str() + " differs from derivation count " + expect.str(), v);
  }
  return report;
}

inline int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    Cfg g = load_grammar_file(opt.grammar_path);
    CheckReport r = run_conformance_check(g, opt);
    out << "checked " << r.sentences << " sentences up to length " << opt.max_len << ": "
        << (r.failures == 0 ? "all passed" : std::to_string(r.failures) + " failed") << '\n';
    for (const auto& w : r.witnesses) out << "  " << w << '\n';
    return r.failures == 0 ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

// ----------------------------------------------------- automaton / cover ---

inline int cmd_automaton(const std::string& grammar_path, const std::string& method,
                         std::ostream& out, std::ostream& err) {
  try {
    Pipeline p = make_pipeline(load_grammar_file(grammar_path));
    const Pda& pda = method == "blr" ? p.blr_pda : p.tlr_pda;
    pda.dump(out);
    out << "symbols: " << pda.symbols.size() << ", transitions: " << pda.transitions.size()
        << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

inline void write_cover(const CoverGrammar& cover, std::ostream& out) {
  out << "# cover grammar: one rule per automaton transition (duplicates collapsed)\n";
  for (int s = 0; s < cover.num_symbols(); ++s)
    out << "# " << cover.symbols[s].token_name << " = " << cover.symbols[s].name << '\n';
  out << "%start " << cover.cfg.start.name << '\n';
  for (const Rule& r : cover.cfg.rules) out << to_string(r) << '\n';
}

inline int cmd_cover(const std::string& grammar_path, const std::string& method,
                     std::ostream& out, std::ostream& err) {
  try {
    Pipeline p = make_pipeline(load_grammar_file(grammar_path));
    write_cover(method == "blr" ? p.blr_cover : p.tlr_cover, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace tablr
