#include <catch2/catch_amalgamated.hpp>

#include "corpus.hpp"
#include "tablr/forest.hpp"

using namespace tablr;

namespace {

ChartResult run(const tablr::Pipeline& p, const std::string& text) {
  return recognize(p.tlr_cover, p.tlr_preds, Sentence::parse(p.source, text));
}

}  // namespace

TEST_CASE("unique tree for a b") {
  tablr::Pipeline p = corpus::pipeline(corpus::g_ab);
  ChartResult res = run(p, "a b");
  auto trees = extract_trees(res.table, p.tlr_cover);
  REQUIRE(trees.size() == 1);
  CHECK(to_string(trees[0]) == "S(a S() b)");
  CHECK(count_parses(res.table, p.tlr_cover) == 1);
}

TEST_CASE("empty input parses to the epsilon expansion") {
  tablr::Pipeline p = corpus::pipeline(corpus::g_ab);
  ChartResult res = run(p, "");
  auto trees = extract_trees(res.table, p.tlr_cover);
  REQUIRE(trees.size() == 1);
  CHECK(to_string(trees[0]) == "S()");
}

TEST_CASE("ambiguous bracketings are enumerated exactly") {
  tablr::Pipeline p = corpus::pipeline(corpus::g_amb);
  ChartResult res = run(p, "a a a");
  auto trees = extract_trees(res.table, p.tlr_cover);
  REQUIRE(trees.size() == 2);
  std::set<std::string> shapes;
  for (const auto& t : trees) shapes.insert(to_string(t));
  CHECK(shapes == std::set<std::string>{"S(S(S(a) S(a)) S(a))", "S(S(a) S(S(a) S(a)))"});
  CHECK(count_parses(res.table, p.tlr_cover) == 2);
}

TEST_CASE("Catalan counts without enumeration") {
  tablr::Pipeline p = corpus::pipeline(corpus::g_amb);
  const std::vector<BigCount> catalan{1, 1, 2, 5, 14, 42};
  for (int n = 1; n <= 6; ++n) {
    std::string text;
    for (int k = 0; k < n; ++k) text += k ? " a" : "a";
    ChartResult res = run(p, text);
    CHECK(count_parses(res.table, p.tlr_cover) == catalan[n - 1]);
  }
}

TEST_CASE("rejecting tables yield nothing") {
  tablr::Pipeline p = corpus::pipeline(corpus::g_ab);
  ChartResult res = run(p, "b a");
  CHECK(count_parses(res.table, p.tlr_cover) == 0);
  CHECK(extract_trees(res.table, p.tlr_cover).empty());
}

TEST_CASE("trees re-validate against the source grammar") {
  for (const auto& [name, text] : corpus::all()) {
    tablr::Pipeline p = corpus::pipeline(text);
    for (const Sentence& v : all_sentences(p.source, 4)) {
      ChartResult res = recognize(p.tlr_cover, p.tlr_preds, v);
      if (!res.metrics.accepted) continue;
      for (const ParseTree& t : extract_trees(res.table, p.tlr_cover, 25)) {
        // Walk the tree: children of each internal node must spell a rule,
        // no marker symbols anywhere, leaves must spell the sentence.
        std::vector<std::string> leaves;
        auto walk = [&](auto&& self, const ParseTree& node) -> void {
          if (node.label.is_terminal()) {
            CHECK(p.source.has_terminal(node.label.name));
            leaves.push_back(node.label.name);
            return;
          }
          Rule want{node.label, {}};
          for (const auto& c : node.children) want.rhs.push_back(c.label);
          CHECK(std::find(p.source.rules.begin(), p.source.rules.end(), want) !=
                p.source.rules.end());
          for (const auto& c : node.children) self(self, c);
        };
        walk(walk, t);
        CHECK(t.label == p.source.start);
        std::vector<std::string> expect;
        for (const auto& tok : v.tokens) expect.push_back(tok.name);
        CHECK(leaves == expect);
      }
    }
  }
}

TEST_CASE("parse counts match the derivation enumerator") {
  for (const auto& [name, text] : corpus::all()) {
    tablr::Pipeline p = corpus::pipeline(text);
    int max_len = name == "g_lr0" ? 5 : 6;
    for (const Sentence& v : all_sentences(p.source, max_len)) {
      ChartResult res = recognize(p.tlr_cover, p.tlr_preds, v);
      INFO(name << " '" << v.to_string() << "'");
      CHECK(count_parses(res.table, p.tlr_cover) == tree_count(p.source, v));
    }
  }
}

TEST_CASE("unit-rule candidate sets are state independent") {
  // For pairs (A, q) and (A, q') in the same cell, the applicable expansion
  // suffixes coincide; this is what makes the one-q-per-split proviso safe.
  tablr::Pipeline p = corpus::pipeline(corpus::g_amb);
  ChartResult res = run(p, "a a a a");
  std::map<int, std::vector<int>> unit_suffixes;  // pair symbol -> sorted alphas
  for (const CoverRule& r : p.tlr_cover.rules)
    if (r.shape == RuleShape::unit) unit_suffixes[r.lhs].push_back(r.rhs1);
  for (auto& [q, alphas] : unit_suffixes) std::sort(alphas.begin(), alphas.end());

  for (int i = 0; i <= res.table.n; ++i)
    for (int j = i; j <= res.table.n; ++j) {
      std::map<std::string, std::set<std::vector<int>>> per_label;
      for (int q : res.table.cell(i, j)) {
        const CoverSymbol& s = p.tlr_cover.symbols[q];
        if (s.tag != StackSymbol::Tag::pair || !s.last.is_nonterminal()) continue;
        std::vector<int> present;
        for (int alpha : unit_suffixes[q])
          if (res.table.contains(alpha, i, j)) present.push_back(alpha);
        per_label[s.last.name].insert(present);
      }
      for (const auto& [label, sets] : per_label) CHECK(sets.size() <= 1);
    }
}

TEST_CASE("forest JSON carries the root, counts and alternatives") {
  tablr::Pipeline p = corpus::pipeline(corpus::g_amb);
  ChartResult res = run(p, "a a a");
  auto j = Forest(res.table, p.tlr_cover).to_json();
  CHECK(j["accepted"] == true);
  CHECK(j["count"] == "2");
  CHECK(j["root"] == "S@0:3");
  bool found_split = false;
  for (const auto& node : j["nodes"])
    for (const auto& alt : node["alternatives"])
      if (alt.contains("split")) found_split = true;
  CHECK(found_split);
}

TEST_CASE("tree reading requires the pair/suffix cover") {
  tablr::Pipeline p = corpus::pipeline(corpus::g_ab);
  ChartResult res = recognize(p.blr_cover, p.blr_preds, Sentence::parse(p.source, "a b"));
  CHECK_THROWS_AS(count_parses(res.table, p.blr_cover), Error);
}
