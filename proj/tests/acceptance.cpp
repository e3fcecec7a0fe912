// Acceptance suite: the properties the toolkit must satisfy on the bundled
// corpus, one pass/fail line per criterion. Exits nonzero if any fails.

#include <array>
#include <chrono>
#include <iostream>

#include "corpus.hpp"
#include "tablr/chart.hpp"
#include "tablr/derivation.hpp"
#include "tablr/forest.hpp"
#include "tablr/pda_sim.hpp"

using namespace tablr;

namespace {

int failures = 0;

void report(int number, const std::string& title, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << number << ". " << title;
  if (!ok && !detail.empty()) std::cout << " -- " << detail;
  std::cout << '\n';
  if (!ok) ++failures;
}

struct Prepared {
  std::string name;
  tablr::Pipeline p;
};

std::vector<Prepared> prepare_corpus() {
  std::vector<Prepared> out;
  for (const auto& [name, text] : corpus::all()) out.push_back({name, corpus::pipeline(text)});
  return out;
}

// 1. Chart entries coincide with the pushed spans of the 2LR automaton.
void criterion_characterization(const std::vector<Prepared>& corpus_set) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  for (const auto& c : corpus_set) {
    int max_len = c.name == "g_amb" ? 4 : 5;
    for (const Sentence& v : all_sentences(c.p.source, max_len)) {
      ChartResult res = recognize(c.p.tlr_cover, c.p.tlr_preds, v);
      std::set<std::array<int, 3>> pda_facts;
      for (const SpanFact& f : push_spans(c.p.tlr_pda, v))
        pda_facts.insert({f.symbol, f.i, f.j});
      if (res.table.facts() != pda_facts) {
        ok = false;
        detail = c.name + " '" + v.to_string() + "'";
        break;
      }
    }
    if (!ok) break;
  }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 30.0) {
    ok = false;
    detail += " (took " + std::to_string(secs) + "s)";
  }
  report(1, "characterization: chart facts equal pushed spans (<= len 5, g_amb 4, under 30s)",
         ok, detail);
}

// 2. Acceptance on both covers matches brute-force membership up to length 6.
void criterion_acceptance(const std::vector<Prepared>& corpus_set) {
  std::string detail;
  bool ok = true;
  for (const auto& c : corpus_set) {
    for (const Sentence& v : all_sentences(c.p.source, 6)) {
      bool member = derives(c.p.source, v);
      bool two = recognize(c.p.tlr_cover, c.p.tlr_preds, v).metrics.accepted;
      bool blr = recognize(c.p.blr_cover, c.p.blr_preds, v).metrics.accepted;
      if (two != member || blr != member) {
        ok = false;
        detail = c.name + " '" + v.to_string() + "'";
        break;
      }
    }
    if (!ok) break;
  }
  report(2, "acceptance on both covers matches membership up to length 6", ok, detail);
}

// 3. Parse counts: Catalan numbers for the ambiguous grammar, 1 for a^n b^n.
void criterion_ambiguity() {
  tablr::Pipeline amb = corpus::pipeline(corpus::g_amb);
  tablr::Pipeline ab = corpus::pipeline(corpus::g_ab);
  const std::array<BigCount, 6> catalan{1, 1, 2, 5, 14, 42};
  bool ok = true;
  std::string detail;
  for (int n = 1; n <= 6; ++n) {
    Sentence v;
    for (int k = 0; k < n; ++k) v.tokens.push_back(term("a"));
    BigCount got = count_parses(recognize(amb.tlr_cover, amb.tlr_preds, v).table, amb.tlr_cover);
    if (got != catalan[n - 1]) {
      ok = false;
      detail = "g_amb a^" + std::to_string(n) + " counted " + got.str();
    }
  }
  for (int n = 0; n <= 4; ++n) {
    Sentence v;
    for (int k = 0; k < n; ++k) v.tokens.push_back(term("a"));
    for (int k = 0; k < n; ++k) v.tokens.push_back(term("b"));
    BigCount got = count_parses(recognize(ab.tlr_cover, ab.tlr_preds, v).table, ab.tlr_cover);
    if (got != 1) {
      ok = false;
      detail = "g_ab a^n b^n with n=" + std::to_string(n) + " counted " + got.str();
    }
  }
  report(3, "ambiguity preserved: Catalan counts and unambiguous counts exact", ok, detail);
}

// 4. State minimization: suffix states never outnumber LR states; the
// simplify map is a surjection commuting with goto.
void criterion_minimization(const std::vector<Prepared>& corpus_set) {
  bool ok = true;
  std::string detail;
  for (const auto& c : corpus_set) {
    const auto& lr = c.p.lr;
    const auto& two = c.p.two;
    if (two.states.size() > lr.states.size()) {
      ok = false;
      detail = c.name + " has more suffix states than LR states";
    }
    std::set<std::set<std::vector<Symbol>>> images, suffix_states;
    for (const auto& kernel : lr.states) images.insert(simplify_items(kernel, lr.grammar));
    for (int q = 0; q < static_cast<int>(two.states.size()); ++q)
      suffix_states.insert(two.state_contents(q));
    if (images != suffix_states) {
      ok = false;
      detail = c.name + ": simplify image differs from the suffix state set";
    }
    for (int q = 0; q < static_cast<int>(lr.states.size()) && ok; ++q)
      for (const auto& [x, q2] : lr.goto_table[q])
        if (simplify_items(lr.states[q2], lr.grammar) !=
            goto_prime(simplify_items(lr.states[q], lr.grammar), x, lr.grammar)) {
          ok = false;
          detail = c.name + ": simplify does not commute with goto";
          break;
        }
  }
  tablr::Pipeline ab = corpus::pipeline(corpus::g_ab);
  if (ab.lr.states.size() != 6 || ab.two.states.size() != 5) {
    ok = false;
    detail = "g_ab expected 6 LR / 5 suffix states, got " + std::to_string(ab.lr.states.size()) +
             "/" + std::to_string(ab.two.states.size());
  }
  report(4, "state minimization: |R_2LR| <= |R_LR|, g_ab 6 vs 5, simplify commutes", ok, detail);
}

// 5. On the LR(0) grammar the chart performs exactly the deterministic
// automaton's steps.
void criterion_lr0_tightness() {
  tablr::Pipeline p = corpus::pipeline(corpus::g_lr0);
  bool ok = is_deterministic(p.tlr_pda);
  std::string detail = ok ? "" : "2LR automaton not deterministic";
  int produced = 0;
  for (std::uint64_t seed = 1; produced < 10 && seed < 500 && ok; ++seed) {
    auto v = generate_sentence(p.source, seed, 12);
    if (!v) continue;
    ++produced;
    DeterministicRun run = run_deterministic(p.tlr_pda, *v);
    RunMetrics m = recognize(p.tlr_cover, p.tlr_preds, *v).metrics;
    if (!run.accepted || !m.accepted || run.steps != m.time) {
      ok = false;
      detail = "'" + v->to_string() + "': automaton " + std::to_string(run.steps) +
               " steps, chart " + std::to_string(m.time);
    }
  }
  if (produced < 10 && ok) {
    ok = false;
    detail = "only generated " + std::to_string(produced) + " sentences";
  }
  report(5, "LR(0) tightness: chart steps equal the deterministic run on 10 sentences", ok,
         detail);
}

// 6. Complexity guards and cubic growth.
void criterion_complexity(const std::vector<Prepared>& corpus_set) {
  bool ok = true;
  std::string detail;
  for (const auto& c : corpus_set) {
    for (const Sentence& v : all_sentences(c.p.source, 4)) {
      const std::uint64_t n1 = v.size() + 1;
      RunMetrics two = recognize(c.p.tlr_cover, c.p.tlr_preds, v).metrics;
      if (two.time > c.p.tlr_pda.transitions.size() * n1 * n1 * n1 ||
          two.space > c.p.tlr_pda.symbols.size() * n1 * n1) {
        ok = false;
        detail = c.name + " 2lr guard on '" + v.to_string() + "'";
      }
      RunMetrics blr = recognize(c.p.blr_cover, c.p.blr_preds, v).metrics;
      if (blr.time > c.p.blr_pda.transitions.size() * n1 * n1 * n1 ||
          blr.space > c.p.blr_pda.symbols.size() * n1 * n1) {
        ok = false;
        detail = c.name + " blr guard on '" + v.to_string() + "'";
      }
    }
  }
  tablr::Pipeline amb = corpus::pipeline(corpus::g_amb);
  std::array<std::uint64_t, 3> steps{};
  std::array<int, 3> lens{4, 8, 12};
  for (int k = 0; k < 3; ++k) {
    Sentence v;
    for (int i = 0; i < lens[k]; ++i) v.tokens.push_back(term("a"));
    steps[k] = recognize(amb.tlr_cover, amb.tlr_preds, v).metrics.time;
  }
  for (int k = 1; k < 3; ++k) {
    double ratio = static_cast<double>(steps[k]) / static_cast<double>(steps[k - 1]);
    double cubic = std::pow(static_cast<double>(lens[k]) / lens[k - 1], 3.0);
    if (ratio > 1.2 * cubic) {
      ok = false;
      detail = "step growth " + std::to_string(ratio) + " exceeds cubic bound " +
               std::to_string(1.2 * cubic);
    }
  }
  report(6, "complexity guards: |T|(n+1)^3 time, |Q|(n+1)^2 space, cubic growth", ok, detail);
}

// 7. Cover bijection and binary form.
void criterion_cover(const std::vector<Prepared>& corpus_set) {
  bool ok = true;
  std::string detail;
  for (const auto& c : corpus_set) {
    for (auto [cover, pda] : {std::pair{&c.p.tlr_cover, &c.p.tlr_pda},
                              {&c.p.blr_cover, &c.p.blr_pda}}) {
      std::size_t mapped = 0;
      for (const auto& group : cover->rule_transitions) mapped += group.size();
      if (mapped != pda->transitions.size() || !is_binary_form(cover->cfg)) {
        ok = false;
        detail = c.name;
      }
    }
  }
  report(7, "covers: rule/transition multimap covers all transitions, binary form", ok, detail);
}

// 8. On the ambiguous corpus the suffix-merged automaton is never costlier.
void criterion_efficiency() {
  bool ok = true;
  std::string detail;
  for (const std::string& text : {corpus::g_amb, corpus::g_shared}) {
    tablr::Pipeline p = corpus::pipeline(text);
    std::uint64_t blr_space = 0, blr_time = 0, two_space = 0, two_time = 0;
    int produced = 0;
    for (std::uint64_t seed = 1; produced < 20 && seed < 2000; ++seed) {
      auto v = generate_sentence(p.source, seed, 10);
      if (!v) continue;
      ++produced;
      RunMetrics mb = recognize(p.blr_cover, p.blr_preds, *v).metrics;
      RunMetrics mt = recognize(p.tlr_cover, p.tlr_preds, *v).metrics;
      blr_space += mb.space;
      blr_time += mb.time;
      two_space += mt.space;
      two_time += mt.time;
    }
    if (produced < 20) {
      ok = false;
      detail = "only generated " + std::to_string(produced) + " sentences";
    }
    if (two_space > blr_space || two_time > blr_time) {
      ok = false;
      detail = "2lr space/time " + std::to_string(two_space) + "/" + std::to_string(two_time) +
               " vs blr " + std::to_string(blr_space) + "/" + std::to_string(blr_time);
    }
  }
  report(8, "efficiency direction: 2lr totals never exceed blr on 20 sentences each", ok, detail);
}

// 9. The least table is agenda independent.
void criterion_order_independence(const std::vector<Prepared>& corpus_set) {
  bool ok = true;
  std::string detail;
  for (const auto& c : corpus_set) {
    int max_len = c.name == "g_lr0" ? 4 : 5;
    for (const Sentence& v : all_sentences(c.p.source, max_len)) {
      ChartResult fifo = recognize(c.p.tlr_cover, c.p.tlr_preds, v, Agenda::fifo);
      ChartResult lifo = recognize(c.p.tlr_cover, c.p.tlr_preds, v, Agenda::lifo);
      ChartResult bfifo = recognize(c.p.blr_cover, c.p.blr_preds, v, Agenda::fifo);
      ChartResult blifo = recognize(c.p.blr_cover, c.p.blr_preds, v, Agenda::lifo);
      if (!(fifo.table == lifo.table) || !(bfifo.table == blifo.table)) {
        ok = false;
        detail = c.name + " '" + v.to_string() + "'";
        break;
      }
    }
    if (!ok) break;
  }
  report(9, "order independence: FIFO and LIFO agendas build the same tables", ok, detail);
}

}  // namespace

int main() {
  std::vector<Prepared> corpus_set = prepare_corpus();
  criterion_characterization(corpus_set);
  criterion_acceptance(corpus_set);
  criterion_ambiguity();
  criterion_minimization(corpus_set);
  criterion_lr0_tightness();
  criterion_complexity(corpus_set);
  criterion_cover(corpus_set);
  criterion_efficiency();
  criterion_order_independence(corpus_set);
  if (failures == 0)
    std::cout << "all acceptance criteria passed\n";
  else
    std::cout << failures << " acceptance criteria failed\n";
  return failures == 0 ? 0 : 1;
}
