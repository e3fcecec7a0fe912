#pragma once

// Reference semantics for the automata: single-step successors, bounded
// breadth-first acceptance, the pushed-span oracle that the chart is checked
// against, a static determinism test, and a deterministic runner.

#include <deque>
#include <map>
#include <set>

#include "tablr/pda.hpp"

namespace tablr {

struct Configuration {
  std::vector<int> stack;  // rightmost element is the top
  int pos = 0;             // tokens consumed so far

  auto operator<=>(const Configuration&) const = default;
};

/// A stack symbol pushed on top of some untouched stack prefix while the
/// input from i to j was read.
struct SpanFact {
  int symbol = -1;
  int i = 0, j = 0;
  auto operator<=>(const SpanFact&) const = default;
};

struct SearchLimitError : Error {
  using Error::Error;
};

namespace detail {

inline bool lhs_matches(const std::vector<int>& stack, const std::vector<int>& lhs) {
  if (stack.size() < lhs.size()) return false;
  return std::equal(lhs.rbegin(), lhs.rend(), stack.rbegin());
}

}  // namespace detail

/// All configurations reachable in one transition application.
inline std::vector<Configuration> step(const Pda& pda, const Configuration& c,
                                       const Sentence& v) {
  std::vector<Configuration> out;
  for (const auto& t : pda.transitions) {
    if (!detail::lhs_matches(c.stack, t.lhs)) continue;
    int pos = c.pos;
    if (t.label) {
      if (pos >= static_cast<int>(v.size()) || v.tokens[pos] != *t.label) continue;
      ++pos;
    }
    Configuration next;
    next.stack.assign(c.stack.begin(), c.stack.end() - t.lhs.size());
    next.stack.insert(next.stack.end(), t.rhs.begin(), t.rhs.end());
    next.pos = pos;
    out.push_back(std::move(next));
  }
  return out;
}

/// Bounded breadth-first recognition: true when the final configuration is
/// reached, false when the bounded space is exhausted, nothing when the
/// expansion budget runs out first.
inline std::optional<bool> accepts(const Pda& pda, const Sentence& v, std::size_t budget) {
  if (budget < 1) throw Error("budget must be at least 1");
  const int n = static_cast<int>(v.size());
  const std::size_t max_depth = 2 * (n + 1) * pda.symbols.size();
  const std::vector<int> goal{pda.initial_symbol, pda.final_symbol};

  std::set<Configuration> seen;
  std::deque<Configuration> queue;
  Configuration start{{pda.initial_symbol}, 0};
  seen.insert(start);
  queue.push_back(std::move(start));
  std::size_t expansions = 0;
  while (!queue.empty()) {
    if (expansions++ >= budget) return std::nullopt;
    Configuration c = queue.front();
    queue.pop_front();
    for (auto& next : step(pda, c, v)) {
      if (next.stack.size() > max_depth) continue;
      if (next.stack == goal && next.pos == n) return true;
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return false;
}

namespace detail {

struct AnnotatedConfiguration {
  std::vector<std::pair<int, int>> stack;  // (symbol, position its support was last on top)
  int pos = 0;
  auto operator<=>(const AnnotatedConfiguration&) const = default;
};

}  // namespace detail

/// Exhaustive pushed-span collection. Each stack cell is annotated with the
/// input position at which the stack below it was last the whole stack; a
/// fact (q, i, j) is recorded whenever an annotated q sits on top at
/// position j with annotation i. Throws when the configuration graph
/// exceeds node_budget.
inline std::set<SpanFact> push_spans(const Pda& pda, const Sentence& v,
                                     std::size_t node_budget = 500000) {
  const int n = static_cast<int>(v.size());
  const std::size_t max_depth = 2 * (n + 1) * pda.symbols.size();

  std::set<SpanFact> facts;
  std::set<detail::AnnotatedConfiguration> seen;
  std::deque<detail::AnnotatedConfiguration> queue;
  detail::AnnotatedConfiguration start{{{pda.initial_symbol, 0}}, 0};
  facts.insert(SpanFact{pda.initial_symbol, 0, 0});
  seen.insert(start);
  queue.push_back(std::move(start));

  while (!queue.empty()) {
    if (seen.size() > node_budget)
      throw SearchLimitError("configuration graph exceeds the exhaustive-search bound");
    detail::AnnotatedConfiguration c = queue.front();
    queue.pop_front();
    for (const auto& t : pda.transitions) {
      std::vector<int> bare(c.stack.size());
      for (std::size_t k = 0; k < c.stack.size(); ++k) bare[k] = c.stack[k].first;
      if (!detail::lhs_matches(bare, t.lhs)) continue;
      int pos = c.pos;
      if (t.label) {
        if (pos >= n || v.tokens[pos] != *t.label) continue;
        ++pos;
      }
      detail::AnnotatedConfiguration next;
      next.stack.assign(c.stack.begin(), c.stack.end() - t.lhs.size());
      const int lower_ann = c.stack[c.stack.size() - t.lhs.size()].second;
      if (t.rhs.size() == 1) {
        next.stack.emplace_back(t.rhs[0], lower_ann);
      } else {
        // Two pushed symbols: the lower one inherits the lower popped cell's
        // annotation; the upper one records when the stack below it was on
        // top, which is the upper popped cell's annotation for pop-2
        // transitions and the pre-consumption position for pop-1 pushes.
        next.stack.emplace_back(t.rhs[0], lower_ann);
        next.stack.emplace_back(t.rhs[1], t.lhs.size() == 2 ? c.stack.back().second : c.pos);
      }
      next.pos = pos;
      if (next.stack.size() > max_depth) continue;
      if (seen.insert(next).second) {
        facts.insert(SpanFact{next.stack.back().first, next.stack.back().second, pos});
        queue.push_back(std::move(next));
      }
    }
  }
  return facts;
}

/// Static determinism check, sound but not complete: whenever two distinct
/// transitions could match the same stack top (one pop pattern a suffix of
/// the other), their labels must be distinct terminals.
inline bool is_deterministic(const Pda& pda) {
  auto is_suffix = [](const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() > b.size()) return false;
    return std::equal(a.rbegin(), a.rend(), b.rbegin());
  };
  for (std::size_t i = 0; i < pda.transitions.size(); ++i)
    for (std::size_t j = i + 1; j < pda.transitions.size(); ++j) {
      const auto& t1 = pda.transitions[i];
      const auto& t2 = pda.transitions[j];
      if (!is_suffix(t1.lhs, t2.lhs) && !is_suffix(t2.lhs, t1.lhs)) continue;
      if (!t1.label || !t2.label || *t1.label == *t2.label) return false;
    }
  return true;
}

struct DeterministicRun {
  bool accepted = false;
  std::uint64_t steps = 0;
};

/// Runs a deterministic automaton to its final configuration (or until it is
/// stuck), counting transition applications. Throws on a choice point.
inline DeterministicRun run_deterministic(const Pda& pda, const Sentence& v,
                                          std::size_t max_steps = 1000000) {
  const int n = static_cast<int>(v.size());
  const std::vector<int> goal{pda.initial_symbol, pda.final_symbol};
  Configuration c{{pda.initial_symbol}, 0};
  DeterministicRun run;
  while (!(c.stack == goal && c.pos == n)) {
    auto successors = step(pda, c, v);
    if (successors.empty()) return run;  // stuck, rejected
    if (successors.size() > 1) throw Error("automaton is not deterministic on this input");
    c = std::move(successors.front());
    if (++run.steps > max_steps) throw Error("deterministic run exceeded step limit");
  }
  run.accepted = true;
  return run;
}

}  // namespace tablr
