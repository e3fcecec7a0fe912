#pragma once

// The filtered tabular recognizer: an asynchronous CYK-style fixpoint over a
// binary-form cover, processed column by column so the left-to-right pred
// filter sees final column unions, with the counting conventions for stored
// entries and elementary steps.

#include <array>
#include <deque>
#include <set>

#include "tablr/cover.hpp"

namespace tablr {

enum class Agenda { fifo, lifo };

struct ChartTable {
  int n = 0;
  std::vector<std::set<int>> cells;      // (n+1)^2 cells, index i*(n+1)+j
  std::vector<std::set<int>> row_union;  // U_i: all entries whose right boundary is i

  explicit ChartTable(int len = 0) : n(len), cells((len + 1) * (len + 1)), row_union(len + 1) {}

  const std::set<int>& cell(int i, int j) const { return cells[i * (n + 1) + j]; }
  std::set<int>& cell(int i, int j) { return cells[i * (n + 1) + j]; }
  bool contains(int q, int i, int j) const { return cell(i, j).count(q) > 0; }

  std::set<std::array<int, 3>> facts() const {
    std::set<std::array<int, 3>> out;
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        for (int q : cell(i, j)) out.insert({q, i, j});
    return out;
  }

  std::size_t stored_entries() const {
    std::size_t total = 0;
    for (const auto& c : cells) total += c.size();
    return total;
  }

  bool operator==(const ChartTable&) const = default;

  void dump(std::ostream& os, const CoverGrammar& cover) const {
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        if (cell(i, j).empty()) continue;
        os << "U[" << i << "," << j << "]:";
        bool first = true;
        for (int q : cell(i, j)) {
          os << (first ? " " : ", ") << cover.symbols[q].name;
          first = false;
        }
        os << '\n';
      }
  }
};

struct RunMetrics {
  std::uint64_t space = 0;  // entries stored in the table
  std::uint64_t time = 0;   // elementary steps, filter witnesses counted individually
  bool accepted = false;
};

/// One elementary-step account: a filtered derivation costs one step per
/// filter witness; unconditional derivations cost one step.
inline void count_step(RunMetrics& m, int /*derived*/, int /*premises*/,
                       const std::vector<int>& triggers) {
  m.time += std::max<std::size_t>(1, triggers.size());
}

struct ChartResult {
  ChartTable table;
  RunMetrics metrics;
};

namespace detail {

struct CoverIndex {
  std::map<std::string, std::vector<int>> terminal_rules;
  std::vector<int> eps_rules;
  std::vector<std::vector<int>> unit_by_rhs, binary_by_left, binary_by_right, by_lhs;

  explicit CoverIndex(const CoverGrammar& cover) {
    const int nsym = cover.num_symbols();
    unit_by_rhs.assign(nsym, {});
    binary_by_left.assign(nsym, {});
    binary_by_right.assign(nsym, {});
    by_lhs.assign(nsym, {});
    for (int r = 0; r < static_cast<int>(cover.rules.size()); ++r) {
      const CoverRule& cr = cover.rules[r];
      by_lhs[cr.lhs].push_back(r);
      switch (cr.shape) {
        case RuleShape::terminal: terminal_rules[cr.terminal.name].push_back(r); break;
        case RuleShape::epsilon: eps_rules.push_back(r); break;
        case RuleShape::unit: unit_by_rhs[cr.rhs1].push_back(r); break;
        case RuleShape::binary:
          binary_by_left[cr.rhs1].push_back(r);
          binary_by_right[cr.rhs2].push_back(r);
          break;
      }
    }
  }
};

}  // namespace detail

/// The least filtered table. Columns are completed left to right, so the
/// filter consults final unions for spans that end earlier; within a column
/// the worklist runs to the fixpoint, re-trying diagonal derivations whose
/// filter symbol becomes enabled late. The agenda discipline must not change
/// the result, only the order entries are found in.
inline ChartResult recognize(const CoverGrammar& cover, const PredTables& preds,
                             const Sentence& v, Agenda agenda = Agenda::fifo) {
  for (const auto& tok : v.tokens) {
    bool known = std::binary_search(cover.cfg.terminals.begin(), cover.cfg.terminals.end(), tok);
    if (!known) throw TokenError(tok.name);
  }

  const int n = static_cast<int>(v.size());
  const int nsym = cover.num_symbols();
  detail::CoverIndex index(cover);

  ChartResult res;
  res.table = ChartTable(n);
  ChartTable& table = res.table;

  // Final pred(U_i) per completed column, as an enabled bitmap.
  std::vector<std::vector<char>> enabled(n + 1);

  for (int j = 0; j <= n; ++j) {
    std::vector<char> en(nsym, 0);
    for (int q = 0; q < nsym; ++q) en[q] = preds.unconditional[q];
    std::deque<std::pair<int, int>> work;      // (symbol, left boundary), right boundary j
    std::deque<int> newly_enabled;

    auto insert = [&](int q, int i) {
      if (!table.cell(i, j).insert(q).second) return;
      table.row_union[j].insert(q);
      work.emplace_back(q, i);
      for (int tgt : preds.by_trigger[q])
        if (!en[tgt]) {
          en[tgt] = 1;
          newly_enabled.push_back(tgt);
        }
    };
    auto enabled_at = [&](int i, int q) -> bool { return i == j ? en[q] : enabled[i][q]; };

    if (j == 0) {
      insert(cover.init_symbol, 0);
    } else {
      auto it = index.terminal_rules.find(v.tokens[j - 1].name);
      if (it != index.terminal_rules.end())
        for (int r : it->second)
          if (enabled[j - 1][cover.rules[r].lhs]) insert(cover.rules[r].lhs, j - 1);
    }
    for (int r : index.eps_rules)
      if (en[cover.rules[r].lhs]) insert(cover.rules[r].lhs, j);

    while (!work.empty() || !newly_enabled.empty()) {
      if (!newly_enabled.empty()) {
        // A filter symbol became enabled in this column: re-try the diagonal
        // derivations it gates.
        int a = newly_enabled.front();
        newly_enabled.pop_front();
        for (int r : index.by_lhs[a]) {
          const CoverRule& cr = cover.rules[r];
          switch (cr.shape) {
            case RuleShape::epsilon: insert(a, j); break;
            case RuleShape::unit:
              if (table.contains(cr.rhs1, j, j)) insert(a, j);
              break;
            case RuleShape::binary:
              if (table.contains(cr.rhs1, j, j) && table.contains(cr.rhs2, j, j)) insert(a, j);
              break;
            case RuleShape::terminal: break;  // gated on the previous, final column
          }
        }
        continue;
      }
      auto [b, i] = agenda == Agenda::fifo ? work.front() : work.back();
      if (agenda == Agenda::fifo)
        work.pop_front();
      else
        work.pop_back();

      for (int r : index.unit_by_rhs[b]) {
        const CoverRule& cr = cover.rules[r];
        if (enabled_at(i, cr.lhs)) insert(cr.lhs, i);
      }
      // b spans (i, j); as a right child it pairs with anything ending at i.
      for (int r : index.binary_by_right[b]) {
        const CoverRule& cr = cover.rules[r];
        for (int i2 = 0; i2 <= i; ++i2)
          if (table.contains(cr.rhs1, i2, i) && enabled_at(i2, cr.lhs)) insert(cr.lhs, i2);
      }
      // As a left child it can only combine inside this column, with an
      // empty-span right sibling.
      for (int r : index.binary_by_left[b]) {
        const CoverRule& cr = cover.rules[r];
        if (table.contains(cr.rhs2, j, j) && enabled_at(i, cr.lhs)) insert(cr.lhs, i);
      }
    }
    enabled[j] = std::move(en);
  }

  res.metrics.accepted = table.contains(cover.start_symbol, 0, n);
  res.metrics.space = table.stored_entries();

  // Elementary steps, enumerated over the final least table so the count is
  // independent of the agenda: one step per (binary rule, i, k, j) instance,
  // and one per filter witness for every terminal/epsilon/unit instance.
  std::vector<std::vector<int>> triggers_of(nsym);
  for (int t = 0; t < nsym; ++t)
    for (int tgt : preds.by_trigger[t]) triggers_of[tgt].push_back(t);

  auto witnesses = [&](int lhs, int i) {
    std::vector<int> w;
    for (int t : triggers_of[lhs])
      if (table.row_union[i].count(t)) w.push_back(t);
    return w;
  };

  for (int r = 0; r < static_cast<int>(cover.rules.size()); ++r) {
    const CoverRule& cr = cover.rules[r];
    switch (cr.shape) {
      case RuleShape::binary:
        for (int i = 0; i <= n; ++i)
          for (int k = i; k <= n; ++k) {
            if (!table.contains(cr.rhs1, i, k)) continue;
            for (int j = k; j <= n; ++j)
              if (table.contains(cr.rhs2, k, j)) count_step(res.metrics, cr.lhs, 2, {});
          }
        break;
      case RuleShape::terminal:
        for (int j = 1; j <= n; ++j) {
          if (v.tokens[j - 1] != cr.terminal) continue;
          auto w = witnesses(cr.lhs, j - 1);
          if (!w.empty() || preds.unconditional[cr.lhs]) count_step(res.metrics, cr.lhs, 1, w);
        }
        break;
      case RuleShape::epsilon:
        for (int j = 0; j <= n; ++j) {
          auto w = witnesses(cr.lhs, j);
          if (!w.empty() || preds.unconditional[cr.lhs]) count_step(res.metrics, cr.lhs, 1, w);
        }
        break;
      case RuleShape::unit:
        for (int i = 0; i <= n; ++i)
          for (int j = i; j <= n; ++j) {
            if (!table.contains(cr.rhs1, i, j)) continue;
            auto w = witnesses(cr.lhs, i);
            if (!w.empty() || preds.unconditional[cr.lhs]) count_step(res.metrics, cr.lhs, 1, w);
          }
        break;
    }
  }
  return res;
}

}  // namespace tablr
