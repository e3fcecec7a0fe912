#pragma once

// Classic LR(0) machinery over the augmented grammar: dotted items, closure,
// goto, the canonical state set, the A-redex predicate, and the binary-form
// automaton whose stack symbols are states plus items.

#include <deque>
#include <map>
#include <set>

#include "tablr/pda.hpp"

namespace tablr {

struct LrItem {
  int rule = 0;  // index into the augmented grammar's rules
  int dot = 0;   // 0 <= dot <= |rhs|
  auto operator<=>(const LrItem&) const = default;
};

using ItemSet = std::vector<LrItem>;  // sorted, unique

inline std::string to_string(const LrItem& it, const Cfg& g) {
  const Rule& r = g.rules[it.rule];
  std::string s = r.lhs.name + " ->";
  for (int k = 0; k < static_cast<int>(r.rhs.size()); ++k) {
    if (k == it.dot) s += " .";
    s += ' ';
    s += r.rhs[k].name;
  }
  if (it.dot == static_cast<int>(r.rhs.size())) s += " .";
  return s;
}

/// Least superset closed under prediction: a dot before A pulls in A -> . gamma.
inline ItemSet closure(const ItemSet& items, const Cfg& g_aug) {
  std::set<LrItem> out(items.begin(), items.end());
  std::deque<LrItem> work(items.begin(), items.end());
  while (!work.empty()) {
    LrItem it = work.front();
    work.pop_front();
    const Rule& r = g_aug.rules[it.rule];
    if (it.dot >= static_cast<int>(r.rhs.size())) continue;
    const Symbol& next = r.rhs[it.dot];
    if (!next.is_nonterminal()) continue;
    for (int r2 = 0; r2 < static_cast<int>(g_aug.rules.size()); ++r2) {
      if (g_aug.rules[r2].lhs != next) continue;
      LrItem fresh{r2, 0};
      if (out.insert(fresh).second) work.push_back(fresh);
    }
  }
  return ItemSet(out.begin(), out.end());
}

/// Dot advanced over x in the closure; the kernel of the successor state.
inline ItemSet goto_set(const ItemSet& q, const Symbol& x, const Cfg& g_aug) {
  ItemSet out;
  for (const LrItem& it : closure(q, g_aug)) {
    const Rule& r = g_aug.rules[it.rule];
    if (it.dot < static_cast<int>(r.rhs.size()) && r.rhs[it.dot] == x)
      out.push_back(LrItem{it.rule, it.dot + 1});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct LrAutomaton {
  Cfg grammar;  // the augmented grammar
  int augmented_rule = -1;
  Symbol source_start{}, begin_marker{}, end_marker{};

  std::vector<ItemSet> states;    // kernels, ids in BFS discovery order
  std::vector<ItemSet> closures;  // cached closure per state
  std::vector<std::map<Symbol, int>> goto_table;
  int initial = -1;  // { start' -> begin . S end }
  int final = -1;    // goto(initial, S)

  int state_of(const ItemSet& kernel) const {
    for (int q = 0; q < static_cast<int>(states.size()); ++q)
      if (states[q] == kernel) return q;
    return -1;
  }

  int goto_state(int q, const Symbol& x) const {
    auto it = goto_table[q].find(x);
    return it == goto_table[q].end() ? -1 : it->second;
  }

  void dump_states(std::ostream& os) const {
    for (int q = 0; q < static_cast<int>(states.size()); ++q) {
      os << "state q" << q << ":";
      for (std::size_t k = 0; k < states[q].size(); ++k)
        os << (k ? " | " : " ") << to_string(states[q][k], grammar);
      os << '\n';
    }
  }
};

/// Canonical LR(0) state set of the augmented grammar, with goto edges over
/// every grammar symbol (markers included) and states discovered breadth
/// first under lexicographic symbol order.
inline LrAutomaton build_r_lr(const Cfg& g_aug) {
  LrAutomaton a;
  a.grammar = g_aug;

  std::vector<int> start_rules = g_aug.rules_with_lhs(g_aug.start);
  if (start_rules.size() != 1 || g_aug.rules[start_rules[0]].rhs.size() != 3)
    throw Error("grammar is not in augmented form");
  a.augmented_rule = start_rules[0];
  const Rule& aug = g_aug.rules[a.augmented_rule];
  a.begin_marker = aug.rhs[0];
  a.source_start = aug.rhs[1];
  a.end_marker = aug.rhs[2];

  std::map<ItemSet, int> ids;
  auto intern = [&](ItemSet kernel, std::deque<int>& work) {
    auto [it, inserted] = ids.emplace(std::move(kernel), static_cast<int>(a.states.size()));
    if (inserted) {
      a.states.push_back(it->first);
      a.goto_table.emplace_back();
      work.push_back(it->second);
    }
    return it->second;
  };

  std::deque<int> work;
  a.initial = intern(ItemSet{LrItem{a.augmented_rule, 1}}, work);
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    ItemSet closed = closure(a.states[q], g_aug);
    std::map<Symbol, ItemSet> advance;
    for (const LrItem& it : closed) {
      const Rule& r = g_aug.rules[it.rule];
      if (it.dot < static_cast<int>(r.rhs.size()))
        advance[r.rhs[it.dot]].push_back(LrItem{it.rule, it.dot + 1});
    }
    for (auto& [x, kernel] : advance) {
      std::sort(kernel.begin(), kernel.end());
      kernel.erase(std::unique(kernel.begin(), kernel.end()), kernel.end());
      a.goto_table[q][x] = intern(std::move(kernel), work);
    }
  }
  for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
    a.closures.push_back(closure(a.states[q], g_aug));

  a.final = a.goto_state(a.initial, a.source_start);
  if (a.final < 0) throw Error("no final state: start symbol never derived");
  return a;
}

/// Witness rules A -> X1..Xm for which the state sequence is an A-redex:
/// the completed item sits in the closure of the last state and the goto
/// chain spells the right-hand side.
inline std::vector<int> a_redex_rules(const LrAutomaton& a, const std::vector<int>& states,
                                      const Symbol& lhs) {
  std::vector<int> out;
  if (states.empty()) return out;
  int m = static_cast<int>(states.size()) - 1;
  for (const LrItem& it : a.closures[states.back()]) {
    const Rule& r = a.grammar.rules[it.rule];
    if (r.lhs != lhs || it.dot != static_cast<int>(r.rhs.size()) || it.dot != m) continue;
    bool ok = true;
    for (int k = 1; k <= m && ok; ++k)
      ok = a.goto_state(states[k - 1], r.rhs[k - 1]) == states[k];
    if (ok) out.push_back(it.rule);
  }
  return out;
}

inline bool is_a_redex(const LrAutomaton& a, const std::vector<int>& states, const Symbol& lhs) {
  return !a_redex_rules(a, states, lhs).empty();
}

/// The suffix image of a kernel: items with everything before the dot
/// erased. The suffix-state construction is the quotient under this map.
inline std::set<std::vector<Symbol>> simplify_items(const ItemSet& kernel, const Cfg& g_aug) {
  std::set<std::vector<Symbol>> out;
  for (const LrItem& it : kernel) {
    const auto& rhs = g_aug.rules[it.rule].rhs;
    out.insert({rhs.begin() + it.dot, rhs.end()});
  }
  return out;
}

/// The binary-form LR automaton: stack symbols are the LR states plus all
/// items; a classic reduce becomes initiate, |rhs| gathering steps, and a
/// goto step.
inline Pda build_a_lr_prime(const LrAutomaton& a) {
  const Cfg& g = a.grammar;
  Pda pda;
  for (const auto& t : g.terminals)
    if (t != a.begin_marker && t != a.end_marker) pda.input_alphabet.push_back(t);

  for (int q = 0; q < static_cast<int>(a.states.size()); ++q) {
    StackSymbol s;
    s.tag = StackSymbol::Tag::lr_state;
    s.state = q;
    s.name = "q" + std::to_string(q);
    s.token_name = "[q" + std::to_string(q) + "]";
    pda.symbols.push_back(std::move(s));
  }
  std::map<LrItem, int> item_ids;
  for (int r = 0; r < static_cast<int>(g.rules.size()); ++r)
    for (int dot = 0; dot <= static_cast<int>(g.rules[r].rhs.size()); ++dot) {
      LrItem it{r, dot};
      item_ids[it] = static_cast<int>(pda.symbols.size());
      StackSymbol s;
      s.tag = StackSymbol::Tag::lr_item;
      s.rule = r;
      s.dot = dot;
      s.name = "(" + to_string(it, g) + ")";
      s.token_name = "[i" + std::to_string(r) + "@" + std::to_string(dot) + "]";
      pda.symbols.push_back(std::move(s));
    }

  pda.initial_symbol = a.initial;
  pda.final_symbol = a.final;

  for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
    for (const auto& [x, q2] : a.goto_table[q])
      if (x.is_terminal() && x != a.begin_marker && x != a.end_marker)
        pda.transitions.push_back({{q}, x, {q, q2}, TransitionKind::shift});

  for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
    for (const LrItem& it : a.closures[q])
      if (it.dot == static_cast<int>(g.rules[it.rule].rhs.size()))
        pda.transitions.push_back({{q}, std::nullopt, {q, item_ids.at(it)}, TransitionKind::initiate});

  for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
    for (const LrItem& it : a.states[q])  // kernel items all have the dot past a symbol
      pda.transitions.push_back({{q, item_ids.at(it)},
                                 std::nullopt,
                                 {item_ids.at(LrItem{it.rule, it.dot - 1})},
                                 TransitionKind::gathering});

  for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
    for (int r = 0; r < static_cast<int>(g.rules.size()); ++r) {
      int q2 = a.goto_state(q, g.rules[r].lhs);
      if (q2 >= 0)
        pda.transitions.push_back(
            {{q, item_ids.at(LrItem{r, 0})}, std::nullopt, {q, q2}, TransitionKind::goto_});
    }

  {
    std::ostringstream ss;
    a.dump_states(ss);
    std::istringstream in(ss.str());
    for (std::string line; std::getline(in, line);) pda.state_lines.push_back(line);
  }
  pda.validate();
  return pda;
}

}  // namespace tablr
