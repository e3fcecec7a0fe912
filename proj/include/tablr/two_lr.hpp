#pragma once

// Suffix-item machinery: states are sets of right-hand-side suffixes, which
// merges LR states that differ only before the dot, and the resulting
// automaton whose pair symbols (X, q) remember the last recognized symbol.

#include <deque>
#include <map>
#include <set>

#include "tablr/pda.hpp"

namespace tablr {

/// Set-level closure': a suffix starting with nonterminal A pulls in every
/// right-hand side of A.
inline std::set<std::vector<Symbol>> closure_prime(const std::set<std::vector<Symbol>>& q,
                                                   const Cfg& g_aug) {
  std::set<std::vector<Symbol>> out = q;
  std::deque<std::vector<Symbol>> work(q.begin(), q.end());
  while (!work.empty()) {
    std::vector<Symbol> s = work.front();
    work.pop_front();
    if (s.empty() || !s.front().is_nonterminal()) continue;
    for (const Rule& r : g_aug.rules)
      if (r.lhs == s.front() && out.insert(r.rhs).second) work.push_back(r.rhs);
  }
  return out;
}

/// goto'(q, X): strip X from every member of closure'(q) that starts with it.
inline std::set<std::vector<Symbol>> goto_prime(const std::set<std::vector<Symbol>>& q,
                                                const Symbol& x, const Cfg& g_aug) {
  std::set<std::vector<Symbol>> out;
  for (const auto& s : closure_prime(q, g_aug))
    if (!s.empty() && s.front() == x) out.insert({s.begin() + 1, s.end()});
  return out;
}

struct TwoLrAutomaton {
  Cfg grammar;  // the augmented grammar
  int augmented_rule = -1;
  Symbol source_start{}, begin_marker{}, end_marker{};

  // Suffixes of right-hand sides, interned once so rules sharing a suffix
  // share the object.
  std::vector<std::vector<Symbol>> suffixes;
  std::map<std::vector<Symbol>, int> suffix_ids;
  std::vector<int> suffix_rest;  // id of the suffix minus its first symbol
  std::vector<int> rule_suffix;  // rule index -> id of its full right-hand side
  int empty_suffix = -1;

  std::vector<std::vector<int>> states;    // sorted suffix-id sets, BFS ids
  std::vector<std::vector<int>> closures;  // cached closure' per state
  std::vector<std::map<Symbol, int>> goto_table;
  int initial = -1;  // { S end }

  int suffix_of(const std::vector<Symbol>& seq) const {
    auto it = suffix_ids.find(seq);
    return it == suffix_ids.end() ? -1 : it->second;
  }

  int goto_state(int q, const Symbol& x) const {
    auto it = goto_table[q].find(x);
    return it == goto_table[q].end() ? -1 : it->second;
  }

  std::set<std::vector<Symbol>> state_contents(int q) const {
    std::set<std::vector<Symbol>> out;
    for (int s : states[q]) out.insert(suffixes[s]);
    return out;
  }

  std::string suffix_name(int s) const {
    if (suffixes[s].empty()) return "(ε)";
    std::string out = "(";
    for (std::size_t k = 0; k < suffixes[s].size(); ++k) {
      if (k) out += ' ';
      out += suffixes[s][k].name;
    }
    return out + ")";
  }

  void dump_states(std::ostream& os) const {
    for (int q = 0; q < static_cast<int>(states.size()); ++q) {
      os << "state q" << q << ":";
      for (std::size_t k = 0; k < states[q].size(); ++k)
        os << (k ? " | " : " ") << suffix_name(states[q][k]);
      os << '\n';
    }
  }
};

/// Suffix states of the augmented grammar: start from { S end } and close
/// under nonempty goto' images, breadth first, symbols in name order.
inline TwoLrAutomaton build_r_2lr(const Cfg& g_aug) {
  TwoLrAutomaton a;
  a.grammar = g_aug;

  std::vector<int> start_rules = g_aug.rules_with_lhs(g_aug.start);
  if (start_rules.size() != 1 || g_aug.rules[start_rules[0]].rhs.size() != 3)
    throw Error("grammar is not in augmented form");
  a.augmented_rule = start_rules[0];
  const Rule& aug = g_aug.rules[a.augmented_rule];
  a.begin_marker = aug.rhs[0];
  a.source_start = aug.rhs[1];
  a.end_marker = aug.rhs[2];

  auto intern_suffix = [&](const std::vector<Symbol>& seq) {
    auto [it, inserted] = a.suffix_ids.emplace(seq, static_cast<int>(a.suffixes.size()));
    if (inserted) a.suffixes.push_back(seq);
    return it->second;
  };
  for (int r = 0; r < static_cast<int>(g_aug.rules.size()); ++r) {
    const auto& rhs = g_aug.rules[r].rhs;
    for (std::size_t pos = 0; pos <= rhs.size(); ++pos)
      intern_suffix({rhs.begin() + pos, rhs.end()});
    a.rule_suffix.push_back(a.suffix_ids.at(rhs));
  }
  a.empty_suffix = a.suffix_ids.at({});
  a.suffix_rest.assign(a.suffixes.size(), -1);
  for (int s = 0; s < static_cast<int>(a.suffixes.size()); ++s)
    if (!a.suffixes[s].empty())
      a.suffix_rest[s] = a.suffix_ids.at({a.suffixes[s].begin() + 1, a.suffixes[s].end()});

  auto close_ids = [&](const std::vector<int>& q) {
    std::set<int> out(q.begin(), q.end());
    std::deque<int> work(q.begin(), q.end());
    while (!work.empty()) {
      int s = work.front();
      work.pop_front();
      const auto& seq = a.suffixes[s];
      if (seq.empty() || !seq.front().is_nonterminal()) continue;
      for (int r = 0; r < static_cast<int>(g_aug.rules.size()); ++r)
        if (g_aug.rules[r].lhs == seq.front() && out.insert(a.rule_suffix[r]).second)
          work.push_back(a.rule_suffix[r]);
    }
    return std::vector<int>(out.begin(), out.end());
  };

  std::map<std::vector<int>, int> state_ids;
  std::deque<int> work;
  auto intern_state = [&](std::vector<int> kernel) {
    auto [it, inserted] = state_ids.emplace(std::move(kernel), static_cast<int>(a.states.size()));
    if (inserted) {
      a.states.push_back(it->first);
      a.goto_table.emplace_back();
      work.push_back(it->second);
    }
    return it->second;
  };

  a.initial = intern_state({intern_suffix({a.source_start, a.end_marker})});
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    std::vector<int> closed = close_ids(a.states[q]);
    std::map<Symbol, std::set<int>> advance;
    for (int s : closed)
      if (!a.suffixes[s].empty()) advance[a.suffixes[s].front()].insert(a.suffix_rest[s]);
    for (const auto& [x, rest] : advance)
      a.goto_table[q][x] = intern_state({rest.begin(), rest.end()});
  }
  for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
    a.closures.push_back(close_ids(a.states[q]));
  return a;
}

/// The 2LR automaton. Pair symbols come first (the designated initial pair
/// (begin, {S end}) has id 0), then all suffix items.
inline Pda build_a_2lr(const TwoLrAutomaton& a) {
  const Cfg& g = a.grammar;
  Pda pda;
  for (const auto& t : g.terminals)
    if (t != a.begin_marker && t != a.end_marker) pda.input_alphabet.push_back(t);

  std::map<std::pair<Symbol, int>, int> pair_ids;
  std::vector<std::pair<Symbol, int>> pairs;
  auto intern_pair = [&](const Symbol& x, int q) {
    auto [it, inserted] = pair_ids.emplace(std::make_pair(x, q), static_cast<int>(pairs.size()));
    if (inserted) pairs.emplace_back(x, q);
    return it->second;
  };
  intern_pair(a.begin_marker, a.initial);
  for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
    for (const auto& [x, q2] : a.goto_table[q]) intern_pair(x, q2);

  for (const auto& [x, q] : pairs) {
    StackSymbol s;
    s.tag = StackSymbol::Tag::pair;
    s.last = x;
    s.state = q;
    s.name = "(" + x.name + "|q" + std::to_string(q) + ")";
    s.token_name = "[" + detail::token_safe(x.name) + "|q" + std::to_string(q) + "]";
    pda.symbols.push_back(std::move(s));
  }
  const int num_pairs = static_cast<int>(pairs.size());
  auto suffix_sym = [&](int sfx) { return num_pairs + sfx; };
  for (int sfx = 0; sfx < static_cast<int>(a.suffixes.size()); ++sfx) {
    StackSymbol s;
    s.tag = StackSymbol::Tag::suffix;
    s.suffix_seq = a.suffixes[sfx];
    s.name = a.suffix_name(sfx);
    std::string tok = "[";
    for (std::size_t k = 0; k < s.suffix_seq.size(); ++k) {
      if (k) tok += '.';
      tok += detail::token_safe(s.suffix_seq[k].name);
    }
    s.token_name = tok + "]";
    pda.symbols.push_back(std::move(s));
  }

  auto pair_sym = [&](const Symbol& x, int q) { return pair_ids.at(std::make_pair(x, q)); };

  pda.initial_symbol = 0;  // (begin, {S end})
  pda.final_symbol = pair_sym(a.source_start, a.goto_state(a.initial, a.source_start));

  auto closure_has_empty = [&](int q) {
    const auto& closed = a.closures[q];
    return std::binary_search(closed.begin(), closed.end(), a.empty_suffix);
  };

  for (int p = 0; p < num_pairs; ++p) {
    int q = pairs[p].second;
    for (const auto& t : pda.input_alphabet) {
      int q2 = a.goto_state(q, t);
      if (q2 >= 0)
        pda.transitions.push_back({{p}, t, {p, pair_sym(t, q2)}, TransitionKind::shift});
    }
  }
  for (int p = 0; p < num_pairs; ++p)
    if (closure_has_empty(pairs[p].second))
      pda.transitions.push_back(
          {{p}, std::nullopt, {p, suffix_sym(a.empty_suffix)}, TransitionKind::initiate});
  for (int p = 0; p < num_pairs; ++p) {
    const auto& [x, q] = pairs[p];
    for (int beta : a.states[q]) {
      std::vector<Symbol> whole{x};
      whole.insert(whole.end(), a.suffixes[beta].begin(), a.suffixes[beta].end());
      int target = a.suffix_of(whole);
      if (target < 0) throw Error("gathering target suffix not interned");
      pda.transitions.push_back(
          {{p, suffix_sym(beta)}, std::nullopt, {suffix_sym(target)}, TransitionKind::gathering});
    }
  }
  for (int p = 0; p < num_pairs; ++p) {
    int q = pairs[p].second;
    for (int r = 0; r < static_cast<int>(g.rules.size()); ++r) {
      int q2 = a.goto_state(q, g.rules[r].lhs);
      if (q2 >= 0)
        pda.transitions.push_back({{p, suffix_sym(a.rule_suffix[r])},
                                   std::nullopt,
                                   {p, pair_sym(g.rules[r].lhs, q2)},
                                   TransitionKind::goto_});
    }
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
