#pragma once

// Cover grammars: a binary-form CFG whose nonterminals are the stack symbols
// of an automaton, one rule per transition (duplicates collapsed into a
// rule -> transitions multimap), plus the pred filtering tables.

#include <map>
#include <set>
#include <tuple>

#include "tablr/pda.hpp"

namespace tablr {

enum class RuleShape { terminal, epsilon, unit, binary };

struct CoverRule {
  int lhs = -1;
  RuleShape shape = RuleShape::epsilon;
  Symbol terminal{};        // shape == terminal
  int rhs1 = -1, rhs2 = -1; // stack-symbol ids for unit/binary shapes
  bool operator==(const CoverRule&) const = default;
};

struct CoverSymbol {
  std::string name;
  std::string token_name;
  StackSymbol::Tag tag = StackSymbol::Tag::lr_state;
  Symbol last{};                   // pair symbols: the recognized grammar symbol
  std::vector<Symbol> suffix_seq;  // suffix symbols: the remaining right-hand side
};

struct CoverGrammar {
  Cfg cfg;  // binary form; nonterminal names are the symbols' token names
  std::vector<CoverSymbol> symbols;
  std::vector<CoverRule> rules;                     // aligned with cfg.rules
  std::vector<std::vector<int>> rule_transitions;   // rule -> source transitions
  int init_symbol = -1;   // seeded into the table at (0,0)
  int start_symbol = -1;  // acceptance looks for this in the full span
  bool two_lr = false;    // pair/suffix symbol structure (enables tree reading)

  // For tree reading: per source nonterminal name, the stack-symbol ids of
  // its rules' right-hand-side suffixes, in rule order.
  std::map<std::string, std::vector<int>> rule_suffixes_by_nt;
  // Per suffix symbol id, the symbol id of its tail (suffix minus head).
  std::map<int, int> suffix_rest;

  int num_symbols() const { return static_cast<int>(symbols.size()); }

  std::string rule_display(int r) const {
    const CoverRule& cr = rules[r];
    std::string s = symbols[cr.lhs].name + " ->";
    switch (cr.shape) {
      case RuleShape::terminal: s += ' ' + cr.terminal.name; break;
      case RuleShape::epsilon: break;
      case RuleShape::unit: s += ' ' + symbols[cr.rhs1].name; break;
      case RuleShape::binary: s += ' ' + symbols[cr.rhs1].name + ' ' + symbols[cr.rhs2].name; break;
    }
    return s;
  }
};

/// One cover rule per transition: shifts become terminal rules, initiates
/// epsilon rules, gatherings binary rules, gotos unit rules. Transitions
/// inducing the same rule share it through the multimap.
inline CoverGrammar build_cover(const Pda& pda) {
  CoverGrammar cover;
  cover.symbols.reserve(pda.symbols.size());
  bool any_pair = false;
  for (const auto& s : pda.symbols) {
    cover.symbols.push_back(CoverSymbol{s.name, s.token_name, s.tag, s.last, s.suffix_seq});
    any_pair = any_pair || s.tag == StackSymbol::Tag::pair;
  }
  cover.two_lr = any_pair;
  cover.init_symbol = pda.initial_symbol;
  cover.start_symbol = pda.final_symbol;

  using RuleKey = std::tuple<int, int, int, int, std::string>;
  std::map<RuleKey, int> seen;
  auto add_rule = [&](CoverRule r, int transition) {
    RuleKey key{r.lhs, static_cast<int>(r.shape), r.rhs1, r.rhs2, r.terminal.name};
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(cover.rules.size()));
    if (inserted) {
      cover.rules.push_back(r);
      cover.rule_transitions.emplace_back();
    }
    cover.rule_transitions[it->second].push_back(transition);
  };

  for (int t = 0; t < static_cast<int>(pda.transitions.size()); ++t) {
    const PdaTransition& tr = pda.transitions[t];
    switch (tr.kind) {
      case TransitionKind::shift:
        add_rule(CoverRule{tr.rhs[1], RuleShape::terminal, *tr.label, -1, -1}, t);
        break;
      case TransitionKind::initiate:
        add_rule(CoverRule{tr.rhs[1], RuleShape::epsilon, {}, -1, -1}, t);
        break;
      case TransitionKind::gathering:
        add_rule(CoverRule{tr.rhs[0], RuleShape::binary, {}, tr.lhs[0], tr.lhs[1]}, t);
        break;
      case TransitionKind::goto_:
        add_rule(CoverRule{tr.rhs[1], RuleShape::unit, {}, tr.lhs[1], -1}, t);
        break;
      case TransitionKind::reduce:
        throw Error("reduce transitions have no cover rule; use the binary-form automaton");
    }
  }

  // Tree-reading indices for pair/suffix covers.
  if (cover.two_lr) {
    for (int t = 0; t < static_cast<int>(pda.transitions.size()); ++t) {
      const PdaTransition& tr = pda.transitions[t];
      if (tr.kind != TransitionKind::goto_) continue;
      const StackSymbol& pushed = pda.symbols[tr.rhs[1]];
      auto& list = cover.rule_suffixes_by_nt[pushed.last.name];
      if (std::find(list.begin(), list.end(), tr.lhs[1]) == list.end()) list.push_back(tr.lhs[1]);
    }
    for (auto& [nt, list] : cover.rule_suffixes_by_nt) std::sort(list.begin(), list.end());
    for (int t = 0; t < static_cast<int>(pda.transitions.size()); ++t) {
      const PdaTransition& tr = pda.transitions[t];
      if (tr.kind == TransitionKind::gathering) cover.suffix_rest[tr.rhs[0]] = tr.lhs[1];
    }
  }

  // The plain-CFG view with token names as nonterminals.
  cover.cfg.start = nonterm(cover.symbols[cover.start_symbol].token_name);
  for (const auto& s : cover.symbols) cover.cfg.nonterminals.push_back(nonterm(s.token_name));
  std::sort(cover.cfg.nonterminals.begin(), cover.cfg.nonterminals.end());
  cover.cfg.nonterminals.erase(
      std::unique(cover.cfg.nonterminals.begin(), cover.cfg.nonterminals.end()),
      cover.cfg.nonterminals.end());
  cover.cfg.terminals = pda.input_alphabet;
  std::sort(cover.cfg.terminals.begin(), cover.cfg.terminals.end());
  for (const auto& r : cover.rules) {
    Rule rule{nonterm(cover.symbols[r.lhs].token_name), {}};
    switch (r.shape) {
      case RuleShape::terminal: rule.rhs = {r.terminal}; break;
      case RuleShape::epsilon: break;
      case RuleShape::unit: rule.rhs = {nonterm(cover.symbols[r.rhs1].token_name)}; break;
      case RuleShape::binary:
        rule.rhs = {nonterm(cover.symbols[r.rhs1].token_name),
                    nonterm(cover.symbols[r.rhs2].token_name)};
        break;
    }
    cover.cfg.rules.push_back(std::move(rule));
  }
  cover.cfg.validate();
  return cover;
}

/// The analogous cover for the binary-form LR automaton; the construction is
/// the same rule-per-transition reading.
inline CoverGrammar build_cover_blr(const Pda& pda) {
  for (const auto& s : pda.symbols)
    if (s.tag == StackSymbol::Tag::pair || s.tag == StackSymbol::Tag::suffix)
      throw Error("expected an automaton over LR states and items");
  return build_cover(pda);
}

struct PredTables {
  std::vector<char> unconditional;            // by stack symbol id
  std::vector<std::vector<int>> by_trigger;   // trigger symbol -> enabled symbols, sorted
};

/// Gathering results are admitted unconditionally; shift, initiate and goto
/// results are enabled by the symbol their transition keeps below them.
inline PredTables build_pred_tables(const Pda& pda) {
  PredTables p;
  p.unconditional.assign(pda.symbols.size(), 0);
  p.by_trigger.assign(pda.symbols.size(), {});
  for (const auto& t : pda.transitions) {
    switch (t.kind) {
      case TransitionKind::gathering: p.unconditional[t.rhs[0]] = 1; break;
      case TransitionKind::shift:
      case TransitionKind::initiate:
      case TransitionKind::goto_: p.by_trigger[t.lhs[0]].push_back(t.rhs[1]); break;
      case TransitionKind::reduce: throw Error("reduce transitions have no pred entry");
    }
  }
  for (auto& v : p.by_trigger) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return p;
}

/// pred(tau): the unconditional symbols plus everything some member of tau
/// can push next.
inline std::set<int> pred(const PredTables& tables, const std::set<int>& tau) {
  std::set<int> out;
  for (int q = 0; q < static_cast<int>(tables.unconditional.size()); ++q)
    if (tables.unconditional[q]) out.insert(q);
  for (int t : tau) out.insert(tables.by_trigger[t].begin(), tables.by_trigger[t].end());
  return out;
}

}  // namespace tablr
