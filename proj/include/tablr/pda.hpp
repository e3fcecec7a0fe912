#pragma once

// A pushdown automaton without states: an input alphabet, indexed stack
// symbols, binary-form transitions, and initial/final stack symbols. Both
// automaton constructions produce this shape; the simulator and the cover
// builder consume it.

#include <optional>
#include <ostream>

#include "tablr/grammar.hpp"

namespace tablr {

enum class TransitionKind { shift, initiate, gathering, goto_, reduce };

inline const char* to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::shift: return "shift";
    case TransitionKind::initiate: return "initiate";
    case TransitionKind::gathering: return "gathering";
    case TransitionKind::goto_: return "goto";
    case TransitionKind::reduce: return "reduce";
  }
  return "?";
}

struct PdaTransition {
  std::vector<int> lhs;          // popped stack symbols, rightmost on top
  std::optional<Symbol> label;   // consumed terminal; empty for epsilon moves
  std::vector<int> rhs;          // pushed stack symbols, rightmost on top
  TransitionKind kind = TransitionKind::shift;
  bool operator==(const PdaTransition&) const = default;
};

struct StackSymbol {
  enum class Tag { lr_state, lr_item, pair, suffix };

  std::string name;        // display form
  std::string token_name;  // whitespace-free form used in emitted cover grammars
  Tag tag = Tag::lr_state;

  int state = -1;                  // lr_state and pair: originating state id
  int rule = -1, dot = -1;         // lr_item
  Symbol last{};                   // pair: the symbol recognized last
  std::vector<Symbol> suffix_seq;  // suffix: the still-to-be-recognized symbols
};

struct Pda {
  std::vector<Symbol> input_alphabet;  // the source grammar's terminals
  std::vector<StackSymbol> symbols;
  std::vector<PdaTransition> transitions;
  int initial_symbol = -1;
  int final_symbol = -1;
  std::vector<std::string> state_lines;  // pre-rendered state listing for dumps

  const std::string& name_of(int sym) const { return symbols[sym].name; }

  void validate() const {
    for (const auto& t : transitions) {
      if (t.lhs.empty() || t.lhs.size() > 2 || t.rhs.empty() || t.rhs.size() > 2)
        throw Error("transition violates binary form");
      if ((t.kind == TransitionKind::shift) != t.label.has_value())
        throw Error("only shift transitions carry a terminal label");
      for (int s : t.lhs)
        if (s < 0 || s >= static_cast<int>(symbols.size())) throw Error("bad stack symbol id");
      for (int s : t.rhs)
        if (s < 0 || s >= static_cast<int>(symbols.size())) throw Error("bad stack symbol id");
    }
    if (initial_symbol < 0 || final_symbol < 0) throw Error("missing initial/final symbol");
  }

  void dump(std::ostream& os) const {
    for (const auto& line : state_lines) os << line << '\n';
    for (const auto& t : transitions) {
      for (std::size_t k = 0; k < t.lhs.size(); ++k) os << (k ? " " : "") << name_of(t.lhs[k]);
      os << " =" << (t.label ? t.label->name : "ε") << "=> ";
      for (std::size_t k = 0; k < t.rhs.size(); ++k) os << (k ? " " : "") << name_of(t.rhs[k]);
      os << " [" << to_string(t.kind) << "]\n";
    }
  }

  std::size_t count_kind(TransitionKind k) const {
    std::size_t c = 0;
    for (const auto& t : transitions) c += (t.kind == k);
    return c;
  }
};

namespace detail {

// Marker glyphs are transliterated in token names so emitted cover grammars
// survive the reserved-symbol check on re-parse.
inline std::string token_safe(std::string_view name) {
  std::string out;
  std::size_t i = 0;
  while (i < name.size()) {
    if (name.substr(i, k_begin_marker.size()) == k_begin_marker) {
      out += "BOS";
      i += k_begin_marker.size();
    } else if (name.substr(i, k_end_marker.size()) == k_end_marker) {
      out += "EOS";
      i += k_end_marker.size();
    } else if (name.substr(i, k_fresh_mark.size()) == k_fresh_mark) {
      out += "+";
      i += k_fresh_mark.size();
    } else {
      out += name[i++];
    }
  }
  return out;
}

}  // namespace detail

}  // namespace tablr
