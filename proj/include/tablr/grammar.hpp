#pragma once

// Context-free grammars: symbols, rules, the line-oriented grammar text
// format, augmentation with begin/end markers, the binary-form predicate,
// grammar size, and seeded random sentence generation.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tablr {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Error in a grammar file; line is 1-based, 0 when the whole file is at fault.
struct GrammarError : Error {
  int line;
  explicit GrammarError(const std::string& msg, int line_no = 0)
      : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}
};

struct TokenError : Error {
  std::string token;
  explicit TokenError(std::string tok)
      : Error("unknown token '" + tok + "'"), token(std::move(tok)) {}
};

enum class SymbolKind : std::uint8_t { terminal, nonterminal };

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::terminal;

  bool is_terminal() const { return kind == SymbolKind::terminal; }
  bool is_nonterminal() const { return kind == SymbolKind::nonterminal; }
  auto operator<=>(const Symbol&) const = default;
};

inline Symbol term(std::string name) { return Symbol{std::move(name), SymbolKind::terminal}; }
inline Symbol nonterm(std::string name) { return Symbol{std::move(name), SymbolKind::nonterminal}; }

// Marker glyphs reserved for augmentation; grammar files may not contain them.
inline constexpr std::string_view k_begin_marker = "▷";  // the left end marker
inline constexpr std::string_view k_end_marker = "◁";    // the right end marker
inline constexpr std::string_view k_fresh_mark = "†";    // appended until a name is fresh

struct Rule {
  Symbol lhs;
  std::vector<Symbol> rhs;  // empty sequence encodes the empty right-hand side
  bool operator==(const Rule&) const = default;
};

inline std::string to_string(const Rule& r) {
  std::string s = r.lhs.name + " ->";
  for (const auto& x : r.rhs) {
    s += ' ';
    s += x.name;
  }
  return s;
}

struct Cfg {
  std::vector<Symbol> terminals;     // sorted, unique
  std::vector<Symbol> nonterminals;  // sorted, unique
  std::vector<Rule> rules;           // ordered, no exact duplicates
  Symbol start;

  bool has_terminal(std::string_view name) const {
    return std::binary_search(terminals.begin(), terminals.end(), term(std::string(name)));
  }
  bool has_nonterminal(std::string_view name) const {
    return std::binary_search(nonterminals.begin(), nonterminals.end(),
                              nonterm(std::string(name)));
  }
  bool has_symbol(std::string_view name) const {
    return has_terminal(name) || has_nonterminal(name);
  }

  std::vector<int> rules_with_lhs(const Symbol& a) const {
    std::vector<int> out;
    for (int r = 0; r < static_cast<int>(rules.size()); ++r)
      if (rules[r].lhs == a) out.push_back(r);
    return out;
  }

  /// All grammar symbols merged in lexicographic name order.
  std::vector<Symbol> all_symbols() const {
    std::vector<Symbol> out;
    out.reserve(terminals.size() + nonterminals.size());
    std::merge(terminals.begin(), terminals.end(), nonterminals.begin(), nonterminals.end(),
               std::back_inserter(out));
    return out;
  }

  void validate() const {
    if (rules.empty()) throw GrammarError("empty rule set");
    for (const auto& s : terminals)
      if (has_nonterminal(s.name))
        throw Error("symbol '" + s.name + "' is both terminal and nonterminal");
    if (!has_nonterminal(start.name)) throw Error("start symbol '" + start.name + "' is not a nonterminal");
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const Rule& rule = rules[r];
      if (!rule.lhs.is_nonterminal() || !has_nonterminal(rule.lhs.name))
        throw Error("rule lhs '" + rule.lhs.name + "' is not a known nonterminal");
      for (const auto& x : rule.rhs) {
        if (x.is_nonterminal() ? !has_nonterminal(x.name) : !has_terminal(x.name))
          throw Error("rule symbol '" + x.name + "' is not declared");
      }
      for (std::size_t r2 = r + 1; r2 < rules.size(); ++r2)
        if (rules[r2] == rule) throw Error("duplicate rule: " + to_string(rule));
    }
  }
};

struct Sentence {
  std::vector<Symbol> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  std::string to_string() const {
    std::string s;
    for (const auto& t : tokens) {
      if (!s.empty()) s += ' ';
      s += t.name;
    }
    return s;
  }

  static Sentence from_names(const Cfg& g, const std::vector<std::string>& names) {
    Sentence v;
    v.tokens.reserve(names.size());
    for (const auto& n : names) {
      if (!g.has_terminal(n)) throw TokenError(n);
      v.tokens.push_back(term(n));
    }
    return v;
  }

  static Sentence parse(const Cfg& g, std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> names;
    for (std::string tok; in >> tok;) names.push_back(tok);
    return from_names(g, names);
  }

  bool operator==(const Sentence&) const = default;
  auto operator<=>(const Sentence&) const = default;
};

namespace detail {

inline bool contains_reserved(std::string_view tok) {
  return tok.find(k_begin_marker) != std::string_view::npos ||
         tok.find(k_end_marker) != std::string_view::npos ||
         tok.find(k_fresh_mark) != std::string_view::npos;
}

}  // namespace detail

/// Reads the line-oriented grammar format: `LHS -> sym sym ...` per rule,
/// an empty right-hand side for the empty string, `#` starting a comment,
/// and an optional `%start X` directive. Nonterminals are exactly the
/// symbols that occur on some left-hand side.
inline Cfg parse_grammar(std::string_view text) {
  struct RawRule {
    std::string lhs;
    std::vector<std::string> rhs;
    int line;
  };
  std::vector<RawRule> raw;
  std::optional<std::string> start_name;
  int start_line = 0;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string tok; ls >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;

    if (toks[0] == "%start") {
      if (toks.size() != 2) throw GrammarError("%start expects exactly one symbol", line_no);
      if (start_name) throw GrammarError("duplicate %start directive", line_no);
      start_name = toks[1];
      start_line = line_no;
      continue;
    }
    if (toks[0].front() == '%') throw GrammarError("unknown directive '" + toks[0] + "'", line_no);
    if (toks[0] == "->") throw GrammarError("missing left-hand side", line_no);
    if (toks.size() < 2 || toks[1] != "->")
      throw GrammarError("expected '->' after left-hand side", line_no);
    for (const auto& tok : toks)
      if (tok != "->" && detail::contains_reserved(tok))
        throw GrammarError("symbol '" + tok + "' uses a reserved marker glyph", line_no);

    RawRule r{toks[0], {}, line_no};
    for (std::size_t k = 2; k < toks.size(); ++k) {
      if (toks[k] == "->") throw GrammarError("unexpected '->'", line_no);
      r.rhs.push_back(toks[k]);
    }
    raw.push_back(std::move(r));
  }

  if (raw.empty()) throw GrammarError("empty rule set");

  std::vector<std::string> nt_names;
  for (const auto& r : raw) nt_names.push_back(r.lhs);
  std::sort(nt_names.begin(), nt_names.end());
  nt_names.erase(std::unique(nt_names.begin(), nt_names.end()), nt_names.end());
  auto is_nt = [&](const std::string& n) {
    return std::binary_search(nt_names.begin(), nt_names.end(), n);
  };

  std::string start = start_name.value_or(raw.front().lhs);
  if (!is_nt(start))
    throw GrammarError("start symbol '" + start + "' is not a nonterminal", start_line);

  Cfg g;
  g.start = nonterm(start);
  std::vector<std::string> term_names;
  for (const auto& r : raw) {
    Rule rule{nonterm(r.lhs), {}};
    for (const auto& n : r.rhs) {
      if (is_nt(n)) {
        rule.rhs.push_back(nonterm(n));
      } else {
        rule.rhs.push_back(term(n));
        term_names.push_back(n);
      }
    }
    if (std::find(g.rules.begin(), g.rules.end(), rule) == g.rules.end())
      g.rules.push_back(std::move(rule));
  }
  std::sort(term_names.begin(), term_names.end());
  term_names.erase(std::unique(term_names.begin(), term_names.end()), term_names.end());
  for (auto& n : term_names) g.terminals.push_back(term(n));
  for (auto& n : nt_names) g.nonterminals.push_back(nonterm(n));
  g.validate();
  return g;
}

/// The augmented grammar: a fresh start symbol with the single rule
/// start' -> begin S end, where begin/end are fresh terminal markers.
inline Cfg augment(const Cfg& g) {
  auto fresh = [&](std::string base) {
    while (g.has_symbol(base)) base += k_fresh_mark;
    return base;
  };
  Symbol start2 = nonterm(fresh(g.start.name + std::string(k_fresh_mark)));
  Symbol begin = term(fresh(std::string(k_begin_marker)));
  Symbol end = term(fresh(std::string(k_end_marker)));

  Cfg out = g;
  out.nonterminals.push_back(start2);
  std::sort(out.nonterminals.begin(), out.nonterminals.end());
  out.terminals.push_back(begin);
  out.terminals.push_back(end);
  std::sort(out.terminals.begin(), out.terminals.end());
  out.rules.push_back(Rule{start2, {begin, g.start, end}});
  out.start = start2;
  out.validate();
  return out;
}

/// Right-hand sides restricted to: empty, one symbol, or two nonterminals.
inline bool is_binary_form(const Cfg& g) {
  for (const auto& r : g.rules) {
    if (r.rhs.size() > 2) return false;
    if (r.rhs.size() == 2 && !(r.rhs[0].is_nonterminal() && r.rhs[1].is_nonterminal()))
      return false;
  }
  return true;
}

/// Sum over rules of 1 + |rhs|.
inline std::size_t grammar_size(const Cfg& g) {
  std::size_t n = 0;
  for (const auto& r : g.rules) n += 1 + r.rhs.size();
  return n;
}

/// Seeded leftmost random derivation with uniform rule choice. Returns the
/// yield when it fits in max_len and the derivation finishes within a budget
/// of 10 * max_len rule applications; otherwise nothing. Same seed, same
/// result. A splitmix-style generator keeps the stream identical across
/// standard libraries.
inline std::optional<Sentence> generate_sentence(const Cfg& g, std::uint64_t seed,
                                                 std::size_t max_len) {
  if (max_len < 1) throw Error("max_len must be at least 1");
  auto next = [state = seed]() mutable {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };

  std::map<std::string, std::vector<const Rule*>> by_lhs;
  for (const auto& r : g.rules) by_lhs[r.lhs.name].push_back(&r);

  std::vector<Symbol> form{g.start};
  const std::size_t budget = 10 * max_len;
  std::size_t applications = 0;
  for (;;) {
    auto it = std::find_if(form.begin(), form.end(),
                           [](const Symbol& s) { return s.is_nonterminal(); });
    if (it == form.end()) break;
    if (applications == budget) return std::nullopt;
    auto found = by_lhs.find(it->name);
    if (found == by_lhs.end()) return std::nullopt;  // no rule can rewrite it
    const auto& options = found->second;
    const Rule* rule = options[next() % options.size()];
    auto pos = it - form.begin();
    form.erase(form.begin() + pos);
    form.insert(form.begin() + pos, rule->rhs.begin(), rule->rhs.end());
    ++applications;
  }
  if (form.size() > max_len) return std::nullopt;
  return Sentence{std::move(form)};
}

}  // namespace tablr
