#pragma once

// Brute-force reference semantics over the source grammar: membership by a
// monotone fact fixpoint, parse-tree counting by memoized enumeration, and
// enumeration/sampling of the terminal universe for conformance sweeps.

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <set>
#include <tuple>

#include "tablr/grammar.hpp"

namespace tablr {

using BigCount = boost::multiprecision::cpp_int;

namespace detail {

class DerivationFacts {
 public:
  DerivationFacts(const Cfg& g, const Sentence& v) : g_(g), n_(static_cast<int>(v.size())) {
    int id = 0;
    for (const auto& s : g.terminals) ids_[s.name] = id++;
    for (const auto& s : g.nonterminals) ids_[s.name] = id++;
    facts_.assign(ids_.size() * span_count(), false);
    for (int i = 0; i < n_; ++i) set(ids_.at(v.tokens[i].name), i, i + 1);
    close();
  }

  bool derives(const Symbol& x, int i, int j) const { return get(ids_.at(x.name), i, j); }

  bool derives_seq(const std::vector<Symbol>& rhs, std::size_t k, int i, int j) const {
    return seq_derives(rhs, k, i, j);
  }

 private:
  int span_count() const { return (n_ + 1) * (n_ + 1); }
  int at(int sym, int i, int j) const { return sym * span_count() + i * (n_ + 1) + j; }
  bool get(int sym, int i, int j) const { return facts_[at(sym, i, j)]; }
  void set(int sym, int i, int j) { facts_[at(sym, i, j)] = true; }

  bool seq_derives(const std::vector<Symbol>& rhs, std::size_t k, int i, int j) const {
    if (k == rhs.size()) return i == j;
    for (int t = i; t <= j; ++t)
      if (get(ids_.at(rhs[k].name), i, t) && seq_derives(rhs, k + 1, t, j)) return true;
    return false;
  }

  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : g_.rules) {
        int lhs = ids_.at(r.lhs.name);
        for (int i = 0; i <= n_; ++i)
          for (int j = i; j <= n_; ++j)
            if (!get(lhs, i, j) && seq_derives(r.rhs, 0, i, j)) {
              set(lhs, i, j);
              changed = true;
            }
      }
    }
  }

  const Cfg& g_;
  int n_;
  std::map<std::string, int> ids_;
  std::vector<bool> facts_;
};

}  // namespace detail

/// Does the grammar derive exactly this token sequence from its start symbol?
inline bool derives(const Cfg& g, const Sentence& v) {
  return detail::DerivationFacts(g, v).derives(g.start, 0, static_cast<int>(v.size()));
}

namespace detail {

class TreeCounter {
 public:
  TreeCounter(const Cfg& g, const Sentence& v)
      : g_(g), v_(v), n_(static_cast<int>(v.size())), facts_(g, v) {}

  BigCount count(const Symbol& x, int i, int j) {
    if (x.is_terminal()) return (j == i + 1 && v_.tokens[i] == x) ? 1 : 0;
    if (!facts_.derives(x, i, j)) return 0;
    auto key = std::make_tuple(x.name, i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    // Recursion only descends into derivable spans, so re-entering one means
    // the grammar pumps A =>+ A over it: infinitely many trees.
    if (!in_progress_.insert(key).second)
      throw Error("infinitely many derivations: cycle at " + x.name);
    BigCount total = 0;
    for (const auto& r : g_.rules)
      if (r.lhs == x) total += count_seq(r.rhs, 0, i, j);
    in_progress_.erase(key);
    memo_.emplace(key, total);
    return total;
  }

 private:
  BigCount count_seq(const std::vector<Symbol>& rhs, std::size_t k, int i, int j) {
    if (k == rhs.size()) return i == j ? 1 : 0;
    BigCount total = 0;
    for (int t = i; t <= j; ++t) {
      // Descend only into splits the fact table can complete; this keeps the
      // cycle guard exact.
      if (rhs[k].is_nonterminal() && !facts_.derives(rhs[k], i, t)) continue;
      if (!facts_.derives_seq(rhs, k + 1, t, j)) continue;
      BigCount head = count(rhs[k], i, t);
      if (head != 0) total += head * count_seq(rhs, k + 1, t, j);
    }
    return total;
  }

  const Cfg& g_;
  const Sentence& v_;
  int n_;
  DerivationFacts facts_;
  std::map<std::tuple<std::string, int, int>, BigCount> memo_;
  std::set<std::tuple<std::string, int, int>> in_progress_;
};

}  // namespace detail

/// Number of distinct parse trees of v in g. Throws when the grammar derives
/// some span of v in infinitely many ways (cyclic unit/epsilon pumping).
inline BigCount tree_count(const Cfg& g, const Sentence& v) {
  return detail::TreeCounter(g, v).count(g.start, 0, static_cast<int>(v.size()));
}

/// Every token sequence over the grammar's terminals up to max_len,
/// shortest first, lexicographic within a length.
inline std::vector<Sentence> all_sentences(const Cfg& g, int max_len) {
  std::vector<Sentence> out{Sentence{}};
  std::vector<Sentence> frontier{Sentence{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Sentence> next;
    for (const auto& v : frontier)
      for (const auto& t : g.terminals) {
        Sentence w = v;
        w.tokens.push_back(t);
        next.push_back(std::move(w));
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

/// The universe above, or a deterministic sample of `cap` draws when the full
/// enumeration would exceed cap.
inline std::vector<Sentence> sentence_universe(const Cfg& g, int max_len, std::size_t cap,
                                               std::uint64_t seed = 1) {
  double total = 0;
  double pow = 1;
  for (int len = 0; len <= max_len; ++len) {
    total += pow;
    pow *= static_cast<double>(g.terminals.size());
    if (total > static_cast<double>(cap)) break;
  }
  if (total <= static_cast<double>(cap)) return all_sentences(g, max_len);

  auto next = [state = seed]() mutable {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  std::set<Sentence> picked;
  while (picked.size() < cap) {
    Sentence v;
    std::size_t len = next() % (max_len + 1);
    for (std::size_t k = 0; k < len; ++k)
      v.tokens.push_back(g.terminals[next() % g.terminals.size()]);
    picked.insert(std::move(v));
  }
  return {picked.begin(), picked.end()};
}

}  // namespace tablr
