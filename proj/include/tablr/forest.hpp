#pragma once

// Parse-tree reading from a finished table. Pair entries (X, q) with the
// same X and span yield identical trees, so packed nodes are keyed on the
// grammar symbol alone; suffix entries turn into lists of sibling trees.
// Ambiguity is counted exactly with big integers, and individual trees are
// materialized by index into that count.

#include <json.hpp>
#include <map>
#include <tuple>

#include "tablr/chart.hpp"
#include "tablr/derivation.hpp"

namespace tablr {

struct ParseTree {
  Symbol label;
  std::vector<ParseTree> children;
  bool operator==(const ParseTree&) const = default;
};

inline std::string to_string(const ParseTree& t) {
  if (t.label.is_terminal()) return t.label.name;
  std::string s = t.label.name + "(";
  for (std::size_t k = 0; k < t.children.size(); ++k) {
    if (k) s += ' ';
    s += to_string(t.children[k]);
  }
  return s + ")";
}

class Forest {
 public:
  Forest(const ChartTable& table, const CoverGrammar& cover) : table_(table), cover_(cover) {
    if (!cover.two_lr) throw Error("tree reading needs the pair/suffix cover");
    n_ = table.n;
    for (const CoverRule& r : cover.rules)
      if (r.shape == RuleShape::binary) gather_pairs_[r.lhs].insert(r.rhs1);
    const CoverSymbol& fin = cover.symbols[cover.start_symbol];
    accepted_ = table.contains(cover.start_symbol, 0, n_);
    if (accepted_) root_ = sym_node(fin.last, 0, n_);
  }

  const BigCount& count() const {
    static const BigCount zero = 0;
    return accepted_ ? sym_nodes_.at(root_).count : zero;
  }

  /// The index-th tree, 0-based, in a fixed enumeration order.
  ParseTree tree_at(BigCount index) const {
    if (!accepted_ || index >= count()) throw Error("tree index out of range");
    return build_sym(root_, std::move(index));
  }

  std::vector<ParseTree> trees(std::size_t limit = static_cast<std::size_t>(-1)) const {
    std::vector<ParseTree> out;
    if (!accepted_) return out;
    BigCount total = count();
    for (BigCount k = 0; k < total; ++k) {
      if (out.size() >= limit) break;
      out.push_back(tree_at(k));
    }
    return out;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& [key, node] : sym_nodes_) {
      nlohmann::ordered_json alts = nlohmann::ordered_json::array();
      for (const auto& alt : node.alts) {
        if (alt.leaf) {
          alts.push_back({{"leaf", std::get<0>(key)}});
        } else {
          alts.push_back({{"rule", rule_display(std::get<0>(key), alt.suffix_sym)},
                          {"children", {suffix_key_name(alt.suffix_sym, std::get<1>(key),
                                                        std::get<2>(key))}}});
        }
      }
      nodes.push_back({{"key", sym_key_name(key)},
                       {"count", node.count.str()},
                       {"alternatives", std::move(alts)}});
    }
    for (const auto& [key, node] : suffix_nodes_) {
      nlohmann::ordered_json alts = nlohmann::ordered_json::array();
      for (const auto& alt : node.alts) {
        if (alt.empty) {
          alts.push_back({{"empty", true}});
        } else {
          alts.push_back(
              {{"split", alt.k},
               {"children",
                {sym_key_name({alt.head.name, std::get<1>(key), alt.k}),
                 suffix_key_name(alt.rest_sym, alt.k, std::get<2>(key))}}});
        }
      }
      nodes.push_back({{"key", suffix_key_name(std::get<0>(key), std::get<1>(key),
                                               std::get<2>(key))},
                       {"count", node.count.str()},
                       {"alternatives", std::move(alts)}});
    }
    nlohmann::ordered_json out;
    out["accepted"] = accepted_;
    out["count"] = count().str();
    if (accepted_) out["root"] = sym_key_name(root_);
    out["nodes"] = std::move(nodes);
    return out;
  }

 private:
  using SymKey = std::tuple<std::string, int, int>;     // grammar symbol name, i, j
  using SuffixKey = std::tuple<int, int, int>;          // suffix symbol id, i, j

  struct SymAlt {
    bool leaf = false;
    int suffix_sym = -1;  // the (alpha) child for a glued nonterminal
    BigCount count = 0;
  };
  struct SymNode {
    Symbol label;
    BigCount count = 0;
    std::vector<SymAlt> alts;
  };
  struct SuffixAlt {
    bool empty = false;
    int k = -1;         // split point
    Symbol head{};      // first symbol of the suffix
    int rest_sym = -1;  // suffix symbol of the tail
    BigCount count = 0;
  };
  struct SuffixNode {
    BigCount count = 0;
    std::vector<SuffixAlt> alts;
  };

  SymKey sym_node(const Symbol& x, int i, int j) const {
    SymKey key{x.name, i, j};
    if (sym_nodes_.count(key)) return key;
    if (!in_progress_.insert("s:" + sym_key_name(key)).second)
      throw Error("infinitely many parses: cyclic derivations at " + x.name);
    SymNode node;
    node.label = x;
    if (x.is_terminal()) {
      node.alts.push_back(SymAlt{true, -1, 1});
      node.count = 1;
    } else if (auto it = cover_.rule_suffixes_by_nt.find(x.name);
               it != cover_.rule_suffixes_by_nt.end()) {
      for (int alpha : it->second) {
        if (!table_.contains(alpha, i, j)) continue;
        SuffixKey child = suffix_node(alpha, i, j);
        const BigCount& c = suffix_nodes_.at(child).count;
        if (c == 0) continue;
        node.alts.push_back(SymAlt{false, alpha, c});
        node.count += c;
      }
    }
    in_progress_.erase("s:" + sym_key_name(key));
    sym_nodes_.emplace(key, std::move(node));
    return key;
  }

  SuffixKey suffix_node(int sfx, int i, int j) const {
    SuffixKey key{sfx, i, j};
    if (suffix_nodes_.count(key)) return key;
    if (!in_progress_.insert("x:" + suffix_key_name(sfx, i, j)).second)
      throw Error("infinitely many parses: cyclic derivations");
    SuffixNode node;
    const CoverSymbol& sym = cover_.symbols[sfx];
    if (sym.suffix_seq.empty()) {
      if (i == j) {
        node.alts.push_back(SuffixAlt{true, -1, {}, -1, 1});
        node.count = 1;
      }
    } else {
      const Symbol head = sym.suffix_seq.front();
      const int rest = cover_.suffix_rest.at(sfx);
      for (int k = i; k <= j; ++k) {
        if (!table_.contains(rest, k, j)) continue;
        if (!head_present(head, sfx, i, k)) continue;
        SymKey head_key = sym_node(head, i, k);
        SuffixKey rest_key = suffix_node(rest, k, j);
        BigCount c = sym_nodes_.at(head_key).count * suffix_nodes_.at(rest_key).count;
        if (c == 0) continue;
        node.alts.push_back(SuffixAlt{false, k, head, rest, c});
        node.count += c;
      }
    }
    in_progress_.erase("x:" + suffix_key_name(sfx, i, j));
    suffix_nodes_.emplace(key, std::move(node));
    return key;
  }

  // Some pair (head, q) with the gathering rule for this suffix must span
  // (i, k); any such q yields the same subtrees.
  bool head_present(const Symbol& head, int sfx, int i, int k) const {
    for (int q : table_.cell(i, k)) {
      const CoverSymbol& sym = cover_.symbols[q];
      if (sym.tag != StackSymbol::Tag::pair || sym.last != head) continue;
      if (gathering_exists(q, sfx)) return true;
    }
    return false;
  }

  bool gathering_exists(int pair_sym, int whole_sfx) const {
    auto it = gather_pairs_.find(whole_sfx);
    return it != gather_pairs_.end() && it->second.count(pair_sym) > 0;
  }

  ParseTree build_sym(const SymKey& key, BigCount index) const {
    const SymNode& node = sym_nodes_.at(key);
    for (const SymAlt& alt : node.alts) {
      if (index >= alt.count) {
        index -= alt.count;
        continue;
      }
      if (alt.leaf) return ParseTree{node.label, {}};
      auto lists = build_suffix({alt.suffix_sym, std::get<1>(key), std::get<2>(key)},
                                std::move(index));
      return ParseTree{node.label, std::move(lists)};
    }
    throw Error("tree index out of range");
  }

  std::vector<ParseTree> build_suffix(const SuffixKey& key, BigCount index) const {
    const SuffixNode& node = suffix_nodes_.at(key);
    for (const SuffixAlt& alt : node.alts) {
      if (index >= alt.count) {
        index -= alt.count;
        continue;
      }
      if (alt.empty) return {};
      SuffixKey rest_key{alt.rest_sym, alt.k, std::get<2>(key)};
      const BigCount& tail_count = suffix_nodes_.at(rest_key).count;
      BigCount head_index = index / tail_count;
      BigCount tail_index = index % tail_count;
      std::vector<ParseTree> out;
      out.push_back(build_sym({alt.head.name, std::get<1>(key), alt.k}, std::move(head_index)));
      auto tail = build_suffix(rest_key, std::move(tail_index));
      out.insert(out.end(), std::make_move_iterator(tail.begin()),
                 std::make_move_iterator(tail.end()));
      return out;
    }
    throw Error("tree index out of range");
  }

  static std::string sym_key_name(const SymKey& key) {
    return std::get<0>(key) + "@" + std::to_string(std::get<1>(key)) + ":" +
           std::to_string(std::get<2>(key));
  }
  std::string suffix_key_name(int sfx, int i, int j) const {
    return cover_.symbols[sfx].token_name + "@" + std::to_string(i) + ":" + std::to_string(j);
  }
  std::string rule_display(const std::string& lhs, int suffix_sym) const {
    std::string s = lhs + " ->";
    for (const auto& x : cover_.symbols[suffix_sym].suffix_seq) s += ' ' + x.name;
    return s;
  }

  const ChartTable& table_;
  const CoverGrammar& cover_;
  int n_ = 0;
  bool accepted_ = false;
  SymKey root_{};
  std::map<int, std::set<int>> gather_pairs_;  // suffix lhs -> pair left children
  mutable std::map<SymKey, SymNode> sym_nodes_;
  mutable std::map<SuffixKey, SuffixNode> suffix_nodes_;
  mutable std::set<std::string> in_progress_;
};

/// All parse trees of the recognized input, rooted at the source start
/// symbol. Empty on a rejecting table.
inline std::vector<ParseTree> extract_trees(const ChartTable& table, const CoverGrammar& cover,
                                            std::size_t limit = static_cast<std::size_t>(-1)) {
  return Forest(table, cover).trees(limit);
}

/// Number of parse trees, without enumerating them.
inline BigCount count_parses(const ChartTable& table, const CoverGrammar& cover) {
  return Forest(table, cover).count();
}

}  // namespace tablr
