#pragma once

// Annotation of unfolded trees with edgewise operations and their bottom-up
// evaluation to an output string.

#include <algorithm>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "deptx/error.hpp"
#include "deptx/operation.hpp"
#include "deptx/treebank.hpp"
#include "deptx/unfold.hpp"

namespace deptx {

/// Ordered relation -> operation map. Relations not listed map to concat.
class EdgewiseTransform {
 public:
  using Pair = std::pair<std::string, Operation>;

  EdgewiseTransform() = default;
  EdgewiseTransform(std::initializer_list<Pair> pairs) {
    for (const auto& [rel, op] : pairs) add(rel, op);
  }

  /// Appends a pair. Throws ConfigError if the relation is already listed.
  void add(std::string relation, Operation op) {
    if (contains(relation))
      throw ConfigError("duplicate relation '" + relation + "' in edgewise transform");
    pairs_.emplace_back(std::move(relation), op);
  }

  bool erase(std::string_view relation) {
    auto it = find(relation);
    if (it == pairs_.end()) return false;
    pairs_.erase(it);
    return true;
  }

  bool contains(std::string_view relation) const { return find(relation) != pairs_.end(); }

  Operation lookup(std::string_view relation) const {
    auto it = find(relation);
    return it == pairs_.end() ? Operation::kConcat : it->second;
  }

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  bool operator==(const EdgewiseTransform&) const = default;

 private:
  std::vector<Pair>::const_iterator find(std::string_view relation) const {
    return std::find_if(pairs_.begin(), pairs_.end(),
                        [&](const Pair& p) { return p.first == relation; });
  }

  std::vector<Pair> pairs_;
};

/// Unfolded tree plus one operation and bracket-5 position per node
/// (both indexed by NodeId; leaf entries are unused).
struct AnnotatedTree {
  UnfoldedTree tree;
  std::vector<Operation> ops;
  std::vector<Bracket5Pos> bracket5;
};

/// Labels every branch with its relation's operation. Bracket-5 branches
/// that share a head word are ordered inner-to-outer (attachment order) and
/// marked first/middle/last, or only when alone.
inline AnnotatedTree annotate(UnfoldedTree u, const EdgewiseTransform& t) {
  AnnotatedTree a;
  a.ops.assign(u.size(), Operation::kConcat);
  a.bracket5.assign(u.size(), Bracket5Pos::kNone);

  // Arena order is attachment order within each head's spine.
  std::unordered_map<int, std::vector<NodeId>> groups;
  for (NodeId id = 0; id < u.size(); ++id) {
    if (u.is_leaf(id)) continue;
    const auto& b = u.branch(id);
    a.ops[id] = t.lookup(b.relation);
    if (a.ops[id] == Operation::kBracket5) groups[b.head_token].push_back(id);
  }
  for (auto& [head, ids] : groups) {
    if (ids.size() == 1) {
      a.bracket5[ids.front()] = Bracket5Pos::kOnly;
      continue;
    }
    for (auto id : ids) a.bracket5[id] = Bracket5Pos::kMiddle;
    a.bracket5[ids.front()] = Bracket5Pos::kFirst;
    a.bracket5[ids.back()] = Bracket5Pos::kLast;
  }
  a.tree = std::move(u);
  return a;
}

inline std::string evaluate(const AnnotatedTree& a) {
  const auto& u = a.tree;
  if (u.nodes.empty()) return {};
  std::vector<std::string> out(u.size());

  for (NodeId id = 0; id < u.size(); ++id) {
    if (u.is_leaf(id)) {
      out[id] = u.leaf(id).token.form;
      continue;
    }
    const auto& b = u.branch(id);
    std::string result;
    auto emit = [&result](std::string_view piece) {
      if (!result.empty()) result += ' ';
      result += piece;
    };
    for (Slot slot : output_template(a.ops[id], a.bracket5[id])) {
      switch (slot) {
        case Slot::kLeft: emit(out[b.left]); break;
        case Slot::kRight: emit(out[b.right]); break;
        case Slot::kHead: emit(out[b.head_child()]); break;
        case Slot::kDep: emit(out[b.dep_child()]); break;
        case Slot::kLabel: emit(b.relation); break;
        case Slot::kHeadLemma: emit(b.head_lemma); break;
        case Slot::kDepLemma: emit(b.dep_lemma); break;
        case Slot::kOpen: emit("("); break;
        case Slot::kClose: emit(")"); break;
        case Slot::kComma: emit(","); break;
        case Slot::kBy: emit("by"); break;
      }
    }
    // Each child is read by exactly one parent.
    out[b.left].clear();
    out[b.left].shrink_to_fit();
    out[b.right].clear();
    out[b.right].shrink_to_fit();
    out[id] = std::move(result);
  }
  return std::move(out[u.root]);
}

inline std::string apply_transformation(const DepTree& tree, const EdgewiseTransform& t) {
  return evaluate(annotate(unfold(tree), t));
}

}  // namespace deptx
