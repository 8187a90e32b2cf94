#pragma once

// Binarization of dependency trees ("unfolding").
//
// Each head absorbs its dependents one at a time, nearest first (an
// equidistant left dependent before the right one). Every attachment creates a
// branch labelled with the dependency relation; the running head subtree sits
// on the head side and the dependent's own unfolded subtree goes left or right
// according to its surface position. For projective trees every branch spans
// a contiguous interval, so in-order leaves reproduce the sentence.

#include <cstdint>
#include <cstdlib>
#include <iterator>
#include <string>
#include <variant>
#include <vector>

#include "deptx/treebank.hpp"

namespace deptx {

using NodeId = std::uint32_t;

enum class HeadSide : std::uint8_t { kLeft, kRight };

struct Leaf {
  Token token;
};

struct Branch {
  std::string relation;
  HeadSide head_side;
  NodeId left;
  NodeId right;
  int head_token;  // governing token of the original edge
  int dep_token;   // dependent token of the original edge
  std::string head_lemma;
  std::string dep_lemma;

  NodeId head_child() const { return head_side == HeadSide::kLeft ? left : right; }
  NodeId dep_child() const { return head_side == HeadSide::kLeft ? right : left; }
};

/// Arena-backed binary tree. Children always have smaller ids than their
/// parent, so a forward pass over `nodes` is a valid bottom-up order.
struct UnfoldedTree {
  std::vector<std::variant<Leaf, Branch>> nodes;
  NodeId root = 0;

  bool is_leaf(NodeId id) const { return std::holds_alternative<Leaf>(nodes[id]); }
  const Leaf& leaf(NodeId id) const { return std::get<Leaf>(nodes[id]); }
  const Branch& branch(NodeId id) const { return std::get<Branch>(nodes[id]); }
  std::size_t size() const noexcept { return nodes.size(); }
};

inline UnfoldedTree unfold(const DepTree& tree) {
  require_valid(tree, "unfold");
  const auto deps = dependents(tree);
  const std::size_t n = tree.size();

  // Heads after all of their dependents: reverse of a BFS from the root.
  std::vector<int> order;
  order.reserve(n);
  order.push_back(deps[0].front());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int d : deps[static_cast<std::size_t>(order[i])]) order.push_back(d);

  UnfoldedTree out;
  out.nodes.reserve(2 * n - 1);
  std::vector<NodeId> subtree(n + 1, 0);

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int h = *it;
    const Token& head = tree.at(h);
    NodeId running = static_cast<NodeId>(out.nodes.size());
    out.nodes.emplace_back(Leaf{head});

    // Dependents in surface order; merge outward from h, left wins ties.
    const auto& kids = deps[static_cast<std::size_t>(h)];
    auto split = std::lower_bound(kids.begin(), kids.end(), h);
    auto left = std::make_reverse_iterator(split);  // nearest left first
    auto left_end = kids.rend();
    auto right = split;

    auto attach = [&](int d) {
      const Token& dep = tree.at(d);
      Branch b;
      b.relation = dep.deprel;
      b.head_token = h;
      b.dep_token = d;
      b.head_lemma = head.lemma;
      b.dep_lemma = dep.lemma;
      if (d < h) {
        b.head_side = HeadSide::kRight;
        b.left = subtree[static_cast<std::size_t>(d)];
        b.right = running;
      } else {
        b.head_side = HeadSide::kLeft;
        b.left = running;
        b.right = subtree[static_cast<std::size_t>(d)];
      }
      running = static_cast<NodeId>(out.nodes.size());
      out.nodes.emplace_back(std::move(b));
    };

    while (left != left_end || right != kids.end()) {
      if (right == kids.end() || (left != left_end && h - *left <= *right - h)) {
        attach(*left++);
      } else {
        attach(*right++);
      }
    }
    subtree[static_cast<std::size_t>(h)] = running;
  }
  out.root = subtree[static_cast<std::size_t>(order.front())];
  return out;
}

/// In-order leaves.
inline std::vector<Token> leaf_sequence(const UnfoldedTree& u) {
  std::vector<Token> out;
  if (u.nodes.empty()) return out;
  std::vector<NodeId> stack{u.root};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (u.is_leaf(id)) {
      out.push_back(u.leaf(id).token);
    } else {
      const auto& b = u.branch(id);
      stack.push_back(b.right);
      stack.push_back(b.left);
    }
  }
  return out;
}

/// Debug rendering, e.g. "(obj (nsubj Mary saw) (det a cat))".
inline std::string to_sexpr(const UnfoldedTree& u) {
  std::vector<std::string> text(u.size());
  for (NodeId id = 0; id < u.size(); ++id) {
    if (u.is_leaf(id)) {
      text[id] = u.leaf(id).token.form;
    } else {
      const auto& b = u.branch(id);
      text[id] = "(" + b.relation + " " + text[b.left] + " " + text[b.right] + ")";
    }
  }
  return u.nodes.empty() ? std::string() : text[u.root];
}

}  // namespace deptx
