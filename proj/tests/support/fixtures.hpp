#pragma once

// Shared fixtures, random tree generators and independent reference
// implementations used as test oracles. Nothing here calls into the code
// paths it is used to check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "deptx/treebank.hpp"

namespace deptx::testing {

// "Mary saw a cat": 1 -nsubj-> 2 (root), 3 -det-> 4, 4 -obj-> 2.
inline constexpr const char* kTCatConllu =
    "# sent_id = t_cat\n"
    "# text = Mary saw a cat\n"
    "1\tMary\tMary\tPROPN\tNNP\t_\t2\tnsubj\t_\t_\n"
    "2\tsaw\tsee\tVERB\tVBD\t_\t0\troot\t_\t_\n"
    "3\ta\ta\tDET\tDT\t_\t4\tdet\t_\t_\n"
    "4\tcat\tcat\tNOUN\tNN\t_\t2\tobj\t_\t_\n"
    "\n";

inline Token tok(int index, std::string form, int head, std::string deprel, std::string lemma = "") {
  Token t;
  t.index = index;
  t.lemma = lemma.empty() ? form : std::move(lemma);
  t.form = std::move(form);
  t.head = head;
  t.deprel = std::move(deprel);
  return t;
}

inline DepTree t_cat() {
  DepTree t;
  t.sentence_id = "t_cat";
  t.tokens = {tok(1, "Mary", 2, "nsubj"), tok(2, "saw", 0, "root", "see"), tok(3, "a", 4, "det"),
              tok(4, "cat", 2, "obj")};
  t.tokens[0].upos = "PROPN";
  t.tokens[1].upos = "VERB";
  t.tokens[2].upos = "DET";
  t.tokens[3].upos = "NOUN";
  return t;
}

// Arcs 3->1 and 4->2 cross; 3 is the root and heads 4.
inline DepTree non_projective() {
  DepTree t;
  t.sentence_id = "np";
  t.tokens = {tok(1, "w1", 3, "obj"), tok(2, "w2", 4, "nmod"), tok(3, "w3", 0, "root"),
              tok(4, "w4", 3, "obl")};
  return t;
}

inline DepTree single_token(std::string form = "Hi") {
  DepTree t;
  t.sentence_id = "single";
  t.tokens = {tok(1, std::move(form), 0, "root")};
  t.tokens[0].upos = "INTJ";
  return t;
}

inline DepTree from_heads(const std::vector<int>& heads, const std::vector<std::string>& rels,
                          std::string id = "h") {
  DepTree t;
  t.sentence_id = std::move(id);
  for (std::size_t i = 0; i < heads.size(); ++i) {
    auto idx = static_cast<int>(i + 1);
    t.tokens.push_back(tok(idx, "w" + std::to_string(idx), heads[i], heads[i] == 0 ? "root" : rels[i]));
  }
  return t;
}

inline const std::vector<std::string>& ud_relations() {
  static const std::vector<std::string> rels{
      "acl",   "acl:relcl", "advcl",    "advmod", "amod",      "appos",     "aux",    "aux:pass",
      "case",  "cc",        "ccomp",    "compound", "conj",    "cop",       "csubj",  "det",
      "expl",  "fixed",     "flat",     "iobj",   "mark",      "nmod",      "nmod:poss", "nsubj",
      "nsubj:pass", "nummod", "obj",    "obl",    "parataxis", "punct",     "xcomp",  "dep"};
  return rels;
}

/// Arbitrary (possibly non-projective) random tree on n tokens.
inline DepTree random_tree(std::mt19937_64& rng, int n, const std::vector<std::string>& labels,
                           std::string id = "r") {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> heads(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 1; k < perm.size(); ++k) {
    std::uniform_int_distribution<std::size_t> pick(0, k - 1);
    heads[static_cast<std::size_t>(perm[k] - 1)] = perm[pick(rng)];
  }
  std::vector<std::string> rels(static_cast<std::size_t>(n));
  std::uniform_int_distribution<std::size_t> lab(0, labels.size() - 1);
  for (auto& r : rels) r = labels[lab(rng)];
  return from_heads(heads, rels, std::move(id));
}

namespace detail {
inline void projective_span(std::mt19937_64& rng, int lo, int hi, int parent,
                            std::vector<int>& heads) {
  if (lo > hi) return;
  std::uniform_int_distribution<int> pick(lo, hi);
  const int h = pick(rng);
  heads[static_cast<std::size_t>(h - 1)] = parent;
  // Cut each side into contiguous segments, one dependent subtree each.
  auto cut = [&](int a, int b) {
    int start = a;
    for (int k = a; k <= b; ++k) {
      if (k == b || std::bernoulli_distribution(0.45)(rng)) {
        projective_span(rng, start, k, h, heads);
        start = k + 1;
      }
    }
  };
  cut(lo, h - 1);
  cut(h + 1, hi);
}
}  // namespace detail

/// Uniformly structured random projective tree on n tokens.
inline DepTree random_projective_tree(std::mt19937_64& rng, int n,
                                      const std::vector<std::string>& labels, std::string id = "p") {
  std::vector<int> heads(static_cast<std::size_t>(n), 0);
  detail::projective_span(rng, 1, n, 0, heads);
  std::vector<std::string> rels(static_cast<std::size_t>(n));
  std::uniform_int_distribution<std::size_t> lab(0, labels.size() - 1);
  for (auto& r : rels) r = labels[lab(rng)];
  return from_heads(heads, rels, std::move(id));
}

// ---------------------------------------------------------------------------
// Oracles

/// Projectivity by arc-pair enumeration. The root is attached to an
/// artificial position 0 so that arcs spanning the root count as crossing.
inline bool crossing_free(const DepTree& tree) {
  std::vector<std::pair<int, int>> arcs;
  for (const auto& t : tree.tokens) arcs.emplace_back(std::min(t.head, t.index), std::max(t.head, t.index));
  for (std::size_t x = 0; x < arcs.size(); ++x)
    for (std::size_t y = 0; y < arcs.size(); ++y) {
      auto [a, b] = arcs[x];
      auto [c, d] = arcs[y];
      if (a < c && c < b && b < d) return false;
    }
  return true;
}

/// Plain recursive linearization.
inline std::string reference_linearize(const DepTree& tree, int node) {
  std::vector<int> kids;
  for (const auto& t : tree.tokens)
    if (t.head == node) kids.push_back(t.index);
  const auto& me = tree.tokens[static_cast<std::size_t>(node - 1)];
  if (kids.empty()) return me.form;
  std::string s = "( " + me.form;
  for (int k : kids) s += " " + tree.tokens[static_cast<std::size_t>(k - 1)].deprel + " " + reference_linearize(tree, k);
  return s + " )";
}

inline std::string reference_linearize(const DepTree& tree) {
  for (const auto& t : tree.tokens)
    if (t.head == 0) return reference_linearize(tree, t.index);
  return {};
}

/// Chain decomposition by brute force: enumerate every downward path of
/// `rel` edges, remove a longest one, repeat. Returns depth -> count.
inline std::map<std::size_t, std::size_t> chain_histogram_oracle(const DepTree& tree,
                                                                 const std::string& rel) {
  std::set<int> edges;  // dependent token of each remaining rel-edge
  for (const auto& t : tree.tokens)
    if (t.head != 0 && t.deprel == rel) edges.insert(t.index);
  std::map<std::size_t, std::size_t> hist;
  while (!edges.empty()) {
    std::vector<int> best;
    // DFS from every remaining edge.
    std::vector<std::vector<int>> stack;
    for (int e : edges) stack.push_back({e});
    while (!stack.empty()) {
      auto path = std::move(stack.back());
      stack.pop_back();
      if (path.size() > best.size()) best = path;
      for (int e : edges)
        if (tree.tokens[static_cast<std::size_t>(e - 1)].head == path.back()) {
          auto longer = path;
          longer.push_back(e);
          stack.push_back(std::move(longer));
        }
    }
    ++hist[best.size()];
    for (int e : best) edges.erase(e);
  }
  return hist;
}

/// IBM Model 1 written as straight loops over string-keyed maps.
struct ReferenceIbm1 {
  std::map<std::pair<std::string, std::string>, double> t;  // (e, f) -> t(f|e)

  void train(const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& corpus,
             int iterations) {
    std::map<std::string, std::set<std::string>> cooc;
    for (const auto& [src, tgt] : corpus)
      for (const auto& e : src)
        for (const auto& f : tgt) cooc[e].insert(f);
    for (const auto& [e, fs] : cooc)
      for (const auto& f : fs) t[{e, f}] = 1.0 / static_cast<double>(fs.size());
    for (int it = 0; it < iterations; ++it) {
      std::map<std::pair<std::string, std::string>, double> count;
      std::map<std::string, double> total;
      for (const auto& [src, tgt] : corpus) {
        for (const auto& f : tgt) {
          double z = 0;
          for (const auto& e : src) z += t[{e, f}];
          for (const auto& e : src) {
            count[{e, f}] += t[{e, f}] / z;
            total[e] += t[{e, f}] / z;
          }
        }
      }
      for (auto& [key, p] : t) p = count[key] / total[key.first];
    }
  }
};

/// Removes "nmod ." before a role by string replacement on a padded copy.
inline std::string strip_nmod_oracle(const std::string& text) {
  std::string s = " ";
  // normalize spacing
  bool space = true;
  for (char c : text) {
    if (c == ' ' || c == '\t') {
      if (!space) s += ' ';
      space = true;
    } else {
      s += c;
      space = false;
    }
  }
  if (s.back() != ' ') s += ' ';
  for (std::size_t at; (at = s.find(" nmod . ")) != std::string::npos;) {
    // Only when a role word follows.
    auto next = s.substr(at + 8, 2);
    if (next.empty() || next == "( " || next == ") " || next == ", " || next == "= ") break;
    s.erase(at, 7);
  }
  return s.substr(1, s.size() - 2);
}

}  // namespace deptx::testing
