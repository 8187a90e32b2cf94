#pragma once

// Treebank statistics: recursion depth per relation, relation frequencies,
// projectivity rate.

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "deptx/treebank.hpp"

namespace deptx {

struct DepthHistogram {
  std::string relation;
  std::map<std::size_t, std::size_t> counts;  // depth -> number of chains

  DepthHistogram& operator+=(const DepthHistogram& other) {
    for (const auto& [depth, n] : other.counts) counts[depth] += n;
    return *this;
  }
  bool operator==(const DepthHistogram&) const = default;
};

enum class DepthCounting {
  /// Every edge of the relation lies on exactly one chain. Where a token has
  /// several such dependents the chain continues through the one with the
  /// deepest continuation (leftmost on ties); the others start new chains.
  kMaximalChain,
  /// One count per edge, at its distance from the top of its chain.
  kPerEdge,
};

namespace detail {

inline void add_depths(const DepTree& tree, const std::string& relation, DepthCounting mode,
                       DepthHistogram& hist) {
  const std::size_t n = tree.size();
  auto carries = [&](int tok) { return tree.at(tok).head != 0 && tree.at(tok).deprel == relation; };

  // R-dependents per token, surface order.
  std::vector<std::vector<int>> kids(n + 1);
  for (const auto& tok : tree.tokens)
    if (carries(tok.index)) kids[static_cast<std::size_t>(tok.head)].push_back(tok.index);

  // Longest downward R-chain (in edges) from each token, dependents first.
  const auto all = dependents(tree);
  std::vector<int> order{all[0].front()};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int d : all[static_cast<std::size_t>(order[i])]) order.push_back(d);
  std::vector<int> down(n + 1, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto ti = static_cast<std::size_t>(*it);
    for (int d : kids[ti]) down[ti] = std::max(down[ti], 1 + down[static_cast<std::size_t>(d)]);
  }

  auto heavy = [&](int h) {
    int pick = 0;
    for (int d : kids[static_cast<std::size_t>(h)])
      if (pick == 0 || down[static_cast<std::size_t>(d)] > down[static_cast<std::size_t>(pick)])
        pick = d;
    return pick;
  };

  if (mode == DepthCounting::kMaximalChain) {
    for (const auto& tok : tree.tokens) {
      if (!carries(tok.index)) continue;
      const int h = tok.head;
      const bool continues = carries(h) && heavy(h) == tok.index;
      if (!continues) ++hist.counts[static_cast<std::size_t>(1 + down[static_cast<std::size_t>(tok.index)])];
    }
  } else {
    for (const auto& tok : tree.tokens) {
      if (!carries(tok.index)) continue;
      std::size_t depth = 1;
      for (int h = tok.head; carries(h); h = tree.at(h).head) ++depth;
      ++hist.counts[depth];
    }
  }
}

}  // namespace detail

/// Chains of `relation` edges where each dependent heads the next edge,
/// counted by depth (number of edges). Trees must be valid.
inline DepthHistogram recursion_depth_histogram(std::span<const DepTree> corpus,
                                                const std::string& relation,
                                                DepthCounting mode = DepthCounting::kMaximalChain) {
  DepthHistogram hist{relation, {}};
  for (const auto& tree : corpus) detail::add_depths(tree, relation, mode, hist);
  return hist;
}

inline std::map<std::string, std::size_t> relation_frequencies(std::span<const DepTree> corpus) {
  std::map<std::string, std::size_t> freq;
  for (const auto& tree : corpus)
    for (const auto& tok : tree.tokens) ++freq[tok.deprel];
  return freq;
}

/// Share of projective trees; nullopt for an empty corpus.
inline std::optional<double> projectivity_rate(std::span<const DepTree> corpus) {
  if (corpus.empty()) return std::nullopt;
  std::size_t projective = 0;
  for (const auto& tree : corpus)
    if (is_projective(tree)) ++projective;
  return static_cast<double>(projective) / static_cast<double>(corpus.size());
}

inline void write_histogram_csv(std::ostream& out, const std::vector<DepthHistogram>& hists) {
  out << "relation,depth,count\n";
  for (const auto& h : hists)
    for (const auto& [depth, n] : h.counts) out << h.relation << ',' << depth << ',' << n << '\n';
}

inline nlohmann::ordered_json stats_summary(std::span<const DepTree> corpus) {
  nlohmann::ordered_json j;
  j["sentences"] = corpus.size();
  if (auto rate = projectivity_rate(corpus)) j["projectivity_rate"] = *rate;
  else j["projectivity_rate"] = nullptr;
  nlohmann::ordered_json freq = nlohmann::ordered_json::object();
  for (const auto& [rel, n] : relation_frequencies(corpus)) freq[rel] = n;
  j["relation_frequencies"] = std::move(freq);
  return j;
}

}  // namespace deptx
