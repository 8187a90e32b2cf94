#pragma once

// IBM Model 1 (no NULL word) trained with EM, and posterior alignments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "deptx/error.hpp"

namespace deptx {

/// Source = natural-language tokens, target = logical-form tokens.
struct SentencePair {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

/// Row-major n x m matrix of alignment posteriors; row i is source position
/// i, column j is target position j (both 0-based here).
struct AlignmentMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  AlignmentMatrix() = default;
  AlignmentMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct Ibm1Training;
Ibm1Training train_ibm1(std::span<const SentencePair> corpus, std::size_t iterations = 10);

/// Translation table t(f | e).
class AlignmentModel {
 public:
  double prob(std::string_view source, std::string_view target) const {
    auto e = source_ids_.find(std::string(source));
    auto f = target_ids_.find(std::string(target));
    if (e == source_ids_.end() || f == target_ids_.end()) return 0.0;
    return prob(e->second, f->second);
  }

  std::size_t source_vocab_size() const noexcept { return source_words_.size(); }
  std::size_t target_vocab_size() const noexcept { return target_words_.size(); }

  /// Calls fn(source, target, t(f|e)) for every nonzero entry.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, p] : table_)
      fn(source_words_[key >> 32], target_words_[key & 0xffffffffu], p);
  }

  /// Sets t(target | source) directly.
  void set(const std::string& source, const std::string& target, double p) {
    entry(source_id(source), target_id(target)) = p;
  }

 private:
  friend Ibm1Training train_ibm1(std::span<const SentencePair>, std::size_t);

  std::uint32_t source_id(const std::string& w) { return intern(w, source_ids_, source_words_); }
  std::uint32_t target_id(const std::string& w) { return intern(w, target_ids_, target_words_); }

  double prob(std::uint32_t e, std::uint32_t f) const {
    auto it = table_.find(key(e, f));
    return it == table_.end() ? 0.0 : it->second;
  }
  double& entry(std::uint32_t e, std::uint32_t f) { return table_[key(e, f)]; }

  static std::uint64_t key(std::uint32_t e, std::uint32_t f) {
    return (static_cast<std::uint64_t>(e) << 32) | f;
  }

  static std::uint32_t intern(const std::string& w, std::unordered_map<std::string, std::uint32_t>& ids,
                              std::vector<std::string>& words) {
    auto [it, fresh] = ids.emplace(w, static_cast<std::uint32_t>(words.size()));
    if (fresh) words.push_back(w);
    return it->second;
  }

  std::unordered_map<std::string, std::uint32_t> source_ids_;
  std::unordered_map<std::string, std::uint32_t> target_ids_;
  std::vector<std::string> source_words_;
  std::vector<std::string> target_words_;
  std::unordered_map<std::uint64_t, double> table_;
};

/// sum_s sum_j log( (1/|e_s|) sum_i t(f_j | e_i) ).
inline double log_likelihood(const AlignmentModel& model, std::span<const SentencePair> corpus) {
  double ll = 0.0;
  for (const auto& pair : corpus) {
    const double norm = 1.0 / static_cast<double>(pair.source.size());
    for (const auto& f : pair.target) {
      double sum = 0.0;
      for (const auto& e : pair.source) sum += model.prob(e, f);
      ll += std::log(sum * norm);
    }
  }
  return ll;
}

struct Ibm1Training {
  AlignmentModel model;
  /// Corpus log-likelihood of the initial model, then after each iteration.
  std::vector<double> log_likelihood;
};

inline Ibm1Training train_ibm1(std::span<const SentencePair> corpus, std::size_t iterations) {
  if (iterations < 1) throw ConfigError("IBM-1 needs at least one iteration");
  if (corpus.empty()) throw DataError("IBM-1 training corpus is empty");
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    if (corpus[s].source.empty() || corpus[s].target.empty())
      throw DataError("sentence pair " + std::to_string(s + 1) + " has an empty " +
                      (corpus[s].source.empty() ? "source" : "target") + " side");
  }

  Ibm1Training out;
  auto& model = out.model;

  // Interned corpus.
  struct Ids {
    std::vector<std::uint32_t> e, f;
  };
  std::vector<Ids> ids(corpus.size());
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    for (const auto& w : corpus[s].source) ids[s].e.push_back(model.source_id(w));
    for (const auto& w : corpus[s].target) ids[s].f.push_back(model.target_id(w));
  }

  // Uniform over the target words co-occurring with each source word.
  std::vector<std::unordered_set<std::uint32_t>> cooc(model.source_vocab_size());
  for (const auto& p : ids)
    for (auto e : p.e) cooc[e].insert(p.f.begin(), p.f.end());
  for (std::uint32_t e = 0; e < cooc.size(); ++e)
    for (auto f : cooc[e]) model.entry(e, f) = 1.0 / static_cast<double>(cooc[e].size());

  out.log_likelihood.push_back(log_likelihood(model, corpus));

  std::unordered_map<std::uint64_t, double> counts;
  std::vector<double> totals(model.source_vocab_size());
  std::vector<double> column;
  for (std::size_t it = 0; it < iterations; ++it) {
    counts.clear();
    std::fill(totals.begin(), totals.end(), 0.0);
    for (const auto& p : ids) {
      column.resize(p.e.size());
      for (auto f : p.f) {
        double z = 0.0;
        for (std::size_t i = 0; i < p.e.size(); ++i) z += column[i] = model.prob(p.e[i], f);
        for (std::size_t i = 0; i < p.e.size(); ++i) {
          const double c = column[i] / z;
          counts[AlignmentModel::key(p.e[i], f)] += c;
          totals[p.e[i]] += c;
        }
      }
    }
    for (auto& [k, p] : model.table_) p = counts[k] / totals[k >> 32];
    out.log_likelihood.push_back(log_likelihood(model, corpus));
  }
  return out;
}

/// A(i, j) = t(f_j | e_i) / sum_i' t(f_j | e_i'); a column with no mass is uniform.
inline AlignmentMatrix posterior_alignments(const AlignmentModel& model,
                                            const std::vector<std::string>& source,
                                            const std::vector<std::string>& target) {
  AlignmentMatrix a(source.size(), target.size());
  if (source.empty()) return a;
  for (std::size_t j = 0; j < target.size(); ++j) {
    double z = 0.0;
    for (std::size_t i = 0; i < source.size(); ++i) z += a(i, j) = model.prob(source[i], target[j]);
    for (std::size_t i = 0; i < source.size(); ++i)
      a(i, j) = z > 0.0 ? a(i, j) / z : 1.0 / static_cast<double>(source.size());
  }
  return a;
}

}  // namespace deptx
