#pragma once

// Random syntactic transformations and the pre-training datasets built from
// them: step mode (sampled edgewise transforms), simple mode (one operation
// for every relation) and depparse mode (linearized trees).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "deptx/error.hpp"
#include "deptx/operation.hpp"
#include "deptx/random.hpp"
#include "deptx/transform.hpp"
#include "deptx/treebank.hpp"

namespace deptx {

/// Counts tokens of a whitespace-separated string. With a subword table each
/// word costs its listed count (unlisted words cost `unknown_cost`),
/// otherwise every word costs 1.
class TokenCounter {
 public:
  TokenCounter() = default;

  static TokenCounter whitespace() { return {}; }

  /// Reads "word<TAB>count" lines.
  static TokenCounter from_subword_file(const std::string& path, std::size_t unknown_cost = 1) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open subword count file '" + path + "'");
    TokenCounter c;
    c.unknown_cost_ = unknown_cost;
    c.table_.emplace();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto tab = line.rfind('\t');
      if (tab == std::string::npos) throw ParseError("expected word<TAB>count", line_no);
      auto count = detail::to_int(std::string_view(line).substr(tab + 1));
      if (!count || *count < 0) throw ParseError("bad subword count", line_no);
      (*c.table_)[line.substr(0, tab)] = static_cast<std::size_t>(*count);
    }
    return c;
  }

  void set(std::string word, std::size_t count) {
    if (!table_) table_.emplace();
    (*table_)[std::move(word)] = count;
  }

  bool subword() const noexcept { return table_.has_value(); }

  std::size_t count(std::string_view text) const {
    std::size_t total = 0;
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && is_space(text[i])) ++i;
      std::size_t start = i;
      while (i < text.size() && !is_space(text[i])) ++i;
      if (i > start) total += cost(text.substr(start, i - start));
    }
    return total;
  }

  std::size_t count(const std::vector<std::string>& words) const {
    std::size_t total = 0;
    for (const auto& w : words) total += cost(w);
    return total;
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  std::size_t cost(std::string_view word) const {
    if (!table_) return 1;
    auto it = table_->find(std::string(word));
    return it == table_->end() ? unknown_cost_ : it->second;
  }

  std::optional<std::unordered_map<std::string, std::size_t>> table_;
  std::size_t unknown_cost_ = 1;
};

struct GenConfig {
  std::size_t max_relations = 20;
  std::size_t transforms_per_sentence = 2;
  /// Sentences with more tokens than this are skipped.
  std::size_t max_input_tokens = 90;
  /// Step-mode outputs with this many tokens or more are dropped.
  std::size_t max_output_tokens = 180;
  std::vector<Operation> operations{kAllOperations.begin(), kAllOperations.end()};
  /// Relations that may appear in prefixes. Sorted, duplicate-free.
  std::vector<std::string> relations;
  std::uint64_t seed = 0;
  TokenCounter counter;

  void validate() const {
    if (max_relations < 1) throw ConfigError("max_relations must be >= 1");
    if (transforms_per_sentence < 1) throw ConfigError("transforms_per_sentence must be >= 1");
    if (max_input_tokens < 1 || max_output_tokens < 1) throw ConfigError("length limits must be >= 1");
    if (operations.empty()) throw ConfigError("operation inventory is empty");
  }

  void set_relations(std::vector<std::string> rels) {
    std::sort(rels.begin(), rels.end());
    rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
    relations = std::move(rels);
  }
};

/// Relations carried by non-root edges, sorted and duplicate-free.
inline std::vector<std::string> edge_relations(const DepTree& tree) {
  std::vector<std::string> out;
  for (const auto& tok : tree.tokens)
    if (tok.head != 0) out.push_back(tok.deprel);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Union of edge_relations over a corpus (the default relation inventory).
inline std::vector<std::string> observed_relations(std::span<const DepTree> corpus) {
  std::set<std::string> seen;
  for (const auto& tree : corpus)
    for (const auto& tok : tree.tokens)
      if (tok.head != 0 && !tok.deprel.empty()) seen.insert(tok.deprel);
  return {seen.begin(), seen.end()};
}

/// Relations listed one per line; blank lines and '#' comments ignored.
inline std::vector<std::string> read_relation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open relation file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

/// Two-stage draw: k_p of the sentence's relations (at least one when any
/// exist), then k_a relations absent from the sentence, up to max_relations
/// in total; each gets a uniformly drawn operation. Present relations come
/// first in the result.
inline EdgewiseTransform sample_transformation(const DepTree& tree, RandomStream& rng,
                                               const GenConfig& cfg) {
  if (cfg.relations.empty()) throw ConfigError("relation inventory is empty");
  if (cfg.operations.empty()) throw ConfigError("operation inventory is empty");

  std::vector<std::string> present;
  std::vector<std::string> absent;
  {
    auto in_tree = edge_relations(tree);
    for (const auto& rel : cfg.relations) {
      if (std::binary_search(in_tree.begin(), in_tree.end(), rel)) present.push_back(rel);
      else absent.push_back(rel);
    }
  }

  std::size_t k_present = 0;
  if (!present.empty())
    k_present = rng.uniform(1, std::min(present.size(), cfg.max_relations));
  const std::size_t k_absent =
      rng.uniform(0, std::min(cfg.max_relations - k_present, absent.size()));

  rng.partial_shuffle(present, k_present);
  rng.partial_shuffle(absent, k_absent);

  EdgewiseTransform t;
  for (std::size_t i = 0; i < k_present; ++i)
    t.add(present[i], cfg.operations[rng.index(cfg.operations.size())]);
  for (std::size_t i = 0; i < k_absent; ++i)
    t.add(absent[i], cfg.operations[rng.index(cfg.operations.size())]);
  return t;
}

// ---------------------------------------------------------------------------
// Prefix serialization: "obj=rev nsubj=bracket"

inline std::vector<std::string> serialize_prefix(const EdgewiseTransform& t) {
  auto bad = [](std::string_view s) {
    return s.empty() || s.find_first_of("= \t\n\r,") != std::string_view::npos;
  };
  std::vector<std::string> out;
  out.reserve(t.size());
  for (const auto& [rel, op] : t.pairs()) {
    if (bad(rel)) throw DataError("relation '" + rel + "' cannot be serialized in a prefix");
    out.push_back(rel + "=" + std::string(name(op)));
  }
  return out;
}

/// Inverse of serialize_prefix. Pairs may be separated by whitespace or commas.
inline EdgewiseTransform parse_prefix(std::string_view text) {
  EdgewiseTransform t;
  std::size_t i = 0;
  auto sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\n' || c == '\r'; };
  while (i < text.size()) {
    while (i < text.size() && sep(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !sep(text[i])) ++i;
    if (i == start) break;
    auto item = text.substr(start, i - start);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || item.find('=', eq + 1) != std::string_view::npos)
      throw ParseError("bad edgewise pair '" + std::string(item) + "' (expected rel=op)");
    auto op = parse_operation(item.substr(eq + 1));
    if (!op) throw ParseError("unknown operation '" + std::string(item.substr(eq + 1)) + "'");
    try {
      t.add(std::string(item.substr(0, eq)), *op);
    } catch (const ConfigError& e) {
      throw ParseError(e.what());
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Dependency-tree linearization

/// "( head rel1 dep1 ... relm depm )" with dependents in surface order;
/// a token without dependents renders as its form.
inline std::string linearize_dep_tree(const DepTree& tree) {
  require_valid(tree, "linearize_dep_tree");
  const auto deps = dependents(tree);
  std::vector<int> order{deps[0].front()};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int d : deps[static_cast<std::size_t>(order[i])]) order.push_back(d);

  std::vector<std::string> text(tree.size() + 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int h = *it;
    const auto& kids = deps[static_cast<std::size_t>(h)];
    if (kids.empty()) {
      text[static_cast<std::size_t>(h)] = tree.at(h).form;
      continue;
    }
    std::string s = "( " + tree.at(h).form;
    for (int d : kids) {
      s += ' ';
      s += tree.at(d).deprel;
      s += ' ';
      s += text[static_cast<std::size_t>(d)];
      std::string().swap(text[static_cast<std::size_t>(d)]);
    }
    s += " )";
    text[static_cast<std::size_t>(h)] = std::move(s);
  }
  return text[static_cast<std::size_t>(order.front())];
}

// ---------------------------------------------------------------------------
// Datasets

enum class DataMode { kStep, kSimple, kDepParse };

inline std::string_view to_string(DataMode m) {
  switch (m) {
    case DataMode::kStep: return "step";
    case DataMode::kSimple: return "simple";
    case DataMode::kDepParse: return "depparse";
  }
  return "?";
}

/// Relation name standing for "every relation" in simple-mode prefixes.
inline constexpr std::string_view kAllRelations = "*";

struct DatasetInstance {
  EdgewiseTransform prefix;
  std::vector<std::string> input;
  std::string output;
  std::string sent_id;
  DataMode mode = DataMode::kStep;
  bool projective = true;

  bool operator==(const DatasetInstance&) const = default;
};

/// The transform a simple-mode prefix stands for on `tree`.
inline EdgewiseTransform expand_simple(const DepTree& tree, Operation op) {
  EdgewiseTransform t;
  for (const auto& rel : edge_relations(tree)) t.add(rel, op);
  return t;
}

struct GenerationStats {
  std::size_t sentences = 0;
  std::size_t invalid = 0;
  std::size_t too_long = 0;         // input over max_input_tokens
  std::size_t dropped_outputs = 0;  // output at or over max_output_tokens
  std::size_t instances = 0;

  GenerationStats& operator+=(const GenerationStats& o) {
    sentences += o.sentences;
    invalid += o.invalid;
    too_long += o.too_long;
    dropped_outputs += o.dropped_outputs;
    instances += o.instances;
    return *this;
  }
};

struct GenerationResult {
  std::vector<DatasetInstance> instances;
  GenerationStats stats;
};

namespace detail {

struct SentenceOutput {
  std::vector<DatasetInstance> instances;
  GenerationStats stats;
};

using SentenceFn =
    std::function<void(const DepTree&, RandomStream&, SentenceOutput&)>;

// Runs `fn` on every tree, each with the stream split(seed, first_ordinal + i),
// and concatenates the results in corpus order.
inline GenerationResult run_parallel(std::span<const DepTree> corpus, const GenConfig& cfg,
                                     std::size_t workers, std::uint64_t first_ordinal,
                                     const SentenceFn& fn) {
  std::vector<SentenceOutput> per(corpus.size());
  auto work = [&](std::size_t i) {
    auto& slot = per[i];
    slot.stats.sentences = 1;
    if (!validate_tree(corpus[i]).ok()) {
      slot.stats.invalid = 1;
      return;
    }
    if (cfg.counter.count(forms(corpus[i])) > cfg.max_input_tokens) {
      slot.stats.too_long = 1;
      return;
    }
    auto rng = RandomStream::split(cfg.seed, first_ordinal + i);
    fn(corpus[i], rng, slot);
  };

  workers = std::max<std::size_t>(1, std::min(workers, corpus.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < corpus.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < corpus.size();) work(i);
        } catch (...) {
          errors[w] = std::current_exception();
          next = corpus.size();
        }
      });
    }
    pool.clear();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  GenerationResult result;
  for (auto& slot : per) {
    result.stats += slot.stats;
    for (auto& inst : slot.instances) result.instances.push_back(std::move(inst));
  }
  result.stats.instances = result.instances.size();
  return result;
}

}  // namespace detail

/// Step mode. `first_ordinal` is the corpus position of `corpus[0]`, so a
/// corpus processed in batches yields the same stream as a single call.
inline GenerationResult generate_dataset(std::span<const DepTree> corpus, const GenConfig& cfg,
                                         std::size_t workers = 1,
                                         std::uint64_t first_ordinal = 0) {
  cfg.validate();
  return detail::run_parallel(
      corpus, cfg, workers, first_ordinal,
      [&cfg](const DepTree& tree, RandomStream& rng, detail::SentenceOutput& out) {
        const bool projective = is_projective(tree);
        for (std::size_t k = 0; k < cfg.transforms_per_sentence; ++k) {
          auto t = sample_transformation(tree, rng, cfg);
          auto output = apply_transformation(tree, t);
          if (cfg.counter.count(output) >= cfg.max_output_tokens) {
            ++out.stats.dropped_outputs;
            continue;
          }
          out.instances.push_back({std::move(t), forms(tree), std::move(output), tree.sentence_id,
                                   DataMode::kStep, projective});
        }
      });
}

/// Simple mode: one operation (never ignore-dep) for every relation of the
/// sentence. No output length filter.
inline GenerationResult generate_simple(std::span<const DepTree> corpus, const GenConfig& cfg,
                                        std::size_t workers = 1,
                                        std::uint64_t first_ordinal = 0) {
  std::vector<Operation> ops;
  for (auto op : cfg.operations)
    if (op != Operation::kIgnoreDep) ops.push_back(op);
  if (ops.empty()) throw ConfigError("simple mode needs an operation other than ignore-dep");
  if (cfg.transforms_per_sentence < 1) throw ConfigError("transforms_per_sentence must be >= 1");
  if (cfg.max_input_tokens < 1) throw ConfigError("length limits must be >= 1");

  return detail::run_parallel(
      corpus, cfg, workers, first_ordinal,
      [&cfg, &ops](const DepTree& tree, RandomStream& rng, detail::SentenceOutput& out) {
        const bool projective = is_projective(tree);
        for (std::size_t k = 0; k < cfg.transforms_per_sentence; ++k) {
          const Operation op = ops[rng.index(ops.size())];
          auto output = apply_transformation(tree, expand_simple(tree, op));
          EdgewiseTransform prefix;
          prefix.add(std::string(kAllRelations), op);
          out.instances.push_back({std::move(prefix), forms(tree), std::move(output),
                                   tree.sentence_id, DataMode::kSimple, projective});
        }
      });
}

/// Depparse mode: one instance per sentence, output is the linearized tree.
inline GenerationResult generate_depparse(std::span<const DepTree> corpus, const GenConfig& cfg,
                                          std::size_t workers = 1,
                                          std::uint64_t first_ordinal = 0) {
  if (cfg.max_input_tokens < 1) throw ConfigError("length limits must be >= 1");
  return detail::run_parallel(
      corpus, cfg, workers, first_ordinal,
      [](const DepTree& tree, RandomStream&, detail::SentenceOutput& out) {
        out.instances.push_back({{}, forms(tree), linearize_dep_tree(tree), tree.sentence_id,
                                 DataMode::kDepParse, is_projective(tree)});
      });
}

/// Recomputes an instance's output from its source tree.
inline std::string recompute_output(const DepTree& tree, const DatasetInstance& inst) {
  switch (inst.mode) {
    case DataMode::kStep: return apply_transformation(tree, inst.prefix);
    case DataMode::kSimple:
      if (inst.prefix.size() != 1 || inst.prefix.pairs().front().first != kAllRelations)
        throw DataError("simple-mode prefix must be a single '*=op' pair");
      return apply_transformation(tree, expand_simple(tree, inst.prefix.pairs().front().second));
    case DataMode::kDepParse: return linearize_dep_tree(tree);
  }
  return {};
}

}  // namespace deptx
