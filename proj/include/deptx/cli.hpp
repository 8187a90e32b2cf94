#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 data error.

#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "deptx/datagen.hpp"
#include "deptx/dataset_io.hpp"
#include "deptx/error.hpp"
#include "deptx/ibm1.hpp"
#include "deptx/logical_form.hpp"
#include "deptx/stats.hpp"
#include "deptx/transform.hpp"
#include "deptx/treebank.hpp"
#include "deptx/unfold.hpp"

namespace deptx::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDataError = 2;

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool quiet = false;
  bool strip_subtypes = false;
};

class Context {
 public:
  Context(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  std::ostream& err() { return err_; }
  void log(const std::string& msg) {
    if (!globals.quiet) err_ << msg << '\n';
  }

  /// "-" is standard output.
  std::ostream& open_out(const std::string& path) {
    if (path == "-" || path.empty()) return out_;
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*f) throw DataError("cannot write '" + path + "'");
    files_.push_back(std::move(f));
    return *files_.back();
  }

  Globals globals;

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::vector<std::unique_ptr<std::ofstream>> files_;
};

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = deptx::detail::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

/// Reads a whole treebank, re-throwing parse errors with the file name.
inline std::vector<DepTree> load_treebank(const std::string& path, bool strip) {
  auto in = open_in(path);
  std::vector<DepTree> trees;
  ConlluReader reader(in);
  try {
    while (auto t = reader.next()) trees.push_back(strip ? strip_subtypes(std::move(*t)) : std::move(*t));
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
  return trees;
}

/// Streams a treebank in fixed-size batches.
template <typename Fn>
void for_each_batch(const std::string& path, bool strip, std::size_t batch, Fn&& fn) {
  auto in = open_in(path);
  ConlluReader reader(in);
  std::vector<DepTree> trees;
  std::uint64_t first = 0;
  try {
    while (auto t = reader.next()) {
      trees.push_back(strip ? strip_subtypes(std::move(*t)) : std::move(*t));
      if (trees.size() == batch) {
        fn(std::span<const DepTree>(trees), first);
        first += trees.size();
        trees.clear();
      }
    }
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
  if (!trees.empty()) fn(std::span<const DepTree>(trees), first);
}

inline EdgewiseTransform load_edgewise_json(const std::string& path) {
  auto in = open_in(path);
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  EdgewiseTransform t;
  auto add = [&](const std::string& rel, const std::string& op_name) {
    auto op = parse_operation(op_name);
    if (!op) throw DataError(path + ": unknown operation '" + op_name + "'");
    try {
      t.add(rel, *op);
    } catch (const ConfigError& e) {
      throw DataError(path + ": " + e.what());
    }
  };
  // Either {"obj": "rev", ...} or [["obj", "rev"], ...].
  if (j.is_object()) {
    for (const auto& [rel, op] : j.items()) {
      if (!op.is_string()) throw DataError(path + ": operation for '" + rel + "' must be a string");
      add(rel, op.get<std::string>());
    }
  } else if (j.is_array()) {
    for (const auto& pair : j) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
        throw DataError(path + ": expected [relation, operation] pairs");
      add(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
  } else {
    throw DataError(path + ": expected a JSON object or array");
  }
  return t;
}

inline std::vector<Operation> parse_ops(const std::string& list) {
  std::vector<Operation> ops;
  for (const auto& item : split_list(list)) {
    auto op = parse_operation(item);
    if (!op) throw UsageError("unknown operation '" + item + "'");
    if (std::find(ops.begin(), ops.end(), *op) == ops.end()) ops.push_back(*op);
  }
  if (ops.empty()) throw UsageError("empty operation list");
  return ops;
}

// ---------------------------------------------------------------------------
// Subcommands

struct TransformArgs {
  std::string conllu;
  std::string edgewise;
  std::string edgewise_file;
  bool dump_tree = false;
};

inline int run_transform(Context& ctx, const TransformArgs& a) {
  EdgewiseTransform t;
  if (!a.edgewise_file.empty()) {
    if (!a.edgewise.empty()) throw UsageError("--edgewise and --edgewise-file are exclusive");
    t = load_edgewise_json(a.edgewise_file);
  } else {
    try {
      t = parse_prefix(a.edgewise);
    } catch (const ParseError& e) {
      throw UsageError(std::string("--edgewise: ") + e.what());
    }
  }
  auto& out = ctx.open_out("-");
  std::size_t invalid = 0;
  for_each_batch(a.conllu, ctx.globals.strip_subtypes, 4096,
                 [&](std::span<const DepTree> trees, std::uint64_t) {
                   for (const auto& tree : trees) {
                     auto report = validate_tree(tree);
                     if (!report.ok()) {
                       ++invalid;
                       ctx.err() << a.conllu << ": sentence " << tree.sentence_id << ": "
                                 << report.summary() << '\n';
                       out << '\n';
                       continue;
                     }
                     auto u = unfold(tree);
                     if (a.dump_tree) out << "# tree = " << to_sexpr(u) << '\n';
                     out << evaluate(annotate(std::move(u), t)) << '\n';
                   }
                 });
  return invalid ? kDataError : kOk;
}

struct GenerateArgs {
  std::string conllu;
  std::string out = "-";
  std::string format = "jsonl";
  std::size_t max_relations = 20;
  std::size_t per_sentence = 2;
  std::size_t max_in = 90;
  std::size_t max_out = 180;
  std::string ops;
  std::string op;  // generate-simple only
  std::string relations_file;
  std::string subword_counts;
  std::size_t batch = 8192;
};

inline GenConfig make_config(const Context& ctx, const GenerateArgs& a) {
  GenConfig cfg;
  cfg.max_relations = a.max_relations;
  cfg.transforms_per_sentence = a.per_sentence;
  cfg.max_input_tokens = a.max_in;
  cfg.max_output_tokens = a.max_out;
  cfg.seed = ctx.globals.seed;
  if (!a.ops.empty()) cfg.operations = parse_ops(a.ops);
  if (!a.subword_counts.empty()) cfg.counter = TokenCounter::from_subword_file(a.subword_counts);
  return cfg;
}

inline void write_instances(std::ostream& out, const std::string& format,
                            const std::vector<DatasetInstance>& instances) {
  if (format == "tsv") write_tsv(out, instances);
  else write_jsonl(out, instances);
}

inline void log_stats(Context& ctx, const std::string& what, const GenerationStats& s) {
  std::ostringstream msg;
  msg << what << ": sentences=" << s.sentences << " invalid=" << s.invalid
      << " too_long=" << s.too_long << " dropped_outputs=" << s.dropped_outputs
      << " instances=" << s.instances;
  ctx.log(msg.str());
}

enum class GenKind { kStep, kSimple, kDepParse };

inline int run_generate(Context& ctx, const GenerateArgs& a, GenKind kind) {
  if (a.format != "jsonl" && a.format != "tsv") throw UsageError("--format must be jsonl or tsv");
  GenConfig cfg;
  try {
    cfg = make_config(ctx, a);
    if (kind == GenKind::kSimple && !a.op.empty()) cfg.operations = parse_ops(a.op);
    if (kind == GenKind::kStep) {
      // Relation inventory: everything observed in the corpus plus the file.
      std::set<std::string> rels;
      for_each_batch(a.conllu, ctx.globals.strip_subtypes, a.batch,
                     [&](std::span<const DepTree> trees, std::uint64_t) {
                       for (auto& r : observed_relations(trees)) rels.insert(std::move(r));
                     });
      if (!a.relations_file.empty())
        for (auto& r : read_relation_file(a.relations_file)) rels.insert(std::move(r));
      cfg.set_relations({rels.begin(), rels.end()});
    }
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }

  auto& out = ctx.open_out(a.out);
  GenerationStats total;
  for_each_batch(a.conllu, ctx.globals.strip_subtypes, a.batch,
                 [&](std::span<const DepTree> trees, std::uint64_t first) {
                   GenerationResult r;
                   switch (kind) {
                     case GenKind::kStep:
                       r = generate_dataset(trees, cfg, ctx.globals.workers, first);
                       break;
                     case GenKind::kSimple:
                       r = generate_simple(trees, cfg, ctx.globals.workers, first);
                       break;
                     case GenKind::kDepParse:
                       r = generate_depparse(trees, cfg, ctx.globals.workers, first);
                       break;
                   }
                   write_instances(out, a.format, r.instances);
                   total += r.stats;
                 });
  out.flush();
  log_stats(ctx, kind == GenKind::kStep ? "generate" : kind == GenKind::kSimple ? "generate-simple" : "linearize", total);
  return kOk;
}

inline int run_linearize(Context& ctx, const std::string& conllu, const GenerateArgs& a) {
  if (!a.out.empty() && a.out != "-") {
    GenerateArgs b = a;
    b.conllu = conllu;
    return run_generate(ctx, b, GenKind::kDepParse);
  }
  auto& out = ctx.open_out("-");
  std::size_t invalid = 0;
  for_each_batch(conllu, ctx.globals.strip_subtypes, 4096,
                 [&](std::span<const DepTree> trees, std::uint64_t) {
                   for (const auto& tree : trees) {
                     auto report = validate_tree(tree);
                     if (!report.ok()) {
                       ++invalid;
                       ctx.err() << conllu << ": sentence " << tree.sentence_id << ": "
                                 << report.summary() << '\n';
                       out << '\n';
                       continue;
                     }
                     out << linearize_dep_tree(tree) << '\n';
                   }
                 });
  return invalid ? kDataError : kOk;
}

struct StatsArgs {
  std::string conllu;
  std::string relations = "nmod,xcomp";
  std::string csv = "-";
  std::string summary;
  bool per_edge = false;
};

inline int run_stats(Context& ctx, const StatsArgs& a) {
  auto trees = load_treebank(a.conllu, ctx.globals.strip_subtypes);
  std::vector<DepTree> valid;
  valid.reserve(trees.size());
  for (auto& t : trees) {
    auto report = validate_tree(t);
    if (report.ok()) valid.push_back(std::move(t));
    else ctx.err() << a.conllu << ": skipping sentence " << t.sentence_id << ": " << report.summary() << '\n';
  }
  const auto mode = a.per_edge ? DepthCounting::kPerEdge : DepthCounting::kMaximalChain;
  std::vector<DepthHistogram> hists;
  for (const auto& rel : split_list(a.relations)) hists.push_back(recursion_depth_histogram(valid, rel, mode));
  write_histogram_csv(ctx.open_out(a.csv), hists);
  if (!a.summary.empty()) {
    auto j = stats_summary(valid);
    j["invalid_sentences"] = trees.size() - valid.size();
    ctx.open_out(a.summary) << j.dump(2) << '\n';
  }
  return kOk;
}

inline int run_validate(Context& ctx, const std::string& conllu) {
  auto& out = ctx.open_out("-");
  std::size_t invalid = 0, total = 0;
  for_each_batch(conllu, ctx.globals.strip_subtypes, 4096,
                 [&](std::span<const DepTree> trees, std::uint64_t) {
                   for (const auto& tree : trees) {
                     ++total;
                     auto report = validate_tree(tree);
                     if (report.ok()) {
                       out << tree.sentence_id << "\tok\t"
                           << (is_projective(tree) ? "projective" : "non-projective") << '\n';
                     } else {
                       ++invalid;
                       out << tree.sentence_id << "\tinvalid\t" << report.summary() << '\n';
                     }
                   }
                 });
  ctx.log("validate: sentences=" + std::to_string(total) + " invalid=" + std::to_string(invalid));
  return invalid ? kDataError : kOk;
}

struct AtisArgs {
  std::string src;
  std::string lf;
  std::string tsv;
  std::string out = "-";
  std::size_t iters = 10;
  std::string conj_ops = "and,or,intersection";
  bool top_level_only = false;
};

inline int run_atis_reorder(Context& ctx, const AtisArgs& a) {
  std::vector<std::string> src_lines, lf_lines;
  std::string where;
  if (!a.tsv.empty()) {
    if (!a.src.empty() || !a.lf.empty()) throw UsageError("--tsv excludes --src/--lf");
    for (auto& line : read_lines(a.tsv)) {
      auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw DataError(a.tsv + ":" + std::to_string(src_lines.size() + 1) + ": expected source<TAB>logical form");
      src_lines.push_back(line.substr(0, tab));
      lf_lines.push_back(line.substr(tab + 1));
    }
    where = a.tsv;
  } else {
    if (a.src.empty() || a.lf.empty()) throw UsageError("atis-reorder needs --src and --lf, or --tsv");
    src_lines = read_lines(a.src);
    lf_lines = read_lines(a.lf);
    if (src_lines.size() != lf_lines.size())
      throw DataError(a.src + " has " + std::to_string(src_lines.size()) + " lines but " + a.lf +
                      " has " + std::to_string(lf_lines.size()));
    where = a.lf;
  }
  if (a.iters < 1) throw UsageError("--iters must be >= 1");

  std::vector<SentencePair> corpus;
  std::vector<LogicalForm> forms;
  for (std::size_t k = 0; k < src_lines.size(); ++k) {
    SentencePair p{tokenize_lf(src_lines[k]), tokenize_lf(lf_lines[k])};
    if (p.source.empty() || p.target.empty())
      throw DataError(where + ":" + std::to_string(k + 1) + ": empty sentence or logical form");
    try {
      forms.push_back(parse_logical_form(lf_lines[k]));
    } catch (const ParseError& e) {
      throw DataError(where + ":" + std::to_string(k + 1) + ": " + e.what());
    }
    p.target = render_tokens(forms.back());
    corpus.push_back(std::move(p));
  }
  if (corpus.empty()) throw DataError(where + ": no sentence pairs");

  auto trained = train_ibm1(corpus, a.iters);
  ctx.log("atis-reorder: log-likelihood " + std::to_string(trained.log_likelihood.front()) + " -> " +
          std::to_string(trained.log_likelihood.back()));

  auto ops_list = split_list(a.conj_ops);
  std::set<std::string> ops(ops_list.begin(), ops_list.end());
  const auto scope = a.top_level_only ? ReorderScope::kOutermost : ReorderScope::kRecursive;
  auto& out = ctx.open_out(a.out);
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    auto posterior = posterior_alignments(trained.model, corpus[k].source, corpus[k].target);
    out << render(reorder_conjuncts(forms[k], posterior, ops, scope)) << '\n';
  }
  return kOk;
}

inline int run_slog_compare(Context& ctx, const std::string& path_a, const std::string& path_b) {
  auto a = read_lines(path_a);
  auto b = read_lines(path_b);
  if (a.size() != b.size())
    throw DataError(path_a + " has " + std::to_string(a.size()) + " lines but " + path_b + " has " +
                    std::to_string(b.size()));
  auto& out = ctx.open_out("-");
  bool all = true;
  for (std::size_t k = 0; k < a.size(); ++k) {
    bool eq;
    try {
      eq = slog_equivalent(a[k], b[k]);
    } catch (const ParseError& e) {
      throw DataError("line " + std::to_string(k + 1) + " (" + path_a + " / " + path_b + "): " + e.what());
    }
    all = all && eq;
    out << (eq ? "true" : "false") << '\n';
  }
  return all ? kOk : kDataError;
}

inline int run_strip_nmod(Context& ctx, const std::string& lf, const std::string& out_path) {
  auto& out = ctx.open_out(out_path);
  for (const auto& line : read_lines(lf)) out << strip_nmod(line) << '\n';
  return kOk;
}

}  // namespace detail

/// Entry point. Output goes to `out`, diagnostics and logs to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  using namespace detail;
  Context ctx(out, err);

  CLI::App app{"Syntactic transformations over Universal Dependencies trees", "deptx"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", ctx.globals.seed, "Random seed")->capture_default_str();
  app.add_option("--workers", ctx.globals.workers, "Worker threads for dataset generation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", ctx.globals.quiet, "Suppress log messages");
  app.add_flag("--strip-subtypes", ctx.globals.strip_subtypes,
               "Map relation subtypes to their base relation (acl:relcl -> acl)");

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Apply an edgewise transformation to every sentence");
  transform->add_option("--conllu", ta.conllu, "Input treebank")->required();
  transform->add_option("--edgewise", ta.edgewise, "Pairs like \"obj=rev,nsubj=bracket\"");
  transform->add_option("--edgewise-file", ta.edgewise_file, "JSON object or [[rel, op], ...] array");
  transform->add_flag("--dump-tree", ta.dump_tree, "Print each unfolded tree before its output");

  GenerateArgs ga;
  auto add_gen_options = [](CLI::App* cmd, GenerateArgs& g, bool step) {
    cmd->add_option("--conllu", g.conllu, "Input treebank")->required();
    cmd->add_option("--out", g.out, "Output file ('-' for stdout)")->capture_default_str();
    cmd->add_option("--format", g.format, "jsonl or tsv")->capture_default_str();
    cmd->add_option("--per-sentence", g.per_sentence, "Instances per sentence")->capture_default_str();
    cmd->add_option("--max-in", g.max_in, "Skip sentences with more tokens")->capture_default_str();
    cmd->add_option("--ops", g.ops, "Operation inventory (comma-separated, default all 14)");
    cmd->add_option("--subword-counts", g.subword_counts, "word<TAB>count file for length limits");
    if (step) {
      cmd->add_option("--max-relations", g.max_relations, "Maximum prefix length")->capture_default_str();
      cmd->add_option("--max-out", g.max_out, "Drop outputs with this many tokens or more")
          ->capture_default_str();
      cmd->add_option("--relations-file", g.relations_file, "Extra relations, one per line");
    }
  };
  auto* generate = app.add_subcommand("generate", "Write a step-mode pre-training dataset");
  add_gen_options(generate, ga, true);

  GenerateArgs sa;
  auto* simple = app.add_subcommand("generate-simple", "Write a simple-mode dataset");
  add_gen_options(simple, sa, false);
  simple->add_option("--op", sa.op, "Use only this operation");

  std::string lin_conllu;
  GenerateArgs la;
  la.out.clear();
  auto* linearize = app.add_subcommand("linearize", "Print linearized dependency trees");
  linearize->add_option("--conllu", lin_conllu, "Input treebank")->required();
  linearize->add_option("--out", la.out, "Write a depparse-mode dataset here instead");
  linearize->add_option("--format", la.format, "jsonl or tsv (with --out)")->capture_default_str();
  linearize->add_option("--max-in", la.max_in, "Skip sentences with more tokens (with --out)")
      ->capture_default_str();

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Recursion-depth histograms and corpus summary");
  stats->add_option("--conllu", st.conllu, "Input treebank")->required();
  stats->add_option("--relations", st.relations, "Relations to histogram")->capture_default_str();
  stats->add_option("--csv", st.csv, "CSV output ('-' for stdout)")->capture_default_str();
  stats->add_option("--summary", st.summary, "Summary JSON output");
  stats->add_flag("--per-edge", st.per_edge, "Count every edge at its depth instead of maximal chains");

  std::string val_conllu;
  auto* validate = app.add_subcommand("validate", "Check every tree and report projectivity");
  validate->add_option("--conllu", val_conllu, "Input treebank")->required();

  AtisArgs aa;
  auto* atis = app.add_subcommand("atis-reorder", "Sort conjuncts by IBM-1 expected alignment");
  atis->add_option("--src", aa.src, "Tokenized sentences, one per line");
  atis->add_option("--lf", aa.lf, "Logical forms, one per line");
  atis->add_option("--tsv", aa.tsv, "sentence<TAB>logical form pairs");
  atis->add_option("--out", aa.out, "Output file ('-' for stdout)")->capture_default_str();
  atis->add_option("--iters", aa.iters, "EM iterations")->capture_default_str();
  atis->add_option("--conj-ops", aa.conj_ops, "Conjunction operators")->capture_default_str();
  atis->add_flag("--top-level-only", aa.top_level_only, "Only reorder outermost conjunctions");

  std::string cmp_a, cmp_b;
  auto* compare = app.add_subcommand("slog-compare", "Compare SLOG forms line by line, ignoring role order");
  compare->add_option("--a", cmp_a, "First file")->required();
  compare->add_option("--b", cmp_b, "Second file")->required();

  std::string nmod_lf, nmod_out = "-";
  auto* nmod = app.add_subcommand("strip-nmod", "Remove 'nmod .' role prefixes from SLOG forms");
  nmod->add_option("--lf", nmod_lf, "Logical forms, one per line")->required();
  nmod->add_option("--out", nmod_out, "Output file ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*transform) return run_transform(ctx, ta);
    if (*generate) return run_generate(ctx, ga, GenKind::kStep);
    if (*simple) return run_generate(ctx, sa, GenKind::kSimple);
    if (*linearize) return run_linearize(ctx, lin_conllu, la);
    if (*stats) return run_stats(ctx, st);
    if (*validate) return run_validate(ctx, val_conllu);
    if (*atis) return run_atis_reorder(ctx, aa);
    if (*compare) return run_slog_compare(ctx, cmp_a, cmp_b);
    if (*nmod) return run_strip_nmod(ctx, nmod_lf, nmod_out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<const char*> argv{"deptx"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace deptx::cli
