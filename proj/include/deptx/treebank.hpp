#pragma once

// CoNLL-U ingestion, tree validation and projectivity.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "deptx/error.hpp"

namespace deptx {

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::optional<std::string> upos;
  int head = 0;  // 0 = root
  std::string deprel;

  bool operator==(const Token&) const = default;
};

struct DepTree {
  std::string sentence_id;
  std::vector<Token> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }

  // 1-based access.
  const Token& at(int index) const { return tokens.at(static_cast<std::size_t>(index - 1)); }

  bool operator==(const DepTree&) const = default;
};

/// Dependents of each token, in surface order. Slot 0 holds the root(s).
inline std::vector<std::vector<int>> dependents(const DepTree& tree) {
  std::vector<std::vector<int>> out(tree.size() + 1);
  for (const auto& tok : tree.tokens) {
    if (tok.head >= 0 && static_cast<std::size_t>(tok.head) <= tree.size())
      out[static_cast<std::size_t>(tok.head)].push_back(tok.index);
  }
  return out;
}

inline std::vector<std::string> forms(const DepTree& tree) {
  std::vector<std::string> out;
  out.reserve(tree.size());
  for (const auto& tok : tree.tokens) out.push_back(tok.form);
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  kEmptyTree,
  kBadIndex,       // indices not contiguous 1..n
  kSelfLoop,       // head == index
  kHeadOutOfRange,
  kEmptyForm,
  kEmptyDeprel,
  kNoRoot,
  kMultipleRoots,
  kCycle,
};

inline std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kEmptyTree: return "empty tree";
    case ViolationKind::kBadIndex: return "non-contiguous index";
    case ViolationKind::kSelfLoop: return "self loop";
    case ViolationKind::kHeadOutOfRange: return "head out of range";
    case ViolationKind::kEmptyForm: return "empty form";
    case ViolationKind::kEmptyDeprel: return "empty deprel";
    case ViolationKind::kNoRoot: return "no root";
    case ViolationKind::kMultipleRoots: return "multiple roots";
    case ViolationKind::kCycle: return "cycle";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  int token = 0;  // offending token, 0 if tree-level
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
  }
  std::string summary() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v.message;
    }
    return out;
  }
};

inline ValidationReport validate_tree(const DepTree& tree) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, int token, std::string detail = {}) {
    std::string msg(to_string(kind));
    if (token) msg += " at token " + std::to_string(token);
    if (!detail.empty()) msg += " (" + detail + ")";
    report.violations.push_back({kind, token, std::move(msg)});
  };

  const int n = static_cast<int>(tree.size());
  if (n == 0) {
    add(ViolationKind::kEmptyTree, 0);
    return report;
  }

  bool heads_usable = true;
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& tok = tree.tokens[static_cast<std::size_t>(i)];
    if (tok.index != i + 1) {
      add(ViolationKind::kBadIndex, tok.index, "expected " + std::to_string(i + 1));
      heads_usable = false;
    }
    if (tok.form.empty()) add(ViolationKind::kEmptyForm, tok.index);
    if (tok.deprel.empty()) add(ViolationKind::kEmptyDeprel, tok.index);
    if (tok.head == tok.index) {
      add(ViolationKind::kSelfLoop, tok.index);
      heads_usable = false;
    } else if (tok.head < 0 || tok.head > n) {
      add(ViolationKind::kHeadOutOfRange, tok.index, "head " + std::to_string(tok.head));
      heads_usable = false;
    }
    if (tok.head == 0) ++roots;
  }
  if (roots == 0) add(ViolationKind::kNoRoot, 0);
  if (roots > 1) add(ViolationKind::kMultipleRoots, 0, std::to_string(roots) + " roots");

  if (heads_usable) {
    // Every token must reach 0 within n steps.
    for (int i = 1; i <= n; ++i) {
      int cur = i;
      int steps = 0;
      while (cur != 0 && steps <= n) {
        cur = tree.tokens[static_cast<std::size_t>(cur - 1)].head;
        ++steps;
      }
      if (cur != 0) {
        add(ViolationKind::kCycle, i);
        break;
      }
    }
  }
  return report;
}

inline void require_valid(const DepTree& tree, std::string_view op) {
  auto report = validate_tree(tree);
  if (!report.ok())
    throw PreconditionError(std::string(op) + ": invalid tree '" + tree.sentence_id +
                            "': " + report.summary());
}

// ---------------------------------------------------------------------------
// Projectivity

namespace detail {

// True iff `node` lies in the subtree rooted at `ancestor` (a node dominates itself).
inline bool dominates(const DepTree& tree, int ancestor, int node) {
  while (node != 0) {
    if (node == ancestor) return true;
    node = tree.at(node).head;
  }
  return ancestor == 0;
}

}  // namespace detail

/// No two arcs cross: for every edge (h, d) each token strictly between them
/// is dominated by h.
inline bool is_projective(const DepTree& tree) {
  require_valid(tree, "is_projective");
  for (const auto& tok : tree.tokens) {
    const int h = tok.head;
    const int d = tok.index;
    if (h == 0) continue;
    for (int k = std::min(h, d) + 1; k < std::max(h, d); ++k)
      if (!detail::dominates(tree, h, k)) return false;
  }
  return true;
}

/// Map "acl:relcl" -> "acl" on every token.
inline DepTree strip_subtypes(DepTree tree) {
  for (auto& tok : tree.tokens) {
    auto colon = tok.deprel.find(':');
    if (colon != std::string::npos) tok.deprel.resize(colon);
  }
  return tree;
}

// ---------------------------------------------------------------------------
// CoNLL-U reading

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

inline std::optional<int> to_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Streaming CoNLL-U reader. Yields sentences in file order.
class ConlluReader {
 public:
  explicit ConlluReader(std::istream& in) : in_(in) {}

  /// Next sentence, or nullopt at end of input. Throws ParseError.
  std::optional<DepTree> next() {
    DepTree tree;
    bool in_block = false;
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || detail::trim(line).empty()) {
        if (in_block) return finish(std::move(tree));
        continue;
      }
      in_block = true;
      if (line[0] == '#') {
        read_comment(line, tree);
        continue;
      }
      read_token_line(line, tree);
    }
    if (in_block) return finish(std::move(tree));
    return std::nullopt;
  }

  std::size_t line_number() const noexcept { return line_no_; }

 private:
  static void read_comment(std::string_view line, DepTree& tree) {
    auto body = detail::trim(line.substr(1));
    constexpr std::string_view key = "sent_id";
    if (body.substr(0, key.size()) != key) return;
    auto after = body.substr(key.size());
    if (!after.empty() && after.front() != '=' && after.front() != ' ' && after.front() != '\t')
      return;  // e.g. "sent_idx"
    auto rest = detail::trim(after);
    if (!rest.empty() && rest.front() == '=') rest = detail::trim(rest.substr(1));
    tree.sentence_id = std::string(rest);
  }

  void read_token_line(std::string_view line, DepTree& tree) {
    auto cols = detail::split_tabs(line);
    if (cols.size() != 10)
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()),
                       line_no_);
    auto id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos)
      return;  // multiword range or empty node
    auto index = detail::to_int(id);
    if (!index) throw ParseError("non-integer ID '" + std::string(id) + "'", line_no_);
    auto head = detail::to_int(cols[6]);
    if (!head) throw ParseError("non-integer HEAD '" + std::string(cols[6]) + "'", line_no_);

    Token tok;
    tok.index = *index;
    tok.form = std::string(cols[1]);
    tok.lemma = cols[2] == "_" ? tok.form : std::string(cols[2]);
    if (cols[3] != "_") tok.upos = std::string(cols[3]);
    tok.head = *head;
    tok.deprel = cols[7] == "_" ? std::string() : std::string(cols[7]);
    tree.tokens.push_back(std::move(tok));
  }

  DepTree finish(DepTree tree) {
    ++sentences_;
    if (tree.sentence_id.empty()) tree.sentence_id = std::to_string(sentences_);
    return tree;
  }

  std::istream& in_;
  std::size_t line_no_ = 0;
  std::size_t sentences_ = 0;
};

inline std::vector<DepTree> parse_conllu(std::istream& in) {
  std::vector<DepTree> out;
  ConlluReader reader(in);
  while (auto tree = reader.next()) out.push_back(std::move(*tree));
  return out;
}

inline std::vector<DepTree> parse_conllu(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in);
}

/// Writes the retained fields back as CoNLL-U; unretained columns become "_".
inline void write_conllu(std::ostream& out, const DepTree& tree) {
  out << "# sent_id = " << tree.sentence_id << '\n';
  for (const auto& tok : tree.tokens) {
    out << tok.index << '\t' << tok.form << '\t' << tok.lemma << '\t'
        << (tok.upos ? *tok.upos : "_") << "\t_\t_\t" << tok.head << '\t'
        << (tok.deprel.empty() ? "_" : tok.deprel) << "\t_\t_\n";
  }
  out << '\n';
}

inline std::string serialize_conllu(const std::vector<DepTree>& trees) {
  std::ostringstream out;
  for (const auto& t : trees) write_conllu(out, t);
  return out.str();
}

}  // namespace deptx
