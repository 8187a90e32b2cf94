#pragma once

// Whitespace-tokenized logical forms (FunQL and variable-free SLOG):
//
//   term     := ["*"] word+ [ "(" argument ("," argument)* ")" ]
//   argument := [word+ "="] term
//
// where a word is any token other than "(", ")", "," and "=".

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "deptx/error.hpp"
#include "deptx/ibm1.hpp"

namespace deptx {

struct LfArgument;

struct LogicalForm {
  bool definite = false;  // leading "*" marker
  std::vector<std::string> name;
  bool has_args = false;
  std::vector<LfArgument> args;

  std::string head() const {
    std::string out;
    for (const auto& w : name) {
      if (!out.empty()) out += ' ';
      out += w;
    }
    return out;
  }

  bool operator==(const LogicalForm&) const;
};

struct LfArgument {
  std::vector<std::string> role;  // empty for positional (FunQL) arguments
  LogicalForm value;

  bool operator==(const LfArgument&) const = default;
};

inline bool LogicalForm::operator==(const LogicalForm& o) const {
  return definite == o.definite && name == o.name && has_args == o.has_args && args == o.args;
}

inline std::vector<std::string> tokenize_lf(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < text.size()) {
    while (i < text.size() && space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

namespace detail {

inline bool lf_special(std::string_view tok) {
  return tok == "(" || tok == ")" || tok == "," || tok == "=";
}

class LfParser {
 public:
  explicit LfParser(std::vector<std::string> tokens) : toks_(std::move(tokens)) {}

  LogicalForm parse() {
    if (toks_.empty()) fail("empty logical form");
    auto lf = term();
    if (pos_ != toks_.size()) fail("unexpected '" + toks_[pos_] + "'");
    return lf;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at token " + std::to_string(pos_ + 1));
  }

  bool at(std::string_view tok) const { return pos_ < toks_.size() && toks_[pos_] == tok; }
  bool at_word() const { return pos_ < toks_.size() && !lf_special(toks_[pos_]); }

  std::vector<std::string> words() {
    std::vector<std::string> out;
    while (at_word()) out.push_back(toks_[pos_++]);
    return out;
  }

  LogicalForm term() {
    LogicalForm lf;
    if (at("*") && pos_ + 1 < toks_.size() && !lf_special(toks_[pos_ + 1])) {
      lf.definite = true;
      ++pos_;
    }
    lf.name = words();
    if (lf.name.empty()) fail(pos_ < toks_.size() ? "expected a name before '" + toks_[pos_] + "'"
                                                  : "expected a name at end of input");
    if (at("(")) {
      ++pos_;
      lf.has_args = true;
      lf.args.push_back(argument());
      while (at(",")) {
        ++pos_;
        lf.args.push_back(argument());
      }
      if (!at(")")) fail(pos_ < toks_.size() ? "expected ',' or ')'" : "missing ')'");
      ++pos_;
    }
    return lf;
  }

  LfArgument argument() {
    // A role is the word run before "=".
    std::size_t look = pos_;
    while (look < toks_.size() && !lf_special(toks_[look])) ++look;
    LfArgument arg;
    if (look < toks_.size() && toks_[look] == "=") {
      if (look == pos_) fail("missing role before '='");
      arg.role.assign(toks_.begin() + static_cast<std::ptrdiff_t>(pos_),
                      toks_.begin() + static_cast<std::ptrdiff_t>(look));
      pos_ = look + 1;
    }
    arg.value = term();
    return arg;
  }

  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline LogicalForm parse_logical_form(std::string_view text) {
  return detail::LfParser(tokenize_lf(text)).parse();
}

inline void render_tokens(const LogicalForm& lf, std::vector<std::string>& out) {
  if (lf.definite) out.emplace_back("*");
  out.insert(out.end(), lf.name.begin(), lf.name.end());
  if (!lf.has_args) return;
  out.emplace_back("(");
  for (std::size_t k = 0; k < lf.args.size(); ++k) {
    if (k) out.emplace_back(",");
    const auto& arg = lf.args[k];
    if (!arg.role.empty()) {
      out.insert(out.end(), arg.role.begin(), arg.role.end());
      out.emplace_back("=");
    }
    render_tokens(arg.value, out);
  }
  out.emplace_back(")");
}

inline std::vector<std::string> render_tokens(const LogicalForm& lf) {
  std::vector<std::string> out;
  render_tokens(lf, out);
  return out;
}

inline std::string render(const LogicalForm& lf) {
  std::string out;
  for (const auto& tok : render_tokens(lf)) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

inline std::size_t token_count(const LogicalForm& lf) {
  std::size_t n = (lf.definite ? 1 : 0) + lf.name.size();
  if (!lf.has_args) return n;
  n += 2 + (lf.args.size() - 1);
  for (const auto& arg : lf.args) n += (arg.role.empty() ? 0 : arg.role.size() + 1) + token_count(arg.value);
  return n;
}

// ---------------------------------------------------------------------------
// SLOG normalization and equivalence

/// Deletes every "nmod ." pair that precedes a role label. Output tokens are
/// joined with single spaces.
inline std::string strip_nmod(std::string_view text) {
  auto toks = tokenize_lf(text);
  std::string out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i] == "nmod" && i + 2 < toks.size() && toks[i + 1] == "." &&
        !detail::lf_special(toks[i + 2])) {
      ++i;
      continue;
    }
    if (!out.empty()) out += ' ';
    out += toks[i];
  }
  return out;
}

/// Rendering with every argument list sorted, so forms that differ only in
/// sibling order map to the same string.
inline std::string canonical_unordered(const LogicalForm& lf) {
  std::string out = lf.definite ? "* " : "";
  out += lf.head();
  if (!lf.has_args) return out;
  std::vector<std::string> args;
  args.reserve(lf.args.size());
  for (const auto& arg : lf.args) {
    std::string a;
    for (const auto& w : arg.role) a += w + ' ';
    if (!arg.role.empty()) a += "= ";
    a += canonical_unordered(arg.value);
    args.push_back(std::move(a));
  }
  std::sort(args.begin(), args.end());
  out += " (";
  for (std::size_t k = 0; k < args.size(); ++k) out += (k ? " , " : " ") + args[k];
  out += " )";
  return out;
}

/// Equality up to the order of role-labelled siblings. Throws ParseError
/// naming the side ("first"/"second") that fails to parse.
inline bool slog_equivalent(std::string_view first, std::string_view second) {
  auto parse_side = [](std::string_view text, const char* side) {
    try {
      return parse_logical_form(text);
    } catch (const ParseError& e) {
      throw ParseError(std::string(side) + " form: " + e.what());
    }
  };
  auto a = parse_side(first, "first");
  auto b = parse_side(second, "second");
  return canonical_unordered(a) == canonical_unordered(b);
}

// ---------------------------------------------------------------------------
// Conjunct reordering

enum class ReorderScope { kRecursive, kOutermost };

struct ReorderedForm {
  LogicalForm form;
  /// origin[j] = position (0-based) in the original rendering of token j of
  /// the reordered rendering.
  std::vector<std::size_t> origin;
};

/// A(C) = sum_{j in C} sum_i A(i, j) * i, with i 1-based.
inline double expected_alignment_position(const AlignmentMatrix& a,
                                          const std::vector<std::size_t>& positions) {
  double total = 0.0;
  for (auto j : positions)
    for (std::size_t i = 0; i < a.rows; ++i) total += a(i, j) * static_cast<double>(i + 1);
  return total;
}

namespace detail {

struct ReorderContext {
  const AlignmentMatrix& a;
  const std::set<std::string>& conj_ops;
  ReorderScope scope;
};

// Reorders the subtree whose rendering starts at `start` in the original
// token sequence; appends the original positions of its tokens, in new order,
// to `positions`.
inline LogicalForm reorder_node(const LogicalForm& lf, std::size_t start, bool inside_conj,
                                const ReorderContext& ctx, std::vector<std::size_t>& positions) {
  LogicalForm out = lf;
  std::size_t cur = start;
  const std::size_t head_len = (lf.definite ? 1 : 0) + lf.name.size();
  for (std::size_t k = 0; k < head_len; ++k) positions.push_back(cur++);
  if (!lf.has_args) return out;

  const bool is_conj = !lf.definite && ctx.conj_ops.count(lf.head()) > 0;
  const bool sort_here = is_conj && (ctx.scope == ReorderScope::kRecursive || !inside_conj);

  const std::size_t open = cur++;
  struct Piece {
    LfArgument arg;
    std::vector<std::size_t> pos;
    double key = 0.0;
  };
  std::vector<Piece> pieces;
  std::vector<std::size_t> commas;
  for (std::size_t k = 0; k < lf.args.size(); ++k) {
    if (k) commas.push_back(cur++);
    const auto& arg = lf.args[k];
    Piece p;
    p.arg.role = arg.role;
    if (!arg.role.empty())
      for (std::size_t r = 0; r <= arg.role.size(); ++r) p.pos.push_back(cur++);
    p.arg.value = reorder_node(arg.value, cur, inside_conj || is_conj, ctx, p.pos);
    cur += token_count(arg.value);
    pieces.push_back(std::move(p));
  }
  const std::size_t close = cur;

  if (sort_here) {
    for (auto& p : pieces) p.key = expected_alignment_position(ctx.a, p.pos);
    std::stable_sort(pieces.begin(), pieces.end(),
                     [](const Piece& x, const Piece& y) { return x.key < y.key; });
  }

  positions.push_back(open);
  out.args.clear();
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (k) positions.push_back(commas[k - 1]);
    positions.insert(positions.end(), pieces[k].pos.begin(), pieces[k].pos.end());
    out.args.push_back(std::move(pieces[k].arg));
  }
  positions.push_back(close);
  return out;
}

}  // namespace detail

/// Stably sorts the arguments of every conjunction node by their expected
/// aligned source position. `a` must have one column per token of render(lf).
inline ReorderedForm reorder_conjuncts_traced(const LogicalForm& lf, const AlignmentMatrix& a,
                                              const std::set<std::string>& conj_ops,
                                              ReorderScope scope = ReorderScope::kRecursive) {
  const std::size_t n = token_count(lf);
  if (a.cols != n)
    throw DataError("alignment matrix has " + std::to_string(a.cols) +
                    " target columns but the logical form renders to " + std::to_string(n) +
                    " tokens");
  ReorderedForm out;
  out.origin.reserve(n);
  out.form = detail::reorder_node(lf, 0, false, {a, conj_ops, scope}, out.origin);
  return out;
}

inline LogicalForm reorder_conjuncts(const LogicalForm& lf, const AlignmentMatrix& a,
                                     const std::set<std::string>& conj_ops,
                                     ReorderScope scope = ReorderScope::kRecursive) {
  return reorder_conjuncts_traced(lf, a, conj_ops, scope).form;
}

/// Column j of the result is column origin[j] of `a`: the same alignments,
/// attached to the tokens after reordering.
inline AlignmentMatrix permute_columns(const AlignmentMatrix& a,
                                       const std::vector<std::size_t>& origin) {
  AlignmentMatrix out(a.rows, origin.size());
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < origin.size(); ++j) out(i, j) = a(i, origin[j]);
  return out;
}

inline const std::set<std::string>& default_conjunction_ops() {
  static const std::set<std::string> ops{"and", "or", "intersection"};
  return ops;
}

}  // namespace deptx
