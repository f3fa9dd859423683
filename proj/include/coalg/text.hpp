#pragma once

// Shared line-oriented text reading: '#' comments, blank lines skipped,
// whitespace-separated tokens, errors carrying file:line.

#include "coalg/linalg.hpp"

#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coalg {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

struct TokenLine {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

class LineReader {
 public:
  LineReader(std::istream& in, std::string file)
      : in_(in), file_(std::move(file)) {}

  /// Next non-blank, non-comment line, or nothing at end of input.
  std::optional<TokenLine> next() {
    if (pending_) {
      auto l = std::move(*pending_);
      pending_.reset();
      return l;
    }
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_no_;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      std::istringstream ss(raw);
      TokenLine tl{line_no_, {}};
      for (std::string tok; ss >> tok;) tl.tokens.push_back(tok);
      if (!tl.tokens.empty()) return tl;
    }
    return std::nullopt;
  }

  void push_back(TokenLine l) { pending_ = std::move(l); }

  TokenLine expect(const std::string& what) {
    auto l = next();
    if (!l) throw error(line_no_, "unexpected end of input, expected " + what);
    return *l;
  }

  /// Line whose first token is `keyword`.
  TokenLine expect_keyword(const std::string& keyword) {
    TokenLine l = expect("'" + keyword + "'");
    if (l.tokens[0] != keyword)
      throw error(l.number, "expected '" + keyword + "', found '" +
                                l.tokens[0] + "'");
    return l;
  }

  ParseError error(std::size_t line, const std::string& msg) const {
    return ParseError(file_, line, msg);
  }

  Rat rat(const TokenLine& l, std::size_t i) const {
    try {
      return parse_rat(l.tokens.at(i));
    } catch (const std::exception&) {
      throw error(l.number, "invalid rational literal '" +
                                (i < l.tokens.size() ? l.tokens[i] : "") + "'");
    }
  }

  std::size_t count(const TokenLine& l, std::size_t i) const {
    Rat r = rat(l, i);
    if (!is_integral(r) || r < 0)
      throw error(l.number, "expected a nonnegative integer");
    return r.get_num().get_ui();
  }

  /// Tokens [first, end) as a vector of exactly `n` rationals.
  Vec vec(const TokenLine& l, std::size_t first, std::size_t n) const {
    if (l.tokens.size() != first + n)
      throw error(l.number, "expected " + std::to_string(n) + " entries, found " +
                                std::to_string(l.tokens.size() - first));
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rat(l, first + i);
    return v;
  }

  const std::string& file() const { return file_; }

 private:
  std::istream& in_;
  std::string file_;
  std::size_t line_no_ = 0;
  std::optional<TokenLine> pending_;
};

}  // namespace coalg
