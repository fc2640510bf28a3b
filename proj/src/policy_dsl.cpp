// Copyright 2026 The cipherpdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <charconv>
#include <vector>

#include "cipherpdp/error.hpp"
#include "cipherpdp/numeric.hpp"
#include "cipherpdp/policy.hpp"

namespace cipherpdp {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ConditionTree condition() {
    skip_ws();
    std::string word = identifier();
    skip_ws();
    if ((word == "and" || word == "or" || word == "kofn") && peek('(')) {
      ++pos_;
      return gate(word);
    }
    if ((word == "true" || word == "false") && !at_operator())
      return ConditionTree::make_constant(word == "true");
    if (word.empty()) error("expected a condition");
    return predicate(word);
  }

  PolicySpec policy() {
    PolicySpec spec;
    skip_ws();
    if (keyword("if")) {
      auto cond = condition();
      skip_ws();
      if (!keyword("then")) error("expected 'then'");
      spec.condition = normalize_condition(cond);
      skip_ws();
    }
    if (!keyword("can")) error("expected 'can'");
    spec.tuple = tuple();
    skip_ws();
    if (pos_ != text_.size()) error("trailing input");
    return spec;
  }

  void finish() {
    skip_ws();
    if (pos_ != text_.size()) error("trailing input");
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(Errc::parse_error,
         what + " at offset " + std::to_string(pos_) + " in '" +
             std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  bool starts_with(std::string_view s) const {
    return text_.substr(pos_, s.size()) == s;
  }

  bool at_operator() const {
    return starts_with("<") || starts_with(">") || starts_with("=") ||
           starts_with("≤") || starts_with("≥");
  }

  bool keyword(std::string_view word) {
    if (!starts_with(word)) return false;
    std::size_t end = pos_ + word.size();
    if (end < text_.size() &&
        !std::isspace(static_cast<unsigned char>(text_[end])) &&
        text_[end] != '<' && !text_.substr(end).starts_with("⟨"))
      return false;
    pos_ = end;
    return true;
  }

  static bool is_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' ||
           c == ')' || c == ',' || c == '<' || c == '>' || c == '=' ||
           c == '#';
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_]) && !at_operator())
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string value_token() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  template <class T>
  T number(std::string_view digits) const {
    T out{};
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), out);
    if (ec != std::errc() || ptr != digits.data() + digits.size() ||
        digits.empty())
      error("invalid number '" + std::string(digits) + "'");
    return out;
  }

  ConditionTree gate(const std::string& word) {
    std::size_t k = 0;
    if (word == "kofn") {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      k = number<std::size_t>(text_.substr(start, pos_ - start));
      skip_ws();
      if (!peek(',')) error("expected ',' after threshold");
      ++pos_;
    }
    std::vector<ConditionTree> children;
    for (;;) {
      children.push_back(condition());
      skip_ws();
      if (peek(',')) {
        ++pos_;
        continue;
      }
      if (peek(')')) {
        ++pos_;
        break;
      }
      error("expected ',' or ')'");
    }
    Gate g = word == "and" ? Gate::and_gate
             : word == "or" ? Gate::or_gate
                            : Gate::threshold;
    auto node = ConditionTree::make_gate(g, std::move(children), k);
    try {
      validate_structure(node);
    } catch (const Error& e) {
      error(e.what());
    }
    return node;
  }

  CompareOp compare_op() {
    static constexpr std::string_view kOps[] = {"<=", ">=", "≤", "≥",
                                                "<",  ">",  "="};
    for (auto op : kOps) {
      if (starts_with(op)) {
        pos_ += op.size();
        return *parse_compare_op(op);
      }
    }
    error("expected a comparison operator");
  }

  ConditionTree predicate(const std::string& name) {
    CompareOp op = compare_op();
    skip_ws();
    std::string value = value_token();
    if (value.empty()) error("missing value for '" + name + "'");
    auto hash = value.find('#');
    if (hash == std::string::npos) {
      if (op != CompareOp::eq)
        error("numeric predicate needs the form v#s");
      return ConditionTree::make_leaf(name + "=" + value);
    }
    NumericComparison c;
    c.name = name;
    c.op = op;
    c.value = number<std::uint64_t>(std::string_view(value).substr(0, hash));
    c.bits = number<unsigned>(std::string_view(value).substr(hash + 1));
    return compile_numeric_comparison(c);
  }

  std::string tuple_item() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != '>' &&
           !starts_with("⟩"))
      ++pos_;
    std::string_view raw = text_.substr(start, pos_ - start);
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back())))
      raw.remove_suffix(1);
    if (raw.empty()) error("empty tuple element");
    return std::string(raw);
  }

  SatTuple tuple() {
    skip_ws();
    if (peek('<')) {
      ++pos_;
    } else if (starts_with("⟨")) {
      pos_ += std::string_view("⟨").size();
    } else {
      error("expected '<'");
    }
    SatTuple t;
    t.subject = tuple_item();
    expect(',');
    t.action = tuple_item();
    expect(',');
    t.target = tuple_item();
    if (peek('>')) {
      ++pos_;
    } else if (starts_with("⟩")) {
      pos_ += std::string_view("⟩").size();
    } else {
      error("expected '>'");
    }
    return t;
  }

  void expect(char c) {
    skip_ws();
    if (!peek(c)) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ConditionTree parse_condition(std::string_view text) {
  Parser p(text);
  auto tree = p.condition();
  p.finish();
  return tree;
}

PolicySpec parse_policy(std::string_view text) { return Parser(text).policy(); }

std::optional<ConditionTree> normalize_condition(const ConditionTree& tree) {
  validate_structure(tree);
  ConditionTree s = simplify(tree);
  if (s.is_constant() && s.constant) return std::nullopt;
  return s;
}

}  // namespace cipherpdp
