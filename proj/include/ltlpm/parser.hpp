#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ltlpm/error.hpp"
#include "ltlpm/formula.hpp"

namespace ltlpm {

namespace detail {

enum class Tok {
  Ident,
  True,
  False,
  Not,
  Next,
  Since,
  Box,
  Diamond,
  K1,
  K2,
  KOpen,
  RBracket,
  And,
  Or,
  Implies,
  LParen,
  RParen,
  Comma,
  Slash,
  End,
};

inline const char* spelling(Tok t) {
  switch (t) {
    case Tok::Ident: return "atom";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::Not: return "'~'";
    case Tok::Next: return "'N'";
    case Tok::Since: return "'S'";
    case Tok::Box: return "'[]'";
    case Tok::Diamond: return "'<>'";
    case Tok::K1: return "'K1'";
    case Tok::K2: return "'K2'";
    case Tok::KOpen: return "'K['";
    case Tok::RBracket: return "']'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Implies: return "'->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Slash: return "'/'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const std::size_t line = line_, column = column_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line, column});
        return out;
      }
      const char c = text_[pos_];
      auto emit = [&](Tok kind, std::size_t len) {
        out.push_back({kind, std::string(text_.substr(pos_, len)), line, column});
        advance(len);
      };
      if (std::islower(static_cast<unsigned char>(c))) {
        std::size_t len = 1;
        while (pos_ + len < text_.size() && is_ident_tail(text_[pos_ + len])) ++len;
        const std::string_view word = text_.substr(pos_, len);
        emit(word == "true" ? Tok::True : word == "false" ? Tok::False : Tok::Ident, len);
        continue;
      }
      if (std::isupper(static_cast<unsigned char>(c))) {
        std::size_t len = 1;
        while (pos_ + len < text_.size() &&
               (std::isupper(static_cast<unsigned char>(text_[pos_ + len])) ||
                std::isdigit(static_cast<unsigned char>(text_[pos_ + len]))))
          ++len;
        const std::string_view word = text_.substr(pos_, len);
        if (word == "S") {
          emit(Tok::Since, len);
        } else if (word == "N") {
          emit(Tok::Next, len);
        } else if (word == "K1") {
          emit(Tok::K1, len);
        } else if (word == "K2") {
          emit(Tok::K2, len);
        } else if (word == "K") {
          advance(len);
          skip_space();
          if (pos_ >= text_.size() || text_[pos_] != '[')
            throw SyntaxError("'K' must be followed by '['", line_, column_, {"'['"});
          advance(1);
          out.push_back({Tok::KOpen, "K[", line, column});
        } else {
          throw UnknownOperator("unknown operator '" + std::string(word) + "'", line, column);
        }
        continue;
      }
      switch (c) {
        case '~': emit(Tok::Not, 1); continue;
        case '&': emit(Tok::And, 1); continue;
        case '|': emit(Tok::Or, 1); continue;
        case '(': emit(Tok::LParen, 1); continue;
        case ')': emit(Tok::RParen, 1); continue;
        case ',': emit(Tok::Comma, 1); continue;
        case '/': emit(Tok::Slash, 1); continue;
        case ']': emit(Tok::RBracket, 1); continue;
        default: break;
      }
      if (starts_with("->")) { emit(Tok::Implies, 2); continue; }
      if (starts_with("[]")) { emit(Tok::Box, 2); continue; }
      if (starts_with("<>")) { emit(Tok::Diamond, 2); continue; }
      if (c == '<' || c == '=' || c == '-' || c == '!' || c == '^' || c == '[') {
        std::size_t len = 1;
        while (pos_ + len < text_.size() && std::string_view("<>=-!^[").find(text_[pos_ + len]) != std::string_view::npos)
          ++len;
        throw UnknownOperator("unknown operator '" + std::string(text_.substr(pos_, len)) + "'", line, column);
      }
      throw SyntaxError(std::string("unexpected character '") + c + "'", line, column);
    }
  }

 private:
  static bool is_ident_tail(char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  }

  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance(1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  Formula formula_to_end() {
    Formula f = formula();
    expect_end({Tok::End});
    return f;
  }

  Rule rule_to_end() {
    if (peek().kind == Tok::Slash)
      throw EmptyPremises("rule has no premises before '/'", peek().line, peek().column, {"formula"});
    std::vector<Formula> premises{formula()};
    while (peek().kind == Tok::Comma) {
      ++pos_;
      premises.push_back(formula());
    }
    if (peek().kind != Tok::Slash) fail({Tok::Comma, Tok::Slash});
    ++pos_;
    Formula conclusion = formula();
    expect_end({Tok::End});
    return Rule(std::move(premises), std::move(conclusion));
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  [[noreturn]] void fail(std::vector<Tok> expected) const {
    const Token& t = peek();
    std::vector<std::string> names;
    for (Tok k : expected) names.emplace_back(spelling(k));
    const std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError("unexpected " + got, t.line, t.column, std::move(names));
  }

  void expect_end(std::vector<Tok> expected) {
    if (peek().kind != Tok::End) {
      // Whatever binary operator could have continued the formula is also acceptable here.
      expected.insert(expected.begin(), {Tok::Implies, Tok::Or, Tok::And, Tok::Since});
      fail(std::move(expected));
    }
  }

  Formula formula() { return implication(); }

  Formula implication() {
    Formula left = disjunction();
    if (peek().kind == Tok::Implies) {
      ++pos_;
      return Formula::implication(std::move(left), implication());
    }
    return left;
  }

  Formula disjunction() {
    Formula left = conjunction();
    while (peek().kind == Tok::Or) {
      ++pos_;
      left = Formula::disjunction(std::move(left), conjunction());
    }
    return left;
  }

  Formula conjunction() {
    Formula left = since();
    while (peek().kind == Tok::And) {
      ++pos_;
      left = Formula::conjunction(std::move(left), since());
    }
    return left;
  }

  Formula since() {
    Formula left = unary();
    while (peek().kind == Tok::Since) {
      ++pos_;
      left = Formula::since(std::move(left), unary());
    }
    return left;
  }

  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: ++pos_; return Formula::negation(unary());
      case Tok::Next: ++pos_; return Formula::next(unary());
      case Tok::Box: ++pos_; return Formula::box(unary());
      case Tok::Diamond: ++pos_; return Formula::diamond(unary());
      case Tok::K1: ++pos_; return Formula::k1(unary());
      case Tok::K2: ++pos_; return Formula::k2(unary());
      case Tok::KOpen: {
        ++pos_;
        Formula param = formula();
        if (peek().kind != Tok::RBracket) fail({Tok::RBracket});
        ++pos_;
        return Formula::kpar(std::move(param), unary());
      }
      case Tok::Ident: {
        std::string name = t.text;
        ++pos_;
        return Formula::atom(std::move(name));
      }
      case Tok::True: ++pos_; return Formula::top();
      case Tok::False: ++pos_; return Formula::bottom();
      case Tok::LParen: {
        ++pos_;
        Formula inner = formula();
        if (peek().kind != Tok::RParen) fail({Tok::RParen});
        ++pos_;
        return inner;
      }
      default:
        fail({Tok::Ident, Tok::True, Tok::False, Tok::LParen, Tok::Not, Tok::Next, Tok::Box,
              Tok::Diamond, Tok::K1, Tok::K2, Tok::KOpen});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a formula. Precedence from tightest: prefix operators, S (left
/// associative), &, |, -> (right associative).
inline Formula parse_formula(std::string_view text) { return detail::Parser(text).formula_to_end(); }

/// Parses "premise, premise, ... / conclusion".
inline Rule parse_rule(std::string_view text) { return detail::Parser(text).rule_to_end(); }

}  // namespace ltlpm
