// Recursive-descent parser for the textual LTLf syntax.
//
// Grammar, loosest to tightest:
//   equiv   := implies ('<->' equiv)?            right-assoc
//   implies := or ('->' implies)?                right-assoc
//   or      := xor ('|' xor)*
//   xor     := and ('^' and)*                    left-assoc
//   and     := untilrel ('&' untilrel)*
//   untilrel:= unary (('U'|'R') untilrel)?       right-assoc
//   unary   := ('!'|'X[!]'|'X'|'F'|'G') unary | atom
//   atom    := ident | 'tt' | '1' | 'true' | 'ff' | '0' | 'false'
//            | '(' equiv ')'
//
// Identifiers are [A-Za-z_][A-Za-z0-9_]*; the operator names
// X, F, G, U, R, tt, ff, true, false are reserved.

#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

#include "ltlf/formula.hpp"

namespace ltlf {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

namespace detail {

class parser {
 public:
  explicit parser(const std::string& text) : text_(text) { advance(); }

  formula parse() {
    formula f = parse_equiv();
    if (tok_ != token::end)
      fail("unexpected trailing input");
    return f;
  }

 private:
  enum class token {
    end, ident, tt, ff, lpar, rpar,
    bang, weak_next, strong_next, finally_, globally,
    and_, or_, xor_, implies, equiv, until, release,
  };

  formula parse_equiv() {
    formula a = parse_implies();
    if (accept(token::equiv))
      return formula::Equiv(a, parse_equiv());
    return a;
  }

  formula parse_implies() {
    formula a = parse_or();
    if (accept(token::implies))
      return formula::Implies(a, parse_implies());
    return a;
  }

  formula parse_or() {
    std::vector<formula> kids{parse_xor()};
    while (accept(token::or_))
      kids.push_back(parse_xor());
    return kids.size() == 1 ? kids[0] : formula::Or(std::move(kids));
  }

  formula parse_xor() {
    formula a = parse_and();
    while (accept(token::xor_))
      a = formula::Xor(a, parse_and());
    return a;
  }

  formula parse_and() {
    std::vector<formula> kids{parse_until()};
    while (accept(token::and_))
      kids.push_back(parse_until());
    return kids.size() == 1 ? kids[0] : formula::And(std::move(kids));
  }

  formula parse_until() {
    formula a = parse_unary();
    if (accept(token::until))
      return formula::U(a, parse_until());
    if (accept(token::release))
      return formula::R(a, parse_until());
    return a;
  }

  formula parse_unary() {
    switch (tok_) {
      case token::bang: advance(); return formula::Not(parse_unary());
      case token::weak_next: advance(); return formula::X(parse_unary());
      case token::strong_next: advance(); return formula::strong_X(parse_unary());
      case token::finally_: advance(); return formula::F(parse_unary());
      case token::globally: advance(); return formula::G(parse_unary());
      default: return parse_atom();
    }
  }

  formula parse_atom() {
    switch (tok_) {
      case token::tt: advance(); return formula::tt();
      case token::ff: advance(); return formula::ff();
      case token::ident: {
        std::string name = ident_;
        advance();
        return formula::ap(name);
      }
      case token::lpar: {
        advance();
        formula f = parse_equiv();
        expect(token::rpar, "expected ')'");
        return f;
      }
      default:
        fail("expected a formula");
    }
  }

  bool accept(token t) {
    if (tok_ != t)
      return false;
    advance();
    return true;
  }

  void expect(token t, const char* msg) {
    if (!accept(t))
      fail(msg);
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error("syntax error: " + msg, tok_line_, tok_col_);
  }

  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      bump();
    tok_line_ = line_;
    tok_col_ = col_;
    if (pos_ >= text_.size()) {
      tok_ = token::end;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '(': bump(); tok_ = token::lpar; return;
      case ')': bump(); tok_ = token::rpar; return;
      case '!': bump(); tok_ = token::bang; return;
      case '&': bump(); tok_ = token::and_; return;
      case '|': bump(); tok_ = token::or_; return;
      case '^': bump(); tok_ = token::xor_; return;
      case '1': bump(); tok_ = token::tt; return;
      case '0': bump(); tok_ = token::ff; return;
      case '-':
        bump();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          bump();
          tok_ = token::implies;
          return;
        }
        fail("unknown operator '-'");
      case '<':
        bump();
        if (pos_ + 1 < text_.size() && text_[pos_] == '-' &&
            text_[pos_ + 1] == '>') {
          bump();
          bump();
          tok_ = token::equiv;
          return;
        }
        fail("unknown operator '<'");
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        word += text_[pos_];
        bump();
      }
      if (word == "tt" || word == "true") { tok_ = token::tt; return; }
      if (word == "ff" || word == "false") { tok_ = token::ff; return; }
      if (word == "F") { tok_ = token::finally_; return; }
      if (word == "G") { tok_ = token::globally; return; }
      if (word == "U") { tok_ = token::until; return; }
      if (word == "R") { tok_ = token::release; return; }
      if (word == "X") {
        // 'X[!]' is the strong variant of 'X'.
        if (pos_ < text_.size() && text_.compare(pos_, 3, "[!]") == 0) {
          bump(); bump(); bump();
          tok_ = token::strong_next;
          return;
        }
        tok_ = token::weak_next;
        return;
      }
      ident_ = std::move(word);
      tok_ = token::ident;
      return;
    }
    fail(std::string("unknown character '") + c + "'");
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int tok_line_ = 1;
  int tok_col_ = 1;
  token tok_ = token::end;
  std::string ident_;
};

}  // namespace detail

inline formula parse(const std::string& text) {
  return detail::parser(text).parse();
}

}  // namespace ltlf
