// Assignments, finite words over assignments, input/output partitions,
// and the defining satisfaction relation of LTLf on finite nonempty
// words.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlf/formula.hpp"

namespace ltlf {

// Total assignment for a declared set of variables.  Variables are
// addressed by their global var_id; the assignment stores one bit per
// declared variable.
class assignment {
 public:
  assignment() = default;
  explicit assignment(const std::vector<var_id>& vars, std::uint64_t bits = 0)
      : vars_(vars), values_(vars.size()) {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      values_[i] = (bits >> i) & 1;
  }

  bool value(var_id v) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == v)
        return values_[i];
    throw std::out_of_range("assignment: variable not declared: " +
                            var_name(v));
  }

  void set(var_id v, bool b) {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == v) {
        values_[i] = b;
        return;
      }
    vars_.push_back(v);
    values_.push_back(b);
  }

  bool defines(var_id v) const {
    for (var_id u : vars_)
      if (u == v)
        return true;
    return false;
  }

  const std::vector<var_id>& vars() const { return vars_; }

  // Pointwise fusion of assignments over disjoint variable sets.
  static assignment combine(const assignment& a, const assignment& b) {
    assignment r = a;
    for (std::size_t i = 0; i < b.vars_.size(); ++i) {
      if (r.defines(b.vars_[i]))
        throw std::invalid_argument("assignment::combine: overlapping sets");
      r.vars_.push_back(b.vars_[i]);
      r.values_.push_back(b.values_[i]);
    }
    return r;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (i) s += ' ';
      if (!values_[i]) s += '!';
      s += var_name(vars_[i]);
    }
    return s;
  }

 private:
  std::vector<var_id> vars_;
  std::vector<bool> values_;
};

using word = std::vector<assignment>;

// Fuse two equal-length words over disjoint variable sets.
inline word combine_words(const word& a, const word& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("combine_words: length mismatch");
  word r;
  r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r.push_back(assignment::combine(a[i], b[i]));
  return r;
}

// Disjoint input/output split of the variables of a specification.
struct partition {
  std::vector<var_id> inputs;
  std::vector<var_id> outputs;

  bool is_input(var_id v) const {
    for (var_id u : inputs)
      if (u == v) return true;
    return false;
  }
  bool is_output(var_id v) const {
    for (var_id u : outputs)
      if (u == v) return true;
    return false;
  }

  void check_disjoint() const {
    for (var_id v : inputs)
      if (is_output(v))
        throw std::invalid_argument("partition: variable both input and output: " +
                                    var_name(v));
  }

  // Checks that every variable of f is covered.
  void check_covers(formula f) const {
    f.for_each_ap([&](var_id v) {
      if (!is_input(v) && !is_output(v))
        throw std::invalid_argument("partition: unassigned variable: " +
                                    var_name(v));
    });
  }
};

enum class semantics { mealy, moore };

inline const char* to_string(semantics s) {
  return s == semantics::mealy ? "mealy" : "moore";
}

// Satisfaction at position i of a nonempty word, by structural
// recursion on the formula.  Position i must be a valid index; the
// boundary cases of the next operators are resolved here so the
// recursion never leaves the word.
inline bool eval_word(formula f, const word& w, std::size_t i) {
  std::size_t n = w.size();
  if (i >= n)
    throw std::out_of_range("eval_word: position past the end of the word");
  switch (f.kind()) {
    case op::tt:
      return true;
    case op::ff:
      return false;
    case op::ap:
      return w[i].value(f.var());
    case op::Not:
      return !eval_word(f[0], w, i);
    case op::And:
      for (std::size_t k = 0; k < f.size(); ++k)
        if (!eval_word(f[k], w, i))
          return false;
      return true;
    case op::Or:
      for (std::size_t k = 0; k < f.size(); ++k)
        if (eval_word(f[k], w, i))
          return true;
      return false;
    case op::Implies:
      return !eval_word(f[0], w, i) || eval_word(f[1], w, i);
    case op::Equiv:
      return eval_word(f[0], w, i) == eval_word(f[1], w, i);
    case op::Xor:
      return eval_word(f[0], w, i) != eval_word(f[1], w, i);
    case op::X:
      return i + 1 == n || eval_word(f[0], w, i + 1);
    case op::strong_X:
      return i + 1 < n && eval_word(f[0], w, i + 1);
    case op::F:
      for (std::size_t j = i; j < n; ++j)
        if (eval_word(f[0], w, j))
          return true;
      return false;
    case op::G:
      for (std::size_t j = i; j < n; ++j)
        if (!eval_word(f[0], w, j))
          return false;
      return true;
    case op::U:
      for (std::size_t j = i; j < n; ++j) {
        if (eval_word(f[1], w, j))
          return true;
        if (!eval_word(f[0], w, j))
          return false;
      }
      return false;
    case op::R:
      for (std::size_t j = i; j < n; ++j) {
        if (!eval_word(f[1], w, j))
          return false;
        if (eval_word(f[0], w, j))
          return true;
      }
      return true;
  }
  throw std::logic_error("eval_word: unhandled operator");
}

}  // namespace ltlf
