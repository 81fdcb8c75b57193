// Syntactic formula transformations: negative normal form, the
// language-preserving simplification rules applied before
// translation, the one-step Boolean abstractions, and constant
// substitution.

#pragma once

#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ltlf/formula.hpp"

namespace ltlf {

// Negative normal form: negations pushed down to atomic
// propositions, with ->, <-> and ^ expanded first.
inline formula to_nnf(formula f) {
  auto pos = [](auto&& self, formula g, bool positive) -> formula {
    switch (g.kind()) {
      case op::tt:
        return positive ? formula::tt() : formula::ff();
      case op::ff:
        return positive ? formula::ff() : formula::tt();
      case op::ap:
        return positive ? g : formula::Not(g);
      case op::Not:
        return self(self, g[0], !positive);
      case op::And:
      case op::Or: {
        std::vector<formula> kids;
        kids.reserve(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
          kids.push_back(self(self, g[i], positive));
        bool conj = (g.kind() == op::And) == positive;
        return conj ? formula::And(std::move(kids))
                    : formula::Or(std::move(kids));
      }
      case op::Implies:
        return self(self, formula::Or({formula::Not(g[0]), g[1]}), positive);
      case op::Equiv:
        return self(self,
                    formula::Or({formula::And({g[0], g[1]}),
                                 formula::And({formula::Not(g[0]),
                                               formula::Not(g[1])})}),
                    positive);
      case op::Xor:
        return self(self,
                    formula::Or({formula::And({g[0], formula::Not(g[1])}),
                                 formula::And({formula::Not(g[0]), g[1]})}),
                    positive);
      case op::X:  // weak and strong next are dual on finite words
        return positive ? formula::X(self(self, g[0], true))
                        : formula::strong_X(self(self, g[0], false));
      case op::strong_X:
        return positive ? formula::strong_X(self(self, g[0], true))
                        : formula::X(self(self, g[0], false));
      case op::F:
        return positive ? formula::F(self(self, g[0], true))
                        : formula::G(self(self, g[0], false));
      case op::G:
        return positive ? formula::G(self(self, g[0], true))
                        : formula::F(self(self, g[0], false));
      case op::U:
        return positive ? formula::U(self(self, g[0], true),
                                     self(self, g[1], true))
                        : formula::R(self(self, g[0], false),
                                     self(self, g[1], false));
      case op::R:
        return positive ? formula::R(self(self, g[0], true),
                                     self(self, g[1], true))
                        : formula::U(self(self, g[0], false),
                                     self(self, g[1], false));
    }
    throw std::logic_error("to_nnf: unhandled operator");
  };
  return pos(pos, f, true);
}

inline bool is_nnf(formula f) {
  switch (f.kind()) {
    case op::Not:
      return f[0].is(op::ap);
    case op::Implies:
    case op::Equiv:
    case op::Xor:
      return false;
    default:
      for (std::size_t i = 0; i < f.size(); ++i)
        if (!is_nnf(f[i]))
          return false;
      return true;
  }
}

// One-step realizability abstraction: a Boolean formula that
// describes the words of length one accepted from f.  Temporal
// operators collapse to their behavior at the last position of a
// word: weak next holds, strong next fails, and the other operators
// reduce to their right-now obligations.
inline formula one_step_real_formula(formula f) {
  if (f.is_boolean())
    return f;
  switch (f.kind()) {
    case op::X:
      return formula::tt();
    case op::strong_X:
      return formula::ff();
    case op::F:
    case op::G:
      return one_step_real_formula(f[0]);
    case op::U:
    case op::R:
      return one_step_real_formula(f[1]);
    case op::Not:
      return formula::Not(one_step_real_formula(f[0]));
    case op::And:
    case op::Or: {
      std::vector<formula> kids;
      kids.reserve(f.size());
      for (std::size_t i = 0; i < f.size(); ++i)
        kids.push_back(one_step_real_formula(f[i]));
      return f.is(op::And) ? formula::And(std::move(kids))
                           : formula::Or(std::move(kids));
    }
    case op::Implies:
      return formula::Implies(one_step_real_formula(f[0]),
                              one_step_real_formula(f[1]));
    case op::Equiv:
      return formula::Equiv(one_step_real_formula(f[0]),
                            one_step_real_formula(f[1]));
    case op::Xor:
      return formula::Xor(one_step_real_formula(f[0]),
                          one_step_real_formula(f[1]));
    default:
      throw std::logic_error("one_step_real_formula: unhandled operator");
  }
}

// One-step unrealizability abstraction.  Requires negative normal
// form; both next operators weaken to tt, until becomes disjunction
// and release conjunction.
inline formula one_step_unreal_formula(formula f) {
  if (f.is_boolean()) {
    if (!is_nnf(f))
      throw std::invalid_argument("one_step_unreal_formula: input not in NNF");
    return f;
  }
  switch (f.kind()) {
    case op::X:
    case op::strong_X:
      return formula::tt();
    case op::F:
    case op::G:
      return one_step_unreal_formula(f[0]);
    case op::U:
      return formula::Or({one_step_unreal_formula(f[0]),
                          one_step_unreal_formula(f[1])});
    case op::R:
      return formula::And({one_step_unreal_formula(f[0]),
                           one_step_unreal_formula(f[1])});
    case op::And:
    case op::Or: {
      std::vector<formula> kids;
      kids.reserve(f.size());
      for (std::size_t i = 0; i < f.size(); ++i)
        kids.push_back(one_step_unreal_formula(f[i]));
      return f.is(op::And) ? formula::And(std::move(kids))
                           : formula::Or(std::move(kids));
    }
    default:
      throw std::invalid_argument("one_step_unreal_formula: input not in NNF");
  }
}

// Replaces every occurrence of an atomic proposition by a constant.
inline formula substitute(formula f, var_id v, formula value) {
  std::unordered_map<std::uint32_t, formula> memo;
  auto rec = [&](auto&& self, formula g) -> formula {
    if (g.is(op::ap))
      return g.var() == v ? value : g;
    if (g.is_constant() || g.size() == 0)
      return g;
    auto it = memo.find(g.id());
    if (it != memo.end())
      return it->second;
    std::vector<formula> kids;
    kids.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      kids.push_back(self(self, g[i]));
    formula out;
    switch (g.kind()) {
      case op::Not: out = formula::Not(kids[0]); break;
      case op::And: out = formula::And(std::move(kids)); break;
      case op::Or: out = formula::Or(std::move(kids)); break;
      case op::Implies: out = formula::Implies(kids[0], kids[1]); break;
      case op::Equiv: out = formula::Equiv(kids[0], kids[1]); break;
      case op::Xor: out = formula::Xor(kids[0], kids[1]); break;
      case op::X: out = formula::X(kids[0]); break;
      case op::strong_X: out = formula::strong_X(kids[0]); break;
      case op::F: out = formula::F(kids[0]); break;
      case op::G: out = formula::G(kids[0]); break;
      case op::U: out = formula::U(kids[0], kids[1]); break;
      case op::R: out = formula::R(kids[0], kids[1]); break;
      default: throw std::logic_error("substitute: unhandled operator");
    }
    memo.emplace(g.id(), out);
    return out;
  };
  return rec(rec, f);
}

namespace detail {

// One bottom-up pass of the pre-translation rewrite rules.  Each rule
// preserves the language; the interesting ones merge temporal
// operators so that fewer MTBDD operations are needed later.
inline formula simplify_node(formula f) {
  switch (f.kind()) {
    case op::And: {
      // (a -> b) & (a -> c)  =>  a -> (b & c)
      std::unordered_map<std::uint32_t, std::vector<formula>> by_antecedent;
      std::vector<formula> antecedents;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i].is(op::Implies)) {
          auto& v = by_antecedent[f[i][0].id()];
          if (v.empty())
            antecedents.push_back(f[i][0]);
          v.push_back(f[i][1]);
        }
      bool merged_implications = false;
      for (const formula& a : antecedents)
        if (by_antecedent[a.id()].size() > 1) {
          merged_implications = true;
          break;
        }
      if (merged_implications) {
        std::vector<formula> kids;
        for (std::size_t i = 0; i < f.size(); ++i)
          if (!f[i].is(op::Implies))
            kids.push_back(f[i]);
        for (const formula& a : antecedents)
          kids.push_back(
              formula::Implies(a, formula::And(by_antecedent[a.id()])));
        return formula::And(std::move(kids));
      }
      // G a1 & ... & G F b1 & ...  =>  G(a1 & ... & F(b1 & ...))
      std::vector<formula> always, eventually, rest;
      for (std::size_t i = 0; i < f.size(); ++i) {
        formula k = f[i];
        if (k.is(op::G) && k[0].is(op::F))
          eventually.push_back(k[0][0]);
        else if (k.is(op::G))
          always.push_back(k[0]);
        else
          rest.push_back(k);
      }
      if (always.size() + eventually.size() > 1) {
        std::vector<formula> body = std::move(always);
        if (!eventually.empty())
          body.push_back(formula::F(formula::And(std::move(eventually))));
        rest.push_back(formula::G(formula::And(std::move(body))));
        return formula::And(std::move(rest));
      }
      // X a & X b => X(a & b), and the strong variant
      for (op next : {op::X, op::strong_X}) {
        std::vector<formula> nexts, others;
        for (std::size_t i = 0; i < f.size(); ++i)
          (f[i].is(next) ? nexts : others).push_back(f[i]);
        if (nexts.size() > 1) {
          std::vector<formula> bodies;
          bodies.reserve(nexts.size());
          for (const formula& k : nexts)
            bodies.push_back(k[0]);
          formula fused = formula::And(std::move(bodies));
          others.push_back(next == op::X ? formula::X(fused)
                                         : formula::strong_X(fused));
          return formula::And(std::move(others));
        }
      }
      return f;
    }
    case op::Or: {
      // (a -> b) | (c -> d)  =>  !a | b | !c | d
      std::size_t implications = 0;
      for (std::size_t i = 0; i < f.size(); ++i)
        implications += f[i].is(op::Implies);
      if (implications >= 2) {
        std::vector<formula> kids;
        for (std::size_t i = 0; i < f.size(); ++i)
          if (f[i].is(op::Implies)) {
            kids.push_back(formula::Not(f[i][0]));
            kids.push_back(f[i][1]);
          } else {
            kids.push_back(f[i]);
          }
        return formula::Or(std::move(kids));
      }
      // F a1 | ... | F G b1 | ...  =>  F(a1 | ... | G(b1 | ...))
      std::vector<formula> eventual, persist, rest;
      for (std::size_t i = 0; i < f.size(); ++i) {
        formula k = f[i];
        if (k.is(op::F) && k[0].is(op::G))
          persist.push_back(k[0][0]);
        else if (k.is(op::F))
          eventual.push_back(k[0]);
        else
          rest.push_back(k);
      }
      if (eventual.size() + persist.size() > 1) {
        std::vector<formula> body = std::move(eventual);
        if (!persist.empty())
          body.push_back(formula::G(formula::Or(std::move(persist))));
        rest.push_back(formula::F(formula::Or(std::move(body))));
        return formula::Or(std::move(rest));
      }
      // X a | X b => X(a | b), and the strong variant
      for (op next : {op::X, op::strong_X}) {
        std::vector<formula> nexts, others;
        for (std::size_t i = 0; i < f.size(); ++i)
          (f[i].is(next) ? nexts : others).push_back(f[i]);
        if (nexts.size() > 1) {
          std::vector<formula> bodies;
          bodies.reserve(nexts.size());
          for (const formula& k : nexts)
            bodies.push_back(k[0]);
          formula fused = formula::Or(std::move(bodies));
          others.push_back(next == op::X ? formula::X(fused)
                                         : formula::strong_X(fused));
          return formula::Or(std::move(others));
        }
      }
      return f;
    }
    case op::G:
      // G F a and F G a both say "a holds at the last position", so
      // the body can be collapsed to its one-step form.
      if (f[0].is(op::F) && !f[0][0].is_boolean())
        return formula::G(formula::F(one_step_real_formula(f[0][0])));
      return f;
    case op::F:
      if (f[0].is(op::G))
        return formula::G(formula::F(one_step_real_formula(f[0][0])));
      return f;
    default:
      return f;
  }
}

inline formula simplify_pass(formula f,
                             std::unordered_map<std::uint32_t, formula>& memo) {
  auto it = memo.find(f.id());
  if (it != memo.end())
    return it->second;
  formula out = f;
  if (f.size() > 0 && !f.is_constant()) {
    std::vector<formula> kids;
    kids.reserve(f.size());
    bool changed = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
      kids.push_back(simplify_pass(f[i], memo));
      changed = changed || kids.back() != f[i];
    }
    if (changed) {
      switch (f.kind()) {
        case op::Not: out = formula::Not(kids[0]); break;
        case op::And: out = formula::And(std::move(kids)); break;
        case op::Or: out = formula::Or(std::move(kids)); break;
        case op::Implies: out = formula::Implies(kids[0], kids[1]); break;
        case op::Equiv: out = formula::Equiv(kids[0], kids[1]); break;
        case op::Xor: out = formula::Xor(kids[0], kids[1]); break;
        case op::X: out = formula::X(kids[0]); break;
        case op::strong_X: out = formula::strong_X(kids[0]); break;
        case op::F: out = formula::F(kids[0]); break;
        case op::G: out = formula::G(kids[0]); break;
        case op::U: out = formula::U(kids[0], kids[1]); break;
        case op::R: out = formula::R(kids[0], kids[1]); break;
        default: break;
      }
    }
  }
  out = simplify_node(out);
  memo.emplace(f.id(), out);
  return out;
}

}  // namespace detail

// Rewrites f bottom-up to a fixpoint, bounded at eight passes so
// termination does not rest on a confluence argument.
inline formula simplify(formula f) {
  for (int pass = 0; pass < 8; ++pass) {
    std::unordered_map<std::uint32_t, formula> memo;
    formula g = detail::simplify_pass(f, memo);
    if (g == f)
      break;
    f = g;
  }
  return f;
}

}  // namespace ltlf
