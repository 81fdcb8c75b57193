// Canonical representatives for propositional equivalence.
//
// Two formulas are propositionally equivalent when they have the same
// Boolean abstraction: replace every maximal temporal subformula by a
// fresh variable and compare the resulting Boolean functions.  The
// canonicalizer reduces that abstraction to a BDD in a private table
// and hands out one representative formula per BDD, the first one
// seen.  Before abstracting, four local absorption rewrites are
// applied to the top-level conjunction or disjunction:
//
//   (a U b) | b => a U b        (F b) | b => F b
//   (a R b) & b => a R b        (G b) & b => G b
//
// These patterns show up constantly when transition terminals are
// combined, and removing them early keeps equivalent states from
// being created in the first place.

#pragma once

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ltlf/formula.hpp"
#include "ltlf/mtbdd.hpp"

namespace ltlf {

class canonicalizer {
 public:
  explicit canonicalizer(bool local_rewrites = true)
      : local_rewrites_(local_rewrites) {
    table_.set_var_order({});
  }

  formula canonical(formula f) {
    if (auto it = memo_.find(f.id()); it != memo_.end())
      return it->second;
    formula in = f;
    if (local_rewrites_)
      f = absorb(f);
    node_ref b = encode(f);
    formula rep = representative(b, f);
    memo_.emplace(in.id(), rep);
    if (in != f)
      memo_.emplace(f.id(), rep);
    return rep;
  }

  // Abstraction BDD of f, for equivalence tests: f1 and f2 are
  // propositionally equivalent iff their abstractions are the same
  // node.
  node_ref abstraction(formula f) { return encode(f); }

  bool prop_equivalent(formula f, formula g) {
    return encode(f) == encode(g);
  }

  bool local_rewrites_enabled() const { return local_rewrites_; }

 private:
  // Top-level absorption, repeated until it no longer applies.
  formula absorb(formula f) {
    while (f.is(op::And) || f.is(op::Or)) {
      bool conj = f.is(op::And);
      std::unordered_set<std::uint32_t> absorbed;
      for (std::size_t i = 0; i < f.size(); ++i) {
        formula k = f[i];
        if (conj && k.is(op::R))
          absorbed.insert(k[1].id());
        else if (conj && k.is(op::G))
          absorbed.insert(k[0].id());
        else if (!conj && k.is(op::U))
          absorbed.insert(k[1].id());
        else if (!conj && k.is(op::F))
          absorbed.insert(k[0].id());
      }
      if (absorbed.empty())
        return f;
      std::vector<formula> kept;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (!absorbed.count(f[i].id()))
          kept.push_back(f[i]);
      if (kept.size() == f.size())
        return f;
      formula g = conj ? formula::And(std::move(kept))
                       : formula::Or(std::move(kept));
      if (g == f)
        return f;
      f = g;
    }
    return f;
  }

  // Maps a maximal temporal subformula (or an atomic proposition) to
  // its abstraction variable in the private table.
  std::uint32_t abstraction_var(formula f) {
    auto it = var_of_.find(f.id());
    if (it != var_of_.end())
      return it->second;
    var_id v = static_cast<var_id>(next_var_++);
    std::uint32_t level = table_.add_variable(v);
    (void)level;
    var_of_.emplace(f.id(), v);
    formula_of_var_.emplace(v, f);
    return v;
  }

  node_ref encode(formula f) {
    if (auto it = bdd_memo_.find(f.id()); it != bdd_memo_.end())
      return it->second;
    node_ref r;
    switch (f.kind()) {
      case op::tt:
        r = table_.true_leaf();
        break;
      case op::ff:
        r = table_.false_leaf();
        break;
      case op::Not:
        r = bdd_not(table_, encode(f[0]), cache_);
        break;
      case op::And:
      case op::Or: {
        bool_op o = f.is(op::And) ? bool_op::and_ : bool_op::or_;
        r = encode(f[0]);
        for (std::size_t i = 1; i < f.size(); ++i)
          r = bdd_apply(table_, r, encode(f[i]), o, cache_);
        break;
      }
      case op::Implies:
        r = bdd_apply(table_, encode(f[0]), encode(f[1]), bool_op::implies,
                      cache_);
        break;
      case op::Equiv:
        r = bdd_apply(table_, encode(f[0]), encode(f[1]), bool_op::equiv,
                      cache_);
        break;
      case op::Xor:
        r = bdd_apply(table_, encode(f[0]), encode(f[1]), bool_op::xor_,
                      cache_);
        break;
      default:
        // Atomic proposition or maximal temporal subformula.
        r = bdd_var(table_, abstraction_var(f));
        break;
    }
    bdd_memo_.emplace(f.id(), r);
    return r;
  }

  formula representative(node_ref b, formula candidate) {
    if (b == table_.true_leaf())
      return formula::tt();
    if (b == table_.false_leaf())
      return formula::ff();
    // A bare abstraction variable stands for the subformula it
    // abstracts; prefer that subformula (or its negation) over
    // whatever larger formula reduced to it.
    if (!table_.is_terminal(b)) {
      node_ref lo = table_.low(b);
      node_ref hi = table_.high(b);
      if (lo == table_.false_leaf() && hi == table_.true_leaf())
        return formula_of_var_.at(table_.var_at(b));
      if (lo == table_.true_leaf() && hi == table_.false_leaf())
        return formula::Not(formula_of_var_.at(table_.var_at(b)));
    }
    auto [it, inserted] = rep_.emplace(b.id, candidate);
    (void)inserted;
    return it->second;
  }

  bool local_rewrites_;
  node_table table_;
  op_cache cache_;
  std::uint32_t next_var_ = 0;
  std::unordered_map<std::uint32_t, formula> memo_;      // formula id -> rep
  std::unordered_map<std::uint32_t, node_ref> bdd_memo_; // formula id -> bdd
  std::unordered_map<std::uint32_t, var_id> var_of_;
  std::unordered_map<var_id, formula> formula_of_var_;
  std::unordered_map<std::uint32_t, formula> rep_;       // bdd id -> rep
};

}  // namespace ltlf
