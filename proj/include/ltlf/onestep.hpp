// Propositional encoding and quantified realizability of Boolean
// formulas, plus the one-step check that combines them with the
// rewrites from rewrite.hpp.

#pragma once

#include <stdexcept>
#include <unordered_map>

#include "ltlf/formula.hpp"
#include "ltlf/mtbdd.hpp"
#include "ltlf/rewrite.hpp"
#include "ltlf/word.hpp"

namespace ltlf {

// Encodes a temporal-free formula as a BDD in the given table.
inline node_ref to_bdd(node_table& t, formula f, op_cache& cache) {
  if (!f.is_boolean())
    throw std::invalid_argument("to_bdd: formula has temporal operators");
  switch (f.kind()) {
    case op::tt:
      return t.true_leaf();
    case op::ff:
      return t.false_leaf();
    case op::ap:
      return bdd_var(t, f.var());
    case op::Not:
      return bdd_not(t, to_bdd(t, f[0], cache), cache);
    case op::And:
    case op::Or: {
      bool_op o = f.is(op::And) ? bool_op::and_ : bool_op::or_;
      node_ref r = to_bdd(t, f[0], cache);
      for (std::size_t i = 1; i < f.size(); ++i)
        r = bdd_apply(t, r, to_bdd(t, f[i], cache), o, cache);
      return r;
    }
    case op::Implies:
      return bdd_apply(t, to_bdd(t, f[0], cache), to_bdd(t, f[1], cache),
                       bool_op::implies, cache);
    case op::Equiv:
      return bdd_apply(t, to_bdd(t, f[0], cache), to_bdd(t, f[1], cache),
                       bool_op::equiv, cache);
    case op::Xor:
      return bdd_apply(t, to_bdd(t, f[0], cache), to_bdd(t, f[1], cache),
                       bool_op::xor_, cache);
    default:
      throw std::logic_error("to_bdd: unhandled operator");
  }
}

// Whether the output player can satisfy g for any input choice, in a
// single round.  Mealy lets the outputs react to the current inputs
// (forall I exists O), Moore commits the outputs first (exists O
// forall I).  The quantifiers are eliminated on the BDD, so the
// result does not depend on the table's variable order.
inline bool bool_realizable(node_table& t, node_ref g, const partition& part,
                            semantics sem, op_cache& cache) {
  auto is_out = [&part](var_id v) { return part.is_output(v); };
  auto is_in = [&part](var_id v) { return part.is_input(v); };
  node_ref r;
  if (sem == semantics::mealy) {
    r = bdd_quantify(t, g, is_out, /*existential=*/true, cache);
    r = bdd_quantify(t, r, is_in, /*existential=*/false, cache);
  } else {
    r = bdd_quantify(t, g, is_in, /*existential=*/false, cache);
    r = bdd_quantify(t, r, is_out, /*existential=*/true, cache);
  }
  if (r == t.true_leaf())
    return true;
  if (r == t.false_leaf())
    return false;
  throw std::logic_error("bool_realizable: free variables left");
}

enum class one_step_verdict { realizable, unrealizable, unknown };

// The two sound one-step tests: if the one-round underapproximation
// is realizable the formula is, and if the one-round
// overapproximation is unrealizable the formula is not.
inline one_step_verdict one_step_check(node_table& t, formula f,
                                       const partition& part, semantics sem,
                                       op_cache& cache) {
  if (bool_realizable(t, to_bdd(t, one_step_real_formula(f), cache), part, sem,
                      cache))
    return one_step_verdict::realizable;
  if (!bool_realizable(t, to_bdd(t, one_step_unreal_formula(to_nnf(f)), cache),
                       part, sem, cache))
    return one_step_verdict::unrealizable;
  return one_step_verdict::unknown;
}

}  // namespace ltlf
