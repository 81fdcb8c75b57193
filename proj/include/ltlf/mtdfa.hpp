// Deterministic finite automata over propositional alphabets, with
// one shared MTBDD per state describing all outgoing transitions at
// once.
//
// Terminals carry (successor formula, accepting bit) pairs.  The
// translation tr() maps a formula to the MTBDD of its one-step
// successors, combining terminals through canonical representatives,
// so the translated automaton's states are exactly the canonical
// formulas reachable from the initial one.

#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltlf/canonical.hpp"
#include "ltlf/formula.hpp"
#include "ltlf/mtbdd.hpp"
#include "ltlf/parser.hpp"
#include "ltlf/word.hpp"

namespace ltlf {

struct translate_options {
  // Apply the local absorption rewrites while canonicalizing.
  bool local_rewrites = true;
  // Hard limits; 0 means unlimited.  Exceeding one raises
  // resource_limit_error.
  std::size_t max_states = 0;
  std::size_t max_nodes = 0;
  // Operation-cache behavior for the translation cache.
  op_cache::mode cache_mode = op_cache::mode::lossless;
  std::size_t cache_capacity = 1 << 14;
};

// Shared translation state: the node table holding every transition
// MTBDD, the canonicalizer, and the registry resolving tagged payload
// indices to state formulas.  One translator and the automata built
// on it form a single-threaded unit.
class translator {
 public:
  translator(const std::vector<var_id>& var_order,
             const translate_options& opts = {})
      : opts_(opts),
        canon_(opts.local_rewrites),
        cache_(opts.cache_mode, opts.cache_capacity) {
    table_.set_var_order(var_order);
    if (opts.max_nodes)
      table_.set_node_limit(opts.max_nodes);
  }

  node_table& table() { return table_; }
  const node_table& table() const { return table_; }
  canonicalizer& canon() { return canon_; }
  op_cache& cache() { return cache_; }
  const translate_options& options() const { return opts_; }
  const std::vector<var_id>& vars() const { return table_.order(); }

  formula canonical(formula f) { return canon_.canonical(f); }

  // Registry index for a state formula (registering it if new).
  std::uint32_t index_of(formula f) {
    auto it = index_of_.find(f.id());
    if (it != index_of_.end())
      return it->second;
    std::uint32_t idx = static_cast<std::uint32_t>(formulas_.size());
    formulas_.push_back(f);
    index_of_.emplace(f.id(), idx);
    return idx;
  }

  formula formula_at(std::uint32_t index) const { return formulas_.at(index); }

  // (formula, accepting) of a terminal payload.  Boolean leaves read
  // as (ff, 0) and (tt, 1).
  std::pair<formula, bool> resolve(payload p) const {
    if (p.is_boolean())
      return {p.value() ? formula::tt() : formula::ff(), p.value()};
    return {formula_at(p.index()), p.accepting()};
  }

  // Payload for the pair (f, accepting), canonicalizing f.  The pairs
  // (ff, 0) and (tt, 1) become plain Boolean leaves.
  payload state_payload(formula f, bool accepting) {
    f = canon_.canonical(f);
    if (f.is_ff() && !accepting)
      return payload::boolean(false);
    if (f.is_tt() && accepting)
      return payload::boolean(true);
    return payload::tagged(index_of(f), accepting);
  }

  node_ref state_terminal(formula f, bool accepting) {
    return table_.make_terminal(state_payload(f, accepting));
  }

  // The transition MTBDD of f: evaluating it under an assignment
  // yields the canonical one-step successor of f and whether the word
  // may stop after that assignment.
  node_ref tr(formula f) {
    if (auto it = tr_memo_.find(f.id()); it != tr_memo_.end())
      return it->second;
    node_ref r;
    switch (f.kind()) {
      case op::tt:
        r = table_.true_leaf();
        break;
      case op::ff:
        r = table_.false_leaf();
        break;
      case op::ap:
        r = table_.make_node(f.var(), table_.false_leaf(), table_.true_leaf());
        break;
      case op::Not:
        r = negate(tr(f[0]));
        break;
      case op::And:
      case op::Or: {
        bool_op o = f.is(op::And) ? bool_op::and_ : bool_op::or_;
        r = tr(f[0]);
        for (std::size_t i = 1; i < f.size(); ++i)
          r = combine(tr(f[i]), r, o);
        break;
      }
      case op::Implies:
        r = combine(tr(f[0]), tr(f[1]), bool_op::implies);
        break;
      case op::Equiv:
        r = combine(tr(f[0]), tr(f[1]), bool_op::equiv);
        break;
      case op::Xor:
        r = combine(tr(f[0]), tr(f[1]), bool_op::xor_);
        break;
      case op::X:
        r = state_terminal(f[0], true);
        break;
      case op::strong_X:
        r = state_terminal(f[0], false);
        break;
      case op::U:
        r = combine(tr(f[1]),
                    combine(tr(f[0]), state_terminal(f, false), bool_op::and_),
                    bool_op::or_);
        break;
      case op::R:
        r = combine(tr(f[1]),
                    combine(tr(f[0]), state_terminal(f, true), bool_op::or_),
                    bool_op::and_);
        break;
      case op::F:
        r = combine(tr(f[0]), state_terminal(f, false), bool_op::or_);
        break;
      case op::G:
        r = combine(tr(f[0]), state_terminal(f, true), bool_op::and_);
        break;
      default:
        throw std::logic_error("tr: unhandled operator");
    }
    tr_memo_.emplace(f.id(), r);
    return r;
  }

  node_ref combine(node_ref a, node_ref b, bool_op o) {
    auto comb = [this, o](payload p1, payload p2) {
      auto [f1, b1] = resolve(p1);
      auto [f2, b2] = resolve(p2);
      return state_payload(formula::binop(to_formula_op(o), f1, f2),
                           eval_bool_op(o, b1, b2));
    };
    return apply2_shortcut(table_, a, b, o, comb, cache_,
                           static_cast<std::uint32_t>(o));
  }

  node_ref negate(node_ref a) {
    constexpr std::uint32_t kNegTag = 6;
    auto neg = [this](payload p) {
      auto [f, b] = resolve(p);
      return state_payload(formula::Not(f), !b);
    };
    return apply1(table_, a, neg, cache_, kNegTag);
  }

  std::size_t registry_size() const { return formulas_.size(); }

 private:
  translate_options opts_;
  node_table table_;
  canonicalizer canon_;
  op_cache cache_;
  std::vector<formula> formulas_;
  std::unordered_map<std::uint32_t, std::uint32_t> index_of_;
  std::unordered_map<std::uint32_t, node_ref> tr_memo_;
};

struct run_outcome {
  std::uint32_t state;
  bool accepting;
};

class mtdfa {
 public:
  mtdfa(std::shared_ptr<translator> ctx, std::vector<formula> states,
        std::vector<node_ref> delta)
      : ctx_(std::move(ctx)),
        states_(std::move(states)),
        delta_(std::move(delta)) {
    for (std::uint32_t i = 0; i < states_.size(); ++i)
      if (!index_.emplace(states_[i].id(), i).second)
        throw std::logic_error("mtdfa: duplicate state formula");
  }

  const std::shared_ptr<translator>& context() const { return ctx_; }
  translator& ctx() const { return *ctx_; }
  const std::vector<var_id>& vars() const { return ctx_->vars(); }
  const std::vector<formula>& states() const { return states_; }
  const std::vector<node_ref>& delta() const { return delta_; }
  formula initial() const { return states_.at(0); }

  std::uint32_t state_index(formula f) const {
    auto it = index_.find(f.id());
    if (it == index_.end())
      throw std::out_of_range("mtdfa: formula is not a state: " +
                              to_string(f));
    return it->second;
  }

  bool has_state(formula f) const { return index_.count(f.id()) != 0; }

  // One transition step from a state.
  run_outcome step(std::uint32_t state, const assignment& w) const {
    payload p = ctx_->table().eval(delta_.at(state), w);
    auto [f, b] = ctx_->resolve(p);
    return run_outcome{state_index(f), b};
  }

  // Runs the word from the initial state; the word is accepted when
  // the accepting bit holds after its last letter.  The empty word is
  // never accepted.
  bool accepts(const word& w) const {
    run_outcome cur{0, false};
    for (const assignment& a : w)
      cur = step(cur.state, a);
    return cur.accepting;
  }

  std::size_t state_count() const { return states_.size(); }

  std::size_t shared_node_count() const {
    std::unordered_set<std::uint32_t> seen;
    std::vector<node_ref> todo;
    for (node_ref r : delta_)
      if (seen.insert(r.id).second)
        todo.push_back(r);
    const node_table& t = ctx_->table();
    while (!todo.empty()) {
      node_ref r = todo.back();
      todo.pop_back();
      if (t.is_terminal(r))
        continue;
      for (node_ref c : {t.low(r), t.high(r)})
        if (seen.insert(c.id).second)
          todo.push_back(c);
    }
    return seen.size();
  }

  // Every terminal reachable from a transition root must name a state
  // of the automaton.
  void check_closure() const {
    for (node_ref r : delta_)
      for (payload p : leaves(ctx_->table(), r)) {
        auto [f, b] = ctx_->resolve(p);
        (void)b;
        if (!has_state(f))
          throw std::logic_error("mtdfa: leaf formula is not a state: " +
                                 to_string(f));
      }
  }

 private:
  std::shared_ptr<translator> ctx_;
  std::vector<formula> states_;
  std::vector<node_ref> delta_;
  std::unordered_map<std::uint32_t, std::uint32_t> index_;
};

// Translates a formula into its MTDFA: breadth-first closure of the
// canonical initial state under the leaves of tr().
inline mtdfa translate(formula f, const std::vector<var_id>& var_order,
                       const translate_options& opts = {}) {
  for (var_id v : f.collect_aps()) {
    bool found = false;
    for (var_id u : var_order)
      found = found || u == v;
    if (!found)
      throw std::invalid_argument("translate: variable not in order: " +
                                  var_name(v));
  }
  auto ctx = std::make_shared<translator>(var_order, opts);
  formula init = ctx->canonical(f);
  std::vector<formula> states{init};
  std::vector<node_ref> delta;
  std::unordered_map<std::uint32_t, std::uint32_t> seen{{init.id(), 0}};
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (opts.max_states && states.size() > opts.max_states)
      throw resource_limit_error("state budget exceeded (" +
                                 std::to_string(opts.max_states) + " states)");
    node_ref root = ctx->tr(states[i]);
    delta.push_back(root);
    for (payload p : leaves(ctx->table(), root)) {
      auto [g, b] = ctx->resolve(p);
      (void)b;
      if (seen.emplace(g.id(), static_cast<std::uint32_t>(states.size()))
              .second)
        states.push_back(g);
    }
  }
  mtdfa a(std::move(ctx), std::move(states), std::move(delta));
  a.check_closure();
  return a;
}

// Merges states whose transition MTBDDs are identical, repeating
// until a fixpoint: replacing a state by its twin in the terminals
// can make further roots coincide.
inline mtdfa merge_identical_states(const mtdfa& a) {
  translator& ctx = a.ctx();
  std::vector<formula> states = a.states();
  std::vector<node_ref> delta = a.delta();
  constexpr std::uint32_t kRelabelTagBase = 1000;
  std::uint32_t relabel_round = 0;
  for (;;) {
    std::unordered_map<std::uint32_t, std::uint32_t> rep_by_root;
    std::unordered_map<std::uint32_t, formula> replace;  // formula id -> rep
    for (std::uint32_t i = 0; i < states.size(); ++i) {
      auto [it, inserted] = rep_by_root.emplace(delta[i].id, i);
      if (!inserted)
        replace.emplace(states[i].id(), states[it->second]);
    }
    if (replace.empty())
      break;
    auto map_payload = [&](payload p) {
      if (p.is_boolean())
        return p;
      auto [f, b] = ctx.resolve(p);
      if (auto it = replace.find(f.id()); it != replace.end())
        f = it->second;
      return payload::tagged(ctx.index_of(f), b);
    };
    op_cache relabel_cache;
    std::uint32_t tag = kRelabelTagBase + relabel_round++;
    for (node_ref& r : delta)
      r = apply1(ctx.table(), r, map_payload, relabel_cache, tag);
    // Keep representatives reachable from the (possibly replaced)
    // initial state.
    formula init = states[0];
    if (auto it = replace.find(init.id()); it != replace.end())
      init = it->second;
    std::unordered_map<std::uint32_t, std::uint32_t> old_index;
    for (std::uint32_t i = 0; i < states.size(); ++i)
      old_index.emplace(states[i].id(), i);
    std::vector<formula> new_states{init};
    std::vector<node_ref> new_delta;
    std::unordered_map<std::uint32_t, std::uint32_t> seen{{init.id(), 0}};
    for (std::size_t i = 0; i < new_states.size(); ++i) {
      node_ref root = delta[old_index.at(new_states[i].id())];
      new_delta.push_back(root);
      for (payload p : leaves(ctx.table(), root)) {
        auto [g, b] = ctx.resolve(p);
        (void)b;
        if (seen.emplace(g.id(), static_cast<std::uint32_t>(new_states.size()))
                .second)
          new_states.push_back(g);
      }
    }
    states = std::move(new_states);
    delta = std::move(new_delta);
  }
  return mtdfa(a.context(), std::move(states), std::move(delta));
}

// Language complement with respect to nonempty words: negate every
// terminal, so each (f, b) becomes ([!f], !b).
inline mtdfa complement(const mtdfa& a) {
  translator& ctx = a.ctx();
  std::vector<formula> states;
  states.reserve(a.state_count());
  for (formula q : a.states())
    states.push_back(ctx.canonical(formula::Not(q)));
  std::vector<node_ref> delta;
  delta.reserve(a.state_count());
  for (node_ref r : a.delta())
    delta.push_back(ctx.negate(r));
  mtdfa c(a.context(), std::move(states), std::move(delta));
  c.check_closure();
  return c;
}

// Product automaton through a Boolean combination of acceptance.
// Only pairs reachable from the pair of initial states are built; the
// product lives in a fresh translator over the same variable order.
inline mtdfa compose(const mtdfa& a1, const mtdfa& a2, bool_op o,
                     const translate_options& opts = {}) {
  if (a1.vars() != a2.vars())
    throw std::invalid_argument("compose: different variable orders");
  auto ctx = std::make_shared<translator>(a1.vars(), opts);
  translator& t1 = a1.ctx();
  translator& t2 = a2.ctx();
  node_table& out = ctx->table();

  // label -> originating pair of states, first registration wins
  std::unordered_map<std::uint32_t, std::pair<formula, formula>> pair_of;

  auto label_of = [&](formula f1, formula f2) {
    formula label = ctx->canonical(formula::binop(to_formula_op(o), f1, f2));
    pair_of.emplace(label.id(), std::make_pair(f1, f2));
    return label;
  };

  std::unordered_map<std::uint64_t, node_ref> memo;
  auto cross = [&](auto&& self, node_ref r1, node_ref r2) -> node_ref {
    std::uint64_t key =
        (static_cast<std::uint64_t>(r1.id) << 32) | r2.id;
    if (auto it = memo.find(key); it != memo.end())
      return it->second;
    std::uint32_t l1 = t1.table().level_at(r1);
    std::uint32_t l2 = t2.table().level_at(r2);
    node_ref res;
    if (l1 == node_table::kTerminalLevel && l2 == node_table::kTerminalLevel) {
      auto [f1, b1] = t1.resolve(t1.table().terminal_payload(r1));
      auto [f2, b2] = t2.resolve(t2.table().terminal_payload(r2));
      bool b = eval_bool_op(o, b1, b2);
      formula label = label_of(f1, f2);
      if (label.is_ff() && !b)
        res = out.false_leaf();
      else if (label.is_tt() && b)
        res = out.true_leaf();
      else
        res = out.make_terminal(payload::tagged(ctx->index_of(label), b));
    } else if (l1 < l2) {
      res = out.make_node_at_level(l1, self(self, t1.table().low(r1), r2),
                                   self(self, t1.table().high(r1), r2));
    } else if (l2 < l1) {
      res = out.make_node_at_level(l2, self(self, r1, t2.table().low(r2)),
                                   self(self, r1, t2.table().high(r2)));
    } else {
      res = out.make_node_at_level(
          l1, self(self, t1.table().low(r1), t2.table().low(r2)),
          self(self, t1.table().high(r1), t2.table().high(r2)));
    }
    memo.emplace(key, res);
    return res;
  };

  formula init = label_of(a1.initial(), a2.initial());
  std::vector<formula> states{init};
  std::vector<node_ref> delta;
  std::unordered_map<std::uint32_t, std::uint32_t> seen{{init.id(), 0}};
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (opts.max_states && states.size() > opts.max_states)
      throw resource_limit_error("state budget exceeded in composition");
    formula q = states[i];
    node_ref root;
    if (q.is_tt()) {
      root = out.true_leaf();
    } else if (q.is_ff()) {
      root = out.false_leaf();
    } else {
      auto [f1, f2] = pair_of.at(q.id());
      root = cross(cross, a1.delta()[a1.state_index(f1)],
                   a2.delta()[a2.state_index(f2)]);
    }
    delta.push_back(root);
    for (payload p : leaves(out, root)) {
      auto [g, b] = ctx->resolve(p);
      (void)b;
      if (seen.emplace(g.id(), static_cast<std::uint32_t>(states.size()))
              .second)
        states.push_back(g);
    }
  }
  mtdfa prod(std::move(ctx), std::move(states), std::move(delta));
  prod.check_closure();
  return prod;
}

// True when no accepting terminal is reachable from the initial state
// through the combined state and MTBDD graph.
inline bool is_empty(const mtdfa& a) {
  const node_table& t = a.ctx().table();
  std::vector<bool> visited(a.state_count(), false);
  std::vector<std::uint32_t> todo{0};
  visited[0] = true;
  while (!todo.empty()) {
    std::uint32_t q = todo.back();
    todo.pop_back();
    for (payload p : leaves(t, a.delta()[q])) {
      auto [g, b] = a.ctx().resolve(p);
      if (b)
        return false;
      std::uint32_t i = a.state_index(g);
      if (!visited[i]) {
        visited[i] = true;
        todo.push_back(i);
      }
    }
  }
  return true;
}

inline bool equivalent(const mtdfa& a1, const mtdfa& a2) {
  return is_empty(compose(a1, a2, bool_op::xor_));
}

}  // namespace ltlf
