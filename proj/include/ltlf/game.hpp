// Reachability games on MTBDD nodes, solved while they are built.
//
// game_solver is the incremental arena: vertices carry an owner, a
// counter of still-undetermined recorded successors, a frozen flag
// promising that no further successors will be added, and a winner
// that moves from undetermined to one player exactly once.  Winner
// changes backpropagate along recorded predecessor lists, so the
// total work over a run is linear in the number of edges.
//
// realizability_solver explores the transition system of a formula
// state by state, encodes every MTBDD node it translates as a game
// vertex, and stops as soon as the initial vertex is determined.  An
// offline attractor solver over an explicit arena provides the same
// answers after the fact and is used for cross-checking and for the
// full-translation mode.

#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ltlf/mtdfa.hpp"
#include "ltlf/onestep.hpp"
#include "ltlf/rewrite.hpp"
#include "ltlf/word.hpp"

namespace ltlf {

enum class player : std::uint8_t { output, input };

inline player opponent(player p) {
  return p == player::output ? player::input : player::output;
}

enum class game_winner : std::uint8_t { output, input, undetermined };

inline game_winner to_winner(player p) {
  return p == player::output ? game_winner::output : game_winner::input;
}

// Incremental arena with on-the-fly backpropagation.  Vertices are
// identified by caller-chosen 32-bit keys (MTBDD node ids, in the
// realizability game).
class game_solver {
 public:
  static constexpr std::uint32_t kNoWitness = 0xffffffffu;

  void new_vertex(std::uint32_t key, player own) {
    if (slot_of_.count(key))
      throw std::logic_error("game_solver: duplicate vertex");
    slot_of_.emplace(key, static_cast<std::uint32_t>(v_.size()));
    v_.push_back(vertex{own});
    key_of_.push_back(key);
  }

  bool has_vertex(std::uint32_t key) const { return slot_of_.count(key) != 0; }

  void new_edge(std::uint32_t src, std::uint32_t dst) {
    std::uint32_t s = slot(src);
    std::uint32_t d = slot(dst);
    if (v_[s].frozen)
      throw std::logic_error("game_solver: new_edge from frozen vertex");
    ++edges_;
    if (v_[d].winner == game_winner::undetermined) {
      ++v_[s].count;
      v_[d].preds.push_back(s);
    } else if (v_[d].winner == to_winner(v_[s].owner)) {
      // The source's own player already wins the destination, so the
      // source is determined; if it was determined before, the edge
      // is useless either way.
      if (v_[s].winner == game_winner::undetermined)
        determine(s, v_[d].winner, d);
    }
    // Otherwise the edge leads to a vertex won by the opponent and
    // will never be used.
  }

  // Promise that all successors of the vertex are recorded.  A frozen
  // vertex whose undetermined-successor counter is zero has lost: its
  // owner has no move left that could still help.
  void freeze_vertex(std::uint32_t key) {
    std::uint32_t s = slot(key);
    v_[s].frozen = true;
    if (v_[s].winner == game_winner::undetermined && v_[s].count == 0)
      determine(s, to_winner(opponent(v_[s].owner)), kNoSlot);
  }

  void set_winner(std::uint32_t key, player w) {
    std::uint32_t s = slot(key);
    if (v_[s].winner != game_winner::undetermined)
      throw std::logic_error("game_solver: vertex already determined");
    determine(s, to_winner(w), kNoSlot);
  }

  game_winner winner(std::uint32_t key) const { return v_[slot(key)].winner; }
  player owner(std::uint32_t key) const { return v_[slot(key)].owner; }
  bool frozen(std::uint32_t key) const { return v_[slot(key)].frozen; }
  std::uint32_t count(std::uint32_t key) const { return v_[slot(key)].count; }

  // Successor key that fixed this vertex's winner, when the owner won
  // by choosing it.
  std::optional<std::uint32_t> witness(std::uint32_t key) const {
    std::uint32_t w = v_[slot(key)].witness;
    if (w == kNoSlot)
      return std::nullopt;
    return key_of_[w];
  }

  // Determination timestamp; earlier-determined vertices have smaller
  // values.  Only meaningful on determined vertices.
  std::uint64_t determined_at(std::uint32_t key) const {
    return v_[slot(key)].seq;
  }

  std::size_t num_vertices() const { return v_.size(); }
  std::size_t num_edges() const { return edges_; }
  std::size_t num_determined() const { return determined_; }

  std::vector<std::uint32_t> keys() const { return key_of_; }

  // Structural sanity used by the test suite: for undetermined
  // vertices the counter equals the number of recorded edges to
  // still-undetermined successors (recomputed from the predecessor
  // lists).
  void check_consistency() const {
    std::vector<std::uint32_t> undet_succ(v_.size(), 0);
    for (std::size_t d = 0; d < v_.size(); ++d)
      if (v_[d].winner == game_winner::undetermined)
        for (std::uint32_t p : v_[d].preds)
          ++undet_succ[p];
    for (std::size_t s = 0; s < v_.size(); ++s)
      if (v_[s].winner == game_winner::undetermined &&
          v_[s].count != undet_succ[s])
        throw std::logic_error("game_solver: successor counter mismatch");
  }

 private:
  static constexpr std::uint32_t kNoSlot = 0xffffffffu;

  struct vertex {
    player owner;
    game_winner winner = game_winner::undetermined;
    std::uint32_t count = 0;
    bool frozen = false;
    std::uint32_t witness = kNoSlot;
    std::uint64_t seq = 0;
    std::vector<std::uint32_t> preds;
  };

  std::uint32_t slot(std::uint32_t key) const {
    auto it = slot_of_.find(key);
    if (it == slot_of_.end())
      throw std::logic_error("game_solver: unknown vertex");
    return it->second;
  }

  void determine(std::uint32_t s, game_winner w, std::uint32_t witness_slot) {
    v_[s].winner = w;
    v_[s].witness = witness_slot;
    v_[s].seq = ++seq_;
    ++determined_;
    std::vector<std::uint32_t> stack{s};
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      for (std::uint32_t p : v_[x].preds) {
        if (v_[p].winner != game_winner::undetermined)
          continue;
        --v_[p].count;
        if (to_winner(v_[p].owner) == w ||
            (v_[p].count == 0 && v_[p].frozen)) {
          v_[p].winner = w;
          v_[p].witness = to_winner(v_[p].owner) == w ? x : kNoSlot;
          v_[p].seq = ++seq_;
          ++determined_;
          stack.push_back(p);
        }
      }
    }
  }

  std::unordered_map<std::uint32_t, std::uint32_t> slot_of_;
  std::vector<vertex> v_;
  std::vector<std::uint32_t> key_of_;
  std::size_t edges_ = 0;
  std::size_t determined_ = 0;
  std::uint64_t seq_ = 0;
};

// ---------------------------------------------------------------------
// Offline attractor solver over an explicit arena.
// ---------------------------------------------------------------------

struct explicit_arena {
  std::vector<player> owner;
  std::vector<std::vector<std::uint32_t>> succ;
  std::vector<bool> target;  // winning positions for the output player

  std::uint32_t add_vertex(player p, bool is_target = false) {
    owner.push_back(p);
    succ.emplace_back();
    target.push_back(is_target);
    return static_cast<std::uint32_t>(owner.size() - 1);
  }
  void add_edge(std::uint32_t from, std::uint32_t to) {
    succ[from].push_back(to);
  }
  std::size_t size() const { return owner.size(); }
};

struct offline_result {
  std::vector<bool> winning;  // attractor of the targets, for output
  std::vector<bool> losing;   // identified dead-end-based losses
  std::vector<std::uint32_t> choice;  // witness successor for winning output vertices
};

// Classical backward fixpoint: the winning region is grown from the
// targets, adding an output vertex as soon as one successor wins and
// an input vertex once all of its successors do.  A second pass grows
// the explicitly losing region from non-target dead-ends.
inline offline_result solve_offline(const explicit_arena& g) {
  std::size_t n = g.size();
  offline_result res;
  res.winning.assign(n, false);
  res.losing.assign(n, false);
  res.choice.assign(n, 0xffffffffu);

  std::vector<std::vector<std::uint32_t>> preds(n);
  std::vector<std::uint32_t> remaining(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    remaining[v] = static_cast<std::uint32_t>(g.succ[v].size());
    for (std::uint32_t s : g.succ[v])
      preds[s].push_back(v);
  }

  std::deque<std::uint32_t> todo;
  for (std::uint32_t v = 0; v < n; ++v)
    if (g.target[v]) {
      res.winning[v] = true;
      todo.push_back(v);
    }
  while (!todo.empty()) {
    std::uint32_t x = todo.front();
    todo.pop_front();
    for (std::uint32_t p : preds[x]) {
      if (res.winning[p])
        continue;
      if (g.owner[p] == player::output) {
        res.winning[p] = true;
        res.choice[p] = x;
        todo.push_back(p);
      } else if (--remaining[p] == 0) {
        res.winning[p] = true;
        todo.push_back(p);
      }
    }
  }

  std::vector<std::uint32_t> remaining_l(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    remaining_l[v] = static_cast<std::uint32_t>(g.succ[v].size());
    if (g.succ[v].empty() && !g.target[v]) {
      res.losing[v] = true;
      todo.push_back(v);
    }
  }
  while (!todo.empty()) {
    std::uint32_t x = todo.front();
    todo.pop_front();
    for (std::uint32_t p : preds[x]) {
      if (res.losing[p])
        continue;
      if (g.owner[p] == player::input || --remaining_l[p] == 0) {
        res.losing[p] = true;
        todo.push_back(p);
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------
// The realizability game of a translated automaton.
// ---------------------------------------------------------------------

// Explicit arena over all MTBDD nodes of a fully translated
// automaton.  Output-variable nodes and terminals belong to the
// output player, input-variable nodes to the input player; a
// rejecting terminal (f, 0) with f != ff continues to the transition
// root of f, and the accepting terminals are the targets.
struct mtdfa_arena {
  explicit_arena arena;
  std::unordered_map<std::uint32_t, std::uint32_t> vertex_of;  // node id -> arena id
  std::vector<std::uint32_t> root_vertex;                      // per state
};

inline mtdfa_arena build_arena(const mtdfa& a, const partition& part) {
  const node_table& t = a.ctx().table();
  mtdfa_arena out;

  auto vertex = [&](auto&& self, node_ref r) -> std::uint32_t {
    if (auto it = out.vertex_of.find(r.id); it != out.vertex_of.end())
      return it->second;
    std::uint32_t v;
    if (t.is_terminal(r)) {
      payload p = t.terminal_payload(r);
      v = out.arena.add_vertex(player::output, p.accepting());
    } else {
      player own = part.is_output(t.var_at(r)) ? player::output : player::input;
      v = out.arena.add_vertex(own);
    }
    out.vertex_of.emplace(r.id, v);
    if (!t.is_terminal(r)) {
      out.arena.add_edge(v, self(self, t.low(r)));
      out.arena.add_edge(v, self(self, t.high(r)));
    }
    return v;
  };

  for (node_ref r : a.delta())
    out.root_vertex.push_back(vertex(vertex, r));

  // Rejecting terminals loop back to the transition of their state.
  for (auto [node_id, v] : out.vertex_of) {
    node_ref r{node_id};
    if (!t.is_terminal(r))
      continue;
    payload p = t.terminal_payload(r);
    if (p.accepting())
      continue;
    auto [f, b] = a.ctx().resolve(p);
    (void)b;
    if (f.is_ff())
      continue;
    out.arena.add_edge(v, out.root_vertex.at(a.state_index(f)));
  }
  return out;
}

// ---------------------------------------------------------------------
// On-the-fly realizability.
// ---------------------------------------------------------------------

struct solve_options {
  bool one_step = true;      // one-step (un)realizability checks
  bool early_exit = true;    // stop as soon as the initial vertex is known
  bool local_rewrites = true;
  std::size_t max_states = 0;
  std::size_t max_nodes = 0;
  op_cache::mode cache_mode = op_cache::mode::lossless;
  std::size_t cache_capacity = 1 << 14;
};

struct solve_stats {
  std::size_t states_translated = 0;
  std::size_t states_total = 0;  // full mode only: automaton size
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t onestep_hits = 0;
  bool early_exit = false;
  std::string early_exit_reason;

  std::string to_key_values() const {
    std::ostringstream os;
    os << "states_translated=" << states_translated << '\n'
       << "states_total=" << states_total << '\n'
       << "vertices=" << vertices << '\n'
       << "edges=" << edges << '\n'
       << "onestep_hits=" << onestep_hits << '\n'
       << "early_exit=" << (early_exit ? 1 : 0) << '\n'
       << "early_exit_reason=" << early_exit_reason << '\n';
    return os.str();
  }
};

enum class verdict : std::uint8_t { realizable, unrealizable };

struct solve_result {
  verdict status;
  game_winner init_winner;
  solve_stats stats;
};

// Mealy controller extracted from a solved game.  Transitions are
// total over the enumerated input assignments of every reachable
// state; a move either continues to a successor state or stops on an
// accepting step.
struct mealy_machine {
  struct move {
    assignment outputs;
    std::optional<std::uint32_t> next;  // nullopt: accept and stop
  };
  std::vector<formula> state_names;
  std::vector<assignment> inputs;           // all 2^|I| assignments
  std::vector<std::vector<move>> moves;     // [state][input index]
  partition part;
  std::uint32_t initial = 0;

  void print(std::ostream& os) const {
    os << "mealy states=" << state_names.size() << " initial=" << initial
       << '\n';
    for (std::uint32_t s = 0; s < state_names.size(); ++s) {
      os << "state " << s << ": " << state_names[s] << '\n';
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        os << "  [" << (inputs[i].vars().empty() ? "-" : inputs[i].to_string())
           << "] -> ["
           << (moves[s][i].outputs.vars().empty()
                   ? "-"
                   : moves[s][i].outputs.to_string())
           << "] ";
        if (moves[s][i].next)
          os << "next " << *moves[s][i].next << '\n';
        else
          os << "stop\n";
      }
    }
  }
};

// Variable order for a semantics: the player deciding first comes
// first in the order, inputs before outputs under Mealy and outputs
// before inputs under Moore.  Within each block the declaration
// order of the partition is kept.
inline std::vector<var_id> game_var_order(const partition& part,
                                          semantics sem) {
  std::vector<var_id> order;
  if (sem == semantics::mealy) {
    order.insert(order.end(), part.inputs.begin(), part.inputs.end());
    order.insert(order.end(), part.outputs.begin(), part.outputs.end());
  } else {
    order.insert(order.end(), part.outputs.begin(), part.outputs.end());
    order.insert(order.end(), part.inputs.begin(), part.inputs.end());
  }
  return order;
}

// One realizability question, solved on the fly.  The object keeps
// the translator and the game alive after run() so that a strategy
// can be extracted from the solved arena.
class realizability_solver {
 public:
  realizability_solver(formula f, partition part, semantics sem,
                       const solve_options& opts = {})
      : part_(std::move(part)), sem_(sem), opts_(opts) {
    part_.check_disjoint();
    part_.check_covers(f);
    translate_options topts;
    topts.local_rewrites = opts.local_rewrites;
    topts.max_states = opts.max_states;
    topts.max_nodes = opts.max_nodes;
    topts.cache_mode = opts.cache_mode;
    topts.cache_capacity = opts.cache_capacity;
    ctx_ = std::make_shared<translator>(game_var_order(part_, sem_), topts);
    init_formula_ = ctx_->canonical(f);
  }

  solve_result run() {
    node_table& t = ctx_->table();
    // The game starts on the pseudo-vertex term(f, 0), whose only
    // successor is the transition root of f.
    if (init_formula_.is_ff()) {
      init_ref_ = t.false_leaf();
      game_.new_vertex(init_ref_.id, player::input);
      game_.set_winner(init_ref_.id, player::input);
    } else {
      init_ref_ = ctx_->state_terminal(init_formula_, false);
      game_.new_vertex(init_ref_.id, player::input);
    }

    std::deque<formula> todo{init_formula_};
    bool stopped = false;
    while (!todo.empty()) {
      if (opts_.early_exit && init_determined()) {
        stopped = true;
        break;
      }
      formula state = todo.front();
      todo.pop_front();
      if (state.is_ff() || !processed_.insert(state.id()).second)
        continue;
      node_ref sterm = ctx_->state_terminal(state, false);
      if (opts_.early_exit &&
          game_.winner(sterm.id) != game_winner::undetermined)
        continue;

      if (opts_.one_step && try_one_step(state, sterm))
        continue;

      node_ref root = ctx_->tr(state);
      ++stats_.states_translated;
      if (game_.has_vertex(root.id)) {
        game_.new_edge(sterm.id, root.id);
        game_.freeze_vertex(sterm.id);
      } else {
        pending_.clear();
        declare(root);
        game_.new_edge(sterm.id, root.id);
        game_.freeze_vertex(sterm.id);
        if (!encode_nodes())
          stopped = true;
        for (formula g : pending_)
          todo.push_back(g);
        pending_.clear();
      }
      if (stopped)
        break;
    }

    stats_.vertices = game_.num_vertices();
    stats_.edges = game_.num_edges();
    stats_.early_exit = stopped;
    if (stopped)
      stats_.early_exit_reason = "init-determined";
    game_winner w = game_.winner(init_ref_.id);
    solved_ = true;
    realizable_ = w == game_winner::output;
    return solve_result{realizable_ ? verdict::realizable
                                    : verdict::unrealizable,
                        w, stats_};
  }

  // Strategy for the output player, defined on every O-winning state
  // reachable from the initial one.  At an output-owned node the walk
  // prefers a direct accepting terminal (lowest handle first) and
  // otherwise follows the successor recorded when the node was
  // determined, which strictly decreases the determination timestamp
  // and therefore terminates.
  mealy_machine extract_strategy() {
    if (!solved_ || !realizable_)
      throw std::logic_error("extract_strategy: game is not solved as realizable");
    if (part_.inputs.size() > 16)
      throw std::invalid_argument("extract_strategy: too many inputs to enumerate");

    mealy_machine m;
    m.part = part_;
    std::size_t n_inputs = std::size_t{1} << part_.inputs.size();
    for (std::size_t bits = 0; bits < n_inputs; ++bits)
      m.inputs.push_back(assignment(part_.inputs, bits));

    std::unordered_map<std::uint32_t, std::uint32_t> state_no;
    std::deque<formula> todo{init_formula_};
    state_no.emplace(init_formula_.id(), 0);
    m.state_names.push_back(init_formula_);
    while (!todo.empty()) {
      formula state = todo.front();
      todo.pop_front();
      std::vector<mealy_machine::move> row;
      row.reserve(n_inputs);
      for (const assignment& in : m.inputs) {
        raw_move rm = one_move(state, in);
        mealy_machine::move mv{std::move(rm.outputs), std::nullopt};
        if (rm.next) {
          auto [it, is_new] =
              state_no.emplace(rm.next->id(), static_cast<std::uint32_t>(
                                                  m.state_names.size()));
          if (is_new) {
            m.state_names.push_back(*rm.next);
            todo.push_back(*rm.next);
          }
          mv.next = it->second;
        }
        row.push_back(std::move(mv));
      }
      m.moves.push_back(std::move(row));
    }
    return m;
  }

  const solve_stats& stats() const { return stats_; }
  game_solver& game() { return game_; }
  translator& ctx() { return *ctx_; }
  formula initial_formula() const { return init_formula_; }

 private:
  bool init_determined() const {
    return game_.winner(init_ref_.id) != game_winner::undetermined;
  }

  // One-step checks: a state already known one-step realizable is won
  // by the output player outright, a one-step unrealizable one by the
  // input player, and either way its translation is skipped.
  bool try_one_step(formula state, node_ref sterm) {
    one_step_verdict v =
        one_step_check(ctx_->table(), state, part_, sem_, onestep_cache_);
    if (v == one_step_verdict::unknown)
      return false;
    ++stats_.onestep_hits;
    if (game_.winner(sterm.id) == game_winner::undetermined)
      game_.set_winner(sterm.id, v == one_step_verdict::realizable
                                     ? player::output
                                     : player::input);
    onestep_states_.insert(state.id());
    return true;
  }

  // Creates the game vertex of an MTBDD node.  Terminal vertices are
  // resolved immediately: accepting terminals are targets, the ff
  // terminal is lost, and other rejecting terminals wait for their
  // state to be translated (their single outgoing edge is added when
  // the state is popped from the work list).
  void declare(node_ref r) {
    if (game_.has_vertex(r.id))
      return;
    node_table& t = ctx_->table();
    if (t.is_terminal(r)) {
      payload p = t.terminal_payload(r);
      game_.new_vertex(r.id, player::input);
      auto [f, b] = ctx_->resolve(p);
      if (b)
        game_.set_winner(r.id, player::output);
      else if (f.is_ff())
        game_.set_winner(r.id, player::input);
      else
        mark_pending(f);
      return;
    }
    player own =
        part_.is_output(t.var_at(r)) ? player::output : player::input;
    game_.new_vertex(r.id, own);
    to_encode_.push_back(r);
  }

  void mark_pending(formula f) {
    if (!processed_.count(f.id()))
      pending_.push_back(f);
  }

  // Connects every node queued by declare().  Returns false when the
  // initial vertex became determined, in which case the rest of the
  // arena is irrelevant and encoding stops.
  bool encode_nodes() {
    node_table& t = ctx_->table();
    while (!to_encode_.empty()) {
      if (opts_.early_exit && init_determined()) {
        to_encode_.clear();
        return false;
      }
      node_ref r = to_encode_.front();
      to_encode_.pop_front();
      declare(t.low(r));
      game_.new_edge(r.id, t.low(r).id);
      if (opts_.early_exit &&
          game_.winner(r.id) != game_winner::undetermined)
        continue;  // the second edge cannot change this vertex
      declare(t.high(r));
      game_.new_edge(r.id, t.high(r).id);
      game_.freeze_vertex(r.id);
    }
    return true;
  }

  struct raw_move {
    assignment outputs;
    std::optional<formula> next;  // nullopt: accept and stop
  };

  // The move of the controller from a state under one input
  // assignment: walk the transition MTBDD, branching on inputs by the
  // assignment and on outputs by the winning strategy.
  raw_move one_move(formula state, const assignment& in) {
    node_table& t = ctx_->table();
    assignment outs(part_.outputs, 0);
    if (onestep_states_.count(state.id())) {
      pick_one_step_outputs(state, in, outs);
      return raw_move{outs, std::nullopt};
    }
    node_ref r = ctx_->tr(state);  // memoized during run()
    while (!t.is_terminal(r)) {
      var_id v = t.var_at(r);
      if (part_.is_input(v)) {
        r = in.value(v) ? t.high(r) : t.low(r);
        continue;
      }
      node_ref lo = t.low(r);
      node_ref hi = t.high(r);
      auto is_accepting_terminal = [&](node_ref c) {
        return t.is_terminal(c) && t.terminal_payload(c).accepting();
      };
      node_ref chosen;
      if (is_accepting_terminal(lo) && is_accepting_terminal(hi))
        chosen = lo.id < hi.id ? lo : hi;
      else if (is_accepting_terminal(lo))
        chosen = lo;
      else if (is_accepting_terminal(hi))
        chosen = hi;
      else {
        auto w = game_.witness(r.id);
        if (!w)
          throw std::logic_error("extract_strategy: no recorded choice");
        chosen = node_ref{*w};
      }
      outs.set(v, chosen == hi);
      r = chosen;
    }
    payload p = t.terminal_payload(r);
    auto [f, b] = ctx_->resolve(p);
    if (b)
      return raw_move{outs, std::nullopt};
    return raw_move{outs, f};
  }

  // For a state settled by the one-step check, a winning move comes
  // from the Boolean abstraction: fix the inputs, then steer the
  // remaining BDD toward true.  Under Moore semantics the outputs are
  // committed before the inputs are known, so they are picked from
  // the universally quantified abstraction instead.
  void pick_one_step_outputs(formula state, const assignment& in,
                             assignment& outs) {
    node_table& t = ctx_->table();
    node_ref g = to_bdd(t, one_step_real_formula(state), onestep_cache_);
    if (sem_ == semantics::moore) {
      auto is_in = [this](var_id v) { return part_.is_input(v); };
      g = bdd_quantify(t, g, is_in, /*existential=*/false, onestep_cache_);
    } else {
      g = restrict_inputs(g, in);
    }
    if (g == t.false_leaf())
      throw std::logic_error("extract_strategy: one-step move not winning");
    while (!t.is_terminal(g)) {
      var_id v = t.var_at(g);
      if (t.high(g) != t.false_leaf()) {
        outs.set(v, true);
        g = t.high(g);
      } else {
        g = t.low(g);
      }
    }
    if (!t.terminal_payload(g).value())
      throw std::logic_error("extract_strategy: one-step move not winning");
  }

  // Substitutes one input assignment into a Boolean BDD, leaving a
  // function of the outputs only.
  node_ref restrict_inputs(node_ref g, const assignment& in) {
    node_table& t = ctx_->table();
    std::unordered_map<std::uint32_t, node_ref> memo;
    auto rec = [&](auto&& self, node_ref r) -> node_ref {
      if (t.is_terminal(r))
        return r;
      if (auto it = memo.find(r.id); it != memo.end())
        return it->second;
      var_id v = t.var_at(r);
      node_ref out;
      if (part_.is_input(v)) {
        out = self(self, in.value(v) ? t.high(r) : t.low(r));
      } else {
        out = t.make_node_at_level(t.level_at(r), self(self, t.low(r)),
                                   self(self, t.high(r)));
      }
      memo.emplace(r.id, out);
      return out;
    };
    return rec(rec, g);
  }

  partition part_;
  semantics sem_;
  solve_options opts_;
  std::shared_ptr<translator> ctx_;
  formula init_formula_;
  node_ref init_ref_{};
  game_solver game_;
  solve_stats stats_;
  std::unordered_set<std::uint32_t> processed_;
  std::unordered_set<std::uint32_t> onestep_states_;
  std::vector<formula> pending_;
  std::deque<node_ref> to_encode_;
  op_cache onestep_cache_;
  bool solved_ = false;
  bool realizable_ = false;
};

// On-the-fly realizability check (the default solving mode).
inline solve_result realizability(formula f, const partition& part,
                                  semantics sem,
                                  const solve_options& opts = {}) {
  realizability_solver s(f, part, sem, opts);
  return s.run();
}

// Full-translation mode: build the complete automaton, then run the
// offline attractor on its arena.  Slower, and useful as a reference
// for differential testing.
inline solve_result solve_full(formula f, const partition& part,
                               semantics sem, const solve_options& opts = {}) {
  part.check_disjoint();
  part.check_covers(f);
  translate_options topts;
  topts.local_rewrites = opts.local_rewrites;
  topts.max_states = opts.max_states;
  topts.max_nodes = opts.max_nodes;
  topts.cache_mode = opts.cache_mode;
  topts.cache_capacity = opts.cache_capacity;
  mtdfa a = translate(f, game_var_order(part, sem), topts);
  mtdfa_arena ma = build_arena(a, part);
  offline_result res = solve_offline(ma.arena);
  solve_stats stats;
  stats.states_total = a.state_count();
  stats.states_translated = a.state_count();
  stats.vertices = ma.arena.size();
  for (const auto& sv : ma.arena.succ)
    stats.edges += sv.size();
  bool win = res.winning[ma.root_vertex[0]];
  return solve_result{win ? verdict::realizable : verdict::unrealizable,
                      win ? game_winner::output : game_winner::input, stats};
}

}  // namespace ltlf
