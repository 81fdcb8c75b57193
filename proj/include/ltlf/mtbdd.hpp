// Reduced ordered multi-terminal BDDs.
//
// Every node lives in an owning node_table and is addressed by an
// opaque node_ref.  Nodes are triples (var, low, high); terminals are
// encoded as (infinity, payload, infinity), where the payload is
// either a plain Boolean or a tagged (index, accepting) pair whose
// index is interpreted by the caller.  Tables are hash-consed, so
// structural isomorphism coincides with handle equality.
//
// The engine knows nothing about what tagged payloads mean: binary
// and unary operations take caller-supplied payload combiners, plus
// an operation cache that the caller owns and may reset.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ltlf/formula.hpp"
#include "ltlf/word.hpp"

namespace ltlf {

class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what)
      : std::runtime_error(what) {}
};

struct node_ref {
  std::uint32_t id = 0;
  bool operator==(const node_ref& o) const { return id == o.id; }
  bool operator!=(const node_ref& o) const { return id != o.id; }
  bool operator<(const node_ref& o) const { return id < o.id; }
  struct hash {
    std::size_t operator()(node_ref r) const { return r.id; }
  };
};

// Terminal payload: either a Boolean leaf, or a tagged pair
// (index, accepting) packed as (index << 1) | accepting.
class payload {
 public:
  static payload boolean(bool b) {
    return payload(kBoolFlag | (b ? 1u : 0u));
  }
  static payload tagged(std::uint32_t index, bool accepting) {
    if (index > (0x7fffffffu >> 1))
      throw std::overflow_error("payload: tagged index too large");
    return payload((index << 1) | (accepting ? 1u : 0u));
  }
  static payload from_bits(std::uint32_t bits) { return payload(bits); }

  bool is_boolean() const { return bits_ & kBoolFlag; }
  bool value() const { return bits_ & 1u; }  // Boolean leaf value
  std::uint32_t index() const {
    if (is_boolean())
      throw std::logic_error("payload::index on a Boolean leaf");
    return bits_ >> 1;
  }
  // Accepting bit of a tagged pair; for Boolean leaves this is the
  // leaf value, matching their reading as (ff,0) and (tt,1).
  bool accepting() const { return bits_ & 1u; }

  std::uint32_t bits() const { return bits_; }
  bool operator==(const payload& o) const { return bits_ == o.bits_; }
  bool operator!=(const payload& o) const { return bits_ != o.bits_; }

 private:
  explicit payload(std::uint32_t bits) : bits_(bits) {}
  static constexpr std::uint32_t kBoolFlag = 0x80000000u;
  std::uint32_t bits_;
};

enum class bool_op : std::uint32_t {
  and_ = 1,
  or_ = 2,
  implies = 3,
  equiv = 4,
  xor_ = 5,
};

constexpr bool eval_bool_op(bool_op o, bool a, bool b) {
  switch (o) {
    case bool_op::and_: return a && b;
    case bool_op::or_: return a || b;
    case bool_op::implies: return !a || b;
    case bool_op::equiv: return a == b;
    case bool_op::xor_: return a != b;
  }
  return false;
}

inline op to_formula_op(bool_op o) {
  switch (o) {
    case bool_op::and_: return op::And;
    case bool_op::or_: return op::Or;
    case bool_op::implies: return op::Implies;
    case bool_op::equiv: return op::Equiv;
    case bool_op::xor_: return op::Xor;
  }
  throw std::logic_error("to_formula_op: bad operator");
}

// Operation cache mapping (lhs, rhs, tag) to a result node.  The
// default mode grows on demand and never forgets; the lossy mode uses
// a fixed number of slots where a colliding insertion overwrites the
// previous entry.  Either way a hit returns exactly what was stored.
class op_cache {
 public:
  enum class mode { lossless, lossy };

  explicit op_cache(mode m = mode::lossless, std::size_t capacity = 1 << 12)
      : mode_(m) {
    if (mode_ == mode::lossy)
      lossy_.resize(capacity == 0 ? 1 : capacity);
  }

  std::optional<node_ref> find(node_ref a, node_ref b, std::uint32_t tag) const {
    key k{pack(a, b), tag};
    if (mode_ == mode::lossless) {
      auto it = map_.find(k);
      if (it == map_.end())
        return std::nullopt;
      return node_ref{it->second};
    }
    const entry& e = lossy_[slot(k)];
    if (e.used && e.ab == k.ab && e.tag == k.tag)
      return node_ref{e.result};
    return std::nullopt;
  }

  void insert(node_ref a, node_ref b, std::uint32_t tag, node_ref result) {
    key k{pack(a, b), tag};
    if (mode_ == mode::lossless) {
      map_[k] = result.id;
      return;
    }
    entry& e = lossy_[slot(k)];
    e = entry{k.ab, k.tag, result.id, true};
  }

  void clear() {
    map_.clear();
    for (entry& e : lossy_)
      e.used = false;
  }

  std::size_t size() const {
    if (mode_ == mode::lossless)
      return map_.size();
    std::size_t n = 0;
    for (const entry& e : lossy_)
      n += e.used;
    return n;
  }

 private:
  struct key {
    std::uint64_t ab;
    std::uint32_t tag;
    bool operator==(const key& o) const { return ab == o.ab && tag == o.tag; }
  };
  struct key_hash {
    std::size_t operator()(const key& k) const {
      std::uint64_t h = k.ab * 0x9e3779b97f4a7c15ULL + k.tag;
      h ^= h >> 29;
      h *= 0xbf58476d1ce4e5b9ULL;
      h ^= h >> 32;
      return static_cast<std::size_t>(h);
    }
  };
  struct entry {
    std::uint64_t ab = 0;
    std::uint32_t tag = 0;
    std::uint32_t result = 0;
    bool used = false;
  };

  static std::uint64_t pack(node_ref a, node_ref b) {
    return (static_cast<std::uint64_t>(a.id) << 32) | b.id;
  }
  std::size_t slot(const key& k) const {
    return key_hash()(k) % lossy_.size();
  }

  mode mode_;
  std::unordered_map<key, std::uint32_t, key_hash> map_;
  std::vector<entry> lossy_;
};

// One table of reduced ordered MTBDD nodes.  A table and the caches
// used with it form a single-threaded unit; handles must not cross
// tables.
class node_table {
 public:
  static constexpr std::uint32_t kTerminalLevel = 0xffffffffu;

  node_table() {
    // Boolean leaves get the two lowest handles.
    alloc(kTerminalLevel, payload::boolean(false).bits(), kTerminalLevel);
    alloc(kTerminalLevel, payload::boolean(true).bits(), kTerminalLevel);
  }

  node_table(const node_table&) = delete;
  node_table& operator=(const node_table&) = delete;

  // Fixes the variable order before any node is created.  Earlier
  // variables end up closer to the roots.
  void set_var_order(const std::vector<var_id>& order) {
    if (nodes_.size() != 2)
      throw std::logic_error("set_var_order: table already has nodes");
    explicit_order_ = true;
    order_.clear();
    level_of_.clear();
    for (var_id v : order)
      add_variable(v);
  }

  // Appends a variable at the end of the order.  Safe at any time:
  // the new variable is below every existing one.
  std::uint32_t add_variable(var_id v) {
    if (!explicit_order_)
      throw std::logic_error("add_variable: table uses the identity order");
    if (level_of_.count(v))
      throw std::logic_error("add_variable: duplicate variable " + var_name(v));
    std::uint32_t level = static_cast<std::uint32_t>(order_.size());
    order_.push_back(v);
    level_of_.emplace(v, level);
    return level;
  }

  bool has_variable(var_id v) const {
    return !explicit_order_ || level_of_.count(v) != 0;
  }

  std::uint32_t level_of(var_id v) const {
    if (!explicit_order_)
      return v;
    auto it = level_of_.find(v);
    if (it == level_of_.end())
      throw std::logic_error("level_of: unknown variable " + var_name(v));
    return it->second;
  }

  var_id var_at_level(std::uint32_t level) const {
    if (!explicit_order_)
      return level;
    return order_.at(level);
  }

  const std::vector<var_id>& order() const {
    if (!explicit_order_)
      throw std::logic_error("order: table uses the identity order");
    return order_;
  }

  node_ref false_leaf() const { return node_ref{0}; }
  node_ref true_leaf() const { return node_ref{1}; }
  node_ref bool_leaf(bool b) const { return node_ref{b ? 1u : 0u}; }

  node_ref make_terminal(payload p) {
    if (p.is_boolean())
      return bool_leaf(p.value());
    return unique(kTerminalLevel, p.bits(), kTerminalLevel);
  }

  node_ref make_node(var_id v, node_ref low, node_ref high) {
    return make_node_at_level(level_of(v), low, high);
  }

  node_ref make_node_at_level(std::uint32_t level, node_ref low,
                              node_ref high) {
    if (level >= level_at(low) || level >= level_at(high))
      throw std::logic_error("make_node: variable order violation");
    if (low == high)
      return low;
    return unique(level, low.id, high.id);
  }

  bool is_terminal(node_ref r) const {
    return nodes_[r.id].var == kTerminalLevel;
  }
  std::uint32_t level_at(node_ref r) const { return nodes_[r.id].var; }
  var_id var_at(node_ref r) const {
    std::uint32_t lv = level_at(r);
    if (lv == kTerminalLevel)
      throw std::logic_error("var_at: terminal node");
    return var_at_level(lv);
  }
  node_ref low(node_ref r) const {
    if (is_terminal(r))
      throw std::logic_error("low: terminal node");
    return node_ref{nodes_[r.id].low};
  }
  node_ref high(node_ref r) const {
    if (is_terminal(r))
      throw std::logic_error("high: terminal node");
    return node_ref{nodes_[r.id].high};
  }
  payload terminal_payload(node_ref r) const {
    if (!is_terminal(r))
      throw std::logic_error("terminal_payload: internal node");
    return payload::from_bits(nodes_[r.id].low);
  }

  std::size_t size() const { return nodes_.size(); }

  void set_node_limit(std::size_t limit) { node_limit_ = limit; }

  // Follows an assignment down to a terminal.
  payload eval(node_ref r, const assignment& w) const {
    while (!is_terminal(r)) {
      const node& n = nodes_[r.id];
      r = node_ref{w.value(var_at_level(n.var)) ? n.high : n.low};
    }
    return terminal_payload(r);
  }

 private:
  struct node {
    std::uint32_t var;   // level, or kTerminalLevel
    std::uint32_t low;   // child id, or payload bits for terminals
    std::uint32_t high;  // child id, or kTerminalLevel for terminals
  };
  struct triple_hash {
    std::size_t operator()(const std::uint64_t& k) const {
      std::uint64_t h = k;
      h ^= h >> 33;
      h *= 0xff51afd7ed558ccdULL;
      h ^= h >> 33;
      return static_cast<std::size_t>(h);
    }
  };

  node_ref unique(std::uint32_t var, std::uint32_t low, std::uint32_t high) {
    // 96-bit triple folded to a map key plus an equality check on the
    // stored node keeps this simple; ids are dense so collisions on
    // the fold are resolved by chaining in the bucket map.
    auto key = triple_key(var, low, high);
    auto range = unique_.equal_range(key);
    for (auto it = range.first; it != range.second; ++it) {
      const node& n = nodes_[it->second];
      if (n.var == var && n.low == low && n.high == high)
        return node_ref{it->second};
    }
    node_ref r = alloc(var, low, high);
    unique_.emplace(key, r.id);
    return r;
  }

  static std::uint64_t triple_key(std::uint32_t var, std::uint32_t low,
                                  std::uint32_t high) {
    std::uint64_t h = var;
    h = h * 0x9e3779b97f4a7c15ULL + low;
    h = h * 0x9e3779b97f4a7c15ULL + high;
    return h;
  }

  node_ref alloc(std::uint32_t var, std::uint32_t low, std::uint32_t high) {
    if (node_limit_ && nodes_.size() >= node_limit_)
      throw resource_limit_error("node budget exceeded (" +
                                 std::to_string(node_limit_) + " nodes)");
    nodes_.push_back(node{var, low, high});
    return node_ref{static_cast<std::uint32_t>(nodes_.size() - 1)};
  }

  std::vector<node> nodes_;
  std::unordered_multimap<std::uint64_t, std::uint32_t, triple_hash> unique_;
  bool explicit_order_ = false;
  std::vector<var_id> order_;
  std::unordered_map<var_id, std::uint32_t> level_of_;
  std::size_t node_limit_ = 0;
};

// Applies a binary payload operation pointwise.  The combiner is
// called on terminal payload pairs and may throw to refuse a pair.
template <typename Combine>
node_ref apply2(node_table& t, node_ref m1, node_ref m2, Combine&& comb,
                op_cache& cache, std::uint32_t tag) {
  if (auto hit = cache.find(m1, m2, tag))
    return *hit;
  std::uint32_t l1 = t.level_at(m1);
  std::uint32_t l2 = t.level_at(m2);
  node_ref r;
  if (l1 == node_table::kTerminalLevel && l2 == node_table::kTerminalLevel) {
    r = t.make_terminal(comb(t.terminal_payload(m1), t.terminal_payload(m2)));
  } else if (l1 < l2) {
    node_ref lo = apply2(t, t.low(m1), m2, comb, cache, tag);
    node_ref hi = apply2(t, t.high(m1), m2, comb, cache, tag);
    r = t.make_node_at_level(l1, lo, hi);
  } else if (l2 < l1) {
    node_ref lo = apply2(t, m1, t.low(m2), comb, cache, tag);
    node_ref hi = apply2(t, m1, t.high(m2), comb, cache, tag);
    r = t.make_node_at_level(l2, lo, hi);
  } else {
    node_ref lo = apply2(t, t.low(m1), t.low(m2), comb, cache, tag);
    node_ref hi = apply2(t, t.high(m1), t.high(m2), comb, cache, tag);
    r = t.make_node_at_level(l1, lo, hi);
  }
  cache.insert(m1, m2, tag, r);
  return r;
}

// Variant of apply2 for Boolean operators that cuts the recursion
// short when an operand is a Boolean leaf: for conjunction a false
// leaf annihilates and a true leaf is neutral, dually for
// disjunction, and one-sided simplifications apply to the other
// operators.  Boolean-leaf pairs never reach the combiner.
template <typename Combine>
node_ref apply2_shortcut(node_table& t, node_ref m1, node_ref m2, bool_op o,
                         Combine&& comb, op_cache& cache, std::uint32_t tag) {
  bool b1 = t.is_terminal(m1) && t.terminal_payload(m1).is_boolean();
  bool b2 = t.is_terminal(m2) && t.terminal_payload(m2).is_boolean();
  if (b1 && b2)
    return t.bool_leaf(eval_bool_op(o, t.terminal_payload(m1).value(),
                                    t.terminal_payload(m2).value()));
  if (b1 || b2) {
    bool v = t.terminal_payload(b1 ? m1 : m2).value();
    switch (o) {
      case bool_op::and_:
        if (!v) return t.false_leaf();
        return b1 ? m2 : m1;
      case bool_op::or_:
        if (v) return t.true_leaf();
        return b1 ? m2 : m1;
      case bool_op::implies:
        if (b1 && !v) return t.true_leaf();
        if (b1 && v) return m2;
        if (b2 && v) return t.true_leaf();
        break;  // ff on the right: no shortcut
      case bool_op::equiv:
        if (v) return b1 ? m2 : m1;
        break;
      case bool_op::xor_:
        if (!v) return b1 ? m2 : m1;
        break;
    }
  }
  if (auto hit = cache.find(m1, m2, tag))
    return *hit;
  std::uint32_t l1 = t.level_at(m1);
  std::uint32_t l2 = t.level_at(m2);
  node_ref r;
  if (l1 == node_table::kTerminalLevel && l2 == node_table::kTerminalLevel) {
    r = t.make_terminal(comb(t.terminal_payload(m1), t.terminal_payload(m2)));
  } else if (l1 < l2) {
    node_ref lo = apply2_shortcut(t, t.low(m1), m2, o, comb, cache, tag);
    node_ref hi = apply2_shortcut(t, t.high(m1), m2, o, comb, cache, tag);
    r = t.make_node_at_level(l1, lo, hi);
  } else if (l2 < l1) {
    node_ref lo = apply2_shortcut(t, m1, t.low(m2), o, comb, cache, tag);
    node_ref hi = apply2_shortcut(t, m1, t.high(m2), o, comb, cache, tag);
    r = t.make_node_at_level(l2, lo, hi);
  } else {
    node_ref lo = apply2_shortcut(t, t.low(m1), t.low(m2), o, comb, cache, tag);
    node_ref hi = apply2_shortcut(t, t.high(m1), t.high(m2), o, comb, cache, tag);
    r = t.make_node_at_level(l1, lo, hi);
  }
  cache.insert(m1, m2, tag, r);
  return r;
}

// Applies a unary payload map pointwise.
template <typename Map>
node_ref apply1(node_table& t, node_ref m, Map&& map, op_cache& cache,
                std::uint32_t tag) {
  static constexpr node_ref kNoOperand{0xffffffffu};
  if (auto hit = cache.find(m, kNoOperand, tag))
    return *hit;
  node_ref r;
  if (t.is_terminal(m)) {
    r = t.make_terminal(map(t.terminal_payload(m)));
  } else {
    node_ref lo = apply1(t, t.low(m), map, cache, tag);
    node_ref hi = apply1(t, t.high(m), map, cache, tag);
    r = t.make_node_at_level(t.level_at(m), lo, hi);
  }
  cache.insert(m, kNoOperand, tag, r);
  return r;
}

// Payloads of all terminals reachable from m.  Linear in the number
// of reachable nodes.
inline std::vector<payload> leaves(const node_table& t, node_ref m) {
  std::vector<payload> out;
  std::unordered_set<std::uint32_t> seen{m.id};
  std::vector<node_ref> todo{m};
  while (!todo.empty()) {
    node_ref r = todo.back();
    todo.pop_back();
    if (t.is_terminal(r)) {
      out.push_back(t.terminal_payload(r));
      continue;
    }
    for (node_ref c : {t.low(r), t.high(r)})
      if (seen.insert(c.id).second)
        todo.push_back(c);
  }
  return out;
}

// Number of distinct nodes reachable from m, terminals included.
inline std::size_t node_count(const node_table& t, node_ref m) {
  std::unordered_set<std::uint32_t> seen{m.id};
  std::vector<node_ref> todo{m};
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

// ---------------------------------------------------------------------
// Plain-BDD helpers over Boolean leaves, used for propositional
// reasoning (equivalence classes, one-step checks, quantification).
// ---------------------------------------------------------------------

namespace detail {
inline payload refuse_pair(payload, payload) {
  throw std::logic_error("Boolean BDD operation reached tagged payloads");
}
}  // namespace detail

inline node_ref bdd_var(node_table& t, var_id v) {
  return t.make_node(v, t.false_leaf(), t.true_leaf());
}

inline node_ref bdd_apply(node_table& t, node_ref a, node_ref b, bool_op o,
                          op_cache& cache) {
  return apply2_shortcut(t, a, b, o, detail::refuse_pair, cache,
                         static_cast<std::uint32_t>(o));
}

inline node_ref bdd_not(node_table& t, node_ref a, op_cache& cache) {
  constexpr std::uint32_t kNotTag = 100;
  return apply1(
      t, a,
      [](payload p) {
        if (!p.is_boolean())
          throw std::logic_error("bdd_not: tagged payload");
        return payload::boolean(!p.value());
      },
      cache, kNotTag);
}

// Quantifies away every variable accepted by `quantified`;
// existential quantification joins cofactors with or, universal with
// and.  The result only tests variables rejected by the predicate.
template <typename Pred>
node_ref bdd_quantify(node_table& t, node_ref m, Pred&& quantified,
                      bool existential, op_cache& cache) {
  std::unordered_map<std::uint32_t, node_ref> memo;
  bool_op join = existential ? bool_op::or_ : bool_op::and_;
  auto rec = [&](auto&& self, node_ref r) -> node_ref {
    if (t.is_terminal(r))
      return r;
    auto it = memo.find(r.id);
    if (it != memo.end())
      return it->second;
    node_ref lo = self(self, t.low(r));
    node_ref hi = self(self, t.high(r));
    node_ref out;
    if (quantified(t.var_at(r)))
      out = bdd_apply(t, lo, hi, join, cache);
    else
      out = t.make_node_at_level(t.level_at(r), lo, hi);
    memo.emplace(r.id, out);
    return out;
  };
  return rec(rec, m);
}

// ---------------------------------------------------------------------
// DOT dump, for debugging.  Internal nodes show their decision
// variable, with a dashed edge to the low child and a solid edge to
// the high child; terminals show their payload.
// ---------------------------------------------------------------------

inline void dump_dot(
    std::ostream& os, const node_table& t,
    const std::vector<std::pair<std::string, node_ref>>& roots,
    const std::function<std::string(payload)>& payload_text) {
  os << "digraph mtbdd {\n  rankdir=TB;\n";
  std::unordered_set<std::uint32_t> seen;
  std::vector<node_ref> todo;
  auto visit = [&](node_ref r) {
    if (seen.insert(r.id).second)
      todo.push_back(r);
  };
  for (std::size_t i = 0; i < roots.size(); ++i) {
    os << "  root" << i << " [shape=box, style=dashed, label=\""
       << roots[i].first << "\"];\n";
    os << "  root" << i << " -> n" << roots[i].second.id
       << " [style=dashed];\n";
    visit(roots[i].second);
  }
  while (!todo.empty()) {
    node_ref r = todo.back();
    todo.pop_back();
    if (t.is_terminal(r)) {
      payload p = t.terminal_payload(r);
      os << "  n" << r.id << " [shape=box, label=\"" << payload_text(p)
         << "\"";
      if (p.accepting())
        os << ", style=filled, fillcolor=\"#c8f7c5\", peripheries=2";
      os << "];\n";
      continue;
    }
    os << "  n" << r.id << " [shape=circle, label=\"" << var_name(t.var_at(r))
       << "\"];\n";
    os << "  n" << r.id << " -> n" << t.low(r).id << " [style=dashed];\n";
    os << "  n" << r.id << " -> n" << t.high(r).id << ";\n";
    visit(t.low(r));
    visit(t.high(r));
  }
  os << "}\n";
}

}  // namespace ltlf
