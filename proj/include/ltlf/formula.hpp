// Hash-consed LTLf formulas over named propositions, interpreted on
// finite nonempty words.
//
// Formulas are immutable nodes owned by a process-wide interner:
// structurally equal terms share one node, so identity comparison
// (formula::id() or operator==) is structural equality.  N-ary
// conjunctions and disjunctions keep their operands sorted by
// interner id and deduplicated, which makes many syntactic rewrites
// cheap set operations.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ltlf {

using var_id = std::uint32_t;

enum class op : std::uint8_t {
  tt,
  ff,
  ap,        // atomic proposition
  Not,
  And,       // n-ary, sorted, deduplicated
  Or,        // n-ary, sorted, deduplicated
  Implies,
  Equiv,
  Xor,
  X,         // weak next: holds vacuously at the last position
  strong_X,  // strong next: requires a successor position
  U,
  R,
  F,
  G,
};

constexpr const char* op_name(op o) {
  switch (o) {
    case op::tt: return "tt";
    case op::ff: return "ff";
    case op::ap: return "ap";
    case op::Not: return "!";
    case op::And: return "&";
    case op::Or: return "|";
    case op::Implies: return "->";
    case op::Equiv: return "<->";
    case op::Xor: return "^";
    case op::X: return "X";
    case op::strong_X: return "X[!]";
    case op::U: return "U";
    case op::R: return "R";
    case op::F: return "F";
    case op::G: return "G";
  }
  return "?";
}

constexpr bool is_temporal(op o) {
  switch (o) {
    case op::X:
    case op::strong_X:
    case op::U:
    case op::R:
    case op::F:
    case op::G:
      return true;
    default:
      return false;
  }
}

class formula;

namespace detail {

struct fnode {
  op kind;
  bool boolean;         // no temporal operator anywhere below
  var_id var;           // for op::ap
  std::uint32_t id;     // interner sequence number
  std::vector<const fnode*> kids;
};

// Process-wide append-only interner.  Lookups on existing nodes are
// lock-free reads of immutable data; insertions are serialized.
class store {
 public:
  static store& instance() {
    static store s;
    return s;
  }

  const fnode* leaf(op kind) {
    return kind == op::tt ? tt_ : ff_;
  }

  const fnode* ap(const std::string& name) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = var_by_name_.find(name);
    if (it == var_by_name_.end()) {
      var_id v = static_cast<var_id>(var_names_.size());
      var_names_.push_back(name);
      it = var_by_name_.emplace(name, v).first;
    }
    return intern(op::ap, it->second, {});
  }

  const fnode* make(op kind, std::vector<const fnode*> kids) {
    std::lock_guard<std::mutex> lock(mutex_);
    return intern(kind, 0, std::move(kids));
  }

  const std::string& var_name(var_id v) const {
    // var_names_ is append-only; reading an existing entry is safe.
    return var_names_.at(v);
  }

  std::size_t var_count() const { return var_names_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  store() {
    tt_ = intern(op::tt, 0, {});
    ff_ = intern(op::ff, 0, {});
  }

  struct key {
    op kind;
    var_id var;
    std::vector<const fnode*> kids;
    bool operator==(const key& o) const {
      return kind == o.kind && var == o.var && kids == o.kids;
    }
  };
  struct key_hash {
    std::size_t operator()(const key& k) const {
      std::size_t h = (static_cast<std::size_t>(k.kind) << 8) ^ k.var;
      for (const fnode* n : k.kids)
        h = h * 0x9e3779b97f4a7c15ULL + n->id;
      return h;
    }
  };

  const fnode* intern(op kind, var_id var, std::vector<const fnode*> kids) {
    key k{kind, var, std::move(kids)};
    auto it = unique_.find(k);
    if (it != unique_.end())
      return it->second;
    bool boolean = !is_temporal(kind);
    for (const fnode* c : k.kids)
      boolean = boolean && c->boolean;
    nodes_.push_back(fnode{kind, boolean, var,
                           static_cast<std::uint32_t>(nodes_.size()),
                           k.kids});
    const fnode* n = &nodes_.back();
    unique_.emplace(std::move(k), n);
    return n;
  }

  std::mutex mutex_;
  std::deque<fnode> nodes_;  // stable addresses
  std::unordered_map<key, const fnode*, key_hash> unique_;
  std::vector<std::string> var_names_;
  std::unordered_map<std::string, var_id> var_by_name_;
  const fnode* tt_;
  const fnode* ff_;
};

}  // namespace detail

// Lightweight handle to an interned formula node.
class formula {
 public:
  formula() : ptr_(nullptr) {}

  static formula tt() { return formula(detail::store::instance().leaf(op::tt)); }
  static formula ff() { return formula(detail::store::instance().leaf(op::ff)); }

  static formula ap(const std::string& name) {
    return formula(detail::store::instance().ap(name));
  }

  static formula Not(formula f) {
    if (f.is(op::tt)) return ff();
    if (f.is(op::ff)) return tt();
    if (f.is(op::Not)) return f[0];
    return make(op::Not, {f});
  }

  static formula And(std::vector<formula> kids) {
    return nary(op::And, std::move(kids));
  }
  static formula And(std::initializer_list<formula> kids) {
    return nary(op::And, std::vector<formula>(kids));
  }
  static formula Or(std::vector<formula> kids) {
    return nary(op::Or, std::move(kids));
  }
  static formula Or(std::initializer_list<formula> kids) {
    return nary(op::Or, std::vector<formula>(kids));
  }

  static formula Implies(formula a, formula b) {
    if (a.is(op::tt)) return b;
    if (a.is(op::ff)) return tt();
    if (b.is(op::tt)) return tt();
    if (b.is(op::ff)) return Not(a);
    return make(op::Implies, {a, b});
  }

  static formula Equiv(formula a, formula b) {
    if (a.is(op::tt)) return b;
    if (a.is(op::ff)) return Not(b);
    if (b.is(op::tt)) return a;
    if (b.is(op::ff)) return Not(a);
    return make(op::Equiv, {a, b});
  }

  static formula Xor(formula a, formula b) {
    if (a.is(op::tt)) return Not(b);
    if (a.is(op::ff)) return b;
    if (b.is(op::tt)) return Not(a);
    if (b.is(op::ff)) return a;
    return make(op::Xor, {a, b});
  }

  static formula X(formula f) {
    if (f.is(op::tt)) return tt();
    return make(op::X, {f});
  }

  static formula strong_X(formula f) {
    if (f.is(op::ff)) return ff();
    return make(op::strong_X, {f});
  }

  static formula F(formula f) {
    if (f.is(op::tt) || f.is(op::ff) || f.is(op::F)) return f;
    return make(op::F, {f});
  }

  static formula G(formula f) {
    if (f.is(op::tt) || f.is(op::ff) || f.is(op::G)) return f;
    return make(op::G, {f});
  }

  static formula U(formula a, formula b) {
    if (b.is(op::tt) || b.is(op::ff)) return b;
    if (a.is(op::ff)) return b;
    if (a.is(op::tt)) return F(b);
    return make(op::U, {a, b});
  }

  static formula R(formula a, formula b) {
    if (b.is(op::tt) || b.is(op::ff)) return b;
    if (a.is(op::tt)) return b;
    if (a.is(op::ff)) return G(b);
    return make(op::R, {a, b});
  }

  // Binary Boolean combination by operator tag.
  static formula binop(op o, formula a, formula b) {
    switch (o) {
      case op::And: return And({a, b});
      case op::Or: return Or({a, b});
      case op::Implies: return Implies(a, b);
      case op::Equiv: return Equiv(a, b);
      case op::Xor: return Xor(a, b);
      default: throw std::logic_error("binop: not a binary Boolean operator");
    }
  }

  op kind() const { return ptr_->kind; }
  bool is(op o) const { return ptr_->kind == o; }
  bool is_tt() const { return is(op::tt); }
  bool is_ff() const { return is(op::ff); }
  bool is_constant() const { return is_tt() || is_ff(); }
  // True when no temporal operator occurs in the formula.
  bool is_boolean() const { return ptr_->boolean; }
  bool is_temporal_node() const { return is_temporal(ptr_->kind); }

  std::uint32_t id() const { return ptr_->id; }
  std::size_t size() const { return ptr_->kids.size(); }
  formula operator[](std::size_t i) const { return formula(ptr_->kids.at(i)); }

  var_id var() const {
    if (!is(op::ap))
      throw std::logic_error("formula::var: not an atomic proposition");
    return ptr_->var;
  }
  const std::string& name() const {
    return detail::store::instance().var_name(var());
  }

  // Number of syntax-tree nodes.
  std::size_t tree_size() const {
    std::size_t n = 1;
    for (const detail::fnode* k : ptr_->kids)
      n += formula(k).tree_size();
    return n;
  }

  template <typename Fn>
  void for_each_ap(Fn&& fn) const {
    if (is(op::ap)) {
      fn(var());
      return;
    }
    for (const detail::fnode* k : ptr_->kids)
      formula(k).for_each_ap(fn);
  }

  std::vector<var_id> collect_aps() const {
    std::vector<var_id> out;
    for_each_ap([&](var_id v) {
      for (var_id u : out)
        if (u == v) return;
      out.push_back(v);
    });
    return out;
  }

  bool operator==(const formula& o) const { return ptr_ == o.ptr_; }
  bool operator!=(const formula& o) const { return ptr_ != o.ptr_; }
  bool operator<(const formula& o) const { return ptr_->id < o.ptr_->id; }
  explicit operator bool() const { return ptr_ != nullptr; }

  struct hash {
    std::size_t operator()(const formula& f) const {
      return f.ptr_ ? f.ptr_->id : 0;
    }
  };

 private:
  explicit formula(const detail::fnode* p) : ptr_(p) {}

  static formula make(op kind, std::initializer_list<formula> kids) {
    std::vector<const detail::fnode*> ptrs;
    ptrs.reserve(kids.size());
    for (const formula& k : kids)
      ptrs.push_back(k.ptr_);
    return formula(detail::store::instance().make(kind, std::move(ptrs)));
  }

  static formula nary(op kind, std::vector<formula> kids) {
    formula absorbing = kind == op::And ? ff() : tt();
    formula neutral = kind == op::And ? tt() : ff();
    std::vector<const detail::fnode*> flat;
    flat.reserve(kids.size());
    // Flatten nested operators of the same kind.
    auto push = [&](const auto& self, formula f) -> bool {
      if (f == absorbing)
        return true;
      if (f == neutral)
        return false;
      if (f.is(kind)) {
        for (std::size_t i = 0; i < f.size(); ++i)
          if (self(self, f[i]))
            return true;
        return false;
      }
      flat.push_back(f.ptr_);
      return false;
    };
    for (const formula& k : kids)
      if (push(push, k))
        return absorbing;
    std::sort(flat.begin(), flat.end(),
              [](const detail::fnode* a, const detail::fnode* b) {
                return a->id < b->id;
              });
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty())
      return neutral;
    if (flat.size() == 1)
      return formula(flat[0]);
    return formula(detail::store::instance().make(kind, std::move(flat)));
  }

  const detail::fnode* ptr_;
};

inline const std::string& var_name(var_id v) {
  return detail::store::instance().var_name(v);
}

namespace detail {

// Binding strength, loosest first.  Parser and printer share it.
inline int precedence(op o) {
  switch (o) {
    case op::Equiv: return 1;
    case op::Implies: return 2;
    case op::Or: return 3;
    case op::Xor: return 4;
    case op::And: return 5;
    case op::U:
    case op::R: return 6;
    default: return 7;  // unary and atoms
  }
}

inline void print_rec(std::ostream& os, formula f, int parent_level,
                      bool tight) {
  int level = precedence(f.kind());
  bool parens = level < parent_level || (level == parent_level && tight);
  switch (f.kind()) {
    case op::tt: os << "tt"; return;
    case op::ff: os << "ff"; return;
    case op::ap: os << f.name(); return;
    case op::Not:
      os << '!';
      print_rec(os, f[0], 7, false);
      return;
    case op::X:
    case op::strong_X:
    case op::F:
    case op::G:
      os << op_name(f.kind()) << ' ';
      print_rec(os, f[0], 7, false);
      return;
    case op::U:
    case op::R:
      if (parens) os << '(';
      print_rec(os, f[0], level, true);   // right-assoc
      os << ' ' << op_name(f.kind()) << ' ';
      print_rec(os, f[1], level, false);
      if (parens) os << ')';
      return;
    case op::Implies:
    case op::Equiv:
      if (parens) os << '(';
      print_rec(os, f[0], level, true);   // right-assoc
      os << ' ' << op_name(f.kind()) << ' ';
      print_rec(os, f[1], level, false);
      if (parens) os << ')';
      return;
    case op::Xor:
      if (parens) os << '(';
      print_rec(os, f[0], level, false);  // left-assoc
      os << ' ' << op_name(f.kind()) << ' ';
      print_rec(os, f[1], level, true);
      if (parens) os << ')';
      return;
    case op::And:
    case op::Or: {
      if (parens) os << '(';
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (i > 0)
          os << ' ' << op_name(f.kind()) << ' ';
        print_rec(os, f[i], level, true);
      }
      if (parens) os << ')';
      return;
    }
  }
}

}  // namespace detail

inline std::ostream& operator<<(std::ostream& os, formula f) {
  detail::print_rec(os, f, 0, false);
  return os;
}

inline std::string to_string(formula f) {
  std::ostringstream os;
  os << f;
  return os.str();
}

}  // namespace ltlf
