// Textual exchange formats for MTDFAs.
//
// DOT output follows the usual decision-diagram conventions: states
// are dashed boxes pointing at their transition root, internal nodes
// branch dashed (low) and solid (high), and accepting terminals are
// doubled and filled.
//
// The plain-text dump is line oriented and parses back:
//
//   mtdfa 1
//   vars <n> <name>...
//   states <n>
//   state <index> <formula text>
//   nodes <n>
//   term <id> <state-index> <0|1>
//   node <id> <var-name> <low-id> <high-id>
//   root <state-index> <id>
//   end
//
// Node ids 0 and 1 are reserved for the Boolean false and true
// leaves; every other id must be defined before it is referenced.

#pragma once

#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltlf/mtdfa.hpp"

namespace ltlf {

inline void dump_dot(std::ostream& os, const mtdfa& a) {
  std::vector<std::pair<std::string, node_ref>> roots;
  for (std::uint32_t i = 0; i < a.state_count(); ++i)
    roots.emplace_back(to_string(a.states()[i]), a.delta()[i]);
  dump_dot(os, a.ctx().table(), roots, [&a](payload p) {
    auto [f, b] = a.ctx().resolve(p);
    (void)b;
    return to_string(f);
  });
}

inline std::string to_dot(const mtdfa& a) {
  std::ostringstream os;
  dump_dot(os, a);
  return os.str();
}

inline void dump_text(std::ostream& os, const mtdfa& a) {
  const node_table& t = a.ctx().table();
  os << "mtdfa 1\n";
  os << "vars " << a.vars().size();
  for (var_id v : a.vars())
    os << ' ' << var_name(v);
  os << '\n';
  os << "states " << a.state_count() << '\n';
  for (std::uint32_t i = 0; i < a.state_count(); ++i)
    os << "state " << i << ' ' << a.states()[i] << '\n';

  // Local ids in child-before-parent order; 0/1 are the Boolean
  // leaves.
  std::unordered_map<std::uint32_t, std::uint32_t> local{
      {t.false_leaf().id, 0}, {t.true_leaf().id, 1}};
  std::vector<node_ref> order;
  auto number = [&](auto&& self, node_ref r) -> void {
    if (local.count(r.id))
      return;
    if (!t.is_terminal(r)) {
      self(self, t.low(r));
      self(self, t.high(r));
    }
    local.emplace(r.id, static_cast<std::uint32_t>(local.size()));
    order.push_back(r);
  };
  for (node_ref r : a.delta())
    number(number, r);
  os << "nodes " << order.size() << '\n';
  for (node_ref r : order) {
    if (t.is_terminal(r)) {
      payload p = t.terminal_payload(r);
      auto [f, b] = a.ctx().resolve(p);
      os << "term " << local.at(r.id) << ' ' << a.state_index(f) << ' '
         << (b ? 1 : 0) << '\n';
    } else {
      os << "node " << local.at(r.id) << ' ' << var_name(t.var_at(r)) << ' '
         << local.at(t.low(r).id) << ' ' << local.at(t.high(r).id) << '\n';
    }
  }
  for (std::uint32_t i = 0; i < a.state_count(); ++i)
    os << "root " << i << ' ' << local.at(a.delta()[i].id) << '\n';
  os << "end\n";
}

inline std::string to_text(const mtdfa& a) {
  std::ostringstream os;
  dump_text(os, a);
  return os.str();
}

// Rebuilds an automaton from its dump_text form, in a fresh
// translator.
inline mtdfa parse_text(const std::string& text,
                        const translate_options& opts = {}) {
  std::istringstream in(text);
  std::string kw;
  auto fail = [](const std::string& msg) -> void {
    throw std::runtime_error("parse_text: " + msg);
  };
  int version = 0;
  if (!(in >> kw >> version) || kw != "mtdfa" || version != 1)
    fail("bad header");

  std::size_t nvars = 0;
  if (!(in >> kw >> nvars) || kw != "vars")
    fail("bad vars line");
  std::vector<var_id> vars;
  for (std::size_t i = 0; i < nvars; ++i) {
    std::string name;
    if (!(in >> name))
      fail("missing variable name");
    vars.push_back(formula::ap(name).var());
  }
  auto ctx = std::make_shared<translator>(vars, opts);
  node_table& t = ctx->table();

  std::size_t nstates = 0;
  if (!(in >> kw >> nstates) || kw != "states")
    fail("bad states line");
  std::vector<formula> states(nstates);
  for (std::size_t i = 0; i < nstates; ++i) {
    std::size_t idx = 0;
    std::string line;
    if (!(in >> kw >> idx) || kw != "state" || idx >= nstates)
      fail("bad state line");
    std::getline(in, line);
    states[idx] = parse(line);
  }

  std::size_t nnodes = 0;
  if (!(in >> kw >> nnodes) || kw != "nodes")
    fail("bad nodes line");
  std::unordered_map<std::uint32_t, node_ref> by_local{
      {0, t.false_leaf()}, {1, t.true_leaf()}};
  auto lookup = [&](std::uint32_t id) {
    auto it = by_local.find(id);
    if (it == by_local.end())
      throw std::runtime_error("parse_text: undefined node id " +
                               std::to_string(id));
    return it->second;
  };
  for (std::size_t i = 0; i < nnodes; ++i) {
    if (!(in >> kw))
      fail("truncated node section");
    if (kw == "term") {
      std::uint32_t id = 0, state = 0;
      int acc = 0;
      if (!(in >> id >> state >> acc) || state >= nstates)
        fail("bad term line");
      node_ref r = t.make_terminal(
          payload::tagged(ctx->index_of(states[state]), acc != 0));
      by_local.emplace(id, r);
    } else if (kw == "node") {
      std::uint32_t id = 0, lo = 0, hi = 0;
      std::string name;
      if (!(in >> id >> name >> lo >> hi))
        fail("bad node line");
      node_ref r =
          t.make_node(formula::ap(name).var(), lookup(lo), lookup(hi));
      by_local.emplace(id, r);
    } else {
      fail("unexpected keyword '" + kw + "' in node section");
    }
  }

  std::vector<node_ref> delta(nstates);
  std::vector<bool> have_root(nstates, false);
  for (std::size_t i = 0; i < nstates; ++i) {
    std::uint32_t state = 0, id = 0;
    if (!(in >> kw >> state >> id) || kw != "root" || state >= nstates)
      fail("bad root line");
    delta[state] = lookup(id);
    have_root[state] = true;
  }
  for (std::size_t i = 0; i < nstates; ++i)
    if (!have_root[i])
      fail("missing root for state " + std::to_string(i));
  if (!(in >> kw) || kw != "end")
    fail("missing end marker");

  mtdfa a(std::move(ctx), std::move(states), std::move(delta));
  a.check_closure();
  return a;
}

}  // namespace ltlf
