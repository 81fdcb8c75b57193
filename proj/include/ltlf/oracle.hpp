// Desk-scale ground truth, independent of the MTBDD machinery: formula
// progression one assignment at a time, an explicit-alphabet DFA built
// from it, and a textbook fixpoint solver for the induced game.  These
// exist for differential testing only and guard their input sizes.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ltlf/canonical.hpp"
#include "ltlf/formula.hpp"
#include "ltlf/word.hpp"

namespace ltlf {
namespace oracle {

// One-step progression: the residual obligation after reading one
// assignment, plus whether the word may stop on that assignment.
inline std::pair<formula, bool> progress(formula f, const assignment& w) {
  switch (f.kind()) {
    case op::tt:
      return {formula::tt(), true};
    case op::ff:
      return {formula::ff(), false};
    case op::ap: {
      bool v = w.value(f.var());
      return {v ? formula::tt() : formula::ff(), v};
    }
    case op::Not: {
      auto [g, b] = progress(f[0], w);
      return {formula::Not(g), !b};
    }
    case op::And:
    case op::Or: {
      std::vector<formula> kids;
      kids.reserve(f.size());
      bool conj = f.is(op::And);
      bool b = conj;
      for (std::size_t i = 0; i < f.size(); ++i) {
        auto [g, bi] = progress(f[i], w);
        kids.push_back(g);
        b = conj ? (b && bi) : (b || bi);
      }
      return {conj ? formula::And(std::move(kids))
                   : formula::Or(std::move(kids)),
              b};
    }
    case op::Implies: {
      auto [g1, b1] = progress(f[0], w);
      auto [g2, b2] = progress(f[1], w);
      return {formula::Implies(g1, g2), !b1 || b2};
    }
    case op::Equiv: {
      auto [g1, b1] = progress(f[0], w);
      auto [g2, b2] = progress(f[1], w);
      return {formula::Equiv(g1, g2), b1 == b2};
    }
    case op::Xor: {
      auto [g1, b1] = progress(f[0], w);
      auto [g2, b2] = progress(f[1], w);
      return {formula::Xor(g1, g2), b1 != b2};
    }
    case op::X:
      return {f[0], true};
    case op::strong_X:
      return {f[0], false};
    case op::F: {
      auto [g, b] = progress(f[0], w);
      return {formula::Or({g, f}), b};
    }
    case op::G: {
      auto [g, b] = progress(f[0], w);
      return {formula::And({g, f}), b};
    }
    case op::U: {
      auto [g1, b1] = progress(f[0], w);
      auto [g2, b2] = progress(f[1], w);
      (void)b1;
      return {formula::Or({g2, formula::And({g1, f})}), b2};
    }
    case op::R: {
      auto [g1, b1] = progress(f[0], w);
      auto [g2, b2] = progress(f[1], w);
      (void)b1;
      return {formula::And({g2, formula::Or({g1, f})}), b2};
    }
  }
  throw std::logic_error("progress: unhandled operator");
}

// Explicit DFA over the full alphabet of 2^|P| assignments.
struct explicit_dfa {
  std::vector<var_id> vars;
  std::vector<assignment> alphabet;            // all 2^|vars| letters
  std::vector<formula> states;                 // canonical, [0] initial
  std::vector<std::vector<std::uint32_t>> next;     // [state][letter]
  std::vector<std::vector<bool>> accepting_move;    // [state][letter]

  bool accepts(const word& w) const {
    std::uint32_t q = 0;
    bool acc = false;
    for (const assignment& a : w) {
      std::size_t letter = letter_index(a);
      acc = accepting_move[q][letter];
      q = next[q][letter];
    }
    return acc;
  }

  std::size_t letter_index(const assignment& a) const {
    std::size_t bits = 0;
    for (std::size_t i = 0; i < vars.size(); ++i)
      bits |= static_cast<std::size_t>(a.value(vars[i])) << i;
    return bits;
  }
};

// Builds the explicit DFA by closing the initial formula under
// progression over every letter.  Guarded: at most 6 variables and
// 4096 states, failing loudly beyond that.
inline explicit_dfa build_explicit(formula f, const std::vector<var_id>& vars,
                                   canonicalizer& canon) {
  if (vars.size() > 6)
    throw std::invalid_argument("build_explicit: more than 6 variables");
  explicit_dfa d;
  d.vars = vars;
  std::size_t n_letters = std::size_t{1} << vars.size();
  for (std::size_t bits = 0; bits < n_letters; ++bits)
    d.alphabet.push_back(assignment(vars, bits));

  std::unordered_map<std::uint32_t, std::uint32_t> index;
  d.states.push_back(canon.canonical(f));
  index.emplace(d.states[0].id(), 0);
  for (std::size_t i = 0; i < d.states.size(); ++i) {
    if (d.states.size() > 4096)
      throw std::invalid_argument("build_explicit: state guard exceeded");
    d.next.emplace_back();
    d.accepting_move.emplace_back();
    for (const assignment& a : d.alphabet) {
      auto [g, b] = progress(d.states[i], a);
      g = canon.canonical(g);
      auto [it, is_new] =
          index.emplace(g.id(), static_cast<std::uint32_t>(d.states.size()));
      if (is_new)
        d.states.push_back(g);
      d.next[i].push_back(it->second);
      d.accepting_move[i].push_back(b);
    }
  }
  return d;
}

// Realizability on the explicit DFA by a growing fixpoint: a state is
// winning when, depending on the semantics, for every input there is
// an output (Mealy) or there is an output for every input (Moore)
// whose move either accepts immediately or continues to a winning
// state.
inline bool solve_explicit_game(const explicit_dfa& d, const partition& part,
                                semantics sem) {
  std::size_t n_in = std::size_t{1} << part.inputs.size();
  std::size_t n_out = std::size_t{1} << part.outputs.size();
  // Letter index of each (input, output) pair.
  std::vector<std::vector<std::size_t>> letter(n_in,
                                               std::vector<std::size_t>(n_out));
  for (std::size_t i = 0; i < n_in; ++i)
    for (std::size_t o = 0; o < n_out; ++o)
      letter[i][o] = d.letter_index(
          assignment::combine(assignment(part.inputs, i),
                              assignment(part.outputs, o)));

  std::vector<bool> winning(d.states.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t q = 0; q < d.states.size(); ++q) {
      if (winning[q])
        continue;
      auto good_move = [&](std::size_t i, std::size_t o) {
        std::size_t l = letter[i][o];
        return d.accepting_move[q][l] || winning[d.next[q][l]];
      };
      bool win;
      if (sem == semantics::mealy) {
        win = true;
        for (std::size_t i = 0; win && i < n_in; ++i) {
          bool some = false;
          for (std::size_t o = 0; !some && o < n_out; ++o)
            some = good_move(i, o);
          win = some;
        }
      } else {
        win = false;
        for (std::size_t o = 0; !win && o < n_out; ++o) {
          bool all = true;
          for (std::size_t i = 0; all && i < n_in; ++i)
            all = good_move(i, o);
          win = all;
        }
      }
      if (win) {
        winning[q] = true;
        changed = true;
      }
    }
  }
  return winning[0];
}

}  // namespace oracle
}  // namespace ltlf
