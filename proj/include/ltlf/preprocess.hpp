// Specification-level reductions applied before the game is solved:
// single-polarity variable elimination, output-disjoint
// decomposition, and the pipeline driver combining them with the
// solver.

#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ltlf/game.hpp"
#include "ltlf/rewrite.hpp"
#include "ltlf/word.hpp"

namespace ltlf {

namespace detail {

// Occurrence polarities of every variable, read off the negative
// normal form (which eliminates <->, ^ and ->, so a variable under
// one of those is seen in both polarities).
struct polarity_info {
  std::unordered_map<var_id, int> flags;  // bit 0: positive, bit 1: negative
  void scan(formula f) {
    if (f.is(op::ap)) {
      flags[f.var()] |= 1;
      return;
    }
    if (f.is(op::Not)) {
      flags[f[0].var()] |= 2;
      return;
    }
    for (std::size_t i = 0; i < f.size(); ++i)
      scan(f[i]);
  }
};

}  // namespace detail

// Substitutes constants for variables that occur with a single
// polarity.  An output the controller can only help by raising is
// fixed to tt (and dually to ff); a single-polarity input is fixed to
// the value the environment would choose against the controller.
// The verdict of the realizability question is preserved.
inline std::pair<formula, partition> polarity_prune(formula f,
                                                    const partition& part) {
  partition cur = part;
  for (;;) {
    detail::polarity_info info;
    info.scan(to_nnf(f));
    bool changed = false;
    partition next;
    for (var_id v : cur.inputs) {
      auto it = info.flags.find(v);
      if (it == info.flags.end() || it->second == 3) {
        if (it != info.flags.end())
          next.inputs.push_back(v);
        continue;
      }
      // Positive-only input: the environment plays ff; dually tt.
      f = substitute(f, v, it->second == 1 ? formula::ff() : formula::tt());
      changed = true;
    }
    for (var_id v : cur.outputs) {
      auto it = info.flags.find(v);
      if (it == info.flags.end() || it->second == 3) {
        if (it != info.flags.end())
          next.outputs.push_back(v);
        continue;
      }
      // Positive-only output: the controller plays tt; dually ff.
      f = substitute(f, v, it->second == 1 ? formula::tt() : formula::ff());
      changed = true;
    }
    if (!changed)
      return {simplify(f), next};
    f = simplify(f);
    cur = next;
  }
}

struct decomposition {
  std::vector<std::pair<formula, partition>> parts;
};

namespace detail {

// Distributes top-level conjunctions and implications into a flat
// list of conjuncts, e.g. a -> (b & c) becomes {a -> b, a -> c}.
inline void distribute_conjuncts(formula f, std::vector<formula>& out) {
  if (f.is(op::And)) {
    for (std::size_t i = 0; i < f.size(); ++i)
      distribute_conjuncts(f[i], out);
    return;
  }
  if (f.is(op::Implies)) {
    std::vector<formula> consequents;
    distribute_conjuncts(f[1], consequents);
    if (consequents.size() > 1) {
      for (formula c : consequents)
        out.push_back(formula::Implies(f[0], c));
      return;
    }
  }
  out.push_back(f);
}

}  // namespace detail

// Groups the conjuncts of a specification into sub-specifications
// with pairwise disjoint output sets (union-find on shared outputs).
// Conjuncts without any output are replicated into every group, since
// they constrain only the environment.  Each part keeps the inputs it
// actually mentions.
inline decomposition decompose(formula f, const partition& part) {
  std::vector<formula> conjuncts;
  detail::distribute_conjuncts(f, conjuncts);

  std::vector<std::vector<var_id>> conjunct_outputs(conjuncts.size());
  std::vector<std::uint32_t> uf(conjuncts.size());
  for (std::uint32_t i = 0; i < conjuncts.size(); ++i)
    uf[i] = i;
  auto find = [&](std::uint32_t x) {
    while (uf[x] != x)
      x = uf[x] = uf[uf[x]];
    return x;
  };

  std::unordered_map<var_id, std::uint32_t> owner_of_output;
  for (std::uint32_t i = 0; i < conjuncts.size(); ++i) {
    for (var_id v : conjuncts[i].collect_aps())
      if (part.is_output(v)) {
        conjunct_outputs[i].push_back(v);
        auto [it, is_new] = owner_of_output.emplace(v, i);
        if (!is_new)
          uf[find(i)] = find(it->second);
      }
  }

  // Group order follows the first conjunct of each group.
  std::unordered_map<std::uint32_t, std::uint32_t> group_no;
  std::vector<std::vector<formula>> groups;
  std::vector<formula> shared;  // output-free conjuncts
  for (std::uint32_t i = 0; i < conjuncts.size(); ++i) {
    if (conjunct_outputs[i].empty()) {
      shared.push_back(conjuncts[i]);
      continue;
    }
    std::uint32_t root = find(i);
    auto [it, is_new] =
        group_no.emplace(root, static_cast<std::uint32_t>(groups.size()));
    if (is_new)
      groups.emplace_back();
    groups[it->second].push_back(conjuncts[i]);
  }
  if (groups.empty())
    groups.push_back({});

  decomposition d;
  for (auto& g : groups) {
    std::vector<formula> all = shared;
    all.insert(all.end(), g.begin(), g.end());
    formula sub = formula::And(std::move(all));
    partition sub_part;
    std::unordered_set<var_id> seen;
    for (var_id v : sub.collect_aps()) {
      if (!seen.insert(v).second)
        continue;
      if (part.is_output(v))
        sub_part.outputs.push_back(v);
      else
        sub_part.inputs.push_back(v);
    }
    d.parts.emplace_back(sub, sub_part);
  }
  return d;
}

struct pipeline_options {
  bool preprocess = true;  // polarity pruning and rewrite simplification
  bool decompose = true;   // output-disjoint decomposition
  solve_options solver;
  enum class mode { bfs, full } solve_mode = mode::bfs;
  unsigned workers = 0;  // 0: one thread per part up to hardware limit
};

// Solves a specification end to end: decompose, prune each part,
// solve each part with a fresh translation unit, and conjoin the
// verdicts.  Parts are independent and may run concurrently; the
// conjunction of verdicts does not depend on scheduling.
inline solve_result solve_decomposed(formula f, const partition& part,
                                     semantics sem,
                                     const pipeline_options& opts = {}) {
  part.check_disjoint();
  part.check_covers(f);

  std::vector<std::pair<formula, partition>> parts;
  if (opts.decompose) {
    decomposition d = decompose(f, part);
    parts = std::move(d.parts);
  } else {
    parts.emplace_back(f, part);
  }
  if (opts.preprocess)
    for (auto& [pf, pp] : parts) {
      std::tie(pf, pp) = polarity_prune(simplify(pf), pp);
    }

  auto solve_one = [&](const std::pair<formula, partition>& p) {
    if (opts.solve_mode == pipeline_options::mode::full)
      return solve_full(p.first, p.second, sem, opts.solver);
    return realizability(p.first, p.second, sem, opts.solver);
  };

  std::vector<solve_result> results(parts.size());
  if (parts.size() <= 1) {
    for (std::size_t i = 0; i < parts.size(); ++i)
      results[i] = solve_one(parts[i]);
  } else {
    unsigned workers = opts.workers ? opts.workers
                                    : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, parts.size()));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto work = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= parts.size())
          return;
        try {
          results[i] = solve_one(parts[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error)
            error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i)
      pool.emplace_back(work);
    for (std::thread& th : pool)
      th.join();
    if (error)
      std::rethrow_exception(error);
  }

  solve_result total;
  total.status = verdict::realizable;
  total.init_winner = game_winner::output;
  for (const solve_result& r : results) {
    total.stats.states_translated += r.stats.states_translated;
    total.stats.states_total += r.stats.states_total;
    total.stats.vertices += r.stats.vertices;
    total.stats.edges += r.stats.edges;
    total.stats.onestep_hits += r.stats.onestep_hits;
    total.stats.early_exit = total.stats.early_exit || r.stats.early_exit;
    if (r.status == verdict::unrealizable) {
      total.status = verdict::unrealizable;
      total.init_winner = r.init_winner;
    }
  }
  if (total.stats.early_exit)
    total.stats.early_exit_reason = "init-determined";
  return total;
}

}  // namespace ltlf
