// Option plumbing shared by the command-line tools.

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlf/formula.hpp"
#include "ltlf/parser.hpp"
#include "ltlf/word.hpp"

namespace cli {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_budget = 3;
constexpr int exit_internal = 4;

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty())
        out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty())
    out.push_back(cur);
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline ltlf::formula load_formula(const std::string& arg,
                                  const std::string& file) {
  if (!file.empty())
    return ltlf::parse(read_file(file));
  if (!arg.empty())
    return ltlf::parse(arg);
  throw std::runtime_error("no formula given (positional argument or -f FILE)");
}

// Builds the input/output partition from explicit comma lists, or,
// when requested, from the first letter of each variable name.
inline ltlf::partition resolve_partition(ltlf::formula f,
                                         const std::string& ins,
                                         const std::string& outs,
                                         bool guess_io) {
  ltlf::partition part;
  if (!ins.empty() || !outs.empty()) {
    for (const std::string& name : split_commas(ins))
      part.inputs.push_back(ltlf::formula::ap(name).var());
    for (const std::string& name : split_commas(outs))
      part.outputs.push_back(ltlf::formula::ap(name).var());
  } else if (guess_io) {
    for (ltlf::var_id v : f.collect_aps()) {
      const std::string& name = ltlf::var_name(v);
      if (!name.empty() && name[0] == 'i')
        part.inputs.push_back(v);
      else if (!name.empty() && name[0] == 'o')
        part.outputs.push_back(v);
      else
        throw std::runtime_error(
            "--guess-io: variable '" + name +
            "' starts with neither 'i' nor 'o'");
    }
  } else {
    throw std::runtime_error(
        "a partition is required: --ins/--outs or --guess-io");
  }
  part.check_disjoint();
  part.check_covers(f);
  return part;
}

inline void write_artifact(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace cli
