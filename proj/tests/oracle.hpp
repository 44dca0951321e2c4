#pragma once

// Reference implementations used only by the tests. The evaluator reads
// the definitions of the operators directly (box as "everywhere in the
// window", and so on) and does not share code with the library evaluator.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ltlpm/ltlpm.hpp"

namespace oracle {

using ltlpm::Formula;
using ltlpm::Op;
using ltlpm::PeriodicModel;
using ltlpm::Row;
using ltlpm::Rule;

inline const Row& row_at(const PeriodicModel& model, std::size_t a) {
  const auto& pre = model.prefix();
  if (a < pre.size()) return pre[a];
  return model.loop()[(a - pre.size()) % model.loop().size()];
}

inline std::size_t window_at(const PeriodicModel& model, std::size_t a) {
  const auto& b = model.bound();
  if (b.is_uniform()) return b.m();
  return a < b.window_prefix().size() ? b.window_prefix()[a] : b.window_loop()[0];
}

inline bool letter(const PeriodicModel& model, const std::string& name, std::size_t a) {
  for (std::size_t i = 0; i < model.letters().size(); ++i)
    if (model.letters()[i] == name) return row_at(model, a)[i];
  throw std::out_of_range("oracle: unknown letter " + name);
}

/// Direct recursive evaluation. `unbounded` lets Since look as far as a
/// whole period past a, which is enough on a lasso.
inline bool naive_eval(const PeriodicModel& model, const Formula& f, std::size_t a, bool unbounded = false) {
  const std::size_t reach =
      unbounded ? model.prefix().size() + model.loop().size() + 1 : window_at(model, a);
  auto since = [&](const Formula& l, const Formula& r) {
    for (std::size_t b = a; b <= a + reach; ++b) {
      bool run = true;
      for (std::size_t c = a; c < b && run; ++c) run = naive_eval(model, l, c, unbounded);
      if (run && naive_eval(model, r, b, unbounded)) return true;
    }
    return false;
  };
  switch (f.op()) {
    case Op::Atom: return letter(model, f.name(), a);
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Not: return !naive_eval(model, f.child(), a, unbounded);
    case Op::And: return naive_eval(model, f.lhs(), a, unbounded) && naive_eval(model, f.rhs(), a, unbounded);
    case Op::Or: return naive_eval(model, f.lhs(), a, unbounded) || naive_eval(model, f.rhs(), a, unbounded);
    case Op::Implies: return !naive_eval(model, f.lhs(), a, unbounded) || naive_eval(model, f.rhs(), a, unbounded);
    case Op::Next: return naive_eval(model, f.child(), a + 1, unbounded);
    case Op::Since: return since(f.lhs(), f.rhs());
    case Op::Box:
    case Op::K2:
      for (std::size_t b = a; b <= a + reach; ++b)
        if (!naive_eval(model, f.child(), b, unbounded)) return false;
      return true;
    case Op::Diamond:
      for (std::size_t b = a; b <= a + reach; ++b)
        if (naive_eval(model, f.child(), b, unbounded)) return true;
      return false;
    case Op::K1: return since(f.child(), f.child());
    case Op::KPar: return since(f.rhs(), f.lhs());
  }
  return false;
}

/// Number of states to inspect so that every state class of the lasso is seen.
inline std::size_t horizon(const PeriodicModel& model) {
  std::size_t stable = model.prefix().size();
  if (!model.bound().is_uniform()) stable = std::max(stable, model.bound().window_prefix().size());
  return stable + model.loop().size();
}

inline bool naive_valid(const PeriodicModel& model, const Formula& f) {
  for (std::size_t a = 0; a < horizon(model); ++a)
    if (!naive_eval(model, f, a)) return false;
  return true;
}

inline bool naive_rule_holds(const PeriodicModel& model, const Rule& r) {
  for (const auto& p : r.premises())
    if (!naive_valid(model, p)) return true;
  return naive_valid(model, r.conclusion());
}

/// Calls `visit` on every lasso over `letters` with 1 <= |prefix|+|loop| <= max_size
/// until it returns true.
inline bool for_each_model(const std::vector<std::string>& letters, std::size_t m, std::size_t max_size,
                           const std::function<bool(const PeriodicModel&)>& visit) {
  const std::size_t L = letters.size();
  for (std::size_t total = 1; total <= max_size; ++total)
    for (std::size_t plen = 0; plen < total; ++plen)
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << (L * total)); ++v) {
        std::vector<Row> prefix, loop;
        for (std::size_t a = 0; a < total; ++a) {
          Row row(L);
          for (std::size_t j = 0; j < L; ++j) row[j] = (v >> (a * L + j)) & 1u;
          (a < plen ? prefix : loop).push_back(row);
        }
        if (visit(PeriodicModel(letters, prefix, loop, ltlpm::Bound::uniform(m)))) return true;
      }
  return false;
}

/// Some lasso of size <= max_size refutes r.
inline bool refutable_small(const Rule& r, std::size_t m, std::size_t max_size) {
  const auto vars = r.variables();
  const std::vector<std::string> letters(vars.begin(), vars.end());
  return for_each_model(letters, m, max_size, [&](const PeriodicModel& model) { return !naive_rule_holds(model, r); });
}

// Fuzzers.

struct FormulaShape {
  std::vector<std::string> letters{"p", "q"};
  std::size_t depth = 3;
  bool derived = true;
  bool knowledge = true;
  bool constants = true;
};

inline Formula random_formula(std::mt19937_64& rng, const FormulaShape& shape, std::size_t depth) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  if (depth == 0 || pick(4) == 0) {
    if (shape.constants && pick(10) == 0) return pick(2) ? Formula::top() : Formula::bottom();
    return Formula::atom(shape.letters[pick(shape.letters.size())]);
  }
  std::vector<Op> ops{Op::Not, Op::And, Op::Or, Op::Implies, Op::Next, Op::Since, Op::Since};
  if (shape.derived) ops.insert(ops.end(), {Op::Box, Op::Diamond});
  if (shape.knowledge) ops.insert(ops.end(), {Op::K1, Op::K2, Op::KPar});
  const Op op = ops[pick(ops.size())];
  const Formula a = random_formula(rng, shape, depth - 1);
  if (ltlpm::arity(op) == 1) return Formula::make(op, a, Formula::top());
  return Formula::make(op, a, random_formula(rng, shape, depth - 1));
}

inline Formula random_formula(std::mt19937_64& rng, const FormulaShape& shape) {
  return random_formula(rng, shape, shape.depth);
}

inline PeriodicModel random_model(std::mt19937_64& rng, const std::vector<std::string>& letters,
                                  std::size_t max_prefix, std::size_t max_loop, const ltlpm::Bound& bound) {
  auto rows = [&](std::size_t n) {
    std::vector<Row> out(n, Row(letters.size()));
    for (auto& r : out)
      for (std::size_t j = 0; j < letters.size(); ++j) r[j] = rng() & 1u;
    return out;
  };
  const std::size_t p = rng() % (max_prefix + 1);
  const std::size_t l = 1 + rng() % max_loop;
  return PeriodicModel(letters, rows(p), rows(l), bound);
}

}  // namespace oracle
