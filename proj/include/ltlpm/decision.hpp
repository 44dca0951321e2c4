#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ltlpm/error.hpp"
#include "ltlpm/formula.hpp"
#include "ltlpm/model.hpp"
#include "ltlpm/normal_form.hpp"
#include "ltlpm/semantics.hpp"
#include "ltlpm/window_graph.hpp"

namespace ltlpm {

enum class Verdict { Sat, Refuted };

/// A lasso model together with the state where the claim is made: the
/// formula is true there (Sat) or the conclusion is false there (Refuted).
struct LassoWitness {
  PeriodicModel model;
  std::size_t position = 0;
  Verdict verdict = Verdict::Sat;
};

inline nlohmann::json to_json(const LassoWitness& w) {
  nlohmann::json j = to_json(w.model);
  j["position"] = w.position;
  j["verdict"] = w.verdict == Verdict::Sat ? "sat" : "refuted";
  return j;
}

struct TheoremResult {
  bool theorem = false;
  std::optional<LassoWitness> countermodel;
};

namespace detail {

inline PeriodicModel lasso_model(const StateLasso& lasso, const std::vector<std::string>& letters, std::size_t m,
                                 const std::function<Row(std::uint32_t)>& row_of) {
  std::vector<Row> prefix, loop;
  for (auto s : lasso.prefix) prefix.push_back(row_of(s));
  for (auto s : lasso.loop) loop.push_back(row_of(s));
  return PeriodicModel(letters, std::move(prefix), std::move(loop), Bound::uniform(m));
}

/// Bounded Since over one window of truth values: 1 or 0 once decided,
/// -1 while the window is too short to tell.
template <class Lhs, class Rhs>
int window_since(std::size_t len, std::size_t m, Lhs&& lhs, Rhs&& rhs) {
  for (std::size_t b = 0; b < len && b <= m; ++b) {
    if (rhs(b)) return 1;
    if (!lhs(b)) return 0;
  }
  return len > m ? 0 : -1;
}

/// State descriptions for a formula: consistent Boolean assignments to all
/// its subformulas, one bit per subformula.
class FormulaStates {
 public:
  static constexpr std::size_t kMaxSubformulas = 64;
  static constexpr std::size_t kMaxBasis = 24;

  FormulaStates(const Formula& f, std::size_t m, std::size_t node_budget) : m_(m) {
    root_ = index(f);
    std::vector<std::size_t> basis;
    for (std::size_t i = 0; i < subs_.size(); ++i) {
      const Op op = subs_[i].op();
      if (op == Op::Atom || op == Op::Next || op == Op::Since) basis.push_back(i);
      if (op == Op::Next) {
        next_.push_back(i);
        next_child_.push_back(kid_[i].first);
      }
      if (op == Op::Since) since_.push_back(i);
    }
    if (basis.size() > kMaxBasis || (std::size_t{1} << basis.size()) > node_budget)
      throw CapacityExceeded("formula state descriptions", std::min<std::size_t>(node_budget, std::size_t{1} << kMaxBasis),
                             basis.size() >= 63 ? SIZE_MAX : std::size_t{1} << basis.size());

    for (std::uint64_t a = 0; a < (std::uint64_t{1} << basis.size()); ++a) {
      std::uint64_t s = 0;
      for (std::size_t j = 0; j < basis.size(); ++j)
        if ((a >> j) & 1u) s |= std::uint64_t{1} << basis[j];
      for (std::size_t i = 0; i < subs_.size(); ++i) {
        const auto [l, r] = kid_[i];
        bool v = false;
        switch (subs_[i].op()) {
          case Op::Top: v = true; break;
          case Op::Bottom: v = false; break;
          case Op::Not: v = !bit(s, l); break;
          case Op::And: v = bit(s, l) && bit(s, r); break;
          case Op::Or: v = bit(s, l) || bit(s, r); break;
          case Op::Implies: v = !bit(s, l) || bit(s, r); break;
          default: continue;
        }
        if (v) s |= std::uint64_t{1} << i;
      }
      // Since is decided at its own state whenever the right side holds
      // there or the left side fails there.
      bool ok = true;
      for (std::size_t i : since_) {
        const auto [l, r] = kid_[i];
        if (bit(s, r) && !bit(s, i)) ok = false;
        if (!bit(s, r) && !bit(s, l) && bit(s, i)) ok = false;
      }
      if (ok) states_.push_back(s);
    }
    for (std::uint32_t id = 0; id < states_.size(); ++id) groups_[own_key(states_[id])].push_back(id);
  }

  std::size_t state_count() const noexcept { return states_.size(); }
  std::uint64_t state(std::uint32_t id) const noexcept { return states_[id]; }
  std::size_t root() const noexcept { return root_; }
  const std::vector<Formula>& subformulas() const noexcept { return subs_; }

  std::span<const std::uint32_t> successors(std::uint32_t id) const {
    auto it = groups_.find(required_key(states_[id]));
    if (it == groups_.end()) return {};
    return it->second;
  }

  /// Since-coherence of the window's first state; -1 if undecided so far.
  bool window_ok(std::span<const std::uint32_t> w, bool partial) const {
    for (std::size_t i : since_) {
      const auto [l, r] = kid_[i];
      const int v = window_since(
          w.size(), m_, [&](std::size_t b) { return bit(states_[w[b]], l); },
          [&](std::size_t b) { return bit(states_[w[b]], r); });
      if (v < 0) {
        if (!partial) return false;
        continue;
      }
      if (static_cast<bool>(v) != bit(states_[w[0]], i)) return false;
    }
    return true;
  }

  static bool bit(std::uint64_t s, std::size_t i) noexcept { return (s >> i) & 1u; }

 private:
  std::size_t index(const Formula& f) {
    if (auto it = ids_.find(f); it != ids_.end()) return it->second;
    std::pair<std::size_t, std::size_t> kids{0, 0};
    const std::size_t a = arity(f.op());
    if (a == 1) kids.first = index(f.child());
    if (a == 2) {
      kids.first = index(f.lhs());
      kids.second = index(f.rhs());
    }
    if (subs_.size() >= kMaxSubformulas) throw CapacityExceeded("formula subformulas", kMaxSubformulas, subs_.size() + 1);
    subs_.push_back(f);
    kid_.push_back(kids);
    ids_.emplace(f, subs_.size() - 1);
    return subs_.size() - 1;
  }

  // Bits a state shows to a predecessor, and bits a state asks of its successor.
  std::uint64_t own_key(std::uint64_t s) const noexcept {
    std::uint64_t k = 0;
    for (std::size_t j = 0; j < next_child_.size(); ++j)
      if (bit(s, next_child_[j])) k |= std::uint64_t{1} << j;
    return k;
  }
  std::uint64_t required_key(std::uint64_t s) const noexcept {
    std::uint64_t k = 0;
    for (std::size_t j = 0; j < next_.size(); ++j)
      if (bit(s, next_[j])) k |= std::uint64_t{1} << j;
    return k;
  }

  std::size_t m_;
  std::size_t root_ = 0;
  std::vector<Formula> subs_;
  std::vector<std::pair<std::size_t, std::size_t>> kid_;
  std::map<Formula, std::size_t> ids_;
  std::vector<std::size_t> next_, next_child_, since_;
  std::vector<std::uint64_t> states_;
  std::map<std::uint64_t, std::vector<std::uint32_t>> groups_;
};

inline WindowSpec formula_spec(const FormulaStates& fs, std::size_t m, std::size_t node_budget) {
  WindowSpec spec;
  spec.state_count = fs.state_count();
  spec.width = m + 1;
  spec.successors = [&fs](std::uint32_t s) { return fs.successors(s); };
  spec.partial_ok = [&fs](std::span<const std::uint32_t> w) { return fs.window_ok(w, true); };
  spec.accept = [&fs](std::span<const std::uint32_t> w) { return fs.window_ok(w, false); };
  spec.node_budget = node_budget;
  return spec;
}

/// Disjunct patterns of a normal form, grouped for the window search.
/// A state is a t0 pattern (the values of all variables at one position).
class RnfStates {
 public:
  RnfStates(const RnfRule& nf, std::size_t m) : nf_(nf), m_(m), constrained_(nf.constrained_pairs()) {
    std::set<std::uint32_t> t0s;
    for (const auto& d : nf.disjuncts()) t0s.insert(d.t0_mask());
    patterns_.assign(t0s.begin(), t0s.end());
    std::map<std::uint32_t, std::uint32_t> id_of;
    for (std::uint32_t id = 0; id < patterns_.size(); ++id) id_of[patterns_[id]] = id;
    succ_.resize(patterns_.size());
    for (const auto& d : nf.disjuncts()) {
      auto it = id_of.find(d.t1_mask());
      if (it != id_of.end()) succ_[id_of[d.t0_mask()]].push_back(it->second);
      rows_.insert({(std::uint64_t{d.t0_mask()} << 32) | d.t1_mask(), d.ts_mask() & constrained_});
    }
    for (auto& s : succ_) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
  }

  std::size_t state_count() const noexcept { return patterns_.size(); }
  std::uint32_t pattern(std::uint32_t id) const noexcept { return patterns_[id]; }
  std::span<const std::uint32_t> successors(std::uint32_t id) const { return succ_[id]; }

  bool accept(std::span<const std::uint32_t> w) const {
    const std::size_t n = nf_.n();
    PairMask ts = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t b = i * n + k;
        if (!((constrained_ >> b) & 1u)) continue;
        const int v = window_since(
            w.size(), m_, [&](std::size_t c) { return (patterns_[w[c]] >> i) & 1u; },
            [&](std::size_t c) { return (patterns_[w[c]] >> k) & 1u; });
        if (v == 1) ts |= pair_flag(b);
      }
    return rows_.count({(std::uint64_t{patterns_[w[0]]} << 32) | patterns_[w[1]], ts}) != 0;
  }

 private:
  const RnfRule& nf_;
  std::size_t m_;
  PairMask constrained_;
  std::vector<std::uint32_t> patterns_;
  std::vector<std::vector<std::uint32_t>> succ_;
  std::set<std::pair<std::uint64_t, PairMask>> rows_;
};

/// Checks, through the evaluator, that the premise of nf holds everywhere
/// in `model`: at every state some disjunct matches the actual values.
inline bool rnf_premise_valid(const PeriodicModel& model, const RnfRule& nf) {
  const std::size_t n = nf.n();
  const std::size_t span = model.period_start() + model.period();
  std::vector<TruthVector> t0, t1;
  std::vector<std::optional<TruthVector>> ts(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Formula x = Formula::atom(nf.variables()[i]);
    t0.push_back(truth_vector(model, x));
    t1.push_back(truth_vector(model, Formula::next(x)));
    for (std::size_t k = 0; k < n; ++k)
      if (i != k && !nf.is_free(i, k))
        ts[i * n + k] = truth_vector(model, Formula::since(x, Formula::atom(nf.variables()[k])));
  }
  for (std::size_t a = 0; a < span; ++a) {
    bool matched = false;
    for (const auto& d : nf.disjuncts()) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        ok = d.value(i) == t0[i].at(a) && d.next_value(i) == t1[i].at(a);
        for (std::size_t k = 0; k < n && ok; ++k)
          if (ts[i * n + k]) ok = d.since_value(i, k, n) == ts[i * n + k]->at(a);
      }
      if (ok) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace detail

/// Looks for a model where eps holds at every state and x_1 fails at
/// state 0. The witness is built from the least live window whose first
/// state falsifies x_1, followed to the nearest cycle.
inline std::optional<LassoWitness> refutable_rnf(const RnfRule& nf, std::size_t m,
                                                 std::size_t node_budget = kDefaultNodeBudget) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  detail::RnfStates rs(nf, m);
  detail::WindowSpec spec;
  spec.state_count = rs.state_count();
  spec.width = m + 1;
  spec.successors = [&rs](std::uint32_t s) { return rs.successors(s); };
  spec.accept = [&rs](std::span<const std::uint32_t> w) { return rs.accept(w); };
  spec.node_budget = node_budget;
  detail::WindowGraph graph(spec);
  auto start = graph.first_live([&](std::span<const std::uint32_t> w) { return (rs.pattern(w[0]) & 1u) == 0; });
  if (!start) return std::nullopt;
  const auto lasso = graph.lasso_from(*start);
  const std::size_t n = nf.n();
  PeriodicModel model = detail::lasso_model(lasso, nf.variables(), m, [&](std::uint32_t s) {
    Row row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = (rs.pattern(s) >> i) & 1u;
    return row;
  });
  if (!detail::rnf_premise_valid(model, nf) || eval(model, Formula::atom(nf.conclusion()), 0))
    throw std::logic_error("normal form witness failed re-evaluation");
  return LassoWitness{std::move(model), 0, Verdict::Refuted};
}

/// A model of `f` at state 0, if any.
inline std::optional<LassoWitness> satisfiable(const Formula& f, std::size_t m,
                                               std::size_t node_budget = kDefaultNodeBudget) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  const Formula g = expand_derived(f);
  detail::FormulaStates fs(g, m, node_budget);
  detail::WindowGraph graph(detail::formula_spec(fs, m, node_budget));
  auto start = graph.first_live(
      [&](std::span<const std::uint32_t> w) { return detail::FormulaStates::bit(fs.state(w[0]), fs.root()); });
  if (!start) return std::nullopt;
  const auto lasso = graph.lasso_from(*start);
  const auto atom_set = atoms(g);
  const std::vector<std::string> letters(atom_set.begin(), atom_set.end());
  std::vector<std::size_t> letter_ids;
  for (const auto& name : letters) {
    const auto& subs = fs.subformulas();
    letter_ids.push_back(
        static_cast<std::size_t>(std::find(subs.begin(), subs.end(), Formula::atom(name)) - subs.begin()));
  }
  PeriodicModel model = detail::lasso_model(lasso, letters, m, [&](std::uint32_t s) {
    Row row(letters.size());
    for (std::size_t j = 0; j < letters.size(); ++j) row[j] = detail::FormulaStates::bit(fs.state(s), letter_ids[j]);
    return row;
  });
  if (!eval(model, f, 0)) throw std::logic_error("satisfiability witness failed re-evaluation");
  return LassoWitness{std::move(model), 0, Verdict::Sat};
}

/// Number of live and dead windows built when deciding `f`.
inline std::size_t window_node_count(const Formula& f, std::size_t m, std::size_t node_budget = kDefaultNodeBudget) {
  const Formula g = expand_derived(f);
  detail::FormulaStates fs(g, m, node_budget);
  return detail::WindowGraph(detail::formula_spec(fs, m, node_budget)).node_count();
}

inline TheoremResult is_theorem(const Formula& f, std::size_t m, std::size_t node_budget = kDefaultNodeBudget) {
  auto w = satisfiable(Formula::negation(f), m, node_budget);
  if (!w) return {true, std::nullopt};
  w->verdict = Verdict::Refuted;
  return {false, std::move(w)};
}

/// A model refuting `r` (premises true everywhere, conclusion false at the
/// reported state), or none when r holds under every valuation.
inline std::optional<LassoWitness> frame_valid_rule(const Rule& r, std::size_t m,
                                                    std::size_t node_budget = kDefaultNodeBudget) {
  const RnfRule nf = rnf_transform(r);
  auto w = refutable_rnf(nf, m, node_budget);
  if (!w) return std::nullopt;
  const std::set<std::string> vars = r.variables();
  std::vector<std::string> letters(vars.begin(), vars.end());
  std::vector<std::size_t> cols;
  for (const auto& name : letters) cols.push_back(*w->model.letter_index(name));
  auto project = [&](const std::vector<Row>& rows) {
    std::vector<Row> out;
    for (const Row& row : rows) {
      Row p;
      for (std::size_t c : cols) p.push_back(row[c]);
      out.push_back(std::move(p));
    }
    return out;
  };
  PeriodicModel model(letters, project(w->model.prefix()), project(w->model.loop()), w->model.bound());
  if (rule_holds(model, r)) throw std::logic_error("rule countermodel failed re-evaluation");
  const std::size_t position = *truth_vector(model, r.conclusion()).first_false();
  return LassoWitness{std::move(model), position, Verdict::Refuted};
}

/// Exhaustive search over lassos with |prefix| + |loop| <= size_bound, by
/// total length, then prefix length, then valuation bits read as a
/// counter (first letter of the first row least significant).
inline std::optional<LassoWitness> brute_force_sat(const Formula& f, std::size_t m, std::size_t size_bound) {
  const auto atom_set = atoms(f);
  const std::vector<std::string> letters(atom_set.begin(), atom_set.end());
  const std::size_t L = letters.size();
  for (std::size_t total = 1; total <= size_bound; ++total) {
    const std::size_t bits = L * total;
    if (bits >= 63) throw CapacityExceeded("brute force valuation bits", 62, bits);
    for (std::size_t plen = 0; plen < total; ++plen) {
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
        std::vector<Row> prefix, loop;
        for (std::size_t a = 0; a < total; ++a) {
          Row row(L);
          for (std::size_t j = 0; j < L; ++j) row[j] = (v >> (a * L + j)) & 1u;
          (a < plen ? prefix : loop).push_back(std::move(row));
        }
        PeriodicModel model(letters, std::move(prefix), std::move(loop), Bound::uniform(m));
        if (eval(model, f, 0)) return LassoWitness{std::move(model), 0, Verdict::Sat};
      }
    }
  }
  return std::nullopt;
}

}  // namespace ltlpm
