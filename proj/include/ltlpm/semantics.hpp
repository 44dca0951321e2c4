#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "ltlpm/error.hpp"
#include "ltlpm/formula.hpp"
#include "ltlpm/model.hpp"

namespace ltlpm {

enum class SinceMode {
  Bounded,    ///< witness must lie inside the state's window
  Unbounded,  ///< any later state may witness (transitive reading)
};

namespace detail {

/// Computes truth of subformulas on the folded states [0, period_start + period)
/// of a model. States beyond that range are read through PeriodicModel::fold.
class Evaluator {
 public:
  Evaluator(const PeriodicModel& model, SinceMode mode)
      : model_(model), mode_(mode), span_(model.period_start() + model.period()) {}

  const std::vector<char>& truth(const Formula& f) {
    if (auto it = cache_.find(f); it != cache_.end()) return it->second;
    std::vector<char> out = compute(f);
    return cache_.emplace(f, std::move(out)).first->second;
  }

 private:
  std::vector<char> compute(const Formula& f) {
    std::vector<char> out(span_, 0);
    switch (f.op()) {
      case Op::Atom: {
        auto idx = model_.letter_index(f.name());
        if (!idx) throw UnknownAtom(f.name());
        for (std::size_t a = 0; a < span_; ++a) out[a] = model_.value(*idx, a);
        return out;
      }
      case Op::Top:
        out.assign(span_, 1);
        return out;
      case Op::Bottom:
        return out;
      case Op::Not: {
        const auto& c = truth(f.child());
        for (std::size_t a = 0; a < span_; ++a) out[a] = !c[a];
        return out;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        const auto& l = truth(f.lhs());
        const auto& r = truth(f.rhs());
        for (std::size_t a = 0; a < span_; ++a)
          out[a] = f.op() == Op::And ? (l[a] && r[a]) : f.op() == Op::Or ? (l[a] || r[a]) : (!l[a] || r[a]);
        return out;
      }
      case Op::Next: {
        const auto& c = truth(f.child());
        for (std::size_t a = 0; a < span_; ++a) out[a] = c[model_.fold(a + 1)];
        return out;
      }
      case Op::Since: {
        const auto& l = truth(f.lhs());
        const auto& r = truth(f.rhs());
        return mode_ == SinceMode::Bounded ? bounded_since(l, r) : unbounded_since(l, r);
      }
      default:
        return truth(expand_derived(f));
    }
  }

  std::vector<char> bounded_since(const std::vector<char>& l, const std::vector<char>& r) const {
    std::vector<char> out(span_, 0);
    for (std::size_t a = 0; a < span_; ++a) {
      const std::size_t last = a + model_.bound().window(a);
      for (std::size_t b = a; b <= last; ++b) {
        if (r[model_.fold(b)]) {
          out[a] = 1;
          break;
        }
        if (!l[model_.fold(b)]) break;
      }
    }
    return out;
  }

  // Least fixpoint of S(a) = r(a) | (l(a) & S(a+1)). Two backward passes over
  // the loop settle every witness that wraps around.
  std::vector<char> unbounded_since(const std::vector<char>& l, const std::vector<char>& r) const {
    std::vector<char> out(span_, 0);
    const std::size_t off = model_.period_start();
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t a = span_; a-- > off;) out[a] = r[a] || (l[a] && out[model_.fold(a + 1)]);
    for (std::size_t a = off; a-- > 0;) out[a] = r[a] || (l[a] && out[a + 1]);
    return out;
  }

  const PeriodicModel& model_;
  SinceMode mode_;
  std::size_t span_;
  std::map<Formula, std::vector<char>> cache_;
};

inline TruthVector to_truth_vector(const PeriodicModel& model, const std::vector<char>& values) {
  TruthVector tv;
  tv.offset = model.period_start();
  tv.prefix_truth.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(tv.offset));
  tv.loop_truth.assign(values.begin() + static_cast<std::ptrdiff_t>(tv.offset), values.end());
  return tv;
}

}  // namespace detail

inline TruthVector truth_vector(const PeriodicModel& model, const Formula& f,
                                SinceMode mode = SinceMode::Bounded) {
  detail::Evaluator ev(model, mode);
  return detail::to_truth_vector(model, ev.truth(f));
}

/// Truth of `f` at state `a` under the window-bounded Since.
inline bool eval(const PeriodicModel& model, const Formula& f, std::size_t a) {
  detail::Evaluator ev(model, SinceMode::Bounded);
  return ev.truth(f)[model.fold(a)];
}

/// Truth of `f` at state `a` when Since may look arbitrarily far.
inline bool eval_unbounded(const PeriodicModel& model, const Formula& f, std::size_t a) {
  detail::Evaluator ev(model, SinceMode::Unbounded);
  return ev.truth(f)[model.fold(a)];
}

/// Premises true everywhere imply the conclusion true everywhere.
inline bool rule_holds(const PeriodicModel& model, const Rule& r) {
  detail::Evaluator ev(model, SinceMode::Bounded);
  for (const auto& p : r.premises())
    for (char v : ev.truth(p))
      if (!v) return true;
  for (char v : ev.truth(r.conclusion()))
    if (!v) return false;
  return true;
}

/// The model seen from state k onwards.
inline PeriodicModel shift(const PeriodicModel& model, std::size_t k) {
  if (!model.bound().is_uniform()) throw NonUniformShift();
  std::vector<Row> prefix;
  for (std::size_t a = k; a < model.prefix().size(); ++a) prefix.push_back(model.prefix()[a]);
  std::vector<Row> loop;
  const std::size_t start = k < model.prefix().size() ? model.prefix().size() : k;
  for (std::size_t i = 0; i < model.loop().size(); ++i) loop.push_back(model.row(start + i));
  return PeriodicModel(model.letters(), std::move(prefix), std::move(loop), model.bound());
}

}  // namespace ltlpm
