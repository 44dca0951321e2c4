#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ltlpm/error.hpp"
#include "ltlpm/formula.hpp"

namespace ltlpm {

inline constexpr std::size_t kDefaultDisjunctLimit = std::size_t{1} << 20;
/// Since atoms x_i S x_k are bit i * n + k of a 128-bit mask.
using PairMask = unsigned __int128;
inline constexpr std::size_t kMaxRnfVariables = 11;

inline constexpr PairMask pair_flag(std::size_t b) noexcept { return PairMask{1} << b; }

inline std::size_t popcount(PairMask m) noexcept {
  return static_cast<std::size_t>(__builtin_popcountll(static_cast<std::uint64_t>(m)) +
                                  __builtin_popcountll(static_cast<std::uint64_t>(m >> 64)));
}

/// Rule with every premise conjoined into one.
inline Rule to_single_premise(const Rule& r) {
  Formula premise = r.premises().front();
  for (std::size_t i = 1; i < r.premises().size(); ++i) premise = Formula::conjunction(premise, r.premises()[i]);
  return Rule({premise}, r.conclusion());
}

/// One state description of a reduced normal form: the values of x_i, N x_i
/// and x_i S x_k (i != k) for every variable.
///
/// Values are stored as bit masks (bit set = atom true). The sign accessors
/// give the exponent b of the literal x^b, with x^0 = x and x^1 = ~x.
class RnfDisjunct {
 public:
  RnfDisjunct() = default;
  RnfDisjunct(std::uint32_t t0, std::uint32_t t1, PairMask ts) : t0_(t0), t1_(t1), ts_(ts) {}

  bool value(std::size_t i) const noexcept { return (t0_ >> i) & 1u; }
  bool next_value(std::size_t i) const noexcept { return (t1_ >> i) & 1u; }
  bool since_value(std::size_t i, std::size_t k, std::size_t n) const noexcept { return (ts_ >> (i * n + k)) & 1u; }

  bool t0_sign(std::size_t i) const noexcept { return !value(i); }
  bool t1_sign(std::size_t i) const noexcept { return !next_value(i); }
  bool ts_sign(std::size_t i, std::size_t k, std::size_t n) const noexcept { return !since_value(i, k, n); }

  std::uint32_t t0_mask() const noexcept { return t0_; }
  std::uint32_t t1_mask() const noexcept { return t1_; }
  PairMask ts_mask() const noexcept { return ts_; }

  friend bool operator==(const RnfDisjunct&, const RnfDisjunct&) = default;

 private:
  std::uint32_t t0_ = 0;
  std::uint32_t t1_ = 0;
  PairMask ts_ = 0;
};

/// A rule eps / x_1 in reduced normal form.
///
/// Since-atoms x_i S x_k that eps never mentions are kept as shared
/// don't-cares (free_pairs) instead of being multiplied out: each stored
/// disjunct stands for the 2^|free| total disjuncts that agree with it on
/// every other atom. disjunct_count() reports the multiplied-out size.
class RnfRule {
 public:
  RnfRule(std::vector<std::string> variables, PairMask free_pairs, std::vector<RnfDisjunct> disjuncts)
      : variables_(std::move(variables)), free_pairs_(free_pairs), disjuncts_(std::move(disjuncts)) {
    if (variables_.empty()) throw std::invalid_argument("normal form needs at least one variable");
    if (variables_.size() > kMaxRnfVariables)
      throw CapacityExceeded("normal form variables", kMaxRnfVariables, variables_.size());
  }

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  std::size_t n() const noexcept { return variables_.size(); }
  const std::string& conclusion() const noexcept { return variables_.front(); }
  const std::vector<RnfDisjunct>& disjuncts() const noexcept { return disjuncts_; }

  std::size_t pair_bit(std::size_t i, std::size_t k) const noexcept { return i * n() + k; }
  bool is_free(std::size_t i, std::size_t k) const noexcept { return (free_pairs_ >> pair_bit(i, k)) & 1u; }
  PairMask free_pairs() const noexcept { return free_pairs_; }

  /// Mask of the Since pairs eps constrains.
  PairMask constrained_pairs() const noexcept {
    PairMask all = 0;
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t k = 0; k < n(); ++k)
        if (i != k) all |= pair_flag(pair_bit(i, k));
    return all & ~free_pairs_;
  }

  std::size_t free_count() const noexcept { return popcount(free_pairs_); }

  /// Number of total disjuncts, saturating at SIZE_MAX.
  std::size_t disjunct_count() const noexcept {
    const std::size_t f = free_count();
    if (disjuncts_.empty()) return 0;
    if (f >= 63 || disjuncts_.size() > (std::numeric_limits<std::size_t>::max() >> f))
      return std::numeric_limits<std::size_t>::max();
    return disjuncts_.size() << f;
  }

  /// Every total disjunct in lexicographic sign order, or CapacityExceeded
  /// when there are more than `limit`.
  std::vector<RnfDisjunct> expand(std::size_t limit = kDefaultDisjunctLimit) const {
    if (disjunct_count() > limit) throw CapacityExceeded("normal form expansion", limit, disjunct_count());
    std::vector<std::size_t> free_bits;
    for (std::size_t b = 0; b < 128; ++b)
      if ((free_pairs_ >> b) & 1u) free_bits.push_back(b);
    std::vector<RnfDisjunct> out;
    for (const auto& d : disjuncts_) {
      // Counting down over the free bits puts positive literals first.
      const std::uint64_t combos = std::uint64_t{1} << free_bits.size();
      for (std::uint64_t c = combos; c-- > 0;) {
        PairMask ts = d.ts_mask();
        for (std::size_t j = 0; j < free_bits.size(); ++j)
          if ((c >> (free_bits.size() - 1 - j)) & 1u) ts |= pair_flag(free_bits[j]);
        out.emplace_back(d.t0_mask(), d.t1_mask(), ts);
      }
    }
    if (!free_bits.empty()) {
      std::sort(out.begin(), out.end(), [&](const RnfDisjunct& a, const RnfDisjunct& b) {
        return sign_key(a) < sign_key(b);
      });
    }
    return out;
  }

  /// Sign vector (t0, t1, then Since pairs row-major) used for ordering.
  std::vector<bool> sign_key(const RnfDisjunct& d) const {
    std::vector<bool> key;
    for (std::size_t i = 0; i < n(); ++i) key.push_back(d.t0_sign(i));
    for (std::size_t i = 0; i < n(); ++i) key.push_back(d.t1_sign(i));
    for (std::size_t i = 0; i < n(); ++i)
      for (std::size_t k = 0; k < n(); ++k)
        if (i != k) key.push_back(d.ts_sign(i, k, n()));
    return key;
  }

 private:
  std::vector<std::string> variables_;
  PairMask free_pairs_;
  std::vector<RnfDisjunct> disjuncts_;
};

namespace detail {

/// Boolean combination of normal-form atoms.
struct BoolExpr {
  enum class Kind : std::uint8_t { Const, T0, T1, TS, Not, And, Or, Implies, Iff };
  struct Node {
    Kind kind;
    std::size_t a = 0;  // variable / child index
    std::size_t b = 0;  // second variable / child index
    bool value = false;
  };
  std::vector<Node> nodes;

  std::size_t add(Node n) {
    nodes.push_back(n);
    return nodes.size() - 1;
  }

  // Kleene evaluation; -1 is unknown.
  int eval(std::size_t id, const std::vector<int>& t0, const std::vector<int>& t1,
           const std::vector<int>& ts, std::size_t n) const {
    const Node& nd = nodes[id];
    switch (nd.kind) {
      case Kind::Const: return nd.value ? 1 : 0;
      case Kind::T0: return t0[nd.a];
      case Kind::T1: return t1[nd.a];
      case Kind::TS: return ts[nd.a * n + nd.b];
      case Kind::Not: {
        const int v = eval(nd.a, t0, t1, ts, n);
        return v < 0 ? -1 : 1 - v;
      }
      case Kind::And: {
        const int l = eval(nd.a, t0, t1, ts, n);
        if (l == 0) return 0;
        const int r = eval(nd.b, t0, t1, ts, n);
        if (r == 0) return 0;
        return (l == 1 && r == 1) ? 1 : -1;
      }
      case Kind::Or: {
        const int l = eval(nd.a, t0, t1, ts, n);
        if (l == 1) return 1;
        const int r = eval(nd.b, t0, t1, ts, n);
        if (r == 1) return 1;
        return (l == 0 && r == 0) ? 0 : -1;
      }
      case Kind::Implies: {
        const int l = eval(nd.a, t0, t1, ts, n);
        if (l == 0) return 1;
        const int r = eval(nd.b, t0, t1, ts, n);
        if (r == 1) return 1;
        return (l == 1 && r == 0) ? 0 : -1;
      }
      case Kind::Iff: {
        const int l = eval(nd.a, t0, t1, ts, n);
        const int r = eval(nd.b, t0, t1, ts, n);
        if (l < 0 || r < 0) return -1;
        return l == r ? 1 : 0;
      }
    }
    return -1;
  }
};

/// Renames every subformula that sits under a temporal operator without
/// being a variable, so that the rule body becomes a Boolean combination of
/// x_i, N x_i and x_i S x_k.
class Renamer {
 public:
  explicit Renamer(const Rule& single) {
    const Formula& premise = single.premises().front();
    const Formula& conclusion = single.conclusion();
    taken_ = single.variables();
    for (const auto& a : taken_) index_of(a);  // provisional, reordered in finish()

    if (conclusion.op() == Op::Atom) {
      conclusion_name_ = conclusion.name();
    } else {
      conclusion_name_ = fresh("x_1");
      const std::size_t body = lower(conclusion);
      defs_.emplace_back(conclusion_name_, body);
      lifted_.emplace(conclusion, conclusion_name_);
    }
    premise_root_ = lower(premise);
  }

  /// Final variable order: conclusion, then the rule's own atoms, then
  /// introduced names in creation order.
  std::vector<std::string> variable_order() const {
    std::vector<std::string> out{conclusion_name_};
    for (const auto& a : taken_)
      if (a != conclusion_name_) out.push_back(a);
    for (const auto& name : introduced_)
      if (name != conclusion_name_) out.push_back(name);
    return out;
  }

  /// eps over final indices.
  BoolExpr epsilon(const std::vector<std::string>& order, std::size_t& root) const {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    BoolExpr out = expr_;
    for (auto& nd : out.nodes) {
      if (nd.kind == BoolExpr::Kind::T0 || nd.kind == BoolExpr::Kind::T1) nd.a = pos.at(names_[nd.a]);
      if (nd.kind == BoolExpr::Kind::TS) {
        nd.a = pos.at(names_[nd.a]);
        nd.b = pos.at(names_[nd.b]);
      }
    }
    root = premise_root_;
    for (const auto& [name, body] : defs_) {
      const std::size_t var = out.add({BoolExpr::Kind::T0, pos.at(name)});
      const std::size_t iff = out.add({BoolExpr::Kind::Iff, var, body});
      root = out.add({BoolExpr::Kind::And, root, iff});
    }
    return out;
  }

 private:
  std::size_t index_of(const std::string& name) {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    names_.push_back(name);
    return names_.size() - 1;
  }

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (std::size_t k = 1; taken_.count(name) != 0 || std::find(introduced_.begin(), introduced_.end(), name) != introduced_.end(); ++k)
      name = base + "_" + std::to_string(k);
    introduced_.push_back(name);
    index_of(name);
    return name;
  }

  /// Variable standing for `f`.
  std::string lift(const Formula& f) {
    if (f.op() == Op::Atom) return f.name();
    if (auto it = lifted_.find(f); it != lifted_.end()) return it->second;
    const std::size_t body = lower(f);
    std::string name;
    do name = "v" + std::to_string(++counter_);
    while (taken_.count(name) != 0);
    introduced_.push_back(name);
    index_of(name);
    defs_.emplace_back(name, body);
    lifted_.emplace(f, name);
    return name;
  }

  /// Boolean shape of `f` over normal-form atoms.
  std::size_t lower(const Formula& f) {
    using K = BoolExpr::Kind;
    switch (f.op()) {
      case Op::Atom: return expr_.add({K::T0, index_of(f.name())});
      case Op::Top: return expr_.add({K::Const, 0, 0, true});
      case Op::Bottom: return expr_.add({K::Const, 0, 0, false});
      case Op::Not: {
        const std::size_t c = lower(f.child());
        return expr_.add({K::Not, c});
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        const std::size_t l = lower(f.lhs());
        const std::size_t r = lower(f.rhs());
        return expr_.add({f.op() == Op::And ? K::And : f.op() == Op::Or ? K::Or : K::Implies, l, r});
      }
      case Op::Next: {
        const std::string v = lift(f.child());
        return expr_.add({K::T1, index_of(v)});
      }
      case Op::Since: {
        const std::string l = lift(f.lhs());
        const std::string r = lift(f.rhs());
        // x S x holds exactly where x does, and is not a normal-form atom.
        if (l == r) return expr_.add({K::T0, index_of(l)});
        return expr_.add({K::TS, index_of(l), index_of(r)});
      }
      default:
        return lower(expand_derived(f));
    }
  }

  std::set<std::string> taken_;
  std::vector<std::string> introduced_;
  std::vector<std::string> names_;
  std::map<Formula, std::string> lifted_;
  std::vector<std::pair<std::string, std::size_t>> defs_;
  std::string conclusion_name_;
  std::size_t premise_root_ = 0;
  std::size_t counter_ = 0;
  BoolExpr expr_;
};

inline void mark_pairs(const BoolExpr& e, std::size_t n, PairMask& used) {
  for (const auto& nd : e.nodes)
    if (nd.kind == BoolExpr::Kind::TS) used |= pair_flag(nd.a * n + nd.b);
}

}  // namespace detail

/// Compiles a rule into reduced normal form eps / x_1 with the same
/// refutable models: fresh variables name the subformulas under temporal
/// operators, and eps enumerates every total state description that satisfies
/// the premise and the naming equivalences, in lexicographic sign order.
inline RnfRule rnf_transform(const Rule& r, std::size_t disjunct_limit = kDefaultDisjunctLimit) {
  const Rule single = to_single_premise(expand_derived(r));
  detail::Renamer renamer(single);
  const auto order = renamer.variable_order();
  const std::size_t n = order.size();
  if (n > kMaxRnfVariables) throw CapacityExceeded("normal form variables", kMaxRnfVariables, n);

  std::size_t root = 0;
  const detail::BoolExpr eps = renamer.epsilon(order, root);
  PairMask used = 0;
  detail::mark_pairs(eps, n, used);
  PairMask all_pairs = 0;
  std::vector<std::size_t> pair_list;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (i != k) {
        all_pairs |= pair_flag(i * n + k);
        if ((used >> (i * n + k)) & 1u) pair_list.push_back(i * n + k);
      }
  const PairMask free_pairs = all_pairs & ~used;

  // 2^(2n + n(n-1)) total state descriptions, saturated.
  const std::size_t atom_count = 2 * n + n * (n - 1);
  const std::size_t theoretical_max =
      atom_count >= 63 ? std::numeric_limits<std::size_t>::max() : std::size_t{1} << atom_count;

  std::vector<int> t0(n, -1), t1(n, -1), ts(n * n, -1);
  std::vector<RnfDisjunct> out;
  // Depth-first over t0, t1, then the constrained Since pairs, trying the
  // positive literal first so that output is sorted by sign vector.
  const std::size_t slots = 2 * n + pair_list.size();
  auto slot = [&](std::size_t s) -> int& {
    if (s < n) return t0[s];
    if (s < 2 * n) return t1[s - n];
    return ts[pair_list[s - 2 * n]];
  };
  auto search = [&](auto&& self, std::size_t s) -> void {
    const int v = eps.eval(root, t0, t1, ts, n);
    if (v == 0) return;
    if (s == slots) {
      std::uint32_t m0 = 0, m1 = 0;
      PairMask ms = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (t0[i] == 1) m0 |= 1u << i;
        if (t1[i] == 1) m1 |= 1u << i;
      }
      for (std::size_t b : pair_list)
        if (ts[b] == 1) ms |= pair_flag(b);
      out.emplace_back(m0, m1, ms);
      if (out.size() > disjunct_limit)
        throw CapacityExceeded("normal form disjuncts", disjunct_limit, theoretical_max);
      return;
    }
    for (int value : {1, 0}) {
      slot(s) = value;
      self(self, s + 1);
    }
    slot(s) = -1;
  };
  search(search, 0);
  return RnfRule(order, free_pairs, std::move(out));
}

/// eps / x_1 as an ordinary rule. Free Since pairs are left out of each
/// conjunction, which is equivalent to the disjunction of their expansions.
inline Rule rnf_to_rule(const RnfRule& nf) {
  const std::size_t n = nf.n();
  auto var = [&](std::size_t i) { return Formula::atom(nf.variables()[i]); };
  auto literal = [](Formula f, bool positive) { return positive ? f : Formula::negation(std::move(f)); };
  std::optional<Formula> eps;
  for (const auto& d : nf.disjuncts()) {
    std::optional<Formula> conj;
    auto push = [&](Formula lit) { conj = conj ? Formula::conjunction(*conj, std::move(lit)) : std::move(lit); };
    for (std::size_t i = 0; i < n; ++i) push(literal(var(i), d.value(i)));
    for (std::size_t i = 0; i < n; ++i) push(literal(Formula::next(var(i)), d.next_value(i)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (i != k && !nf.is_free(i, k)) push(literal(Formula::since(var(i), var(k)), d.since_value(i, k, n)));
    eps = eps ? Formula::disjunction(*eps, *conj) : *conj;
  }
  return Rule({eps ? *eps : Formula::bottom()}, var(0));
}

/// Disjuncts are written with sign exponents: 0 for the atom, 1 for its
/// negation. tS is n x n with a null diagonal; free pairs are "*".
inline nlohmann::json to_json(const RnfRule& nf) {
  const std::size_t n = nf.n();
  nlohmann::json disjuncts = nlohmann::json::array();
  for (const auto& d : nf.disjuncts()) {
    nlohmann::json t0 = nlohmann::json::array(), t1 = nlohmann::json::array(), ts = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
      t0.push_back(d.t0_sign(i) ? 1 : 0);
      t1.push_back(d.t1_sign(i) ? 1 : 0);
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t k = 0; k < n; ++k) {
        if (i == k)
          row.push_back(nullptr);
        else if (nf.is_free(i, k))
          row.push_back("*");
        else
          row.push_back(d.ts_sign(i, k, n) ? 1 : 0);
      }
      ts.push_back(std::move(row));
    }
    disjuncts.push_back({{"t0", std::move(t0)}, {"t1", std::move(t1)}, {"tS", std::move(ts)}});
  }
  nlohmann::json free = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (i != k && nf.is_free(i, k)) free.push_back({nf.variables()[i], nf.variables()[k]});
  return {{"variables", nf.variables()},
          {"conclusion", nf.conclusion()},
          {"disjunct_count", nf.disjunct_count()},
          {"free_since", std::move(free)},
          {"disjuncts", std::move(disjuncts)}};
}

}  // namespace ltlpm
