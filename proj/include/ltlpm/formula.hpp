#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ltlpm {

/// Node kinds. Everything from `Box` on is derived and disappears under
/// expand_derived().
enum class Op : std::uint8_t {
  Atom,
  Top,
  Bottom,
  Not,
  And,
  Or,
  Implies,
  Next,
  Since,
  Box,
  Diamond,
  K1,
  K2,
  KPar,
};

inline bool is_derived(Op op) noexcept { return op >= Op::Box; }

inline std::size_t arity(Op op) noexcept {
  switch (op) {
    case Op::Atom:
    case Op::Top:
    case Op::Bottom:
      return 0;
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Since:
    case Op::KPar:
      return 2;
    default:
      return 1;
  }
}

struct FormulaNode;

/// Immutable, cheaply copyable formula tree.
///
/// Binary nodes keep their operands as lhs()/rhs(). Since(l, r) reads
/// "l S r": r must hold somewhere in the window and l at every state before
/// it. KPar(param, body) is the parameterised knowledge operator K[param] body.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula top();
  static Formula bottom();
  static Formula negation(Formula f);
  static Formula conjunction(Formula l, Formula r);
  static Formula disjunction(Formula l, Formula r);
  static Formula implication(Formula l, Formula r);
  static Formula next(Formula f);
  static Formula since(Formula l, Formula r);
  static Formula box(Formula f);
  static Formula diamond(Formula f);
  static Formula k1(Formula f);
  static Formula k2(Formula f);
  static Formula kpar(Formula param, Formula body);

  static Formula make(Op op, Formula l, Formula r);

  Op op() const noexcept;
  const std::string& name() const noexcept;
  /// Sole operand of a unary node, left operand of a binary one.
  const Formula& lhs() const noexcept;
  const Formula& rhs() const noexcept;
  const Formula& child() const noexcept { return lhs(); }

  bool same_node(const Formula& other) const noexcept { return node_ == other.node_; }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  Op op;
  std::string name;
  std::vector<Formula> kids;
};

inline Formula Formula::make(Op op, Formula l, Formula r) {
  auto node = std::make_shared<FormulaNode>();
  node->op = op;
  if (arity(op) >= 1) node->kids.push_back(std::move(l));
  if (arity(op) == 2) node->kids.push_back(std::move(r));
  return Formula(std::move(node));
}

inline Formula Formula::atom(std::string name) {
  auto node = std::make_shared<FormulaNode>();
  node->op = Op::Atom;
  node->name = std::move(name);
  return Formula(std::move(node));
}

inline Formula Formula::top() {
  static const Formula t = [] {
    auto node = std::make_shared<FormulaNode>();
    node->op = Op::Top;
    return Formula(std::move(node));
  }();
  return t;
}

inline Formula Formula::bottom() {
  static const Formula b = [] {
    auto node = std::make_shared<FormulaNode>();
    node->op = Op::Bottom;
    return Formula(std::move(node));
  }();
  return b;
}

inline Formula Formula::negation(Formula f) { return make(Op::Not, std::move(f), top()); }
inline Formula Formula::conjunction(Formula l, Formula r) { return make(Op::And, std::move(l), std::move(r)); }
inline Formula Formula::disjunction(Formula l, Formula r) { return make(Op::Or, std::move(l), std::move(r)); }
inline Formula Formula::implication(Formula l, Formula r) { return make(Op::Implies, std::move(l), std::move(r)); }
inline Formula Formula::next(Formula f) { return make(Op::Next, std::move(f), top()); }
inline Formula Formula::since(Formula l, Formula r) { return make(Op::Since, std::move(l), std::move(r)); }
inline Formula Formula::box(Formula f) { return make(Op::Box, std::move(f), top()); }
inline Formula Formula::diamond(Formula f) { return make(Op::Diamond, std::move(f), top()); }
inline Formula Formula::k1(Formula f) { return make(Op::K1, std::move(f), top()); }
inline Formula Formula::k2(Formula f) { return make(Op::K2, std::move(f), top()); }
inline Formula Formula::kpar(Formula param, Formula body) {
  return make(Op::KPar, std::move(param), std::move(body));
}

inline Op Formula::op() const noexcept { return node_->op; }
inline const std::string& Formula::name() const noexcept { return node_->name; }
inline const Formula& Formula::lhs() const noexcept { return node_->kids[0]; }
inline const Formula& Formula::rhs() const noexcept { return node_->kids[1]; }

/// Structural three-way comparison: by kind, then atom name, then operands.
inline int compare(const Formula& a, const Formula& b) noexcept {
  if (a.same_node(b)) return 0;
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  if (a.op() == Op::Atom) {
    const int c = a.name().compare(b.name());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  for (std::size_t i = 0; i < arity(a.op()); ++i) {
    const Formula& x = i == 0 ? a.lhs() : a.rhs();
    const Formula& y = i == 0 ? b.lhs() : b.rhs();
    if (int c = compare(x, y); c != 0) return c;
  }
  return 0;
}

inline bool operator==(const Formula& a, const Formula& b) noexcept { return compare(a, b) == 0; }
inline bool operator!=(const Formula& a, const Formula& b) noexcept { return compare(a, b) != 0; }
inline bool operator<(const Formula& a, const Formula& b) noexcept { return compare(a, b) < 0; }

inline std::size_t size(const Formula& f) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity(f.op()); ++i) n += size(i == 0 ? f.lhs() : f.rhs());
  return n;
}

/// Operator nesting depth; atoms and constants have depth 0.
inline std::size_t depth(const Formula& f) {
  switch (arity(f.op())) {
    case 0: return 0;
    case 1: return 1 + depth(f.child());
    default: return 1 + std::max(depth(f.lhs()), depth(f.rhs()));
  }
}

/// Nesting depth of N and S only (derived temporal kinds count as one S).
inline std::size_t modal_depth(const Formula& f) {
  const bool temporal = f.op() == Op::Next || f.op() == Op::Since || is_derived(f.op());
  std::size_t inner = 0;
  for (std::size_t i = 0; i < arity(f.op()); ++i) inner = std::max(inner, modal_depth(i == 0 ? f.lhs() : f.rhs()));
  return inner + (temporal ? 1 : 0);
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::Atom) {
    out.insert(f.name());
    return;
  }
  for (std::size_t i = 0; i < arity(f.op()); ++i) collect_atoms(i == 0 ? f.lhs() : f.rhs(), out);
}

inline std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

inline bool has_knowledge(const Formula& f) {
  if (f.op() == Op::K1 || f.op() == Op::K2 || f.op() == Op::KPar) return true;
  for (std::size_t i = 0; i < arity(f.op()); ++i)
    if (has_knowledge(i == 0 ? f.lhs() : f.rhs())) return true;
  return false;
}

inline bool is_core(const Formula& f) {
  if (is_derived(f.op())) return false;
  for (std::size_t i = 0; i < arity(f.op()); ++i)
    if (!is_core(i == 0 ? f.lhs() : f.rhs())) return false;
  return true;
}

/// Rewrites Box, Diamond, K1, K2 and K[.] into Not/Since/Top.
inline Formula expand_derived(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bottom:
      return f;
    case Op::Box:
    case Op::K2:
      return Formula::negation(
          Formula::since(Formula::top(), Formula::negation(expand_derived(f.child()))));
    case Op::Diamond:
      return Formula::since(Formula::top(), expand_derived(f.child()));
    case Op::K1: {
      Formula body = expand_derived(f.child());
      return Formula::since(body, body);
    }
    case Op::KPar:
      return Formula::since(expand_derived(f.rhs()), expand_derived(f.lhs()));
    default:
      break;
  }
  if (is_core(f)) return f;
  if (arity(f.op()) == 1) return Formula::make(f.op(), expand_derived(f.child()), Formula::top());
  return Formula::make(f.op(), expand_derived(f.lhs()), expand_derived(f.rhs()));
}

using Substitution = std::map<std::string, Formula>;

/// Simultaneous replacement of mapped atoms.
inline Formula apply_substitution(const Formula& f, const Substitution& s) {
  if (s.empty()) return f;
  switch (arity(f.op())) {
    case 0: {
      if (f.op() != Op::Atom) return f;
      auto it = s.find(f.name());
      return it == s.end() ? f : it->second;
    }
    case 1:
      return Formula::make(f.op(), apply_substitution(f.child(), s), Formula::top());
    default:
      return Formula::make(f.op(), apply_substitution(f.lhs(), s), apply_substitution(f.rhs(), s));
  }
}

/// How far past the evaluation point the truth of `f` can look when the
/// Since window is m wide. Derived kinds are measured after expansion.
inline std::size_t temporal_reach(const Formula& f, std::size_t m) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bottom:
      return 0;
    case Op::Not:
      return temporal_reach(f.child(), m);
    case Op::And:
    case Op::Or:
    case Op::Implies:
      return std::max(temporal_reach(f.lhs(), m), temporal_reach(f.rhs(), m));
    case Op::Next:
      return 1 + temporal_reach(f.child(), m);
    case Op::Since:
      return m + std::max(temporal_reach(f.lhs(), m), temporal_reach(f.rhs(), m));
    default:
      return temporal_reach(expand_derived(f), m);
  }
}

/// An inference rule: premises / conclusion.
class Rule {
 public:
  Rule(std::vector<Formula> premises, Formula conclusion)
      : premises_(std::move(premises)), conclusion_(std::move(conclusion)) {
    if (premises_.empty()) throw std::invalid_argument("rule needs at least one premise");
  }

  const std::vector<Formula>& premises() const noexcept { return premises_; }
  const Formula& conclusion() const noexcept { return conclusion_; }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& p : premises_) collect_atoms(p, out);
    collect_atoms(conclusion_, out);
    return out;
  }

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.premises_ == b.premises_ && a.conclusion_ == b.conclusion_;
  }

 private:
  std::vector<Formula> premises_;
  Formula conclusion_;
};

inline Rule expand_derived(const Rule& r) {
  std::vector<Formula> premises;
  premises.reserve(r.premises().size());
  for (const auto& p : r.premises()) premises.push_back(expand_derived(p));
  return Rule(std::move(premises), expand_derived(r.conclusion()));
}

inline Rule apply_substitution(const Rule& r, const Substitution& s) {
  std::vector<Formula> premises;
  for (const auto& p : r.premises()) premises.push_back(apply_substitution(p, s));
  return Rule(std::move(premises), apply_substitution(r.conclusion(), s));
}

// Printing.

namespace detail {

inline int precedence(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Since: return 4;
    case Op::Atom:
    case Op::Top:
    case Op::Bottom: return 6;
    default: return 5;
  }
}

inline void render_to(const Formula& f, std::string& out);

inline void render_operand(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  render_to(f, out);
  if (parens) out += ')';
}

inline void render_to(const Formula& f, std::string& out) {
  const int prec = precedence(f.op());
  auto binary = [&](const char* symbol, bool right_assoc) {
    const int lp = precedence(f.lhs().op());
    const int rp = precedence(f.rhs().op());
    render_operand(f.lhs(), right_assoc ? lp <= prec : lp < prec, out);
    out += symbol;
    render_operand(f.rhs(), right_assoc ? rp < prec : rp <= prec, out);
  };
  auto unary = [&](const char* prefix) {
    out += prefix;
    render_operand(f.child(), precedence(f.child().op()) < 5, out);
  };
  switch (f.op()) {
    case Op::Atom: out += f.name(); break;
    case Op::Top: out += "true"; break;
    case Op::Bottom: out += "false"; break;
    case Op::Not: unary("~"); break;
    case Op::Next: unary("N "); break;
    case Op::Box: unary("[]"); break;
    case Op::Diamond: unary("<>"); break;
    case Op::K1: unary("K1 "); break;
    case Op::K2: unary("K2 "); break;
    case Op::KPar:
      out += "K[";
      render_to(f.lhs(), out);
      out += "] ";
      render_operand(f.rhs(), precedence(f.rhs().op()) < 5, out);
      break;
    case Op::And: binary(" & ", false); break;
    case Op::Or: binary(" | ", false); break;
    case Op::Implies: binary(" -> ", true); break;
    case Op::Since: binary(" S ", false); break;
  }
}

}  // namespace detail

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_to(f, out);
  return out;
}

inline std::string render(const Rule& r) {
  std::string out;
  for (std::size_t i = 0; i < r.premises().size(); ++i) {
    if (i != 0) out += ", ";
    out += render(r.premises()[i]);
  }
  out += " / ";
  out += render(r.conclusion());
  return out;
}

inline std::string render(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : s) {
    if (!first) out += ", ";
    first = false;
    out += name + " -> " + render(value);
  }
  return out + "}";
}

}  // namespace ltlpm
