#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ltlpm/decision.hpp"
#include "ltlpm/error.hpp"
#include "ltlpm/formula.hpp"
#include "ltlpm/normal_form.hpp"
#include "ltlpm/window_graph.hpp"

namespace ltlpm {

struct SearchBudget {
  std::size_t max_depth = 2;
  std::size_t extra_letters = 1;
  std::size_t m = 1;
  std::size_t node_budget = kDefaultNodeBudget;
};

/// A premise/conclusion pair that is a Boolean template over N-slots
/// (N a / a) and S-slots ((N b) S (N c) / b S c).
struct NEliminationCertificate {
  std::string template_text;  ///< template over p1.., q1..
  std::vector<Formula> p_slots;
  std::vector<std::pair<Formula, Formula>> q_slots;
};

enum class AdmissibilityKind { Admissible, NotAdmissible, Unknown };
enum class CertificateKind { FrameValidity, NElimination };

struct AdmissibilityVerdict {
  AdmissibilityKind kind = AdmissibilityKind::Unknown;
  std::optional<CertificateKind> certificate;
  std::optional<NEliminationCertificate> pattern;
  /// Set whenever the rule is not valid in the frame.
  std::optional<LassoWitness> frame_countermodel;
  std::optional<Substitution> witness;
  /// Conclusion instance countermodel for a NotAdmissible witness.
  std::optional<LassoWitness> conclusion_countermodel;
  SearchBudget bounds;
  std::vector<std::string> letters;
};

namespace detail {

/// Fresh letters p, q, r, ... avoiding `used`.
inline std::vector<std::string> fresh_letters(std::size_t count, const std::set<std::string>& used) {
  std::vector<std::string> out;
  const std::string base = "pqrstuvw";
  for (std::size_t i = 0; out.size() < count; ++i) {
    std::string name = i < base.size() ? std::string(1, base[i]) : "p" + std::to_string(i - base.size() + 1);
    if (used.count(name) == 0) out.push_back(std::move(name));
  }
  return out;
}

/// Truth tables over every valuation of `letters` on positions [0, width).
/// Valuation v gives letter l at position j the bit j * letters + l of v.
class TableSpace {
 public:
  TableSpace(std::size_t letters, std::size_t width, std::size_t m) : letters_(letters), width_(width), m_(m) {
    bits_ = letters * width;
    words_ = bits_ >= 6 ? std::size_t{1} << (bits_ - 6) : 1;
    tail_ = bits_ >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (std::size_t{1} << bits_)) - 1;
  }

  std::size_t words() const noexcept { return words_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t table_size() const noexcept { return words_ * width_; }
  std::uint64_t full(std::size_t w) const noexcept { return w + 1 == words_ ? tail_ : ~std::uint64_t{0}; }

  // Per-position tables stored back to back.
  using Tables = std::vector<std::uint64_t>;

  Tables constant(bool value) const {
    Tables t(table_size(), 0);
    if (value)
      for (std::size_t j = 0; j < width_; ++j)
        for (std::size_t w = 0; w < words_; ++w) t[j * words_ + w] = full(w);
    return t;
  }

  Tables letter(std::size_t l) const {
    static constexpr std::uint64_t kPattern[6] = {0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
                                                  0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    Tables t(table_size(), 0);
    for (std::size_t j = 0; j < width_; ++j) {
      const std::size_t b = j * letters_ + l;
      for (std::size_t w = 0; w < words_; ++w)
        t[j * words_ + w] = (b < 6 ? kPattern[b] : (((w >> (b - 6)) & 1u) ? ~std::uint64_t{0} : 0)) & full(w);
    }
    return t;
  }

  Tables apply(Op op, const Tables& a, const Tables* b) const {
    Tables t(table_size(), 0);
    for (std::size_t j = 0; j < width_; ++j)
      for (std::size_t w = 0; w < words_; ++w) {
        const std::size_t i = j * words_ + w;
        switch (op) {
          case Op::Not: t[i] = ~a[i] & full(w); break;
          case Op::And: t[i] = a[i] & (*b)[i]; break;
          case Op::Or: t[i] = a[i] | (*b)[i]; break;
          case Op::Implies: t[i] = (~a[i] | (*b)[i]) & full(w); break;
          case Op::Next: t[i] = j + 1 < width_ ? a[i + words_] : 0; break;
          case Op::Since: {
            std::uint64_t acc = 0, run = full(w);
            for (std::size_t c = j; c < width_ && c <= j + m_; ++c) {
              acc |= run & (*b)[c * words_ + w];
              run &= a[c * words_ + w];
            }
            t[i] = acc;
            break;
          }
          default: throw std::logic_error("not a table operator");
        }
      }
    return t;
  }

 private:
  std::size_t letters_, width_, m_, bits_, words_;
  std::uint64_t tail_;
};

/// One semantic class of candidate formulas: its least representative and
/// its truth at every position of the table window.
struct CandidateClass {
  Formula rep;
  std::size_t size;
  std::size_t depth;
  TableSpace::Tables tables;
};

inline bool rep_less(const Formula& a, std::size_t size_a, const Formula& b, std::size_t size_b) {
  if (size_a != size_b) return size_a < size_b;
  return compare(a, b) < 0;
}

/// All core formulas of depth <= max_depth over `pool` plus true/false, up
/// to equivalence. Classes are sorted by (representative size, structure);
/// the representative is the least member of least depth.
inline std::vector<CandidateClass> candidate_classes(const TableSpace& space, const std::vector<std::string>& pool,
                                                     std::size_t max_depth) {
  std::vector<CandidateClass> classes;
  std::map<std::vector<std::uint64_t>, std::size_t> by_signature;
  auto signature = [&](const TableSpace::Tables& t) {
    return std::vector<std::uint64_t>(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(space.words()));
  };
  auto offer = [&](Formula f, TableSpace::Tables t, std::size_t d) {
    const std::size_t s = size(f);
    auto [it, inserted] = by_signature.emplace(signature(t), classes.size());
    if (inserted) {
      classes.push_back({std::move(f), s, d, std::move(t)});
      return;
    }
    CandidateClass& c = classes[it->second];
    if (c.depth == d && rep_less(f, s, c.rep, c.size)) {
      c.rep = std::move(f);
      c.size = s;
      c.tables = std::move(t);
    }
  };
  for (std::size_t l = 0; l < pool.size(); ++l) offer(Formula::atom(pool[l]), space.letter(l), 0);
  offer(Formula::top(), space.constant(true), 0);
  offer(Formula::bottom(), space.constant(false), 0);

  for (std::size_t d = 1; d <= max_depth; ++d) {
    const std::size_t known = classes.size();
    for (Op op : {Op::Not, Op::Next})
      for (std::size_t i = 0; i < known; ++i)
        if (classes[i].depth == d - 1)
          offer(Formula::make(op, classes[i].rep, Formula::top()), space.apply(op, classes[i].tables, nullptr), d);
    for (Op op : {Op::And, Op::Or, Op::Implies, Op::Since})
      for (std::size_t i = 0; i < known; ++i)
        for (std::size_t j = 0; j < known; ++j) {
          if (classes[i].depth != d - 1 && classes[j].depth != d - 1) continue;
          offer(Formula::make(op, classes[i].rep, classes[j].rep),
                space.apply(op, classes[i].tables, &classes[j].tables), d);
        }
  }
  std::sort(classes.begin(), classes.end(), [](const CandidateClass& a, const CandidateClass& b) {
    return rep_less(a.rep, a.size, b.rep, b.size);
  });
  return classes;
}

/// Straight-line program computing a rule formula's truth at position 0
/// one table word at a time, with variables read from candidate tables.
class InstanceProgram {
 public:
  InstanceProgram(const Formula& f, const std::vector<std::string>& vars, std::size_t m) : vars_(vars), m_(m) {
    root_ = emit(f, 0);
  }

  /// Word w of the instance's position-0 table.
  std::uint64_t word(std::size_t w, const std::vector<const CandidateClass*>& tuple, const TableSpace& space,
                     std::vector<std::uint64_t>& regs) const {
    regs.resize(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
      const Ins& c = code_[i];
      switch (c.op) {
        case Op::Atom: regs[i] = tuple[c.a]->tables[c.b * space.words() + w]; break;
        case Op::Top: regs[i] = space.full(w); break;
        case Op::Bottom: regs[i] = 0; break;
        case Op::Not: regs[i] = ~regs[c.a] & space.full(w); break;
        case Op::And: regs[i] = regs[c.a] & regs[c.b]; break;
        case Op::Or: regs[i] = regs[c.a] | regs[c.b]; break;
        case Op::Implies: regs[i] = (~regs[c.a] | regs[c.b]) & space.full(w); break;
        default: throw std::logic_error("bad instruction");
      }
    }
    return regs[root_];
  }

 private:
  struct Ins {
    Op op;
    std::size_t a = 0, b = 0;
  };

  std::size_t push(Ins ins) {
    code_.push_back(ins);
    return code_.size() - 1;
  }

  std::size_t emit(const Formula& f, std::size_t pos) {
    auto key = std::make_pair(f, pos);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::size_t out = 0;
    switch (f.op()) {
      case Op::Atom: {
        const auto it = std::find(vars_.begin(), vars_.end(), f.name());
        out = push({Op::Atom, static_cast<std::size_t>(it - vars_.begin()), pos});
        break;
      }
      case Op::Top:
      case Op::Bottom: out = push({f.op()}); break;
      case Op::Not: {
        const std::size_t c = emit(f.child(), pos);
        out = push({Op::Not, c});
        break;
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        const std::size_t l = emit(f.lhs(), pos);
        const std::size_t r = emit(f.rhs(), pos);
        out = push({f.op(), l, r});
        break;
      }
      case Op::Next: out = emit(f.child(), pos + 1); break;
      case Op::Since: {
        // psi@b & phi@pos..b-1, or'ed over the window.
        std::optional<std::size_t> acc, run;
        for (std::size_t b = pos; b <= pos + m_; ++b) {
          const std::size_t psi = emit(f.rhs(), b);
          const std::size_t term = run ? push({Op::And, *run, psi}) : psi;
          acc = acc ? push({Op::Or, *acc, term}) : term;
          const std::size_t phi = emit(f.lhs(), b);
          run = run ? push({Op::And, *run, phi}) : phi;
        }
        out = *acc;
        break;
      }
      default: return emit(expand_derived(f), pos);
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

  std::vector<std::string> vars_;
  std::size_t m_;
  std::vector<Ins> code_;
  std::map<std::pair<Formula, std::size_t>, std::size_t> memo_;
  std::size_t root_ = 0;
};

enum class SearchGoal { NonAdmissibility, Unifier };

struct SearchHit {
  Substitution sigma;
  std::optional<LassoWitness> conclusion_countermodel;
};

/// First substitution, in order of total representative size and then
/// class order, whose premise instances are theorems (and, for
/// NonAdmissibility, whose conclusion instance is not).
inline std::optional<SearchHit> substitution_search(const Rule& input, const SearchBudget& b, SearchGoal goal) {
  if (b.m < 1) throw std::invalid_argument("m must be at least 1");
  const Rule r = expand_derived(input);
  const std::set<std::string> var_set = r.variables();
  const std::vector<std::string> vars(var_set.begin(), var_set.end());
  std::vector<std::string> pool = fresh_letters(b.extra_letters, var_set);
  pool.insert(pool.end(), vars.begin(), vars.end());

  Formula premise = r.premises().front();
  for (std::size_t i = 1; i < r.premises().size(); ++i) premise = Formula::conjunction(premise, r.premises()[i]);
  const std::size_t reach =
      std::max(temporal_reach(premise, b.m), goal == SearchGoal::Unifier ? 0 : temporal_reach(r.conclusion(), b.m));
  // Candidates of depth d look at most d * m states ahead.
  const std::size_t width = reach + b.max_depth * b.m + 1;
  const std::size_t bits = pool.size() * width;
  if (bits >= 40 || (std::size_t{1} << bits) > b.node_budget)
    throw CapacityExceeded("substitution truth tables", b.node_budget, bits >= 63 ? SIZE_MAX : std::size_t{1} << bits);
  const TableSpace space(pool.size(), width, b.m);
  const auto classes = candidate_classes(space, pool, b.max_depth);

  const std::size_t k = vars.size();
  std::size_t tuples = 1;
  const std::size_t tuple_limit = b.node_budget * 4;
  for (std::size_t i = 0; i < k; ++i) {
    if (tuples > tuple_limit / classes.size()) throw CapacityExceeded("substitution tuples", tuple_limit, SIZE_MAX);
    tuples *= classes.size();
  }

  const InstanceProgram premise_prog(premise, vars, b.m);
  const InstanceProgram conclusion_prog(r.conclusion(), vars, b.m);
  std::vector<std::uint64_t> regs;
  std::vector<const CandidateClass*> tuple(k);
  auto is_theorem_instance = [&](const InstanceProgram& prog) {
    for (std::size_t w = 0; w < space.words(); ++w)
      if (prog.word(w, tuple, space, regs) != space.full(w)) return false;
    return true;
  };

  std::size_t min_size = classes.front().size, max_size = classes.back().size;
  std::optional<std::vector<std::size_t>> found;
  std::vector<std::size_t> pick(k);
  // Lexicographic walk over tuples with a fixed total size.
  auto walk = [&](auto&& self, std::size_t i, std::size_t remaining) -> bool {
    if (i == k) {
      if (remaining != 0) return false;
      if (!is_theorem_instance(premise_prog)) return false;
      if (goal == SearchGoal::NonAdmissibility && is_theorem_instance(conclusion_prog)) return false;
      found = pick;
      return true;
    }
    const std::size_t later = (k - i - 1);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const std::size_t s = classes[c].size;
      if (s + later * min_size > remaining) break;
      if (s + later * max_size < remaining) continue;
      pick[i] = c;
      tuple[i] = &classes[c];
      if (self(self, i + 1, remaining - s)) return true;
    }
    return false;
  };
  for (std::size_t total = k * min_size; total <= k * max_size && !found; ++total)
    if (walk(walk, 0, total)) break;
  if (k == 0 && !found) {
    if (is_theorem_instance(premise_prog) &&
        (goal == SearchGoal::Unifier || !is_theorem_instance(conclusion_prog)))
      found = std::vector<std::size_t>{};
  }
  if (!found) return std::nullopt;

  SearchHit hit;
  for (std::size_t i = 0; i < k; ++i) hit.sigma.emplace(vars[i], classes[(*found)[i]].rep);
  // Independent re-check through the window-graph decision procedure.
  for (const auto& p : r.premises())
    if (!is_theorem(apply_substitution(p, hit.sigma), b.m, b.node_budget).theorem)
      throw std::logic_error("substitution premise failed re-verification");
  if (goal == SearchGoal::NonAdmissibility) {
    auto c = is_theorem(apply_substitution(r.conclusion(), hit.sigma), b.m, b.node_budget);
    if (c.theorem) throw std::logic_error("substitution conclusion failed re-verification");
    hit.conclusion_countermodel = std::move(c.countermodel);
  }
  return hit;
}

struct SlotMatcher {
  std::vector<Formula> p_slots;
  std::vector<std::pair<Formula, Formula>> q_slots;

  std::optional<Formula> match(const Formula& premise, const Formula& conclusion) {
    if (premise.op() == Op::Next && premise.child() == conclusion) {
      auto it = std::find(p_slots.begin(), p_slots.end(), conclusion);
      if (it == p_slots.end()) p_slots.push_back(conclusion);
      const std::size_t id = static_cast<std::size_t>(std::find(p_slots.begin(), p_slots.end(), conclusion) - p_slots.begin());
      return Formula::atom("p" + std::to_string(id + 1));
    }
    if (premise.op() == Op::Since && conclusion.op() == Op::Since && premise.lhs().op() == Op::Next &&
        premise.rhs().op() == Op::Next && premise.lhs().child() == conclusion.lhs() &&
        premise.rhs().child() == conclusion.rhs()) {
      const auto slot = std::make_pair(conclusion.lhs(), conclusion.rhs());
      auto it = std::find(q_slots.begin(), q_slots.end(), slot);
      if (it == q_slots.end()) q_slots.push_back(slot);
      const std::size_t id = static_cast<std::size_t>(std::find(q_slots.begin(), q_slots.end(), slot) - q_slots.begin());
      return Formula::atom("q" + std::to_string(id + 1));
    }
    if (premise.op() != conclusion.op()) return std::nullopt;
    switch (premise.op()) {
      case Op::Top:
      case Op::Bottom: return premise;
      case Op::Not: {
        auto c = match(premise.child(), conclusion.child());
        if (!c) return std::nullopt;
        return Formula::negation(*c);
      }
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        auto l = match(premise.lhs(), conclusion.lhs());
        if (!l) return std::nullopt;
        auto r = match(premise.rhs(), conclusion.rhs());
        if (!r) return std::nullopt;
        return Formula::make(premise.op(), *l, *r);
      }
      default: return std::nullopt;
    }
  }
};

}  // namespace detail

inline std::optional<Substitution> find_non_admissibility_witness(const Rule& r, const SearchBudget& b) {
  auto hit = detail::substitution_search(r, b, detail::SearchGoal::NonAdmissibility);
  if (!hit) return std::nullopt;
  return std::move(hit->sigma);
}

/// A substitution making every premise a theorem, if one exists within budget.
inline std::optional<Substitution> premises_unifiable(const Rule& r, const SearchBudget& b) {
  auto hit = detail::substitution_search(r, b, detail::SearchGoal::Unifier);
  if (!hit) return std::nullopt;
  return std::move(hit->sigma);
}

/// Matches premise / conclusion against a common Boolean template whose
/// slots are N a over a, or (N b) S (N c) over b S c. Slot contents may be
/// arbitrary formulas; the rule is then a substitution instance of the
/// template rule over plain variables. Multiple premises are conjoined.
inline std::optional<NEliminationCertificate> match_n_elimination(const Rule& input) {
  const Rule r = to_single_premise(input);
  detail::SlotMatcher matcher;
  auto tmpl = matcher.match(r.premises().front(), r.conclusion());
  if (!tmpl || (matcher.p_slots.empty() && matcher.q_slots.empty())) return std::nullopt;
  return NEliminationCertificate{render(*tmpl), std::move(matcher.p_slots), std::move(matcher.q_slots)};
}

struct AdmissibilityOptions {
  /// Also classify the rule's normal form and fail on contradictory
  /// definite verdicts.
  bool check_normal_form = false;
};

/// Sound partial classification: frame validity, then the N-elimination
/// pattern, then a bounded search for a refuting substitution.
inline AdmissibilityVerdict admissible_status(const Rule& r, const SearchBudget& b,
                                              const AdmissibilityOptions& options = {}) {
  AdmissibilityVerdict v;
  v.bounds = b;
  const std::set<std::string> vars = r.variables();
  v.letters = detail::fresh_letters(b.extra_letters, vars);
  v.letters.insert(v.letters.end(), vars.begin(), vars.end());

  v.frame_countermodel = frame_valid_rule(r, b.m, b.node_budget);
  if (!v.frame_countermodel) {
    v.kind = AdmissibilityKind::Admissible;
    v.certificate = CertificateKind::FrameValidity;
  } else if (auto cert = match_n_elimination(r)) {
    v.kind = AdmissibilityKind::Admissible;
    v.certificate = CertificateKind::NElimination;
    v.pattern = std::move(cert);
  } else if (auto hit = detail::substitution_search(r, b, detail::SearchGoal::NonAdmissibility)) {
    v.kind = AdmissibilityKind::NotAdmissible;
    v.witness = std::move(hit->sigma);
    v.conclusion_countermodel = std::move(hit->conclusion_countermodel);
  }

  if (options.check_normal_form) {
    const AdmissibilityVerdict other = admissible_status(rnf_to_rule(rnf_transform(r)), b);
    const bool clash = (v.kind == AdmissibilityKind::Admissible && other.kind == AdmissibilityKind::NotAdmissible) ||
                       (v.kind == AdmissibilityKind::NotAdmissible && other.kind == AdmissibilityKind::Admissible);
    if (clash) throw std::logic_error("rule and its normal form received contradictory verdicts");
  }
  return v;
}

inline nlohmann::json to_json(const AdmissibilityVerdict& v) {
  nlohmann::json j;
  j["verdict"] = v.kind == AdmissibilityKind::Admissible      ? "admissible"
                 : v.kind == AdmissibilityKind::NotAdmissible ? "not_admissible"
                                                              : "unknown";
  if (!v.certificate) {
    j["certificate"] = nullptr;
  } else if (*v.certificate == CertificateKind::FrameValidity) {
    j["certificate"] = {{"kind", "frame_validity"}};
  } else {
    nlohmann::json slots = nlohmann::json::object();
    for (std::size_t i = 0; i < v.pattern->p_slots.size(); ++i)
      slots["p" + std::to_string(i + 1)] = render(v.pattern->p_slots[i]);
    for (std::size_t i = 0; i < v.pattern->q_slots.size(); ++i)
      slots["q" + std::to_string(i + 1)] = {render(v.pattern->q_slots[i].first), render(v.pattern->q_slots[i].second)};
    j["certificate"] = {{"kind", "n_elimination"}, {"template", v.pattern->template_text}, {"slots", slots}};
  }
  if (v.witness) {
    nlohmann::json w = nlohmann::json::object();
    for (const auto& [name, f] : *v.witness) w[name] = render(f);
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["bounds"] = {{"max_depth", v.bounds.max_depth},
                 {"extra_letters", v.bounds.extra_letters},
                 {"m", v.bounds.m},
                 {"node_budget", v.bounds.node_budget},
                 {"letters", v.letters}};
  j["frame_valid"] = !v.frame_countermodel.has_value();
  if (v.frame_countermodel) j["frame_countermodel"] = to_json(*v.frame_countermodel);
  if (v.conclusion_countermodel) j["conclusion_countermodel"] = to_json(*v.conclusion_countermodel);
  return j;
}

}  // namespace ltlpm
