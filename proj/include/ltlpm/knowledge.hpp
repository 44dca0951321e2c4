#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ltlpm/error.hpp"
#include "ltlpm/formula.hpp"
#include "ltlpm/model.hpp"
#include "ltlpm/semantics.hpp"

namespace ltlpm {

/// Agents' valuations over one shared frame, with the vote quota.
class AgentProfile {
 public:
  /// threshold 0 selects the strict majority.
  explicit AgentProfile(std::vector<PeriodicModel> agents, std::size_t threshold = 0) : agents_(std::move(agents)) {
    if (agents_.empty()) throw IncompatibleAgents("profile needs at least one agent");
    const PeriodicModel& first = agents_.front();
    for (std::size_t i = 1; i < agents_.size(); ++i) {
      const PeriodicModel& a = agents_[i];
      const std::string who = "agent " + std::to_string(i);
      if (a.letters() != first.letters()) throw IncompatibleAgents(who + " has different letters");
      if (!(a.bound() == first.bound())) throw IncompatibleAgents(who + " has a different bound");
      if (a.prefix().size() != first.prefix().size()) throw IncompatibleAgents(who + " has a different prefix length");
      if (a.loop().size() != first.loop().size()) throw IncompatibleAgents(who + " has a different loop length");
    }
    threshold_ = threshold == 0 ? agents_.size() / 2 + 1 : threshold;
    if (threshold_ > agents_.size())
      throw IncompatibleAgents("threshold " + std::to_string(threshold_) + " exceeds the " +
                               std::to_string(agents_.size()) + " agents");
  }

  const std::vector<PeriodicModel>& agents() const noexcept { return agents_; }
  std::size_t threshold() const noexcept { return threshold_; }

 private:
  std::vector<PeriodicModel> agents_;
  std::size_t threshold_ = 1;
};

/// {"threshold": t, "agents": [model, ...]}; threshold may be omitted.
/// Malformed documents raise InvalidModel, mismatched agents IncompatibleAgents.
inline AgentProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidModel("/", "expected an object");
  const auto& agents_json = detail::member(j, "agents", "");
  if (!agents_json.is_array()) throw InvalidModel("/agents", "expected an array");
  std::vector<PeriodicModel> agents;
  for (std::size_t i = 0; i < agents_json.size(); ++i)
    agents.push_back(model_from_json(agents_json[i], "/agents/" + std::to_string(i)));
  std::size_t threshold = 0;
  if (j.contains("threshold")) {
    if (!detail::is_natural(j["threshold"]) || j["threshold"].get<std::size_t>() < 1)
      throw InvalidModel("/threshold", "expected a natural number >= 1");
    threshold = j["threshold"].get<std::size_t>();
  }
  return AgentProfile(std::move(agents), threshold);
}

inline nlohmann::json to_json(const AgentProfile& p) {
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& a : p.agents()) agents.push_back(to_json(a));
  return {{"threshold", p.threshold()}, {"agents", std::move(agents)}};
}

/// Letter p holds at a iff at least threshold agents make it hold there.
inline PeriodicModel vote_model(const AgentProfile& p) {
  const PeriodicModel& first = p.agents().front();
  const std::size_t letters = first.letters().size();
  auto vote = [&](std::size_t a) {
    Row row(letters);
    for (std::size_t l = 0; l < letters; ++l) {
      std::size_t count = 0;
      for (const auto& agent : p.agents()) count += agent.value(l, a);
      row[l] = count >= p.threshold();
    }
    return row;
  };
  std::vector<Row> prefix, loop;
  for (std::size_t a = 0; a < first.prefix().size(); ++a) prefix.push_back(vote(a));
  for (std::size_t i = 0; i < first.loop().size(); ++i) loop.push_back(vote(first.prefix().size() + i));
  return PeriodicModel(first.letters(), std::move(prefix), std::move(loop), first.bound());
}

inline bool eval_voted_knowledge(const AgentProfile& p, const Formula& f, std::size_t a) {
  return eval(vote_model(p), f, a);
}

/// K[psi] phi known by every agent under its own valuation.
inline bool eval_shared_knowledge(const AgentProfile& p, const Formula& psi, const Formula& phi, std::size_t a) {
  if (has_knowledge(psi) || has_knowledge(phi))
    throw NestedKnowledgeUnsupported();
  const Formula f = Formula::since(phi, psi);
  for (const auto& agent : p.agents())
    if (!eval(agent, f, a)) return false;
  return true;
}

}  // namespace ltlpm
