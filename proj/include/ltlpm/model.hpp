#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ltlpm/error.hpp"

namespace ltlpm {

/// Width of the Since window at each state. A uniform bound m lets state a
/// see [a, a+m]; a non-uniform bound gives state a the window
/// [a, a + w_a] with w read from window_prefix and then window_loop.
class Bound {
 public:
  static Bound uniform(std::size_t m) {
    if (m < 1) throw InvalidModel("/bound/uniform", "m must be at least 1");
    Bound b;
    b.uniform_ = m;
    return b;
  }

  /// Window lengths must be >= 1 and nondecreasing; a periodic nondecreasing
  /// sequence is constant on its loop.
  static Bound non_uniform(std::vector<std::size_t> window_prefix, std::vector<std::size_t> window_loop) {
    if (window_loop.empty()) throw InvalidModel("/bound/window_loop", "must be nonempty");
    for (std::size_t i = 0; i < window_prefix.size(); ++i) {
      if (window_prefix[i] < 1)
        throw InvalidModel("/bound/window_prefix/" + std::to_string(i), "window must be at least 1");
      if (i > 0 && window_prefix[i] < window_prefix[i - 1])
        throw InvalidModel("/bound/window_prefix/" + std::to_string(i), "windows must be nondecreasing");
    }
    for (std::size_t i = 0; i < window_loop.size(); ++i) {
      if (window_loop[i] < 1)
        throw InvalidModel("/bound/window_loop/" + std::to_string(i), "window must be at least 1");
      if (window_loop[i] != window_loop[0])
        throw InvalidModel("/bound/window_loop/" + std::to_string(i),
                           "nondecreasing periodic windows must be constant on the loop");
    }
    if (!window_prefix.empty() && window_prefix.back() > window_loop[0])
      throw InvalidModel("/bound/window_loop/0", "windows must be nondecreasing");
    Bound b;
    b.window_prefix_ = std::move(window_prefix);
    b.window_loop_ = std::move(window_loop);
    return b;
  }

  bool is_uniform() const noexcept { return uniform_ != 0; }
  /// Uniform width; 0 for non-uniform bounds.
  std::size_t m() const noexcept { return uniform_; }
  const std::vector<std::size_t>& window_prefix() const noexcept { return window_prefix_; }
  const std::vector<std::size_t>& window_loop() const noexcept { return window_loop_; }

  std::size_t window(std::size_t a) const noexcept {
    if (is_uniform()) return uniform_;
    return a < window_prefix_.size() ? window_prefix_[a] : window_loop_[0];
  }

  /// First state from which the window width no longer changes.
  std::size_t stable_from() const noexcept { return is_uniform() ? 0 : window_prefix_.size(); }

  friend bool operator==(const Bound& a, const Bound& b) {
    return a.uniform_ == b.uniform_ && a.window_prefix_ == b.window_prefix_ && a.window_loop_ == b.window_loop_;
  }

 private:
  Bound() = default;
  std::size_t uniform_ = 0;
  std::vector<std::size_t> window_prefix_;
  std::vector<std::size_t> window_loop_;
};

/// Letter values at one state, indexed like PeriodicModel::letters().
using Row = std::vector<bool>;

/// An ultimately periodic valuation over the natural numbers: the prefix
/// rows, then the loop rows repeated forever.
class PeriodicModel {
 public:
  PeriodicModel(std::vector<std::string> letters, std::vector<Row> prefix, std::vector<Row> loop, Bound bound)
      : letters_(std::move(letters)), prefix_(std::move(prefix)), loop_(std::move(loop)), bound_(std::move(bound)) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < letters_.size(); ++i)
      if (!seen.insert(letters_[i]).second)
        throw InvalidModel("/letters/" + std::to_string(i), "duplicate letter '" + letters_[i] + "'");
    if (loop_.empty()) throw InvalidModel("/loop", "must be nonempty");
    check_rows(prefix_, "/prefix/");
    check_rows(loop_, "/loop/");
  }

  const std::vector<std::string>& letters() const noexcept { return letters_; }
  const std::vector<Row>& prefix() const noexcept { return prefix_; }
  const std::vector<Row>& loop() const noexcept { return loop_; }
  const Bound& bound() const noexcept { return bound_; }

  std::optional<std::size_t> letter_index(const std::string& name) const {
    auto it = std::find(letters_.begin(), letters_.end(), name);
    if (it == letters_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - letters_.begin());
  }

  const Row& row(std::size_t a) const noexcept {
    if (a < prefix_.size()) return prefix_[a];
    return loop_[(a - prefix_.size()) % loop_.size()];
  }

  bool value(std::size_t letter, std::size_t a) const noexcept { return row(a)[letter]; }

  /// From here on every formula's truth repeats with period loop().size().
  std::size_t period_start() const noexcept { return std::max(prefix_.size(), bound_.stable_from()); }

  std::size_t period() const noexcept { return loop_.size(); }

  /// Representative of state a inside [0, period_start() + period()).
  std::size_t fold(std::size_t a) const noexcept {
    const std::size_t off = period_start();
    return a < off ? a : off + (a - off) % period();
  }

  friend bool operator==(const PeriodicModel& a, const PeriodicModel& b) {
    return a.letters_ == b.letters_ && a.prefix_ == b.prefix_ && a.loop_ == b.loop_ && a.bound_ == b.bound_;
  }

 private:
  void check_rows(const std::vector<Row>& rows, const std::string& where) const {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].size() != letters_.size())
        throw InvalidModel(where + std::to_string(i), "row must assign all " + std::to_string(letters_.size()) +
                                                          " letters, got " + std::to_string(rows[i].size()));
  }

  std::vector<std::string> letters_;
  std::vector<Row> prefix_;
  std::vector<Row> loop_;
  Bound bound_;
};

/// Finite presentation of the set of states where a formula holds.
struct TruthVector {
  std::vector<bool> prefix_truth;
  std::vector<bool> loop_truth;
  std::size_t offset = 0;

  bool at(std::size_t a) const noexcept {
    if (a < offset) return prefix_truth[a];
    return loop_truth[(a - offset) % loop_truth.size()];
  }

  bool all() const noexcept {
    return std::all_of(prefix_truth.begin(), prefix_truth.end(), [](bool b) { return b; }) &&
           std::all_of(loop_truth.begin(), loop_truth.end(), [](bool b) { return b; });
  }

  /// Some state where the vector is false, if any.
  std::optional<std::size_t> first_false() const noexcept {
    for (std::size_t i = 0; i < offset + loop_truth.size(); ++i)
      if (!at(i)) return i;
    return std::nullopt;
  }

  friend bool operator==(const TruthVector&, const TruthVector&) = default;
};

// JSON.

inline nlohmann::json to_json(const Bound& b) {
  if (b.is_uniform()) return {{"uniform", b.m()}};
  return {{"window_prefix", b.window_prefix()}, {"window_loop", b.window_loop()}};
}

inline nlohmann::json to_json(const PeriodicModel& model) {
  auto rows = [&](const std::vector<Row>& in) {
    nlohmann::json out = nlohmann::json::array();
    for (const Row& r : in) {
      nlohmann::json row = nlohmann::json::object();
      for (std::size_t i = 0; i < model.letters().size(); ++i) row[model.letters()[i]] = static_cast<bool>(r[i]);
      out.push_back(std::move(row));
    }
    return out;
  };
  return {{"letters", model.letters()},
          {"bound", to_json(model.bound())},
          {"prefix", rows(model.prefix())},
          {"loop", rows(model.loop())}};
}

namespace detail {

inline const nlohmann::json& member(const nlohmann::json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw InvalidModel(path.empty() ? "/" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidModel(path + "/" + key, "missing");
  return *it;
}

inline bool is_natural(const nlohmann::json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

inline std::vector<std::size_t> naturals(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw InvalidModel(path, "expected an array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!is_natural(j[i])) throw InvalidModel(path + "/" + std::to_string(i), "expected a natural number");
    out.push_back(j[i].get<std::size_t>());
  }
  return out;
}

}  // namespace detail

inline Bound bound_from_json(const nlohmann::json& j, const std::string& path = "/bound") {
  if (!j.is_object()) throw InvalidModel(path, "expected an object");
  if (j.contains("uniform")) {
    const auto& m = j["uniform"];
    if (!detail::is_natural(m)) throw InvalidModel(path + "/uniform", "expected a natural number");
    if (m.get<std::size_t>() < 1) throw InvalidModel(path + "/uniform", "m must be at least 1");
    return Bound::uniform(m.get<std::size_t>());
  }
  auto prefix = detail::naturals(detail::member(j, "window_prefix", path), path + "/window_prefix");
  auto loop = detail::naturals(detail::member(j, "window_loop", path), path + "/window_loop");
  try {
    return Bound::non_uniform(std::move(prefix), std::move(loop));
  } catch (const InvalidModel& e) {
    throw InvalidModel(path + e.path().substr(std::string("/bound").size()),
                       std::string(e.what()).substr(e.path().size() + 2));
  }
}

/// Reads the model document. `path` prefixes every error location, so a
/// model nested in a larger document reports where it sits.
inline PeriodicModel model_from_json(const nlohmann::json& j, const std::string& path = "") {
  const auto& letters_json = detail::member(j, "letters", path);
  if (!letters_json.is_array()) throw InvalidModel(path + "/letters", "expected an array");
  std::vector<std::string> letters;
  for (std::size_t i = 0; i < letters_json.size(); ++i) {
    if (!letters_json[i].is_string())
      throw InvalidModel(path + "/letters/" + std::to_string(i), "expected a string");
    letters.push_back(letters_json[i].get<std::string>());
  }
  Bound bound = bound_from_json(detail::member(j, "bound", path), path + "/bound");

  auto rows = [&](const char* key) {
    const std::string where = path + "/" + key;
    const auto& arr = detail::member(j, key, path);
    if (!arr.is_array()) throw InvalidModel(where, "expected an array");
    std::vector<Row> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string row_path = where + "/" + std::to_string(i);
      if (!arr[i].is_object()) throw InvalidModel(row_path, "expected an object");
      Row row(letters.size());
      for (std::size_t l = 0; l < letters.size(); ++l) {
        auto it = arr[i].find(letters[l]);
        if (it == arr[i].end()) throw InvalidModel(row_path, "missing letter '" + letters[l] + "'");
        if (!it->is_boolean() && !(it->is_number_integer() && (*it == 0 || *it == 1)))
          throw InvalidModel(row_path + "/" + letters[l], "expected a boolean");
        row[l] = it->is_boolean() ? it->get<bool>() : *it == 1;
      }
      for (const auto& [key, value] : arr[i].items())
        if (std::find(letters.begin(), letters.end(), key) == letters.end())
          throw InvalidModel(row_path + "/" + key, "not a declared letter");
      out.push_back(std::move(row));
    }
    return out;
  };
  auto prefix = rows("prefix");
  auto loop = rows("loop");
  if (loop.empty()) throw InvalidModel(path + "/loop", "must be nonempty");
  try {
    return PeriodicModel(std::move(letters), std::move(prefix), std::move(loop), std::move(bound));
  } catch (const InvalidModel& e) {
    throw InvalidModel(path + e.path(), std::string(e.what()).substr(e.path().size() + 2));
  }
}

}  // namespace ltlpm
