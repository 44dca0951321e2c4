#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ltlpm/error.hpp"

namespace ltlpm {

inline constexpr std::size_t kDefaultNodeBudget = std::size_t{1} << 22;

namespace detail {

/// Describes the per-state descriptions a window graph is built from.
///
/// A node is a run of `width` consecutive state ids s_0 .. s_{width-1} with
/// each s_{j+1} drawn from successors(s_j), accepted by `accept`. There is an
/// edge u -> v iff v's first width-1 entries equal u's last width-1 entries,
/// so infinite paths are exactly the infinite state sequences all of whose
/// windows are accepted.
struct WindowSpec {
  std::size_t state_count = 0;
  std::size_t width = 2;
  std::function<std::span<const std::uint32_t>(std::uint32_t)> successors;
  /// Optional early rejection of a partial window (length >= 2).
  std::function<bool(std::span<const std::uint32_t>)> partial_ok;
  std::function<bool(std::span<const std::uint32_t>)> accept;
  std::size_t node_budget = kDefaultNodeBudget;
};

/// State ids of a lasso: `prefix` once, then `loop` forever.
struct StateLasso {
  std::vector<std::uint32_t> prefix;
  std::vector<std::uint32_t> loop;
};

class WindowGraph {
 public:
  explicit WindowGraph(const WindowSpec& spec) : width_(spec.width) {
    build_nodes(spec);
    link();
    prune();
    mark_cycles();
  }

  std::size_t node_count() const noexcept { return nodes_.size() / width_; }

  std::span<const std::uint32_t> node(std::size_t id) const noexcept {
    return {nodes_.data() + id * width_, width_};
  }

  bool live(std::size_t id) const noexcept { return live_[id]; }

  /// Least live node (in lexicographic window order) satisfying `pred`.
  template <class Pred>
  std::optional<std::size_t> first_live(Pred&& pred) const {
    for (std::size_t id = 0; id < node_count(); ++id)
      if (live_[id] && pred(node(id))) return id;
    return std::nullopt;
  }

  /// Shortest path from `start` to the nearest node on a cycle, closed by
  /// the shortest cycle through that node. `start` must be live.
  StateLasso lasso_from(std::size_t start) const {
    std::vector<std::size_t> parent(node_count(), kNone);
    std::deque<std::size_t> queue{start};
    parent[start] = start;
    std::size_t entry = kNone;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      if (cyclic_[u]) {
        entry = u;
        break;
      }
      for (std::size_t v = succ_lo_[u]; v < succ_hi_[u]; ++v)
        if (live_[v] && parent[v] == kNone) {
          parent[v] = u;
          queue.push_back(v);
        }
    }
    StateLasso out;
    std::vector<std::size_t> path;
    for (std::size_t v = entry; v != start; v = parent[v]) path.push_back(parent[v]);
    std::reverse(path.begin(), path.end());
    for (std::size_t v : path) out.prefix.push_back(node(v)[0]);

    // Shortest return to `entry` inside its component.
    std::vector<std::size_t> back(node_count(), kNone);
    queue.assign({entry});
    back[entry] = entry;
    std::size_t last = kNone;
    while (!queue.empty() && last == kNone) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = succ_lo_[u]; v < succ_hi_[u]; ++v) {
        if (!live_[v] || component_[v] != component_[entry]) continue;
        if (v == entry) {
          last = u;
          break;
        }
        if (back[v] == kNone) {
          back[v] = u;
          queue.push_back(v);
        }
      }
    }
    std::vector<std::size_t> cycle;
    for (std::size_t v = last; v != entry; v = back[v]) cycle.push_back(v);
    cycle.push_back(entry);
    std::reverse(cycle.begin(), cycle.end());
    for (std::size_t v : cycle) out.loop.push_back(node(v)[0]);
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void build_nodes(const WindowSpec& spec) {
    std::vector<std::uint32_t> window;
    window.reserve(width_);
    std::size_t work = 0;
    const std::size_t work_limit = spec.node_budget * 64;
    std::function<void()> extend = [&] {
      if (++work > work_limit) throw CapacityExceeded("window enumeration", work_limit, work);
      if (window.size() == width_) {
        if (spec.accept(window)) {
          if (node_count() >= spec.node_budget)
            throw CapacityExceeded("window graph nodes", spec.node_budget, node_count() + 1);
          nodes_.insert(nodes_.end(), window.begin(), window.end());
        }
        return;
      }
      for (std::uint32_t next : spec.successors(window.back())) {
        window.push_back(next);
        if (!spec.partial_ok || spec.partial_ok(window)) extend();
        window.pop_back();
      }
    };
    for (std::uint32_t s = 0; s < spec.state_count; ++s) {
      window.assign({s});
      if (width_ == 1) {
        if (spec.accept(window)) nodes_.push_back(s);
        continue;
      }
      extend();
    }
  }

  // Nodes come out of build_nodes() in lexicographic order, so the nodes
  // sharing a given first width-1 entries form one contiguous range.
  void link() {
    const std::size_t n = node_count();
    const std::size_t k = width_ - 1;
    succ_lo_.resize(n);
    succ_hi_.resize(n);
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    auto prefix_less = [&](std::size_t node_id, std::span<const std::uint32_t> key) {
      auto w = node(node_id).first(k);
      return std::lexicographical_compare(w.begin(), w.end(), key.begin(), key.end());
    };
    auto key_less = [&](std::span<const std::uint32_t> key, std::size_t node_id) {
      auto w = node(node_id).first(k);
      return std::lexicographical_compare(key.begin(), key.end(), w.begin(), w.end());
    };
    for (std::size_t u = 0; u < n; ++u) {
      auto suffix = node(u).last(k);
      succ_lo_[u] = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), suffix, prefix_less) - ids.begin());
      succ_hi_[u] = static_cast<std::size_t>(std::upper_bound(ids.begin(), ids.end(), suffix, key_less) - ids.begin());
    }
    // Predecessors: every u whose successor range is [lo, hi) points at each node in it.
    pred_by_range_.clear();
    for (std::size_t u = 0; u < n; ++u)
      if (succ_lo_[u] < succ_hi_[u]) pred_by_range_.emplace_back(succ_lo_[u], u);
    std::sort(pred_by_range_.begin(), pred_by_range_.end());
  }

  // Drops nodes without an infinite continuation.
  void prune() {
    const std::size_t n = node_count();
    live_.assign(n, true);
    std::vector<std::size_t> out(n);
    std::vector<std::size_t> queue;
    for (std::size_t u = 0; u < n; ++u) {
      out[u] = succ_hi_[u] - succ_lo_[u];
      if (out[u] == 0) queue.push_back(u);
    }
    // Start of the run of nodes sharing v's first width-1 entries; that is
    // the value every predecessor of v stored as its successor range start.
    const std::size_t k = width_ - 1;
    std::vector<std::size_t> group_start(n);
    for (std::size_t v = 0; v < n; ++v) {
      const auto a = v > 0 ? node(v - 1).first(k) : std::span<const std::uint32_t>{};
      const auto b = node(v).first(k);
      group_start[v] = v > 0 && std::equal(a.begin(), a.end(), b.begin(), b.end()) ? group_start[v - 1] : v;
    }
    while (!queue.empty()) {
      const std::size_t v = queue.back();
      queue.pop_back();
      live_[v] = false;
      auto it = std::lower_bound(pred_by_range_.begin(), pred_by_range_.end(), std::make_pair(group_start[v], std::size_t{0}));
      for (; it != pred_by_range_.end() && it->first == group_start[v]; ++it) {
        const std::size_t u = it->second;
        if (live_[u] && out[u] > 0 && --out[u] == 0) queue.push_back(u);
      }
    }
  }

  // Tarjan over live nodes; cyclic_ marks nodes lying on some cycle.
  void mark_cycles() {
    const std::size_t n = node_count();
    component_.assign(n, kNone);
    cyclic_.assign(n, false);
    std::vector<std::size_t> index(n, kNone), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::size_t counter = 0, components = 0;
    struct Frame {
      std::size_t node;
      std::size_t next;
    };
    for (std::size_t root = 0; root < n; ++root) {
      if (!live_[root] || index[root] != kNone) continue;
      std::vector<Frame> frames{{root, succ_lo_[root]}};
      index[root] = low[root] = counter++;
      stack.push_back(root);
      on_stack[root] = true;
      while (!frames.empty()) {
        Frame& f = frames.back();
        if (f.next < succ_hi_[f.node]) {
          const std::size_t v = f.next++;
          if (!live_[v]) continue;
          if (v == f.node) cyclic_[v] = true;
          if (index[v] == kNone) {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            on_stack[v] = true;
            frames.push_back({v, succ_lo_[v]});
          } else if (on_stack[v]) {
            low[f.node] = std::min(low[f.node], index[v]);
          }
          continue;
        }
        const std::size_t u = f.node;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[u]);
        if (low[u] == index[u]) {
          std::vector<std::size_t> members;
          std::size_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            component_[w] = components;
            members.push_back(w);
          } while (w != u);
          if (members.size() > 1)
            for (std::size_t m : members) cyclic_[m] = true;
          ++components;
        }
      }
    }
  }

  std::size_t width_;
  std::vector<std::uint32_t> nodes_;
  std::vector<std::size_t> succ_lo_, succ_hi_;
  std::vector<std::pair<std::size_t, std::size_t>> pred_by_range_;
  std::vector<bool> live_;
  std::vector<bool> cyclic_;
  std::vector<std::size_t> component_;
};

}  // namespace detail
}  // namespace ltlpm
