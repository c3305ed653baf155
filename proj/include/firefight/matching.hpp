#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace firefight {

/// Hopcroft-Karp maximum matching on a bipartite graph with left vertices
/// 0..left-1 and right vertices 0..right-1.
class BipartiteMatcher {
 public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  BipartiteMatcher(std::size_t left, std::size_t right) : adj_(left), right_(right) {}

  void add_edge(std::size_t u, std::size_t v) { adj_.at(u).push_back(v); }

  std::size_t maximum_matching() {
    const std::size_t left = adj_.size();
    match_left_.assign(left, kNone);
    match_right_.assign(right_, kNone);
    std::size_t size = 0;
    while (layer()) {
      for (std::size_t u = 0; u < left; ++u)
        if (match_left_[u] == kNone && augment(u)) ++size;
    }
    return size;
  }

  bool has_perfect_matching() {
    return adj_.size() == right_ && maximum_matching() == adj_.size();
  }

  /// Partner of left vertex u after maximum_matching(), or kNone.
  std::size_t partner(std::size_t u) const { return match_left_.at(u); }

 private:
  static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

  bool layer() {
    const std::size_t left = adj_.size();
    dist_.assign(left, kInf);
    queue_.clear();
    for (std::size_t u = 0; u < left; ++u)
      if (match_left_[u] == kNone) {
        dist_[u] = 0;
        queue_.push_back(u);
      }
    bool found = false;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::size_t u = queue_[head];
      for (std::size_t v : adj_[u]) {
        const std::size_t w = match_right_[v];
        if (w == kNone) {
          found = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          queue_.push_back(w);
        }
      }
    }
    return found;
  }

  bool augment(std::size_t u) {
    for (std::size_t v : adj_[u]) {
      const std::size_t w = match_right_[v];
      if (w == kNone || (dist_[w] == dist_[u] + 1 && augment(w))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::size_t right_;
  std::vector<std::size_t> match_left_, match_right_, dist_, queue_;
};

}  // namespace firefight
