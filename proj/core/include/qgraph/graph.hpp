#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace qgraph {

/// Connected simple undirected graph. Edge b joins edges()[b].first <
/// edges()[b].second; incidence lists are sorted by edge id.
class Graph {
 public:
  Graph(int vertex_count, std::vector<std::pair<int, int>> edges);

  int vertex_count() const noexcept { return vertex_count_; }
  int bond_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  const std::vector<int>& incident_edges(int vertex) const { return incidence_.at(vertex); }
  int degree(int vertex) const { return static_cast<int>(incidence_.at(vertex).size()); }
  /// Position of `edge` in the sorted incidence list of `vertex`, or -1.
  int local_index(int vertex, int edge) const;

  bool is_connected() const;

 private:
  int vertex_count_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> incidence_;
};

enum class Direction : int { forward = 0, backward = 1 };

/// The 2B directed bonds. Index layout mu = 2*b + d, with d = 0 for the
/// direction low -> high vertex and d = 1 for the reverse.
class DirectedBondSpace {
 public:
  explicit DirectedBondSpace(const Graph& graph);

  int size() const noexcept { return static_cast<int>(origin_.size()); }
  static constexpr int index(int bond, Direction d) noexcept { return 2 * bond + static_cast<int>(d); }
  static constexpr int bond(int mu) noexcept { return mu / 2; }
  static constexpr Direction direction(int mu) noexcept { return static_cast<Direction>(mu % 2); }
  static constexpr int flip(int mu) noexcept { return mu ^ 1; }

  int origin(int mu) const { return origin_.at(mu); }
  int terminus(int mu) const { return terminus_.at(mu); }

 private:
  std::vector<int> origin_;
  std::vector<int> terminus_;
};

struct BondLengths {
  std::vector<double> values;

  int size() const noexcept { return static_cast<int>(values.size()); }
  double total() const noexcept;
  /// Mean level spacing pi / sum(L_b).
  double mean_spacing() const;
};

Graph build_complete_graph(int vertex_count);

struct RandomRegularOptions {
  int attempt_budget = 1000;
};

Graph build_random_regular(int vertex_count, int degree, std::uint64_t seed,
                           const RandomRegularOptions& options = {});

BondLengths sample_bond_lengths(int bond_count, double low, double high, std::uint64_t seed);

}  // namespace qgraph
