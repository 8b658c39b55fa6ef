#include "qgraph/graph.hpp"

#include <algorithm>
#include <numbers>
#include <queue>
#include <set>
#include <string>

#include "qgraph/error.hpp"
#include "qgraph/random.hpp"

namespace qgraph {

Graph::Graph(int vertex_count, std::vector<std::pair<int, int>> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)), incidence_(vertex_count > 0 ? vertex_count : 0) {
  require(vertex_count >= 1, "graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (int b = 0; b < bond_count(); ++b) {
    auto& [u, v] = edges_[b];
    require(u >= 0 && u < vertex_count && v >= 0 && v < vertex_count, "edge endpoint out of range");
    require(u != v, "self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    require(seen.insert({u, v}).second, "multi-edge between " + std::to_string(u) + " and " + std::to_string(v));
    incidence_[u].push_back(b);
    incidence_[v].push_back(b);
  }
  for (int a = 0; a < vertex_count; ++a) {
    require(!incidence_[a].empty(), "isolated vertex " + std::to_string(a));
  }
  require(is_connected(), "graph is not connected");
}

int Graph::local_index(int vertex, int edge) const {
  const auto& inc = incidence_.at(vertex);
  auto it = std::lower_bound(inc.begin(), inc.end(), edge);
  if (it == inc.end() || *it != edge) return -1;
  return static_cast<int>(it - inc.begin());
}

bool Graph::is_connected() const {
  std::vector<char> reached(vertex_count_, 0);
  std::queue<int> frontier;
  frontier.push(0);
  reached[0] = 1;
  int count = 1;
  while (!frontier.empty()) {
    const int a = frontier.front();
    frontier.pop();
    for (int b : incidence_[a]) {
      const int other = edges_[b].first == a ? edges_[b].second : edges_[b].first;
      if (!reached[other]) {
        reached[other] = 1;
        ++count;
        frontier.push(other);
      }
    }
  }
  return count == vertex_count_;
}

DirectedBondSpace::DirectedBondSpace(const Graph& graph)
    : origin_(2 * graph.bond_count()), terminus_(2 * graph.bond_count()) {
  for (int b = 0; b < graph.bond_count(); ++b) {
    const auto [u, v] = graph.edges()[b];
    origin_[index(b, Direction::forward)] = u;
    terminus_[index(b, Direction::forward)] = v;
    origin_[index(b, Direction::backward)] = v;
    terminus_[index(b, Direction::backward)] = u;
  }
}

double BondLengths::total() const noexcept {
  double sum = 0.0;
  for (double l : values) sum += l;
  return sum;
}

double BondLengths::mean_spacing() const {
  require(!values.empty(), "no bond lengths");
  return std::numbers::pi / total();
}

Graph build_complete_graph(int vertex_count) {
  require(vertex_count >= 2, "complete graph needs V >= 2");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(vertex_count) * (vertex_count - 1) / 2);
  for (int u = 0; u < vertex_count; ++u)
    for (int v = u + 1; v < vertex_count; ++v) edges.emplace_back(u, v);
  return Graph(vertex_count, std::move(edges));
}

namespace {

// One pairing-model attempt: stubs are matched one random pair at a time,
// rejecting pairs that would create a loop or a multi-edge. Returns false if
// the remaining stubs admit no valid pair.
bool try_pairing(int vertex_count, int degree, Rng& rng, std::vector<std::pair<int, int>>& edges) {
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(vertex_count) * degree);
  for (int a = 0; a < vertex_count; ++a)
    for (int k = 0; k < degree; ++k) stubs.push_back(a);
  std::vector<std::vector<char>> adjacent(vertex_count, std::vector<char>(vertex_count, 0));
  edges.clear();

  constexpr int kLocalRetries = 64;
  while (!stubs.empty()) {
    bool placed = false;
    for (int retry = 0; retry < kLocalRetries && !placed; ++retry) {
      const auto i = uniform_index(rng, stubs.size());
      const auto j = uniform_index(rng, stubs.size());
      const int u = stubs[i], v = stubs[j];
      if (i == j || u == v || adjacent[u][v]) continue;
      adjacent[u][v] = adjacent[v][u] = 1;
      edges.emplace_back(std::min(u, v), std::max(u, v));
      // Remove the larger index first so the smaller stays valid.
      const auto hi = std::max(i, j), lo = std::min(i, j);
      stubs[hi] = stubs.back();
      stubs.pop_back();
      stubs[lo] = stubs.back();
      stubs.pop_back();
      placed = true;
    }
    if (!placed) {
      bool any_valid = false;
      for (std::size_t i = 0; i < stubs.size() && !any_valid; ++i)
        for (std::size_t j = i + 1; j < stubs.size() && !any_valid; ++j)
          any_valid = stubs[i] != stubs[j] && !adjacent[stubs[i]][stubs[j]];
      if (!any_valid) return false;
    }
  }
  return true;
}

}  // namespace

Graph build_random_regular(int vertex_count, int degree, std::uint64_t seed, const RandomRegularOptions& options) {
  require(vertex_count >= 2, "random regular graph needs V >= 2");
  require(degree >= 1 && degree < vertex_count, "degree must satisfy 1 <= degree < V");
  require((static_cast<long long>(vertex_count) * degree) % 2 == 0, "V * degree must be even");
  if (degree == vertex_count - 1) return build_complete_graph(vertex_count);
  require(degree >= 3, "degree >= 3 required for connected random regular graphs");
  require(options.attempt_budget >= 1, "attempt budget must be positive");

  Rng rng(mix_seed(seed));
  std::vector<std::pair<int, int>> edges;
  for (int attempt = 0; attempt < options.attempt_budget; ++attempt) {
    if (!try_pairing(vertex_count, degree, rng, edges)) continue;
    std::sort(edges.begin(), edges.end());
    // Connectivity is checked without throwing so rejection stays cheap.
    std::vector<std::vector<int>> nbr(vertex_count);
    for (auto [u, v] : edges) {
      nbr[u].push_back(v);
      nbr[v].push_back(u);
    }
    std::vector<char> seen(vertex_count, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b : nbr[a])
        if (!seen[b]) {
          seen[b] = 1;
          ++count;
          stack.push_back(b);
        }
    }
    if (count == vertex_count) return Graph(vertex_count, edges);
  }
  fail(Errc::construction_failure, "random regular graph: attempt budget of " +
                                       std::to_string(options.attempt_budget) + " exhausted");
}

BondLengths sample_bond_lengths(int bond_count, double low, double high, std::uint64_t seed) {
  require(bond_count >= 1, "need at least one bond");
  require(low > 0.0 && high > low, "length interval must satisfy 0 < low < high");
  Rng rng(mix_seed(seed));
  BondLengths lengths;
  lengths.values.reserve(bond_count);
  for (int b = 0; b < bond_count; ++b) lengths.values.push_back(low + (high - low) * uniform01(rng));
  return lengths;
}

}  // namespace qgraph
