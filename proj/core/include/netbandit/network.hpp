#pragma once

// Interference network and unit clustering. The adjacency matrix H holds
// nonnegative finite weights h[i][j] with a zero diagonal; symmetry is not
// required, an edge entry sets the single directed weight h[i][j]. Cluster ids
// must be contiguous 0..C-1 with every cluster nonempty.

#include <cstddef>
#include <string>
#include <vector>

namespace netbandit {

class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(std::size_t n) : n_(n), w_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double weight(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  void set_weight(std::size_t i, std::size_t j, double w);

  // Row sum over all potential neighbors of i.
  double neighbor_weight_sum(std::size_t i) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> w_;
};

struct WeightedEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
};

// Builds an n x n matrix from directed edge entries. Throws on out-of-range
// indices, self-loops, non-finite or negative weights, and duplicate (i, j).
AdjacencyMatrix build_adjacency(std::size_t n, const std::vector<WeightedEdge>& edges);

class Clustering {
 public:
  Clustering() = default;
  explicit Clustering(std::vector<int> assignment);

  static Clustering singletons(std::size_t n);
  static Clustering single_cluster(std::size_t n);

  std::size_t num_units() const { return assignment_.size(); }
  std::size_t num_clusters() const { return members_.size(); }
  int cluster_of(std::size_t unit) const;
  const std::vector<std::size_t>& members(std::size_t cluster) const;
  const std::vector<int>& assignment() const { return assignment_; }

 private:
  std::vector<int> assignment_;
  std::vector<std::vector<std::size_t>> members_;
};

// JSON forms: network {"n": int, "edges": [[i, j, w], ...]},
// clustering {"assignment": [int, ...]}.
AdjacencyMatrix parse_network_json(const std::string& text);
std::string network_to_json(const AdjacencyMatrix& h);
Clustering parse_clustering_json(const std::string& text);
std::string clustering_to_json(const Clustering& c);

AdjacencyMatrix load_network_file(const std::string& path);
Clustering load_clustering_file(const std::string& path);

}  // namespace netbandit
