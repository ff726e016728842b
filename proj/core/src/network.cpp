#include "netbandit/network.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace netbandit {

using nlohmann::json;

void AdjacencyMatrix::set_weight(std::size_t i, std::size_t j, double w) {
  if (i >= n_ || j >= n_) throw std::invalid_argument("adjacency: index out of range");
  if (i == j && w != 0.0) throw std::invalid_argument("adjacency: nonzero diagonal");
  if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("adjacency: bad weight");
  w_[i * n_ + j] = w;
}

double AdjacencyMatrix::neighbor_weight_sum(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("adjacency: unit out of range");
  double s = 0.0;
  for (std::size_t j = 0; j < n_; ++j) s += w_[i * n_ + j];
  return s;
}

AdjacencyMatrix build_adjacency(std::size_t n, const std::vector<WeightedEdge>& edges) {
  AdjacencyMatrix h(n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (e.from >= n || e.to >= n) throw std::invalid_argument("adjacency: edge index out of range");
    if (e.from == e.to) throw std::invalid_argument("adjacency: self-loop");
    if (!seen.insert({e.from, e.to}).second)
      throw std::invalid_argument("adjacency: duplicate edge");
    h.set_weight(e.from, e.to, e.weight);
  }
  return h;
}

Clustering::Clustering(std::vector<int> assignment) : assignment_(std::move(assignment)) {
  if (assignment_.empty()) throw std::invalid_argument("clustering: empty assignment");
  int max_id = -1;
  for (int c : assignment_) {
    if (c < 0) throw std::invalid_argument("clustering: negative cluster id");
    if (c > max_id) max_id = c;
  }
  members_.assign(static_cast<std::size_t>(max_id) + 1, {});
  for (std::size_t i = 0; i < assignment_.size(); ++i)
    members_[static_cast<std::size_t>(assignment_[i])].push_back(i);
  for (const auto& m : members_)
    if (m.empty()) throw std::invalid_argument("clustering: cluster ids not contiguous");
}

Clustering Clustering::singletons(std::size_t n) {
  std::vector<int> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<int>(i);
  return Clustering(std::move(a));
}

Clustering Clustering::single_cluster(std::size_t n) {
  return Clustering(std::vector<int>(n, 0));
}

int Clustering::cluster_of(std::size_t unit) const {
  if (unit >= assignment_.size()) throw std::out_of_range("clustering: unit out of range");
  return assignment_[unit];
}

const std::vector<std::size_t>& Clustering::members(std::size_t cluster) const {
  if (cluster >= members_.size()) throw std::out_of_range("clustering: cluster out of range");
  return members_[cluster];
}

AdjacencyMatrix parse_network_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("n")) throw std::invalid_argument("network json: missing n");
  const std::size_t n = j.at("n").get<std::size_t>();
  std::vector<WeightedEdge> edges;
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3)
        throw std::invalid_argument("network json: edge must be [i, j, w]");
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
  }
  return build_adjacency(n, edges);
}

std::string network_to_json(const AdjacencyMatrix& h) {
  json edges = json::array();
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < h.size(); ++j)
      if (h.weight(i, j) != 0.0) edges.push_back({i, j, h.weight(i, j)});
  return json{{"n", h.size()}, {"edges", edges}}.dump();
}

Clustering parse_clustering_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("assignment")) throw std::invalid_argument("clustering json: missing assignment");
  return Clustering(j.at("assignment").get<std::vector<int>>());
}

std::string clustering_to_json(const Clustering& c) {
  return json{{"assignment", c.assignment()}}.dump();
}

static std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AdjacencyMatrix load_network_file(const std::string& path) {
  return parse_network_json(read_file(path));
}

Clustering load_clustering_file(const std::string& path) {
  return parse_clustering_json(read_file(path));
}

}  // namespace netbandit
