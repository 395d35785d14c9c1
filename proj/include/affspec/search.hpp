#pragma once

#include <cstdint>
#include <vector>

#include "affspec/measure_model.hpp"

namespace affspec {

struct CandidatePool {
  FrequencySet frequencies;
  unsigned kmax = 0;
  unsigned radius = 0;
};

// Deduplicated points M*^k (j a/p + z), k <= kmax, 1 <= j < p, z in [-radius, radius]^2.
CandidatePool enumerate_candidates(const MeasureInstance& inst, const IntVec2& a, unsigned kmax, unsigned radius);

class Graph {
 public:
  explicit Graph(std::size_t n = 0) : n_(n), adj_(n, std::vector<bool>(n, false)) {}
  std::size_t size() const { return n_; }
  void connect(std::size_t u, std::size_t v) {
    adj_[u][v] = adj_[v][u] = true;
  }
  bool adjacent(std::size_t u, std::size_t v) const { return adj_[u][v]; }
  std::size_t edges() const;

 private:
  std::size_t n_;
  std::vector<std::vector<bool>> adj_;
};

struct OrthogonalityGraph {
  FrequencySet vertices;  // vertex 0 is the origin
  Graph graph;
  unsigned kmax_edges = 0;
};

OrthogonalityGraph build_orthogonality_graph(const MeasureInstance& inst, const IntVec2& a,
                                             const FrequencySet& pool, unsigned kmax_edges);

// Maximum clique by colouring-bounded branch and bound; vertex indices ascending.
std::vector<std::size_t> max_clique(const Graph& g);
// Exhaustive subset enumeration; at most 24 vertices.
std::vector<std::size_t> max_clique_exhaustive(const Graph& g);

struct CliqueResult {
  std::size_t size = 0;
  FrequencySet witness;
  std::size_t vertices = 0;
  std::size_t edges = 0;
};

CliqueResult max_orthogonal_clique(const MeasureInstance& inst, const IntVec2& a, const FrequencySet& pool,
                                   unsigned kmax_edges);

}  // namespace affspec
