#include "affspec/search.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>

#include "affspec/constructions.hpp"
#include "affspec/parallel.hpp"

namespace affspec {

CandidatePool enumerate_candidates(const MeasureInstance& inst, const IntVec2& a, unsigned kmax, unsigned radius) {
  CandidatePool pool;
  pool.kmax = kmax;
  pool.radius = radius;
  pool.frequencies.provenance =
      "candidates(kmax=" + std::to_string(kmax) + ", radius=" + std::to_string(radius) + ")";
  pool.frequencies.depth = kmax;
  const long p = inst.D.p;
  const long R = static_cast<long>(radius);
  for (unsigned k = 1; k <= kmax; ++k) {
    ExactMat2 Mk = transpose_power(inst.M, k);
    for (long j = 1; j < p; ++j)
      for (long z1 = -R; z1 <= R; ++z1)
        for (long z2 = -R; z2 <= R; ++z2) {
          ExactVec2 base = make_vec(AlgebraicScalar(Rational(j * a(0)) / Rational(p) + Rational(z1)),
                                    AlgebraicScalar(Rational(j * a(1)) / Rational(p) + Rational(z2)));
          pool.frequencies.insert(Mk * base);
        }
  }
  return pool;
}

std::size_t Graph::edges() const {
  std::size_t e = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) e += adj_[i][j];
  return e;
}

OrthogonalityGraph build_orthogonality_graph(const MeasureInstance& inst, const IntVec2& a,
                                             const FrequencySet& pool, unsigned kmax_edges) {
  OrthogonalityGraph og;
  og.kmax_edges = kmax_edges;
  og.vertices.provenance = pool.provenance + " + origin";
  og.vertices.depth = pool.depth;
  og.vertices.points.push_back(make_vec(AlgebraicScalar(0), AlgebraicScalar(0)));
  for (const auto& v : pool.points) og.vertices.insert(v);
  const std::size_t n = og.vertices.size();
  og.graph = Graph(n);
  std::vector<std::vector<bool>> row(n);
  parallel_for(n, [&](std::size_t i) {
    row[i].assign(n, false);
    for (std::size_t j = i + 1; j < n; ++j)
      row[i][j] = zero_lattice_member(og.vertices.points[j] - og.vertices.points[i], inst, a, kmax_edges).has_value();
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (row[i][j]) og.graph.connect(i, j);
  return og;
}

std::vector<std::size_t> max_clique(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> best, cur;
  if (n == 0) return best;

  // greedy colouring: order by colour class, bound[i] = colour of order[i]
  auto colour_sort = [&](const std::vector<std::size_t>& P, std::vector<std::size_t>& order,
                         std::vector<std::size_t>& bound) {
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t v : P) {
      std::size_t c = 0;
      for (; c < classes.size(); ++c) {
        bool clash = false;
        for (std::size_t w : classes[c])
          if (g.adjacent(v, w)) {
            clash = true;
            break;
          }
        if (!clash) break;
      }
      if (c == classes.size()) classes.emplace_back();
      classes[c].push_back(v);
    }
    order.clear();
    bound.clear();
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (std::size_t v : classes[c]) {
        order.push_back(v);
        bound.push_back(c + 1);
      }
  };

  std::function<void(const std::vector<std::size_t>&)> expand = [&](const std::vector<std::size_t>& P) {
    std::vector<std::size_t> order, bound;
    colour_sort(P, order, bound);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (cur.size() + bound[i] <= best.size()) return;
      std::size_t v = order[i];
      cur.push_back(v);
      std::vector<std::size_t> next;
      for (std::size_t k = 0; k < i; ++k)
        if (g.adjacent(v, order[k])) next.push_back(order[k]);
      if (next.empty()) {
        if (cur.size() > best.size()) best = cur;
      } else {
        expand(next);
      }
      cur.pop_back();
    }
  };

  std::vector<std::size_t> all(n), degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    all[i] = i;
    for (std::size_t j = 0; j < n; ++j) degree[i] += g.adjacent(i, j);
  }
  std::stable_sort(all.begin(), all.end(), [&](std::size_t x, std::size_t y) { return degree[x] > degree[y]; });
  expand(all);
  std::sort(best.begin(), best.end());
  return best;
}

std::vector<std::size_t> max_clique_exhaustive(const Graph& g) {
  const std::size_t n = g.size();
  if (n > 24) throw std::invalid_argument("exhaustive clique search is limited to 24 vertices");
  if (n == 0) return {};
  std::vector<std::uint32_t> nbr(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g.adjacent(i, j)) nbr[i] |= 1u << j;
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  std::vector<bool> ok(static_cast<std::size_t>(full) + 1, false);
  ok[0] = true;
  std::uint32_t best = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t low = static_cast<std::uint32_t>(std::countr_zero(mask));
    std::uint32_t rest = mask & (mask - 1);
    ok[mask] = ok[rest] && (nbr[low] & rest) == rest;
    if (ok[mask] && std::popcount(mask) > std::popcount(best)) best = mask;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (best & (1u << i)) out.push_back(i);
  return out;
}

CliqueResult max_orthogonal_clique(const MeasureInstance& inst, const IntVec2& a, const FrequencySet& pool,
                                   unsigned kmax_edges) {
  OrthogonalityGraph og = build_orthogonality_graph(inst, a, pool, kmax_edges);
  std::vector<std::size_t> c = max_clique(og.graph);
  // the origin joins any clique of pool points
  if (std::find(c.begin(), c.end(), 0) == c.end()) {
    bool all = std::all_of(c.begin(), c.end(), [&](std::size_t v) { return og.graph.adjacent(0, v); });
    if (all) c.insert(c.begin(), 0);
  }
  CliqueResult res;
  res.size = c.size();
  res.vertices = og.graph.size();
  res.edges = og.graph.edges();
  res.witness.provenance = "max_orthogonal_clique(" + pool.provenance + ", kmax'=" + std::to_string(kmax_edges) + ")";
  res.witness.depth = kmax_edges > 2 ? kmax_edges - 2 : 0;
  for (std::size_t v : c) res.witness.points.push_back(og.vertices.points[v]);
  return res;
}

}  // namespace affspec
