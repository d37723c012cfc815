#ifndef MACBELT_POLYTOPE_HPP
#define MACBELT_POLYTOPE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "macbelt/errors.hpp"
#include "macbelt/simplicial_complex.hpp"

namespace macbelt {

/// Combinatorial simple 3-polytope: facets as cyclic vertex sequences with
/// 1-based labels.  Validation enforces the face-lattice conditions of a
/// simple polytope boundary: three facets per vertex, two facets per edge,
/// simple facet cycles, connectivity and Euler characteristic 2.
class SimplePolytope3 {
 public:
  static SimplePolytope3 from_facets(std::vector<std::vector<int>> facets) {
    SimplePolytope3 p;
    p.facets_ = std::move(facets);
    p.validate();
    return p;
  }

  const std::vector<std::vector<int>>& facets() const { return facets_; }
  int facet_count() const { return static_cast<int>(facets_.size()); }
  int vertex_count() const { return v_; }
  int edge_count() const { return e_; }

  /// Facet sizes as (size, multiplicity), ascending by size.
  std::vector<std::pair<int, int>> facet_size_profile() const {
    std::map<int, int> hist;
    for (const auto& f : facets_) ++hist[static_cast<int>(f.size())];
    return {hist.begin(), hist.end()};
  }

  /// Fullerene combinatorics: every facet a pentagon or hexagon (which forces
  /// exactly twelve pentagons on a simple 3-polytope).
  bool is_fullerene() const {
    int pentagons = 0;
    for (const auto& f : facets_) {
      if (f.size() == 5)
        ++pentagons;
      else if (f.size() != 6)
        return false;
    }
    return pentagons == 12;
  }

  /// Boundary complex of the dual simplicial polytope: one vertex per facet,
  /// one triangle per polytope vertex (the three facets meeting there).
  SimplicialComplex dual_complex() const {
    std::vector<std::vector<int>> triangles(static_cast<std::size_t>(v_));
    for (int fi = 0; fi < facet_count(); ++fi)
      for (int vl : facets_[static_cast<std::size_t>(fi)])
        triangles[static_cast<std::size_t>(vl - 1)].push_back(fi + 1);
    return SimplicialComplex::from_facets(facet_count(), triangles);
  }

 private:
  void validate() {
    if (facets_.size() < 4) throw MalformedInput("a simple 3-polytope needs at least 4 facets");
    std::set<int> verts;
    std::map<std::pair<int, int>, int> edge_use;
    std::map<int, int> vertex_use;
    for (const auto& f : facets_) {
      if (f.size() < 3) throw MalformedInput("facet with fewer than 3 vertices");
      std::set<int> onface;
      for (std::size_t i = 0; i < f.size(); ++i) {
        const int a = f[i];
        const int b = f[(i + 1) % f.size()];
        if (a < 1) throw MalformedInput("vertex labels must be positive");
        if (!onface.insert(a).second) throw MalformedInput("facet cycle repeats vertex " + std::to_string(a));
        verts.insert(a);
        ++vertex_use[a];
        ++edge_use[{std::min(a, b), std::max(a, b)}];
      }
    }
    v_ = static_cast<int>(verts.size());
    e_ = static_cast<int>(edge_use.size());
    if (*verts.begin() != 1 || *verts.rbegin() != v_)
      throw MalformedInput("vertex labels must cover 1..V without gaps");
    for (const auto& [edge, count] : edge_use)
      if (count != 2)
        throw MalformedInput("edge {" + std::to_string(edge.first) + "," + std::to_string(edge.second) +
                             "} lies in " + std::to_string(count) + " facets, expected 2");
    for (const auto& [vtx, count] : vertex_use)
      if (count != 3)
        throw MalformedInput("vertex " + std::to_string(vtx) + " lies in " + std::to_string(count) +
                             " facets, expected 3");
    if (v_ - e_ + static_cast<int>(facets_.size()) != 2)
      throw MalformedInput("Euler characteristic differs from 2");
    // Connectivity of the vertex-edge graph.
    std::map<int, std::vector<int>> adj;
    for (const auto& [edge, count] : edge_use) {
      adj[edge.first].push_back(edge.second);
      adj[edge.second].push_back(edge.first);
    }
    std::vector<int> stack = {1};
    std::set<int> seen = {1};
    while (!stack.empty()) {
      const int at = stack.back();
      stack.pop_back();
      for (int to : adj[at])
        if (seen.insert(to).second) stack.push_back(to);
    }
    if (static_cast<int>(seen.size()) != v_) throw MalformedInput("polytope graph is disconnected");
  }

  std::vector<std::vector<int>> facets_;
  int v_ = 0;
  int e_ = 0;
};

/// Rebuilds the simple polytope whose dual boundary complex is K: one
/// polytope vertex per triangle of K, one facet per vertex of K with the
/// incident triangles in cyclic order.  Requires a closed simplicial
/// 2-sphere.
inline SimplePolytope3 polytope_from_dual(const SimplicialComplex& K) {
  if (!K.is_closed_2sphere()) throw PreconditionError("polytope_from_dual: not a closed 2-sphere");
  const auto& triangles = K.faces_of_card(3);
  auto index_of = [&](Simplex t) {
    return static_cast<int>(std::lower_bound(triangles.begin(), triangles.end(), t) - triangles.begin());
  };
  std::vector<std::vector<int>> facets;
  for (int v : K.vertices()) {
    const Simplex vb = vbit(v - 1);
    // Walk the link cycle of v, emitting the triangle {v, cur, nxt} at each
    // step.
    const VertexSet nb = K.neighbors(v);
    std::vector<int> cycle;
    const int start = min_vertex(nb);
    int prev = -1, cur = start;
    do {
      VertexSet next_opts = 0;
      for (int w : vertices_of(nb & ~vbit(cur)))
        if (K.has_face(vb | vbit(cur) | vbit(w))) next_opts |= vbit(w);
      if (prev >= 0) next_opts &= ~vbit(prev);
      const int nxt = min_vertex(next_opts);
      cycle.push_back(index_of(vb | vbit(cur) | vbit(nxt)) + 1);
      prev = cur;
      cur = nxt;
    } while (cur != start);
    facets.push_back(std::move(cycle));
  }
  return SimplePolytope3::from_facets(std::move(facets));
}

}  // namespace macbelt

#endif  // MACBELT_POLYTOPE_HPP
