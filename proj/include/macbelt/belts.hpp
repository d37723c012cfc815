#ifndef MACBELT_BELTS_HPP
#define MACBELT_BELTS_HPP

#include <algorithm>
#include <vector>

#include "macbelt/bits.hpp"
#include "macbelt/simplicial_complex.hpp"

namespace macbelt {

/// An induced cycle in the one-skeleton, stored in canonical traversal order:
/// the smallest vertex first, then the smaller of its two cycle neighbors.
struct Belt {
  std::vector<int> cycle;  // 1-based labels
  VertexSet support = 0;

  int length() const { return static_cast<int>(cycle.size()); }

  friend bool operator==(const Belt& a, const Belt& b) { return a.support == b.support && a.cycle == b.cycle; }
};

namespace detail {

struct CycleSearch {
  const SimplicialComplex* K = nullptr;
  int n = 0;
  VertexSet require = 0;
  VertexSet forbid = 0;
  std::vector<VertexSet> nbr;  // by 0-based bit
  std::vector<int> path;       // 0-based bits
  VertexSet on_path = 0;
  std::vector<Belt>* out = nullptr;
  bool stop_at_first = false;
  bool found = false;

  void emit() {
    Belt b;
    b.support = on_path;
    for (int bpos : path) b.cycle.push_back(bpos + 1);
    out->push_back(std::move(b));
    found = true;
  }

  // Extends the path one vertex at a time.  Invariants: every vertex after
  // the anchor exceeds it; consecutive path vertices are adjacent; no other
  // pairs of path vertices are adjacent (so the final cycle is induced).
  void extend() {
    if (found && stop_at_first) return;
    const int anchor = path.front();
    const int last = path.back();
    if (static_cast<int>(path.size()) == n) {
      if (!(nbr[static_cast<std::size_t>(last)] & vbit(anchor))) return;
      if ((require & ~on_path) != 0) return;
      if (path[1] > path.back()) return;  // one orientation per cycle
      if (n == 3 && K->has_face(on_path)) return;  // a filled triangle is not a cycle subcomplex
      emit();
      return;
    }
    // A new vertex may touch the path only at its tail; the closing vertex is
    // additionally allowed (and later required) to touch the anchor.
    VertexSet seen_block = 0;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) seen_block |= vbit(path[i]);
    const bool closing_next = static_cast<int>(path.size()) == n - 1;
    if (!closing_next && path.size() >= 2) seen_block |= vbit(anchor);

    VertexSet cand = nbr[static_cast<std::size_t>(last)] & ~on_path & ~forbid;
    cand &= ~(vbit(anchor) - 1);  // strictly above the anchor (anchor bit itself is off via on_path)
    for (int v : vertices_of(cand)) {
      if (nbr[static_cast<std::size_t>(v)] & seen_block) continue;
      // Prune: the vertices still owed to `require` must fit in the slots left.
      const VertexSet owed = require & ~(on_path | vbit(v));
      if (card(owed) > n - static_cast<int>(path.size()) - 1) continue;
      path.push_back(v);
      on_path |= vbit(v);
      extend();
      on_path &= ~vbit(v);
      path.pop_back();
      if (found && stop_at_first) return;
    }
  }
};

inline std::vector<Belt> induced_cycles_impl(const SimplicialComplex& K, int n, VertexSet require,
                                             VertexSet forbid, bool stop_at_first) {
  std::vector<Belt> out;
  if (n < 3) return out;
  CycleSearch s;
  s.K = &K;
  s.n = n;
  s.require = require;
  s.forbid = forbid;
  s.out = &out;
  s.stop_at_first = stop_at_first;
  s.nbr.assign(64, 0);
  for (Simplex e : K.faces_of_card(2)) {
    const auto vs = vertices_of(e);
    s.nbr[static_cast<std::size_t>(vs[0])] |= vbit(vs[1]);
    s.nbr[static_cast<std::size_t>(vs[1])] |= vbit(vs[0]);
  }
  // Anchor on each admissible vertex ascending; a cycle is reported exactly
  // once, anchored at its minimum vertex.
  for (int a : vertices_of(K.vertex_set() & ~forbid)) {
    // Cycles anchored at `a` contain only vertices >= a, so once the anchor
    // passes some required vertex nothing further can match.
    if ((require & (vbit(a) - 1)) != 0) break;
    s.path = {a};
    s.on_path = vbit(a);
    s.extend();
    if (s.found && stop_at_first) break;
  }
  return out;
}

}  // namespace detail

/// All length-n induced cycles of the one-skeleton whose full subcomplex is
/// exactly a circle (for n = 3 this excludes filled triangles).  Optional
/// masks restrict the search: every cycle must contain all of `require` and
/// avoid all of `forbid`.
inline std::vector<Belt> belts(const SimplicialComplex& K, int n, VertexSet require = 0,
                               VertexSet forbid = 0) {
  return detail::induced_cycles_impl(K, n, require, forbid, /*stop_at_first=*/false);
}

/// Whether any induced 4-cycle exists.
inline bool has_four_belt(const SimplicialComplex& K) {
  return !detail::induced_cycles_impl(K, 4, 0, 0, /*stop_at_first=*/true).empty();
}

/// First belt found through `require` avoiding `forbid`, if any.
inline std::vector<Belt> first_belt(const SimplicialComplex& K, int n, VertexSet require,
                                    VertexSet forbid) {
  return detail::induced_cycles_impl(K, n, require, forbid, /*stop_at_first=*/true);
}

}  // namespace macbelt

#endif  // MACBELT_BELTS_HPP
