#ifndef MACBELT_SIMPLICIAL_COMPLEX_HPP
#define MACBELT_SIMPLICIAL_COMPLEX_HPP

#include <algorithm>
#include <bit>
#include <string>
#include <unordered_set>
#include <vector>

#include "macbelt/bits.hpp"
#include "macbelt/errors.hpp"

namespace macbelt {

/// Finite abstract simplicial complex on a ground set of labels drawn from
/// 1..63.  The ground set may strictly contain the vertex set: a label with
/// no singleton face is a "ghost" and still counts toward the ambient set
/// that subset-indexed constructions range over.  Faces are stored downward
/// closed, always including the empty face.
class SimplicialComplex {
 public:
  SimplicialComplex() : ground_(0) { by_card_.push_back({0}); }

  /// Builds the downward closure of the given maximal faces on ground set
  /// {1..m}.  Labels are 1-based.  Throws MalformedInput on out-of-range
  /// labels, duplicate vertices within a facet, or oversized input.
  static SimplicialComplex from_facets(int m, const std::vector<std::vector<int>>& facets) {
    if (m < 1 || m > kMaxVertices)
      throw MalformedInput("ground set size must be between 1 and " + std::to_string(kMaxVertices) +
                           ", got " + std::to_string(m));
    std::vector<Simplex> seeds;
    seeds.reserve(facets.size());
    for (const auto& facet : facets) {
      if (facet.size() > 20) throw MalformedInput("facet with more than 20 vertices");
      Simplex s = 0;
      for (int label : facet) {
        if (label < 1 || label > m)
          throw MalformedInput("vertex label " + std::to_string(label) + " outside 1.." +
                               std::to_string(m));
        const Simplex bit = vbit(label - 1);
        if (s & bit) throw MalformedInput("repeated vertex " + std::to_string(label) + " in facet");
        s |= bit;
      }
      seeds.push_back(s);
    }
    return SimplicialComplex(full_set(m), seeds);
  }

  /// Downward closure of `seeds` on an explicit ground set (used for derived
  /// complexes that keep their original labels).
  static SimplicialComplex from_faces(VertexSet ground, const std::vector<Simplex>& seeds) {
    return SimplicialComplex(ground, seeds);
  }

  // -- mask/label conversions ------------------------------------------------

  static Simplex mask_of(const std::vector<int>& labels) {
    Simplex s = 0;
    for (int v : labels) s |= vbit(v - 1);
    return s;
  }
  static std::vector<int> labels_of(Simplex s) {
    std::vector<int> out;
    for (int b : vertices_of(s)) out.push_back(b + 1);
    return out;
  }

  // -- basic queries ----------------------------------------------------------

  VertexSet ground() const { return ground_; }
  int m() const { return card(ground_); }

  /// Labels that occur as singleton faces.
  std::vector<int> vertices() const { return labels_of(vertex_set()); }
  VertexSet vertex_set() const {
    VertexSet s = 0;
    for (Simplex v : faces_of_card(1)) s |= v;
    return s;
  }

  bool has_face(Simplex s) const { return lookup_.count(s) != 0; }

  /// Dimension of the complex; -1 when only the empty face is present.
  int dim() const { return static_cast<int>(by_card_.size()) - 2; }

  /// Faces of cardinality c (dimension c-1), ascending as bitmask integers.
  const std::vector<Simplex>& faces_of_card(int c) const {
    static const std::vector<Simplex> kNone;
    if (c < 0 || c >= static_cast<int>(by_card_.size())) return kNone;
    return by_card_[static_cast<std::size_t>(c)];
  }

  /// All faces including the empty one, by cardinality then mask order.
  std::vector<Simplex> all_faces() const {
    std::vector<Simplex> out;
    for (const auto& level : by_card_) out.insert(out.end(), level.begin(), level.end());
    return out;
  }

  /// Maximal faces, ascending as bitmask integers.
  std::vector<Simplex> facets() const {
    std::vector<Simplex> out;
    for (const auto& level : by_card_)
      for (Simplex s : level) {
        bool maximal = true;
        for (int b : vertices_of(ground_ & ~s))
          if (has_face(s | vbit(b))) {
            maximal = false;
            break;
          }
        if (maximal) out.push_back(s);
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// (f_0, ..., f_dim).
  std::vector<int> f_vector() const {
    std::vector<int> f;
    for (int c = 1; c < static_cast<int>(by_card_.size()); ++c)
      f.push_back(static_cast<int>(by_card_[static_cast<std::size_t>(c)].size()));
    return f;
  }

  int euler_characteristic() const {
    int chi = 0, sign = 1;
    for (int fi : f_vector()) {
      chi += sign * fi;
      sign = -sign;
    }
    return chi;
  }

  bool is_pure() const {
    const int d = dim();
    for (Simplex s : facets())
      if (card(s) != d + 1) return false;
    return true;
  }

  // -- adjacency ---------------------------------------------------------------

  bool adjacent(int u, int v) const { return u != v && has_face(vbit(u - 1) | vbit(v - 1)); }

  /// Mask of labels joined to v by an edge.
  VertexSet neighbors(int v) const {
    VertexSet out = 0;
    for (Simplex e : faces_of_card(2))
      if (e & vbit(v - 1)) out |= e & ~vbit(v - 1);
    return out;
  }

  // -- derived complexes --------------------------------------------------------

  /// Full subcomplex on I: all faces contained in I, with ground set I.
  SimplicialComplex full_subcomplex(VertexSet I) const {
    if ((I & ~ground_) != 0) throw PreconditionError("full_subcomplex: I not within the ground set");
    std::vector<Simplex> kept;
    for (const auto& level : by_card_)
      for (Simplex s : level)
        if ((s & ~I) == 0) kept.push_back(s);
    return SimplicialComplex(I, kept);
  }

  /// Link of a face: {tau : tau disjoint from sigma, tau union sigma a face},
  /// on ground set ground \ sigma.
  SimplicialComplex link(Simplex sigma) const {
    if (!has_face(sigma)) throw PreconditionError("link: sigma is not a face");
    std::vector<Simplex> kept;
    for (const auto& level : by_card_)
      for (Simplex s : level)
        if ((s & sigma) == 0 && has_face(s | sigma)) kept.push_back(s);
    return SimplicialComplex(ground_ & ~sigma, kept);
  }

  /// Closed star of a face: {tau : tau union sigma a face}, ground unchanged.
  SimplicialComplex star(Simplex sigma) const {
    if (!has_face(sigma)) throw PreconditionError("star: sigma is not a face");
    std::vector<Simplex> kept;
    for (const auto& level : by_card_)
      for (Simplex s : level)
        if (has_face(s | sigma)) kept.push_back(s);
    return SimplicialComplex(ground_, kept);
  }

  /// Minimal non-faces within the ground set, ascending as bitmask integers.
  /// A ghost label contributes its singleton.
  std::vector<Simplex> missing_faces() const {
    std::vector<Simplex> out;
    const int top = std::min(m(), dim() + 2);
    for (int c = 1; c <= top; ++c) {
      // Every minimal non-face S of cardinality c arises uniquely from the
      // face S minus its largest element.
      for (Simplex f : faces_of_card(c - 1)) {
        const int lo = c == 1 ? 0 : 63 - std::countl_zero(f);
        for (int b : vertices_of(ground_ & ~f)) {
          if (c > 1 && b <= lo) continue;
          const Simplex s = f | vbit(b);
          if (has_face(s)) continue;
          bool minimal = true;
          for (int drop : vertices_of(s))
            if (!has_face(s & ~vbit(drop))) {
              minimal = false;
              break;
            }
          if (minimal) out.push_back(s);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Flag complexes are determined by their edges: every minimal non-face is
  /// a pair.
  bool is_flag() const {
    for (Simplex s : missing_faces())
      if (card(s) != 2) return false;
    return true;
  }

  /// Connectivity of the vertices actually present, through edges.
  bool is_connected() const {
    const VertexSet verts = vertex_set();
    if (verts == 0) return false;
    VertexSet seen = vbit(min_vertex(verts));
    for (;;) {
      VertexSet next = seen;
      for (Simplex e : faces_of_card(2))
        if (e & seen) next |= e;
      if (next == seen) break;
      seen = next;
    }
    return seen == verts;
  }

  /// Whether this is a closed simplicial surface of genus zero: pure of
  /// dimension 2, every edge in exactly two triangles, every vertex link a
  /// single closed cycle, connected, Euler characteristic 2, and every ground
  /// label in use.
  bool is_closed_2sphere() const {
    if (dim() != 2 || !is_pure()) return false;
    if (vertex_set() != ground_) return false;
    if (!is_connected()) return false;
    const auto f = f_vector();
    if (f[0] - f[1] + f[2] != 2) return false;
    for (Simplex e : faces_of_card(2)) {
      int count = 0;
      for (Simplex t : faces_of_card(3))
        if ((t & e) == e) ++count;
      if (count != 2) return false;
    }
    // Each vertex link must be one closed cycle: with the edge condition above
    // every link vertex has link-degree two, so it suffices that the link is
    // connected and covers the right vertices.
    for (int v : vertices()) {
      const SimplicialComplex lk = link(vbit(v - 1));
      if (lk.vertex_set() != (neighbors(v))) return false;
      if (!lk.is_connected()) return false;
      const auto lf = lk.f_vector();
      if (lf.size() != 2 || lf[0] != lf[1]) return false;
    }
    return true;
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.ground_ == b.ground_ && a.by_card_ == b.by_card_;
  }

 private:
  SimplicialComplex(VertexSet ground, const std::vector<Simplex>& seeds) : ground_(ground) {
    std::unordered_set<Simplex> closed;
    closed.insert(0);
    for (Simplex s : seeds) {
      if ((s & ~ground_) != 0) throw PreconditionError("face outside the ground set");
      // Insert every subset of s.
      Simplex sub = s;
      for (;;) {
        closed.insert(sub);
        if (sub == 0) break;
        sub = (sub - 1) & s;
      }
    }
    int max_card = 0;
    for (Simplex s : closed) max_card = std::max(max_card, card(s));
    by_card_.assign(static_cast<std::size_t>(max_card) + 1, {});
    for (Simplex s : closed) by_card_[static_cast<std::size_t>(card(s))].push_back(s);
    for (auto& level : by_card_) std::sort(level.begin(), level.end());
    lookup_ = std::move(closed);
  }

  VertexSet ground_;
  std::vector<std::vector<Simplex>> by_card_;
  std::unordered_set<Simplex> lookup_;
};

/// The same complex with vertex v renamed perm[v-1]; perm must be a bijection
/// of 1..m.
inline SimplicialComplex relabel(const SimplicialComplex& K, const std::vector<int>& perm) {
  const int m = K.m();
  if (static_cast<int>(perm.size()) != m) throw PreconditionError("relabel: permutation size mismatch");
  std::vector<bool> hit(static_cast<std::size_t>(m), false);
  for (int p : perm) {
    if (p < 1 || p > m || hit[static_cast<std::size_t>(p - 1)])
      throw PreconditionError("relabel: not a permutation of 1..m");
    hit[static_cast<std::size_t>(p - 1)] = true;
  }
  std::vector<std::vector<int>> facets;
  const int top = K.dim() + 1;
  for (int c = top; c >= 1; --c)
    for (Simplex s : K.faces_of_card(c)) {
      bool maximal = true;
      for (int v = 1; v <= m && maximal; ++v)
        if (!(s & vbit(v - 1)) && K.has_face(s | vbit(v - 1))) maximal = false;
      if (!maximal) continue;
      std::vector<int> f;
      for (int v : SimplicialComplex::labels_of(s)) f.push_back(perm[static_cast<std::size_t>(v - 1)]);
      facets.push_back(std::move(f));
    }
  // Ghost labels (in the ground set, never a face) survive relabeling because
  // from_facets takes the target ground size directly.
  return SimplicialComplex::from_facets(m, facets);
}

}  // namespace macbelt

#endif  // MACBELT_SIMPLICIAL_COMPLEX_HPP
