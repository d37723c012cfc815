#ifndef MACBELT_COHOMOLOGY_HPP
#define MACBELT_COHOMOLOGY_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "macbelt/bits.hpp"
#include "macbelt/errors.hpp"
#include "macbelt/linalg.hpp"
#include "macbelt/simplicial_complex.hpp"

namespace macbelt {

// ---------------------------------------------------------------------------
// Reduced simplicial cohomology with chosen representatives.
//
// Cochains are augmented: degree q runs from -1 (the empty face) to dim.  The
// coboundary is (d f)(tau) = sum_i (-1)^i f(tau minus its i-th vertex), with
// vertices in increasing label order.
//
// For each degree we keep the echelonized cocycle space Z, the coboundary
// space expressed in Z-coordinates, and the indices of the Z rows chosen as
// class representatives (the non-pivot coordinates of the coboundary
// echelon).  Representatives are genuine cocycles, and every class has a
// unique expansion over them.
// ---------------------------------------------------------------------------

template <class F>
struct CohomologyDegree {
  std::vector<Simplex> simplices;  // q-faces in ascending mask order
  Echelon<F> Z;                    // cocycles, coordinates over `simplices`
  Echelon<F> Bcoord;               // coboundaries, coordinates over Z rows
  std::vector<int> rep_index;      // Z rows serving as class representatives

  int betti() const { return static_cast<int>(rep_index.size()); }
};

template <class F>
class ReducedCohomology {
 public:
  using Vec = FVec<F>;
  using Value = typename F::Value;

  ReducedCohomology() = default;

  ReducedCohomology(const SimplicialComplex& L, F field) : field_(std::move(field)) {
    const int d = L.dim();
    degrees_.resize(static_cast<std::size_t>(d + 2));
    for (int q = -1; q <= d; ++q) {
      auto& deg = degrees_[static_cast<std::size_t>(q + 1)];
      deg.simplices = L.faces_of_card(q + 1);
      // Cocycles: kernel of the coboundary into degree q+1.
      deg.Z = detail::echelonize<F>(field_, coboundary_matrix(L, q, field_).kernel_basis(),
                                    static_cast<int>(deg.simplices.size()));
      // Coboundaries: images of the (q-1)-face indicator cochains, written in
      // Z-coordinates.
      std::vector<Vec> bco;
      for (const Vec& b : coboundary_images(L, q)) {
        Vec coords = coordinates_in(deg.Z, b);
        bco.push_back(std::move(coords));
      }
      deg.Bcoord = detail::echelonize<F>(field_, std::move(bco), deg.Z.rank());
      std::vector<bool> is_pivot(static_cast<std::size_t>(deg.Z.rank()), false);
      for (int p : deg.Bcoord.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
      for (int j = 0; j < deg.Z.rank(); ++j)
        if (!is_pivot[static_cast<std::size_t>(j)]) deg.rep_index.push_back(j);
    }
  }

  const F& field() const { return field_; }

  int min_degree() const { return -1; }
  int max_degree() const { return static_cast<int>(degrees_.size()) - 2; }

  const CohomologyDegree<F>& at(int q) const {
    static const CohomologyDegree<F> kEmpty;
    if (q < -1 || q > max_degree()) return kEmpty;
    return degrees_[static_cast<std::size_t>(q + 1)];
  }

  int betti(int q) const { return at(q).betti(); }

  /// (betti(-1), betti(0), ..., betti(dim)).
  std::vector<int> betti_vector() const {
    std::vector<int> out;
    for (const auto& deg : degrees_) out.push_back(deg.betti());
    return out;
  }

  int total_rank() const {
    int t = 0;
    for (const auto& deg : degrees_) t += deg.betti();
    return t;
  }

  /// Representative cocycle of the j-th class in degree q (coordinates over
  /// at(q).simplices).
  const Vec& representative(int q, int j) const {
    const auto& deg = at(q);
    return deg.Z.rows[static_cast<std::size_t>(deg.rep_index[static_cast<std::size_t>(j)])];
  }

  /// Expands a cocycle into class coordinates over the representatives.
  /// Throws PreconditionError if the vector is not a cocycle.
  std::vector<Value> class_of_cocycle(int q, const Vec& c) const {
    const auto& deg = at(q);
    if (c.size() != static_cast<int>(deg.simplices.size()))
      throw PreconditionError("class_of_cocycle: wrong coordinate length");
    Vec coords = coordinates_in(deg.Z, c);  // throws if not in Z
    deg.Bcoord.reduce(field_, coords);
    std::vector<Value> out;
    out.reserve(deg.rep_index.size());
    for (int j : deg.rep_index) out.push_back(coords.get(j));
    return out;
  }

  /// Assembles a cochain from class coordinates.
  Vec cocycle_of_class(int q, const std::vector<Value>& cls) const {
    const auto& deg = at(q);
    Vec c(static_cast<int>(deg.simplices.size()));
    for (std::size_t j = 0; j < cls.size(); ++j)
      vec_axpy(field_, c, cls[j], deg.Z.rows[static_cast<std::size_t>(deg.rep_index[j])]);
    return c;
  }

  // -- static cochain helpers -------------------------------------------------

  /// Matrix of d: C^q -> C^{q+1}; rows are (q+1)-faces, columns q-faces.
  static Matrix<F> coboundary_matrix(const SimplicialComplex& L, int q, F field = F{}) {
    const auto& dom = L.faces_of_card(q + 1);
    const auto& codom = L.faces_of_card(q + 2);
    Matrix<F> D(static_cast<int>(codom.size()), static_cast<int>(dom.size()), field);
    for (int r = 0; r < D.rows(); ++r) {
      const Simplex tau = codom[static_cast<std::size_t>(r)];
      for (int b : vertices_of(tau)) {
        const Simplex sigma = tau & ~vbit(b);
        const auto it = std::lower_bound(dom.begin(), dom.end(), sigma);
        const int col = static_cast<int>(it - dom.begin());
        const int sign = position_in(tau, b) % 2 == 0 ? 1 : -1;
        D.set(r, col, field.from_int(sign));
      }
    }
    return D;
  }

  /// Coboundaries d(chi_sigma) for each (q-1)-face sigma, as degree-q
  /// cochains.
  std::vector<Vec> coboundary_images(const SimplicialComplex& L, int q) const {
    std::vector<Vec> out;
    if (q == -1) return out;
    const auto& prev = L.faces_of_card(q);
    const auto& cur = L.faces_of_card(q + 1);
    for (Simplex sigma : prev) {
      Vec b(static_cast<int>(cur.size()));
      for (std::size_t t = 0; t < cur.size(); ++t) {
        const Simplex tau = cur[t];
        if ((tau & sigma) != sigma) continue;
        const Simplex extra = tau & ~sigma;
        if (card(extra) != 1) continue;
        const int v = min_vertex(extra);
        b.set(static_cast<int>(t),
              field_.from_int(position_in(tau, v) % 2 == 0 ? 1 : -1));
      }
      out.push_back(std::move(b));
    }
    return out;
  }

  /// Coordinates of v over the echelon rows of E; throws ProcedureFailure if
  /// v is outside the row space (an internal invariant for coboundaries) and
  /// PreconditionError for user-supplied non-cocycles.
  Vec coordinates_in(const Echelon<F>& E, Vec v) const {
    Vec coords(E.rank());
    for (std::size_t r = 0; r < E.rows.size(); ++r) {
      const Value c = v.get(E.pivots[r]);
      if (!field_.is_zero(c)) {
        coords.set(static_cast<int>(r), c);
        vec_axpy(field_, v, field_.neg(c), E.rows[r]);
      }
    }
    if (!v.is_zero()) throw PreconditionError("vector is not a cocycle of this degree");
    return coords;
  }

 private:
  F field_{};
  std::vector<CohomologyDegree<F>> degrees_;
};

template <class F>
ReducedCohomology<F> reduced_cohomology(const SimplicialComplex& L, F field = F{}) {
  return ReducedCohomology<F>(L, std::move(field));
}

/// Poincare-duality-style local condition: every face link (including the
/// link of the empty face, the complex itself) has the reduced cohomology of
/// a sphere of its dimension.  For a complex of dimension d the link of a
/// face sigma is expected to look like a sphere of dimension d - |sigma|.
template <class F>
bool is_gorenstein_star(const SimplicialComplex& K, F field = F{}) {
  const int d = K.dim();
  if (d < 0) return false;
  if (K.vertex_set() != K.ground()) return false;
  for (Simplex sigma : K.all_faces()) {
    const SimplicialComplex lk = K.link(sigma);
    const int expected_top = d - card(sigma);
    if (lk.dim() != expected_top) return false;
    const auto h = reduced_cohomology(lk, field);
    for (int q = -1; q <= lk.dim(); ++q) {
      const int want = q == expected_top ? 1 : 0;
      if (h.betti(q) != want) return false;
    }
  }
  return true;
}

}  // namespace macbelt

#endif  // MACBELT_COHOMOLOGY_HPP
