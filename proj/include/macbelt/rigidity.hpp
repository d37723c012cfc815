#ifndef MACBELT_RIGIDITY_HPP
#define MACBELT_RIGIDITY_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "macbelt/belts.hpp"
#include "macbelt/bits.hpp"
#include "macbelt/canonical.hpp"
#include "macbelt/cohomology.hpp"
#include "macbelt/errors.hpp"
#include "macbelt/fields.hpp"
#include "macbelt/invariants.hpp"
#include "macbelt/macring.hpp"
#include "macbelt/simplicial_complex.hpp"

namespace macbelt {

// ---------------------------------------------------------------------------
// Reconstruction pipeline: belt classes and their divisor sets, link
// detection, ring-derived adjacency, full reconstruction of a flag 2-sphere
// without 4-belts, canonical fingerprints, and the lower bound check.
// ---------------------------------------------------------------------------

namespace detail {

template <class F>
void require_rigid_class(const MacRing<F>& R, const char* who) {
  const SimplicialComplex& K = R.complex();
  if (!K.is_closed_2sphere() || !K.is_flag() || has_four_belt(K))
    throw PreconditionError(std::string(who) + ": the complex must be a flag 2-sphere without 4-belts");
}

/// Degree-3 divisor masks of the degree-(|S|+2) class over S: missing pairs
/// inside S whose classes verifiably divide it.
template <class F>
std::vector<Simplex> circle_divisors(const MacRing<F>& R, VertexSet S) {
  std::vector<Simplex> out;
  const RingElement<F> xi = R.element_of(BasisKey{S, 1, 0});
  for (const auto& k : R.basis(3, S))
    if (divides(R, R.element_of(k), xi)) out.push_back(k.I);
  return out;
}

}  // namespace detail

/// The generator class of the circle summand of a belt.
template <class F>
RingElement<F> belt_class(const MacRing<F>& R, const Belt& B) {
  if (card(B.support) != B.length() || !is_induced_circle(R.complex(), B.support))
    throw PreconditionError("belt_class: not a belt of this complex");
  if (R.summand(B.support).betti(1) != 1)
    throw PreconditionError("belt_class: the belt summand is not a line");
  return R.element_of(BasisKey{B.support, 1, 0});
}

/// Whether the degree-3 divisors of the belt class are exactly the classes
/// of the missing faces of the belt subcomplex: all of them divide, and
/// there are C(n,2) - n of them.
template <class F>
bool belt_divisor_check(const MacRing<F>& R, const Belt& B) {
  (void)belt_class(R, B);  // validates
  const int n = B.length();
  const long long expected = static_cast<long long>(n) * (n - 1) / 2 - n;
  const auto divisors = detail::circle_divisors(R, B.support);
  if (static_cast<long long>(divisors.size()) != expected) return false;
  // Every missing pair inside the belt must be among the verified divisors.
  return static_cast<long long>(R.basis(3, B.support).size()) == expected;
}

/// Outcome of scanning the classes over belt-plus-one-vertex subsets.
struct LinkDetectionRecord {
  Belt belt;
  int count = 0;                  // classes admitting the divisor span as a maximal 3-factor space
  std::vector<int> passing;       // the outside vertices carrying those classes
  bool is_link = false;           // count == m - n - 1
  bool combinatorial_link = false;  // some vertex's neighbor set equals the belt support
};

namespace detail {

/// Core of link detection, usable on any complex (no class preconditions).
template <class F>
LinkDetectionRecord link_scan(const MacRing<F>& R, const Belt& B) {
  const SimplicialComplex& K = R.complex();
  LinkDetectionRecord rec;
  rec.belt = B;
  const VertexSet N = B.support;

  std::vector<RingElement<F>> span;
  std::set<Simplex> span_faces;
  for (Simplex w : circle_divisors(R, N)) {
    span.push_back(R.element_of(BasisKey{w, 0, 0}));
    span_faces.insert(w);
  }

  for (int v = 1; v <= K.m(); ++v) {
    if (N & vbit(v - 1)) continue;
    const VertexSet S = N | vbit(v - 1);
    if (R.summand(S).betti(1) != 1) continue;
    const RingElement<F> xi = R.element_of(BasisKey{S, 1, 0});
    if (!is_factor_space(R, span, xi)) continue;
    // Maximality: no further degree-3 divisor of xi may exist.
    bool maximal = true;
    for (const auto& k : R.basis(3, S)) {
      if (span_faces.count(k.I)) continue;
      if (divides(R, R.element_of(k), xi)) {
        maximal = false;
        break;
      }
    }
    if (!maximal) continue;
    ++rec.count;
    rec.passing.push_back(v);
  }

  rec.is_link = (rec.count == K.m() - B.length() - 1);
  for (int w = 1; w <= K.m() && !rec.combinatorial_link; ++w)
    if (K.neighbors(w) == N) rec.combinatorial_link = true;
  return rec;
}

}  // namespace detail

/// Counts the classes over belt-plus-one-vertex subsets for which the span
/// of the belt's missing-face classes is a maximal 3-factor space; the belt
/// is a vertex link exactly when all m - n - 1 outside candidates pass.
template <class F>
LinkDetectionRecord link_detection(const MacRing<F>& R, const Belt& B) {
  detail::require_rigid_class(R, "link_detection");
  (void)belt_class(R, B);  // validates the belt
  return detail::link_scan(R, B);
}

/// Whether the belt classes of the two vertex links share a common degree-3
/// divisor.  On flag 2-spheres without 4-belts this reproduces the
/// 1-skeleton: an edge forces two non-adjacent common neighbors, a non-edge
/// forbids them.
template <class F>
bool adjacency_from_ring(const MacRing<F>& R, int vi, int vj) {
  detail::require_rigid_class(R, "adjacency_from_ring");
  const SimplicialComplex& K = R.complex();
  if (vi < 1 || vi > K.m() || vj < 1 || vj > K.m() || vi == vj)
    throw PreconditionError("adjacency_from_ring: need two distinct vertices");
  const auto di = detail::circle_divisors(R, K.neighbors(vi));
  const auto dj = detail::circle_divisors(R, K.neighbors(vj));
  for (Simplex a : di)
    for (Simplex b : dj)
      if (a == b) return true;
  return false;
}

/// Rebuilds the complex from ring data: the vertex count from the top total
/// degree, one vertex per belt whose divisor span passes link detection,
/// adjacency from shared divisors, and faces as the cliques of that graph.
template <class F>
SimplicialComplex reconstruct(const MacRing<F>& R) {
  if constexpr (!F::enumerable) {
    (void)R;
    throw PreconditionError("reconstruct requires a finite coefficient field");
  } else {
    detail::require_rigid_class(R, "reconstruct");
    const SimplicialComplex& K = R.complex();
    const int m = R.top_degree() - 3;
    if (m != K.m()) throw ProcedureFailure("reconstruct: top degree is inconsistent with the ground set");

    std::map<VertexSet, std::vector<Simplex>> links;  // support -> divisor masks
    for (int n = 5; n < m && static_cast<int>(links.size()) < m; ++n)
      for (const Belt& B : belts(K, n)) {
        if (!detail::link_scan(R, B).is_link) continue;
        links.emplace(B.support, detail::circle_divisors(R, B.support));
        if (static_cast<int>(links.size()) > m)
          throw ProcedureFailure("reconstruct: more links detected than vertices");
      }
    if (static_cast<int>(links.size()) != m)
      throw ProcedureFailure("reconstruct: link detection did not recover every vertex");

    std::vector<const std::vector<Simplex>*> divisor_sets;
    divisor_sets.reserve(links.size());
    for (const auto& [support, divisors] : links) divisor_sets.push_back(&divisors);
    auto joined = [&](int a, int b) {
      for (Simplex x : *divisor_sets[static_cast<std::size_t>(a)])
        for (Simplex y : *divisor_sets[static_cast<std::size_t>(b)])
          if (x == y) return true;
      return false;
    };

    std::vector<std::vector<int>> facets;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        if (!joined(a, b)) continue;
        bool in_triangle = false;
        for (int c = 0; c < m; ++c)
          if (c != a && c != b && joined(a, c) && joined(b, c)) {
            if (c > b) facets.push_back({a + 1, b + 1, c + 1});
            in_triangle = true;
          }
        if (!in_triangle) facets.push_back({a + 1, b + 1});
      }
    return SimplicialComplex::from_facets(m, facets);
  }
}

/// One belt's contribution to a fingerprint, fully label-independent.
struct BeltRecord {
  int length = 0;
  long long divisor_count = 0;  // verified degree-3 divisors of the belt class
  int link_count = 0;           // passing classes from link detection
  std::vector<long long> divisor_annihilators;  // sorted

  friend auto operator<=>(const BeltRecord&, const BeltRecord&) = default;
};

/// Label-independent summary of the ring: dimensions, annihilator profiles,
/// belt records, and (inside the rigid class) the canonical form of the
/// reconstructed complex.
struct RigidityFingerprint {
  int m = 0;
  std::map<std::pair<int, int>, long long> bigraded;  // (|I|, q) -> dimension
  std::optional<int> support_cap;  // basis sweeps truncated at this support size
  std::vector<long long> mf_annihilators;             // sorted, one per 2-vertex missing face
  std::vector<BeltRecord> belt_records;               // sorted; belt lengths 4..6
  std::vector<std::uint64_t> reconstruction;          // canonical encoding, empty outside the rigid class

  friend bool operator==(const RigidityFingerprint&, const RigidityFingerprint&) = default;
};

namespace detail {

constexpr int kFingerprintSupportCutoff = 13;  // full subset sweeps up to this many vertices
constexpr int kFingerprintBeltMin = 4;
constexpr int kFingerprintBeltMax = 6;

}  // namespace detail

template <class F>
RigidityFingerprint fingerprint(const SimplicialComplex& K, F field) {
  if constexpr (!F::enumerable) {
    (void)K;
    throw PreconditionError("fingerprint requires a finite coefficient field");
  } else {
    MacRing<F> R(K, field);
    RigidityFingerprint fp;
    fp.m = K.m();
    if (fp.m > detail::kFingerprintSupportCutoff) fp.support_cap = 4;

    for (const auto& k : all_basis_keys(R, fp.support_cap)) fp.bigraded[{card(k.I), k.q}] += 1;

    std::map<Simplex, long long> ann_of;
    for (Simplex w : K.missing_faces()) {
      if (card(w) != 2) continue;
      const long long d =
          annihilator_dim(R, R.element_of(R.missing_face_key(w)), fp.support_cap).total_dim;
      ann_of.emplace(w, d);
      fp.mf_annihilators.push_back(d);
    }
    std::sort(fp.mf_annihilators.begin(), fp.mf_annihilators.end());

    for (int n = detail::kFingerprintBeltMin; n <= detail::kFingerprintBeltMax; ++n)
      for (const Belt& B : belts(K, n)) {
        BeltRecord rec;
        rec.length = n;
        const auto divisors = detail::circle_divisors(R, B.support);
        rec.divisor_count = static_cast<long long>(divisors.size());
        rec.link_count = detail::link_scan(R, B).count;
        for (Simplex w : divisors) rec.divisor_annihilators.push_back(ann_of.at(w));
        std::sort(rec.divisor_annihilators.begin(), rec.divisor_annihilators.end());
        fp.belt_records.push_back(std::move(rec));
      }
    std::sort(fp.belt_records.begin(), fp.belt_records.end());

    if (K.is_closed_2sphere() && K.is_flag() && !has_four_belt(K))
      fp.reconstruction = canonical_encoding(reconstruct(R));
    return fp;
  }
}

enum class CompareVerdict { Equivalent, Distinguished, Inconclusive };

struct CompareReport {
  CompareVerdict verdict = CompareVerdict::Inconclusive;
  std::string witness;  // the differing invariant, empty unless Distinguished
};

/// Compares two complexes through their fingerprints.  Inside the rigid
/// class equal fingerprints certify combinatorial equivalence (the
/// reconstruction is part of the fingerprint); outside it, equality of all
/// computed invariants stays inconclusive.
template <class F>
CompareReport compare(const SimplicialComplex& K1, const SimplicialComplex& K2, F field) {
  const RigidityFingerprint a = fingerprint(K1, field);
  const RigidityFingerprint b = fingerprint(K2, field);
  auto distinguished = [](const char* what) {
    return CompareReport{CompareVerdict::Distinguished, what};
  };
  if (a.m != b.m) return distinguished("vertex count");
  if (a.bigraded != b.bigraded) return distinguished("bigraded Betti table");
  if (a.mf_annihilators != b.mf_annihilators) return distinguished("missing-face annihilator dimensions");
  if (a.belt_records != b.belt_records) return distinguished("belt records");
  const bool rigid_a = !a.reconstruction.empty();
  const bool rigid_b = !b.reconstruction.empty();
  if (rigid_a != rigid_b) return distinguished("rigid-class membership");
  if (!rigid_a) return CompareReport{CompareVerdict::Inconclusive, ""};
  if (a.reconstruction != b.reconstruction) return distinguished("canonical form of the reconstruction");
  return CompareReport{CompareVerdict::Equivalent, ""};
}

/// Per-sample annihilator comparison for a sum of missing-face classes.
struct SeparationReport {
  std::vector<long long> single_dims;  // aligned with the requested faces
  long long combined_dim = 0;
  bool separated = false;  // every single dimension strictly exceeds the combined one
};

template <class F>
SeparationReport check_annihilator_separation(const MacRing<F>& R, const std::vector<Simplex>& omegas) {
  detail::require_rigid_class(R, "check_annihilator_separation");
  if (omegas.size() < 2)
    throw PreconditionError("check_annihilator_separation: need at least two missing faces");
  for (std::size_t i = 0; i < omegas.size(); ++i)
    for (std::size_t j = i + 1; j < omegas.size(); ++j)
      if (omegas[i] == omegas[j])
        throw PreconditionError("check_annihilator_separation: repeated missing face");

  SeparationReport rep;
  RingElement<F> alpha;
  for (Simplex w : omegas) {
    const auto k = R.missing_face_key(w);
    rep.single_dims.push_back(annihilator_dim(R, R.element_of(k)).total_dim);
    alpha.add(R.field(), R.element_of(k));
  }
  rep.combined_dim = annihilator_dim(R, alpha).total_dim;
  rep.separated = true;
  for (long long d : rep.single_dims) rep.separated = rep.separated && (d > rep.combined_dim);
  return rep;
}

/// Edge-count lower bound f1 >= m*n - C(n+1,2) for Gorenstein* complexes,
/// n = dim + 1 (for 2-spheres: f1 >= 3m - 6).
inline bool lbt_check(const SimplicialComplex& K) {
  if (!is_gorenstein_star(K, GF2{}) || !is_gorenstein_star(K, RationalQ{}))
    throw PreconditionError("lbt_check: the complex is not Gorenstein* over the test fields");
  const auto f = K.f_vector();
  const long long n = K.dim() + 1;
  const long long m = K.m();
  const long long f1 = f.size() > 1 ? f[1] : 0;
  return f1 >= m * n - n * (n + 1) / 2;
}

}  // namespace macbelt

#endif  // MACBELT_RIGIDITY_HPP
