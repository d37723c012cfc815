#ifndef MACBELT_MACRING_HPP
#define MACBELT_MACRING_HPP

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "macbelt/bits.hpp"
#include "macbelt/cohomology.hpp"
#include "macbelt/errors.hpp"
#include "macbelt/linalg.hpp"
#include "macbelt/simplicial_complex.hpp"

namespace macbelt {

// ---------------------------------------------------------------------------
// The cohomology ring of the moment-angle complex of K, presented through the
// full-subcomplex decomposition: as a vector space,
//
//   H^n  =  (+)_{I subset of ground}  Hred^{n - |I| - 1}(K_I),
//
// and the product of classes supported on I and J is zero unless I and J are
// disjoint, in which case it lands in the summand of I union J via a signed
// cochain-level shuffle product.  With sh(A,B) the sign of the shuffle
// sorting A followed by B, the product on cochains is
//
//   (a * b)(s) = (-1)^{|I|(q+1)} sh(I,J) sh(s&I, s&J) a(s&I) b(s&J),
//
// for a in C^p(K_I), b in C^q(K_J).  This constant is forced (up to a global
// convention) by three properties the test-suite checks directly: the
// coboundary acts by a Leibniz rule with respect to TOTAL degree p + |I| + 1,
// the product is associative, and it is graded-commutative with respect to
// total degree.
// ---------------------------------------------------------------------------

/// One basis class: the j-th representative of Hred^q(K_I).
struct BasisKey {
  VertexSet I = 0;
  int q = -1;
  int j = 0;

  int total_degree() const { return q + card(I) + 1; }

  friend bool operator<(const BasisKey& a, const BasisKey& b) {
    return std::tie(a.I, a.q, a.j) < std::tie(b.I, b.q, b.j);
  }
  friend bool operator==(const BasisKey& a, const BasisKey& b) {
    return a.I == b.I && a.q == b.q && a.j == b.j;
  }
};

/// Finite formal combination of basis classes.
template <class F>
class RingElement {
 public:
  using Value = typename F::Value;

  RingElement() = default;

  bool is_zero() const { return terms_.empty(); }
  const std::map<BasisKey, Value>& terms() const { return terms_; }

  void add_term(const F& f, const BasisKey& k, const Value& v) {
    if (f.is_zero(v)) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, v);
      return;
    }
    it->second = f.add(it->second, v);
    if (f.is_zero(it->second)) terms_.erase(it);
  }

  void add(const F& f, const RingElement& o) {
    for (const auto& [k, v] : o.terms_) add_term(f, k, v);
  }

  RingElement scaled(const F& f, const Value& c) const {
    RingElement out;
    for (const auto& [k, v] : terms_) out.add_term(f, k, f.mul(c, v));
    return out;
  }

  Value coefficient(const F& f, const BasisKey& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? f.zero() : it->second;
  }

  /// Total degree when homogeneous (zero element included as "any degree").
  std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& [k, v] : terms_) {
      const int kd = k.total_degree();
      if (d && *d != kd) return std::nullopt;
      d = kd;
    }
    return d ? d : std::optional<int>(0);
  }

  /// Union of the supports of contributing summands.
  VertexSet support() const {
    VertexSet s = 0;
    for (const auto& [k, v] : terms_) s |= k.I;
    return s;
  }

  friend bool operator==(const RingElement& a, const RingElement& b) { return a.terms_ == b.terms_; }

 private:
  std::map<BasisKey, Value> terms_;
};

namespace detail {

inline long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/// r-th (0-based) k-subset of positions [0,n) in ascending numeric (colex)
/// order.
inline std::uint64_t colex_unrank(int n, int k, long long r) {
  std::uint64_t mask = 0;
  while (k > 0) {
    int c = k - 1;
    while (c + 1 < n && binom(c + 1, k) <= r) ++c;
    mask |= std::uint64_t{1} << c;
    r -= binom(c, k);
    n = c;
    --k;
  }
  return mask;
}

/// Calls fn(worker_id, S) exactly once for every subset S of `ground`,
/// splitting the work across `threads` workers in blocks.  Workers should
/// accumulate into per-worker-id state; the visit order within a worker is
/// scheduling-dependent, so accumulation must be order-independent.
template <class Fn>
void for_each_subset_parallel(VertexSet ground, int threads, Fn&& fn) {
  const std::vector<int> verts = vertices_of(ground);
  const int n = static_cast<int>(verts.size());
  auto spread = [&](std::uint64_t pos_mask) {
    VertexSet s = 0;
    for (int p : vertices_of(pos_mask)) s |= vbit(verts[static_cast<std::size_t>(p)]);
    return s;
  };
  const long long total = 1ll << n;
  std::vector<long long> cum(static_cast<std::size_t>(n) + 2, 0);
  for (int k = 0; k <= n; ++k) cum[static_cast<std::size_t>(k) + 1] = cum[static_cast<std::size_t>(k)] + binom(n, k);

  constexpr long long kBlock = 512;
  std::atomic<long long> next{0};
  auto worker = [&](int wid) {
    for (;;) {
      const long long lo = next.fetch_add(kBlock);
      if (lo >= total) return;
      const long long hi = std::min(lo + kBlock, total);
      // Locate the size class containing lo.
      int k = 0;
      while (cum[static_cast<std::size_t>(k) + 1] <= lo) ++k;
      long long at = lo;
      std::uint64_t pos = colex_unrank(n, k, at - cum[static_cast<std::size_t>(k)]);
      while (at < hi) {
        fn(wid, spread(pos));
        ++at;
        if (at >= hi) break;
        if (at == cum[static_cast<std::size_t>(k) + 1]) {
          ++k;
          pos = colex_unrank(n, k, 0);
        } else {
          pos = next_combination(pos);
        }
      }
    }
  };
  if (threads <= 1) {
    worker(0);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  for (auto& th : pool) th.join();
}

}  // namespace detail

template <class F>
class MacRing {
 public:
  using Value = typename F::Value;
  using Vec = FVec<F>;

  MacRing(SimplicialComplex K, F field) : K_(std::move(K)), field_(std::move(field)) {}

  const SimplicialComplex& complex() const { return K_; }
  const F& field() const { return field_; }

  /// Cohomology of the full subcomplex on I, computed on demand and cached.
  const ReducedCohomology<F>& summand(VertexSet I) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = summands_.find(I);
    if (it == summands_.end())
      it = summands_.emplace(I, ReducedCohomology<F>(K_.full_subcomplex(I), field_)).first;
    return it->second;
  }

  // -- basis enumeration ------------------------------------------------------

  /// Basis classes of the given total degree, drawn from subsets of
  /// `universe` (the whole ground set by default).  Full enumeration is
  /// capped at 24 vertices.
  std::vector<BasisKey> basis(int total_degree, std::optional<VertexSet> universe = std::nullopt) const {
    const VertexSet u = universe.value_or(K_.ground());
    guard_enumeration(u);
    std::vector<BasisKey> out;
    std::vector<VertexSet> subsets;
    detail::for_each_subset_parallel(u, 1, [&](int, VertexSet S) { subsets.push_back(S); });
    std::sort(subsets.begin(), subsets.end());
    for (VertexSet S : subsets) {
      const int q = total_degree - card(S) - 1;
      if (q < -1) continue;
      const int b = summand(S).betti(q);
      for (int j = 0; j < b; ++j) out.push_back(BasisKey{S, q, j});
    }
    return out;
  }

  /// Top total degree any class can live in: |ground| + dim + 1.
  int top_degree() const { return K_.m() + K_.dim() + 1; }

  // -- elements ---------------------------------------------------------------

  RingElement<F> element_of(const BasisKey& k) const {
    RingElement<F> e;
    e.add_term(field_, k, field_.one());
    return e;
  }

  RingElement<F> unit() const { return element_of(BasisKey{0, -1, 0}); }

  /// The class of a minimal non-face w: the unique top class of the boundary
  /// complex K_w, in total degree 2|w| - 1.
  BasisKey missing_face_key(Simplex w) const {
    const int q = card(w) - 2;
    if (K_.has_face(w) || summand(w).betti(q) != 1)
      throw PreconditionError("missing_face_key: not a minimal non-face with one top class");
    return BasisKey{w, q, 0};
  }

  /// The generator of the top summand, for complexes with one top class.
  BasisKey fundamental_key() const {
    const BasisKey k{K_.ground(), K_.dim(), 0};
    if (summand(k.I).betti(k.q) != 1)
      throw PreconditionError("fundamental_key: top summand is not one-dimensional");
    return k;
  }

  Value top_coefficient(const RingElement<F>& e) const {
    return e.coefficient(field_, BasisKey{K_.ground(), K_.dim(), 0});
  }

  // -- products ---------------------------------------------------------------

  /// Cochain-level product: alpha over the degree-p faces of K_I, beta over
  /// the degree-q faces of K_J (I, J disjoint), producing a degree p+q+1
  /// cochain over K_{I|J}.  Exposed for the property tests; class products
  /// use it on representatives.
  Vec mu_cochain(VertexSet I, int p, const Vec& alpha, VertexSet J, int q, const Vec& beta) const {
    return mu_cochain_with(summand(I), I, p, alpha, summand(J), J, q, beta, summand(I | J));
  }

  /// Product of two basis classes, bypassing the structure-constant cache.
  /// Bulk sweeps (annihilator kernels over the whole basis) use this so the
  /// cache does not balloon with millions of one-shot entries.
  RingElement<F> product_direct(const BasisKey& a, const BasisKey& b) const {
    return compute_product(a, b);
  }

  /// Product of two basis classes, through the structure-constant cache.
  const RingElement<F>& product_of_basis(const BasisKey& a, const BasisKey& b) const {
    std::lock_guard<std::mutex> lock(pmu_);
    auto it = products_.find({a, b});
    if (it != products_.end()) return it->second;
    RingElement<F> r = compute_product(a, b);
    return products_.emplace(std::make_pair(a, b), std::move(r)).first->second;
  }

  RingElement<F> multiply(const RingElement<F>& x, const RingElement<F>& y) const {
    RingElement<F> out;
    for (const auto& [ka, va] : x.terms())
      for (const auto& [kb, vb] : y.terms()) {
        const RingElement<F>& p = product_of_basis(ka, kb);
        const Value c = field_.mul(va, vb);
        for (const auto& [k, v] : p.terms()) out.add_term(field_, k, field_.mul(c, v));
      }
    return out;
  }

  // -- duality ---------------------------------------------------------------

  /// Whether the pairing into the top class is perfect, block by block: the
  /// top summand is one-dimensional, complementary blocks (I, q) and
  /// (ground minus I, dim-1-q) have equal dimension, and each pairing matrix
  /// has full rank.  This is the ring-level counterpart of duality in total
  /// degree m + dim + 1.
  bool poincare_check(int threads = 1) const {
    guard_enumeration(K_.ground());
    const VertexSet g = K_.ground();
    const int dk = K_.dim();
    const auto& Htop = summand(g);
    if (Htop.betti(dk) != 1) return false;

    std::atomic<bool> ok{true};
    detail::for_each_subset_parallel(g, threads, [&](int, VertexSet I) {
      if (!ok.load(std::memory_order_relaxed)) return;
      const VertexSet Ic = g & ~I;
      if (I > Ic) return;  // each complementary pair once
      const ReducedCohomology<F> HI(K_.full_subcomplex(I), field_);
      const ReducedCohomology<F> HIc(K_.full_subcomplex(Ic), field_);
      for (int q = -1; q <= dk; ++q) {
        const int qq = dk - 1 - q;
        const int b = HI.betti(q);
        const int bc = HIc.betti(qq);
        if (b == 0 && bc == 0) continue;
        if (b != bc) {
          ok.store(false, std::memory_order_relaxed);
          return;
        }
        Matrix<F> P(b, b, field_);
        for (int i = 0; i < b; ++i)
          for (int j = 0; j < bc; ++j) {
            const Vec prod = mu_cochain_with(HI, I, q, HI.representative(q, i), HIc, Ic, qq,
                                             HIc.representative(qq, j), Htop);
            const auto cls = Htop.class_of_cocycle(q + qq + 1, prod);
            P.set(i, j, cls[0]);
          }
        if (P.rank() != b) {
          ok.store(false, std::memory_order_relaxed);
          return;
        }
      }
    });
    return ok.load();
  }

 private:
  void guard_enumeration(VertexSet u) const {
    if (card(u) > 24)
      throw PreconditionError("subset enumeration requested over more than 24 vertices");
  }

  Vec mu_cochain_with(const ReducedCohomology<F>& HI, VertexSet I, int p, const Vec& alpha,
                      const ReducedCohomology<F>& HJ, VertexSet J, int q, const Vec& beta,
                      const ReducedCohomology<F>& HL) const {
    if ((I & J) != 0) throw PreconditionError("mu_cochain: supports overlap");
    const auto& SI = HI.at(p).simplices;
    const auto& SJ = HJ.at(q).simplices;
    const auto& SL = HL.at(p + q + 1).simplices;
    Vec out(static_cast<int>(SL.size()));
    const int base = ((card(I) * (q + 1)) % 2 ? -1 : 1) * shuffle_sign(I, J);
    for (std::size_t t = 0; t < SL.size(); ++t) {
      const Simplex s = SL[t];
      const Simplex sI = s & I;
      if (card(sI) != p + 1) continue;
      const Simplex sJ = s & J;
      const auto ia = std::lower_bound(SI.begin(), SI.end(), sI);
      if (ia == SI.end() || *ia != sI) continue;
      const auto ib = std::lower_bound(SJ.begin(), SJ.end(), sJ);
      if (ib == SJ.end() || *ib != sJ) continue;
      const Value va = alpha.get(static_cast<int>(ia - SI.begin()));
      const Value vb = beta.get(static_cast<int>(ib - SJ.begin()));
      Value v = field_.mul(va, vb);
      if (field_.is_zero(v)) continue;
      if (base * shuffle_sign(sI, sJ) < 0) v = field_.neg(v);
      out.set(static_cast<int>(t), std::move(v));
    }
    return out;
  }

  RingElement<F> compute_product(const BasisKey& a, const BasisKey& b) const {
    RingElement<F> out;
    if ((a.I & b.I) != 0) return out;
    const VertexSet L = a.I | b.I;
    const auto& HA = summand(a.I);
    const auto& HB = summand(b.I);
    const auto& HL = summand(L);
    const int r = a.q + b.q + 1;
    if (HL.betti(r) == 0) return out;
    const Vec prod = mu_cochain_with(HA, a.I, a.q, HA.representative(a.q, a.j), HB, b.I, b.q,
                                     HB.representative(b.q, b.j), HL);
    const auto cls = HL.class_of_cocycle(r, prod);
    for (std::size_t t = 0; t < cls.size(); ++t)
      out.add_term(field_, BasisKey{L, r, static_cast<int>(t)}, cls[t]);
    return out;
  }

  SimplicialComplex K_;
  F field_;
  mutable std::mutex mu_;
  mutable std::map<VertexSet, ReducedCohomology<F>> summands_;
  mutable std::mutex pmu_;
  mutable std::map<std::pair<BasisKey, BasisKey>, RingElement<F>> products_;
};

// ---------------------------------------------------------------------------
// Dimension sweeps.
// ---------------------------------------------------------------------------

/// Dimensions of the decomposition, grouped by (|I|, q); entry (s, q)
/// accumulates Hred^q over all subsets of size s.
struct BigradedBetti {
  int m = 0;
  int dim = -1;
  std::map<std::pair<int, int>, long long> table;

  /// dim H^d of the moment-angle complex, for d = 0 .. m + dim + 1.
  std::vector<long long> by_total_degree() const {
    std::vector<long long> out(static_cast<std::size_t>(m + dim + 2), 0);
    for (const auto& [key, count] : table) {
      const int d = key.second + key.first + 1;
      out[static_cast<std::size_t>(d)] += count;
    }
    return out;
  }

  long long total() const {
    long long t = 0;
    for (const auto& [key, count] : table) t += count;
    return t;
  }
};

/// Full sweep over all subsets (capped at 24 vertices).  Deterministic for
/// any thread count: workers accumulate privately and the merge only adds.
template <class F>
BigradedBetti bigraded_betti(const SimplicialComplex& K, F field, int threads = 1) {
  if (K.m() > 24) throw PreconditionError("subset enumeration requested over more than 24 vertices");
  const int workers = std::max(1, threads);
  std::vector<std::map<std::pair<int, int>, long long>> partial(static_cast<std::size_t>(workers));
  detail::for_each_subset_parallel(K.ground(), workers, [&](int wid, VertexSet S) {
    const ReducedCohomology<F> H(K.full_subcomplex(S), field);
    const auto bv = H.betti_vector();
    const int s = card(S);
    for (int q = -1; q < static_cast<int>(bv.size()) - 1; ++q) {
      const int b = bv[static_cast<std::size_t>(q + 1)];
      if (b > 0) partial[static_cast<std::size_t>(wid)][{s, q}] += b;
    }
  });
  BigradedBetti out;
  out.m = K.m();
  out.dim = K.dim();
  for (const auto& p : partial)
    for (const auto& [key, count] : p) out.table[key] += count;
  return out;
}

}  // namespace macbelt

#endif  // MACBELT_MACRING_HPP
