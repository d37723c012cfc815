#ifndef MACBELT_INVARIANTS_HPP
#define MACBELT_INVARIANTS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "macbelt/belts.hpp"
#include "macbelt/bits.hpp"
#include "macbelt/cohomology.hpp"
#include "macbelt/errors.hpp"
#include "macbelt/linalg.hpp"
#include "macbelt/macring.hpp"
#include "macbelt/simplicial_complex.hpp"

namespace macbelt {

// ---------------------------------------------------------------------------
// Ring-theoretic invariants: annihilator dimensions, divisibility, factor
// spaces and factor indices, ring-level 4-belt detection, and the
// constructive circle-avoidance procedure used by the rigidity pipeline.
// ---------------------------------------------------------------------------

/// Every basis class of the ring, grouped by support subset in ascending
/// mask order.  `max_support` truncates the sweep to small supports (used by
/// fingerprints of large complexes); without it the ground set must have at
/// most 24 vertices.
template <class F>
std::vector<BasisKey> all_basis_keys(const MacRing<F>& R, std::optional<int> max_support = std::nullopt) {
  const int m = R.complex().m();
  if (!max_support && m > 24)
    throw PreconditionError("subset enumeration requested over more than 24 vertices");
  const int cmax = std::min(max_support.value_or(m), m);
  std::vector<BasisKey> keys;
  for (int k = 0; k <= cmax; ++k)
    for_each_subset_of_size(m, k, [&](VertexSet S) {
      const auto bv = R.summand(S).betti_vector();
      for (int q = -1; q < static_cast<int>(bv.size()) - 1; ++q)
        for (int j = 0; j < bv[static_cast<std::size_t>(q + 1)]; ++j) keys.push_back(BasisKey{S, q, j});
    });
  return keys;
}

/// Dimension of { a | a * alpha = 0 }, with a per-degree breakdown.
struct AnnihilatorReport {
  long long total_dim = 0;
  std::map<int, long long> by_degree;  // total degree of the annihilating class -> dimension
  int interaction_blocks = 0;          // components of the source/target incidence graph
  std::optional<int> source_support_cap;  // set when the basis sweep was truncated
};

/// Exact annihilator dimension, computed blockwise: source basis classes are
/// grouped by the connected components of "shares a product target with",
/// and each component contributes the kernel of its own multiplication
/// matrix.  This equals one global kernel (the matrix is block diagonal in
/// that grouping).  For homogeneous alpha every component is concentrated in
/// a single source degree, so the per-degree breakdown is exact.
template <class F>
AnnihilatorReport annihilator_dim(const MacRing<F>& R, const RingElement<F>& alpha,
                                  std::optional<int> max_support = std::nullopt) {
  if (alpha.is_zero()) throw PreconditionError("annihilator of zero is the whole ring");
  const F& f = R.field();
  const auto sources = all_basis_keys(R, max_support);
  const int n = static_cast<int>(sources.size());

  std::vector<RingElement<F>> image(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (const auto& [k, c] : alpha.terms()) {
      const RingElement<F> p = R.product_direct(sources[static_cast<std::size_t>(i)], k);
      for (const auto& [pk, pv] : p.terms())
        image[static_cast<std::size_t>(i)].add_term(f, pk, f.mul(c, pv));
    }

  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };

  std::map<BasisKey, int> first_with_target;
  for (int i = 0; i < n; ++i) {
    if (image[static_cast<std::size_t>(i)].is_zero()) continue;
    for (const auto& [k, c] : image[static_cast<std::size_t>(i)].terms()) {
      auto it = first_with_target.find(k);
      if (it == first_with_target.end())
        first_with_target.emplace(k, i);
      else
        unite(i, it->second);
    }
  }

  AnnihilatorReport rep;
  rep.source_support_cap = max_support;
  std::map<int, std::vector<int>> comp;
  for (int i = 0; i < n; ++i) {
    if (image[static_cast<std::size_t>(i)].is_zero()) {
      rep.total_dim += 1;
      rep.by_degree[sources[static_cast<std::size_t>(i)].total_degree()] += 1;
    } else {
      comp[find(i)].push_back(i);
    }
  }
  rep.interaction_blocks = static_cast<int>(comp.size());

  for (const auto& [root, idxs] : comp) {
    std::map<BasisKey, int> row;
    for (int i : idxs)
      for (const auto& [k, c] : image[static_cast<std::size_t>(i)].terms())
        row.emplace(k, static_cast<int>(row.size()));
    Matrix<F> M(static_cast<int>(row.size()), static_cast<int>(idxs.size()), f);
    for (std::size_t col = 0; col < idxs.size(); ++col)
      for (const auto& [k, c] : image[static_cast<std::size_t>(idxs[col])].terms())
        M.set(row.at(k), static_cast<int>(col), c);
    const long long kdim = static_cast<long long>(idxs.size()) - M.rank();
    rep.total_dim += kdim;
    int dmin = sources[static_cast<std::size_t>(idxs.front())].total_degree();
    for (int i : idxs) dmin = std::min(dmin, sources[static_cast<std::size_t>(i)].total_degree());
    if (kdim > 0) rep.by_degree[dmin] += kdim;
  }
  return rep;
}

namespace detail {

constexpr int kDivisionUnknownCap = 4096;

}  // namespace detail

/// Searches for u with v * u = xi and returns it when found.  Both inputs
/// must be homogeneous.  The unknown u is drawn from summands J = S \ A over
/// target summands S of xi and source summands A of v with A inside S; the
/// system requires the product to equal xi exactly, so a witness is always
/// genuine (and re-verified).  For the element families the pipeline uses --
/// single-summand divisors, and sums of classes with equal support sizes
/// (missing-face combinations) -- a negative answer is exact as well, since
/// any solution can be projected onto this candidate family.
template <class F>
std::optional<RingElement<F>> division_witness(const MacRing<F>& R, const RingElement<F>& v,
                                               const RingElement<F>& xi) {
  const F& f = R.field();
  if (v.is_zero()) return xi.is_zero() ? std::optional<RingElement<F>>(RingElement<F>{}) : std::nullopt;
  if (xi.is_zero()) return RingElement<F>{};
  const auto dv = v.degree();
  const auto dxi = xi.degree();
  if (!dv || !dxi) throw PreconditionError("division requires homogeneous elements");
  if (*dv > *dxi) return std::nullopt;
  const int du = *dxi - *dv;

  std::set<std::pair<VertexSet, int>> cands;
  for (const auto& [tk, tc] : xi.terms())
    for (const auto& [vk, vc] : v.terms()) {
      if ((vk.I & ~tk.I) != 0) continue;
      const VertexSet J = tk.I & ~vk.I;
      const int q = du - card(J) - 1;
      if (q >= -1) cands.insert({J, q});
    }
  std::vector<BasisKey> unknowns;
  for (const auto& [J, q] : cands) {
    const int b = R.summand(J).betti(q);
    for (int j = 0; j < b; ++j) unknowns.push_back(BasisKey{J, q, j});
  }
  if (unknowns.empty()) return std::nullopt;
  if (static_cast<int>(unknowns.size()) > detail::kDivisionUnknownCap)
    throw PreconditionError("division search space exceeds the enumeration cap");

  std::vector<RingElement<F>> cols;
  cols.reserve(unknowns.size());
  for (const auto& b : unknowns) cols.push_back(R.multiply(v, R.element_of(b)));

  std::map<BasisKey, int> row;
  for (const auto& [k, c] : xi.terms()) row.emplace(k, static_cast<int>(row.size()));
  for (const auto& e : cols)
    for (const auto& [k, c] : e.terms()) row.emplace(k, static_cast<int>(row.size()));

  Matrix<F> A(static_cast<int>(row.size()), static_cast<int>(unknowns.size()), f);
  for (std::size_t col = 0; col < cols.size(); ++col)
    for (const auto& [k, c] : cols[col].terms()) A.set(row.at(k), static_cast<int>(col), c);
  FVec<F> rhs(static_cast<int>(row.size()));
  for (const auto& [k, c] : xi.terms()) rhs.set(row.at(k), c);

  const auto x = A.solve(rhs);
  if (!x) return std::nullopt;
  RingElement<F> u;
  for (std::size_t j = 0; j < unknowns.size(); ++j) u.add_term(f, unknowns[j], x->get(static_cast<int>(j)));
  if (!(R.multiply(v, u) == xi)) throw ProcedureFailure("division witness failed verification");
  return u;
}

template <class F>
bool divides(const MacRing<F>& R, const RingElement<F>& v, const RingElement<F>& xi) {
  return division_witness(R, v, xi).has_value();
}

namespace detail {

constexpr std::uint64_t kSpanEnumerationCap = std::uint64_t{1} << 20;

/// Visits one representative of every direction in F^t (first nonzero
/// coordinate normalised to 1); fn returns false to stop early.  Only for
/// finite F.
template <class F, class Fn>
void for_each_projective_tuple(const F& f, int t, Fn&& fn) {
  const std::uint64_t p = f.order();
  std::vector<typename F::Value> c(static_cast<std::size_t>(t), f.zero());
  for (int lead = 0; lead < t; ++lead) {
    for (int i = 0; i < t; ++i) c[static_cast<std::size_t>(i)] = f.zero();
    c[static_cast<std::size_t>(lead)] = f.one();
    const int rest = t - lead - 1;
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(rest), 0);
    for (;;) {
      for (int i = 0; i < rest; ++i)
        c[static_cast<std::size_t>(lead + 1 + i)] = f.from_int(static_cast<long long>(digits[static_cast<std::size_t>(i)]));
      if (!fn(static_cast<const std::vector<typename F::Value>&>(c))) return;
      int i = 0;
      while (i < rest && ++digits[static_cast<std::size_t>(i)] == p) {
        digits[static_cast<std::size_t>(i)] = 0;
        ++i;
      }
      if (i == rest) break;
    }
  }
}

inline std::uint64_t checked_power(std::uint64_t p, int t) {
  std::uint64_t r = 1;
  for (int i = 0; i < t; ++i) {
    if (r > kSpanEnumerationCap) return kSpanEnumerationCap + 1;
    r *= p;
  }
  return r;
}

}  // namespace detail

/// Whether every nonzero element of the span of `span_basis` divides xi.
/// Enumeration-based, so the field must be finite; divisibility is invariant
/// under scaling, so one representative per direction suffices.
template <class F>
bool is_factor_space(const MacRing<F>& R, const std::vector<RingElement<F>>& span_basis,
                     const RingElement<F>& xi) {
  if constexpr (!F::enumerable) {
    (void)R;
    (void)span_basis;
    (void)xi;
    throw PreconditionError("factor space check requires a finite coefficient field");
  } else {
    const F& f = R.field();
    const int t = static_cast<int>(span_basis.size());
    if (t == 0) return true;
    if (detail::checked_power(f.order(), t) > detail::kSpanEnumerationCap)
      throw PreconditionError("factor space enumeration exceeds the cap");
    bool ok = true;
    detail::for_each_projective_tuple(f, t, [&](const std::vector<typename F::Value>& c) {
      RingElement<F> e;
      for (int i = 0; i < t; ++i) e.add(f, span_basis[static_cast<std::size_t>(i)].scaled(f, c[static_cast<std::size_t>(i)]));
      if (!e.is_zero() && !divides(R, e, xi)) ok = false;
      return ok;
    });
    return ok;
  }
}

namespace detail {

/// Largest dimension of a subspace of F^t all of whose nonzero points lie in
/// `dividing` (ranks of projective representatives).  Exact DFS; t is small.
template <class F>
int max_subspace_dimension(const F& f, int t, const std::unordered_set<std::uint64_t>& dividing) {
  const std::uint64_t p = f.order();
  using Value = typename F::Value;
  auto rank_of = [&](const std::vector<Value>& c) {
    std::uint64_t r = 0, pw = 1;
    for (int i = 0; i < t; ++i) {
      r += static_cast<std::uint64_t>(c[static_cast<std::size_t>(i)]) * pw;
      pw *= p;
    }
    return r;
  };
  auto canonical = [&](std::vector<Value> c) {
    int lead = -1;
    for (int i = 0; i < t && lead < 0; ++i)
      if (!f.is_zero(c[static_cast<std::size_t>(i)])) lead = i;
    if (lead < 0) return c;  // zero tuple
    const Value s = f.inv(c[static_cast<std::size_t>(lead)]);
    for (int i = 0; i < t; ++i) c[static_cast<std::size_t>(i)] = f.mul(s, c[static_cast<std::size_t>(i)]);
    return c;
  };

  // Sorted point list for a deterministic DFS order.
  std::vector<std::pair<std::uint64_t, std::vector<Value>>> points;
  for_each_projective_tuple(f, t, [&](const std::vector<Value>& c) {
    const std::uint64_t r = rank_of(c);
    if (dividing.count(r)) points.push_back({r, c});
    return true;
  });
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  int best = 0;
  std::vector<std::vector<Value>> span{std::vector<Value>(static_cast<std::size_t>(t), f.zero())};
  std::function<void(std::size_t, int)> dfs = [&](std::size_t start, int dim) {
    best = std::max(best, dim);
    for (std::size_t pi = start; pi < points.size(); ++pi) {
      const auto& w = points[pi].second;
      bool in_span = false;
      for (const auto& s : span)
        if (s == w) {
          in_span = true;
          break;
        }
      if (in_span) continue;
      // Every new point s + c*w (s in span, c nonzero) must divide.
      std::vector<std::vector<Value>> added;
      bool ok = true;
      for (const auto& s : span) {
        for (std::uint64_t ci = 1; ci < p && ok; ++ci) {
          const Value cv = f.from_int(static_cast<long long>(ci));
          std::vector<Value> e(static_cast<std::size_t>(t));
          for (int i = 0; i < t; ++i)
            e[static_cast<std::size_t>(i)] =
                f.add(s[static_cast<std::size_t>(i)], f.mul(cv, w[static_cast<std::size_t>(i)]));
          if (!dividing.count(rank_of(canonical(e)))) ok = false;
          added.push_back(std::move(e));
        }
        if (!ok) break;
      }
      if (!ok) continue;
      const std::size_t old = span.size();
      for (auto& e : added) span.push_back(std::move(e));
      dfs(pi + 1, dim + 1);
      span.resize(old);
    }
  };
  dfs(0, 0);
  return best;
}

}  // namespace detail

/// Maximum dimension of a subspace of degree-k elements all of whose nonzero
/// members divide xi.  Candidates are the degree-k basis classes supported
/// inside xi's support (a degree-k divisor of a class over I can only be
/// supported there); the subspace search inside their span is exact.
template <class F>
int ind_k(const MacRing<F>& R, const RingElement<F>& xi, int k, int cap = 16) {
  if constexpr (!F::enumerable) {
    (void)R;
    (void)xi;
    (void)k;
    (void)cap;
    throw PreconditionError("factor index requires a finite coefficient field");
  } else {
    if (xi.is_zero()) throw PreconditionError("factor index of the zero element");
    const F& f = R.field();
    std::vector<BasisKey> cand;
    for (const auto& b : R.basis(k, xi.support()))
      if (divides(R, R.element_of(b), xi)) cand.push_back(b);
    const int t = static_cast<int>(cand.size());
    if (t == 0) return 0;
    if (t > cap) throw PreconditionError("factor index candidate count exceeds the cap");
    if (detail::checked_power(f.order(), t) > detail::kSpanEnumerationCap)
      throw PreconditionError("factor index enumeration exceeds the cap");

    std::unordered_set<std::uint64_t> dividing;
    detail::for_each_projective_tuple(f, t, [&](const std::vector<typename F::Value>& c) {
      RingElement<F> e;
      for (int i = 0; i < t; ++i) {
        if (f.is_zero(c[static_cast<std::size_t>(i)])) continue;
        e.add_term(f, cand[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(i)]);
      }
      if (divides(R, e, xi)) {
        std::uint64_t r = 0, pw = 1;
        for (int i = 0; i < t; ++i) {
          r += static_cast<std::uint64_t>(c[static_cast<std::size_t>(i)]) * pw;
          pw *= f.order();
        }
        dividing.insert(r);
      }
      return true;
    });
    return detail::max_subspace_dimension(f, t, dividing);
  }
}

/// Ring-level 4-belt detection: scans classes in total degree 6 supported on
/// 4-vertex subsets and reports whether any has factor index 2 in degree 3.
/// On the complexes this library targets the answer coincides with the
/// combinatorial 4-belt search.
template <class F>
bool four_belt_via_ring(const MacRing<F>& R) {
  if constexpr (!F::enumerable) {
    (void)R;
    throw PreconditionError("ring-level belt detection requires a finite coefficient field");
  } else {
    const int m = R.complex().m();
    bool found = false;
    for_each_subset_of_size(m, 4, [&](VertexSet S) {
      if (found) return;
      const int b1 = R.summand(S).betti(1);
      for (int j = 0; j < b1 && !found; ++j)
        if (ind_k(R, R.element_of(BasisKey{S, 1, j}), 3) == 2) found = true;
    });
    return found;
  }
}

/// Whether the full subcomplex on I is an induced circle (a closed curve):
/// one-dimensional, connected, every vertex of I with exactly two neighbors
/// inside I.
inline bool is_induced_circle(const SimplicialComplex& K, VertexSet I) {
  if (card(I) < 3) return false;
  const SimplicialComplex L = K.full_subcomplex(I);
  if (L.dim() != 1 || !L.is_connected()) return false;
  for (int v : SimplicialComplex::labels_of(I))
    if (card(L.neighbors(v)) != 2) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Constructive circle avoidance.  Given a two-vertex missing face {v1, v2}
// of a flag 2-sphere without 4-belts, and a third vertex v3, produce I with
// {v1, v2} in I, v3 not in I, K_I an induced circle, and K on
// {v3} + (I - {v1,v2}) disconnected.  The procedure starts from a shortest
// circle through the missing face, and while the link of v3 meets both arcs,
// detours the offending arc around its smallest offending vertex through the
// disk away from v3 (counter-detours through the near disk when a detour
// makes the arcs touch).  Shortest paths are chordless, so every detour
// keeps the arcs induced.
// ---------------------------------------------------------------------------

namespace detail {

struct DiskPair {
  std::vector<Simplex> near;  // triangles on the side of the reference vertex
  std::vector<Simplex> far;
};

/// Splits the triangles of a closed 2-sphere along an induced circle.
inline DiskPair split_disks(const SimplicialComplex& K, VertexSet circle, int ref_vertex) {
  const auto& tris = K.faces_of_card(3);
  const int nt = static_cast<int>(tris.size());
  std::unordered_map<std::uint64_t, int> edge_first;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    for (int v : vertices_of(tris[static_cast<std::size_t>(t)])) {
      const Simplex e = tris[static_cast<std::size_t>(t)] & ~vbit(v);
      if ((e & ~circle) == 0) continue;  // crossing the circle is blocked
      auto it = edge_first.find(e);
      if (it == edge_first.end()) {
        edge_first.emplace(e, t);
      } else {
        adj[static_cast<std::size_t>(t)].push_back(it->second);
        adj[static_cast<std::size_t>(it->second)].push_back(t);
      }
    }
  }
  std::vector<char> near_side(static_cast<std::size_t>(nt), 0);
  std::vector<int> queue;
  for (int t = 0; t < nt; ++t)
    if (tris[static_cast<std::size_t>(t)] & vbit(ref_vertex - 1)) {
      near_side[static_cast<std::size_t>(t)] = 1;
      queue.push_back(t);
      break;
    }
  for (std::size_t qi = 0; qi < queue.size(); ++qi)
    for (int s : adj[static_cast<std::size_t>(queue[qi])])
      if (!near_side[static_cast<std::size_t>(s)]) {
        near_side[static_cast<std::size_t>(s)] = 1;
        queue.push_back(s);
      }
  DiskPair out;
  for (int t = 0; t < nt; ++t)
    (near_side[static_cast<std::size_t>(t)] ? out.near : out.far).push_back(tris[static_cast<std::size_t>(t)]);
  return out;
}

/// Vertices joined to v by an edge of some triangle in the list.
inline VertexSet link_in(const std::vector<Simplex>& tris, int v) {
  VertexSet out = 0;
  const Simplex b = vbit(v - 1);
  for (Simplex T : tris)
    if (T & b) out |= T & ~b;
  return out;
}

/// Shortest path between two labels using only pool vertices; deterministic
/// (neighbors visited in ascending label order).  Shortest paths are always
/// induced: a chord would shortcut them.
inline std::optional<std::vector<int>> shortest_path_within(const SimplicialComplex& K, VertexSet pool,
                                                            int from, int to) {
  std::vector<int> parent(static_cast<std::size_t>(K.m()) + 1, 0);
  parent[static_cast<std::size_t>(from)] = from;
  std::vector<int> queue{from};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int u = queue[qi];
    if (u == to) break;
    for (int w : SimplicialComplex::labels_of(K.neighbors(u) & pool))
      if (!parent[static_cast<std::size_t>(w)]) {
        parent[static_cast<std::size_t>(w)] = u;
        queue.push_back(w);
      }
  }
  if (!parent[static_cast<std::size_t>(to)]) return std::nullopt;
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(parent[static_cast<std::size_t>(path.back())]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

inline VertexSet find_avoiding_circle(const SimplicialComplex& K, Simplex omega, int v3) {
  if (card(omega) != 2 || K.has_face(omega))
    throw PreconditionError("find_avoiding_circle: omega must be a two-vertex missing face");
  if (v3 < 1 || v3 > K.m() || (omega & vbit(v3 - 1)) != 0)
    throw PreconditionError("find_avoiding_circle: v3 must be a vertex outside omega");
  if (!K.is_closed_2sphere() || !K.is_flag())
    throw PreconditionError("find_avoiding_circle: the complex must be a flag 2-sphere");
  if (has_four_belt(K)) throw PreconditionError("find_avoiding_circle: the complex must have no 4-belt");

  const auto olab = SimplicialComplex::labels_of(omega);
  const int v1 = olab[0], v2 = olab[1];
  const VertexSet vb3 = vbit(v3 - 1);
  const int m = K.m();

  std::vector<int> arc_a, arc_b;  // interiors, ordered from v1 to v2
  {
    Belt seed;
    bool got = false;
    for (int n = 4; n <= m && !got; ++n) {
      const auto hit = first_belt(K, n, omega, vb3);
      if (!hit.empty()) {
        seed = hit[0];
        got = true;
      }
    }
    if (!got) throw ProcedureFailure("no induced circle through the missing face avoids the vertex");
    const auto& cyc = seed.cycle;
    const int len = static_cast<int>(cyc.size());
    int i1 = -1, i2 = -1;
    for (int i = 0; i < len; ++i) {
      if (cyc[static_cast<std::size_t>(i)] == v1) i1 = i;
      if (cyc[static_cast<std::size_t>(i)] == v2) i2 = i;
    }
    for (int i = (i1 + 1) % len; i != i2; i = (i + 1) % len) arc_a.push_back(cyc[static_cast<std::size_t>(i)]);
    for (int i = (i2 + 1) % len; i != i1; i = (i + 1) % len) arc_b.push_back(cyc[static_cast<std::size_t>(i)]);
  }

  auto mask_of = [](const std::vector<int>& vs) {
    VertexSet s = 0;
    for (int v : vs) s |= vbit(v - 1);
    return s;
  };

  long long steps = 0;
  const long long step_cap = 8ll * m * m;
  for (;;) {
    if (++steps > step_cap) throw ProcedureFailure("circle avoidance did not converge");
    const VertexSet a_int = mask_of(arc_a), b_int = mask_of(arc_b);
    const VertexSet support = a_int | b_int | omega;
    const VertexSet nb3 = K.neighbors(v3);
    if ((a_int & nb3) == 0 || (b_int & nb3) == 0) {
      if (!is_induced_circle(K, support)) throw ProcedureFailure("avoidance produced a non-circle");
      const VertexSet J = vb3 | (support & ~omega);
      if (ReducedCohomology<GF2>(K.full_subcomplex(J), GF2{}).betti(0) < 1)
        throw ProcedureFailure("avoidance postcondition failed");
      return support;
    }

    const int first_offender = min_vertex((a_int | b_int) & nb3) + 1;
    const detail::DiskPair disks = detail::split_disks(K, support, v3);
    const bool offender_side_a = (a_int & vbit(first_offender - 1)) != 0;
    bool fixing_a = offender_side_a;
    int offender = first_offender;

    for (;;) {
      if (++steps > step_cap) throw ProcedureFailure("circle avoidance did not converge");
      const bool through_far = (fixing_a == offender_side_a);
      const VertexSet detour = detail::link_in(through_far ? disks.far : disks.near, offender);
      std::vector<int>& arc = fixing_a ? arc_a : arc_b;
      const VertexSet self = mask_of(arc);
      const VertexSet other = fixing_a ? mask_of(arc_b) : mask_of(arc_a);
      VertexSet pool = ((self | omega | detour) & ~vbit(offender - 1)) & ~vb3 & ~other;
      const auto path = detail::shortest_path_within(K, pool, v1, v2);
      if (!path) throw ProcedureFailure("arc detour found no induced path");
      const VertexSet fresh = mask_of(*path) & ~omega & ~self;
      arc.assign(path->begin() + 1, path->end() - 1);

      // Any contact between the two arcs keeps the cascade going.
      const VertexSet mine = mask_of(arc);
      VertexSet reached = 0;
      for (int y : SimplicialComplex::labels_of(fresh)) reached |= K.neighbors(y);
      VertexSet frontier = reached & other;
      if (frontier == 0) {
        VertexSet crosses = 0;
        for (int y : SimplicialComplex::labels_of(mine)) crosses |= K.neighbors(y);
        crosses &= other;
        if (crosses == 0) break;
        frontier = crosses;
      }
      offender = min_vertex(frontier) + 1;
      fixing_a = !fixing_a;
    }
  }
}

}  // namespace macbelt

#endif  // MACBELT_INVARIANTS_HPP
