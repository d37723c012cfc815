#ifndef MACBELT_CANONICAL_HPP
#define MACBELT_CANONICAL_HPP

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "macbelt/bits.hpp"
#include "macbelt/simplicial_complex.hpp"

namespace macbelt {

namespace detail {

/// Individualization-refinement search for a canonical vertex order.  The
/// canonical form is the lexicographically smallest encoding
///   [ground size, facet count, sorted relabeled facet masks...]
/// over all leaf labelings; refinement only prunes symmetric branches, so
/// correctness never depends on its strength.
class Canonicalizer {
 public:
  explicit Canonicalizer(const SimplicialComplex& K) : K_(K) {
    for (int b : vertices_of(K.ground())) verts_.push_back(b);
    n_ = static_cast<int>(verts_.size());
    nbr_.assign(64, 0);
    for (Simplex e : K.faces_of_card(2)) {
      const auto vs = vertices_of(e);
      nbr_[static_cast<std::size_t>(vs[0])] |= vbit(vs[1]);
      nbr_[static_cast<std::size_t>(vs[1])] |= vbit(vs[0]);
    }
    facets_ = K.facets();
  }

  /// Runs the search; returns the canonical encoding and a winning labeling
  /// (0-based ground bit -> 0-based canonical index).
  std::pair<std::vector<std::uint64_t>, std::vector<int>> run() {
    // Initial colors: vertex-or-ghost flag, then one-skeleton degree.
    std::vector<std::vector<int>> cells = initial_cells();
    refine(cells);
    search(cells);
    return {best_, best_perm_};
  }

 private:
  std::vector<std::vector<int>> initial_cells() const {
    const VertexSet vset = K_.vertex_set();
    std::vector<std::pair<std::pair<int, int>, int>> keyed;
    for (int b : verts_)
      keyed.push_back({{(vset & vbit(b)) ? 1 : 0, card(nbr_[static_cast<std::size_t>(b)])}, b});
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::vector<int>> cells;
    for (std::size_t i = 0; i < keyed.size();) {
      std::size_t j = i;
      std::vector<int> cell;
      while (j < keyed.size() && keyed[j].first == keyed[i].first) cell.push_back(keyed[j++].second);
      cells.push_back(std::move(cell));
      i = j;
    }
    return cells;
  }

  /// Equitable refinement against the one-skeleton: repeatedly split cells by
  /// the profile of neighbor counts per cell.  Cell order after a split is by
  /// profile, which is label-invariant.
  void refine(std::vector<std::vector<int>>& cells) const {
    for (;;) {
      std::vector<VertexSet> cell_mask(cells.size(), 0);
      for (std::size_t c = 0; c < cells.size(); ++c)
        for (int b : cells[c]) cell_mask[c] |= vbit(b);
      bool changed = false;
      std::vector<std::vector<int>> next;
      for (const auto& cell : cells) {
        if (cell.size() == 1) {
          next.push_back(cell);
          continue;
        }
        std::vector<std::pair<std::vector<int>, int>> keyed;
        for (int b : cell) {
          std::vector<int> sig;
          sig.reserve(cells.size());
          for (const VertexSet mask : cell_mask)
            sig.push_back(card(nbr_[static_cast<std::size_t>(b)] & mask));
          keyed.push_back({std::move(sig), b});
        }
        std::sort(keyed.begin(), keyed.end());
        for (std::size_t i = 0; i < keyed.size();) {
          std::size_t j = i;
          std::vector<int> sub;
          while (j < keyed.size() && keyed[j].first == keyed[i].first) sub.push_back(keyed[j++].second);
          if (sub.size() != cell.size()) changed = true;
          next.push_back(std::move(sub));
          i = j;
        }
      }
      cells = std::move(next);
      if (!changed) return;
    }
  }

  void search(std::vector<std::vector<int>>& cells) {
    int split = -1;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (cells[c].size() > 1) {
        split = static_cast<int>(c);
        break;
      }
    if (split < 0) {
      consider_leaf(cells);
      return;
    }
    const std::vector<int> cell = cells[static_cast<std::size_t>(split)];
    for (int b : cell) {
      std::vector<std::vector<int>> branch(cells.begin(), cells.begin() + split);
      branch.push_back({b});
      std::vector<int> rest;
      for (int o : cell)
        if (o != b) rest.push_back(o);
      branch.push_back(std::move(rest));
      branch.insert(branch.end(), cells.begin() + split + 1, cells.end());
      refine(branch);
      search(branch);
    }
  }

  void consider_leaf(const std::vector<std::vector<int>>& cells) {
    std::vector<int> perm(64, -1);
    int at = 0;
    for (const auto& cell : cells) perm[static_cast<std::size_t>(cell[0])] = at++;
    std::vector<std::uint64_t> enc;
    enc.reserve(facets_.size() + 2);
    enc.push_back(static_cast<std::uint64_t>(n_));
    enc.push_back(facets_.size());
    std::vector<std::uint64_t> remapped;
    remapped.reserve(facets_.size());
    for (Simplex s : facets_) {
      std::uint64_t t = 0;
      for (int b : vertices_of(s)) t |= vbit(perm[static_cast<std::size_t>(b)]);
      remapped.push_back(t);
    }
    std::sort(remapped.begin(), remapped.end());
    enc.insert(enc.end(), remapped.begin(), remapped.end());
    if (best_.empty() || enc < best_) {
      best_ = std::move(enc);
      best_perm_ = perm;
    }
  }

  const SimplicialComplex& K_;
  std::vector<int> verts_;
  int n_ = 0;
  std::vector<VertexSet> nbr_;
  std::vector<Simplex> facets_;
  std::vector<std::uint64_t> best_;
  std::vector<int> best_perm_;
};

}  // namespace detail

/// Label-invariant encoding: equal encodings exactly characterize isomorphic
/// complexes (as complexes-with-ground-set; ghosts count but are
/// interchangeable).
inline std::vector<std::uint64_t> canonical_encoding(const SimplicialComplex& K) {
  return detail::Canonicalizer(K).run().first;
}

inline bool are_isomorphic(const SimplicialComplex& a, const SimplicialComplex& b) {
  auto [ea, pa] = detail::Canonicalizer(a).run();
  auto [eb, pb] = detail::Canonicalizer(b).run();
  if (ea != eb) return false;
  // Sanity: compose the two winning labelings into an explicit vertex map and
  // confirm it carries facets to facets.
  std::vector<int> inv_b(64, -1);
  for (int bit = 0; bit < 64; ++bit)
    if (pb[static_cast<std::size_t>(bit)] >= 0) inv_b[static_cast<std::size_t>(pb[static_cast<std::size_t>(bit)])] = bit;
  const auto fb = b.facets();
  for (Simplex s : a.facets()) {
    Simplex t = 0;
    for (int bit : vertices_of(s))
      t |= vbit(inv_b[static_cast<std::size_t>(pa[static_cast<std::size_t>(bit)])]);
    if (!std::binary_search(fb.begin(), fb.end(), t)) return false;
  }
  return true;
}

}  // namespace macbelt

#endif  // MACBELT_CANONICAL_HPP
