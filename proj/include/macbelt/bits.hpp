#ifndef MACBELT_BITS_HPP
#define MACBELT_BITS_HPP

#include <bit>
#include <cstdint>
#include <vector>

namespace macbelt {

/// A set of vertices, one bit per vertex: bit i holds vertex i (0-based
/// internally; external file formats use 1-based labels).  Simplices are
/// vertex sets as well; the empty simplex is the value 0.
using VertexSet = std::uint64_t;
using Simplex = std::uint64_t;

constexpr int kMaxVertices = 63;

inline int card(std::uint64_t s) { return std::popcount(s); }

inline VertexSet vbit(int v) { return std::uint64_t{1} << v; }

inline VertexSet full_set(int m) { return (std::uint64_t{1} << m) - 1; }

/// Lowest vertex of a nonempty set.
inline int min_vertex(std::uint64_t s) { return std::countr_zero(s); }

inline std::vector<int> vertices_of(std::uint64_t s) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(card(s)));
  while (s) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

/// Position of vertex v inside the ascending vertex list of s (v must be in s).
inline int position_in(std::uint64_t s, int v) {
  return std::popcount(s & (vbit(v) - 1));
}

/// Sign of the permutation that sorts the concatenation (a ascending, then b
/// ascending) into one ascending list; a and b must be disjoint.  This is
/// (-1)^{#\{(x,y) in a x b : x > y\}}.
inline int shuffle_sign(std::uint64_t a, std::uint64_t b) {
  int inversions = 0;
  std::uint64_t rest = a;
  while (rest) {
    const int x = std::countr_zero(rest);
    rest &= rest - 1;
    inversions += std::popcount(b & (vbit(x) - 1));
  }
  return (inversions & 1) ? -1 : 1;
}

/// Next k-subset in ascending numeric order (Gosper's hack).
inline std::uint64_t next_combination(std::uint64_t v) {
  const std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
}

/// Calls f(s) for every k-subset s of {0, ..., m-1}, in ascending numeric
/// order of the bitmask.
template <class Fn>
void for_each_subset_of_size(int m, int k, Fn&& f) {
  if (k < 0 || k > m) return;
  if (k == 0) {
    f(std::uint64_t{0});
    return;
  }
  const std::uint64_t limit = full_set(m);
  for (std::uint64_t s = full_set(k); s <= limit; s = next_combination(s)) f(s);
}

}  // namespace macbelt

#endif  // MACBELT_BITS_HPP
