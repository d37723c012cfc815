#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "macbelt/cohomology.hpp"
#include "macbelt/io.hpp"
#include "macbelt/simplicial_complex.hpp"

using namespace macbelt;

namespace {

std::string data(const char* name) { return std::string(MACBELT_DATA_DIR) + "/" + name; }

// Six-vertex triangulation of the real projective plane, the classic
// field-dependence canary.
SimplicialComplex rp2_six() {
  return SimplicialComplex::from_facets(6, {{1, 2, 3},
                                            {1, 2, 4},
                                            {1, 3, 5},
                                            {1, 4, 6},
                                            {1, 5, 6},
                                            {2, 3, 6},
                                            {2, 4, 5},
                                            {2, 5, 6},
                                            {3, 4, 5},
                                            {3, 4, 6}});
}

// ---------------------------------------------------------------------------
// Independent oracle: reduced simplicial HOMOLOGY via boundary matrices and
// standalone rank routines (elimination mod p; fraction-free exact
// elimination for characteristic zero).  Over a field the Betti numbers of
// homology and cohomology agree degree by degree.
// ---------------------------------------------------------------------------

namespace oracle {

using Mat = std::vector<std::vector<long long>>;

// Boundary from q-chains (card q+1 faces) to (q-1)-chains; q = 0 gives the
// augmentation row.
Mat boundary_matrix(const SimplicialComplex& L, int q) {
  const auto& rows_faces = L.faces_of_card(q);
  const auto& cols_faces = L.faces_of_card(q + 1);
  Mat M(rows_faces.size(), std::vector<long long>(cols_faces.size(), 0));
  for (std::size_t c = 0; c < cols_faces.size(); ++c) {
    const Simplex tau = cols_faces[c];
    int pos = 0;
    for (int b : vertices_of(tau)) {
      const Simplex sigma = tau & ~vbit(b);
      const auto it = std::lower_bound(rows_faces.begin(), rows_faces.end(), sigma);
      M[static_cast<std::size_t>(it - rows_faces.begin())][c] = pos % 2 == 0 ? 1 : -1;
      ++pos;
    }
  }
  return M;
}

int rank_mod_p(Mat M, long long p) {
  if (M.empty() || M[0].empty()) return 0;
  const std::size_t rows = M.size(), cols = M[0].size();
  for (auto& row : M)
    for (auto& x : row) x = ((x % p) + p) % p;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && M[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(M[piv], M[r]);
    // Normalize pivot to 1 via Fermat inverse.
    long long inv = 1, base = M[r][c] % p, e = p - 2;
    while (e) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    for (auto& x : M[r]) x = x * inv % p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      const long long f = M[i][c];
      for (std::size_t j = 0; j < cols; ++j) M[i][j] = ((M[i][j] - f * M[r][j]) % p + p) % p;
    }
    ++r;
  }
  return static_cast<int>(r);
}

// Bareiss fraction-free elimination; intermediate values are minors of the
// original +-1 matrix, which fit 128 bits comfortably at these sizes.
int rank_exact(const Mat& M0) {
  if (M0.empty() || M0[0].empty()) return 0;
  const std::size_t rows = M0.size(), cols = M0[0].size();
  std::vector<std::vector<__int128>> M(rows, std::vector<__int128>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) M[i][j] = M0[i][j];
  __int128 prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && M[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(M[piv], M[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        M[i][j] = (M[r][c] * M[i][j] - M[i][c] * M[r][j]) / prev;
      M[i][c] = 0;
    }
    prev = M[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

// Reduced homology Betti numbers for degrees -1..dim; p = 0 means exact
// characteristic zero.
std::vector<int> betti(const SimplicialComplex& L, long long p) {
  auto rank_of = [&](const Mat& M) { return p == 0 ? rank_exact(M) : rank_mod_p(M, p); };
  std::vector<int> out;
  for (int q = -1; q <= L.dim(); ++q) {
    const int dim_cq = static_cast<int>(L.faces_of_card(q + 1).size());
    const int rank_in = q >= 0 ? rank_of(boundary_matrix(L, q)) : 0;
    const int rank_out = q < L.dim() ? rank_of(boundary_matrix(L, q + 1)) : 0;
    out.push_back(dim_cq - rank_in - rank_out);
  }
  return out;
}

}  // namespace oracle

template <class F>
void check_against_oracle(const SimplicialComplex& K, F field, long long p) {
  const auto h = reduced_cohomology(K, field);
  INFO("oracle characteristic " << p);
  REQUIRE(h.betti_vector() == oracle::betti(K, p));
}

void check_all_fields(const SimplicialComplex& K) {
  check_against_oracle(K, GF2{}, 2);
  check_against_oracle(K, PrimeField(3), 3);
  check_against_oracle(K, PrimeField(10007), 10007);
  check_against_oracle(K, RationalQ{}, 0);
}

}  // namespace

TEST_CASE("cohomology matches the homology oracle on the corpus", "[cohomology]") {
  for (const char* name : {"square.json", "pentagon.json", "hexagon.json", "octahedron.json",
                           "icosahedron.json", "disk.json", "path.json", "wedge.json",
                           "full_simplex.json"}) {
    INFO(name);
    check_all_fields(load_complex(data(name)));
  }
}

TEST_CASE("cohomology of degenerate complexes", "[cohomology]") {
  SECTION("only the empty face") {
    const auto K = SimplicialComplex::from_facets(1, {});
    const auto h = reduced_cohomology(K, GF2{});
    REQUIRE(h.betti_vector() == std::vector<int>{1});
    check_all_fields(K);
  }

  SECTION("two points") {
    const auto K = SimplicialComplex::from_facets(2, {{1}, {2}});
    const auto h = reduced_cohomology(K, RationalQ{});
    REQUIRE(h.betti_vector() == std::vector<int>{0, 1});
    check_all_fields(K);
  }

  SECTION("empty triangle is a circle") {
    const auto K = SimplicialComplex::from_facets(3, {{1, 2}, {2, 3}, {1, 3}});
    const auto h = reduced_cohomology(K, GF2{});
    REQUIRE(h.betti_vector() == std::vector<int>{0, 0, 1});
    check_all_fields(K);
  }
}

TEST_CASE("projective plane depends on the field", "[cohomology]") {
  const auto K = rp2_six();
  REQUIRE(reduced_cohomology(K, GF2{}).betti_vector() == std::vector<int>{0, 0, 1, 1});
  REQUIRE(reduced_cohomology(K, RationalQ{}).betti_vector() == std::vector<int>{0, 0, 0, 0});
  REQUIRE(reduced_cohomology(K, PrimeField(3)).betti_vector() == std::vector<int>{0, 0, 0, 0});
  check_all_fields(K);
}

TEST_CASE("spheres have one top class", "[cohomology]") {
  const auto oct = load_complex(data("octahedron.json"));
  const auto h = reduced_cohomology(oct, RationalQ{});
  REQUIRE(h.betti_vector() == std::vector<int>{0, 0, 0, 1});

  const auto ico = load_complex(data("icosahedron.json"));
  REQUIRE(reduced_cohomology(ico, GF2{}).betti_vector() == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("class coordinates and representatives", "[cohomology]") {
  SECTION("two points over Q, by hand") {
    const auto K = SimplicialComplex::from_facets(2, {{1}, {2}});
    RationalQ f;
    const auto h = reduced_cohomology(K, f);
    REQUIRE(h.betti(0) == 1);
    // Z^0 echelon is {e1, e2}; the coboundary span is (1,1) pivoting on the
    // first coordinate, so the representative is e2 and the class of (1,0)
    // is -1 times it.
    DenseVec<RationalQ> c(2);
    c.set(0, f.one());
    const auto cls = h.class_of_cocycle(0, c);
    REQUIRE(cls.size() == 1);
    REQUIRE(cls[0] == f.from_int(-1));
  }

  SECTION("representative round-trip on the pentagon") {
    const auto K = load_complex(data("pentagon.json"));
    RationalQ f;
    const auto h = reduced_cohomology(K, f);
    REQUIRE(h.betti(1) == 1);
    const auto& rep = h.representative(1, 0);
    auto cls = h.class_of_cocycle(1, rep);
    REQUIRE(cls == std::vector<RationalQ::Value>{f.one()});

    // Shifting by a coboundary never moves the class.
    const auto images = h.coboundary_images(K, 1);
    REQUIRE_FALSE(images.empty());
    auto shifted = rep;
    vec_axpy(f, shifted, f.from_int(7), images[2]);
    REQUIRE(h.class_of_cocycle(1, shifted) == cls);

    // Scaling scales the class.
    auto doubled = h.cocycle_of_class(1, {f.from_int(2)});
    REQUIRE(h.class_of_cocycle(1, doubled) == std::vector<RationalQ::Value>{f.from_int(2)});
  }

  SECTION("rejects non-cocycles") {
    const auto K = load_complex(data("disk.json"));
    GF2 f;
    const auto h = reduced_cohomology(K, f);
    // A single-edge indicator on the disk boundary is not a cocycle.
    BitVec c(static_cast<int>(h.at(1).simplices.size()));
    c.set(0, 1);
    REQUIRE_THROWS_AS(h.class_of_cocycle(1, c), PreconditionError);
    REQUIRE_THROWS_AS(h.class_of_cocycle(1, BitVec(3)), PreconditionError);
  }
}

TEST_CASE("gorenstein-star recognition", "[cohomology]") {
  SECTION("spheres pass over every field") {
    for (const char* name : {"square.json", "pentagon.json", "hexagon.json", "octahedron.json",
                             "icosahedron.json"}) {
      INFO(name);
      const auto K = load_complex(data(name));
      REQUIRE(is_gorenstein_star(K, GF2{}));
      REQUIRE(is_gorenstein_star(K, RationalQ{}));
      REQUIRE(is_gorenstein_star(K, PrimeField(3)));
    }
  }

  SECTION("non-spheres fail") {
    for (const char* name : {"disk.json", "path.json", "wedge.json", "full_simplex.json"}) {
      INFO(name);
      const auto K = load_complex(data(name));
      REQUIRE_FALSE(is_gorenstein_star(K, GF2{}));
      REQUIRE_FALSE(is_gorenstein_star(K, RationalQ{}));
    }
  }

  SECTION("projective plane fails in every characteristic") {
    // Not a homology sphere over any field: below the top degree its middle
    // cohomology survives mod 2, and over other fields the top class dies.
    const auto K = rp2_six();
    REQUIRE_FALSE(is_gorenstein_star(K, GF2{}));
    REQUIRE_FALSE(is_gorenstein_star(K, RationalQ{}));
    REQUIRE_FALSE(is_gorenstein_star(K, PrimeField(3)));
  }

  SECTION("fullerene dual is a sphere in every characteristic") {
    const auto dual = load_polytope(data("dodecahedron_poly.json")).dual_complex();
    REQUIRE(is_gorenstein_star(dual, GF2{}));
    REQUIRE(is_gorenstein_star(dual, PrimeField(5)));
  }
}
