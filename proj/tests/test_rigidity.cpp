#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "macbelt/io.hpp"
#include "macbelt/polytope.hpp"
#include "macbelt/rigidity.hpp"

using namespace macbelt;

namespace {

std::string data(const char* name) { return std::string(MACBELT_DATA_DIR) + "/" + name; }

std::vector<int> random_permutation(int m, std::mt19937& gen) {
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 1);
  std::shuffle(perm.begin(), perm.end(), gen);
  return perm;
}

const Belt& belt_on(const std::vector<Belt>& all, VertexSet support) {
  for (const Belt& b : all)
    if (b.support == support) return b;
  FAIL("no belt with the requested support");
  return all.front();
}

/// Vertex pairs inside `inside` that are not edges of K.
std::set<Simplex> missing_pairs_within(const SimplicialComplex& K, VertexSet inside) {
  std::set<Simplex> out;
  for (int a = 1; a <= K.m(); ++a)
    for (int b = a + 1; b <= K.m(); ++b) {
      const Simplex p = vbit(a - 1) | vbit(b - 1);
      if ((p & inside) == p && !K.has_face(p)) out.insert(p);
    }
  return out;
}

}  // namespace

TEST_CASE("belt classes validate their input", "[rigidity]") {
  const auto K = load_complex(data("icosahedron.json"));
  MacRing<GF2> R(K, GF2{});
  const auto fives = belts(K, 5);
  REQUIRE_FALSE(fives.empty());

  const RingElement<GF2> c = belt_class(R, fives.front());
  REQUIRE(c.terms().size() == 1);
  REQUIRE(c.terms().begin()->first == BasisKey{fives.front().support, 1, 0});

  Belt broken = fives.front();
  broken.support &= broken.support - 1;  // drop the lowest vertex
  REQUIRE_THROWS_AS(belt_class(R, broken), PreconditionError);

  Belt stretched = fives.front();
  for (int v = 1; v <= K.m(); ++v)
    if (!(stretched.support & vbit(v - 1))) {
      stretched.support |= vbit(v - 1);  // support no longer an induced circle
      break;
    }
  REQUIRE_THROWS_AS(belt_class(R, stretched), PreconditionError);
}

TEST_CASE("belt divisor counts", "[rigidity]") {
  SECTION("icosahedron vertex links have five diagonal divisors") {
    const auto K = load_complex(data("icosahedron.json"));
    MacRing<GF2> R(K, GF2{});
    const auto fives = belts(K, 5);
    for (int v = 1; v <= K.m(); ++v) {
      const Belt& B = belt_on(fives, K.neighbors(v));
      REQUIRE(belt_divisor_check(R, B));
      REQUIRE(detail::circle_divisors(R, B.support).size() == 5);
    }
  }

  SECTION("octahedron equatorial squares have two diagonal divisors") {
    const auto K = load_complex(data("octahedron.json"));
    MacRing<GF2> R(K, GF2{});
    const auto fours = belts(K, 4);
    REQUIRE(fours.size() == 3);
    for (const Belt& B : fours) {
      REQUIRE(belt_divisor_check(R, B));
      REQUIRE(detail::circle_divisors(R, B.support).size() == 2);
    }
  }

  SECTION("circle complexes are their own belt") {
    for (const char* name : {"pentagon.json", "hexagon.json"}) {
      INFO(name);
      const auto K = load_complex(data(name));
      MacRing<GF2> R(K, GF2{});
      const auto all = belts(K, K.m());
      REQUIRE(all.size() == 1);
      REQUIRE(belt_divisor_check(R, all.front()));
      const long long n = K.m();
      REQUIRE(static_cast<long long>(detail::circle_divisors(R, all.front().support).size()) ==
              n * (n - 1) / 2 - n);
    }
  }
}

TEST_CASE("link detection counts the outside classes on the icosahedron", "[rigidity]") {
  const auto K = load_complex(data("icosahedron.json"));
  MacRing<GF2> R(K, GF2{});
  const auto fives = belts(K, 5);

  for (int v = 1; v <= K.m(); ++v) {
    INFO("vertex " << v);
    const Belt& B = belt_on(fives, K.neighbors(v));
    const LinkDetectionRecord rec = link_detection(R, B);
    REQUIRE(rec.count == K.m() - 5 - 1);
    REQUIRE(rec.is_link);
    REQUIRE(rec.combinatorial_link);
    std::vector<int> expected;
    for (int w = 1; w <= K.m(); ++w)
      if (w != v && !(B.support & vbit(w - 1))) expected.push_back(w);
    REQUIRE(rec.passing == expected);
  }
}

TEST_CASE("link detection agrees with combinatorial truth on every short belt", "[rigidity]") {
  const auto K = load_complex(data("icosahedron.json"));
  MacRing<GF2> R(K, GF2{});
  int links_seen = 0;
  for (int n : {5, 6})
    for (const Belt& B : belts(K, n)) {
      const LinkDetectionRecord rec = link_detection(R, B);
      REQUIRE(rec.is_link == rec.combinatorial_link);
      links_seen += rec.is_link ? 1 : 0;
    }
  REQUIRE(links_seen == K.m());  // every vertex link shows up exactly once
}

TEST_CASE("link detection preconditions", "[rigidity]") {
  const auto oct = load_complex(data("octahedron.json"));
  MacRing<GF2> Ro(oct, GF2{});
  REQUIRE_THROWS_AS(link_detection(Ro, belts(oct, 4).front()), PreconditionError);

  const auto ico = load_complex(data("icosahedron.json"));
  MacRing<GF2> Ri(ico, GF2{});
  Belt broken = belts(ico, 5).front();
  broken.support &= broken.support - 1;
  REQUIRE_THROWS_AS(link_detection(Ri, broken), PreconditionError);
}

TEST_CASE("ring adjacency matches the 1-skeleton on the icosahedron", "[rigidity]") {
  const auto K = load_complex(data("icosahedron.json"));
  MacRing<GF2> R(K, GF2{});
  int edges = 0;
  for (int a = 1; a <= K.m(); ++a)
    for (int b = a + 1; b <= K.m(); ++b) {
      const bool expected = K.has_face(vbit(a - 1) | vbit(b - 1));
      INFO("pair " << a << "," << b);
      REQUIRE(adjacency_from_ring(R, a, b) == expected);
      edges += expected ? 1 : 0;
    }
  REQUIRE(edges == 30);

  REQUIRE_THROWS_AS(adjacency_from_ring(R, 3, 3), PreconditionError);
  REQUIRE_THROWS_AS(adjacency_from_ring(R, 0, 5), PreconditionError);

  const auto oct = load_complex(data("octahedron.json"));
  MacRing<GF2> Ro(oct, GF2{});
  REQUIRE_THROWS_AS(adjacency_from_ring(Ro, 1, 2), PreconditionError);
}

TEST_CASE("ring adjacency spot checks on the large fullerene dual", "[rigidity]") {
  const auto K = load_polytope(data("c60_poly.json")).dual_complex();
  MacRing<GF2> R(K, GF2{});
  for (int a = 1; a <= 8; ++a)
    for (int b = a + 1; b <= 8; ++b) {
      const bool expected = K.has_face(vbit(a - 1) | vbit(b - 1));
      INFO("pair " << a << "," << b);
      REQUIRE(adjacency_from_ring(R, a, b) == expected);
    }
}

TEST_CASE("reconstruction recovers the icosahedron", "[rigidity]") {
  const auto K = load_complex(data("icosahedron.json"));
  MacRing<GF2> R(K, GF2{});
  const SimplicialComplex rebuilt = reconstruct(R);
  REQUIRE(rebuilt.m() == K.m());
  REQUIRE(are_isomorphic(rebuilt, K));

  std::mt19937 gen(20240812);
  for (int trial = 0; trial < 3; ++trial) {
    const auto perm = random_permutation(K.m(), gen);
    const SimplicialComplex Kp = relabel(K, perm);
    MacRing<GF2> Rp(Kp, GF2{});
    REQUIRE(are_isomorphic(reconstruct(Rp), K));
  }
}

TEST_CASE("reconstruction recovers the dodecahedron dual", "[rigidity]") {
  const auto K = load_polytope(data("dodecahedron_poly.json")).dual_complex();
  REQUIRE(K.m() == 12);
  MacRing<GF2> R(K, GF2{});
  REQUIRE(are_isomorphic(reconstruct(R), K));
  //  ... which is nothing but the icosahedron again.
  REQUIRE(are_isomorphic(K, load_complex(data("icosahedron.json"))));
}

TEST_CASE("reconstruction preconditions", "[rigidity]") {
  const auto oct = load_complex(data("octahedron.json"));
  MacRing<GF2> Ro(oct, GF2{});
  REQUIRE_THROWS_AS(reconstruct(Ro), PreconditionError);  // has 4-belts

  const auto disk = load_complex(data("disk.json"));
  MacRing<GF2> Rd(disk, GF2{});
  REQUIRE_THROWS_AS(reconstruct(Rd), PreconditionError);  // not a sphere

  const auto ico = load_complex(data("icosahedron.json"));
  MacRing<RationalQ> Rq(ico, RationalQ{});
  REQUIRE_THROWS_AS(reconstruct(Rq), PreconditionError);  // needs a finite field
}

TEST_CASE("annihilator separation on the icosahedron", "[rigidity]") {
  const auto K = load_complex(data("icosahedron.json"));
  MacRing<GF2> R(K, GF2{});
  std::vector<Simplex> mf;
  for (Simplex w : K.missing_faces())
    if (card(w) == 2) mf.push_back(w);
  REQUIRE(mf.size() == 36);

  const SeparationReport pair = check_annihilator_separation(R, {mf[0], mf[1]});
  REQUIRE(pair.separated);
  REQUIRE(pair.single_dims.size() == 2);
  for (long long d : pair.single_dims) REQUIRE(d > pair.combined_dim);

  const SeparationReport triple = check_annihilator_separation(R, {mf[3], mf[10], mf[20]});
  REQUIRE(triple.separated);

  REQUIRE_THROWS_AS(check_annihilator_separation(R, {mf[0]}), PreconditionError);
  REQUIRE_THROWS_AS(check_annihilator_separation(R, {mf[0], mf[0]}), PreconditionError);

  const auto oct = load_complex(data("octahedron.json"));
  MacRing<GF2> Ro(oct, GF2{});
  const auto omf = oct.missing_faces();
  REQUIRE_THROWS_AS(check_annihilator_separation(Ro, {omf[0], omf[1]}), PreconditionError);
}

TEST_CASE("edge lower bound", "[rigidity]") {
  struct Expect {
    const char* name;
    bool from_polytope;
    long long f1;
  };
  // All three 2-spheres meet the bound with equality: f1 == 3m - 6.
  for (const Expect& e : {Expect{"icosahedron.json", false, 30}, Expect{"octahedron.json", false, 12},
                          Expect{"c60_poly.json", true, 90}}) {
    INFO(e.name);
    const SimplicialComplex K =
        e.from_polytope ? load_polytope(data(e.name)).dual_complex() : load_complex(data(e.name));
    REQUIRE(lbt_check(K));
    const auto f = K.f_vector();
    REQUIRE(f[1] == e.f1);
    REQUIRE(f[1] == 3LL * K.m() - 6);
  }

  // Boundary of the 3-simplex: 6 = 4*3 - 6, equality as well.
  const auto tet = load_polytope(data("tetrahedron_poly.json")).dual_complex();
  REQUIRE(lbt_check(tet));
  REQUIRE(tet.f_vector()[1] == 3LL * tet.m() - 6);

  REQUIRE_THROWS_AS(lbt_check(load_complex(data("disk.json"))), PreconditionError);
  REQUIRE_THROWS_AS(lbt_check(load_complex(data("path.json"))), PreconditionError);
}

TEST_CASE("overlapping belts share the predicted missing faces", "[rigidity]") {
  // Whenever a belt has all but one of its vertices inside another belt,
  // the two full subcomplexes share exactly C(l,2) - 2l + 3 missing faces,
  // where l is the length of the almost-contained belt.
  int found = 0;
  for (const char* name : {"icosahedron.json"}) {
    const auto K = load_complex(data(name));
    std::vector<Belt> all;
    for (int n : {5, 6})
      for (const Belt& b : belts(K, n)) all.push_back(b);
    for (const Belt& Bl : all)
      for (const Belt& Bn : all) {
        if (Bl.support == Bn.support) continue;
        if (card(Bl.support & ~Bn.support) != 1) continue;
        const long long l = Bl.length();
        const auto shared = missing_pairs_within(K, Bl.support & Bn.support);
        INFO(name << ": belt pair with supports " << Bl.support << " and " << Bn.support);
        REQUIRE(static_cast<long long>(shared.size()) == l * (l - 1) / 2 - 2 * l + 3);
        ++found;
      }
  }
  REQUIRE(found > 0);
}

TEST_CASE("fingerprints are invariant under relabeling", "[rigidity]") {
  std::mt19937 gen(20240813);
  for (const char* name : {"square.json", "pentagon.json", "octahedron.json", "wedge.json"}) {
    INFO(name);
    const auto K = load_complex(data(name));
    const RigidityFingerprint fp = fingerprint(K, GF2{});
    for (int trial = 0; trial < 3; ++trial) {
      const auto perm = random_permutation(K.m(), gen);
      REQUIRE(fingerprint(relabel(K, perm), GF2{}) == fp);
    }
  }

  const auto ico = load_complex(data("icosahedron.json"));
  const RigidityFingerprint fp = fingerprint(ico, GF2{});
  for (int trial = 0; trial < 2; ++trial) {
    const auto perm = random_permutation(ico.m(), gen);
    REQUIRE(fingerprint(relabel(ico, perm), GF2{}) == fp);
  }

  SECTION("over a three-element field as well") {
    const auto K = load_complex(data("pentagon.json"));
    const auto fp3 = fingerprint(K, PrimeField(3));
    const auto perm = random_permutation(K.m(), gen);
    REQUIRE(fingerprint(relabel(K, perm), PrimeField(3)) == fp3);
  }
}

TEST_CASE("fingerprint structure", "[rigidity]") {
  const auto ico = load_complex(data("icosahedron.json"));
  const RigidityFingerprint fp = fingerprint(ico, GF2{});
  REQUIRE(fp.m == 12);
  REQUIRE_FALSE(fp.support_cap.has_value());
  REQUIRE(fp.mf_annihilators.size() == 36);
  // Non-edges split into two symmetry classes: 30 distance-2 pairs and 6
  // antipodal pairs, each class with its own annihilator dimension.
  const long long low = fp.mf_annihilators.front();
  const long long high = fp.mf_annihilators.back();
  REQUIRE(low < high);
  REQUIRE(std::count(fp.mf_annihilators.begin(), fp.mf_annihilators.end(), low) == 30);
  REQUIRE(std::count(fp.mf_annihilators.begin(), fp.mf_annihilators.end(), high) == 6);
  {
    MacRing<GF2> R(ico, GF2{});
    for (Simplex w : ico.missing_faces()) {
      if (card(w) != 2) continue;
      int a = 0, b = 0;
      for (int v = 1; v <= ico.m(); ++v)
        if (w & vbit(v - 1)) (a ? b : a) = v;
      const bool antipodal = (ico.neighbors(a) & ico.neighbors(b)) == 0;
      const long long dim = annihilator_dim(R, R.element_of(R.missing_face_key(w))).total_dim;
      REQUIRE(dim == (antipodal ? high : low));
    }
  }
  REQUIRE_FALSE(fp.reconstruction.empty());
  int link_records = 0;
  for (const BeltRecord& r : fp.belt_records)
    if (r.length == 5 && r.divisor_count == 5 && r.link_count == 6) ++link_records;
  REQUIRE(link_records >= 12);

  const RigidityFingerprint oct = fingerprint(load_complex(data("octahedron.json")), GF2{});
  REQUIRE(oct.reconstruction.empty());  // 4-belts exclude it from the rigid class
  REQUIRE(oct.belt_records.size() == 3);
  for (const BeltRecord& r : oct.belt_records) {
    REQUIRE(r.length == 4);
    REQUIRE(r.divisor_count == 2);
  }

  const RigidityFingerprint sq = fingerprint(load_complex(data("square.json")), GF2{});
  REQUIRE(sq.reconstruction.empty());  // not a 2-sphere

  REQUIRE_THROWS_AS(fingerprint(ico, RationalQ{}), PreconditionError);
}

TEST_CASE("fingerprint comparison verdicts", "[rigidity]") {
  std::mt19937 gen(20240814);

  const auto pentagon = load_complex(data("pentagon.json"));
  const auto hexagon = load_complex(data("hexagon.json"));
  const CompareReport counts = compare(pentagon, hexagon, GF2{});
  REQUIRE(counts.verdict == CompareVerdict::Distinguished);
  REQUIRE(counts.witness == "vertex count");

  const auto oct = load_complex(data("octahedron.json"));
  const CompareReport table = compare(oct, hexagon, GF2{});
  REQUIRE(table.verdict == CompareVerdict::Distinguished);
  REQUIRE(table.witness == "bigraded Betti table");

  const auto path = load_complex(data("path.json"));
  const CompareReport open = compare(path, relabel(path, random_permutation(path.m(), gen)), GF2{});
  REQUIRE(open.verdict == CompareVerdict::Inconclusive);
  REQUIRE(open.witness.empty());

  const auto ico = load_complex(data("icosahedron.json"));
  const CompareReport same = compare(ico, relabel(ico, random_permutation(ico.m(), gen)), GF2{});
  REQUIRE(same.verdict == CompareVerdict::Equivalent);
}

TEST_CASE("reconstruction recovers the large fullerene dual", "[rigidity]") {
  const auto K = load_polytope(data("c60_poly.json")).dual_complex();
  REQUIRE(K.m() == 32);
  MacRing<GF2> R(K, GF2{});
  REQUIRE(are_isomorphic(reconstruct(R), K));
}
