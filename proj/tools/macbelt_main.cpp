// Command-line front end: file ingestion, corpus commands, JSON reporting.
//
// Exit codes: 0 success, 1 precondition failure (diagnostic on stderr),
// 2 malformed input or usage error.  With --json the report on stdout is
// byte-identical for identical invocations; timing goes to stderr.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "macbelt/io.hpp"
#include "macbelt/polytope.hpp"
#include "macbelt/rigidity.hpp"

using namespace macbelt;
using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// report plumbing
// ---------------------------------------------------------------------------

std::string digest_of(const SimplicialComplex& K) {
  return hex64(fnv1a64(complex_to_json(K).dump()));
}

std::string encoding_digest(const std::vector<std::uint64_t>& enc) {
  return hex64(fnv1a64(std::string_view(reinterpret_cast<const char*>(enc.data()),
                                        enc.size() * sizeof(std::uint64_t))));
}

std::string canonical_digest_of(const SimplicialComplex& K) {
  return encoding_digest(canonical_encoding(K));
}

ojson input_block(const std::string& path, const SimplicialComplex& K) {
  ojson j;
  j["path"] = path;
  j["digest"] = digest_of(K);
  j["canonical_digest"] = canonical_digest_of(K);
  return j;
}

/// Runs fn with the concrete field named by the tag.  fn must be generic in
/// the field type and return the same type for every instantiation.
template <class Fn>
auto with_field(const FieldTag& tag, Fn&& fn) {
  switch (tag.kind) {
    case FieldTag::Kind::F2: return fn(GF2{});
    case FieldTag::Kind::Fp: return fn(PrimeField(tag.p));
    case FieldTag::Kind::Q: return fn(RationalQ{});
  }
  throw MalformedInput("unknown field tag");
}

ojson bigraded_rows(const std::map<std::pair<int, int>, long long>& table) {
  ojson rows = ojson::array();
  for (const auto& [key, dim] : table) {
    ojson r;
    r["s"] = key.first;                   // support cardinality |I|
    r["p"] = key.first + key.second + 1;  // total degree
    r["dim"] = dim;
    rows.push_back(std::move(r));
  }
  return rows;
}

VertexSet mask_of_labels(const SimplicialComplex& K, const std::vector<int>& labels) {
  if (labels.empty()) throw MalformedInput("empty vertex list");
  VertexSet mask = 0;
  for (int v : labels) {
    if (v < 1 || v > K.m()) throw MalformedInput("vertex label out of range: " + std::to_string(v));
    const VertexSet bit = vbit(v - 1);
    if (mask & bit) throw MalformedInput("repeated vertex label: " + std::to_string(v));
    mask |= bit;
  }
  return mask;
}

// ---------------------------------------------------------------------------
// human-readable rendering of a report (the default; --json emits the tree)
// ---------------------------------------------------------------------------

std::string scalar_text(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool all_scalars(const ojson& arr) {
  for (const auto& e : arr)
    if (e.is_object() || e.is_array()) return false;
  return true;
}

void print_inline_array(const ojson& arr) {
  std::cout << '[';
  for (std::size_t i = 0; i < arr.size(); ++i) std::cout << (i ? "," : "") << scalar_text(arr[i]);
  std::cout << ']';
}

void print_human(const ojson& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      std::cout << pad << key << ":\n";
      print_human(value, indent + 2);
    } else if (value.is_array() && !value.empty() && !all_scalars(value)) {
      std::cout << pad << key << ":\n";
      for (const auto& e : value) {
        std::cout << pad << "  -";
        if (e.is_array()) {
          std::cout << ' ';
          print_inline_array(e);
        } else {
          for (const auto& [k2, v2] : e.items()) {
            std::cout << ' ' << k2 << '=';
            if (v2.is_array())
              print_inline_array(v2);
            else
              std::cout << scalar_text(v2);
          }
        }
        std::cout << '\n';
      }
    } else if (value.is_array()) {
      std::cout << pad << key << ": ";
      print_inline_array(value);
      std::cout << '\n';
    } else {
      std::cout << pad << key << ": " << scalar_text(value) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// optional persistence of the subset-cohomology sweep (MACBELT_CACHE_DIR),
// keyed by canonical complex digest and field
// ---------------------------------------------------------------------------

std::optional<std::filesystem::path> cache_root() {
  if (const char* dir = std::getenv("MACBELT_CACHE_DIR"); dir && *dir)
    return std::filesystem::path(dir);
  return std::nullopt;
}

std::string cache_stem(const SimplicialComplex& K, const FieldTag& tag) {
  std::string name = tag.name();
  for (char& c : name)
    if (c == ':') c = '_';
  return canonical_digest_of(K) + "-" + name + ".json";
}

std::optional<BigradedBetti> cache_load(const SimplicialComplex& K, const FieldTag& tag) {
  const auto root = cache_root();
  if (!root) return std::nullopt;
  std::ifstream in(*root / cache_stem(K, tag));
  if (!in) return std::nullopt;
  try {
    const ojson j = ojson::parse(in);
    if (j.at("m").get<int>() != K.m() || j.at("dim").get<int>() != K.dim()) return std::nullopt;
    BigradedBetti B;
    B.m = K.m();
    B.dim = K.dim();
    for (const auto& e : j.at("entries"))
      B.table[{e.at("s").get<int>(), e.at("q").get<int>()}] = e.at("dim").get<long long>();
    return B;
  } catch (...) {
    return std::nullopt;  // unreadable or stale entries are recomputed
  }
}

void cache_store(const SimplicialComplex& K, const FieldTag& tag, const BigradedBetti& B) {
  const auto root = cache_root();
  if (!root) return;
  std::error_code ec;
  std::filesystem::create_directories(*root, ec);
  std::ofstream out(*root / cache_stem(K, tag));
  if (!out) return;
  ojson j;
  j["m"] = B.m;
  j["dim"] = B.dim;
  ojson entries = ojson::array();
  for (const auto& [key, dim] : B.table)
    entries.push_back(ojson{{"s", key.first}, {"q", key.second}, {"dim", dim}});
  j["entries"] = std::move(entries);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// element specs for the invariants command
// ---------------------------------------------------------------------------

struct ElementSpec {
  enum class Kind { MissingFace, Belt, Top } kind = Kind::Top;
  std::vector<int> labels;
};

std::vector<int> parse_label_list(std::string_view body, const std::string& whole) {
  std::vector<int> out;
  int cur = -1;
  for (char c : body) {
    if (c >= '0' && c <= '9') {
      cur = (cur < 0 ? 0 : cur) * 10 + (c - '0');
      if (cur > 1'000'000) throw MalformedInput("bad element spec: " + whole);
    } else if (c == ',') {
      if (cur < 0) throw MalformedInput("bad element spec: " + whole);
      out.push_back(cur);
      cur = -1;
    } else {
      throw MalformedInput("bad element spec: " + whole);
    }
  }
  if (cur < 0) throw MalformedInput("bad element spec: " + whole);
  out.push_back(cur);
  return out;
}

ElementSpec parse_element_spec(const std::string& s) {
  if (s == "top") return {ElementSpec::Kind::Top, {}};
  if (s.rfind("mf:", 0) == 0) return {ElementSpec::Kind::MissingFace, parse_label_list(s.substr(3), s)};
  if (s.rfind("belt:", 0) == 0) return {ElementSpec::Kind::Belt, parse_label_list(s.substr(5), s)};
  throw MalformedInput("bad element spec: " + s + " (expected mf:V,V,..., belt:V,V,..., or top)");
}

// ---------------------------------------------------------------------------
// shared fragments
// ---------------------------------------------------------------------------

std::optional<int> sweep_cap(const SimplicialComplex& K) {
  if (K.m() > detail::kFingerprintSupportCutoff) return 4;
  return std::nullopt;
}

ojson complex_block(const SimplicialComplex& K) {
  ojson j;
  j["m"] = K.m();
  j["dim"] = K.dim();
  j["f_vector"] = K.f_vector();
  j["flag"] = K.is_flag();
  j["closed_2sphere"] = K.is_closed_2sphere();
  j["four_belt"] = has_four_belt(K);
  return j;
}

ojson fingerprint_block(const RigidityFingerprint& fp) {
  ojson j;
  j["m"] = fp.m;
  if (fp.support_cap)
    j["support_cap"] = *fp.support_cap;
  else
    j["support_cap"] = nullptr;
  j["bigraded"] = bigraded_rows(fp.bigraded);
  j["mf_annihilators"] = fp.mf_annihilators;
  ojson recs = ojson::array();
  for (const BeltRecord& r : fp.belt_records) {
    ojson e;
    e["length"] = r.length;
    e["divisor_count"] = r.divisor_count;
    e["link_count"] = r.link_count;
    e["divisor_annihilators"] = r.divisor_annihilators;
    recs.push_back(std::move(e));
  }
  j["belt_records"] = std::move(recs);
  j["rigid_class"] = !fp.reconstruction.empty();
  if (fp.reconstruction.empty())
    j["reconstruction_digest"] = nullptr;
  else
    j["reconstruction_digest"] = encoding_digest(fp.reconstruction);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohomology rings of moment-angle complexes and their rigidity invariants"};
  app.require_subcommand(1);

  bool json_mode = false;
  int threads = 1;
  std::string field_str = "f2";
  std::string path, path2, element_str;
  int belt_min = 3, belt_max = 0;

  auto add_common = [&](CLI::App* sub, bool with_field_opt) {
    sub->add_flag("--json", json_mode, "emit the report as JSON on stdout");
    sub->add_option("--threads", threads, "worker threads for subset sweeps")
        ->check(CLI::Range(1, 256));
    if (with_field_opt)
      sub->add_option("--field", field_str, "coefficient field: f2, q, or fp:P (default f2)");
  };

  std::function<ojson()> run;

  // info ---------------------------------------------------------------------
  auto* info = app.add_subcommand("info", "combinatorial profile of a complex");
  info->add_option("file", path, "complex JSON file")->required();
  add_common(info, false);
  info->callback([&] {
    run = [&]() -> ojson {
      const SimplicialComplex K = load_complex(path);
      ojson j;
      j["command"] = "info";
      j["input"] = input_block(path, K);
      const ojson cb = complex_block(K);
      for (const auto& [k, v] : cb.items()) j[k] = v;
      long long mf_total = 0, mf_edges = 0;
      for (Simplex w : K.missing_faces()) {
        ++mf_total;
        if (card(w) == 2) ++mf_edges;
      }
      j["missing_faces"] = mf_total;
      j["missing_edges"] = mf_edges;
      return j;
    };
  });

  // betti --------------------------------------------------------------------
  auto* betti = app.add_subcommand("betti", "bigraded and total Betti numbers of the ring");
  betti->add_option("file", path, "complex JSON file")->required();
  add_common(betti, true);
  betti->callback([&] {
    run = [&]() -> ojson {
      const SimplicialComplex K = load_complex(path);
      const FieldTag tag = FieldTag::parse(field_str);
      std::optional<BigradedBetti> B = cache_load(K, tag);
      const bool cache_hit = B.has_value();
      if (!B) {
        B = with_field(tag, [&](auto field) { return bigraded_betti(K, field, threads); });
        cache_store(K, tag, *B);
      }
      ojson j;
      j["command"] = "betti";
      j["input"] = input_block(path, K);
      j["field"] = tag.name();
      j["total"] = B->by_total_degree();
      j["bigraded"] = bigraded_rows(B->table);
      if (cache_hit) std::cerr << "cache hit\n";
      return j;
    };
  });

  // belts ----------------------------------------------------------------------
  auto* belts_cmd = app.add_subcommand("belts", "induced cycles of the 1-skeleton by length");
  belts_cmd->add_option("file", path, "complex JSON file")->required();
  belts_cmd->add_option("--min", belt_min, "smallest length to enumerate (default 3)");
  belts_cmd->add_option("--max", belt_max, "largest length to enumerate (default min(m, 8))");
  add_common(belts_cmd, false);
  belts_cmd->callback([&] {
    run = [&]() -> ojson {
      const SimplicialComplex K = load_complex(path);
      const int lo = std::max(3, belt_min);
      const int hi = belt_max > 0 ? std::min(belt_max, K.m()) : std::min(K.m(), 8);
      ojson j;
      j["command"] = "belts";
      j["input"] = input_block(path, K);
      j["four_belt"] = has_four_belt(K);
      ojson by_length = ojson::array();
      for (int n = lo; n <= hi; ++n) {
        const auto found = belts(K, n);
        ojson e;
        e["length"] = n;
        e["count"] = found.size();
        ojson cycles = ojson::array();
        for (const Belt& b : found) cycles.push_back(b.cycle);
        e["cycles"] = std::move(cycles);
        by_length.push_back(std::move(e));
      }
      j["belts"] = std::move(by_length);
      return j;
    };
  });

  // gorenstein --------------------------------------------------------------
  auto* gor = app.add_subcommand("gorenstein", "Gorenstein* test and the ring-level duality check");
  gor->add_option("file", path, "complex JSON file")->required();
  add_common(gor, true);
  gor->callback([&] {
    run = [&]() -> ojson {
      const SimplicialComplex K = load_complex(path);
      const FieldTag tag = FieldTag::parse(field_str);
      ojson j;
      j["command"] = "gorenstein";
      j["input"] = input_block(path, K);
      j["field"] = tag.name();
      return with_field(tag, [&](auto field) {
        const bool gs = is_gorenstein_star(K, field);
        j["gorenstein_star"] = gs;
        if (K.m() <= 24) {
          MacRing<decltype(field)> R(K, field);
          const bool pc = R.poincare_check(threads);
          j["poincare_check"] = pc;
          j["agree"] = (gs == pc);
        } else {
          j["poincare_check"] = nullptr;  // full duality sweep needs m <= 24
          j["agree"] = nullptr;
        }
        return j;
      });
    };
  });

  // invariants ----------------------------------------------------------------
  auto* inv = app.add_subcommand("invariants", "annihilator and divisor profile of one ring class");
  inv->add_option("file", path, "complex JSON file")->required();
  inv->add_option("--element", element_str, "mf:V,V  |  belt:V,V,...  |  top")->required();
  add_common(inv, true);
  inv->callback([&] {
    run = [&]() -> ojson {
      const SimplicialComplex K = load_complex(path);
      const FieldTag tag = FieldTag::parse(field_str);
      const ElementSpec spec = parse_element_spec(element_str);
      ojson j;
      j["command"] = "invariants";
      j["input"] = input_block(path, K);
      j["field"] = tag.name();
      return with_field(tag, [&](auto field) {
        MacRing<decltype(field)> R(K, field);
        BasisKey key{};
        ojson element;
        switch (spec.kind) {
          case ElementSpec::Kind::MissingFace: {
            key = R.missing_face_key(mask_of_labels(K, spec.labels));
            element["kind"] = "missing_face";
            break;
          }
          case ElementSpec::Kind::Belt: {
            const VertexSet mask = mask_of_labels(K, spec.labels);
            if (!is_induced_circle(K, mask))
              throw PreconditionError("the requested vertex set is not a belt");
            key = BasisKey{mask, 1, 0};
            element["kind"] = "belt";
            break;
          }
          case ElementSpec::Kind::Top: {
            key = R.fundamental_key();
            element["kind"] = "top";
            break;
          }
        }
        element["support"] = SimplicialComplex::labels_of(key.I);
        element["q"] = key.q;
        element["degree"] = key.total_degree();
        j["element"] = std::move(element);

        const std::optional<int> cap = sweep_cap(K);
        if (cap)
          j["support_cap"] = *cap;
        else
          j["support_cap"] = nullptr;
        const AnnihilatorReport rep = annihilator_dim(R, R.element_of(key), cap);
        ojson ann;
        ann["total"] = rep.total_dim;
        ojson by_deg = ojson::array();
        for (const auto& [deg, dim] : rep.by_degree)
          by_deg.push_back(ojson{{"degree", deg}, {"dim", dim}});
        ann["by_degree"] = std::move(by_deg);
        j["annihilator"] = std::move(ann);

        if (spec.kind == ElementSpec::Kind::Belt) {
          const auto divisors = detail::circle_divisors(R, key.I);
          ojson divs = ojson::array();
          for (Simplex w : divisors) divs.push_back(SimplicialComplex::labels_of(w));
          const long long n = card(key.I);
          j["belt_divisors"] = std::move(divs);
          j["belt_divisor_count"] = divisors.size();
          j["belt_divisor_expected"] = n * (n - 1) / 2 - n;
          j["belt_divisor_check"] =
              static_cast<long long>(divisors.size()) == n * (n - 1) / 2 - n;
        }
        return j;
      });
    };
  });

  // rigidity -----------------------------------------------------------------
  auto* rig = app.add_subcommand("rigidity", "full fingerprint: dimensions, annihilators, belt records");
  rig->add_option("file", path, "complex JSON file")->required();
  add_common(rig, true);
  rig->callback([&] {
    run = [&]() -> ojson {
      const SimplicialComplex K = load_complex(path);
      const FieldTag tag = FieldTag::parse(field_str);
      ojson j;
      j["command"] = "rigidity";
      j["input"] = input_block(path, K);
      j["field"] = tag.name();
      const ojson fp = with_field(
          tag, [&](auto field) { return fingerprint_block(fingerprint(K, field)); });
      for (const auto& [k, v] : fp.items()) j[k] = v;
      return j;
    };
  });

  // reconstruct ----------------------------------------------------------------
  auto* rec = app.add_subcommand("reconstruct", "rebuild the complex from its ring");
  rec->add_option("file", path, "complex JSON file")->required();
  add_common(rec, true);
  rec->callback([&] {
    run = [&]() -> ojson {
      const SimplicialComplex K = load_complex(path);
      const FieldTag tag = FieldTag::parse(field_str);
      ojson j;
      j["command"] = "reconstruct";
      j["input"] = input_block(path, K);
      j["field"] = tag.name();
      return with_field(tag, [&](auto field) {
        MacRing<decltype(field)> R(K, field);
        const SimplicialComplex rebuilt = reconstruct(R);
        j["result"] = complex_to_json(rebuilt);
        j["isomorphic_to_input"] = are_isomorphic(rebuilt, K);
        return j;
      });
    };
  });

  // compare -------------------------------------------------------------------
  auto* cmp = app.add_subcommand("compare", "fingerprint comparison of two complexes");
  cmp->add_option("file1", path, "first complex JSON file")->required();
  cmp->add_option("file2", path2, "second complex JSON file")->required();
  add_common(cmp, true);
  cmp->callback([&] {
    run = [&]() -> ojson {
      const SimplicialComplex K1 = load_complex(path);
      const SimplicialComplex K2 = load_complex(path2);
      const FieldTag tag = FieldTag::parse(field_str);
      ojson j;
      j["command"] = "compare";
      ojson inputs = ojson::array();
      inputs.push_back(input_block(path, K1));
      inputs.push_back(input_block(path2, K2));
      j["inputs"] = std::move(inputs);
      j["field"] = tag.name();
      const CompareReport rep =
          with_field(tag, [&](auto field) { return compare(K1, K2, field); });
      switch (rep.verdict) {
        case CompareVerdict::Equivalent: j["verdict"] = "equivalent"; break;
        case CompareVerdict::Distinguished: j["verdict"] = "distinguished"; break;
        case CompareVerdict::Inconclusive: j["verdict"] = "inconclusive"; break;
      }
      if (rep.witness.empty())
        j["witness"] = nullptr;
      else
        j["witness"] = rep.witness;
      return j;
    };
  });

  // fullerene -------------------------------------------------------------------
  auto* ful = app.add_subcommand("fullerene", "dualize a simple 3-polytope and fingerprint the dual");
  ful->add_option("file", path, "polytope JSON file")->required();
  add_common(ful, true);
  ful->callback([&] {
    run = [&]() -> ojson {
      const SimplePolytope3 P = load_polytope(path);
      const FieldTag tag = FieldTag::parse(field_str);
      const SimplicialComplex dual = P.dual_complex();
      ojson j;
      j["command"] = "fullerene";
      j["input"] = ojson{{"path", path}};
      ojson poly;
      poly["facets"] = P.facet_count();
      poly["vertices"] = P.vertex_count();
      poly["edges"] = P.edge_count();
      ojson sizes = ojson::array();
      for (const auto& [size, count] : P.facet_size_profile())
        sizes.push_back(ojson{{"size", size}, {"count", count}});
      poly["facet_sizes"] = std::move(sizes);
      poly["fullerene"] = P.is_fullerene();
      j["polytope"] = std::move(poly);
      ojson dual_j = complex_block(dual);
      dual_j["digest"] = digest_of(dual);
      dual_j["canonical_digest"] = canonical_digest_of(dual);
      j["dual"] = std::move(dual_j);
      const bool rigid_class =
          dual.is_closed_2sphere() && dual.is_flag() && !has_four_belt(dual);
      j["b_rigid_class"] = rigid_class;
      j["field"] = tag.name();
      j["fingerprint"] = with_field(
          tag, [&](auto field) { return fingerprint_block(fingerprint(dual, field)); });
      return j;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const ojson report = run();
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    std::cerr << "elapsed_ms=" << ms.count() << '\n';
    if (json_mode)
      std::cout << report.dump(2) << '\n';
    else
      print_human(report, 0);
    return 0;
  } catch (const MalformedInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << '\n';
    return 1;
  } catch (const ProcedureFailure& e) {
    std::cerr << "internal failure: " << e.what() << '\n';
    return 1;
  }
}
