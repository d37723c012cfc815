#ifndef MACBELT_IO_HPP
#define MACBELT_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "macbelt/errors.hpp"
#include "macbelt/polytope.hpp"
#include "macbelt/simplicial_complex.hpp"

namespace macbelt {

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

namespace detail {

inline std::vector<std::vector<int>> facet_lists(const nlohmann::json& j, const std::string& path) {
  if (!j.contains("facets") || !j["facets"].is_array())
    throw MalformedInput(path + ": expected a \"facets\" array");
  std::vector<std::vector<int>> out;
  for (const auto& facet : j["facets"]) {
    if (!facet.is_array()) throw MalformedInput(path + ": each facet must be an array");
    std::vector<int> labels;
    for (const auto& v : facet) {
      if (!v.is_number_integer()) throw MalformedInput(path + ": vertex labels must be integers");
      labels.push_back(v.get<int>());
    }
    out.push_back(std::move(labels));
  }
  return out;
}

}  // namespace detail

/// Loads {"m": <int>, "facets": [[labels...], ...]}.
inline SimplicialComplex load_complex(const std::string& path) {
  const auto j = read_json_file(path);
  if (!j.contains("m") || !j["m"].is_number_integer())
    throw MalformedInput(path + ": expected an integer \"m\"");
  try {
    return SimplicialComplex::from_facets(j["m"].get<int>(), detail::facet_lists(j, path));
  } catch (const MalformedInput& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

/// Loads {"facets": [[labels in cyclic order...], ...]}.
inline SimplePolytope3 load_polytope(const std::string& path) {
  const auto j = read_json_file(path);
  try {
    return SimplePolytope3::from_facets(detail::facet_lists(j, path));
  } catch (const MalformedInput& e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

inline nlohmann::json complex_to_json(const SimplicialComplex& K) {
  nlohmann::json j;
  j["m"] = K.m();
  auto facets = nlohmann::json::array();
  for (Simplex s : K.facets())
    if (s != 0) facets.push_back(SimplicialComplex::labels_of(s));
  j["facets"] = facets;
  return j;
}

/// FNV-1a, 64-bit.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace macbelt

#endif  // MACBELT_IO_HPP
