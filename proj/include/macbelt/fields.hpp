#ifndef MACBELT_FIELDS_HPP
#define MACBELT_FIELDS_HPP

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "macbelt/errors.hpp"

namespace macbelt {

/// Runtime description of a coefficient field: F2, a prime field Fp with
/// p < 2^16, or the rationals.  Used at API boundaries (CLI, caching); the
/// templated numerics dispatch to one of the concrete field types below.
struct FieldTag {
  enum class Kind { F2, Fp, Q };
  Kind kind = Kind::F2;
  std::uint32_t p = 2;

  static FieldTag f2() { return {Kind::F2, 2}; }
  static FieldTag fp(std::uint32_t prime) { return {Kind::Fp, prime}; }
  static FieldTag q() { return {Kind::Q, 0}; }

  std::string name() const {
    switch (kind) {
      case Kind::F2: return "f2";
      case Kind::Q: return "q";
      case Kind::Fp: return "fp:" + std::to_string(p);
    }
    return "?";
  }

  /// Parses "f2", "q", or "fp:P"; throws MalformedInput otherwise.
  static FieldTag parse(const std::string& s);

  friend bool operator==(const FieldTag& a, const FieldTag& b) {
    return a.kind == b.kind && (a.kind != Kind::Fp || a.p == b.p);
  }
};

inline bool is_prime_u32(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline FieldTag FieldTag::parse(const std::string& s) {
  if (s == "f2") return f2();
  if (s == "q") return q();
  if (s.rfind("fp:", 0) == 0) {
    std::uint64_t p = 0;
    for (char c : s.substr(3)) {
      if (c < '0' || c > '9') throw MalformedInput("bad field spec: " + s);
      p = p * 10 + static_cast<std::uint64_t>(c - '0');
      if (p >= (1u << 16)) throw MalformedInput("field characteristic too large: " + s);
    }
    if (!is_prime_u32(p)) throw MalformedInput("field characteristic not prime: " + s);
    return fp(static_cast<std::uint32_t>(p));
  }
  throw MalformedInput("unknown field: " + s + " (expected f2, q, or fp:P)");
}

/// The two-element field.  Linear algebra over GF2 uses the packed bit-matrix
/// specialisation; the scalar interface below exists so generic ring code can
/// stay field-agnostic.
struct GF2 {
  using Value = std::uint8_t;
  static constexpr bool enumerable = true;

  Value zero() const { return 0; }
  Value one() const { return 1; }
  Value add(Value a, Value b) const { return a ^ b; }
  Value sub(Value a, Value b) const { return a ^ b; }
  Value neg(Value a) const { return a; }
  Value mul(Value a, Value b) const { return a & b; }
  Value inv(Value) const { return 1; }
  bool is_zero(Value a) const { return a == 0; }
  Value from_int(long long n) const { return static_cast<Value>(n & 1); }
  std::uint64_t order() const { return 2; }
  FieldTag tag() const { return FieldTag::f2(); }
};

/// Prime field Fp for an odd prime (or 2) below 2^16; elements are canonical
/// representatives in [0, p).
class PrimeField {
 public:
  using Value = std::uint32_t;
  static constexpr bool enumerable = true;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p >= (1u << 16) || !is_prime_u32(p))
      throw MalformedInput("field characteristic must be a prime below 2^16");
  }

  Value zero() const { return 0; }
  Value one() const { return 1 % p_; }
  Value add(Value a, Value b) const {
    Value s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Value sub(Value a, Value b) const { return a >= b ? a - b : a + p_ - b; }
  Value neg(Value a) const { return a == 0 ? 0 : p_ - a; }
  Value mul(Value a, Value b) const {
    return static_cast<Value>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Value inv(Value a) const { return pow(a, p_ - 2); }
  bool is_zero(Value a) const { return a == 0; }
  Value from_int(long long n) const {
    long long r = n % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return static_cast<Value>(r);
  }
  std::uint64_t order() const { return p_; }
  std::uint32_t characteristic() const { return p_; }
  FieldTag tag() const { return FieldTag::fp(p_); }

 private:
  Value pow(Value a, std::uint32_t e) const {
    std::uint64_t base = a, acc = 1;
    while (e) {
      if (e & 1) acc = acc * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<Value>(acc);
  }

  std::uint32_t p_;
};

/// Exact rational arithmetic.
struct RationalQ {
  using Value = boost::multiprecision::cpp_rational;
  static constexpr bool enumerable = false;

  Value zero() const { return Value(0); }
  Value one() const { return Value(1); }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value neg(const Value& a) const { return -a; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value inv(const Value& a) const { return 1 / a; }
  bool is_zero(const Value& a) const { return a == 0; }
  Value from_int(long long n) const { return Value(n); }
  std::uint64_t order() const { return 0; }  // infinite
  FieldTag tag() const { return FieldTag::q(); }
};

}  // namespace macbelt

#endif  // MACBELT_FIELDS_HPP
