#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mapipro {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or schema-violating input document.
class ParseError : public Error {
public:
  using Error::Error;
};

/// A constructed value violates a model invariant or guard.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// No assignment satisfies the capacity constraints.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

/// Illegal evaluation request (backup region as placement target,
/// undefined progress, arithmetic overflow).
class ModelError : public Error {
public:
  using Error::Error;
};

inline u64 checked_add(u64 a, u64 b, const char* what = "cycle count") {
  u64 r;
  if (__builtin_add_overflow(a, b, &r))
    throw ModelError(std::string("arithmetic overflow in ") + what);
  return r;
}

inline u64 checked_mul(u64 a, u64 b, const char* what = "cycle count") {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r))
    throw ModelError(std::string("arithmetic overflow in ") + what);
  return r;
}

inline u128 checked_add128(u128 a, u128 b, const char* what = "energy total") {
  u128 r = a + b;
  if (r < a) throw ModelError(std::string("arithmetic overflow in ") + what);
  return r;
}

inline u128 checked_mul128(u128 a, u128 b, const char* what = "energy total") {
  if (a == 0 || b == 0) return 0;
  u128 r = a * b;
  if (r / a != b) throw ModelError(std::string("arithmetic overflow in ") + what);
  return r;
}

std::string to_decimal(u128 value);
double to_double(u128 value);

/// 256-bit unsigned product, little-endian limbs. Only what exact
/// objective comparison needs: u128 * u64 * u64 and ordering.
struct Wide256 {
  std::array<u64, 4> limb{};
};

Wide256 wide_mul(u128 a, u64 b, u64 c);
int wide_cmp(const Wide256& a, const Wide256& b);

/// Exact EDP value stable_edp * num_cycles / den_cycles.
///
/// Stable (failure-free) EDP totals are exact integers; the power-failure
/// scaling factor is a ratio of cycle counts. Keeping the three parts
/// separate lets two objectives be ordered by 256-bit cross multiplication
/// with no rounding anywhere in solver control flow.
struct ScaledEdp {
  u128 stable_edp = 0;
  u64 num_cycles = 1;
  u64 den_cycles = 1;

  static ScaledEdp unscaled(u128 edp) { return ScaledEdp{edp, 1, 1}; }

  bool is_integral() const {
    return num_cycles == den_cycles ||
           (den_cycles != 0 && (stable_edp * num_cycles) % den_cycles == 0);
  }

  double value() const;
  std::string describe() const;
};

/// Three-way ordering of exact EDP values; negative when a < b.
int compare(const ScaledEdp& a, const ScaledEdp& b);

inline bool operator==(const ScaledEdp& a, const ScaledEdp& b) {
  return compare(a, b) == 0;
}
inline bool operator<(const ScaledEdp& a, const ScaledEdp& b) {
  return compare(a, b) < 0;
}
inline bool operator<=(const ScaledEdp& a, const ScaledEdp& b) {
  return compare(a, b) <= 0;
}

}  // namespace mapipro
