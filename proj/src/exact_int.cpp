#include "mapipro/exact_int.hpp"

#include <algorithm>

namespace mapipro {

std::string to_decimal(u128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double to_double(u128 value) {
  // Split so the high half does not lose the low bits' magnitude.
  const double hi = static_cast<double>(static_cast<u64>(value >> 64));
  const double lo = static_cast<double>(static_cast<u64>(value));
  return hi * 18446744073709551616.0 + lo;
}

Wide256 wide_mul(u128 a, u64 b, u64 c) {
  const u64 a0 = static_cast<u64>(a);
  const u64 a1 = static_cast<u64>(a >> 64);

  // a * b fits in 192 bits: three limbs.
  u128 r0 = static_cast<u128>(a0) * b;
  u128 r1 = static_cast<u128>(a1) * b + static_cast<u64>(r0 >> 64);
  u64 t0 = static_cast<u64>(r0);
  u64 t1 = static_cast<u64>(r1);
  u64 t2 = static_cast<u64>(r1 >> 64);

  // (t2:t1:t0) * c fits in 256 bits: four limbs.
  Wide256 out;
  u128 p = static_cast<u128>(t0) * c;
  out.limb[0] = static_cast<u64>(p);
  u128 carry = p >> 64;
  p = static_cast<u128>(t1) * c + carry;
  out.limb[1] = static_cast<u64>(p);
  carry = p >> 64;
  p = static_cast<u128>(t2) * c + carry;
  out.limb[2] = static_cast<u64>(p);
  out.limb[3] = static_cast<u64>(p >> 64);
  return out;
}

int wide_cmp(const Wide256& a, const Wide256& b) {
  for (int i = 3; i >= 0; --i) {
    if (a.limb[i] != b.limb[i]) return a.limb[i] < b.limb[i] ? -1 : 1;
  }
  return 0;
}

double ScaledEdp::value() const {
  if (den_cycles == 0) throw ModelError("EDP scale factor has zero denominator");
  return to_double(stable_edp) * (static_cast<double>(num_cycles) /
                                  static_cast<double>(den_cycles));
}

std::string ScaledEdp::describe() const {
  std::string s = to_decimal(stable_edp);
  if (num_cycles != den_cycles) {
    s += " * " + std::to_string(num_cycles) + "/" + std::to_string(den_cycles);
  }
  return s;
}

int compare(const ScaledEdp& a, const ScaledEdp& b) {
  if (a.den_cycles == 0 || b.den_cycles == 0)
    throw ModelError("EDP scale factor has zero denominator");
  const Wide256 lhs = wide_mul(a.stable_edp, a.num_cycles, b.den_cycles);
  const Wide256 rhs = wide_mul(b.stable_edp, b.num_cycles, a.den_cycles);
  return wide_cmp(lhs, rhs);
}

}  // namespace mapipro
