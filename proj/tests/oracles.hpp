#pragma once

// Brute-force reference computations used only by tests.

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

inline std::optional<long> exact_sqrt(long v) {
  if (v < 0) return std::nullopt;
  long r = static_cast<long>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  if (r * r != v) return std::nullopt;
  return r;
}

// First positive solution of a^2 - e b^2 = t found by scanning b = 1..bmax.
inline std::optional<std::pair<long, long>> pell_scan(long e, long t, long bmax) {
  for (long b = 1; b <= bmax; ++b) {
    if (auto a = exact_sqrt(e * b * b + t); a && *a > 0) return std::make_pair(*a, b);
  }
  return std::nullopt;
}

// All positive solutions with b <= bmax.
inline std::vector<std::pair<long, long>> pell_scan_all(long e, long t, long bmax) {
  std::vector<std::pair<long, long>> out;
  for (long b = 1; b <= bmax; ++b) {
    if (auto a = exact_sqrt(e * b * b + t); a && *a > 0) out.emplace_back(*a, b);
  }
  return out;
}

inline long gcd_ll(long a, long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    long r = a % b;
    a = b;
    b = r;
  }
  return a;
}

inline int rho(long n) {
  int k = 0;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ++k;
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ++k;
  return k;
}

}  // namespace oracle
