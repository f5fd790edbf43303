#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkp {

using Integer = mpz_class;
using Rational = mpq_class;

// Raised when an input violates a mathematical hypothesis of an operation.
class hypothesis_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct PrimePower {
  Integer prime;
  unsigned long exponent;
  bool operator==(const PrimePower&) const = default;
};

inline void require_positive(const Integer& n, const char* name) {
  if (n <= 0) throw std::invalid_argument(std::string(name) + " must be positive");
}

inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer isqrt(const Integer& n) {
  if (n < 0) throw std::invalid_argument("isqrt of a negative number");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

/// Square root of n when n is a perfect square.
inline std::optional<Integer> is_perfect_square(const Integer& n) {
  if (n < 0) return std::nullopt;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  return isqrt(n);
}

/// Prime factorization by trial division, primes ascending.
inline std::vector<PrimePower> factorize(Integer n) {
  require_positive(n, "n");
  std::vector<PrimePower> out;
  for (Integer p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    unsigned long k = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0) {
      n /= p;
      ++k;
    }
    if (k > 0) out.push_back({p, k});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

/// Number of distinct prime factors.
inline unsigned omega(const Integer& n) {
  return static_cast<unsigned>(factorize(n).size());
}

inline bool is_squarefree(const Integer& n) {
  for (const auto& pp : factorize(n))
    if (pp.exponent > 1) return false;
  return true;
}

/// p-adic valuation of a nonzero integer.
inline unsigned long valuation(const Integer& n, const Integer& p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  if (p < 2) throw std::invalid_argument("valuation base must be at least 2");
  Integer m = abs(n);
  unsigned long k = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t()) != 0) {
    m /= p;
    ++k;
  }
  return k;
}

/// Whether x^2 = a (mod m) has a solution. Exhaustive over residues.
inline bool is_square_mod(const Integer& a, const Integer& m) {
  require_positive(m, "modulus");
  const Integer target = mod_floor(a, m);
  for (Integer x = 0; x < m; ++x)
    if (mod_floor(x * x, m) == target) return true;
  return false;
}

inline long long to_ll(const Integer& n) {
  if (!n.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return n.get_si();
}

inline std::string to_string(const Integer& n) { return n.get_str(); }

inline std::string to_string(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

}  // namespace hkp
