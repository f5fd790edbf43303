#pragma once

#include "arith.hpp"
#include "autbir.hpp"
#include "cones.hpp"
#include "pell.hpp"
#include "quadfield.hpp"

#include <string>

namespace hkp {

/// A polarization a H + b L (special family) or b L2 - a delta (Hilbert square) of square 2 target_n.
struct PolarizationChoice {
  Integer n;  // source degree parameter
  Integer e;
  Integer a;
  Integer b;
  int gamma;
  Integer target_n;
  bool self_map = false;  // rotation by an automorphism; not a new component

  bool operator==(const PolarizationChoice&) const = default;
};

inline std::string target_label(const PolarizationChoice& p) {
  return "C_{" + to_string(Integer(2 * p.target_n)) + "," + to_string(Integer(2 * p.e)) + "}^{(" +
         std::to_string(p.gamma) + ")}";
}

/// Moduli of degree 2e K3 surfaces are of general type for e > 61.
inline bool k3_moduli_general_type(const Integer& e) { return e > 61; }

namespace detail {

// Largest b >= 0 with b^2 * q < n, for rational q > 0.
inline Integer largest_below(const Integer& n, const Rational& q) {
  Rational bound = Rational(n) / q;
  bound.canonicalize();
  Integer b = isqrt(bound.get_num() / bound.get_den());
  while (Rational(b * b) * q >= Rational(n)) --b;
  while (Rational((b + 1) * (b + 1)) * q < Rational(n)) ++b;
  return b;
}

inline Rational rational_value(const QuadNum& x) {
  if (x.b() != 0) throw std::logic_error("expected a rational slope");
  return x.a();
}

}  // namespace detail

/// Pairs a = (n' - n'')/2, b = (n' + n'')/(2 sqrt e) over factorizations n = n' n'' with 0 < n'' < n'.
inline std::vector<PolarizationChoice> perfect_square_solutions(const Integer& n, const Integer& e) {
  require_positive(n, "n");
  const auto s = is_perfect_square(e);
  if (!s || e <= 0) throw std::invalid_argument("e must be a positive perfect square");
  std::vector<PolarizationChoice> out;
  for (Integer npp = 1; npp * npp < n; ++npp) {
    if (n % npp != 0) continue;
    const Integer np = n / npp;
    if ((np + npp) % 2 != 0 || ((np + npp) / 2) % *s != 0) continue;
    const Integer a = (np - npp) / 2, b = (np + npp) / (2 * *s);
    out.push_back({n, e, a, b, b % 2 == 0 ? 2 : 1, n});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.b < y.b; });
  return out;
}

/// Positive solutions (a, b) of P_e(-n) with a/b < nu_e and gcd(a, b) = 1. Without a bound the
/// search is complete: a/b < nu_e < sqrt(e) forces b^2 < n / (e - nu_e^2).
inline std::vector<PolarizationChoice> hilb_square_polarizations(const Integer& n, const Integer& e,
                                                                 std::optional<Integer> search_bound = std::nullopt) {
  require_positive(n, "n");
  require_positive(e, "e");
  const QuadNum nu = hilb_slopes(e).nef;
  std::vector<PolarizationChoice> candidates;
  if (is_perfect_square(e)) {
    candidates = perfect_square_solutions(n, e);
  } else {
    const Rational nu2 = detail::rational_value(nu * nu);
    const Integer bmax = search_bound.value_or(detail::largest_below(n, Rational(e) - nu2));
    for (const auto& s : solutions_up_to(e, -n, bmax)) candidates.push_back({n, e, s.a, s.b, s.b % 2 == 0 ? 2 : 1, n});
  }
  std::vector<PolarizationChoice> out;
  for (const auto& c : candidates) {
    if (c.a <= 0 || c.b <= 0 || gcd(c.a, c.b) != 1) continue;
    if (search_bound && c.b > *search_bound) continue;
    if (QuadNum::rational(make_rational(c.a, c.b), e) < nu) out.push_back(c);
  }
  return out;
}

/// Member of one of the two infinite families of Hilbert-square loci.
struct FamilyMember {
  Integer m;
  Integer e;
  Integer a;
  Integer b;
  bool passes;  // a/b < nu_e
};

/// kind 1: e = m^2 + n with (m, 1), m >= 1; kind 2: e = m^2 + m + (n+1)/4 with (2m+1, 2), m >= 0.
inline std::vector<FamilyMember> hilb_family_e_values(const Integer& n, int kind, long count) {
  require_positive(n, "n");
  if (kind != 1 && kind != 2) throw std::invalid_argument("kind must be 1 or 2");
  if (kind == 2 && mod_floor(n, 4) != 3) throw hypothesis_error("kind 2 requires n = -1 (mod 4)");
  std::vector<FamilyMember> out;
  for (long i = 0; i < count; ++i) {
    const Integer m = kind == 1 ? i + 1 : i;
    const Integer e = kind == 1 ? Integer(m * m + n) : Integer(m * m + m + (n + 1) / 4);
    const Integer a = kind == 1 ? m : Integer(2 * m + 1), b = kind;
    const bool passes = QuadNum::rational(make_rational(a, b), e) < hilb_slopes(e).nef;
    out.push_back({m, e, a, b, passes});
  }
  return out;
}

/// Solutions (n a, b) of P_e(n m), e = n e', with a > 0, |b|/a < nu_{n,e}, gcd(a, b) = 1.
/// Without a bound, the search is exact when nu^2 < n/e'; otherwise it stops one unit past the minimal solution.
inline std::vector<PolarizationChoice> special_to_moduli_maps(const Integer& n, const Integer& e_prime, const Integer& m,
                                                              std::optional<Integer> search_bound = std::nullopt) {
  check_special(n, e_prime);
  require_positive(m, "m");
  const Integer e = n * e_prime;
  const QuadNum nu = fano_slopes(n, e_prime).nef;
  std::vector<PellSolution> sols;
  if (is_perfect_square(e)) {
    // finitely many: factor pairs of n m
    sols = solutions_up_to(e, n * m, search_bound.value_or(n * m));
  } else {
    Integer bmax;
    if (search_bound) {
      bmax = *search_bound;
    } else if (nu.b() == 0 && nu.a() * nu.a() * Rational(e_prime) < Rational(n)) {
      // n a^2 - e' b^2 = m with b < nu a: a^2 (n - e' nu^2) < m
      const Integer amax = detail::largest_below(m, Rational(n) - nu.a() * nu.a() * Rational(e_prime));
      Rational bm = nu.a() * Rational(amax);
      bm.canonicalize();
      bmax = bm.get_num() / bm.get_den() + 1;
    } else if (const auto x = minimal_solution(e, n * m)) {
      const auto u = fundamental_unit(e);
      bmax = x->a * u.b + x->b * u.a;
    } else {
      bmax = 0;
    }
    sols = solutions_up_to(e, n * m, bmax);
  }
  std::vector<PolarizationChoice> out;
  for (const auto& s : sols) {
    if (s.a <= 0 || s.a % n != 0 || s.b <= 0) continue;
    const Integer a = s.a / n;
    if (gcd(a, s.b) != 1) continue;
    if (!(QuadNum::rational(make_rational(s.b, a), e) < nu)) continue;
    for (const Integer& b : {s.b, Integer(-s.b)}) {
      PolarizationChoice p{n, e, a, b, mod_floor(b, 2) == 0 ? 2 : 1, m};
      p.self_map = m == n && b % n == 0 && a * a - e * (b / n) * (b / n) == 1;
      out.push_back(p);
    }
  }
  return out;
}

/// For e >= 3: P_e(-1) solvable and P_4e(5) not.
inline bool is_epw_hilb(const Integer& e) {
  require_positive(e, "e");
  if (e < 3) return false;
  return is_solvable(e, -1) && !is_solvable(4 * e, 5);
}

/// P_e(n) solvable and P_4e(-5n) not, e = n e'.
inline bool is_epw_special(const Integer& n, const Integer& e_prime) {
  check_special(n, e_prime);
  const Integer e = n * e_prime;
  return is_solvable(e, n) && !is_solvable(4 * e, -5 * n);
}

/// e = n(n m^2 - 1), m >= 1, keeping e = +-2 (mod 5) unless 5 | n.
inline std::vector<Integer> epw_family_e_values(const Integer& n, long count) {
  require_positive(n, "n");
  if (mod_floor(n, 4) != 3) throw hypothesis_error("requires n = -1 (mod 4)");
  if (!is_squarefree(n)) throw hypothesis_error("requires n squarefree");
  std::vector<Integer> out;
  for (Integer m = 1; static_cast<long>(out.size()) < count; ++m) {
    const Integer e = n * (n * m * m - 1);
    const Integer r = mod_floor(e, 5);
    if (n % 5 == 0 || r == 2 || r == 3) out.push_back(e);
  }
  return out;
}

}  // namespace hkp
