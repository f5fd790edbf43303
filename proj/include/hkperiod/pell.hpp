#pragma once

#include "arith.hpp"
#include "quadfield.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace hkp {

// Equation a^2 - e*b^2 = t.
struct PellEquation {
  Integer e;
  Integer t;
};

struct PellSolution {
  Integer a;
  Integer b;
  bool operator==(const PellSolution&) const = default;
};

inline QuadNum to_quad(const PellSolution& s, const Integer& e) { return QuadNum(s.a, s.b, e); }

namespace detail {

inline void check_pell_args(const Integer& e, const Integer& t) {
  require_positive(e, "e");
  if (t == 0) throw std::invalid_argument("t must be nonzero");
}

// floor((p + sqrt(d)) / q) for non-square d.
inline Integer pq_floor(const Integer& p, const Integer& q, const Integer& sqrt_floor) {
  Integer r;
  if (q > 0) {
    const Integer num = p + sqrt_floor;
    mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), q.get_mpz_t());
    return r;
  }
  const Integer num = p + sqrt_floor;
  const Integer aq = -q;
  mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), aq.get_mpz_t());
  return -r - 1;
}

struct ContinuedFraction {
  unsigned long period;
  Integer p;  // last convergent of the first period
  Integer q;
};

inline ContinuedFraction sqrt_period(const Integer& e) {
  const Integer s = isqrt(e);
  Integer P = 0, Q = 1;
  Integer p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (unsigned long i = 0;; ++i) {
    const Integer a = (P + s) / Q;
    const Integer p = a * p_prev + p_prev2;
    const Integer q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    P = a * Q - P;
    Q = (e - P * P) / Q;
    if (Q == 1) return {i + 1, p, q};
  }
}

// Primitive class representatives of a^2 - e*b^2 = m with |m| > 1, non-square e.
inline std::vector<PellSolution> primitive_reps(const Integer& e, const Integer& m,
                                                const std::optional<PellSolution>& neg_unit) {
  std::vector<PellSolution> reps;
  const Integer am = abs(m);
  const Integer s = isqrt(e);
  const Integer lo = -(am - 1) / 2;  // z in (-|m|/2, |m|/2]
  const Integer hi = am / 2;
  for (Integer z = lo; z <= hi; ++z) {
    if (mod_floor(z * z - e, am) != 0) continue;
    Integer P = z, Q = am;
    Integer B2 = 1, B1 = 0, G2 = -z, G1 = am;
    std::set<std::pair<Integer, Integer>> seen;
    for (unsigned long i = 0;; ++i) {
      if (i > 0 && (Q == 1 || Q == -1)) {
        const Integer r = G1, t = B1;
        const Integer v = r * r - e * t * t;
        if (v == m) {
          reps.push_back({r, t});
        } else if (neg_unit) {
          reps.push_back({r * neg_unit->a + t * neg_unit->b * e, r * neg_unit->b + t * neg_unit->a});
        }
        break;
      }
      if (!seen.emplace(P, Q).second) break;
      const Integer a = pq_floor(P, Q, s);
      const Integer B = a * B1 + B2;
      const Integer G = a * G1 + G2;
      B2 = B1;
      B1 = B;
      G2 = G1;
      G1 = G;
      P = a * Q - P;
      Q = (e - P * P) / Q;
    }
  }
  return reps;
}

// Smallest positive element in the unit orbit of x, if any (x must be nonzero).
inline PellSolution orbit_minimum(PellSolution x, const PellSolution& unit, const Integer& e) {
  auto mul = [&](const PellSolution& u, const PellSolution& v) {
    return PellSolution{u.a * v.a + e * u.b * v.b, u.a * v.b + u.b * v.a};
  };
  const PellSolution inv{unit.a, -unit.b};
  if (QuadNum(x.a, x.b, e).sign() < 0) x = {-x.a, -x.b};
  auto positive = [](const PellSolution& v) { return v.a > 0 && v.b > 0; };
  while (!positive(x)) x = mul(x, unit);
  for (;;) {
    const PellSolution y = mul(x, inv);
    if (!positive(y)) return x;
    x = y;
  }
}

// Positive solutions for a perfect-square radicand e = r^2, via (a - r b)(a + r b) = t.
inline std::vector<PellSolution> square_radicand_solutions(const Integer& r, const Integer& t) {
  std::vector<PellSolution> out;
  const Integer at = abs(t);
  for (Integer d = 1; d <= at; ++d) {
    if (at % d != 0) continue;
    for (int sgn : {1, -1}) {
      const Integer d1 = sgn * d;
      const Integer d2 = t / d1;
      const Integer sum = d1 + d2;
      const Integer diff = d2 - d1;
      if (sum % 2 != 0 || diff % (2 * r) != 0) continue;
      const Integer a = sum / 2, b = diff / (2 * r);
      if (a > 0 && b > 0) out.push_back({a, b});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.b < y.b; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Least nontrivial solution of a^2 - e*b^2 = 1.
inline PellSolution fundamental_unit(const Integer& e) {
  require_positive(e, "e");
  if (is_perfect_square(e)) throw hypothesis_error("e must not be a perfect square");
  const auto cf = detail::sqrt_period(e);
  if (cf.period % 2 == 0) return {cf.p, cf.q};
  return {cf.p * cf.p + e * cf.q * cf.q, 2 * cf.p * cf.q};
}

/// Minimal positive solution of a^2 - e*b^2 = -1, when it exists (non-square e).
inline std::optional<PellSolution> negative_unit(const Integer& e) {
  const auto cf = detail::sqrt_period(e);
  if (cf.period % 2 == 0) return std::nullopt;
  return PellSolution{cf.p, cf.q};
}

/// Fundamental representatives, one per solution class. For non-square e every
/// solution is +-r * u^k for a representative r and the fundamental unit u.
inline std::vector<PellSolution> solution_classes(const Integer& e, const Integer& t) {
  detail::check_pell_args(e, t);
  if (auto r = is_perfect_square(e)) return detail::square_radicand_solutions(*r, t);
  const auto neg = negative_unit(e);
  std::vector<PellSolution> reps;
  const Integer at = abs(t);
  for (Integer f = 1; f * f <= at; ++f) {
    if (at % (f * f) != 0) continue;
    const Integer m = t / (f * f);
    std::vector<PellSolution> prim;
    if (m == 1) {
      prim.push_back({1, 0});
    } else if (m == -1) {
      if (neg) prim.push_back(*neg);
    } else {
      prim = detail::primitive_reps(e, m, neg);
    }
    for (const auto& p : prim) reps.push_back({f * p.a, f * p.b});
  }
  return reps;
}

/// Positive solution (a > 0, b > 0) with least a, or (1, 0) for t = 1 and square e.
inline std::optional<PellSolution> minimal_solution(const Integer& e, const Integer& t) {
  detail::check_pell_args(e, t);
  if (auto r = is_perfect_square(e)) {
    if (t == 1) return PellSolution{1, 0};
    auto sols = detail::square_radicand_solutions(*r, t);
    if (sols.empty()) return std::nullopt;
    return sols.front();
  }
  if (t == 1) return fundamental_unit(e);
  if (t == -1) return negative_unit(e);
  const PellSolution unit = fundamental_unit(e);
  std::optional<PellSolution> best;
  for (const auto& rep : solution_classes(e, t)) {
    const auto cand = detail::orbit_minimum(rep, unit, e);
    if (!best || cand.b < best->b) best = cand;
  }
  return best;
}

inline std::optional<PellSolution> minimal_solution(const PellEquation& eq) { return minimal_solution(eq.e, eq.t); }

inline bool is_solvable(const Integer& e, const Integer& t) { return minimal_solution(e, t).has_value(); }

/// All positive solutions with b <= bound, ordered by b.
inline std::vector<PellSolution> solutions_up_to(const Integer& e, const Integer& t, const Integer& bound) {
  detail::check_pell_args(e, t);
  if (auto r = is_perfect_square(e)) {
    auto sols = detail::square_radicand_solutions(*r, t);
    std::erase_if(sols, [&](const auto& s) { return s.b > bound; });
    return sols;
  }
  const PellSolution unit = fundamental_unit(e);
  std::vector<PellSolution> out;
  for (const auto& rep : solution_classes(e, t)) {
    PellSolution x = detail::orbit_minimum(rep, unit, e);
    while (x.b <= bound) {
      out.push_back(x);
      x = {x.a * unit.a + e * x.b * unit.b, x.a * unit.b + x.b * unit.a};
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.b < y.b; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace hkp
