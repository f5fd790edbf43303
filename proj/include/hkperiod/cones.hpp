#pragma once

#include "arith.hpp"
#include "lattice.hpp"
#include "pell.hpp"
#include "quadfield.hpp"

#include <array>

namespace hkp {

enum class FamilyKind { HilbertSquare, Special };

/// Rank two Picard lattice of a very general member of one of the two families,
/// together with its embedding into the K3^[2] lattice.
struct PicardFamily {
  FamilyKind kind;
  Integer n;        // 1 for the Hilbert square
  Integer e;        // radicand of the slopes: e for the Hilbert square, n e' otherwise
  Integer e_prime;  // e' for the special family, e for the Hilbert square
  IntMatrix gram;
  std::array<IntVector, 2> embedding;
};

inline constexpr std::size_t k3_rank = 23;

inline const Lattice& k3_lattice_cached() {
  static const Lattice l = k3_2_lattice();
  return l;
}

/// Basis (L2, delta) with Gram diag(2e, -2).
inline PicardFamily hilbert_family(const Integer& e) {
  require_positive(e, "e");
  IntVector l2(k3_rank, 0), delta(k3_rank, 0);
  l2[0] = 1;
  l2[1] = e;
  delta[22] = 1;
  return {FamilyKind::HilbertSquare, 1, e, e, IntMatrix{{2 * e, 0}, {0, -2}}, {l2, delta}};
}

inline void check_special(const Integer& n, const Integer& e_prime) {
  require_positive(n, "n");
  require_positive(e_prime, "e'");
  if (mod_floor(n, 4) != 3) throw hypothesis_error("requires n = -1 (mod 4)");
  if (!is_squarefree(n)) throw hypothesis_error("requires n squarefree");
  if (e_prime <= 1) throw hypothesis_error("requires e' > 1");
}

/// Basis (H, L) with Gram diag(2n, -2e'), H of divisibility 2.
inline PicardFamily special_family(const Integer& n, const Integer& e_prime) {
  check_special(n, e_prime);
  IntVector h(k3_rank, 0), l(k3_rank, 0);
  h[0] = 2;
  h[1] = (n + 1) / 2;
  h[22] = 1;
  l[2] = 1;
  l[3] = -e_prime;
  return {FamilyKind::Special, n, n * e_prime, e_prime, IntMatrix{{2 * n, 0}, {0, -2 * e_prime}}, {h, l}};
}

/// Recognizes diag(2e, -2) as a Hilbert square and diag(2n, -2e') as the special family.
inline PicardFamily family_from_gram(const IntMatrix& g) {
  if (g.rows() != 2 || g.cols() != 2 || g(0, 1) != 0 || g(1, 0) != 0)
    throw std::invalid_argument("expected a diagonal 2x2 Gram matrix");
  if (g(0, 0) <= 0 || mod_floor(g(0, 0), 2) != 0 || g(1, 1) >= 0 || mod_floor(g(1, 1), 2) != 0)
    throw std::invalid_argument("expected Gram diag(2a, -2b) with a, b > 0");
  if (g(1, 1) == -2) return hilbert_family(g(0, 0) / 2);
  return special_family(g(0, 0) / 2, -g(1, 1) / 2);
}

inline Integer family_square(const PicardFamily& f, const Integer& x, const Integer& y) {
  return f.gram(0, 0) * x * x + f.gram(1, 1) * y * y;
}

inline Integer family_divisibility(const PicardFamily& f, const Integer& x, const Integer& y) {
  IntVector v(k3_rank);
  for (std::size_t i = 0; i < k3_rank; ++i) v[i] = x * f.embedding[0][i] + y * f.embedding[1][i];
  return divisibility(k3_lattice_cached(), v);
}

/// Slopes t of the boundary rays: L2 - t delta for the Hilbert square, H - t L otherwise.
struct ConeSlopes {
  QuadNum movable;
  QuadNum nef;
  Integer radicand;
};

inline ConeSlopes hilb_slopes(const Integer& e) {
  require_positive(e, "e");
  QuadNum mu;
  if (is_perfect_square(e)) {
    mu = QuadNum::sqrt_of(e);
  } else {
    const auto u = fundamental_unit(e);
    mu = QuadNum::rational(make_rational(e * u.b, u.a), e);
  }
  QuadNum nu = mu;
  if (auto s = minimal_solution(4 * e, 5)) nu = QuadNum::rational(make_rational(2 * e * s->b, s->a), e);
  return {mu, nu, e};
}

inline ConeSlopes fano_slopes(const Integer& n, const Integer& e_prime) {
  check_special(n, e_prime);
  const Integer e = n * e_prime;
  QuadNum mu = QuadNum(0, make_rational(n, e), e);
  if (auto s = minimal_solution(e, -n)) mu = QuadNum::rational(make_rational(s->a, e_prime * s->b), e);
  QuadNum nu = mu;
  if (auto s = minimal_solution(4 * e, -5 * n)) nu = QuadNum::rational(make_rational(s->a, 2 * e_prime * s->b), e);
  return {mu, nu, e};
}

inline ConeSlopes family_slopes(const PicardFamily& f) {
  return f.kind == FamilyKind::HilbertSquare ? hilb_slopes(f.e) : fano_slopes(f.n, f.e_prime);
}

enum class WallProfile { Div, Flop };

inline const char* to_string(WallProfile p) { return p == WallProfile::Div ? "Div" : "Flop"; }

struct WallClass {
  Integer x;
  Integer y;
  Integer square;
  Integer divisibility;
  WallProfile profile;
  bool operator==(const WallClass&) const = default;
};

/// Classes x B1 + y B2 with |x|, |y| <= bound of square -2 (Div) or square -10 and divisibility 2 (Flop).
inline std::vector<WallClass> wall_classes(const PicardFamily& f, WallProfile profile, const Integer& bound) {
  const Integer sq = profile == WallProfile::Div ? -2 : -10;
  const Integer g0 = f.gram(0, 0), g1 = -f.gram(1, 1);
  std::vector<WallClass> out;
  for (Integer x = -bound; x <= bound; ++x) {
    // g0 x^2 - g1 y^2 = sq
    const Integer num = g0 * x * x - sq;
    if (num % g1 != 0) continue;
    const auto y = is_perfect_square(num / g1);
    if (!y || *y > bound) continue;
    std::vector<Integer> ys{*y};
    if (*y != 0) ys.push_back(-*y);
    for (const Integer& yy : ys) {
      const Integer d = family_divisibility(f, x, yy);
      if (profile == WallProfile::Flop && d != 2) continue;
      out.push_back({x, yy, sq, d, profile});
    }
  }
  return out;
}

/// Slope t at which the ray through (1, -t) (Hilbert) or (1, t) (special) meets the wall.
inline std::optional<Rational> wall_slope(const PicardFamily& f, const WallClass& w) {
  if (w.y == 0) return std::nullopt;
  if (f.kind == FamilyKind::HilbertSquare) return make_rational(-f.e * w.x, w.y);
  return make_rational(f.n * w.x, f.e_prime * w.y);
}

namespace detail {

inline IntMatrix rotation_matrix(const Integer& n, const Integer& e_prime) {
  const Integer e = n * e_prime;
  const auto s = minimal_solution(e, n);
  if (!s || is_perfect_square(e)) throw hypothesis_error("requires P_e(n) solvable and e not a perfect square");
  const Integer an = s->a / n, bn = s->b;
  const Integer diag = n * an * an + e_prime * bn * bn;
  return IntMatrix{{diag, 2 * e_prime * an * bn}, {2 * n * an * bn, diag}};
}

}  // namespace detail

/// Rays alpha_i, i = start .. start+count-1, bounding the chambers of the movable cone
/// in the case where the movable cone is the positive cone and flop walls exist.
inline std::vector<IntVector> flop_chamber_rays(const Integer& n, const Integer& e_prime, long count, long start = 0) {
  check_special(n, e_prime);
  const Integer e = n * e_prime;
  if (is_solvable(e, -n)) throw hypothesis_error("requires P_e(-n) not solvable");
  const auto f = minimal_solution(4 * e, -5 * n);
  if (!f) throw hypothesis_error("requires P_4e(-5n) solvable");
  const IntMatrix r = detail::rotation_matrix(n, e_prime);
  const IntMatrix r_inv{{r(0, 0), -r(0, 1)}, {-r(1, 0), r(1, 1)}};
  const IntVector a0{2 * e_prime * f->b, -f->a};
  const IntVector a1{2 * e_prime * f->b, f->a};
  std::vector<IntVector> out;
  for (long i = start; i < start + count; ++i) {
    const long k = i >= 0 ? i / 2 : -((-i + 1) / 2);
    IntVector v = (i % 2 == 0) ? a0 : a1;
    const IntMatrix& step = k >= 0 ? r : r_inv;
    for (long j = 0; j < (k >= 0 ? k : -k); ++j) v = step.apply(v);
    out.push_back(v);
  }
  return out;
}

}  // namespace hkp
