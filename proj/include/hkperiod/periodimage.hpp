#pragma once

#include "arith.hpp"
#include "cones.hpp"
#include "heegner.hpp"
#include "lattice.hpp"

#include <string>

namespace hkp {

enum class WallSource { Div, Flop };

inline const char* to_string(WallSource s) { return s == WallSource::Div ? "Div" : "Flop"; }

/// One Heegner component missing from the image of the period map.
struct ExcludedDivisor {
  Integer e;
  WallSource source;
  Integer kappa_sq;  // -2 or -10
  Integer s;
  KappaStar kappa_star;
  std::string note;
  bool count_asserted = true;  // false for the e = n/5 list when n'' is not squarefree

  bool matches(const HeegnerComponent& c) const { return c.e == e && c.s == s && c.kappa_star == kappa_star; }
};

namespace detail {

// n = 5^(2 alpha + 1) n'' with n'' = +-1 (mod 5); returns n'' when this holds.
inline std::optional<Integer> flop_fifth_cofactor(const Integer& n) {
  Integer m = n;
  unsigned v = 0;
  while (m % 5 == 0) {
    m /= 5;
    ++v;
  }
  if (v % 2 == 0) return std::nullopt;
  const Integer r = mod_floor(m, 5);
  if (r != 1 && r != 4) return std::nullopt;
  return m;
}

}  // namespace detail

inline std::vector<ExcludedDivisor> excluded_divisors(const Integer& n, int gamma) {
  check_polarization_type(n, gamma);
  const HeegnerModel model(n, gamma);
  std::vector<ExcludedDivisor> out;
  auto add = [&](WallSource src, const Integer& ksq, const Integer& s, KappaStar star, std::string note,
                 bool asserted = true) {
    const Integer e = disc_from_kappa(ksq, model.abs_disc(), s) / 2;
    out.push_back({e, src, ksq, s, model.up_to_sign(star), std::move(note), asserted});
  };
  if (gamma == 2) {
    add(WallSource::Div, -2, 1, {0}, "");
    return out;
  }
  const Integer r4 = mod_floor(n, 4);
  add(WallSource::Div, -2, 2, {0, 1}, "");
  if (r4 == 1) add(WallSource::Div, -2, 2, {n, 0}, "n = 1 (mod 4)");
  if (r4 == 0) add(WallSource::Div, -2, 2, {n, 1}, "n = 0 (mod 4)");
  add(WallSource::Div, -2, 1, {0, 0}, "");
  add(WallSource::Flop, -10, 2, {0, 1}, "");
  if (const auto npp = detail::flop_fifth_cofactor(n)) {
    // kappa_* = (a, 1) with a = 2 a', a'^2 = -n/5 (mod n), of order exactly 10
    const bool sqf = is_squarefree(*npp);
    const Integer np = n / 5;
    std::set<KappaStar> stars;
    for (Integer ap = 0; ap < n; ++ap)
      if (mod_floor(ap * ap + np, n) == 0 && mod_floor(20 * ap, 2 * n) == 0) stars.insert(model.up_to_sign({2 * ap, 1}));
    for (const auto& st : stars)
      add(WallSource::Flop, -10, 10, st, "n = 5^(2k+1) n'', n'' = +-1 (mod 5)", sqf);
  }
  return out;
}

inline bool in_image(const Integer& n, int gamma, const HeegnerComponent& comp) {
  if (comp.n != n || comp.gamma != gamma) throw std::invalid_argument("component belongs to another (n, gamma)");
  for (const auto& x : excluded_divisors(n, gamma))
    if (x.matches(comp)) return false;
  return true;
}

/// Whether H = x B1 + y B2 in a supported rank-two Picard lattice avoids every wall:
/// no orthogonal class of square -2, or of square -10 and divisibility 2.
/// H must have square 2n and divisibility gamma.
inline bool ample_test_rank2(const Integer& n, int gamma, const IntMatrix& pic_gram, const Integer& x,
                             const Integer& y) {
  check_polarization_type(n, gamma);
  const PicardFamily f = family_from_gram(pic_gram);
  if (family_square(f, x, y) != 2 * n) throw std::invalid_argument("H must have square 2n");
  if (family_divisibility(f, x, y) != gamma) throw std::invalid_argument("H must have divisibility gamma");
  Integer kx = f.gram(1, 1) * y, ky = -f.gram(0, 0) * x;
  const Integer g = gcd(kx, ky);
  kx /= g;
  ky /= g;
  const Integer sq = family_square(f, kx, ky);
  if (sq == -2) return false;
  return !(sq == -10 && family_divisibility(f, kx, ky) == 2);
}

}  // namespace hkp
