#include "hkperiod/specialmaps.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace hkp;

namespace {

using Pair = std::pair<long, long>;

std::vector<Pair> pairs(const std::vector<PolarizationChoice>& ps) {
  std::vector<Pair> out;
  for (const auto& p : ps) out.push_back({to_ll(p.a), to_ll(p.b)});
  std::sort(out.begin(), out.end());
  return out;
}

// Scan b <= bound for a^2 = e b^2 - n, keeping a > 0, gcd 1 and a/b < nu.
std::vector<Pair> hilb_scan(long n, long e, long bound) {
  const QuadNum nu = hilb_slopes(e).nef;
  std::vector<Pair> out;
  for (long b = 1; b <= bound; ++b) {
    const long a2 = e * b * b - n;
    if (a2 <= 0) continue;
    const auto a = oracle::exact_sqrt(a2);
    if (!a || oracle::gcd_ll(*a, b) != 1) continue;
    if (QuadNum::rational(make_rational(Integer(*a), Integer(b)), e) < nu) out.push_back({*a, b});
  }
  return out;
}

std::vector<Pair> special_scan(long n, long ep, long m, long bound) {
  const QuadNum nu = fano_slopes(n, ep).nef;
  std::vector<Pair> out;
  for (long b = 1; b <= bound; ++b) {
    const long num = m + ep * b * b;
    if (num % n != 0) continue;
    const auto a = oracle::exact_sqrt(num / n);
    if (!a || *a == 0 || oracle::gcd_ll(*a, b) != 1) continue;
    if (QuadNum::rational(make_rational(Integer(b), Integer(*a)), n * ep) < nu) {
      out.push_back({*a, b});
      out.push_back({*a, -b});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(SpecialMaps, CubicExamples) {
  const auto p7 = hilb_square_polarizations(3, 7);
  EXPECT_EQ(pairs(p7), (std::vector<Pair>{{2, 1}, {5, 2}}));
  for (const auto& p : p7) EXPECT_EQ(p.gamma, p.b == 2 ? 2 : 1);
  const auto p13 = hilb_square_polarizations(3, 13);
  EXPECT_EQ(pairs(p13), (std::vector<Pair>{{7, 2}, {137, 38}}));
  for (const auto& p : p13) {
    EXPECT_EQ(p.gamma, 2);
    EXPECT_EQ(target_label(p), "C_{6,26}^{(2)}");
  }
}

TEST(SpecialMaps, PerfectSquares) {
  EXPECT_EQ(pairs(perfect_square_solutions(15, 1)), (std::vector<Pair>{{1, 4}, {7, 8}}));
  EXPECT_TRUE(perfect_square_solutions(1, 1).empty());
  EXPECT_TRUE(hilb_square_polarizations(1, 4).empty());
  for (long p : {3, 5, 7, 11, 13, 101}) {
    EXPECT_EQ(pairs(perfect_square_solutions(p, 1)), (std::vector<Pair>{{(p - 1) / 2, (p + 1) / 2}}));
  }
  // nu_1 = 2/3, so 7/8 fails the slope condition
  EXPECT_EQ(pairs(hilb_square_polarizations(15, 1)), (std::vector<Pair>{{1, 4}}));
  for (long n = 1; n <= 200; ++n)
    for (long s = 1; s <= 5; ++s)
      for (const auto& p : perfect_square_solutions(n, s * s)) {
        EXPECT_EQ(p.a * p.a - s * s * p.b * p.b, -n);
        EXPECT_GT(p.a, 0);
      }
}

TEST(SpecialMaps, HilbertSquareSearchIsComplete) {
  for (long n = 1; n <= 20; ++n)
    for (long e = 1; e <= 40; ++e) {
      const auto got = pairs(hilb_square_polarizations(n, e));
      EXPECT_EQ(got, hilb_scan(n, e, 3000)) << n << " " << e;
    }
}

TEST(SpecialMaps, PolarizationAudit) {
  for (long n = 1; n <= 15; ++n)
    for (long e = 1; e <= 30; ++e) {
      const auto f = hilbert_family(e);
      for (const auto& p : hilb_square_polarizations(n, e)) {
        // b L2 - a delta
        EXPECT_EQ(family_square(f, p.b, -p.a), 2 * n);
        EXPECT_EQ(family_divisibility(f, p.b, -p.a), p.gamma);
        EXPECT_EQ(gcd(p.a, p.b), 1);
      }
    }
}

TEST(SpecialMaps, HilbertFamilies) {
  const auto k1 = hilb_family_e_values(1, 1, 4);
  std::vector<long> es;
  for (const auto& x : k1) es.push_back(to_ll(x.e));
  EXPECT_EQ(es, (std::vector<long>{2, 5, 10, 17}));
  EXPECT_TRUE(k1[0].passes);
  EXPECT_FALSE(k1[1].passes);
  const auto k2 = hilb_family_e_values(3, 2, 3);
  EXPECT_EQ(k2[0].e, 1);
  EXPECT_TRUE(k2[0].passes);
  EXPECT_EQ(k2[1].e, 3);
  EXPECT_FALSE(k2[1].passes);
  EXPECT_EQ(k2[2].e, 7);
  EXPECT_TRUE(k2[2].passes);
  EXPECT_THROW(hilb_family_e_values(5, 2, 3), hypothesis_error);

  for (long n = 1; n <= 40; ++n)
    for (int kind : {1, 2}) {
      if (kind == 2 && n % 4 != 3) continue;
      for (const auto& x : hilb_family_e_values(n, kind, 10)) {
        EXPECT_EQ(x.a * x.a - x.e * x.b * x.b, -n);
        const bool exception = (kind == 1 && n == 1 && x.m == 2) || (kind == 2 && n == 3 && x.m == 1);
        EXPECT_EQ(x.passes, !exception) << n << " " << kind << " " << x.m;
        if (!x.passes) continue;
        const auto ps = pairs(hilb_square_polarizations(n, x.e));
        const Pair want{to_ll(x.a), to_ll(x.b)};
        EXPECT_NE(std::find(ps.begin(), ps.end(), want), ps.end()) << n << " " << x.e;
      }
    }
}

TEST(SpecialMaps, EpwHilbertSquares) {
  EXPECT_TRUE(is_epw_hilb(13));
  EXPECT_FALSE(is_epw_hilb(2));
  EXPECT_FALSE(is_epw_hilb(3));
  for (long e = 3; e <= 500; ++e) {
    if (!is_epw_hilb(e)) continue;
    EXPECT_EQ(hilb_aut(e), GroupClass::OrderTwo) << e;
    // the minimal solution of P_e(-1) gives a degree two polarization
    const auto d = *minimal_solution(e, -1);
    bool found = false;
    for (const auto& p : hilb_square_polarizations(1, e)) found |= p.a == d.a && p.b == d.b;
    EXPECT_TRUE(found) << e;
  }
}

TEST(SpecialMaps, EpwSpecial) {
  EXPECT_TRUE(is_epw_special(3, 11));
  EXPECT_FALSE(is_epw_special(3, 2));
  EXPECT_THROW(is_epw_special(5, 2), hypothesis_error);
  for (long n : {3, 7, 11, 15, 19, 23})
    for (long ep = 2; ep <= 40; ++ep) {
      const Integer e = n * ep;
      EXPECT_EQ(is_epw_special(n, ep), is_solvable(e, n) && !is_solvable(4 * e, -5 * n));
      if (is_perfect_square(e)) { EXPECT_FALSE(is_epw_special(n, ep)); }
    }
  const auto e3 = epw_family_e_values(3, 5);
  EXPECT_EQ(e3.front(), 33);
  EXPECT_EQ(std::count(e3.begin(), e3.end(), Integer(6)), 0);
  const auto e15 = epw_family_e_values(15, 4);
  for (long m = 1; m <= 4; ++m) EXPECT_EQ(e15[m - 1], 15 * (15 * m * m - 1));
  for (long n : {3, 7, 11, 15, 19, 23, 31})
    for (const auto& e : epw_family_e_values(n, 6)) EXPECT_TRUE(is_epw_special(n, e / n)) << n << " " << e;
}

TEST(SpecialMaps, SpecialToModuliAgreesWithScan) {
  for (long n : {3, 7, 11})
    for (long ep = 2; ep <= 12; ++ep)
      for (long m = 1; m <= 30; ++m) {
        const auto got = special_to_moduli_maps(n, ep, m, 2000);
        for (const auto& p : got) {
          EXPECT_EQ(n * p.a * p.a - ep * p.b * p.b, m);
          EXPECT_EQ(p.gamma, mod_floor(p.b, 2) == 0 ? 2 : 1);
          EXPECT_EQ(p.target_n, m);
        }
        EXPECT_EQ(pairs(got), special_scan(n, ep, m, 2000)) << n << " " << ep << " " << m;
      }
}

TEST(SpecialMaps, SpecialToModuliDefaultBound) {
  // exact bound when nu^2 < n/e'; solutions found agree with a generous scan
  for (long n : {3, 7})
    for (long ep = 2; ep <= 10; ++ep)
      for (long m = 1; m <= 20; ++m) {
        const auto fs = fano_slopes(n, ep);
        if (fs.nef.b() != 0) continue;
        EXPECT_EQ(pairs(special_to_moduli_maps(n, ep, m)), special_scan(n, ep, m, 5000)) << n << " " << ep << " " << m;
      }
}

TEST(SpecialMaps, SelfMapFlag) {
  // (3, 11): unit (23, 4) of P_33(1) gives a = 23, b = 3 * 4
  const auto ms = special_to_moduli_maps(3, 11, 3);
  bool found = false;
  for (const auto& p : ms) {
    if (p.a == 23 && abs(p.b) == 12) {
      found = true;
      EXPECT_TRUE(p.self_map);
    }
  }
  EXPECT_TRUE(found);
  for (const auto& p : special_to_moduli_maps(3, 11, 1)) EXPECT_FALSE(p.self_map);
  EXPECT_THROW(special_to_moduli_maps(4, 2, 1), hypothesis_error);
  EXPECT_THROW(special_to_moduli_maps(3, 1, 1), hypothesis_error);
}
