#pragma once

#include "arith.hpp"
#include "lattice.hpp"

#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace hkp {

using KappaStar = std::vector<Integer>;

/// One irreducible component of a Heegner divisor, labelled by its orbit invariants.
struct HeegnerComponent {
  Integer n;
  int gamma;
  Integer e;
  Integer kappa_sq;
  Integer s;              // divisibility of kappa in the complement of the polarization
  KappaStar kappa_star;   // (x mod 2n, y mod 2) for gamma = 1, (x mod n) for gamma = 2

  bool operator==(const HeegnerComponent&) const = default;
  auto key() const { return std::tie(s, kappa_star); }
  bool operator<(const HeegnerComponent& o) const { return key() < o.key(); }
};

enum class Provenance { Formula, Enumerated };

inline const char* to_string(Provenance p) { return p == Provenance::Formula ? "formula" : "enumerated"; }

struct HeegnerComponents {
  std::vector<HeegnerComponent> components;
  Provenance provenance = Provenance::Formula;
  bool stable_under_doubling = true;  // meaningful for enumerated results
};

/// d = |kappa^2 * disc| / s^2, the degree of the associated polarization.
inline Integer disc_from_kappa(const Integer& kappa_sq, const Integer& disc, const Integer& s) {
  if (s <= 0) throw std::invalid_argument("divisibility must be positive");
  const Integer num = abs(kappa_sq * disc);
  if (num % (s * s) != 0) throw std::invalid_argument("s^2 does not divide kappa^2 * disc");
  return num / (s * s);
}

inline bool heegner_nonempty(const Integer& n, int gamma, const Integer& e) {
  check_polarization_type(n, gamma);
  require_positive(e, "e");
  if (gamma == 1) return is_square_mod(e, 4 * n) || is_square_mod(e - n, 4 * n);
  return is_square_mod(e, n);
}

/// Explicit model of the complement of the polarization inside the K3^[2] lattice,
/// truncated to the part that carries the discriminant group plus one copy of U.
class HeegnerModel {
public:
  HeegnerModel(const Integer& n, int gamma) : n_(n), gamma_(gamma), lattice_(make(n, gamma)), dg_(lattice_) {
    abs_disc_ = abs(determinant(lattice_.gram));
    for_each_coord([&](const KappaStar& c) { to_model_[dg_.class_of(lift(c))] = c; });
  }

  const Lattice& lattice() const { return lattice_; }
  const DiscriminantGroup& disc() const { return dg_; }
  const Integer& abs_disc() const { return abs_disc_; }
  const Integer& n() const { return n_; }
  int gamma() const { return gamma_; }

  /// Rational lift of model coordinates to the dual lattice.
  RatVector lift(const KappaStar& c) const {
    if (gamma_ == 1) return {make_rational(c[0], 2 * n_), make_rational(c[1], 2), 0, 0};
    return {make_rational(c[0], n_), make_rational(-2 * c[0], n_), 0, 0};
  }

  KappaStar to_model(const DiscElement& x) const { return to_model_.at(x); }

  KappaStar reduce(const KappaStar& c) const {
    if (gamma_ == 1) return {mod_floor(c[0], 2 * n_), mod_floor(c[1], 2)};
    return {mod_floor(c[0], n_)};
  }

  KappaStar up_to_sign(const KappaStar& c) const {
    const KappaStar x = reduce(c);
    KappaStar y = x;
    for (auto& v : y) v = -v;
    y = reduce(y);
    return y < x ? y : x;
  }

private:
  static Lattice make(const Integer& n, int gamma) {
    check_polarization_type(n, gamma);
    if (gamma == 1) return direct_sum({rank_one(-2 * n), rank_one(-2), hyperbolic_plane()});
    return direct_sum({Lattice{IntMatrix{{-2, -1}, {-1, -(n + 1) / 2}}, 0}, hyperbolic_plane()});
  }

  template <class F>
  void for_each_coord(F f) const {
    if (gamma_ == 1) {
      for (Integer x = 0; x < 2 * n_; ++x)
        for (Integer y = 0; y < 2; ++y) f(KappaStar{x, y});
    } else {
      for (Integer x = 0; x < n_; ++x) f(KappaStar{x});
    }
  }

  Integer n_;
  int gamma_;
  Lattice lattice_;
  DiscriminantGroup dg_;
  Integer abs_disc_;
  std::map<DiscElement, KappaStar> to_model_;
};

namespace detail {

inline long gcd_l(long a, long b) { return std::gcd(a, b); }

// Realizable orbit invariants kappa = a f1 + b f2 + c w with w primitive of any even square,
// |a|, |b| <= bound, 0 <= c <= bound, for every e in `targets`.
inline std::map<Integer, std::set<HeegnerComponent>> enumerate_components(const HeegnerModel& model,
                                                                          const std::vector<long>& targets,
                                                                          long bound) {
  const long n = to_ll(model.n());
  const int gamma = model.gamma();
  const long g00 = to_ll(model.lattice().gram(0, 0));
  const long g01 = to_ll(model.lattice().gram(0, 1));
  const long g11 = to_ll(model.lattice().gram(1, 1));
  const long disc = to_ll(model.abs_disc());
  std::map<Integer, std::set<HeegnerComponent>> out;
  std::map<std::tuple<long, long, long>, KappaStar> cache;
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b)
      for (long c = 0; c <= bound; ++c) {
        if (gcd_l(gcd_l(a, b), c) != 1) continue;
        // Gram * (a, b, c, 0) = (g00 a + g01 b, g01 a + g11 b, 0, c)
        const long s = gcd_l(gcd_l(g00 * a + g01 * b, g01 * a + g11 * b), c);
        const long base = g00 * a * a + 2 * g01 * a * b + g11 * b * b;
        for (long e : targets) {
          const long num = 2 * e * s * s;
          if (num % disc != 0) continue;
          const long ksq = -num / disc;
          if (ksq % 2 != 0) continue;
          if (c == 0 ? base != ksq : (base - ksq) % (2 * c * c) != 0) continue;
          auto key = std::make_tuple(a, b, s);
          auto it = cache.find(key);
          if (it == cache.end()) {
            const IntVector v{a, b, c, 0};
            const KappaStar star = model.up_to_sign(model.to_model(model.disc().class_of_scaled(v, s)));
            it = cache.emplace(key, star).first;
          }
          out[e].insert(HeegnerComponent{n, gamma, e, ksq, s, it->second});
        }
      }
  return out;
}

}  // namespace detail

inline long default_enumeration_bound(const Integer& n) { return 2 * to_ll(n) + 2; }

/// Components for every e in [1, e_max] by exhaustive enumeration.
inline std::map<Integer, std::vector<HeegnerComponent>> components_bruteforce(const Integer& n, int gamma, long e_max,
                                                                              long bound) {
  const HeegnerModel model(n, gamma);
  std::vector<long> targets;
  for (long e = 1; e <= e_max; ++e) targets.push_back(e);
  std::map<Integer, std::vector<HeegnerComponent>> out;
  for (auto& [e, comps] : detail::enumerate_components(model, targets, bound))
    out[e] = std::vector<HeegnerComponent>(comps.begin(), comps.end());
  return out;
}

inline HeegnerComponents components_enumerated(const Integer& n, int gamma, const Integer& e, long bound) {
  const HeegnerModel model(n, gamma);
  const long el = to_ll(e);
  auto once = [&](long b) {
    auto m = detail::enumerate_components(model, {el}, b);
    auto& s = m[e];
    return std::vector<HeegnerComponent>(s.begin(), s.end());
  };
  HeegnerComponents out;
  out.provenance = Provenance::Enumerated;
  out.components = once(bound);
  out.stable_under_doubling = once(2 * bound) == out.components;
  return out;
}

inline bool heegner_formula_applies(const Integer& n, const Integer& e) {
  const bool prime = mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
  return prime || (is_squarefree(n) && e % n == 0);
}

/// Irreducible components of the Heegner divisor of discriminant 2e. Uses the closed
/// case analysis when n is prime, or squarefree with n | e; otherwise enumerates.
inline HeegnerComponents heegner_components(const Integer& n, int gamma, const Integer& e,
                                            std::optional<long> bound = std::nullopt) {
  check_polarization_type(n, gamma);
  require_positive(e, "e");
  if (!heegner_formula_applies(n, e))
    return components_enumerated(n, gamma, e, bound.value_or(default_enumeration_bound(n)));

  const HeegnerModel model(n, gamma);
  std::set<HeegnerComponent> found;
  HeegnerComponents out;
  if (!heegner_nonempty(n, gamma, e)) return out;
  const bool prime = mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;

  if (gamma == 1) {
    const Integer mod = 4 * n;
    const Integer r = mod_floor(e, mod);
    auto add = [&](const Integer& s, const Integer& x, const Integer& y) {
      const Integer num = e * s * s;
      if (num % (2 * n) != 0) return;
      const Integer ksq = -num / (2 * n);
      if (ksq % 2 != 0) return;
      found.insert({n, 1, e, ksq, s, model.up_to_sign({x, y})});
    };
    if (r == 0) add(1, 0, 0);
    if (e % n == 0) {
      if (r == mod_floor(n * n, mod)) add(2, n, 0);
      if (r == mod_floor(n, mod)) add(2, 0, 1);
      if (r == mod_floor(n * (n + 1), mod)) add(2, n, 1);
    }
    if (prime && n == 2) {
      for (long a : {1, 3}) {
        if (r == mod_floor(Integer(a * a), 8)) add(4, a, 0);
        if (r == mod_floor(Integer(a * a + 2), 8)) add(4, a, 1);
      }
    } else if (prime) {
      for (Integer a = 1; a < n; ++a)
        if (r == mod_floor(4 * a * a, mod)) add(n, 2 * a, 0);
      for (Integer a = 0; a < 2 * n; ++a) {
        if (a % n == 0) continue;
        if (a % 2 != 0 && r == mod_floor(a * a, mod)) add(2 * n, a, 0);
        if (r == mod_floor(a * a + n, mod)) add(2 * n, a, 1);
      }
    }
  } else {
    auto add = [&](const Integer& s, const Integer& x) {
      const Integer num = 2 * e * s * s;
      if (num % n != 0) return;
      found.insert({n, 2, e, -num / n, s, model.up_to_sign({x})});
    };
    if (e % n == 0) {
      add(1, 0);
    } else if (prime) {
      for (Integer a = 1; a < n; ++a)
        if (mod_floor(a * a - e, n) == 0) add(n, a);
    }
  }
  out.components.assign(found.begin(), found.end());
  return out;
}

}  // namespace hkp
