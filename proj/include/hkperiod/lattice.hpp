#pragma once

#include "arith.hpp"
#include "matrix.hpp"
#include "quadfield.hpp"

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

namespace hkp {

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Nondegenerate integral lattice given by its Gram matrix.
struct Lattice {
  IntMatrix gram;
  unsigned hyperbolic_planes = 0;  // number of U summands known from construction

  std::size_t rank() const { return gram.rows(); }
  bool operator==(const Lattice&) const = default;
};

inline Lattice make_lattice(IntMatrix gram, unsigned hyperbolic_planes = 0) {
  if (!gram.is_symmetric()) throw std::invalid_argument("Gram matrix must be symmetric");
  if (gram.rows() == 0) throw std::invalid_argument("Gram matrix must be nonempty");
  if (determinant(gram) == 0) throw std::invalid_argument("Gram matrix must be nondegenerate");
  return Lattice{std::move(gram), hyperbolic_planes};
}

inline Lattice hyperbolic_plane() { return Lattice{IntMatrix{{0, 1}, {1, 0}}, 1}; }

inline Lattice rank_one(const Integer& k) {
  if (k == 0) throw std::invalid_argument("rank one lattice needs a nonzero square");
  return Lattice{IntMatrix{{k}}, 0};
}

/// E8 root lattice scaled by -1.
inline Lattice e8_negative() {
  IntMatrix g(8, 8);
  for (std::size_t i = 0; i < 8; ++i) g(i, i) = -2;
  auto link = [&](std::size_t i, std::size_t j) { g(i, j) = g(j, i) = 1; };
  for (std::size_t i = 0; i + 1 < 7; ++i) link(i, i + 1);
  link(4, 7);
  return Lattice{g, 0};
}

inline Lattice direct_sum(const Lattice& x, const Lattice& y) {
  const std::size_t n = x.rank(), m = y.rank();
  IntMatrix g(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = x.gram(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(n + i, n + j) = y.gram(i, j);
  return Lattice{g, x.hyperbolic_planes + y.hyperbolic_planes};
}

inline Lattice direct_sum(std::initializer_list<Lattice> parts) {
  auto it = parts.begin();
  Lattice out = *it++;
  for (; it != parts.end(); ++it) out = direct_sum(out, *it);
  return out;
}

inline Lattice rescale(const Lattice& l, const Integer& t) {
  if (t == 0) throw std::invalid_argument("rescaling factor must be nonzero");
  Lattice out = l;
  for (std::size_t i = 0; i < l.rank(); ++i)
    for (std::size_t j = 0; j < l.rank(); ++j) out.gram(i, j) *= t;
  if (abs(t) != 1) out.hyperbolic_planes = 0;
  return out;
}

/// U^3 + E8(-1)^2 + <-2>; basis u1 v1 u2 v2 u3 v3, two E8 blocks, then l.
inline Lattice k3_2_lattice() {
  const Lattice u = hyperbolic_plane(), e8 = e8_negative();
  return direct_sum({u, u, u, e8, e8, rank_one(-2)});
}

inline void check_polarization_type(const Integer& n, int gamma) {
  require_positive(n, "n");
  if (gamma != 1 && gamma != 2) throw std::invalid_argument("gamma must be 1 or 2");
  if (gamma == 2 && mod_floor(n, 4) != 3) throw hypothesis_error("gamma = 2 requires n = -1 (mod 4)");
}

/// Orthogonal complement of a polarization of degree 2n and divisibility gamma.
inline Lattice lambda_polarized(const Integer& n, int gamma) {
  check_polarization_type(n, gamma);
  const Lattice u = hyperbolic_plane(), e8 = e8_negative();
  if (gamma == 1) return direct_sum({u, u, e8, e8, rank_one(-2), rank_one(-2 * n)});
  return direct_sum({u, u, e8, e8, Lattice{IntMatrix{{-2, -1}, {-1, -(n + 1) / 2}}, 0}});
}

inline Integer pairing(const Lattice& l, const IntVector& x, const IntVector& y) {
  const IntVector gy = l.gram.apply(y);
  Integer s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * gy[i];
  return s;
}

inline Rational pairing(const Lattice& l, const RatVector& x, const RatVector& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * Rational(l.gram(i, j)) * y[j];
  }
  return s;
}

inline Integer square(const Lattice& l, const IntVector& x) { return pairing(l, x, x); }

inline bool is_even(const Lattice& l) {
  for (std::size_t i = 0; i < l.rank(); ++i)
    if (mod_floor(l.gram(i, i), 2) != 0) return false;
  return true;
}

inline Integer content(const IntVector& x) {
  Integer g = 0;
  for (const auto& c : x) g = gcd(g, c);
  return g;
}

/// Positive generator of the ideal x . L.
inline Integer divisibility(const Lattice& l, const IntVector& x) {
  if (x.size() != l.rank()) throw std::invalid_argument("vector length mismatch");
  if (content(x) == 0) throw std::invalid_argument("divisibility of the zero vector");
  return content(l.gram.apply(x));
}

/// (positive, negative) inertia, computed by exact symmetric elimination.
inline std::pair<int, int> signature(const Lattice& l) {
  const std::size_t n = l.rank();
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = l.gram(i, j);
  int pos = 0, neg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, p) == 0) ++p;
      if (p < n) {
        m.swap_rows(k, p);
        m.swap_cols(k, p);
      } else {
        std::size_t q = k + 1;
        while (q < n && m(k, q) == 0) ++q;
        if (q == n) throw std::invalid_argument("degenerate form");
        // replace e_k by e_k + e_q, giving diagonal 2 m(k,q)
        m.add_row(k, q, 1);
        m.add_col(k, q, 1);
      }
    }
    const Rational piv = m(k, k);
    (piv > 0 ? pos : neg)++;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      const Rational f = m(i, k) / piv;
      m.add_row(i, k, -f);
      m.add_col(i, k, -f);
    }
  }
  return {pos, neg};
}

using DiscElement = std::vector<Integer>;

/// Discriminant group L^v / L with its quadratic form valued in Q/2Z.
class DiscriminantGroup {
public:
  explicit DiscriminantGroup(const Lattice& l) : lattice_(l) {
    const SmithForm snf = smith_normal_form(l.gram);
    for (std::size_t i = 0; i < snf.invariants.size(); ++i) {
      const Integer d = snf.invariants[i];
      if (d == 1) {
        unit_rows_.push_back(i);
        continue;
      }
      orders_.push_back(d);
      RatVector g(l.rank());
      for (std::size_t r = 0; r < l.rank(); ++r) g[r] = make_rational(snf.v(r, i), d);
      generators_.push_back(g);
      rows_.push_back(i);
    }
    v_inv_ = snf.v_inv;
    gen_pairs_ = RatMatrix(orders_.size(), orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i)
      for (std::size_t j = 0; j < orders_.size(); ++j) gen_pairs_(i, j) = pairing(l, generators_[i], generators_[j]);
  }

  const std::vector<Integer>& orders() const { return orders_; }
  const std::vector<RatVector>& generators() const { return generators_; }
  const Lattice& lattice() const { return lattice_; }

  Integer size() const {
    Integer s = 1;
    for (const auto& d : orders_) s *= d;
    return s;
  }

  DiscElement zero() const { return DiscElement(orders_.size(), 0); }

  DiscElement add(const DiscElement& x, const DiscElement& y) const {
    DiscElement z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = mod_floor(x[i] + y[i], orders_[i]);
    return z;
  }

  DiscElement scale(const DiscElement& x, const Integer& k) const {
    DiscElement z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = mod_floor(x[i] * k, orders_[i]);
    return z;
  }

  DiscElement negate(const DiscElement& x) const { return scale(x, -1); }

  RatVector lift(const DiscElement& x) const {
    RatVector y(lattice_.rank(), Rational(0));
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t r = 0; r < y.size(); ++r) y[r] += Rational(x[i]) * generators_[i][r];
    return y;
  }

  /// Discriminant quadratic form, normalized to [0, 2).
  Rational qbar(const DiscElement& x) const { return reduce(form(x, x), 2); }

  /// Discriminant bilinear form, normalized to [0, 1).
  Rational bbar(const DiscElement& x, const DiscElement& y) const {
    return reduce(form(x, y), 1);
  }

  /// Class of a dual vector given in lattice coordinates.
  DiscElement class_of(const RatVector& y) const {
    RatVector z(y.size(), Rational(0));
    for (std::size_t i = 0; i < y.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j) z[i] += Rational(v_inv_(i, j)) * y[j];
    for (std::size_t i : unit_rows_)
      if (z[i].get_den() != 1) throw std::invalid_argument("vector is not in the dual lattice");
    DiscElement c(orders_.size());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Rational w = z[rows_[k]] * Rational(orders_[k]);
      if (w.get_den() != 1) throw std::invalid_argument("vector is not in the dual lattice");
      c[k] = mod_floor(w.get_num(), orders_[k]);
    }
    return c;
  }

  /// Class of x / s for an integral vector x.
  DiscElement class_of_scaled(const IntVector& x, const Integer& s) const {
    RatVector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = make_rational(x[i], s);
    return class_of(y);
  }

  void for_each_element(const std::function<void(const DiscElement&)>& f) const {
    DiscElement x = zero();
    for (;;) {
      f(x);
      std::size_t i = 0;
      while (i < x.size()) {
        if (++x[i] < orders_[i]) break;
        x[i] = 0;
        ++i;
      }
      if (i == x.size()) return;
    }
  }

  std::vector<DiscElement> elements() const {
    std::vector<DiscElement> out;
    for_each_element([&](const DiscElement& x) { out.push_back(x); });
    return out;
  }

  /// Canonical representative of {x, -x}.
  DiscElement up_to_sign(const DiscElement& x) const {
    const DiscElement y = negate(x);
    return y < x ? y : x;
  }

private:
  Rational form(const DiscElement& x, const DiscElement& y) const {
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < y.size(); ++j)
        if (y[j] != 0) s += Rational(x[i] * y[j]) * gen_pairs_(i, j);
    }
    return s;
  }

  static Rational reduce(const Rational& q, long m) {
    Integer fl;
    const Integer den = q.get_den() * m;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), den.get_mpz_t());
    Rational r = q - Rational(fl * m);
    r.canonicalize();
    return r;
  }

  Lattice lattice_;
  std::vector<Integer> orders_;
  std::vector<RatVector> generators_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> unit_rows_;
  IntMatrix v_inv_;
  RatMatrix gen_pairs_;
};

inline DiscriminantGroup disc_group(const Lattice& l) { return DiscriminantGroup(l); }

struct EichlerInvariant {
  Integer square;
  Integer divisibility;
  DiscElement star;  // class of x / div(x)
  bool criterion_applies;  // lattice known to contain two orthogonal copies of U
};

inline EichlerInvariant eichler_invariant(const Lattice& l, const DiscriminantGroup& dg, const IntVector& x) {
  if (content(x) != 1) throw std::invalid_argument("vector must be primitive");
  const Integer d = divisibility(l, x);
  return {square(l, x), d, dg.class_of_scaled(x, d), l.hyperbolic_planes >= 2};
}

inline EichlerInvariant eichler_invariant(const Lattice& l, const IntVector& x) {
  return eichler_invariant(l, DiscriminantGroup(l), x);
}

struct DiscIsometries {
  std::vector<std::vector<DiscElement>> maps;  // images of the generators
  bool minus_id_is_id;

  std::size_t order() const { return maps.size(); }
  std::size_t quotient_order() const { return minus_id_is_id ? maps.size() : maps.size() / 2; }
};

/// All automorphisms of the discriminant group preserving qbar, by exhaustion.
inline DiscIsometries disc_form_isometries(const DiscriminantGroup& dg) {
  const auto elems = dg.elements();
  const std::size_t k = dg.orders().size();
  std::vector<Rational> q;
  q.reserve(elems.size());
  for (const auto& x : elems) q.push_back(dg.qbar(x));

  // candidate images per generator: same order-dividing and same qbar
  std::vector<std::vector<std::size_t>> cands(k);
  for (std::size_t g = 0; g < k; ++g) {
    DiscElement gen = dg.zero();
    gen[g] = 1;
    const Rational qg = dg.qbar(gen);
    for (std::size_t i = 0; i < elems.size(); ++i)
      if (q[i] == qg && dg.scale(elems[i], dg.orders()[g]) == dg.zero()) cands[g].push_back(i);
  }

  DiscIsometries out;
  std::vector<std::size_t> pick(k, 0);
  auto image = [&](const DiscElement& x) {
    DiscElement y = dg.zero();
    for (std::size_t g = 0; g < k; ++g) y = dg.add(y, dg.scale(elems[cands[g][pick[g]]], x[g]));
    return y;
  };
  const bool some_empty = std::any_of(cands.begin(), cands.end(), [](const auto& c) { return c.empty(); });
  if (k == 0) {
    out.maps.push_back({});
  } else if (!some_empty) {
    for (;;) {
      bool ok = true;
      std::vector<DiscElement> seen;
      seen.reserve(elems.size());
      for (std::size_t i = 0; i < elems.size() && ok; ++i) {
        const DiscElement y = image(elems[i]);
        if (dg.qbar(y) != q[i]) ok = false;
        seen.push_back(y);
      }
      if (ok) {
        std::sort(seen.begin(), seen.end());
        ok = std::adjacent_find(seen.begin(), seen.end()) == seen.end();
      }
      if (ok) {
        std::vector<DiscElement> m;
        for (std::size_t g = 0; g < k; ++g) m.push_back(elems[cands[g][pick[g]]]);
        out.maps.push_back(m);
      }
      std::size_t g = 0;
      while (g < k) {
        if (++pick[g] < cands[g].size()) break;
        pick[g] = 0;
        ++g;
      }
      if (g == k) break;
    }
  }
  bool minus_is_id = true;
  for (const auto& x : elems)
    if (dg.negate(x) != x) minus_is_id = false;
  out.minus_id_is_id = minus_is_id;
  return out;
}

}  // namespace hkp
