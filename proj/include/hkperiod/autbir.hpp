#pragma once

#include "arith.hpp"
#include "cones.hpp"
#include "lattice.hpp"
#include "pell.hpp"

#include <string>

namespace hkp {

enum class GroupClass { Trivial, OrderTwo, InfiniteCyclic, InfiniteDihedral };

inline const char* to_string(GroupClass g) {
  switch (g) {
    case GroupClass::Trivial: return "Trivial";
    case GroupClass::OrderTwo: return "OrderTwo";
    case GroupClass::InfiniteCyclic: return "InfiniteCyclic";
    case GroupClass::InfiniteDihedral: return "InfiniteDihedral";
  }
  return "?";
}

/// 2x2 isometry in the Picard basis; columns are the images of the basis vectors.
struct NamedMatrix {
  std::string name;
  IntMatrix matrix;
};

struct AutBir {
  GroupClass aut;
  GroupClass bir;
  std::string branch;
  std::vector<NamedMatrix> matrices;
};

inline bool is_isometry(const IntMatrix& m, const IntMatrix& gram) { return m.transpose() * gram * m == gram; }

inline Integer det2(const IntMatrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

/// Very general polarized member of Picard rank one.
inline AutBir rank1_bir(const Integer& n, int gamma) {
  check_polarization_type(n, gamma);
  const bool two = n == 1 && gamma == 1;
  const GroupClass g = two ? GroupClass::OrderTwo : GroupClass::Trivial;
  return {g, g, two ? "degree two" : "rank one", {}};
}

/// Generator R of SO+(Pic), from the minimal solution of P_e(n).
inline IntMatrix rotation_generator(const Integer& n, const Integer& e_prime) {
  check_special(n, e_prime);
  return detail::rotation_matrix(n, e_prime);
}

/// Generator of the rotations that extend to the whole lattice, from the fundamental unit.
inline IntMatrix lifting_rotation(const Integer& n, const Integer& e_prime) {
  check_special(n, e_prime);
  const Integer e = n * e_prime;
  if (is_perfect_square(e)) throw hypothesis_error("requires e not a perfect square");
  const auto u = fundamental_unit(e);
  const Integer d = 2 * e * u.b * u.b + 1;
  return IntMatrix{{d, 2 * e_prime * u.a * u.b}, {2 * n * u.a * u.b, d}};
}

/// Reflection attached to the minimal solution (n r, s) of P_e(n).
inline IntMatrix involution_matrix_special(const Integer& n, const Integer& e_prime) {
  check_special(n, e_prime);
  const Integer e = n * e_prime;
  const auto sol = minimal_solution(e, n);
  if (!sol) throw hypothesis_error("requires P_e(n) solvable");
  const Integer r = sol->a / n, s = sol->b;
  const Integer d = 2 * s * s * e_prime + 1;
  return IntMatrix{{d, -2 * e_prime * r * s}, {2 * n * r * s, -d}};
}

/// Whether [[a, alpha e'' b], [n' b, alpha a]] extended by eps * Id on the orthogonal
/// of Pic is an isometry of the full lattice preserving the positive cone.
inline bool extends_to_lattice(const Integer& n, const Integer& e_prime, const Integer& a, const Integer& b, int alpha,
                               int eps) {
  const Integer delta = gcd(n, e_prime);
  const Integer np = n / delta, epp = e_prime / delta;
  if (a * a - np * epp * b * b != 1) throw std::invalid_argument("(a, b) must solve a^2 - n'e''b^2 = 1");
  return a > 0 && mod_floor(b, 2 * delta) == 0 && mod_floor(a - eps, n) == 0 && mod_floor(a - alpha * eps, 2 * e_prime) == 0;
}

inline AutBir special_aut_bir(const Integer& n, const Integer& e_prime) {
  check_special(n, e_prime);
  const Integer e = n * e_prime;
  if (is_perfect_square(e) || is_solvable(e, -n))
    return {GroupClass::Trivial, GroupClass::Trivial, "P_e(-n) solvable or e a perfect square", {}};
  const bool involutions = is_solvable(e, n);
  const GroupClass g = involutions ? GroupClass::InfiniteDihedral : GroupClass::InfiniteCyclic;
  std::vector<NamedMatrix> ms{{"rotation", lifting_rotation(n, e_prime)}};
  if (involutions) ms.push_back({"involution", involution_matrix_special(n, e_prime)});
  if (is_solvable(4 * e, -5 * n)) return {GroupClass::Trivial, g, "P_4e(-5n) solvable", ms};
  return {g, g, "no -2 or -10 walls", ms};
}

inline bool hilb_first_case(const Integer& e) {
  return e == 1 || (!is_perfect_square(e) && is_solvable(e, -1) && !is_solvable(4 * e, 5));
}

inline bool hilb_second_case(const Integer& e) {
  return e > 1 && !is_perfect_square(e) && (e == 5 || e % 5 != 0) && is_solvable(e, -1) && is_solvable(4 * e, 5);
}

inline GroupClass hilb_aut(const Integer& e) {
  require_positive(e, "e");
  return hilb_first_case(e) ? GroupClass::OrderTwo : GroupClass::Trivial;
}

inline GroupClass hilb_bir(const Integer& e) {
  require_positive(e, "e");
  return hilb_first_case(e) || hilb_second_case(e) ? GroupClass::OrderTwo : GroupClass::Trivial;
}

/// Action on (L2, delta) of the nontrivial automorphism or birational involution.
/// For e = 1 the involution acts trivially on Pic.
inline IntMatrix hilb_involution_matrix(const Integer& e) {
  if (hilb_bir(e) != GroupClass::OrderTwo) throw hypothesis_error("requires a nontrivial birational involution");
  if (e == 1) return IntMatrix::identity(2);
  const auto u = fundamental_unit(e);
  return IntMatrix{{u.a, u.b}, {-e * u.b, -u.a}};
}

inline AutBir hilb_aut_bir(const Integer& e) {
  const GroupClass aut = hilb_aut(e), bir = hilb_bir(e);
  std::vector<NamedMatrix> ms;
  if (bir == GroupClass::OrderTwo) ms.push_back({"involution", hilb_involution_matrix(e)});
  std::string branch = aut == GroupClass::OrderTwo ? "regular involution"
                       : bir == GroupClass::OrderTwo ? "birational involution"
                                                     : "none";
  return {aut, bir, branch, ms};
}

}  // namespace hkp
