#pragma once

#include "hkperiod/autbir.hpp"
#include "hkperiod/cones.hpp"
#include "hkperiod/heegner.hpp"
#include "hkperiod/lattice.hpp"
#include "hkperiod/pell.hpp"
#include "hkperiod/periodimage.hpp"
#include "hkperiod/specialmaps.hpp"

#include <CLI11/CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <thread>

namespace hkp::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* version = "0.1.0";

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

class usage_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Rows for csv and text output; json carries the full document.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Payload {
  json doc;
  Table table;
};

// ---- parsing -------------------------------------------------------------

inline Integer parse_integer(const std::string& s, const char* name) {
  static const std::regex re("^[+-]?[0-9]+$");
  if (!std::regex_match(s, re)) throw usage_error(std::string("malformed integer for ") + name + ": '" + s + "'");
  return Integer(s[0] == '+' ? s.substr(1) : s);
}

inline long parse_long(const std::string& s, const char* name) {
  const Integer v = parse_integer(s, name);
  if (!v.fits_slong_p()) throw usage_error(std::string(name) + " out of range");
  return v.get_si();
}

/// "a..b" (inclusive) or a single integer.
inline std::vector<long> parse_range(const std::string& s, const char* name) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) return {parse_long(s, name)};
  const long lo = parse_long(s.substr(0, dots), name), hi = parse_long(s.substr(dots + 2), name);
  std::vector<long> out;
  for (long v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

inline int parse_gamma(const std::string& s) {
  const long g = parse_long(s, "--gamma");
  if (g != 1 && g != 2) throw usage_error("--gamma must be 1 or 2");
  return static_cast<int>(g);
}

// ---- serialization -------------------------------------------------------

inline json jint(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

inline std::string quad_exact(const QuadNum& x) {
  if (x.b() == 0) return to_string(x.a());
  std::string r = to_string(x.b()) + "*sqrt(" + to_string(x.rad()) + ")";
  if (x.b() == 1) r = "sqrt(" + to_string(x.rad()) + ")";
  if (x.a() == 0) return r;
  return to_string(x.a()) + " + " + r;
}

inline json jquad(const QuadNum& x) {
  return json{{"exact", quad_exact(x)},
              {"rational", to_string(x.a())},
              {"sqrt_coefficient", to_string(x.b())},
              {"radicand", jint(x.rad())},
              {"approx", x.to_double()}};
}

inline json jmatrix(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(jint(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

inline json jstar(const KappaStar& k) {
  json a = json::array();
  for (const auto& x : k) a.push_back(jint(x));
  return a;
}

inline std::string star_str(const KappaStar& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + to_string(k[i]);
  return s + ")";
}

inline std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::string render_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + csv_field(xs[i]);
    out += "\r\n";
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  return out;
}

inline std::string render_text(const Table& t) {
  std::vector<std::size_t> w(t.columns.size(), 0);
  for (std::size_t i = 0; i < t.columns.size(); ++i) w[i] = t.columns[i].size();
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
  std::string out;
  auto line = [&](const std::vector<std::string>& xs) {
    std::string l;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      l += xs[i];
      if (i + 1 < xs.size()) l += std::string(w[i] - xs[i].size() + 2, ' ');
    }
    out += l + "\n";
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  return out;
}

/// Table from an array of flat json objects, one column per key of the first row.
inline Table table_from(const std::vector<std::string>& columns, const json& rows) {
  Table t{columns, {}};
  for (const auto& r : rows) {
    std::vector<std::string> row;
    for (const auto& c : columns) row.push_back(r.contains(c) ? cell(r.at(c)) : "");
    t.rows.push_back(row);
  }
  return t;
}

// ---- parallel map with ordered assembly ----------------------------------

template <class R>
std::vector<R> parallel_map(std::size_t count, unsigned threads, const std::function<R(std::size_t)>& f) {
  std::vector<R> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---- commands ------------------------------------------------------------

struct Options {
  std::string n, gamma, e, e_prime, t, m, bound, list, kind, count, threads;
  bool isometries = false;
  std::string format = "json";
  std::string out;
  std::string target;
};

inline json header(const char* command) { return json{{"version", version}, {"command", command}}; }

inline Integer need(const std::string& v, const char* name) {
  if (v.empty()) throw usage_error(std::string(name) + " is required");
  return parse_integer(v, name);
}

inline json pell_row(const Integer& e, const Integer& t) {
  const auto s = minimal_solution(e, t);
  json r{{"e", jint(e)}, {"t", jint(t)}, {"solvable", s.has_value()}};
  r["a"] = s ? jint(s->a) : json(nullptr);
  r["b"] = s ? jint(s->b) : json(nullptr);
  return r;
}

inline Payload cmd_pell(const Options& o) {
  const Integer e = need(o.e, "--e"), t = need(o.t, "--t");
  if (t == 0) throw usage_error("--t must be nonzero");
  require_positive(e, "e");
  json doc = header("pell");
  doc["e"] = jint(e);
  doc["t"] = jint(t);
  const auto s = minimal_solution(e, t);
  doc["solvable"] = s.has_value();
  doc["minimal"] = s ? json{{"a", jint(s->a)}, {"b", jint(s->b)}} : json(nullptr);
  json rows = json::array();
  if (!o.list.empty()) {
    const Integer bound = parse_integer(o.list, "--list");
    json sols = json::array();
    for (const auto& x : solutions_up_to(e, t, bound)) {
      sols.push_back({{"a", jint(x.a)}, {"b", jint(x.b)}});
      rows.push_back({{"e", jint(e)}, {"t", jint(t)}, {"a", jint(x.a)}, {"b", jint(x.b)}});
    }
    doc["solutions"] = sols;
  } else if (s) {
    rows.push_back({{"e", jint(e)}, {"t", jint(t)}, {"a", jint(s->a)}, {"b", jint(s->b)}});
  }
  return {doc, table_from({"e", "t", "a", "b"}, rows)};
}

inline Payload cmd_lattice(const Options& o) {
  const Integer n = need(o.n, "--n");
  const int gamma = parse_gamma(o.gamma.empty() ? "1" : o.gamma);
  const Lattice l = lambda_polarized(n, gamma);
  const DiscriminantGroup dg(l);
  const auto [pos, neg] = signature(l);
  json doc = header("lattice");
  doc["n"] = jint(n);
  doc["gamma"] = gamma;
  doc["rank"] = l.rank();
  doc["signature"] = {pos, neg};
  doc["determinant"] = jint(determinant(l.gram));
  json orders = json::array();
  std::string os;
  for (const auto& d : dg.orders()) {
    orders.push_back(jint(d));
    os += (os.empty() ? "" : "x") + to_string(d);
  }
  doc["discriminant_orders"] = orders;
  doc["discriminant_size"] = jint(dg.size());
  json row{{"n", jint(n)}, {"gamma", gamma}, {"rank", l.rank()}, {"signature", std::to_string(pos) + "," + std::to_string(neg)},
           {"discriminant", os}};
  if (o.isometries) {
    const auto iso = disc_form_isometries(dg);
    doc["isometries"] = {{"order", iso.order()},
                         {"quotient_order", iso.quotient_order()},
                         {"minus_id_is_id", iso.minus_id_is_id}};
    row["isometries"] = iso.order();
    row["quotient_order"] = iso.quotient_order();
  }
  return {doc, table_from({"n", "gamma", "rank", "signature", "discriminant", "isometries", "quotient_order"},
                          json::array({row}))};
}

inline json component_json(const HeegnerComponent& c, bool in_img) {
  return json{{"s", jint(c.s)}, {"kappa_sq", jint(c.kappa_sq)}, {"kappa_star", jstar(c.kappa_star)}, {"in_image", in_img}};
}

inline Payload cmd_heegner(const Options& o) {
  const Integer n = need(o.n, "--n"), e = need(o.e, "--e");
  const int gamma = parse_gamma(o.gamma.empty() ? "1" : o.gamma);
  check_polarization_type(n, gamma);
  require_positive(e, "e");
  std::optional<long> bound;
  if (!o.bound.empty()) bound = parse_long(o.bound, "--bound");
  const auto res = heegner_components(n, gamma, e, bound);
  json doc = header("heegner");
  doc["n"] = jint(n);
  doc["gamma"] = gamma;
  doc["e"] = jint(e);
  doc["nonempty"] = heegner_nonempty(n, gamma, e);
  doc["provenance"] = to_string(res.provenance);
  doc["stable_under_doubling"] = res.stable_under_doubling;
  json comps = json::array(), rows = json::array();
  for (const auto& c : res.components) {
    const bool img = in_image(n, gamma, c);
    comps.push_back(component_json(c, img));
    rows.push_back({{"n", jint(n)}, {"gamma", gamma}, {"e", jint(e)}, {"s", jint(c.s)}, {"kappa_sq", jint(c.kappa_sq)},
                    {"kappa_star", star_str(c.kappa_star)}, {"in_image", img}});
  }
  doc["components"] = comps;
  return {doc, table_from({"n", "gamma", "e", "s", "kappa_sq", "kappa_star", "in_image"}, rows)};
}

inline json excluded_rows(const Integer& n, int gamma, json* full) {
  json rows = json::array();
  for (const auto& x : excluded_divisors(n, gamma)) {
    if (full)
      full->push_back({{"e", jint(x.e)},
                       {"s", jint(x.s)},
                       {"kappa_star", jstar(x.kappa_star)},
                       {"kappa_sq", jint(x.kappa_sq)},
                       {"source", to_string(x.source)},
                       {"count_asserted", x.count_asserted},
                       {"note", x.note}});
    rows.push_back({{"n", jint(n)}, {"gamma", gamma}, {"e", jint(x.e)}, {"s", jint(x.s)},
                    {"kappa_star", star_str(x.kappa_star)}, {"source", to_string(x.source)},
                    {"count_asserted", x.count_asserted}});
  }
  return rows;
}

inline const std::vector<std::string>& excluded_columns() {
  static const std::vector<std::string> c{"n", "gamma", "e", "s", "kappa_star", "source", "count_asserted"};
  return c;
}

inline Payload cmd_period_image(const Options& o) {
  const Integer n = need(o.n, "--n");
  const int gamma = parse_gamma(o.gamma.empty() ? "1" : o.gamma);
  json doc = header("period-image");
  doc["n"] = jint(n);
  doc["gamma"] = gamma;
  json excluded = json::array();
  const json rows = excluded_rows(n, gamma, &excluded);
  doc["excluded"] = excluded;
  return {doc, table_from(excluded_columns(), rows)};
}

inline PicardFamily family_of(const Options& o) {
  if (!o.e_prime.empty()) return special_family(need(o.n, "--n"), need(o.e_prime, "--e-prime"));
  if (!o.n.empty()) throw usage_error("--n requires --e-prime (special family); use --e alone for a Hilbert square");
  return hilbert_family(need(o.e, "--e"));
}

inline Payload cmd_cones(const Options& o) {
  const PicardFamily f = family_of(o);
  const ConeSlopes s = family_slopes(f);
  const bool hilb = f.kind == FamilyKind::HilbertSquare;
  json doc = header("cones");
  doc["family"] = hilb ? "hilbert-square" : "special";
  doc["n"] = jint(f.n);
  doc["e"] = jint(f.e);
  doc["e_prime"] = hilb ? json(nullptr) : jint(f.e_prime);
  doc["gram"] = jmatrix(f.gram);
  doc["movable"] = jquad(s.movable);
  doc["nef"] = jquad(s.nef);
  json rows = json::array();
  rows.push_back({{"boundary", "movable"}, {"exact", quad_exact(s.movable)}, {"approx", s.movable.to_double()}});
  rows.push_back({{"boundary", "nef"}, {"exact", quad_exact(s.nef)}, {"approx", s.nef.to_double()}});
  if (!o.bound.empty()) {
    const Integer bound = parse_integer(o.bound, "--bound");
    json walls = json::array();
    for (auto profile : {WallProfile::Div, WallProfile::Flop})
      for (const auto& w : wall_classes(f, profile, bound)) {
        const auto slope = wall_slope(f, w);
        walls.push_back({{"x", jint(w.x)},
                         {"y", jint(w.y)},
                         {"square", jint(w.square)},
                         {"divisibility", jint(w.divisibility)},
                         {"profile", to_string(profile)},
                         {"slope", slope ? json(to_string(*slope)) : json(nullptr)}});
      }
    doc["walls"] = walls;
  }
  return {doc, table_from({"boundary", "exact", "approx"}, rows)};
}

inline json autbir_json(const AutBir& r) {
  json ms = json::array();
  for (const auto& m : r.matrices) ms.push_back({{"name", m.name}, {"matrix", jmatrix(m.matrix)}});
  return json{{"aut", to_string(r.aut)}, {"bir", to_string(r.bir)}, {"branch", r.branch}, {"matrices", ms}};
}

inline Payload cmd_aut(const Options& o) {
  json doc = header("aut");
  AutBir r;
  if (!o.e_prime.empty()) {
    const Integer n = need(o.n, "--n"), ep = need(o.e_prime, "--e-prime");
    r = special_aut_bir(n, ep);
    doc["family"] = "special";
    doc["n"] = jint(n);
    doc["e_prime"] = jint(ep);
    doc["e"] = jint(n * ep);
  } else if (!o.e.empty()) {
    if (!o.n.empty()) throw usage_error("--n requires --e-prime (special family); use --e alone for a Hilbert square");
    const Integer e = need(o.e, "--e");
    r = hilb_aut_bir(e);
    doc["family"] = "hilbert-square";
    doc["e"] = jint(e);
  } else {
    const Integer n = need(o.n, "--n");
    const int gamma = parse_gamma(o.gamma.empty() ? "1" : o.gamma);
    r = rank1_bir(n, gamma);
    doc["family"] = "rank-one";
    doc["n"] = jint(n);
    doc["gamma"] = gamma;
  }
  const json groups = autbir_json(r);
  for (auto it = groups.begin(); it != groups.end(); ++it) doc[it.key()] = it.value();
  json rows = json::array({{{"aut", to_string(r.aut)}, {"bir", to_string(r.bir)}, {"branch", r.branch}}});
  return {doc, table_from({"aut", "bir", "branch"}, rows)};
}

inline json choice_row(const PolarizationChoice& p, bool epw) {
  json r{{"n", jint(p.n)}, {"e", jint(p.e)}, {"a", jint(p.a)}, {"b", jint(p.b)}, {"gamma", p.gamma},
         {"target", target_label(p)}, {"epw", epw}};
  return r;
}

inline Payload cmd_hilb(const Options& o) {
  const Integer n = need(o.n, "--n"), e = need(o.e, "--e");
  std::optional<Integer> bound;
  if (!o.bound.empty()) bound = parse_integer(o.bound, "--bound");
  json doc = header("hilb");
  doc["n"] = jint(n);
  doc["e"] = jint(e);
  doc["nu"] = jquad(hilb_slopes(e).nef);
  doc["general_type"] = k3_moduli_general_type(e);
  const bool epw = is_epw_hilb(e);
  doc["epw"] = epw;
  json rows = json::array();
  for (const auto& p : hilb_square_polarizations(n, e, bound)) rows.push_back(choice_row(p, epw));
  doc["polarizations"] = rows;
  return {doc, table_from({"n", "e", "a", "b", "gamma", "target", "epw"}, rows)};
}

inline Payload cmd_maps(const Options& o) {
  const Integer n = need(o.n, "--n"), ep = need(o.e_prime, "--e-prime"), m = need(o.m, "--m");
  std::optional<Integer> bound;
  if (!o.bound.empty()) bound = parse_integer(o.bound, "--bound");
  json doc = header("maps");
  doc["n"] = jint(n);
  doc["e_prime"] = jint(ep);
  doc["e"] = jint(n * ep);
  doc["m"] = jint(m);
  json rows = json::array();
  for (const auto& p : special_to_moduli_maps(n, ep, m, bound)) {
    json r = choice_row(p, false);
    r.erase("epw");
    r["self_map"] = p.self_map;
    rows.push_back(r);
  }
  doc["maps"] = rows;
  return {doc, table_from({"n", "e", "a", "b", "gamma", "target", "self_map"}, rows)};
}

inline Payload cmd_epw(const Options& o) {
  json doc = header("epw");
  if (!o.e_prime.empty()) {
    const Integer n = need(o.n, "--n"), ep = need(o.e_prime, "--e-prime"), e = n * ep;
    doc["family"] = "special";
    doc["n"] = jint(n);
    doc["e_prime"] = jint(ep);
    doc["e"] = jint(e);
    doc["epw"] = is_epw_special(n, ep);
    doc["criteria"] = {{"P_e(n)", is_solvable(e, n)}, {"P_4e(-5n)", is_solvable(4 * e, -5 * n)}};
  } else {
    const Integer e = need(o.e, "--e");
    require_positive(e, "e");
    doc["family"] = "hilbert-square";
    doc["e"] = jint(e);
    doc["epw"] = is_epw_hilb(e);
    doc["criteria"] = {{"P_e(-1)", is_solvable(e, -1)}, {"P_4e(5)", is_solvable(4 * e, 5)}};
    if (e < 3) doc["note"] = "requires e >= 3";
  }
  json rows = json::array({{{"e", doc["e"]}, {"epw", doc["epw"]}}});
  return {doc, table_from({"e", "epw"}, rows)};
}

inline Payload cmd_families(const Options& o) {
  const Integer n = need(o.n, "--n");
  const long count = o.count.empty() ? 10 : parse_long(o.count, "--count");
  const std::string kind = o.kind.empty() ? "1" : o.kind;
  json doc = header("families");
  doc["n"] = jint(n);
  doc["kind"] = kind;
  json rows = json::array();
  if (kind == "epw") {
    for (const auto& e : epw_family_e_values(n, count)) rows.push_back({{"e", jint(e)}, {"epw", is_epw_special(n, e / n)}});
    doc["members"] = rows;
    return {doc, table_from({"e", "epw"}, rows)};
  }
  if (kind != "1" && kind != "2") throw usage_error("--kind must be 1, 2 or epw");
  for (const auto& x : hilb_family_e_values(n, kind == "1" ? 1 : 2, count))
    rows.push_back({{"m", jint(x.m)}, {"e", jint(x.e)}, {"a", jint(x.a)}, {"b", jint(x.b)}, {"passes", x.passes}});
  doc["members"] = rows;
  return {doc, table_from({"m", "e", "a", "b", "passes"}, rows)};
}

inline unsigned thread_count(const Options& o) {
  if (!o.threads.empty()) return static_cast<unsigned>(std::max(1L, parse_long(o.threads, "--threads")));
  return std::max(1u, std::thread::hardware_concurrency());
}

inline std::vector<int> gammas_of(const Options& o) {
  if (o.gamma.empty()) return {1, 2};
  std::vector<int> out;
  for (long g : parse_range(o.gamma, "--gamma")) {
    if (g != 1 && g != 2) throw usage_error("--gamma must be 1 or 2");
    out.push_back(static_cast<int>(g));
  }
  return out;
}

inline bool valid_pair(long n, int gamma) { return n >= 1 && (gamma == 1 || n % 4 == 3); }

inline Payload cmd_sweep(const Options& o) {
  const unsigned threads = thread_count(o);
  json doc = header("sweep");
  doc["target"] = o.target;
  std::vector<std::string> columns;
  std::vector<std::function<json()>> jobs;
  auto range = [&](const std::string& v, const char* name) {
    if (v.empty()) throw usage_error(std::string(name) + " is required");
    return parse_range(v, name);
  };
  if (o.target == "heegner") {
    columns = {"n", "gamma", "e", "components", "provenance", "stable_under_doubling"};
    for (long n : range(o.n, "--n"))
      for (int g : gammas_of(o))
        for (long e : range(o.e, "--e")) {
          if (!valid_pair(n, g) || e < 1) continue;
          jobs.push_back([=] {
            const auto r = heegner_components(n, g, e);
            return json{{"n", n}, {"gamma", g}, {"e", e}, {"components", r.components.size()},
                        {"provenance", to_string(r.provenance)}, {"stable_under_doubling", r.stable_under_doubling}};
          });
        }
  } else if (o.target == "pell") {
    columns = {"e", "t", "solvable", "a", "b"};
    for (long e : range(o.e, "--e"))
      for (long t : range(o.t, "--t")) {
        if (e < 1 || t == 0) continue;
        jobs.push_back([=] { return pell_row(e, t); });
      }
  } else if (o.target == "hilb") {
    columns = {"e", "aut", "bir", "epw", "mu", "nu"};
    for (long e : range(o.e, "--e")) {
      if (e < 1) continue;
      jobs.push_back([=] {
        const auto s = hilb_slopes(e);
        return json{{"e", e}, {"aut", to_string(hilb_aut(e))}, {"bir", to_string(hilb_bir(e))}, {"epw", is_epw_hilb(e)},
                    {"mu", quad_exact(s.movable)}, {"nu", quad_exact(s.nef)}};
      });
    }
  } else if (o.target == "special") {
    columns = {"n", "e_prime", "e", "aut", "bir", "epw", "mu", "nu"};
    for (long n : range(o.n, "--n"))
      for (long ep : range(o.e_prime, "--e-prime")) {
        if (n < 1 || n % 4 != 3 || !is_squarefree(n) || ep < 2) continue;
        jobs.push_back([=] {
          const auto r = special_aut_bir(n, ep);
          const auto s = fano_slopes(n, ep);
          return json{{"n", n}, {"e_prime", ep}, {"e", n * ep}, {"aut", to_string(r.aut)}, {"bir", to_string(r.bir)},
                      {"epw", is_epw_special(n, ep)}, {"mu", quad_exact(s.movable)}, {"nu", quad_exact(s.nef)}};
        });
      }
  } else if (o.target == "period-image") {
    columns = excluded_columns();
    for (long n : range(o.n, "--n"))
      for (int g : gammas_of(o)) {
        if (!valid_pair(n, g)) continue;
        jobs.push_back([=] { return excluded_rows(n, g, nullptr); });
      }
  } else {
    throw usage_error("unknown sweep target '" + o.target + "'");
  }
  const auto results = parallel_map<json>(jobs.size(), threads, [&](std::size_t i) { return jobs[i](); });
  json rows = json::array();
  for (const auto& r : results) {
    if (r.is_array())
      for (const auto& x : r) rows.push_back(x);
    else
      rows.push_back(r);
  }
  doc["columns"] = columns;
  doc["rows"] = rows;
  return {doc, table_from(columns, rows)};
}

// ---- fixtures -------------------------------------------------------------

struct Grid {
  std::vector<long> ns;
  std::vector<long> es;
};

/// File name -> csv contents, in a fixed order.
inline std::vector<std::pair<std::string, std::string>> fixture_files(const Grid& g, unsigned threads) {
  std::vector<std::pair<std::string, std::string>> out;
  if (g.ns.empty() || g.es.empty()) return out;
  const long e_max = *std::max_element(g.es.begin(), g.es.end());

  std::vector<std::pair<long, int>> pairs;
  for (long n : g.ns)
    for (int gamma : {1, 2})
      if (valid_pair(n, gamma)) pairs.emplace_back(n, gamma);
  const auto heeg = parallel_map<json>(pairs.size(), threads, [&](std::size_t i) {
    const auto [n, gamma] = pairs[i];
    const auto brute = components_bruteforce(n, gamma, e_max, default_enumeration_bound(n));
    json rows = json::array();
    for (long e : g.es) {
      if (e < 1) continue;
      const auto f = heegner_components(n, gamma, e);
      const auto it = brute.find(e);
      const std::vector<HeegnerComponent> b = it == brute.end() ? std::vector<HeegnerComponent>{} : it->second;
      std::string stars;
      for (const auto& c : f.components) stars += (stars.empty() ? "" : " ") + to_string(c.s) + ":" + star_str(c.kappa_star);
      rows.push_back({{"n", n}, {"gamma", gamma}, {"e", e}, {"count", f.components.size()},
                      {"bruteforce_count", b.size()}, {"provenance", to_string(f.provenance)},
                      {"match", f.components == b}, {"components", stars}});
    }
    return rows;
  });
  json hrows = json::array();
  for (const auto& r : heeg)
    for (const auto& x : r) hrows.push_back(x);
  out.emplace_back("heegner.csv", render_csv(table_from(
                                      {"n", "gamma", "e", "count", "bruteforce_count", "provenance", "match", "components"},
                                      hrows)));

  json crows = json::array(), arows = json::array();
  for (long e : g.es) {
    if (e < 1) continue;
    const auto s = hilb_slopes(e);
    crows.push_back({{"family", "hilbert-square"}, {"n", 1}, {"e_prime", e}, {"e", e},
                     {"mu", quad_exact(s.movable)}, {"nu", quad_exact(s.nef)}});
    arows.push_back({{"family", "hilbert-square"}, {"n", 1}, {"e_prime", e}, {"aut", to_string(hilb_aut(e))},
                     {"bir", to_string(hilb_bir(e))}});
  }
  for (long n : g.ns) {
    if (n % 4 != 3 || !is_squarefree(n)) continue;
    for (long ep : g.es) {
      if (ep < 2) continue;
      const auto s = fano_slopes(n, ep);
      crows.push_back({{"family", "special"}, {"n", n}, {"e_prime", ep}, {"e", n * ep},
                       {"mu", quad_exact(s.movable)}, {"nu", quad_exact(s.nef)}});
      const auto r = special_aut_bir(n, ep);
      arows.push_back({{"family", "special"}, {"n", n}, {"e_prime", ep}, {"aut", to_string(r.aut)},
                       {"bir", to_string(r.bir)}});
    }
  }
  out.emplace_back("cones.csv", render_csv(table_from({"family", "n", "e_prime", "e", "mu", "nu"}, crows)));
  out.emplace_back("autbir.csv", render_csv(table_from({"family", "n", "e_prime", "aut", "bir"}, arows)));
  return out;
}

inline Payload cmd_regen(const Options& o) {
  if (o.out.empty()) throw usage_error("--out DIR is required");
  const Grid g{parse_range(o.n.empty() ? "1..13" : o.n, "--n"), parse_range(o.e.empty() ? "1..50" : o.e, "--e")};
  const auto files = fixture_files(g, thread_count(o));
  std::filesystem::create_directories(o.out);
  json doc = header("regen-fixtures");
  json written = json::array(), rows = json::array();
  for (const auto& [name, body] : files) {
    const auto path = std::filesystem::path(o.out) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << body;
    written.push_back(name);
    rows.push_back({{"file", name}, {"bytes", body.size()}});
  }
  doc["files"] = written;
  return {doc, table_from({"file", "bytes"}, rows)};
}

// ---- entry point -----------------------------------------------------------

inline std::string render(const Payload& p, const std::string& format) {
  if (format == "csv") return render_csv(p.table);
  if (format == "text") return render_text(p.table);
  return p.doc.dump(2) + "\n";
}

inline Result run(std::vector<std::string> args) {
  CLI::App app{"Lattice and Pell computations for polarized hyperkahler fourfolds of K3^[2]-type", "hkperiod"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", version);
  Options o;
  const std::vector<std::string> formats{"json", "csv", "text"};

  auto common = [&](CLI::App* s) {
    s->add_option("--format", o.format, "json (default), csv or text")->check(CLI::IsMember(formats));
    s->add_option("--out", o.out, "write the payload to this file");
  };
  auto opt = [](CLI::App* s, const char* name, std::string& v, const char* help) { s->add_option(name, v, help); };

  auto* pell = app.add_subcommand("pell", "minimal solution of a^2 - e b^2 = t");
  opt(pell, "--e", o.e, "radicand");
  opt(pell, "--t", o.t, "right-hand side");
  opt(pell, "--list", o.list, "also list every positive solution with b <= this bound");
  common(pell);

  auto* lattice = app.add_subcommand("lattice", "orthogonal complement of a polarization");
  opt(lattice, "--n", o.n, "half degree");
  opt(lattice, "--gamma", o.gamma, "divisibility, 1 or 2");
  lattice->add_flag("--isometries", o.isometries, "count isometries of the discriminant form");
  common(lattice);

  auto* heegner = app.add_subcommand("heegner", "irreducible components of a Heegner divisor");
  opt(heegner, "--n", o.n, "half degree");
  opt(heegner, "--gamma", o.gamma, "divisibility, 1 or 2");
  opt(heegner, "--e", o.e, "half discriminant");
  opt(heegner, "--bound", o.bound, "enumeration bound when no closed form applies");
  common(heegner);

  auto* period = app.add_subcommand("period-image", "Heegner components missing from the period image");
  opt(period, "--n", o.n, "half degree");
  opt(period, "--gamma", o.gamma, "divisibility, 1 or 2");
  common(period);

  auto* cones = app.add_subcommand("cones", "movable and nef slopes of a rank-two family");
  opt(cones, "--e", o.e, "Hilbert square of a degree 2e K3 surface");
  opt(cones, "--n", o.n, "special family: half degree");
  opt(cones, "--e-prime", o.e_prime, "special family: L^2 = -2e'");
  opt(cones, "--bound", o.bound, "also list wall classes with coordinates up to this bound");
  common(cones);

  auto* aut = app.add_subcommand("aut", "automorphism and birational automorphism groups");
  opt(aut, "--e", o.e, "Hilbert square of a degree 2e K3 surface");
  opt(aut, "--n", o.n, "rank one (with --gamma) or special family (with --e-prime)");
  opt(aut, "--gamma", o.gamma, "divisibility, 1 or 2");
  opt(aut, "--e-prime", o.e_prime, "special family");
  common(aut);

  auto* hilb = app.add_subcommand("hilb", "polarizations b L2 - a delta of square 2n on a Hilbert square");
  opt(hilb, "--n", o.n, "half degree of the target");
  opt(hilb, "--e", o.e, "degree 2e of the K3 surface");
  opt(hilb, "--bound", o.bound, "search bound on b");
  common(hilb);

  auto* maps = app.add_subcommand("maps", "polarizations a H + b L of square 2m on the special family");
  opt(maps, "--n", o.n, "half degree");
  opt(maps, "--e-prime", o.e_prime, "L^2 = -2e'");
  opt(maps, "--m", o.m, "half degree of the target");
  opt(maps, "--bound", o.bound, "search bound on b");
  common(maps);

  auto* epw = app.add_subcommand("epw", "double EPW sextic criteria");
  opt(epw, "--e", o.e, "Hilbert square of a degree 2e K3 surface");
  opt(epw, "--n", o.n, "special family: half degree");
  opt(epw, "--e-prime", o.e_prime, "special family");
  common(epw);

  auto* fam = app.add_subcommand("families", "infinite families of Hilbert-square and EPW loci");
  opt(fam, "--n", o.n, "half degree");
  opt(fam, "--kind", o.kind, "1, 2 or epw");
  opt(fam, "--count", o.count, "number of members (default 10)");
  common(fam);

  auto* sweep = app.add_subcommand("sweep", "tabulate a module over parameter ranges a..b");
  sweep->add_option("target", o.target, "heegner, pell, hilb, special or period-image")->required();
  opt(sweep, "--n", o.n, "range of n");
  opt(sweep, "--gamma", o.gamma, "1, 2 or 1..2 (default both)");
  opt(sweep, "--e", o.e, "range of e");
  opt(sweep, "--e-prime", o.e_prime, "range of e'");
  opt(sweep, "--t", o.t, "range of t");
  opt(sweep, "--threads", o.threads, "worker threads (default: all cores)");
  common(sweep);

  auto* regen = app.add_subcommand("regen-fixtures", "write the formula-vs-oracle comparison corpus");
  opt(regen, "--n", o.n, "range of n (default 1..13)");
  opt(regen, "--e", o.e, "range of e and e' (default 1..50)");
  opt(regen, "--out", o.out, "output directory");
  opt(regen, "--threads", o.threads, "worker threads (default: all cores)");

  std::ostringstream out, err;
  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {code == 0 ? 0 : 2, out.str(), err.str()};
  }

  const std::map<CLI::App*, std::function<Payload(const Options&)>> dispatch{
      {pell, cmd_pell},       {lattice, cmd_lattice}, {heegner, cmd_heegner}, {period, cmd_period_image},
      {cones, cmd_cones},     {aut, cmd_aut},         {hilb, cmd_hilb},       {maps, cmd_maps},
      {epw, cmd_epw},         {fam, cmd_families},    {sweep, cmd_sweep},     {regen, cmd_regen}};
  CLI::App* chosen = app.get_subcommands().front();
  try {
    const Payload p = dispatch.at(chosen)(o);
    const std::string body = render(p, o.format);
    if (!o.out.empty() && chosen != regen) {
      std::ofstream f(o.out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + o.out);
      f << body;
      return {0, "", ""};
    }
    return {0, body, ""};
  } catch (const usage_error& e) {
    return {2, "", std::string("usage error: ") + e.what() + "\n"};
  } catch (const std::invalid_argument& e) {
    return {2, "", std::string("usage error: ") + e.what() + "\n"};
  } catch (const std::domain_error& e) {
    return {1, "", std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {1, "", std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace hkp::cli
