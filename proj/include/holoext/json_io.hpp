#pragma once

// JSON encodings. Complex numbers are [re, im] (a bare number is accepted on
// input), points are arrays of complex numbers.

#include <string>
#include <vector>

#include <json.hpp>

#include "holoext/core.hpp"
#include "holoext/domains.hpp"
#include "holoext/extension_lab.hpp"
#include "holoext/hyperbolic.hpp"
#include "holoext/operator_model.hpp"
#include "holoext/pick_kernels.hpp"
#include "holoext/poly.hpp"

namespace holoext {

using Json = nlohmann::ordered_json;

/// Parses text, turning syntax errors into InvalidInput with line:column.
inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InvalidInput(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

inline const Json& require_key(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double json_number(const Json& j, const char* what) {
  if (!j.is_number()) throw InvalidInput(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite");
  return v;
}

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {json_number(j, "complex"), 0.0};
  if (j.is_array() && j.size() == 2) return {json_number(j[0], "real part"), json_number(j[1], "imaginary part")};
  throw InvalidInput("complex numbers are [re, im] or a real number");
}

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Point point_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("a point is a nonempty array of complex numbers");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return p;
}

inline Json point_to_json(const Point& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(to_json(p(i)));
  return a;
}

inline std::vector<Point> points_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of points");
  std::vector<Point> out;
  for (const auto& e : j) out.push_back(point_from_json(e));
  return out;
}

inline Json points_to_json(const std::vector<Point>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(point_to_json(p));
  return a;
}

/// A real scalar node may be written as a bare number instead of [x].
inline std::vector<Point> nodes_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("nodes must be a nonempty array");
  std::vector<Point> out;
  for (const auto& e : j) out.push_back(e.is_number() ? make_point({complex_from_json(e)}) : point_from_json(e));
  return out;
}

inline CVector cvector_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of complex numbers");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline Json cvector_to_json(const CVector& v) { return point_to_json(v); }

inline DomainSpec domain_from_json(const Json& j) {
  const auto kind = parse_domain_kind(require_key(j, "kind").get<std::string>());
  switch (kind) {
    case DomainKind::bidisk: return DomainSpec::bidisk();
    case DomainKind::symmetrized_bidisk: return DomainSpec::symmetrized_bidisk();
    case DomainKind::ball: {
      const auto& d = require_key(j, "dim");
      if (!d.is_number_integer()) throw InvalidInput("ball dim must be an integer");
      return DomainSpec::ball(d.get<int>());
    }
    case DomainKind::ellipsoid: {
      std::vector<double> alpha;
      std::vector<double> beta;
      for (const auto& a : require_key(j, "alpha")) alpha.push_back(json_number(a, "alpha"));
      for (const auto& b : require_key(j, "beta")) beta.push_back(json_number(b, "beta"));
      return DomainSpec::ellipsoid(alpha, beta);
    }
  }
  throw InvalidInput("unknown domain kind");
}

inline Json to_json(const DomainSpec& d) {
  Json j;
  j["kind"] = to_string(d.kind());
  j["dim"] = d.dim();
  if (d.kind() == DomainKind::ellipsoid) {
    Json a = Json::array();
    Json b = Json::array();
    for (int i = 0; i < d.dim(); ++i) {
      a.push_back(d.alpha_at(i));
      b.push_back(d.beta_at(i));
    }
    j["alpha"] = a;
    j["beta"] = b;
  }
  return j;
}

inline Poly poly_from_json(const Json& j) {
  const auto& dj = require_key(j, "dim");
  if (!dj.is_number_integer() || dj.get<int>() < 1) throw InvalidInput("poly dim must be a positive integer");
  const int dim = dj.get<int>();
  Poly p(dim);
  for (const auto& t : require_key(j, "terms")) {
    const auto& e = require_key(t, "exp");
    if (!e.is_array() || static_cast<int>(e.size()) != dim) throw InvalidInput("term exponent length must equal dim");
    Multiindex a;
    for (const auto& k : e) {
      if (!k.is_number_integer() || k.get<int>() < 0) throw InvalidInput("exponents must be nonnegative integers");
      a.push_back(k.get<int>());
    }
    p.add(a, complex_from_json(require_key(t, "coef")));
  }
  return p;
}

inline Json to_json(const Poly& p) {
  Json terms = Json::array();
  for (const auto& [a, c] : p.terms()) terms.push_back(Json{{"exp", a}, {"coef", to_json(c)}});
  return Json{{"dim", p.dim()}, {"degree", p.degree()}, {"terms", terms}};
}

inline AnalyticDisc disc_from_json(const Json& j) {
  AnalyticDisc d;
  d.coefficients = points_from_json(require_key(j, "coefficients"));
  if (d.coefficients.empty()) throw InvalidInput("a disc needs at least one coefficient");
  for (const auto& c : d.coefficients) require_point(c, d.coefficients.front().size(), "disc coefficient");
  return d;
}

inline Json to_json(const AnalyticDisc& d) { return Json{{"degree", d.degree()}, {"coefficients", points_to_json(d.coefficients)}}; }

inline Datum datum_from_json(const Json& j) {
  return Datum(point_from_json(require_key(j, "lambda")), point_from_json(require_key(j, "mu")));
}

inline Json to_json(const Datum& d) { return Json{{"lambda", point_to_json(d.lambda())}, {"mu", point_to_json(d.mu())}}; }

inline Json to_json(const StageOutcome& s) {
  Json j{{"degree", s.degree}, {"restart", s.restart}, {"evaluations", s.evaluations}};
  j["value"] = std::isfinite(s.value) ? Json(s.value) : Json(nullptr);
  return j;
}

inline Json stages_to_json(const std::vector<StageOutcome>& stages) {
  Json a = Json::array();
  for (const auto& s : stages) a.push_back(to_json(s));
  return a;
}

inline Json to_json(const CaratheodoryMap& m) {
  Json j{{"poly", to_json(m.poly)}};
  j["ball_center"] = m.ball_center ? point_to_json(*m.ball_center) : Json(nullptr);
  return j;
}

inline Json to_json(const MinimalNormResult& r) {
  Json trace = Json::array();
  for (std::size_t i = 0; i < r.probes.size(); ++i) trace.push_back(Json{{"t", r.probes[i]}, {"min_eigenvalue", r.min_eigenvalues[i]}});
  return Json{{"t_star", r.t_star},
              {"exact", r.exact},
              {"bracket", Json::array({r.bracket_low, r.bracket_high})},
              {"iterations", r.iterations},
              {"min_eigenvalue_trace", trace}};
}

inline Json to_json(const Certificate& c) {
  Json j{{"datum", Json{{"lambda", point_to_json(c.lambda)}, {"mu", point_to_json(c.mu)}}},
         {"achieved", c.achieved},
         {"baseline", c.baseline},
         {"baseline_kind", c.baseline_kind},
         {"margin", c.margin},
         {"sup_on_V", c.sup_on_V},
         {"certifies_failure", c.margin > 0.0},
         {"map", to_json(c.map)},
         {"stages", stages_to_json(c.stages)}};
  if (!c.baseline_stages.empty()) j["baseline_stages"] = c.baseline_stages;
  return j;
}

inline Json to_json(const SlcReport& r) {
  return Json{{"pass", r.pass}, {"worst_margin", r.worst_margin}, {"worst_vector", point_to_json(r.worst_vector)}};
}

inline Json to_json(const TotallyGeodesicReport& r) {
  Json j{{"pass", r.pass}, {"worst_distance", r.worst_distance}, {"pairs_tested", r.pairs_tested}};
  j["worst_pair"] = r.worst_pair ? to_json(*r.worst_pair) : Json(nullptr);
  return j;
}

inline Json to_json(const RetractReport& r) {
  return Json{{"idempotent_pass", r.idempotent_pass},
              {"fixes_V_pass", r.fixes_V_pass},
              {"range_in_V_pass", r.range_in_V_pass},
              {"worst_idempotence", r.worst_idempotence},
              {"worst_fixed_point", r.worst_fixed_point},
              {"worst_range_residual", r.worst_range_residual}};
}

inline Json to_json(const RoydenWongReport& r) {
  Json j{{"boundary_ae_pass", r.boundary_ae_pass}, {"sign_pass", r.sign_pass}, {"worst_boundary_residual", r.worst_boundary_residual}};
  j["worst_value"] = std::isfinite(r.worst_value) ? Json(r.worst_value) : Json(nullptr);
  return j;
}

inline RetractMap retract_from_json(const Json& j) {
  RetractMap r;
  for (const auto& c : require_key(j, "components")) r.components.push_back(poly_from_json(c));
  if (r.components.empty()) throw InvalidInput("retract needs at least one component");
  return r;
}

inline Json to_json(const RetractMap& r) {
  Json a = Json::array();
  for (const auto& c : r.components) a.push_back(to_json(c));
  return Json{{"components", a}};
}

}  // namespace holoext
