#pragma once

// Command-line front end. run() never calls exit(); it returns the process
// exit code: 0 ok, 1 search failure, 2 rejected input, 3 internal
// consistency error, 64 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "holoext/domains.hpp"
#include "holoext/extension_lab.hpp"
#include "holoext/hyperbolic.hpp"
#include "holoext/json_io.hpp"
#include "holoext/operator_model.hpp"
#include "holoext/pick_kernels.hpp"
#include "holoext/svg.hpp"

namespace holoext::cli {

enum ExitCode : int { kOk = 0, kSearchFailed = 1, kRejected = 2, kInconsistent = 3, kUsage = 64 };

struct RunConfig {
  std::string command;
  std::string input_path;
  std::string output_path;
  std::string plot_path;
  std::string format = "json";
  int degree = 4;
  long budget = 5000;
  std::uint64_t seed = 0;
  double tol = 1e-9;

  // variety / domain options
  std::string spec = "ball_slice";
  int k = 1;
  int dim = 2;
  std::string beta = "0";
  int count = 20;
  int pairs = 0;
  std::string datum = "0,1";
  bool datum_given = false;
  int probes = 200;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw ConsistencyError("SHA-256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  f << text;
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// "re" or "re,im"
inline Complex parse_complex_arg(const std::string& s) {
  try {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return {std::stod(s), 0.0};
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse complex value '" + s + "'");
  }
}

inline std::pair<std::size_t, std::size_t> parse_index_pair(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) throw InvalidInput("");
    const long i = std::stol(s.substr(0, comma));
    const long j = std::stol(s.substr(comma + 1));
    if (i < 0 || j < 0) throw InvalidInput("");
    return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
  } catch (const std::exception&) {
    throw InvalidInput("--datum expects two indices 'i,j'");
  }
}

class Runner {
 public:
  Runner(RunConfig cfg, std::string digest, std::ostream& out) : cfg_(std::move(cfg)), digest_(std::move(digest)), out_(out) {}

  int dispatch() {
    const auto& c = cfg_.command;
    if (c == "pick solve") return pick_solve();
    if (c == "model check") return model_check();
    if (c == "extremal cara") return extremal_cara();
    if (c == "extremal koba") return extremal_koba();
    if (c == "domain slc") return domain_slc();
    if (c == "variety geodesic") return variety_geodesic();
    if (c == "variety certificate") return variety_certificate();
    if (c == "variety retract") return variety_retract();
    if (c == "selftest") return selftest();
    throw InvalidInput("unknown command '" + c + "'");
  }

 private:
  Json envelope() const {
    return Json{{"tool", "holoext"}, {"version", kVersion}, {"command", cfg_.command}, {"seed", cfg_.seed}, {"input_digest", "sha256:" + digest_}};
  }

  std::string csv_header() const {
    return "# tool=holoext version=" + std::string(kVersion) + " command=" + cfg_.command + " seed=" + std::to_string(cfg_.seed) +
           " input_digest=sha256:" + digest_ + "\n";
  }

  void emit(const Json& report, const std::string& csv) {
    if (cfg_.format == "csv") {
      write_text(cfg_.output_path, csv_header() + csv, out_);
    } else {
      write_text(cfg_.output_path, report.dump(2) + "\n", out_);
    }
  }

  void plot(const std::string& title, const std::string& xl, const std::string& yl, const std::vector<SvgSeries>& s) {
    if (!cfg_.plot_path.empty()) write_text(cfg_.plot_path, line_chart_svg(title, xl, yl, s), out_);
  }

  Json input() const {
    if (cfg_.input_path.empty()) throw InvalidInput(cfg_.command + " needs --input");
    return parse_json_text(read_file(cfg_.input_path), cfg_.input_path);
  }

  // -------------------------------------------------------------------------

  int pick_solve() {
    const Json in = input();
    const KernelId id = parse_kernel_id(require_key(in, "kernel").get<std::string>());
    const auto nodes = nodes_from_json(require_key(in, "nodes"));
    const CVector w = cvector_from_json(require_key(in, "targets"));
    const auto res = minimal_sup_norm_report(id, nodes, w, cfg_.tol);
    const KernelGram g = gram(id, nodes);
    const CMatrix m = pick_matrix(g, w);

    Json report = envelope();
    report["kernel"] = to_string(id);
    report["tol"] = cfg_.tol;
    report.update(to_json(res));
    report["pick_matrix_min_eigenvalue"] = hermitian_eigenvalues(m)(0);
    report["pick_psd"] = is_psd(m, cfg_.tol);

    std::string csv = "probe,t,min_eigenvalue\n";
    for (std::size_t i = 0; i < res.probes.size(); ++i) csv += std::to_string(i) + "," + num(res.probes[i]) + "," + num(res.min_eigenvalues[i]) + "\n";
    emit(report, csv);

    if (!cfg_.plot_path.empty()) {
      SvgSeries s{"t*", {}, {}};
      for (double c : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
        s.x.push_back(c);
        s.y.push_back(minimal_sup_norm(id, nodes, CVector(w * c), cfg_.tol));
      }
      plot("minimal interpolation norm vs target scale", "target scale c", "t*(c w)", {s});
    }
    return kOk;
  }

  int model_check() {
    const Json in = input();
    const KernelId id = parse_kernel_id(require_key(in, "kernel").get<std::string>());
    const auto nodes = nodes_from_json(require_key(in, "nodes"));
    const ModelTuple model = build_model(id, nodes);
    std::optional<Poly> p;
    CVector w;
    if (in.contains("poly")) {
      p = poly_from_json(in["poly"]);
      w = model.values_of(*p);
    } else {
      w = cvector_from_json(require_key(in, "targets"));
      if (w.size() != model.size()) throw InvalidInput("target count does not match node count");
    }
    const double sup_v = in.contains("sup_on_V") ? json_number(in["sup_on_V"], "sup_on_V") : w.cwiseAbs().maxCoeff();
    std::optional<double> sup_omega;
    if (in.contains("sup_on_Omega")) sup_omega = json_number(in["sup_on_Omega"], "sup_on_Omega");
    if (sup_v < 0.0 || (sup_omega && *sup_omega < 0.0)) throw InvalidInput("supremum values must be nonnegative");

    const double norm = operator_norm(model.from_node_values(w));
    const auto witness = defect_witness(model, w);
    const auto paths = defect_form_paths(model, w, witness.coefficients);
    require_paths_agree(paths, witness.coefficients.dot(model.gram().entries * witness.coefficients).real());

    Json report = envelope();
    report["kernel"] = to_string(id);
    report["nodes"] = points_to_json(nodes);
    report["node_values"] = cvector_to_json(w);
    report["gram_condition"] = model.condition();
    report["norm"] = norm;
    report["sup_on_V"] = sup_v;
    report["vn_V_pass"] = norm <= sup_v + 1e-9;
    report["sup_on_Omega"] = sup_omega ? Json(*sup_omega) : Json(nullptr);
    report["vn_Omega_pass"] = sup_omega ? Json(norm <= *sup_omega + 1e-9) : Json(nullptr);
    report["min_defect_eigenvalue"] = witness.min_eigenvalue;
    report["witness_coefficients"] = cvector_to_json(witness.coefficients);
    report["defect_at_witness"] = Json{{"via_operator", paths.via_operator}, {"via_pick_sum", paths.via_pick_sum}};
    if (w.cwiseAbs().maxCoeff() > 0.0) {
      const auto mn = minimal_sup_norm_report(id, nodes, w, std::min(cfg_.tol, 1e-9));
      report["minimal_sup_norm"] = mn.t_star;
      report["minimal_sup_norm_exact"] = mn.exact;
    }
    if (p) {
      report["poly"] = to_json(*p);
      report["subordination_pass"] = subordination_check(model, *p, w);
    }

    std::string csv = "quantity,value\n";
    csv += "norm," + num(norm) + "\n";
    csv += "sup_on_V," + num(sup_v) + "\n";
    csv += std::string("vn_V_pass,") + (norm <= sup_v + 1e-9 ? "true" : "false") + "\n";
    csv += "min_defect_eigenvalue," + num(witness.min_eigenvalue) + "\n";
    emit(report, csv);
    return kOk;
  }

  int extremal_cara() {
    const Json in = input();
    const DomainSpec domain = domain_from_json(require_key(in, "domain"));
    const Datum datum = datum_from_json(in);
    const auto res = caratheodory_search(domain, datum, cfg_.degree, cfg_.budget, cfg_.seed);

    Json report = envelope();
    report["domain"] = to_json(domain);
    report["datum"] = to_json(datum);
    report["degree"] = cfg_.degree;
    report["budget"] = cfg_.budget;
    report["value"] = res.value;
    report["best_degree"] = res.best_degree;
    report["evaluations"] = res.evaluations;
    report["map"] = to_json(res.map);
    report["stages"] = stages_to_json(res.stages);
    if (domain.kind() == DomainKind::ball) report["kobayashi_distance"] = kobayashi_ball(datum).distance;

    std::string csv = "degree,value\n";
    SvgSeries s{"stage value", {}, {}};
    for (const auto& st : res.stages) {
      csv += std::to_string(st.degree) + "," + num(st.value) + "\n";
      s.x.push_back(st.degree);
      s.y.push_back(st.value);
    }
    emit(report, csv);
    plot("Caratheodory search value vs degree", "degree", "rho(p(lambda), p(mu))", {s});
    return kOk;
  }

  int extremal_koba() {
    const Json in = input();
    const Datum datum = datum_from_json(in);
    if (in.contains("domain")) {
      const DomainSpec d = domain_from_json(in["domain"]);
      if (d.kind() != DomainKind::ball) throw UnsupportedDomain("closed-form Kobayashi extremals are available for the ball only");
    }
    const auto res = kobayashi_ball(datum);
    double boundary_residual = 0.0;
    for (int i = 0; i < 512; ++i) boundary_residual = std::max(boundary_residual, std::abs(res.disc(std::polar(1.0, 2.0 * kPi * i / 512)).norm() - 1.0));

    Json report = envelope();
    report["datum"] = to_json(datum);
    report["disc"] = to_json(res.disc);
    report["param_lambda"] = to_json(res.param_lambda);
    report["param_mu"] = to_json(res.param_mu);
    report["distance"] = res.distance;
    report["boundary_norm_residual"] = boundary_residual;
    if (res.disc.coefficients[0].norm() <= 1e-12) {
      const Poly phi = left_inverse_ball(res.disc);
      report["left_inverse"] = to_json(phi);
      BoundaryFunctional h{{Point(res.disc.coefficients[1].conjugate())}};
      const auto samples = interior_sample(DomainSpec::ball(datum.dim()), 1000, cfg_.seed);
      report["royden_wong"] = to_json(royden_wong_check(DomainSpec::ball(datum.dim()), res.disc, h, samples, 256));
    }
    std::string csv = "quantity,value\ndistance," + num(res.distance) + "\nboundary_norm_residual," + num(boundary_residual) + "\n";
    emit(report, csv);
    return kOk;
  }

  int domain_slc() {
    const Json in = input();
    const DomainSpec domain = domain_from_json(require_key(in, "domain"));
    std::vector<Point> points = in.contains("points") ? points_from_json(in["points"]) : boundary_sample(domain, cfg_.count, cfg_.seed);
    const int tangent = in.contains("tangent_samples") ? in["tangent_samples"].get<int>() : 64;
    const double tol = in.contains("tol") ? json_number(in["tol"], "tol") : 0.0;

    Json rows = Json::array();
    std::string csv = "point_id,worst_margin,pass\n";
    bool all = true;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto r = check_strong_linear_convexity(domain, points[i], tangent, cfg_.seed + i, tol);
      Json row = to_json(r);
      row["point"] = point_to_json(points[i]);
      rows.push_back(row);
      all = all && r.pass;
      worst = std::min(worst, r.worst_margin);
      csv += std::to_string(i) + "," + num(r.worst_margin) + "," + (r.pass ? "true" : "false") + "\n";
    }
    Json report = envelope();
    report["domain"] = to_json(domain);
    report["tol"] = tol;
    report["pass"] = all;
    report["worst_margin"] = std::isfinite(worst) ? Json(worst) : Json(nullptr);
    report["points"] = rows;
    emit(report, csv);
    return kOk;
  }

  VarietySpec variety_spec() const {
    const VarietyKind kind = parse_variety_kind(cfg_.spec);
    switch (kind) {
      case VarietyKind::ball_slice: return VarietySpec::ball_slice(cfg_.k, cfg_.dim);
      case VarietyKind::parabola_curve: return VarietySpec::parabola_curve();
      case VarietyKind::sym_R: return VarietySpec::sym_R();
      case VarietyKind::sym_D: return VarietySpec::sym_D(parse_complex_arg(cfg_.beta));
      case VarietyKind::sym_R_union_D: return VarietySpec::sym_R_union_D(parse_complex_arg(cfg_.beta));
      case VarietyKind::point_list: {
        const Json in = input();
        return VarietySpec::point_list(domain_from_json(require_key(in, "domain")), points_from_json(require_key(in, "points")));
      }
    }
    throw InvalidInput("unknown variety spec");
  }

  Json variety_json(const VarietySample& s) const {
    Json j{{"spec", to_string(s.spec.kind)}, {"count", s.points.size()}};
    if (s.spec.kind == VarietyKind::ball_slice) {
      j["k"] = s.spec.slice_dim;
      j["dim"] = s.spec.ambient_dim;
    }
    if (s.spec.kind == VarietyKind::sym_D || s.spec.kind == VarietyKind::sym_R_union_D) j["beta"] = to_json(s.spec.beta);
    return j;
  }

  int variety_geodesic() {
    const VarietySpec spec = variety_spec();
    const auto sample = sample_variety(spec, cfg_.count, cfg_.seed);
    const int pairs = cfg_.pairs > 0 ? cfg_.pairs : 20;
    const auto r = totally_geodesic_test(spec.ambient_domain(), sample, pairs, cfg_.seed, cfg_.tol);
    Json report = envelope();
    report["variety"] = variety_json(sample);
    report["tol"] = cfg_.tol;
    report.update(to_json(r));
    emit(report, "pass,worst_distance,pairs_tested\n" + std::string(r.pass ? "true" : "false") + "," + num(r.worst_distance) + "," +
                     std::to_string(r.pairs_tested) + "\n");
    return kOk;
  }

  int variety_certificate() {
    const VarietySpec spec = variety_spec();
    const auto sample = sample_variety(spec, cfg_.count, cfg_.seed);
    const DomainSpec domain = spec.ambient_domain();
    auto [i, j] = parse_index_pair(cfg_.datum);
    if (i >= sample.points.size() || j >= sample.points.size()) throw InvalidInput("--datum index out of range for the sample");
    if (!cfg_.datum_given) {
      // anchors of a union can coincide; move j to the next distinct point
      while (j + 1 < sample.points.size() && (sample.points[j] - sample.points[i]).norm() <= kDistinctThreshold) ++j;
    }
    const auto cert = certificate_search(domain, sample, Datum(sample.points[i], sample.points[j]), cfg_.degree, cfg_.budget, cfg_.seed);

    Json report = envelope();
    report["variety"] = variety_json(sample);
    report["datum_indices"] = Json::array({i, j});
    report["degree"] = cfg_.degree;
    report["budget"] = cfg_.budget;
    report.update(to_json(cert));

    std::string csv = "pair_id,i,j,baseline,achieved,margin\n";
    csv += "0," + std::to_string(i) + "," + std::to_string(j) + "," + num(cert.baseline) + "," + num(cert.achieved) + "," + num(cert.margin) + "\n";
    if (cfg_.pairs > 0) {
      // sweep over the pairs (0, 1), (0, 2), ...
      Json sweep = Json::array();
      for (int k = 1; k <= cfg_.pairs && static_cast<std::size_t>(k) < sample.points.size(); ++k) {
        if ((sample.points[static_cast<std::size_t>(k)] - sample.points[0]).norm() <= kDistinctThreshold) continue;
        const auto c = certificate_search(domain, sample, Datum(sample.points[0], sample.points[static_cast<std::size_t>(k)]), cfg_.degree,
                                          cfg_.budget, cfg_.seed);
        sweep.push_back(Json{{"pair_id", k}, {"i", 0}, {"j", k}, {"baseline", c.baseline}, {"achieved", c.achieved}, {"margin", c.margin}});
        csv += std::to_string(k) + ",0," + std::to_string(k) + "," + num(c.baseline) + "," + num(c.achieved) + "," + num(c.margin) + "\n";
      }
      report["sweep"] = sweep;
    }
    emit(report, csv);

    SvgSeries s{"stage margin", {}, {}};
    for (std::size_t n = 0; n < cert.stages.size(); ++n) {
      s.x.push_back(cert.stages[n].degree);
      const double base = cert.baseline_stages.empty() ? cert.baseline : cert.baseline_stages[std::min(n, cert.baseline_stages.size() - 1)];
      s.y.push_back(cert.stages[n].value - base);
    }
    plot("certificate margin vs degree", "degree", "margin", {s});
    return kOk;
  }

  int variety_retract() {
    const VarietySpec spec = variety_spec();
    const auto sample = sample_variety(spec, cfg_.count, cfg_.seed);
    const DomainSpec domain = spec.ambient_domain();
    RetractMap r;
    if (!cfg_.input_path.empty() && spec.kind != VarietyKind::point_list) {
      r = retract_from_json(input());
    } else if (spec.kind == VarietyKind::ball_slice) {
      // orthogonal projection onto the first k coordinates
      for (int c = 0; c < spec.ambient_dim; ++c) r.components.push_back(c < spec.slice_dim ? Poly::coordinate(spec.ambient_dim, c) : Poly(spec.ambient_dim));
    } else {
      throw InvalidInput("variety retract needs --input with a retract map for this spec");
    }
    const auto rep = retract_check(r, domain, sample, cfg_.probes, cfg_.seed, cfg_.tol);
    Json report = envelope();
    report["variety"] = variety_json(sample);
    report["retract"] = to_json(r);
    report["tol"] = cfg_.tol;
    report.update(to_json(rep));
    emit(report, std::string("idempotent_pass,fixes_V_pass,range_in_V_pass\n") + (rep.idempotent_pass ? "true" : "false") + "," +
                     (rep.fixes_V_pass ? "true" : "false") + "," + (rep.range_in_V_pass ? "true" : "false") + "\n");
    return kOk;
  }

  int selftest();

  RunConfig cfg_;
  std::string digest_;
  std::ostream& out_;
};

// ---------------------------------------------------------------------------

inline int Runner::selftest() {
  struct Check {
    std::string name;
    bool pass;
    double value;
  };
  std::vector<Check> checks;
  auto check = [&](const std::string& name, bool pass, double value) { checks.push_back({name, pass, value}); };

  {
    const std::vector<Point> nodes{make_point({0.0}), make_point({0.5})};
    CVector w(2);
    w << 0.0, 0.75;
    const double t = minimal_sup_norm(KernelId::szego_disk, nodes, w, 1e-12);
    check("pick_two_point_closed_form", std::abs(t - 1.5) <= 1e-9, t);
    const auto model = build_model(KernelId::szego_disk, nodes);
    const double n = operator_norm(model.from_node_values(w));
    check("model_norm_equals_pick", std::abs(n - 1.5) <= 1e-9, n);
  }
  {
    Rng rng = make_rng(cfg_.seed, 0x5e1f);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Point> nodes;
      for (int i = 0; i < 4; ++i) nodes.push_back(make_point({uniform_disk(rng, 0.8)}));
      bool ok = true;
      for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b) ok = ok && (nodes[a] - nodes[b]).norm() > 0.1;
      if (!ok) continue;
      const auto model = build_model(KernelId::szego_disk, nodes);
      CVector w(4);
      for (int i = 0; i < 4; ++i) w(i) = uniform_disk(rng);
      const CVector a = complex_gaussian(rng, 4);
      const auto paths = defect_form_paths(model, w, a);
      worst = std::max(worst, std::abs(paths.via_operator - paths.via_pick_sum) / std::max(1.0, a.dot(model.gram().entries * a).real()));
    }
    check("defect_form_routes_agree", worst <= 1e-10, worst);
  }
  {
    Rng rng = make_rng(cfg_.seed, 0x5e2f);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Complex a = uniform_disk(rng), x = uniform_disk(rng), y = uniform_disk(rng);
      worst = std::max(worst, std::abs(rho(mobius_disk(a, x), mobius_disk(a, y)) - rho(x, y)));
    }
    check("rho_mobius_invariance", worst <= 1e-10, worst);
    worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Point a = uniform_ball(rng, 3), z = uniform_ball(rng, 3);
      worst = std::max(worst, (ball_automorphism_to_origin(a, ball_automorphism_to_origin(a, z)) - z).norm());
    }
    check("ball_automorphism_involution", worst <= 1e-10, worst);
  }
  {
    const Datum d(make_point({0.0, 0.0}), make_point({0.3, 0.4}));
    const auto k = kobayashi_ball(d);
    const Poly phi = left_inverse_ball(k.disc);
    double worst = 0.0;
    for (int i = 0; i < 256; ++i) {
      const Complex z = std::polar(0.95 * ((i % 16) + 1) / 16.0, 2.0 * kPi * i / 256.0);
      worst = std::max(worst, std::abs(phi(k.disc(z)) - z));
    }
    check("lempert_left_inverse", worst <= 1e-10, worst);
    const auto c = caratheodory_search(DomainSpec::ball(2), d, 1, 2000, cfg_.seed);
    check("caratheodory_equals_kobayashi_ball", std::abs(c.value - k.distance) <= 1e-6, c.value - k.distance);
  }
  {
    const auto ball = DomainSpec::ball(2);
    const auto slc = check_strong_linear_convexity(ball, make_point({1.0, 0.0}), 64, cfg_.seed, 0.0);
    check("slc_ball_pass", slc.pass && slc.worst_margin >= 1.0 - 1e-9, slc.worst_margin);
    const auto ell = DomainSpec::ellipsoid({1.0, 1.0}, {0.0, 1.1});
    const auto bad = check_strong_linear_convexity(ell, make_point({1.0, 0.0}), 64, cfg_.seed, 0.0);
    check("slc_ellipsoid_fail", !bad.pass, bad.worst_margin);
  }
  {
    const auto ball = DomainSpec::ball(2);
    const auto slice = totally_geodesic_test(ball, sample_variety(VarietySpec::ball_slice(1, 2), 20, cfg_.seed), 20, cfg_.seed, 1e-9);
    check("slice_totally_geodesic", slice.pass, slice.worst_distance);
    const auto para = totally_geodesic_test(ball, sample_variety(VarietySpec::parabola_curve(), 20, cfg_.seed), 20, cfg_.seed, 1e-9);
    check("parabola_not_totally_geodesic", !para.pass && para.worst_distance >= 1e-3, para.worst_distance);
  }
  {
    const std::vector<Point> nodes{make_point({0.1, 0.2}), make_point({-0.3, 0.1}), make_point({0.2, -0.4})};
    const auto model = build_model(KernelId::cauchy_szego_ball, nodes);
    // vanishes at the three nodes: (z1 - 0.1)(z1 + 0.3)(z1 - 0.2)
    const Poly z1 = Poly::coordinate(2, 0);
    const Poly p = (z1 - Poly::constant(2, 0.1)) * (z1 + Poly::constant(2, 0.3)) * (z1 - Poly::constant(2, 0.2));
    const double n = operator_norm(evaluate_poly(model, p));
    check("subordination_zero_operator", n <= 1e-10 && subordination_check(model, p, model.values_of(p)), n);
  }

  Json list = Json::array();
  bool all = true;
  std::string csv = "check,pass,value\n";
  for (const auto& c : checks) {
    list.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"value", c.value}});
    all = all && c.pass;
    csv += c.name + "," + (c.pass ? "true" : "false") + "," + num(c.value) + "\n";
  }
  Json report = envelope();
  report["pass"] = all;
  report["checks"] = list;
  emit(report, csv);
  return all ? kOk : kInconsistent;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"holoext: numerical laboratory for norm-preserving extensions", "holoext"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input_path, "input JSON file");
    sub->add_option("--output", cfg.output_path, "write the report here instead of stdout");
    sub->add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--degree", cfg.degree, "maximal polynomial degree");
    sub->add_option("--budget", cfg.budget, "evaluations per degree stage");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--tol", cfg.tol, "tolerance");
    sub->add_option("--plot", cfg.plot_path, "write an SVG sweep plot here");
  };
  auto variety_opts = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec, "ball_slice | parabola | sym_R | sym_D | sym_R_union_D | point_list");
    sub->add_option("--k", cfg.k, "slice dimension for ball_slice");
    sub->add_option("--dim", cfg.dim, "ambient dimension for ball_slice");
    sub->add_option("--beta", cfg.beta, "beta for sym_D specs, 're' or 're,im'");
    sub->add_option("--count", cfg.count, "sample size");
    sub->add_option("--pairs", cfg.pairs, "pairs to test / sweep");
    sub->add_option("--datum", cfg.datum, "sample indices 'i,j' of the datum (default: 0 and the next distinct point)")
        ->each([&cfg](const std::string&) { cfg.datum_given = true; });
    sub->add_option("--probes", cfg.probes, "probe count for retract checks");
  };

  std::vector<std::pair<CLI::App*, std::string>> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, const std::string& full) {
    CLI::App* s = parent->add_subcommand(name, help);
    common(s);
    leaves.emplace_back(s, full);
    return s;
  };

  CLI::App* pick = app.add_subcommand("pick", "Pick matrices and minimal interpolation norms");
  pick->require_subcommand(1);
  leaf(pick, "solve", "minimal sup norm with the PSD trace", "pick solve");
  CLI::App* model = app.add_subcommand("model", "commuting model tuples");
  model->require_subcommand(1);
  leaf(model, "check", "operator norm, von Neumann checks and defect witness", "model check");
  CLI::App* extremal = app.add_subcommand("extremal", "extremal maps");
  extremal->require_subcommand(1);
  leaf(extremal, "cara", "Caratheodory lower-bound search", "extremal cara");
  leaf(extremal, "koba", "closed-form Kobayashi geodesic of the ball", "extremal koba");
  CLI::App* domain = app.add_subcommand("domain", "domain tests");
  domain->require_subcommand(1);
  CLI::App* slc = leaf(domain, "slc", "strong linear convexity sweep", "domain slc");
  slc->add_option("--count", cfg.count, "boundary points when the input lists none");
  CLI::App* variety = app.add_subcommand("variety", "experiments on subsets V");
  variety->require_subcommand(1);
  variety_opts(leaf(variety, "geodesic", "totally geodesic test in the ball", "variety geodesic"));
  variety_opts(leaf(variety, "certificate", "extension-failure certificate search", "variety certificate"));
  variety_opts(leaf(variety, "retract", "retract verification", "variety retract"));
  leaf(&app, "selftest", "run the invariant suite", "selftest");

  std::vector<const char*> argv{"holoext"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  for (const auto& [sub, name] : leaves) {
    if (sub->parsed()) cfg.command = name;
  }
  if (cfg.command.empty()) {
    err << app.help();
    return kUsage;
  }

  try {
    if (!(cfg.tol > 0.0)) throw InvalidInput("--tol must be positive");
    if (cfg.budget < 1) throw InvalidInput("--budget must be >= 1");
    if (cfg.degree < 1) throw InvalidInput("--degree must be >= 1");
    std::string material;
    for (const auto& a : args) material += a + '\0';
    if (!cfg.input_path.empty()) material += read_file(cfg.input_path);
    Runner runner(cfg, sha256_hex(material), out);
    return runner.dispatch();
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kRejected;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kRejected;
  } catch (const ConsistencyError& e) {
    err << "internal consistency error: " << e.what() << "\n";
    return kInconsistent;
  } catch (const SearchFailure& e) {
    err << "search failure: " << e.what() << "\n";
    return kSearchFailed;
  }
}

}  // namespace holoext::cli
