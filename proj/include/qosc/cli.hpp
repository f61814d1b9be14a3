#ifndef QOSC_CLI_HPP
#define QOSC_CLI_HPP

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qosc/qosc.hpp"
#include "qosc/textio.hpp"

namespace qosc::cli {

enum class OutputFormat { csv, json };
enum class StructureKind { aperiodic, periodic };

/// One run's worth of configuration, mirroring the library validation rules.
struct RunConfig {
  OscillatorKind kind = OscillatorKind::macfarlane;
  double s = 0.5;
  double a0 = 0.0;
  StructureKind structure = StructureKind::aperiodic;
  std::map<int, double> coeffs = {{0, 1.0}};
  int cell_index = 0;
  int n = 0;      // level for hermite/wavefunction tables
  int n_max = 4;  // row/matrix bound for spectrum/gram
  OutputFormat format = OutputFormat::csv;
  double x_min = std::nan("");  // nan: derive from the model window
  double x_max = std::nan("");
  int samples = 201;
  int max_subdivisions = 4000;        // quadrature refinement budget
  std::map<std::string, double> tol;  // per-check tolerance overrides
  std::string inject_fault;           // test hook: "", "g", "h" or "f"
};

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json coeffs = nlohmann::json::object();
  for (const auto& [m, v] : c.coeffs) coeffs[std::to_string(m)] = fmt17(v);
  nlohmann::json tol = nlohmann::json::object();
  for (const auto& [k, v] : c.tol) tol[k] = fmt17(v);
  return nlohmann::json{
      {"kind", kind_name(c.kind)},
      {"s", fmt17(c.s)},
      {"a0", fmt17(c.a0)},
      {"structure", c.structure == StructureKind::aperiodic ? "aperiodic" : "periodic"},
      {"coeffs", coeffs},
      {"cell_index", c.cell_index},
      {"n", c.n},
      {"n_max", c.n_max},
      {"format", c.format == OutputFormat::csv ? "csv" : "json"},
      {"x_min", std::isnan(c.x_min) ? nlohmann::json(nullptr) : nlohmann::json(fmt17(c.x_min))},
      {"x_max", std::isnan(c.x_max) ? nlohmann::json(nullptr) : nlohmann::json(fmt17(c.x_max))},
      {"samples", c.samples},
      {"max_subdivisions", c.max_subdivisions},
      {"tol", tol},
      {"inject_fault", c.inject_fault}};
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "macfarlane")
    c.kind = OscillatorKind::macfarlane;
  else if (kind == "dubna")
    c.kind = OscillatorKind::dubna;
  else
    throw std::domain_error("config: unknown kind '" + kind + "'");
  c.s = parse_double(j.at("s").get<std::string>());
  c.a0 = parse_double(j.at("a0").get<std::string>());
  const std::string st = j.at("structure").get<std::string>();
  if (st == "aperiodic")
    c.structure = StructureKind::aperiodic;
  else if (st == "periodic")
    c.structure = StructureKind::periodic;
  else
    throw std::domain_error("config: unknown structure '" + st + "'");
  c.coeffs.clear();
  for (const auto& [k, v] : j.at("coeffs").items())
    c.coeffs[std::stoi(k)] = parse_double(v.get<std::string>());
  c.cell_index = j.at("cell_index").get<int>();
  c.n = j.at("n").get<int>();
  c.n_max = j.at("n_max").get<int>();
  c.format = j.at("format").get<std::string>() == "json" ? OutputFormat::json
                                                         : OutputFormat::csv;
  if (!j.at("x_min").is_null()) c.x_min = parse_double(j.at("x_min").get<std::string>());
  if (!j.at("x_max").is_null()) c.x_max = parse_double(j.at("x_max").get<std::string>());
  c.samples = j.at("samples").get<int>();
  c.max_subdivisions = j.value("max_subdivisions", 4000);
  for (const auto& [k, v] : j.at("tol").items())
    c.tol[k] = parse_double(v.get<std::string>());
  c.inject_fault = j.value("inject_fault", "");
  return c;
}

/// "m:value,m:value" coefficient lists, e.g. "0:1,1:0.5,-1:0.5".
inline std::map<int, double> parse_coeffs(const std::string& text) {
  std::map<int, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::domain_error("coeffs: expected m:value, got '" + item + "'");
    out[std::stoi(item.substr(0, colon))] = parse_double(item.substr(colon + 1));
  }
  if (out.empty()) throw std::domain_error("coeffs: empty coefficient list");
  return out;
}

/// Validates the whole configuration against the library invariants
/// (parameter guard, coefficient rules), independent of the subcommand.
inline void validate_config(const RunConfig& c) {
  make_params(c.s, c.kind);
  GaussianSuperposition(c.coeffs, c.s);
  if (c.samples < 2) throw std::domain_error("config: samples must be >= 2");
  if (c.max_subdivisions < 1)
    throw std::domain_error("config: max-subdivisions must be >= 1");
}

inline DeformationParams make_params_from(const RunConfig& c) {
  return make_params(c.s, c.kind);
}

inline OscillatorModel make_model(const RunConfig& c) {
  const auto p = make_params_from(c);
  if (c.structure == StructureKind::aperiodic)
    return OscillatorModel(p, Aperiodic{GaussianSuperposition(c.coeffs, c.s)}, c.a0);
  return OscillatorModel(p, Periodic{c.cell_index}, c.a0);
}

namespace detail {

inline double tol_or(const RunConfig& c, const std::string& name, double fallback) {
  auto it = c.tol.find(name);
  return it == c.tol.end() ? fallback : it->second;
}

inline QuadratureSpec quad_spec(const RunConfig& c, const OscillatorModel& m) {
  QuadratureSpec spec = default_quadrature(m, tol_or(c, "quadrature", 1e-12));
  spec.max_subdivisions = c.max_subdivisions;
  return spec;
}

inline std::vector<double> x_grid(const RunConfig& c) {
  double lo = c.x_min, hi = c.x_max;
  if (std::isnan(lo) || std::isnan(hi)) {
    const auto spec = default_quadrature(make_model(c));
    if (std::isnan(lo)) lo = spec.lower;
    if (std::isnan(hi)) hi = spec.upper;
  }
  if (!(lo < hi)) throw std::domain_error("x grid: x_min must be below x_max");
  if (c.samples < 2) throw std::domain_error("x grid: samples must be >= 2");
  std::vector<double> xs;
  xs.reserve(c.samples);
  for (int k = 0; k < c.samples; ++k)
    xs.push_back(lo + (hi - lo) * k / (c.samples - 1));
  return xs;
}

inline void emit_table(std::ostream& os, OutputFormat fmt,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<nlohmann::json>>& rows,
                       const std::string& json_key) {
  if (fmt == OutputFormat::csv) {
    for (std::size_t i = 0; i < header.size(); ++i)
      os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "");
        if (row[i].is_null())
          ;  // empty cell
        else if (row[i].is_string())
          os << row[i].get<std::string>();
        else
          os << row[i].dump();
      }
      os << "\n";
    }
    return;
  }
  nlohmann::json out;
  out["columns"] = header;
  out[json_key] = nlohmann::json::array();
  for (const auto& row : rows) out[json_key].push_back(row);
  os << out.dump(2) << "\n";
}

}  // namespace detail

/// Rows (n, E_n, E_n - E_{n-1}, ratio of adjacent spacings).
inline int cmd_spectrum(const RunConfig& c, std::ostream& os) {
  validate_config(c);
  if (c.n_max < 0) throw std::domain_error("spectrum: n-max must be >= 0");
  const auto p = make_params_from(c);
  const double L = p.log_q();
  std::vector<std::vector<nlohmann::json>> rows;
  for (const SpectrumEntry& e : spectrum(p, c.n_max)) {
    std::vector<nlohmann::json> row{e.n, fmt17(e.energy)};
    if (e.n >= 1)
      row.push_back(fmt17(std::exp(-2.0 * e.n * L)));  // E_n - E_{n-1}
    else
      row.push_back(nullptr);
    if (e.n >= 2)
      row.push_back(fmt17(std::exp(-2.0 * L)));
    else
      row.push_back(nullptr);
    rows.push_back(std::move(row));
  }
  detail::emit_table(os, c.format, {"n", "energy", "spacing", "ratio"}, rows, "rows");
  return 0;
}

/// Rows (x, Re H_n, Im H_n) of the deformed Hermite function at (s, t).
inline int cmd_hermite(const RunConfig& c, std::ostream& os) {
  validate_config(c);
  if (c.n < 0) throw std::domain_error("hermite: n must be >= 0");
  const auto p = make_params_from(c);
  std::vector<std::vector<nlohmann::json>> rows;
  for (double x : detail::x_grid(c)) {
    const cplx v = hermite_recursion_eval(c.n, cplx(x, 0.0), p);
    rows.push_back({fmt17(x), fmt17(v.real()), fmt17(v.imag())});
  }
  detail::emit_table(os, c.format, {"x", "re", "im"}, rows, "rows");
  return 0;
}

/// Rows (x, Re psi_n, Im psi_n, |psi_n|^2, pole_adjacent).
inline int cmd_wavefunction(const RunConfig& c, std::ostream& os) {
  validate_config(c);
  if (c.n < 0 || c.n > 6) throw std::domain_error("wavefunction: n must be in [0, 6]");
  const auto model = make_model(c);
  const AnalyticMap psi = eigenfunction(model, c.n);
  std::vector<std::vector<nlohmann::json>> rows;
  for (double x : detail::x_grid(c)) {
    int pole_adjacent = 0;
    if (c.kind == OscillatorKind::dubna &&
        std::abs(x - qosc::detail::nearest_g_zero(c.s, x)) < 1e-6)
      pole_adjacent = 1;
    const cplx v = psi(cplx(x, 0.0));
    rows.push_back({fmt17(x), fmt17(v.real()), fmt17(v.imag()), fmt17(std::norm(v)),
                    pole_adjacent});
  }
  detail::emit_table(os, c.format, {"x", "re", "im", "abs2", "pole_adjacent"}, rows, "rows");
  return 0;
}

/// Gram matrix for n <= n_max with a max-off-diagonal summary.
inline int cmd_gram(const RunConfig& c, std::ostream& os) {
  validate_config(c);
  if (c.n_max < 0 || c.n_max > 5) throw std::domain_error("gram: n-max must be in [0, 5]");
  const auto model = make_model(c);
  const QuadratureSpec spec = detail::quad_spec(c, model);
  const auto G = gram_matrix(model, c.n_max, spec);
  double max_offdiag = 0.0;
  double min_diag = 1.0;
  for (int a = 0; a <= c.n_max; ++a)
    for (int b = 0; b <= c.n_max; ++b) {
      if (a == b)
        min_diag = std::min(min_diag, G[a][b].real());
      else
        max_offdiag = std::max(max_offdiag, std::abs(G[a][b]));
    }
  if (c.format == OutputFormat::csv) {
    os << "a,b,re,im\n";
    for (int a = 0; a <= c.n_max; ++a)
      for (int b = 0; b <= c.n_max; ++b)
        os << a << "," << b << "," << fmt17(G[a][b].real()) << ","
           << fmt17(G[a][b].imag()) << "\n";
    os << "# max_offdiag," << fmt17(max_offdiag) << "\n";
    if (min_diag <= 0.0) os << "# warning,non-positive diagonal entry\n";
  } else {
    nlohmann::json out;
    out["matrix"] = nlohmann::json::array();
    for (int a = 0; a <= c.n_max; ++a) {
      nlohmann::json row = nlohmann::json::array();
      for (int b = 0; b <= c.n_max; ++b)
        row.push_back({{"re", fmt17(G[a][b].real())}, {"im", fmt17(G[a][b].imag())}});
      out["matrix"].push_back(row);
    }
    out["max_offdiag"] = fmt17(max_offdiag);
    out["negative_diagonal"] = (min_diag <= 0.0);
    os << out.dump(2) << "\n";
  }
  return 0;
}

/// Runs the full residual battery for the configured oscillator and emits a
/// JSON report; exit 0 iff every identity passed.
inline int cmd_verify(const RunConfig& c, std::ostream& os) {
  validate_config(c);
  const auto p = make_params_from(c);
  const GaussianSuperposition coeffs(c.coeffs, c.s);
  PartFunctionFault fault;
  if (c.inject_fault == "g")
    fault.g_scale = 1.01;
  else if (c.inject_fault == "h")
    fault.h_tilt = 0.01;
  else if (c.inject_fault == "f")
    fault.f_width = 1.01;
  else if (!c.inject_fault.empty())
    throw std::domain_error("inject-fault: expected g, h or f");
  const LadderContext ctx = faulted_context(p, coeffs, c.a0, fault);
  const auto model = make_model(c);
  // operator-based checks run in the m = 0 frame; a periodic cell is its
  // exact lattice translate, so the residuals coincide
  const OscillatorModel frame0 =
      c.structure == StructureKind::aperiodic
          ? model
          : OscillatorModel(p, Periodic{0}, c.a0);
  const auto probes = verification_probes(p);
  std::vector<ResidualReport> reports;

  // q-mutator on the two standard test functions
  {
    const double tol = detail::tol_or(c, "mutator", 1e-8);
    const AnalyticMap gauss = AnalyticMap::from_analytic(
        [](const cplx& z) { return std::exp(-0.5 * z * z); }, "gauss");
    const AnalyticMap gausscos = AnalyticMap::from_analytic(
        [](const cplx& z) { return std::exp(-0.5 * z * z) * std::cos(z); }, "gausscos");
    reports.push_back(ResidualReport::make("mutator.gaussian",
                                           mutator_residual(ctx, gauss, probes),
                                           static_cast<int>(probes.size()), 0.0, tol));
    reports.push_back(ResidualReport::make("mutator.gaussian-cosine",
                                           mutator_residual(ctx, gausscos, probes),
                                           static_cast<int>(probes.size()), 0.0, tol));
  }

  // ground state and eigen identities (unfaulted model; the fault hook
  // targets the residual suites' part-functions)
  {
    const double tol = detail::tol_or(c, "ground", 1e-10);
    const auto gs = ground_state(frame0);
    const AnalyticMap ap = apply_lowering(qosc::detail::model_context(frame0), gs.psi0);
    double scale = 0.0, worst = 0.0;
    for (double x : probes) {
      scale = std::max(scale, std::abs(gs.psi0(cplx(x, 0.0))));
      worst = std::max(worst, std::abs(ap(cplx(x, 0.0))));
    }
    reports.push_back(ResidualReport::make("ground.lowering", worst / scale,
                                           static_cast<int>(probes.size()), 0.0, tol));
    const auto spec = detail::quad_spec(c, frame0);
    const cplx nrm = inner_product(gs.psi0, gs.psi0, spec);
    reports.push_back(ResidualReport::make("ground.norm", std::abs(nrm - 1.0), 1, 0.0, tol));
  }
  {
    const double tol = detail::tol_or(c, "eigen", 1e-8);
    for (int n = 0; n <= std::min(4, c.n_max); ++n)
      reports.push_back(ResidualReport::make("eigen.n" + std::to_string(n),
                                             eigen_residual(frame0, n, probes),
                                             static_cast<int>(probes.size()), 0.0, tol));
  }

  // defining conditions for the configured kind
  {
    const double tol = detail::tol_or(c, "conditions", 1e-9);
    const auto conds = p.kind == OscillatorKind::macfarlane
                           ? macfarlane_condition_residuals(ctx, probes, tol)
                           : dubna_condition_residuals(ctx, probes, tol);
    reports.insert(reports.end(), conds.begin(), conds.end());
  }

  // shift-recursion sweep
  {
    const double tol = detail::tol_or(c, "second-recursion", 1e-9);
    qosc::detail::ResidualTracker t;
    for (int n = 0; n <= 10; ++n)
      for (double x : probes) {
        const cplx z(x, 0.0);
        t.feed(second_recursion_residual(n, z, p), z);
      }
    reports.push_back(ResidualReport::make("hermite.second-recursion", t.worst, t.count,
                                           t.at, tol));
  }

  // redundant-factor identities and the xi/eta system
  {
    const double tol = detail::tol_or(c, "ginv", 1e-10);
    const auto gp = appendix_probes();
    ResidualReport r = ginv_residual(RedundantFactorSpec{1.0, 0.0, 0, 0}, c.s, gp, tol);
    r.name = "ginv.k1l0";
    reports.push_back(r);
    r = ginv_residual(RedundantFactorSpec{2.0, 1.0, 1, 0}, c.s, gp, tol);
    r.name = "ginv.k2l1";
    reports.push_back(r);
  }
  {
    const double tol = detail::tol_or(c, "appendix", 1e-9);
    for (const auto& [suffix, spec] :
         std::vector<std::pair<std::string, RedundantFactorSpec>>{
             {"@k0l0", {0.0, 0.0, 0, 0}}, {"@k1l0", {1.0, 0.0, 0, 0}}}) {
      for (auto r : appendix_system_residuals(c.s, spec, appendix_probes(), tol)) {
        r.name += suffix;
        reports.push_back(r);
      }
    }
  }

  // adjointness on eigenfunction pairs
  {
    const double tol = detail::tol_or(c, "adjointness", 1e-7);
    const auto spec = detail::quad_spec(c, frame0);
    double worst = 0.0;
    for (const auto& [a, b] :
         std::vector<std::pair<int, int>>{{0, 0}, {2, 1}, {1, 2}, {3, 4}})
      worst = std::max(worst, adjointness_residual(frame0, eigenfunction(frame0, a),
                                                   eigenfunction(frame0, b), spec));
    reports.push_back(ResidualReport::make("adjointness", worst, 4, 0.0, tol));
  }

  // classical limit rates
  reports.push_back(classical_limit_report({1e-1, 1e-2, 1e-3}, 4,
                                           detail::tol_or(c, "classical", 0.2)));

  // dubna T-operator identities
  if (p.kind == OscillatorKind::dubna) {
    const double tol = detail::tol_or(c, "t-operator", 1e-9);
    const AnalyticMap psi1 = eigenfunction(frame0, 1);
    const AnalyticMap gauss = AnalyticMap::from_analytic(
        [](const cplx& z) { return std::exp(-0.5 * z * z); }, "gauss");
    reports.push_back(ResidualReport::make(
        "t.bilinear", std::max(T_bilinear_residual(ctx, psi1, probes),
                               T_bilinear_residual(ctx, gauss, probes)),
        static_cast<int>(probes.size()), 0.0, tol));
    std::vector<double> sin_safe;
    for (double x : probes)
      if (std::abs(std::sin(p.s * x)) > 0.05) sin_safe.push_back(x);
    reports.push_back(ResidualReport::make(
        "t.linear", std::max(T_linear_residual(ctx, psi1, sin_safe),
                             T_linear_residual(ctx, gauss, sin_safe)),
        static_cast<int>(sin_safe.size()), 0.0, tol));
    const double teig_tol = detail::tol_or(c, "t-eigen", 1e-8);
    qosc::detail::ResidualTracker t;
    for (int n = 0; n <= 3; ++n) {
      const AnalyticMap psi = eigenfunction(frame0, n);
      const AnalyticMap Tpsi = apply_T(qosc::detail::model_context(frame0), psi);
      const double lam =
          p.s * std::sqrt(std::exp(2.0 * n * p.s * p.s) / (1.0 - p.q * p.q));
      double scale = 0.0, worst = 0.0;
      cplx at = 0.0;
      for (double x : probes) {
        const cplx z(x, 0.0);
        scale = std::max(scale, std::abs(psi(z)));
        const double d = std::abs(Tpsi(z) - lam * psi(z));
        if (d > worst) {
          worst = d;
          at = z;
        }
      }
      t.feed(worst / scale, at);
    }
    reports.push_back(ResidualReport::make("t.eigen", t.worst, t.count, t.at, teig_tol));
  }

  bool all_passed = true;
  std::string failing;
  for (const auto& r : reports)
    if (!r.passed) {
      all_passed = false;
      failing += (failing.empty() ? "" : ", ") + r.name;
    }

  nlohmann::json out;
  out["config"] = to_json(c);
  out["reports"] = nlohmann::json::array();
  for (const auto& r : reports) out["reports"].push_back(qosc::to_json(r));
  out["passed"] = all_passed;
  if (!all_passed) out["failing"] = failing;
  os << out.dump(2) << "\n";
  return all_passed ? 0 : 1;
}

}  // namespace qosc::cli

#endif  // QOSC_CLI_HPP
