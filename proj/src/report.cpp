#include "cosyflat/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <sstream>
#include <thread>

#include "cosyflat/format.hpp"

namespace cosyflat {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<CheckKind, const char*>, 13> kCheckTable{{
    {CheckKind::Compat, "compat"},
    {CheckKind::Closedness, "closedness"},
    {CheckKind::AProps, "a-props"},
    {CheckKind::NablaPhi, "nabla-phi"},
    {CheckKind::Commutation, "commutation"},
    {CheckKind::AdaptedFrame, "adapted-frame"},
    {CheckKind::Jacobi, "jacobi"},
    {CheckKind::RicciCrosscheck, "ricci-crosscheck"},
    {CheckKind::Cotton, "cotton"},
    {CheckKind::Constsec, "constsec"},
    {CheckKind::Killing, "killing"},
    {CheckKind::Theorem, "theorem"},
    {CheckKind::OdeIntegral, "ode-integral"},
}};

}  // namespace

const char* check_name(CheckKind k) {
  for (const auto& [kind, name] : kCheckTable)
    if (kind == k) return name;
  return "?";
}

std::optional<CheckKind> check_from_name(const std::string& name) {
  for (const auto& [kind, n] : kCheckTable)
    if (name == n) return kind;
  return std::nullopt;
}

ChartBox default_domain(FamilyParams::Kind kind) {
  ChartBox b;
  switch (kind) {
    case FamilyParams::Kind::Z2:
    case FamilyParams::Kind::Custom:
    case FamilyParams::Kind::Kappa0:
      b.lower = {-1.0, -1.0, 0.5};
      b.upper = {1.0, 1.0, 2.0};
      break;
    case FamilyParams::Kind::KappaNonzero:
      b.lower = {-1.0, -1.0, 0.0};
      b.upper = {1.0, 1.0, 1.0};
      break;
    case FamilyParams::Kind::Product:
      b.lower = {-1.0, -1.0, -1.0};
      b.upper = {1.0, 1.0, 1.0};
      break;
  }
  return b;
}

namespace {

double require_number(const json& obj, const std::string& field, double fallback,
                      bool required = false) {
  if (!obj.contains(field)) {
    if (required) throw ConfigError("family." + field + ": missing required field");
    return fallback;
  }
  if (!obj[field].is_number())
    throw ConfigError("family." + field + ": expected a number");
  return obj[field].get<double>();
}

std::string require_string(const json& obj, const std::string& field,
                           const std::string& fallback, bool required = false) {
  if (!obj.contains(field)) {
    if (required) throw ConfigError("family." + field + ": missing required field");
    return fallback;
  }
  if (!obj[field].is_string())
    throw ConfigError("family." + field + ": expected a string");
  return obj[field].get<std::string>();
}

FamilyParams parse_family(const json& fam) {
  if (!fam.is_object() || !fam.contains("type") || !fam["type"].is_string())
    throw ConfigError("family.type: missing or not a string");
  const std::string type = fam["type"].get<std::string>();
  FamilyParams p;
  if (type == "z2") {
    p.kind = FamilyParams::Kind::Z2;
    p.a = require_number(fam, "a", 1.0);
  } else if (type == "custom") {
    p.kind = FamilyParams::Kind::Custom;
    p.f_src = require_string(fam, "f", "", true);
    p.u_src = require_string(fam, "u", "", true);
  } else if (type == "kappa0") {
    p.kind = FamilyParams::Kind::Kappa0;
    p.u_src = require_string(fam, "u", "", true);
    p.A = require_number(fam, "A", 1.0);
    p.B = require_number(fam, "B", 2.0);
    p.C = require_number(fam, "C", 1.0);
    p.D = require_number(fam, "D", 1.0);
  } else if (type == "kappa_nonzero") {
    p.kind = FamilyParams::Kind::KappaNonzero;
    p.kappa = require_number(fam, "kappa", 0.0, true);
    if (p.kappa == 0.0) throw ConfigError("family.kappa: must be nonzero");
    p.C = require_number(fam, "C", 1.0);
    p.D = require_number(fam, "D", 1.0);
    p.u_src = require_string(fam, "u", "1");
    p.t0 = require_number(fam, "t0", 1.0);
    p.sign = static_cast<int>(require_number(fam, "sign", 1.0));
    p.h = require_number(fam, "h", 1e-3);
  } else if (type == "product") {
    p.kind = FamilyParams::Kind::Product;
    p.leaf_curvature = require_number(fam, "leaf_curvature", 0.0);
  } else {
    throw ConfigError("family.type: unknown family '" + type + "'");
  }
  return p;
}

Vec3 parse_vec3(const json& arr, const std::string& field) {
  if (!arr.is_array() || arr.size() != 3)
    throw ConfigError(field + ": expected an array of three numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!arr[i].is_number()) throw ConfigError(field + ": expected numbers");
    v[i] = arr[i].get<double>();
  }
  return v;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  if (!doc.contains("family")) throw ConfigError("family: missing required field");

  RunConfig cfg;
  cfg.family = parse_family(doc["family"]);

  if (doc.contains("domain")) {
    const json& dom = doc["domain"];
    ChartBox box;
    box.lower = parse_vec3(dom.value("lower", json::array()), "domain.lower");
    box.upper = parse_vec3(dom.value("upper", json::array()), "domain.upper");
    for (int i = 0; i < 3; ++i)
      if (!(box.lower[i] < box.upper[i]))
        throw ConfigError("domain: lower must be strictly below upper");
    cfg.domain = box;
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_array() || g.size() != 3)
      throw ConfigError("grid: expected three axis objects");
    GridSpec grid;
    for (int i = 0; i < 3; ++i) {
      const json& ax = g[i];
      if (!ax.is_object()) throw ConfigError("grid: expected axis objects");
      if (!ax.contains("min") || !ax.contains("max") || !ax.contains("count"))
        throw ConfigError("grid: each axis needs min, max and count");
      grid.axis[i].min = ax["min"].get<double>();
      grid.axis[i].max = ax["max"].get<double>();
      grid.axis[i].count = ax["count"].get<int>();
      if (grid.axis[i].count < 2)
        throw ConfigError("grid: count must be at least 2 per axis");
      if (!(grid.axis[i].min < grid.axis[i].max))
        throw ConfigError("grid: min must be strictly below max");
    }
    cfg.grid = grid;
  }

  if (!doc.contains("checks") || !doc["checks"].is_array() || doc["checks"].empty())
    throw ConfigError("checks: a non-empty list of check names is required");
  for (std::size_t i = 0; i < doc["checks"].size(); ++i) {
    const json& c = doc["checks"][i];
    if (!c.is_string())
      throw ConfigError("checks[" + std::to_string(i) + "]: expected a string");
    const auto kind = check_from_name(c.get<std::string>());
    if (!kind)
      throw ConfigError("checks[" + std::to_string(i) + "]: unknown check '" +
                        c.get<std::string>() + "'");
    cfg.checks.push_back(*kind);
  }

  if (doc.contains("tolerance")) {
    if (!doc["tolerance"].is_number() || !(doc["tolerance"].get<double>() > 0.0))
      throw ConfigError("tolerance: expected a positive number");
    cfg.tolerance = doc["tolerance"].get<double>();
  }

  if (doc.contains("killing_field")) {
    const json& k = doc["killing_field"];
    if (!k.is_array() || k.size() != 3)
      throw ConfigError("killing_field: expected three component expressions");
    for (int i = 0; i < 3; ++i) {
      if (!k[i].is_string())
        throw ConfigError("killing_field: expected strings");
      cfg.killing_field[i] = k[i].get<std::string>();
    }
  }

  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("output: expected a string");
    cfg.output = doc["output"].get<std::string>();
  }
  return cfg;
}

ScalarField BuiltFamily::f_field() const {
  const MetricField& g = structure.g;
  return ScalarField([g](const Vec3& p) { return sqrt(g.at(0, 0)(p)); });
}

ScalarField BuiltFamily::u_field() const {
  const MetricField& g = structure.g;
  return ScalarField(
      [g](const Vec3& p) { return sqrt(g.at(0, 0)(p) * g.at(1, 1)(p)); });
}

BuiltFamily build_family(const FamilyParams& params, const ChartBox& domain) {
  BuiltFamily out;
  switch (params.kind) {
    case FamilyParams::Kind::Z2:
      out.structure = build_z2(params.a, domain);
      out.is_fu = true;
      out.kappa = 0.0;
      break;
    case FamilyParams::Kind::Custom:
      out.structure =
          build_fu(parse_expr(params.f_src), parse_expr(params.u_src), domain);
      out.is_fu = true;
      break;
    case FamilyParams::Kind::Kappa0:
      out.structure = build_kappa0(parse_expr(params.u_src), params.A, params.B,
                                   params.C, params.D, domain);
      out.is_fu = true;
      out.kappa = 0.0;
      break;
    case FamilyParams::Kind::KappaNonzero: {
      const double z0 = domain.lower[2];
      const double zmax = domain.upper[2] + 2.0 * params.h;
      OdeSolution sol = solve_t_ode(params.kappa, params.C, params.D, params.t0,
                                    params.sign, z0, zmax, params.h);
      out.structure = build_kappa_nonzero(params.kappa, params.C, params.D,
                                          parse_expr(params.u_src), sol, domain);
      out.is_fu = true;
      out.kappa = params.kappa;
      out.ode = std::move(sol);
      break;
    }
    case FamilyParams::Kind::Product:
      out.structure = build_product(params.leaf_curvature, domain);
      out.is_fu = false;
      break;
  }
  return out;
}

namespace {

// concurrent by default, capped by COSYFLAT_THREADS; the merge step keeps
// the output independent of the worker count
int thread_budget(std::size_t work_items) {
  const unsigned hw = std::thread::hardware_concurrency();
  int cap = hw == 0 ? 1 : std::min<int>(static_cast<int>(hw), 8);
  if (const char* env = std::getenv("COSYFLAT_THREADS")) {
    cap = std::atoi(env);
    if (cap < 1) cap = 1;
  }
  return std::max(1, std::min<int>(cap, static_cast<int>(work_items)));
}

struct PointOutcome {
  double residual = 0.0;
  bool errored = false;
  std::string error;
};

struct CheckPlan {
  CheckKind kind;
  // filled before the sweep for checks that need global context
  double constsec_kappa = 0.0;
  bool enabled = true;
  std::string note;  // populated on global precondition failures
};

}  // namespace

RunResult run(const RunConfig& config) {
  const ChartBox domain =
      config.domain ? *config.domain : default_domain(config.family.kind);
  BuiltFamily family = build_family(config.family, domain);
  const AcmStructure& s = family.structure;

  const GridSpec grid = config.grid ? *config.grid : GridSpec::cover(domain, 5);
  const std::vector<Vec3> points = grid.points();
  const double tol = config.tolerance;
  for (const Vec3& p : points)
    if (!family.structure.domain.contains(p))
      throw ConfigError("grid: point (" + format_shortest(p[0]) + ", " +
                        format_shortest(p[1]) + ", " + format_shortest(p[2]) +
                        ") lies outside the family domain");

  VectorFieldDef killing;
  for (int i = 0; i < 3; ++i)
    killing.comp[i] = ScalarField::from_expr(parse_expr(config.killing_field[i]));

  // global context: theorem pass, constsec kappa estimate, ode drift
  std::vector<CheckPlan> plans;
  std::optional<TheoremResult> theorem;
  std::string theorem_note;
  for (CheckKind kind : config.checks) {
    CheckPlan plan{kind, 0.0, true, ""};
    switch (kind) {
      case CheckKind::Constsec:
        if (!family.is_fu) {
          plan.enabled = false;
          plan.note = "family is not of the f,u form";
        } else if (family.kappa) {
          plan.constsec_kappa = *family.kappa;
        } else {
          std::vector<double> ks;
          ks.reserve(points.size());
          for (const Vec3& p : points)
            ks.push_back(
                constsec_kappa_pointwise(family.f_field(), family.u_field(), p));
          std::sort(ks.begin(), ks.end());
          const std::size_t n = ks.size();
          plan.constsec_kappa =
              n % 2 == 1 ? ks[n / 2] : 0.5 * (ks[n / 2 - 1] + ks[n / 2]);
          plan.note = "kappa_hat=" + format_shortest(plan.constsec_kappa);
        }
        break;
      case CheckKind::Theorem:
        try {
          theorem = estimate_kappa_and_theorem_residual(s, killing, points);
          plan.note = "kappa_hat=" + format_shortest(theorem->kappa_hat) +
                      " variance=" + format_shortest(theorem->kappa_variance) +
                      " branch=" + (theorem->branch > 0 ? std::string("+") : std::string("-")) +
                      "lambda";
        } catch (const EngineError& e) {
          plan.enabled = false;
          plan.note = std::string("precondition failed: ") + e.what();
        }
        break;
      case CheckKind::OdeIntegral:
        if (!family.ode) {
          plan.enabled = false;
          plan.note = "family has no ode profile";
        }
        break;
      default:
        break;
    }
    plans.push_back(std::move(plan));
  }

  // pointwise sweep, parallel over grid points, deterministic merge
  const std::size_t ncheck = plans.size();
  std::vector<PointOutcome> table(points.size() * ncheck);

  auto eval_point = [&](std::size_t pi) {
    const Vec3& p = points[pi];
    for (std::size_t ci = 0; ci < ncheck; ++ci) {
      const CheckPlan& plan = plans[ci];
      PointOutcome& slot = table[pi * ncheck + ci];
      if (!plan.enabled) continue;
      try {
        switch (plan.kind) {
          case CheckKind::Compat:
            slot.residual = compat_residuals(s, p).algebraic_max();
            break;
          case CheckKind::Closedness:
            slot.residual = compat_residuals(s, p).closedness_max();
            break;
          case CheckKind::AProps:
            slot.residual = a_property_residuals(s, p).max();
            break;
          case CheckKind::NablaPhi: {
            const NablaPhiResiduals r = nabla_phi_residuals(s, p);
            slot.residual = std::max({r.cosymplectic, r.kahler_leaves, r.fundamental});
            break;
          }
          case CheckKind::Commutation:
            slot.residual = curvature_phi_commutation(s, p);
            break;
          case CheckKind::AdaptedFrame:
            slot.residual = adapted_frame(s, p).diagnostics_max();
            break;
          case CheckKind::Jacobi: {
            const JacobiResiduals r = jacobi_residuals(adapted_frame(s, p));
            slot.residual = std::max(std::abs(r.r1), std::abs(r.r2));
            break;
          }
          case CheckKind::RicciCrosscheck:
            slot.residual = ricci_crosscheck(s, p);
            break;
          case CheckKind::Cotton:
            slot.residual = cotton_scan(s.g, p).normalized;
            break;
          case CheckKind::Constsec:
            slot.residual = constsec_residual(family.f_field(), family.u_field(),
                                              plan.constsec_kappa, p);
            break;
          case CheckKind::Killing:
            slot.residual = killing_scan(s.g, killing, p);
            break;
          case CheckKind::Theorem:
            slot.residual = theorem->point_residuals[pi];
            break;
          case CheckKind::OdeIntegral:
            break;  // handled after the sweep
        }
      } catch (const EngineError& e) {
        slot.errored = true;
        slot.error = e.what();
      }
    }
  };

  const int workers = thread_budget(points.size());
  if (workers <= 1) {
    for (std::size_t pi = 0; pi < points.size(); ++pi) eval_point(pi);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t pi = next.fetch_add(1);
          if (pi >= points.size()) return;
          eval_point(pi);
        }
      });
    for (auto& t : pool) t.join();
  }

  // deterministic merge: point-major, check-minor; a check stops emitting
  // at its first errored point
  RunResult out;
  std::vector<bool> stopped(ncheck, false);
  std::vector<CheckSummary> summaries(ncheck);
  for (std::size_t ci = 0; ci < ncheck; ++ci) {
    summaries[ci].name = check_name(plans[ci].kind);
    summaries[ci].note = plans[ci].note;
    if (!plans[ci].enabled) {
      summaries[ci].pass = false;
      stopped[ci] = true;
    }
  }

  for (std::size_t pi = 0; pi < points.size(); ++pi)
    for (std::size_t ci = 0; ci < ncheck; ++ci) {
      if (stopped[ci] || plans[ci].kind == CheckKind::OdeIntegral) continue;
      const PointOutcome& slot = table[pi * ncheck + ci];
      if (slot.errored) {
        stopped[ci] = true;
        summaries[ci].pass = false;
        if (summaries[ci].note.empty())
          summaries[ci].note = "stopped at point " + std::to_string(pi) + ": " +
                               slot.error;
        continue;
      }
      ResidualReport rep;
      rep.check = summaries[ci].name;
      rep.point = points[pi];
      rep.residual = slot.residual;
      rep.tolerance = tol;
      rep.pass = slot.residual <= tol;
      summaries[ci].reports += 1;
      summaries[ci].max_residual = std::max(summaries[ci].max_residual, slot.residual);
      if (!rep.pass) summaries[ci].pass = false;
      out.reports.push_back(std::move(rep));
    }

  // trailing ode-integral block: one line per profile sample
  for (std::size_t ci = 0; ci < ncheck; ++ci) {
    if (plans[ci].kind != CheckKind::OdeIntegral || !plans[ci].enabled) continue;
    const OdeSolution& sol = *family.ode;
    const double target = sol.conserved();
    for (std::size_t k = 0; k < sol.z.size(); ++k) {
      const double e = sol.tp[k] * sol.tp[k] +
                       sol.kappa * std::pow(sol.t[k], 4.0) / (4.0 * sol.c * sol.c);
      ResidualReport rep;
      rep.check = summaries[ci].name;
      rep.point = {0.0, 0.0, sol.z[k]};
      rep.residual = std::abs(e - target);
      rep.tolerance = tol;
      rep.pass = rep.residual <= tol;
      summaries[ci].reports += 1;
      summaries[ci].max_residual = std::max(summaries[ci].max_residual, rep.residual);
      if (!rep.pass) summaries[ci].pass = false;
      out.reports.push_back(std::move(rep));
    }
  }

  out.summary = std::move(summaries);
  for (const CheckSummary& cs : out.summary)
    if (!cs.pass) out.all_pass = false;
  return out;
}

namespace {

void append_report_line(std::string& out, const ResidualReport& r) {
  out += "{\"check\":\"";
  out += r.check;
  out += "\",\"point\":[";
  for (int i = 0; i < 3; ++i) {
    if (i) out += ',';
    out += format_shortest(r.point[i]);
  }
  out += "],\"residual\":";
  out += format_shortest(r.residual);
  out += ",\"tolerance\":";
  out += format_shortest(r.tolerance);
  out += ",\"pass\":";
  out += r.pass ? "true" : "false";
  out += "}\n";
}

}  // namespace

std::string emit_jsonl(const std::vector<ResidualReport>& reports) {
  std::string out;
  out.reserve(reports.size() * 96);
  for (const ResidualReport& r : reports) append_report_line(out, r);
  return out;
}

std::string emit_summary(const std::vector<ResidualReport>& reports) {
  if (reports.empty()) return "0 checks\n";
  std::vector<std::string> order;
  std::map<std::string, CheckSummary> by_check;
  for (const ResidualReport& r : reports) {
    auto it = by_check.find(r.check);
    if (it == by_check.end()) {
      order.push_back(r.check);
      it = by_check.emplace(r.check, CheckSummary{r.check, 0, 0.0, true, ""}).first;
    }
    it->second.reports += 1;
    it->second.max_residual = std::max(it->second.max_residual, r.residual);
    if (!r.pass) it->second.pass = false;
  }
  std::ostringstream os;
  os << "check              reports   max residual   result\n";
  for (const std::string& name : order) {
    const CheckSummary& cs = by_check[name];
    os << name << std::string(name.size() < 19 ? 19 - name.size() : 1, ' ');
    std::string cnt = std::to_string(cs.reports);
    os << cnt << std::string(cnt.size() < 10 ? 10 - cnt.size() : 1, ' ');
    std::string res = format_shortest(cs.max_residual);
    os << res << std::string(res.size() < 15 ? 15 - res.size() : 1, ' ');
    os << (cs.pass ? "pass" : "FAIL") << "\n";
  }
  return os.str();
}

std::string emit_summary(const RunResult& result) {
  std::ostringstream os;
  os << emit_summary(result.reports);
  for (const CheckSummary& cs : result.summary)
    if (!cs.note.empty()) os << "note [" << cs.name << "]: " << cs.note << "\n";
  os << "verdict: " << (result.all_pass ? "PASS" : "FAIL") << " ("
     << result.summary.size() << " checks, " << result.reports.size()
     << " reports)\n";
  return os.str();
}

std::string emit_report(const std::vector<ResidualReport>& reports,
                        const std::string& format) {
  if (format == "jsonl") return emit_jsonl(reports);
  if (format == "summary") return emit_summary(reports);
  throw ConfigError("unknown report format '" + format + "'");
}

}  // namespace cosyflat
