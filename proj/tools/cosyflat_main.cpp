// cosyflat: builds three-dimensional almost cosymplectic structures,
// verifies their structure identities on a grid, and certifies or refutes
// local conformal flatness through the Cotton residual of the
// Weyl-Schouten tensor.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cosyflat/format.hpp"
#include "cosyflat/report.hpp"

namespace {

using namespace cosyflat;

constexpr const char* kGrammarHelp = R"(expression grammar (for custom f, u and killing_field entries):
  expr   := term (('+'|'-') term)*
  term   := factor (('*'|'/') factor)*
  factor := base ('^' number)?
  base   := number | var | func '(' expr ')' | '(' expr ')' | '-' base
'^' binds tighter than unary minus; the exponent must be a numeric literal.
Variables: x y z.  Functions: exp ln sqrt sin cos.
Whitespace insensitive, ASCII only, no implicit multiplication.)";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_verify(const std::string& config_path, const std::string& format) {
  RunConfig cfg;
  try {
    cfg = parse_config(read_file(config_path));
  } catch (const EngineError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  RunResult result;
  try {
    result = run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const EngineError& e) {
    std::cerr << "build error: " << e.what() << "\n";
    return 3;
  }

  const std::string jsonl = emit_jsonl(result.reports);
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out || !(out << jsonl)) {
      std::cerr << "io error: cannot write '" << cfg.output << "'\n";
      return 3;
    }
    std::cout << emit_summary(result);
  } else if (format == "summary") {
    std::cout << emit_summary(result);
  } else {
    std::cout << jsonl;
  }
  return result.all_pass ? 0 : 1;
}

int run_curvature(const std::string& config_path, const std::string& point_str) {
  RunConfig cfg;
  Vec3 p;
  try {
    cfg = parse_config(read_file(config_path));
    std::istringstream ss(point_str);
    char comma;
    if (!(ss >> p[0] >> comma >> p[1] >> comma >> p[2]))
      throw ConfigError("--point: expected x,y,z");
  } catch (const EngineError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const ChartBox domain =
        cfg.domain ? *cfg.domain : default_domain(cfg.family.kind);
    const BuiltFamily family = build_family(cfg.family, domain);
    if (!family.structure.domain.contains(p)) {
      std::cerr << "config error: --point lies outside the family domain\n";
      return 2;
    }
    const ConnectionJets conn = christoffel(family.structure.g, p);
    CurvatureJets curv = riemann(conn);
    ricci_scalar_schouten(curv, conn);
    const ConnectionPoint cp = connection_point(conn);
    const CurvaturePoint cv = curvature_point(curv);

    std::string out = "{\"point\":[";
    for (int i = 0; i < 3; ++i)
      out += (i ? "," : "") + format_shortest(p[i]);
    out += ']';

    auto arr = [&](auto&& value, const std::vector<int>& dims) {
      std::function<std::string(std::vector<int>&, std::size_t)> rec =
          [&](std::vector<int>& idx, std::size_t depth) -> std::string {
        std::string s = "[";
        for (int i = 0; i < dims[depth]; ++i) {
          if (i) s += ',';
          idx.push_back(i);
          s += depth + 1 == dims.size() ? format_shortest(value(idx))
                                        : rec(idx, depth + 1);
          idx.pop_back();
        }
        return s + "]";
      };
      std::vector<int> idx;
      return rec(idx, 0);
    };

    out += ",\"christoffel\":" +
           arr([&](const std::vector<int>& i) { return cp.gamma[i[0]][i[1]][i[2]]; },
               {3, 3, 3});
    out += ",\"dchristoffel\":" +
           arr([&](const std::vector<int>& i) {
                 return cp.dgamma[i[0]][i[1]][i[2]][i[3]];
               },
               {3, 3, 3, 3});
    out += ",\"d2christoffel\":" +
           arr([&](const std::vector<int>& i) {
                 return cp.d2gamma[i[0]][i[1]][i[2]][i[3]][i[4]];
               },
               {3, 3, 3, 3, 3});
    out += ",\"riemann\":" +
           arr([&](const std::vector<int>& i) { return cv.R[i[0]][i[1]][i[2]][i[3]]; },
               {3, 3, 3, 3});
    out += ",\"ricci\":" +
           arr([&](const std::vector<int>& i) { return cv.ric[i[0]][i[1]]; }, {3, 3});
    out += ",\"scalar\":" + format_shortest(cv.scal);
    out += ",\"ricci_operator\":" +
           arr([&](const std::vector<int>& i) { return cv.q[i[0]][i[1]]; }, {3, 3});
    out += ",\"weyl_schouten\":" +
           arr([&](const std::vector<int>& i) { return cv.l[i[0]][i[1]]; }, {3, 3});
    out += ",\"nabla_weyl_schouten\":" +
           arr([&](const std::vector<int>& i) {
                 return cv.nabla_l[i[0]][i[1]][i[2]];
               },
               {3, 3, 3});
    out += "}\n";
    std::cout << out;
    return 0;
  } catch (const EngineError& e) {
    std::cerr << "build error: " << e.what() << "\n";
    return 3;
  }
}

int run_solve_ode(double kappa, double c, double d, double t0, double h, double z0,
                  double zmax, int sign) {
  try {
    const OdeSolution sol = solve_t_ode(kappa, c, d, t0, sign, z0, zmax, h);
    const double target = sol.conserved();
    std::string out;
    for (std::size_t k = 0; k < sol.z.size(); ++k) {
      const double e = sol.tp[k] * sol.tp[k] +
                       kappa * sol.t[k] * sol.t[k] * sol.t[k] * sol.t[k] /
                           (4.0 * c * c);
      out += "{\"z\":" + format_shortest(sol.z[k]) +
             ",\"t\":" + format_shortest(sol.t[k]) +
             ",\"tprime\":" + format_shortest(sol.tp[k]) +
             ",\"drift\":" + format_shortest(std::abs(e - target)) + "}\n";
    }
    std::cout << out;
    return 0;
  } catch (const EngineError& e) {
    std::cerr << "ode error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chart-based verifier for three-dimensional almost cosymplectic "
               "structures and their conformal flatness"};
  app.footer(kGrammarHelp);
  app.require_subcommand(1);

  std::string config_path, point_str, format = "jsonl";

  CLI::App* verify = app.add_subcommand(
      "verify", "build a family, sweep the grid, run the configured checks");
  verify->add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  verify->add_option("--format", format, "stdout format: jsonl or summary")
      ->check(CLI::IsMember({"jsonl", "summary"}));

  CLI::App* curvature = app.add_subcommand(
      "curvature", "dump connection and curvature data at a point as JSON");
  curvature->add_option("--config", config_path, "run configuration (JSON)")
      ->required();
  curvature->add_option("--point", point_str, "evaluation point x,y,z")->required();

  double kappa = 1.0, c = 1.0, d = 16.0, t0 = 1.0, h = 1e-3, z0 = 0.0, zmax = 1.0;
  int sign = 1;
  CLI::App* ode = app.add_subcommand(
      "solve-ode", "integrate the separable profile and emit samples as jsonl");
  ode->set_help_flag("--help", "print help");  // frees -h for the step option
  ode->add_option("--kappa", kappa, "curvature constant")->required();
  ode->add_option("--C", c, "separation constant C")->required();
  ode->add_option("--D", d, "first-integral constant D")->required();
  ode->add_option("--t0", t0, "initial profile value")->required();
  ode->add_option("--h", h, "step size")->required();
  ode->add_option("--zmax", zmax, "integrate up to this z")->required();
  ode->add_option("--z0", z0, "starting z (default 0)");
  ode->add_option("--sign", sign, "initial slope sign, +1 or -1");

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) return run_verify(config_path, format);
  if (curvature->parsed()) return run_curvature(config_path, point_str);
  return run_solve_ode(kappa, c, d, t0, h, z0, zmax, sign);
}
