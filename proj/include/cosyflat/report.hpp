#pragma once

#include <optional>
#include <string>

#include "cosyflat/families.hpp"

namespace cosyflat {

/// One residual measurement: pass holds exactly when residual <= tolerance.
struct ResidualReport {
  std::string check;
  Vec3 point{};
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

enum class CheckKind {
  Compat,
  Closedness,
  AProps,
  NablaPhi,
  Commutation,
  AdaptedFrame,
  Jacobi,
  RicciCrosscheck,
  Cotton,
  Constsec,
  Killing,
  Theorem,
  OdeIntegral,
};

/// The closed check vocabulary, in canonical order.
const char* check_name(CheckKind k);
std::optional<CheckKind> check_from_name(const std::string& name);

struct FamilyParams {
  enum class Kind { Z2, Custom, Kappa0, KappaNonzero, Product };
  Kind kind = Kind::Z2;
  double a = 1.0;                       // z2 exponent
  std::string f_src, u_src = "1";      // custom family expressions
  double A = 1.0, B = 2.0, C = 1.0, D = 1.0;
  double kappa = -1.0;                  // kappa-nonzero family
  double t0 = 1.0;
  int sign = 1;
  double h = 1e-3;
  double leaf_curvature = 0.0;
};

struct RunConfig {
  FamilyParams family;
  std::optional<ChartBox> domain;  // family default when absent
  std::optional<GridSpec> grid;    // covers the domain with 5^3 cells when absent
  std::vector<CheckKind> checks;
  double tolerance = 1e-8;
  std::array<std::string, 3> killing_field{"0", "1", "0"};
  std::string output;  // jsonl target; empty = stdout
};

/// Parses and validates a config document; throws ConfigError naming the
/// offending field.
RunConfig parse_config(const std::string& json_text);

ChartBox default_domain(FamilyParams::Kind kind);

/// A constructed family plus the extras some checks need.
struct BuiltFamily {
  AcmStructure structure;
  bool is_fu = false;               // metric has the f,u block form
  std::optional<double> kappa;      // known flatness constant
  std::optional<OdeSolution> ode;   // profile behind a kappa != 0 family

  ScalarField f_field() const;  // sqrt(g_xx); requires is_fu
  ScalarField u_field() const;  // sqrt(g_xx g_yy); requires is_fu
};

BuiltFamily build_family(const FamilyParams& params, const ChartBox& domain);

struct CheckSummary {
  std::string name;
  int reports = 0;
  double max_residual = 0.0;
  bool pass = true;
  std::string note;  // kappa estimates, precondition failures
};

struct RunResult {
  std::vector<ResidualReport> reports;  // point-major, check-minor
  std::vector<CheckSummary> summary;
  bool all_pass = true;
};

/// Runs every configured check over the grid.  Point evaluations may be
/// spread over COSYFLAT_THREADS workers; the report order and content are
/// independent of the thread count.
RunResult run(const RunConfig& config);

/// One JSON object per line, keys in the order
/// (check, point, residual, tolerance, pass), numbers in shortest
/// round-trip decimal.
std::string emit_jsonl(const std::vector<ResidualReport>& reports);

/// Human-readable table grouped by check.
std::string emit_summary(const std::vector<ResidualReport>& reports);

std::string emit_summary(const RunResult& result);

/// Dispatches on "jsonl" or "summary"; anything else is a ConfigError.
std::string emit_report(const std::vector<ResidualReport>& reports,
                        const std::string& format);

}  // namespace cosyflat
