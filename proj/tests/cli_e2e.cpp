// End-to-end exercise of the cosyflat binary: exit-status contract,
// deterministic output, and the auxiliary subcommands.  Takes the binary
// path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::cout << (ok ? "[ ok ] " : "[FAIL] ") << what << "\n";
  if (!ok) ++failures;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_e2e <path-to-cosyflat>\n";
    return 2;
  }
  const std::string bin = argv[1];

  write_file("e2e_pass.json", R"json({
    "family": {"type": "z2", "a": 1.0},
    "checks": ["compat", "closedness", "cotton", "jacobi", "ricci-crosscheck", "theorem"],
    "tolerance": 1e-8
  })json");
  write_file("e2e_fail.json", R"json({
    "family": {"type": "custom", "f": "z*(1+0.1*sin(x*z))", "u": "exp(x)"},
    "checks": ["cotton"],
    "tolerance": 1e-8
  })json");
  write_file("e2e_badcheck.json", R"json({
    "family": {"type": "z2"},
    "checks": ["compat", "frobnicate"]
  })json");
  write_file("e2e_badbuild.json", R"json({
    "family": {"type": "z2"},
    "domain": {"lower": [-1, -1, -0.5], "upper": [1, 1, 2]},
    "checks": ["compat"]
  })json");

  expect(run(bin + " verify --config e2e_pass.json > e2e_a.jsonl") == 0,
         "all-pass run exits 0");
  expect(run(bin + " verify --config e2e_fail.json > /dev/null") == 1,
         "failing check exits 1 (CheckFailure)");
  expect(run(bin + " verify --config e2e_badcheck.json 2> e2e_err.txt") == 2,
         "unknown check exits 2 (ConfigError)");
  expect(read_file("e2e_err.txt").find("frobnicate") != std::string::npos,
         "config error message names the bad entry");
  expect(run(bin + " verify --config e2e_badbuild.json 2> /dev/null") == 3,
         "unbuildable family exits 3 (BuildError)");
  expect(run(bin + " verify --config does_not_exist.json 2> /dev/null") == 2,
         "missing config file exits 2");

  // determinism: reruns and thread counts must give identical bytes
  run(bin + " verify --config e2e_pass.json > e2e_b.jsonl");
  run("COSYFLAT_THREADS=4 " + bin + " verify --config e2e_pass.json > e2e_c.jsonl");
  const std::string a = read_file("e2e_a.jsonl");
  expect(!a.empty() && a == read_file("e2e_b.jsonl"), "reruns are byte-identical");
  expect(a == read_file("e2e_c.jsonl"), "thread count does not change the output");

  // every line is a JSON object with the contract fields in order
  {
    std::istringstream lines(a);
    std::string line;
    bool shape_ok = true;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
      ++count;
      const auto doc = nlohmann::json::parse(line, nullptr, false);
      if (doc.is_discarded() || !doc.contains("check") || !doc.contains("point") ||
          !doc.contains("residual") || !doc.contains("tolerance") ||
          !doc.contains("pass"))
        shape_ok = false;
      if (line.rfind("{\"check\":", 0) != 0) shape_ok = false;
    }
    expect(shape_ok && count == 6 * 125, "jsonl lines carry the report schema");
  }

  // summary format
  {
    run(bin + " verify --config e2e_pass.json --format summary > e2e_sum.txt");
    const std::string sum = read_file("e2e_sum.txt");
    expect(sum.find("verdict: PASS") != std::string::npos &&
               sum.find("kappa_hat=") != std::string::npos,
           "summary prints a verdict and the kappa estimate");
  }

  // output file redirection via the config
  {
    write_file("e2e_out.json", R"json({
      "family": {"type": "z2"},
      "checks": ["compat"],
      "output": "e2e_redirected.jsonl"
    })json");
    expect(run(bin + " verify --config e2e_out.json > /dev/null") == 0 &&
               !read_file("e2e_redirected.jsonl").empty(),
           "output path in the config receives the jsonl");
  }

  // solve-ode subcommand
  {
    const int code = run(bin +
                         " solve-ode --kappa 1 --C 1 --D 16 --t0 1 --h 0.001 "
                         "--zmax 1 > e2e_ode.jsonl");
    const std::string ode = read_file("e2e_ode.jsonl");
    std::istringstream lines(ode);
    std::string first, line;
    std::size_t count = 0;
    double max_drift = 0.0;
    while (std::getline(lines, line)) {
      if (count == 0) first = line;
      ++count;
      const auto doc = nlohmann::json::parse(line);
      max_drift = std::max(max_drift, doc["drift"].get<double>());
    }
    expect(code == 0 && count == 1001, "solve-ode emits one sample per step");
    const auto head = nlohmann::json::parse(first);
    expect(head["z"].get<double>() == 0.0 && head["t"].get<double>() == 1.0,
           "solve-ode starts from the initial condition");
    expect(max_drift < 1e-8, "solve-ode drift stays below 1e-8 at h = 1e-3");
    expect(run(bin + " solve-ode --kappa 1 --C 1 --D 1 --t0 1.5 --h 0.001 "
                     "--zmax 1 2> /dev/null") == 3,
           "inadmissible initial data exits 3");
  }

  // curvature subcommand
  {
    const int code =
        run(bin + " curvature --config e2e_pass.json --point 0,0,1 > e2e_curv.json");
    const auto doc = nlohmann::json::parse(read_file("e2e_curv.json"));
    expect(code == 0 && doc.contains("christoffel") && doc.contains("riemann") &&
               doc.contains("ricci") && doc.contains("weyl_schouten") &&
               doc.contains("nabla_weyl_schouten") && doc.contains("d2christoffel"),
           "curvature dump carries connection and curvature blocks");
    expect(doc["scalar"].get<double>() == -4.0, "scalar curvature is -4 at (0,0,1)");
    expect(doc["christoffel"][0][0][2].get<double>() == 1.0,
           "Gamma^x_xz = 1 at (0,0,1)");
  }

  std::cout << (failures == 0 ? "cli_e2e: all checks passed\n"
                              : "cli_e2e: FAILURES\n");
  return failures == 0 ? 0 : 1;
}
