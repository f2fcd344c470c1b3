// Command-line interface: loads instance files, reruns the verification
// suites, and emits structured JSON reports.
//
// Exit codes: 0 all checks pass, 1 a mathematical claim failed, 2 input or
// usage error.  Reports are byte-stable for fixed inputs; wall time is only
// included when --timing is passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "vbma/curvature.hpp"
#include "vbma/end_form.hpp"
#include "vbma/instance_io.hpp"
#include "vbma/ma_gram.hpp"
#include "vbma/rank2_surface.hpp"
#include "vbma/rng.hpp"
#include "vbma/vortex_surface.hpp"
#include "vbma/vortex_threefold.hpp"

namespace {

using ojson = nlohmann::ordered_json;
using namespace vbma;

// Deterministic serializer: floats via %.17g, objects in insertion order.
void write_stable(const ojson& j, std::string& out, int indent) {
  const std::string pad(indent, ' ');
  const std::string pad_in(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad_in;
      out += ojson(it.key()).dump();
      out += ": ";
      write_stable(it.value(), out, indent + 2);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& item : j) {
      if (!first) out += ",\n";
      first = false;
      out += pad_in;
      write_stable(item, out, indent + 2);
    }
    out += "\n" + pad + "]";
  } else if (j.is_string()) {
    out += j.dump();
  } else if (j.is_boolean()) {
    out += j.get<bool>() ? "true" : "false";
  } else if (j.is_number_integer()) {
    out += std::to_string(j.get<long long>());
  } else if (j.is_number_unsigned()) {
    out += std::to_string(j.get<unsigned long long>());
  } else if (j.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
    out += buf;
  } else {
    out += "null";
  }
}

std::string dump_stable(const ojson& j) {
  std::string out;
  write_stable(j, out, 0);
  out += "\n";
  return out;
}

ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

ojson mat_json(const Mat& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(complex_json(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CheckList {
  ojson items = ojson::array();
  bool all_pass = true;

  ojson& add(const std::string& name, bool pass) {
    ojson item;
    item["name"] = name;
    item["pass"] = pass;
    if (!pass) all_pass = false;
    items.push_back(std::move(item));
    return items.back();
  }
};

void record_verdict(ojson& item, const Verdict& v) {
  item["verdict"] = to_string(v.kind);
  item["min_eigenvalue"] = v.min_eigenvalue;
  item["kernel_dimension"] = v.kernel_dimension;
}

int finish(ojson& report, int code, bool timing, const std::string& path,
           std::chrono::steady_clock::time_point start) {
  report["status"] =
      code == 0 ? "pass" : (code == 1 ? "violation" : "invalid-input");
  report["exit_code"] = code;
  if (timing) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(elapsed).count();
  }
  const std::string text = dump_stable(report);
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write report to " << path << "\n";
      return 2;
    }
    out << text;
    std::cout << "status: " << report["status"].get<std::string>()
              << " (report written to " << path << ")\n";
  }
  return code;
}

int cmd_verify_counterexample(int n, int m, double tol, bool timing,
                              const std::string& report_path) {
  const auto start = std::chrono::steady_clock::now();
  ojson report;
  report["version"] = 1;
  report["command"] = "verify-counterexample";
  report["kind"] = "vortex_surface";
  report["n"] = n;
  report["m"] = m;

  if (n < 2 || n + 1 > kMaxRank) {
    report["error"] = "n must lie in [2, " + std::to_string(kMaxRank - 1) +
                      "]; the counterexample needs a sub-bundle of dimension "
                      "at least 2";
    return finish(report, 2, timing, report_path, start);
  }
  if (m < 0 || 2 + m > kMaxDim) {
    report["error"] =
        "m must lie in [0, " + std::to_string(kMaxDim - 2) + "]";
    return finish(report, 2, timing, report_path, start);
  }

  const VortexSurfaceInstance inst = counterexample_instance(n);
  CheckList checks;

  {
    const double res = vortex_residual(inst);
    const double bound = tol * std::max(1.0, inst.k);
    auto& c = checks.add("vbma_residual", res <= bound);
    c["value"] = res;
    c["tol"] = bound;
  }

  const BForms bf = b_forms(inst);
  {
    const Verdict v = classify(bf.b1);
    auto& c = checks.add("b1_verdict",
                         v.kind == VerdictKind::StrictlySemiPositive &&
                             v.kernel_dimension == n - 1);
    record_verdict(c, v);
    c["expected_kernel_dimension"] = n - 1;
  }
  auto expect_positive = [&](const char* name, const MaGram& gram) {
    const Verdict v = classify(gram);
    auto& c = checks.add(name, v.kind == VerdictKind::Positive);
    record_verdict(c, v);
  };
  expect_positive("b2_verdict", bf.b2);
  expect_positive("b3_verdict", bf.b3);
  expect_positive("b4_verdict", bf.b4);

  const SchurChain chain = schur_chain(inst);
  {
    auto& c = checks.add("schur_chain_scalars",
                         std::abs(chain.pprime) <= tol &&
                             std::abs(chain.qprime) <= tol &&
                             std::abs(chain.rprime) <= tol &&
                             std::abs(chain.sprime - 0.125) <= tol &&
                             chain.structure_residual <= tol);
    c["p_prime"] = chain.pprime;
    c["q_prime"] = complex_json(chain.qprime);
    c["r_prime"] = chain.rprime;
    c["s_prime"] = chain.sprime;
    c["structure_residual"] = chain.structure_residual;
    c["tol"] = tol;
  }
  {
    const SemidefCase sc = classify_semidef_case(chain);
    auto& c = checks.add("semidef_case", sc == SemidefCase::Case1 &&
                                             case1_characteristic(inst));
    c["case"] = to_string(sc);
    c["c_norm_sq"] = inst.c.squaredNorm();
    c["case1_locus_value"] = inst.k * (2.0 * inst.r + 1.0);
  }

  if (m >= 1) {
    const LiftedInstance lifted = lift(inst, m);
    {
      double factorial = 1.0;
      for (int i = 2; i <= m + 2; ++i) factorial *= i;
      const double coeff = inst.k * factorial / 2.0;
      const double res = lift_power_residual(lifted);
      auto& c = checks.add("lift_power_residual", res <= tol * coeff);
      c["value"] = res;
      c["expected_coefficient"] = coeff;
      c["tol"] = tol * coeff;
    }
    {
      const Verdict v = classify(gram_matrix(lifted.phi));
      auto& c = checks.add("lift_gram_verdict",
                           v.kind == VerdictKind::StrictlySemiPositive);
      record_verdict(c, v);
    }
  }

  report["checks"] = std::move(checks.items);
  return finish(report, checks.all_pass ? 0 : 1, timing, report_path, start);
}

void check_generic(const Curvature& theta, double tol, CheckList& checks) {
  const MaGram gram = gram_matrix(theta);
  const Verdict v = classify(gram);
  {
    auto& c = checks.add("classification", true);
    record_verdict(c, v);
  }
  const double scale = std::max(1.0, gram.matrix.cwiseAbs().maxCoeff());
  {
    const double mc = monte_carlo_min(theta, 2000, 1);
    const bool claims_nonnegative = v.kind != VerdictKind::Indefinite;
    const bool consistent =
        !claims_nonnegative || mc >= -std::max(tol, 1e-9) * scale;
    auto& c = checks.add("monte_carlo_consistency", consistent);
    c["monte_carlo_min"] = mc;
  }
  {
    Rng rng(sub_seed(1, 2));
    const Mat g = rng.hermitian(theta.r());
    const double dev = commutator_identity_check(theta, g);
    const double power_scale =
        std::max(1.0, curvature_power(theta, theta.n()).max_norm());
    const double bound = std::max(tol, 1e-12) * power_scale *
                         std::max(1.0, g.cwiseAbs().maxCoeff());
    auto& c = checks.add("commutator_identity", dev <= bound);
    c["value"] = dev;
    c["tol"] = bound;
  }
}

int check_rank2(const Rank2SurfaceData& data, double tol, CheckList& checks) {
  const Mat& a = data.blocks.a;
  const Mat& b = data.blocks.b;
  const Mat& c = data.blocks.c;
  const Mat top = a * c + c * a - b * b.adjoint() - b.adjoint() * b;
  const double scale = std::max(1.0, top.cwiseAbs().maxCoeff());
  const double res =
      (top - data.eta0 * Mat::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
  const double bound = std::max(tol, 1e-9) * scale;
  {
    auto& item = checks.add("vbma_residual", res <= bound);
    item["value"] = res;
    item["tol"] = bound;
  }
  if (res > bound) return 1;
  try {
    const Verdict v = surface_preservation_check(data.blocks, data.eta0);
    auto& item = checks.add("preservation", v.kind == VerdictKind::Positive);
    record_verdict(item, v);
  } catch (const std::logic_error& e) {
    auto& item = checks.add("preservation", false);
    item["error"] = e.what();
  }
  return checks.all_pass ? 0 : 1;
}

void check_vortex(const VortexSurfaceInstance& inst, double tol,
                  CheckList& checks) {
  const double scale = std::max(1.0, inst.k);
  {
    const double res = vortex_residual(inst);
    const double bound = std::max(tol, 1e-12) * scale;
    auto& c = checks.add("vbma_residual", res <= bound);
    c["value"] = res;
    c["tol"] = bound;
  }
  const SchurChain chain = schur_chain(inst);
  {
    const double bound = std::max(tol, 1e-12) * scale;
    auto& c =
        checks.add("schur_structure", chain.structure_residual <= bound);
    c["value"] = chain.structure_residual;
    c["tol"] = bound;
  }
  try {
    const SemidefCase sc = classify_semidef_case(chain);
    auto& c = checks.add("semidef_case", true);
    c["case"] = to_string(sc);
  } catch (const std::logic_error& e) {
    auto& c = checks.add("semidef_case", false);
    c["error"] = e.what();
  }
  const BForms bf = b_forms(inst);
  auto record = [&](const char* name, const MaGram& gram) {
    auto& c = checks.add(name, true);
    record_verdict(c, classify(gram));
  };
  record("b1_verdict", bf.b1);
  record("b2_verdict", bf.b2);
  record("b3_verdict", bf.b3);
  record("b4_verdict", bf.b4);
}

void check_threefold(const ThreefoldInstance& inst, double tol,
                     CheckList& checks) {
  const DetCoefficients dc =
      det_coefficients(inst.a, inst.b, inst.lambda1, inst.lambda2,
                       std::norm(inst.ell1), std::norm(inst.ell2));
  {
    const double scale = std::max({1.0, std::abs(dc.c1), std::abs(dc.c2)});
    const double res =
        std::max(std::abs(dc.c1 - dc.c2), std::abs(inst.c - dc.c1));
    const double bound = std::max(tol, 1e-9) * scale;
    auto& c = checks.add("constraint_residual", res <= bound);
    c["value"] = res;
    c["c1"] = dc.c1;
    c["c2"] = dc.c2;
    c["tol"] = bound;
  }
  {
    const double res = threefold_residual(inst);
    const double bound = std::max(tol, 1e-9) * std::max(1.0, inst.c);
    auto& c = checks.add("vbma_residual", res <= bound);
    c["value"] = res;
    c["tol"] = bound;
  }
  try {
    const DetDecomposition dd = det_decomposition(inst);
    const double rel_det = std::abs(dd.det_x - dd.det_identity) /
                           std::max(1.0, std::abs(dd.det_identity));
    const double rel_a = std::abs(dd.det_a_block - dd.det_a_identity) /
                         std::max(1.0, std::abs(dd.det_a_identity));
    const double bound = std::max(tol, 1e-9);
    auto& c = checks.add("det_identities",
                         rel_det <= bound && rel_a <= bound);
    c["det_x"] = dd.det_x;
    c["det_identity"] = dd.det_identity;
    c["det_a_block"] = dd.det_a_block;
    c["det_a_identity"] = dd.det_a_identity;
    c["rel_residual"] = std::max(rel_det, rel_a);
    c["tol"] = bound;
  } catch (const std::logic_error& e) {
    auto& c = checks.add("det_identities", false);
    c["error"] = e.what();
  }
}

int cmd_check(const std::string& input, double tol, bool timing,
              const std::string& report_path) {
  const auto start = std::chrono::steady_clock::now();
  ojson report;
  report["version"] = 1;
  report["command"] = "check";
  report["input"] = input;

  std::optional<InstanceFile> file;
  try {
    file = load_instance(input);
  } catch (const SchemaError& e) {
    report["kind"] = "unknown";
    report["error"] = e.what();
    return finish(report, 2, timing, report_path, start);
  }
  report["kind"] = to_string(file->kind());
  report["tol"] = tol;

  CheckList checks;
  int code = 0;
  try {
    if (const auto* curv = std::get_if<Curvature>(&file->payload)) {
      check_generic(*curv, tol, checks);
    } else if (const auto* surf =
                   std::get_if<Rank2SurfaceData>(&file->payload)) {
      code = check_rank2(*surf, tol, checks);
    } else if (const auto* vortex =
                   std::get_if<VortexSurfaceInstance>(&file->payload)) {
      check_vortex(*vortex, tol, checks);
    } else if (const auto* three =
                   std::get_if<ThreefoldInstance>(&file->payload)) {
      check_threefold(*three, tol, checks);
    }
  } catch (const std::invalid_argument& e) {
    report["error"] = e.what();
    report["checks"] = std::move(checks.items);
    return finish(report, 2, timing, report_path, start);
  } catch (const std::logic_error& e) {
    auto& c = checks.add("invariant", false);
    c["error"] = e.what();
  }
  report["checks"] = std::move(checks.items);
  if (!checks.all_pass) code = 1;
  return finish(report, code, timing, report_path, start);
}

int sweep_rank2(ojson& report, int trials, std::uint64_t seed) {
  Rng rng(sub_seed(seed, 1));
  int violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  ojson witness;
  for (int t = 0; t < trials; ++t) {
    const Mat b = rng.cgauss_matrix(2, 2);
    const Mat x = rng.cgauss_matrix(2, 2);
    const double lambda = rng.log_uniform(1e-3, 1e3);
    const SchurInequality si = schur_inequality_check(b, x, lambda);
    const QuadraticLambdaCheck qc =
        quadratic_lambda_check(greek_coefficients(b, x));
    min_margin = std::min(min_margin, si.lhs - si.rhs);
    if (!si.holds || !qc.holds) {
      ++violations;
      if (witness.is_null()) {
        witness["b"] = mat_json(b);
        witness["x"] = mat_json(x);
        witness["lambda"] = lambda;
        witness["lhs"] = si.lhs;
        witness["rhs"] = si.rhs;
      }
    }
  }
  report["trials"] = trials;
  report["violations"] = violations;
  report["min_margin"] = min_margin;
  if (!witness.is_null()) report["witness"] = std::move(witness);
  return violations == 0 ? 0 : 1;
}

int sweep_region_p(ojson& report, double a, double b, double lambda1,
                   double lambda2, int trials, std::uint64_t seed) {
  const RegionSweepReport sweep =
      region_p_sweep(a, b, lambda1, lambda2, trials, seed);
  report["a"] = a;
  report["b"] = b;
  report["lambda1"] = lambda1;
  report["lambda2"] = lambda2;
  report["trials"] = sweep.requested;
  report["accepted"] = sweep.accepted;
  report["min_g1"] = sweep.min_g1;
  report["min_g2"] = sweep.min_g2;
  report["nonpositive_g1"] = sweep.nonpositive_g1;
  report["nonpositive_g2"] = sweep.nonpositive_g2;
  report["max_det_rel_residual"] = sweep.max_det_rel_residual;
  const bool pass = sweep.accepted > 0 && sweep.nonpositive_g1 == 0 &&
                    sweep.nonpositive_g2 == 0 &&
                    sweep.max_det_rel_residual <= 1e-9;
  return pass ? 0 : 1;
}

int sweep_threefold_det(ojson& report, int trials, std::uint64_t seed) {
  Rng rng(sub_seed(seed, 3));
  int accepted = 0;
  int rejected = 0;
  int failures = 0;
  double max_rel = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double a = rng.log_uniform(0.25, 4.0);
    const double b = rng.log_uniform(0.25, 4.0);
    const double l1 = rng.log_uniform(0.25, 4.0);
    const double l2 = rng.log_uniform(0.25, 4.0);
    const double split = rng.uniform(0.0, 1.0);
    ThreefoldInstance inst{};
    try {
      inst = make_instance(a, b, l1, l2, split,
                           sub_seed(seed, 1000 + static_cast<std::uint64_t>(t)));
    } catch (const std::invalid_argument&) {
      ++rejected;
      continue;
    }
    ++accepted;
    const DetDecomposition dd = det_decomposition(inst);
    const double rel_det = std::abs(dd.det_x - dd.det_identity) /
                           std::max(1.0, std::abs(dd.det_identity));
    const double rel_a = std::abs(dd.det_a_block - dd.det_a_identity) /
                         std::max(1.0, std::abs(dd.det_a_identity));
    const double rel = std::max(rel_det, rel_a);
    max_rel = std::max(max_rel, rel);
    if (rel > 1e-9) ++failures;
  }
  report["trials"] = trials;
  report["accepted"] = accepted;
  report["rejected"] = rejected;
  report["failures"] = failures;
  report["max_rel_residual"] = max_rel;
  return (accepted > 0 && failures == 0) ? 0 : 1;
}

int cmd_sweep(const std::string& kind, int trials, std::uint64_t seed, double a,
              double b, double lambda1, double lambda2, bool timing,
              const std::string& report_path) {
  const auto start = std::chrono::steady_clock::now();
  ojson report;
  report["version"] = 1;
  report["command"] = "sweep";
  report["kind"] = kind;
  report["seed"] = seed;

  int code = 0;
  if (kind == "rank2") {
    code = sweep_rank2(report, trials, seed);
  } else if (kind == "region_p") {
    code = sweep_region_p(report, a, b, lambda1, lambda2, trials, seed);
  } else if (kind == "threefold_det") {
    code = sweep_threefold_det(report, trials, seed);
  } else {
    report["error"] = "unknown sweep kind \"" + kind + "\"";
    return finish(report, 2, timing, report_path, start);
  }
  return finish(report, code, timing, report_path, start);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vbMA positivity verification toolkit"};
  app.require_subcommand(1);

  int n = 2;
  int m = 0;
  double ce_tol = 1e-12;
  bool ce_timing = false;
  std::string ce_report;
  CLI::App* verify = app.add_subcommand(
      "verify-counterexample",
      "Rebuild the vortex surface counterexample and verify its claims");
  verify->add_option("--n", n, "sub-bundle dimension (>= 2)")->required();
  verify->add_option("--m", m, "flat factor dimension for the lift");
  verify->add_option("--tol", ce_tol, "absolute tolerance for the scalars");
  verify->add_flag("--timing", ce_timing, "include wall time in the report");
  verify->add_option("--report", ce_report, "write the JSON report here");

  std::string input;
  double tol = 1e-9;
  bool check_timing = false;
  std::string check_report;
  CLI::App* check =
      app.add_subcommand("check", "Verify the claims of an instance file");
  check->add_option("--input", input, "instance file path")->required();
  check->add_option("--tol", tol, "relative tolerance");
  check->add_flag("--timing", check_timing, "include wall time in the report");
  check->add_option("--report", check_report, "write the JSON report here");

  std::string kind;
  int trials = 1000;
  std::uint64_t seed = 1;
  double a = 1.0;
  double b = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 2.0;
  bool sweep_timing = false;
  std::string sweep_report;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Run a randomized verification sweep");
  sweep->add_option("--kind", kind, "rank2 | region_p | threefold_det")
      ->required();
  sweep->add_option("--trials", trials, "number of trials (>= 1)");
  sweep->add_option("--seed", seed, "master seed");
  sweep->add_option("--a", a, "region_p parameter a");
  sweep->add_option("--b", b, "region_p parameter b");
  sweep->add_option("--lambda1", lambda1, "region_p parameter lambda1");
  sweep->add_option("--lambda2", lambda2, "region_p parameter lambda2");
  sweep->add_flag("--timing", sweep_timing, "include wall time in the report");
  sweep->add_option("--report", sweep_report, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) {
      return cmd_verify_counterexample(n, m, ce_tol, ce_timing, ce_report);
    }
    if (check->parsed()) {
      return cmd_check(input, tol, check_timing, check_report);
    }
    if (sweep->parsed()) {
      if (trials < 1) {
        std::cerr << "sweep: trials must be >= 1\n";
        return 2;
      }
      return cmd_sweep(kind, trials, seed, a, b, lambda1, lambda2,
                       sweep_timing, sweep_report);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
