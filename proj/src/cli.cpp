#include "bihcert/cli.hpp"

#include <filesystem>
#include <map>
#include <iostream>

#include <CLI11.hpp>

#include "bihcert/biharmonic.hpp"
#include "bihcert/solutions.hpp"

namespace bihcert::cli {

namespace {

using kv::Value;

CertifyOptions certify_options(const Scenario& sc) {
  CertifyOptions opt;
  opt.z_count = sc.sampling.z_count;
  opt.plane_count = sc.sampling.plane_count;
  opt.seed = sc.sampling.seed;
  opt.tolerance = sc.sampling.tolerance;
  return opt;
}

const FamilySpec& require_family(const Scenario& sc) {
  if (!sc.family) {
    throw kv::ParseError(0, "family", "scenario requires a [family] section");
  }
  return *sc.family;
}

Eigen::VectorXd require_hyperplane(const Scenario& sc) {
  if (!sc.hyperplane_a) {
    throw kv::ParseError(0, "hyperplane",
                         "scenario requires a [hyperplane] section");
  }
  return *sc.hyperplane_a;
}

void require_counterexample_domain(const FamilySpec& fam, int m) {
  if (fam.kind == "powerlaw" && !(fam.t > 0.0 && fam.t < 0.5)) {
    throw std::domain_error("t must lie in (0, 1/2)");
  }
  if (m != 4) {
    throw std::domain_error("certification requires a 4-dimensional leaf "
                            "(hyperplane needs exactly 4 coefficients)");
  }
}

void add_scan_details(ReportBuilder& report, const ScanReport& scan) {
  report.set("scan", "max_k", Value::of_float(scan.max_k));
  report.set("scan", "argmax_z", Value::of_float(scan.argmax_z));
  report.set("scan", "argmax_z_index", Value::of_int(scan.argmax_z_index));
  report.set("scan", "argmax_plane_index",
             Value::of_int(scan.argmax_plane_index));
  report.set("scan", "z_count", Value::of_int(scan.z_count));
  report.set("scan", "plane_count", Value::of_int(scan.plane_count));
  report.set("scan", "seed",
             Value::of_int(static_cast<long long>(scan.seed)));
  if (scan.argmax_plane.X.size() > 0) {
    std::vector<double> px(scan.argmax_plane.X.data(),
                           scan.argmax_plane.X.data() + scan.argmax_plane.X.size());
    std::vector<double> py(scan.argmax_plane.Y.data(),
                           scan.argmax_plane.Y.data() + scan.argmax_plane.Y.size());
    report.set("scan", "argmax_plane_x", Value::of_array(std::move(px)));
    report.set("scan", "argmax_plane_y", Value::of_array(std::move(py)));
  }
}

void run_certify(const Scenario& sc, ReportBuilder& report) {
  const FamilySpec& fam = require_family(sc);
  const Eigen::VectorXd a = require_hyperplane(sc);
  require_counterexample_domain(fam, static_cast<int>(a.size()));

  ConformalMetric metric(5, fam.to_family());
  Hyperplane hp(a, sc.hyperplane_c);
  const Certificate cert =
      certify_counterexample(metric, hp, certify_options(sc));
  for (const StageResult& st : cert.stages) report.add_stage(st);
  if (cert.scan) add_scan_details(report, *cert.scan);
}

void run_classify(const Scenario& sc, ReportBuilder& report) {
  const FamilySpec& fam = require_family(sc);
  const Eigen::VectorXd a = require_hyperplane(sc);
  const int m = static_cast<int>(a.size());
  if (m < 2) {
    throw std::domain_error("classification requires m >= 2");
  }
  ConformalMetric metric(m + 1, fam.to_family());
  Hyperplane hp(a, sc.hyperplane_c);
  const std::vector<double> grid =
      default_z_grid(metric.factor, sc.sampling.z_count);
  const ResidualReport rr =
      classify(hp, metric, grid, sc.sampling.tolerance);

  StageResult st;
  st.name = "classification";
  st.module = "biharmonic";
  st.op = "classify";
  st.value = rr.max_abs_residual;
  st.tolerance = rr.tolerance;
  st.pass = rr.case_label != CaseLabel::NotBiharmonic;
  st.note = std::string("label=") + to_string(rr.case_label);
  report.add_stage(st);

  report.set("classification", "label",
             Value::of_string(to_string(rr.case_label)));
  report.set("classification", "proper", Value::of_bool(rr.proper));
  report.set("classification", "normal_residual",
             Value::of_float(rr.normal_residual));
  std::vector<double> tang(rr.tangential_residual.data(),
                           rr.tangential_residual.data() +
                               rr.tangential_residual.size());
  report.set("classification", "tangential_residual",
             Value::of_array(std::move(tang)));
  report.set("classification", "max_abs_residual",
             Value::of_float(rr.max_abs_residual));
  report.set("classification", "min_abs_H", Value::of_float(rr.min_abs_H));
  report.set("classification", "max_abs_H", Value::of_float(rr.max_abs_H));
  report.set("classification", "grid_points",
             Value::of_int(static_cast<long long>(rr.z_grid.size())));
}

void run_scan(const Scenario& sc, ReportBuilder& report) {
  const FamilySpec& fam = require_family(sc);
  if (fam.dim < 3) {
    throw std::domain_error("scan requires ambient dimension >= 3");
  }
  ConformalMetric metric(fam.dim, fam.to_family());
  const ScanReport scan = curvature_sign_scan(
      metric, sc.sampling.z_count, sc.sampling.plane_count, sc.sampling.seed);

  StageResult st;
  st.name = "negative_sectional_scan";
  st.module = "curvature";
  st.op = "curvature_sign_scan";
  st.value = scan.max_k;
  st.tolerance = 0.0;
  st.pass = scan.max_k < 0.0;
  st.note = "pass requires value < 0";
  report.add_stage(st);
  add_scan_details(report, scan);
}

void run_ode(const Scenario& sc, ReportBuilder& report, double tolerance) {
  if (!sc.ode) {
    throw kv::ParseError(0, "ode", "scenario requires an [ode] section");
  }
  const OdeSpec& spec = *sc.ode;
  OdeOptions opt;
  opt.abs_tol = std::min(1e-10, tolerance);
  opt.rel_tol = opt.abs_tol;
  opt.sample_count = spec.samples;
  const OdeTrajectory traj = ode_solve_single(
      spec.sum_a_sq, spec.z0, spec.f, spec.f1, spec.f2, spec.z1, opt);

  StageResult integ;
  integ.name = "integration";
  integ.module = "solutions";
  integ.op = "ode_solve_single";
  integ.value = traj.samples.empty() ? spec.z0 : traj.samples.back().z;
  integ.tolerance = 0.0;
  integ.pass = traj.completed;
  integ.note = "value is the last reached z; stop_reason=" + traj.stop_reason;
  report.add_stage(integ);

  StageResult res;
  res.name = "residual_bound";
  res.module = "solutions";
  res.op = "residual_single";
  res.value = traj.max_residual;
  res.tolerance = tolerance;
  res.pass = traj.max_residual <= tolerance;
  report.add_stage(res);

  report.set("integration", "steps_accepted",
             Value::of_int(traj.steps_accepted));
  report.set("integration", "steps_rejected",
             Value::of_int(traj.steps_rejected));
  report.set("integration", "max_error_estimate",
             Value::of_float(traj.max_error_estimate));
  report.set("integration", "abs_tol", Value::of_float(traj.abs_tol));
  report.set("integration", "rel_tol", Value::of_float(traj.rel_tol));
  report.set("integration", "blew_up", Value::of_bool(traj.blew_up));
  report.set("integration", "stop_reason",
             Value::of_string(traj.stop_reason));

  std::vector<double> zs, fs, f1s, f2s, rs;
  zs.reserve(traj.samples.size());
  for (const OdeSample& s : traj.samples) {
    zs.push_back(s.z);
    fs.push_back(s.f);
    f1s.push_back(s.f1);
    f2s.push_back(s.f2);
    rs.push_back(s.residual);
  }
  report.set("trajectory", "z", Value::of_array(std::move(zs)));
  report.set("trajectory", "f", Value::of_array(std::move(fs)));
  report.set("trajectory", "f1", Value::of_array(std::move(f1s)));
  report.set("trajectory", "f2", Value::of_array(std::move(f2s)));
  report.set("trajectory", "residual", Value::of_array(std::move(rs)));
}

void run_product(const Scenario& sc, ReportBuilder& report) {
  const FamilySpec& fam = require_family(sc);
  const Eigen::VectorXd a = require_hyperplane(sc);
  if (!sc.product) {
    throw kv::ParseError(0, "product",
                         "scenario requires a [product] section");
  }
  require_counterexample_domain(fam, static_cast<int>(a.size()));
  if (fam.kind != "powerlaw") {
    throw std::domain_error("product construction requires a powerlaw family");
  }

  Counterexample ce{ConformalMetric(5, fam.to_family()),
                    Hyperplane(a, sc.hyperplane_c), fam.t};
  const ProductCertificate pc =
      product_codim_k(ce, sc.product->n, sc.product->k, certify_options(sc));

  for (const StageResult& st : pc.base.stages) {
    StageResult prefixed = st;
    prefixed.name = "base_" + st.name;
    report.add_stage(prefixed);
  }
  for (const StageResult& st : pc.stages) report.add_stage(st);
  if (pc.base.scan) add_scan_details(report, *pc.base.scan);

  report.set("product", "euclidean_dim", Value::of_int(pc.euclidean_dim));
  report.set("product", "codim", Value::of_int(pc.codim));
  report.set("product", "ambient_dim",
             Value::of_int(5 + pc.euclidean_dim));
  report.set("product", "submanifold_dim",
             Value::of_int(4 + pc.euclidean_dim - (pc.codim - 1)));
}

}  // namespace

RunResult run_scenario_file(const std::string& command,
                            const std::string& scenario_path,
                            const Overrides& overrides) {
  Scenario sc = load_scenario(scenario_path);
  if (!sc.command.empty() && sc.command != command) {
    throw kv::ParseError(0, "command",
                         "scenario declares command '" + sc.command +
                             "' but '" + command + "' was invoked");
  }
  if (overrides.seed) sc.sampling.seed = *overrides.seed;
  if (overrides.tolerance) sc.sampling.tolerance = *overrides.tolerance;

  ReportBuilder report(command, sc, sc.sampling.seed, sc.sampling.tolerance);
  report.set("meta", "scenario_path", Value::of_string(scenario_path));

  if (command == "certify") {
    run_certify(sc, report);
  } else if (command == "classify") {
    run_classify(sc, report);
  } else if (command == "scan-curvature") {
    run_scan(sc, report);
  } else if (command == "ode") {
    run_ode(sc, report, sc.sampling.tolerance);
  } else if (command == "product") {
    run_product(sc, report);
  } else {
    throw kv::ParseError(0, "command", "unknown command '" + command + "'");
  }

  RunResult result;
  result.status =
      report.all_passed() ? kExitPass : kExitCertificationFailure;
  report.finalize(result.status);

  std::string out = overrides.out_path;
  if (out.empty()) out = sc.output_path;
  if (out.empty()) {
    out = std::filesystem::path(scenario_path).stem().string() + ".report";
  }
  report.write_atomic(out);
  result.report_path = out;
  result.report_text = report.serialize();
  return result;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"biharmonic hypersurface verification engine"};
  app.require_subcommand(1);

  struct SubArgs {
    std::string scenario;
    Overrides overrides;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    bool has_tolerance = false;
    bool has_seed = false;
  };
  static const char* kCommands[] = {"certify", "classify", "scan-curvature",
                                    "ode", "product"};
  static const char* kDescriptions[] = {
      "run the counterexample certification stages",
      "label a (family, hyperplane) configuration",
      "scan the sectional curvature sign",
      "integrate the m=4 leaf equation as an ODE",
      "certify the codimension-k product construction"};

  std::map<std::string, SubArgs> args;
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(kCommands[i], kDescriptions[i]);
    SubArgs& sa = args[kCommands[i]];
    sub->add_option("--scenario", sa.scenario, "scenario file")
        ->required();
    sub->add_option("--out", sa.overrides.out_path, "report output path");
    sub->add_option("--seed", sa.seed, "override the sampling seed")
        ->each([&sa](const std::string&) { sa.has_seed = true; });
    sub->add_option("--tolerance", sa.tolerance,
                    "override the certification tolerance")
        ->each([&sa](const std::string&) { sa.has_tolerance = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParseError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  SubArgs& sa = args[command];
  if (sa.has_seed) sa.overrides.seed = sa.seed;
  if (sa.has_tolerance) sa.overrides.tolerance = sa.tolerance;

  try {
    const RunResult result =
        run_scenario_file(command, sa.scenario, sa.overrides);
    if (result.status == kExitPass) {
      std::cout << "PASS (report: " << result.report_path << ")\n";
    } else {
      std::cout << "FAIL (report: " << result.report_path << ")\n";
    }
    return result.status;
  } catch (const kv::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  }
}

}  // namespace bihcert::cli
