#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bihcert/jets.hpp"
#include "bihcert/kvfile.hpp"

namespace bihcert {

/// Declarative description of a factor family, as read from a scenario.
/// to_family() performs the domain validation (positivity etc.) and throws
/// std::invalid_argument / std::domain_error accordingly.
struct FamilySpec {
  std::string kind;  ///< "constant" | "powerlaw" | "reciprocal"
  double f0 = 1.0;
  double A = 1.0;
  double B = 1.0;
  double t = 0.0;
  int dim = 5;  ///< ambient dimension for scans without a hyperplane

  FactorFamily to_family() const;
};

struct SamplingSpec {
  int z_count = 64;
  int plane_count = 1024;
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
};

struct OdeSpec {
  double sum_a_sq = 0.0;
  double z0 = 0.0;
  double z1 = 0.0;
  double f = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  int samples = 65;
};

struct ProductSpec {
  int n = 0;
  int k = 1;
};

/// A parsed scenario file. Parsing enforces shape (known keys, right types);
/// numeric domain rules are enforced by the command pipelines so that they
/// map to the domain-error exit status rather than the parse one.
struct Scenario {
  std::string command;  ///< optional in the file; must match the subcommand
  std::optional<FamilySpec> family;
  std::optional<Eigen::VectorXd> hyperplane_a;
  double hyperplane_c = 0.0;
  SamplingSpec sampling;
  std::optional<OdeSpec> ode;
  std::optional<ProductSpec> product;
  std::string output_path;
};

/// Reads and shape-validates a scenario file. Throws kv::ParseError on
/// syntax errors, unknown sections/keys, or wrongly typed values.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text);

/// Normalized echo of the scenario for embedding into reports.
kv::Document scenario_echo(const Scenario& sc);

}  // namespace bihcert
