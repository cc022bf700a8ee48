#pragma once

#include <string>

#include "bihcert/kvfile.hpp"
#include "bihcert/scenario.hpp"
#include "bihcert/solutions.hpp"

namespace bihcert {

/// Schema version embedded in every emitted report.
std::string report_schema_version();

/// Builds machine-readable reports with stable section and key ordering:
/// [meta], the scenario echo, one [stage.N.name] section per certified
/// check, then [summary]. Every numeric stage value carries the tolerance
/// it was judged against and the module/operation that produced it, so a
/// report is auditable without the binary. Byte-stable for a fixed
/// scenario and seed except for the generated_at field.
class ReportBuilder {
 public:
  ReportBuilder(const std::string& command, const Scenario& scenario,
                std::uint64_t seed, double tolerance);

  void add_stage(const StageResult& stage);

  /// Extra named section with free-form entries (trajectory dumps, scan
  /// details, classification labels).
  kv::Document& doc() { return doc_; }
  void set(const std::string& section, const std::string& key, kv::Value v);

  /// Appends [summary] and returns the final document.
  const kv::Document& finalize(int exit_status);

  bool all_passed() const { return failed_stage_.empty(); }
  const std::string& failed_stage() const { return failed_stage_; }

  std::string serialize() const { return kv::serialize(doc_); }
  void write_atomic(const std::string& path) const;

 private:
  kv::Document doc_;
  int stage_count_ = 0;
  int stages_passed_ = 0;
  std::string failed_stage_;
  bool finalized_ = false;
};

}  // namespace bihcert
