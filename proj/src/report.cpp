#include "bihcert/report.hpp"

#include <chrono>
#include <ctime>

namespace bihcert {

namespace {

using kv::Value;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string report_schema_version() { return "1.0.0"; }

ReportBuilder::ReportBuilder(const std::string& command,
                             const Scenario& scenario, std::uint64_t seed,
                             double tolerance) {
  doc_.set("meta", "schema_version", Value::of_string(report_schema_version()));
  doc_.set("meta", "generated_at", Value::of_string(iso_timestamp()));
  doc_.set("meta", "command", Value::of_string(command));
  doc_.set("meta", "seed", Value::of_int(static_cast<long long>(seed)));
  doc_.set("meta", "tolerance", Value::of_float(tolerance));

  const kv::Document echo = scenario_echo(scenario);
  for (const kv::Document::Section& s : echo.sections) {
    for (const kv::Document::Entry& e : s.entries) {
      doc_.set(s.name, e.first, e.second);
    }
  }
}

void ReportBuilder::add_stage(const StageResult& stage) {
  ++stage_count_;
  const std::string section =
      "stage." + std::to_string(stage_count_) + "." + stage.name;
  doc_.set(section, "module", Value::of_string(stage.module));
  doc_.set(section, "op", Value::of_string(stage.op));
  doc_.set(section, "value", Value::of_float(stage.value));
  doc_.set(section, "tolerance", Value::of_float(stage.tolerance));
  doc_.set(section, "pass", Value::of_bool(stage.pass));
  if (!stage.note.empty()) {
    doc_.set(section, "note", Value::of_string(stage.note));
  }
  if (stage.pass) {
    ++stages_passed_;
  } else if (failed_stage_.empty()) {
    failed_stage_ = stage.name;
  }
}

void ReportBuilder::set(const std::string& section, const std::string& key,
                        kv::Value v) {
  doc_.set(section, key, std::move(v));
}

const kv::Document& ReportBuilder::finalize(int exit_status) {
  if (!finalized_) {
    doc_.set("summary", "pass", Value::of_bool(failed_stage_.empty()));
    doc_.set("summary", "stages_total", Value::of_int(stage_count_));
    doc_.set("summary", "stages_passed", Value::of_int(stages_passed_));
    doc_.set("summary", "failed_stage", Value::of_string(failed_stage_));
    doc_.set("summary", "exit_status", Value::of_int(exit_status));
    finalized_ = true;
  }
  return doc_;
}

void ReportBuilder::write_atomic(const std::string& path) const {
  kv::write_atomic(doc_, path);
}

}  // namespace bihcert
