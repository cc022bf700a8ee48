#include "bihcert/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace bihcert {

namespace {

using kv::Document;
using kv::ParseError;
using kv::Value;

[[noreturn]] void shape_fail(const std::string& field,
                             const std::string& message) {
  throw ParseError(0, field, message);
}

double need_number(const Document::Section& s, const std::string& key) {
  for (const auto& [k, v] : s.entries) {
    if (k == key) {
      if (v.type != Value::Type::Integer && v.type != Value::Type::Float) {
        shape_fail(s.name + "." + key, "expected a number");
      }
      return v.as_number();
    }
  }
  shape_fail(s.name + "." + key, "missing required key");
}

double number_or(const Document::Section& s, const std::string& key,
                 double fallback) {
  for (const auto& [k, v] : s.entries) {
    if (k == key) {
      if (v.type != Value::Type::Integer && v.type != Value::Type::Float) {
        shape_fail(s.name + "." + key, "expected a number");
      }
      return v.as_number();
    }
  }
  return fallback;
}

long long int_or(const Document::Section& s, const std::string& key,
                 long long fallback) {
  for (const auto& [k, v] : s.entries) {
    if (k == key) {
      if (v.type != Value::Type::Integer) {
        shape_fail(s.name + "." + key, "expected an integer");
      }
      return v.integer;
    }
  }
  return fallback;
}

std::string string_or(const Document::Section& s, const std::string& key,
                      const std::string& fallback) {
  for (const auto& [k, v] : s.entries) {
    if (k == key) {
      if (v.type != Value::Type::String) {
        shape_fail(s.name + "." + key, "expected a string");
      }
      return v.str;
    }
  }
  return fallback;
}

void check_keys(const Document::Section& s,
                const std::set<std::string>& allowed) {
  for (const auto& [k, v] : s.entries) {
    if (allowed.find(k) == allowed.end()) {
      shape_fail(s.name + "." + k, "unknown key");
    }
  }
}

}  // namespace

FactorFamily FamilySpec::to_family() const {
  if (kind == "constant") return FactorFamily::constant(f0);
  if (kind == "powerlaw") return FactorFamily::power_law(A, B, t);
  if (kind == "reciprocal") return FactorFamily::reciprocal(A, B);
  throw std::domain_error("unknown family kind '" + kind +
                          "' (expected constant, powerlaw, or reciprocal)");
}

Scenario parse_scenario(const std::string& text) {
  const Document doc = kv::parse(text);
  Scenario sc;

  for (const auto& [k, v] : doc.root) {
    if (k == "command") {
      if (v.type != Value::Type::String) shape_fail("command", "expected a string");
      sc.command = v.str;
    } else {
      shape_fail(k, "unknown top-level key");
    }
  }

  static const std::set<std::string> known_sections = {
      "family", "hyperplane", "sampling", "ode", "product", "output"};
  for (const Document::Section& s : doc.sections) {
    if (known_sections.find(s.name) == known_sections.end()) {
      shape_fail(s.name, "unknown section");
    }
  }

  if (const Document::Section* s = doc.find_section("family")) {
    check_keys(*s, {"kind", "f0", "A", "B", "t", "dim"});
    FamilySpec fam;
    fam.kind = string_or(*s, "kind", "");
    if (fam.kind.empty()) shape_fail("family.kind", "missing required key");
    fam.f0 = number_or(*s, "f0", 1.0);
    fam.A = number_or(*s, "A", 1.0);
    fam.B = number_or(*s, "B", 1.0);
    fam.t = number_or(*s, "t", 0.0);
    fam.dim = static_cast<int>(int_or(*s, "dim", 5));
    sc.family = fam;
  }

  if (const Document::Section* s = doc.find_section("hyperplane")) {
    check_keys(*s, {"a", "c"});
    const Value* a = nullptr;
    for (const auto& [k, v] : s->entries) {
      if (k == "a") a = &v;
    }
    if (!a || a->type != Value::Type::Array) {
      shape_fail("hyperplane.a", "expected an array of coefficients");
    }
    Eigen::VectorXd coeffs(static_cast<Eigen::Index>(a->array.size()));
    for (std::size_t i = 0; i < a->array.size(); ++i) {
      coeffs[static_cast<Eigen::Index>(i)] = a->array[i];
    }
    sc.hyperplane_a = coeffs;
    sc.hyperplane_c = number_or(*s, "c", 0.0);
  }

  if (const Document::Section* s = doc.find_section("sampling")) {
    check_keys(*s, {"z_count", "plane_count", "seed", "tolerance"});
    sc.sampling.z_count = static_cast<int>(int_or(*s, "z_count", 64));
    sc.sampling.plane_count = static_cast<int>(int_or(*s, "plane_count", 1024));
    sc.sampling.seed = static_cast<std::uint64_t>(int_or(*s, "seed", 42));
    sc.sampling.tolerance = number_or(*s, "tolerance", 1e-9);
  }

  if (const Document::Section* s = doc.find_section("ode")) {
    check_keys(*s, {"sum_a_sq", "z0", "z1", "f", "f1", "f2", "samples"});
    OdeSpec ode;
    ode.sum_a_sq = need_number(*s, "sum_a_sq");
    ode.z0 = need_number(*s, "z0");
    ode.z1 = need_number(*s, "z1");
    ode.f = need_number(*s, "f");
    ode.f1 = number_or(*s, "f1", 0.0);
    ode.f2 = number_or(*s, "f2", 0.0);
    ode.samples = static_cast<int>(int_or(*s, "samples", 65));
    sc.ode = ode;
  }

  if (const Document::Section* s = doc.find_section("product")) {
    check_keys(*s, {"n", "k"});
    ProductSpec p;
    p.n = static_cast<int>(int_or(*s, "n", 0));
    p.k = static_cast<int>(int_or(*s, "k", 1));
    sc.product = p;
  }

  if (const Document::Section* s = doc.find_section("output")) {
    check_keys(*s, {"path"});
    sc.output_path = string_or(*s, "path", "");
  }

  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(0, path, "cannot open scenario file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

kv::Document scenario_echo(const Scenario& sc) {
  kv::Document doc;
  if (!sc.command.empty()) {
    doc.set("scenario", "command", Value::of_string(sc.command));
  }
  if (sc.family) {
    doc.set("scenario.family", "kind", Value::of_string(sc.family->kind));
    if (sc.family->kind == "constant") {
      doc.set("scenario.family", "f0", Value::of_float(sc.family->f0));
    } else {
      doc.set("scenario.family", "A", Value::of_float(sc.family->A));
      doc.set("scenario.family", "B", Value::of_float(sc.family->B));
    }
    if (sc.family->kind == "powerlaw") {
      doc.set("scenario.family", "t", Value::of_float(sc.family->t));
    }
    doc.set("scenario.family", "dim", Value::of_int(sc.family->dim));
  }
  if (sc.hyperplane_a) {
    std::vector<double> a(sc.hyperplane_a->data(),
                          sc.hyperplane_a->data() + sc.hyperplane_a->size());
    doc.set("scenario.hyperplane", "a", Value::of_array(std::move(a)));
    doc.set("scenario.hyperplane", "c", Value::of_float(sc.hyperplane_c));
  }
  doc.set("scenario.sampling", "z_count", Value::of_int(sc.sampling.z_count));
  doc.set("scenario.sampling", "plane_count",
          Value::of_int(sc.sampling.plane_count));
  doc.set("scenario.sampling", "seed",
          Value::of_int(static_cast<long long>(sc.sampling.seed)));
  doc.set("scenario.sampling", "tolerance",
          Value::of_float(sc.sampling.tolerance));
  if (sc.ode) {
    doc.set("scenario.ode", "sum_a_sq", Value::of_float(sc.ode->sum_a_sq));
    doc.set("scenario.ode", "z0", Value::of_float(sc.ode->z0));
    doc.set("scenario.ode", "z1", Value::of_float(sc.ode->z1));
    doc.set("scenario.ode", "f", Value::of_float(sc.ode->f));
    doc.set("scenario.ode", "f1", Value::of_float(sc.ode->f1));
    doc.set("scenario.ode", "f2", Value::of_float(sc.ode->f2));
    doc.set("scenario.ode", "samples", Value::of_int(sc.ode->samples));
  }
  if (sc.product) {
    doc.set("scenario.product", "n", Value::of_int(sc.product->n));
    doc.set("scenario.product", "k", Value::of_int(sc.product->k));
  }
  return doc;
}

}  // namespace bihcert
