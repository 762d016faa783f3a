// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include "app/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "pcqed/coupling.hpp"
#include "pcqed/errors.hpp"
#include "pcqed/units.hpp"

namespace pcqed::app {

namespace {

using nlohmann::json;

// One JSON object plus its dotted path; every accessor records the keys it consumed so that
// leftovers can be reported as unknown.
class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(where(), "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) throw SchemaError(where(key), "required number is missing");
    if (!it->is_number()) throw SchemaError(where(key), "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw SchemaError(where(key), "must be finite");
    return v;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (seen_.insert(key), fallback);
  }

  double positive(const std::string& key) {
    const double v = number(key);
    if (!(v > 0.0)) throw SchemaError(where(key), "must be > 0");
    return v;
  }

  double non_negative(const std::string& key, double fallback) {
    const double v = number(key, fallback);
    if (v < 0.0) throw SchemaError(where(key), "must be >= 0");
    return v;
  }

  int integer(const std::string& key, int fallback, int lo, int hi) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return fallback;
    if (!it->is_number_integer()) throw SchemaError(where(key), "expected an integer");
    const auto v = it->get<long long>();
    if (v < lo || v > hi) {
      throw SchemaError(where(key), "must lie in [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]");
    }
    return static_cast<int>(v);
  }

  std::string string(const std::string& key, const std::set<std::string>& allowed) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) throw SchemaError(where(key), "required string is missing");
    if (!it->is_string()) throw SchemaError(where(key), "expected a string");
    const auto v = it->get<std::string>();
    if (!allowed.empty() && !allowed.count(v)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw SchemaError(where(key), "'" + v + "' is not one of {" + list + "}");
    }
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return fallback;
    if (!it->is_boolean()) throw SchemaError(where(key), "expected true or false");
    return it->get<bool>();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  Block child(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) throw SchemaError(where(key), "required block is missing");
    return Block(j_.at(key), where(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw SchemaError(where(key), "unknown key");
    }
  }

  std::string where(const std::string& key = {}) const {
    if (key.empty()) return path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Task parse_task(const std::string& s) {
  if (s == "spectra") return Task::spectra;
  if (s == "fit") return Task::fit;
  if (s == "dressed") return Task::dressed;
  if (s == "dynamics") return Task::dynamics;
  if (s == "rates") return Task::rates;
  if (s == "fano") return Task::fano;
  if (s == "lindblad") return Task::lindblad;
  return Task::figure_suite;
}

MasterKind parse_kind(const std::string& s) {
  if (s == "fano_radiative") return MasterKind::fano_radiative;
  if (s == "fano_full") return MasterKind::fano_full;
  return MasterKind::standard;
}

void parse_material(Block b, MaterialSpec& m, const std::filesystem::path& base) {
  m.model = b.string("model", {"drude", "tabulated"});
  if (m.model == "drude") {
    m.drude.eps_inf = b.positive("eps_inf");
    m.drude.hw_p = b.positive("hw_p");
    m.drude.hgamma_p = b.non_negative("hgamma_p", 0.0);
  } else {
    const auto& f = b.raw("file");
    if (!f.is_string()) throw SchemaError(b.where("file"), "expected a path string");
    m.table = base / f.get<std::string>();
    if (!std::filesystem::exists(m.table)) throw SchemaError(b.where("file"), "file not found");
  }
  b.finish();
}

void parse_geometry(Block b, Geometry& g) {
  g.radius = b.positive("R");
  g.eps_b = b.positive("eps_b");
  const double h = b.positive("h");
  g.distance = g.radius + h;
  b.finish();
}

void parse_emitter(Block b, EmitterSpec& e) {
  const bool has_hw = b.has("hw0"), has_lambda = b.has("lambda");
  if (has_hw == has_lambda) throw SchemaError(b.where("hw0"), "give exactly one of hw0 or lambda");
  e.hw0 = has_hw ? b.positive("hw0") : units::wavelength_to_energy(b.positive("lambda"));
  const bool lifetime = b.has("tau0") || b.has("eta");
  const bool dipole = b.has("d_eg") || b.has("gamma0_nr");
  if (lifetime == dipole) {
    throw SchemaError(b.where("tau0"), "give either {tau0, eta} or {d_eg, gamma0_nr}");
  }
  if (lifetime) {
    e.tau0_ns = b.positive("tau0");
    e.eta = b.positive("eta");
    if (*e.eta > 1.0) throw SchemaError(b.where("eta"), "must lie in (0, 1]");
  } else {
    e.dipole = b.positive("d_eg");
    e.hgamma0_nr = b.non_negative("gamma0_nr", 0.0);
  }
  b.finish();
}

void parse_grid(Block b, GridSpec& g) {
  g.min = b.positive("min");
  g.max = b.positive("max");
  if (!(g.max > g.min)) throw SchemaError(b.where("max"), "must exceed min");
  g.points = b.integer("points", g.points, 3, 2000000);
  b.finish();
}

void parse_time(Block b, TimeSpec& t) {
  const bool fs = b.has("max_fs"), ns = b.has("max_ns");
  if (fs && ns) throw SchemaError(b.where("max_fs"), "give at most one of max_fs or max_ns");
  if (fs) t.max = units::fs_to_internal(b.positive("max_fs"));
  if (ns) t.max = units::ns_to_internal(b.positive("max_ns"));
  t.points = b.integer("points", t.points, 2, 1000000);
  b.finish();
}

void parse_run(Block b, Scenario& s, const std::filesystem::path& base) {
  s.task = parse_task(b.string("task", {"spectra", "fit", "dressed", "dynamics", "rates", "fano",
                                        "lindblad", "figure-suite"}));
  s.modes = b.integer("N", s.modes, 1, 200);
  if (b.has("grid")) parse_grid(b.child("grid"), s.grid);
  if (b.has("time")) parse_time(b.child("time"), s.time);
  if (b.has("output_dir")) {
    const auto& o = b.raw("output_dir");
    if (!o.is_string()) throw SchemaError(b.where("output_dir"), "expected a path string");
    s.output_dir = base / o.get<std::string>();
  }
  s.threads = b.integer("threads", 0, 0, 1024);
  if (b.has("lindblad")) {
    auto l = b.child("lindblad");
    s.lindblad_kind = parse_kind(l.string("kind", {"standard", "fano_radiative", "fano_full"}));
    l.finish();
  }
  if (b.has("fano")) {
    auto f = b.child("fano");
    if (f.has("orders")) {
      const auto& o = f.raw("orders");
      if (!o.is_array() || o.empty()) {
        throw SchemaError(f.where("orders"), "expected a non-empty integer array");
      }
      s.fano.orders.clear();
      for (const auto& v : o) {
        if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 200) {
          throw SchemaError(f.where("orders"), "orders must be integers in [1, 200]");
        }
        s.fano.orders.push_back(v.get<int>());
      }
    }
    s.fano.lossy = f.boolean("lossy", true);
    f.finish();
  }
  if (b.has("figure_suite")) {
    auto f = b.child("figure_suite");
    s.figures.fig2_radius = f.has("fig2_R") ? f.positive("fig2_R") : s.figures.fig2_radius;
    f.finish();
  }
  b.finish();
}

}  // namespace

const char* to_string(Task task) {
  switch (task) {
    case Task::spectra: return "spectra";
    case Task::fit: return "fit";
    case Task::dressed: return "dressed";
    case Task::dynamics: return "dynamics";
    case Task::rates: return "rates";
    case Task::fano: return "fano";
    case Task::lindblad: return "lindblad";
    case Task::figure_suite: return "figure-suite";
  }
  return "unknown";
}

Material Scenario::make_material() const {
  if (material.model == "tabulated") return read_permittivity_table(material.table);
  return Material::drude(material.drude.eps_inf, material.drude.hw_p, material.drude.hgamma_p);
}

Emitter Scenario::make_emitter() const {
  if (emitter.tau0_ns) {
    return Emitter::from_lifetime(emitter.hw0, *emitter.tau0_ns, *emitter.eta, geometry);
  }
  return Emitter::from_dipole(emitter.hw0, *emitter.dipole, emitter.hgamma0_nr, geometry);
}

std::vector<double> Scenario::grid_points() const {
  return linspace(grid.min, grid.max, static_cast<std::size_t>(grid.points));
}

Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  Scenario s;
  Block root(doc, "");
  parse_material(root.child("material"), s.material, base_dir);
  parse_geometry(root.child("geometry"), s.geometry);
  parse_emitter(root.child("emitter"), s.emitter);
  parse_run(root.child("run"), s, base_dir);
  root.finish();
  s.source = doc;
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("<config>", "cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("<config>", std::string("not valid JSON: ") + e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

}  // namespace pcqed::app
