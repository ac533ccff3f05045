#include "aubry/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace aubry {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at " + where + ": " + what);
}

std::pair<int, int> line_col_of_offset(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

template <class T>
T get_field(const json& j, const char* block, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& ex) {
    fail(std::string(block) + "." + name, ex.what());
  }
}

void reject_unknown(const json& j, const char* block,
                    std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) fail(std::string(block) + "." + it.key(), "unknown field");
  }
}

}  // namespace

Config Config::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    auto [line, col] = line_col_of_offset(text, ex.byte > 0 ? ex.byte - 1 : 0);
    throw ConfigError("config parse error at line " + std::to_string(line) +
                      ", column " + std::to_string(col) + ": " + ex.what());
  }
  if (!j.is_object()) throw ConfigError("config error: top level must be an object");
  reject_unknown(j, "config",
                 {"schema_version", "grid", "lagrangian", "sweep", "tolerances",
                  "integrate"});

  Config cfg;
  cfg.schema_version = get_field(j, "config", "schema_version", 1);
  if (cfg.schema_version != 1)
    fail("schema_version", "unsupported version " + std::to_string(cfg.schema_version));

  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, "grid", {"n", "h_time", "speed_cap", "windings"});
    cfg.grid.n = get_field(g, "grid", "n", cfg.grid.n);
    cfg.grid.h_time = get_field(g, "grid", "h_time", cfg.grid.h_time);
    cfg.grid.speed_cap = get_field(g, "grid", "speed_cap", cfg.grid.speed_cap);
    cfg.grid.windings = get_field(g, "grid", "windings", cfg.grid.windings);
  }
  try {
    cfg.grid.validate();
  } catch (const std::exception& ex) {
    fail("grid", ex.what());
  }

  if (j.contains("lagrangian")) {
    const json& l = j["lagrangian"];
    if (l.contains("oneform")) {
      reject_unknown(l, "lagrangian", {"oneform"});
      try {
        cfg.oneform = FourierOneForm::from_json(l["oneform"].dump());
        cfg.example.reset();
      } catch (const std::exception& ex) {
        fail("lagrangian.oneform", ex.what());
      }
    } else {
      reject_unknown(l, "lagrangian",
                     {"f_kind", "f_min", "f_top", "cantor_stage", "cantor_span",
                      "cantor_center"});
      ExampleSpec spec;
      spec.grid = cfg.grid;
      try {
        spec.f_kind = fkind_from_string(
            get_field<std::string>(l, "lagrangian", "f_kind", "two_well"));
      } catch (const std::exception& ex) {
        fail("lagrangian.f_kind", ex.what());
      }
      spec.f_min = get_field(l, "lagrangian", "f_min", spec.f_min);
      spec.f_top = get_field(l, "lagrangian", "f_top", spec.f_top);
      spec.cantor_stage = get_field(l, "lagrangian", "cantor_stage", spec.cantor_stage);
      spec.cantor_span = get_field(l, "lagrangian", "cantor_span", spec.cantor_span);
      spec.cantor_center =
          get_field(l, "lagrangian", "cantor_center", spec.cantor_center);
      try {
        spec.validate();
      } catch (const std::exception& ex) {
        fail("lagrangian", ex.what());
      }
      cfg.example = spec;
    }
  } else {
    ExampleSpec spec;
    spec.grid = cfg.grid;
    cfg.example = spec;
  }
  if (cfg.example) cfg.example->grid = cfg.grid;

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    reject_unknown(s, "sweep",
                   {"seed", "num_perturbations", "amplitude", "fourier_degree",
                    "classes"});
    cfg.sweep.seed = get_field<std::uint64_t>(s, "sweep", "seed", cfg.sweep.seed);
    cfg.sweep.num_perturbations =
        get_field(s, "sweep", "num_perturbations", cfg.sweep.num_perturbations);
    cfg.sweep.amplitude = get_field(s, "sweep", "amplitude", cfg.sweep.amplitude);
    cfg.sweep.fourier_degree =
        get_field(s, "sweep", "fourier_degree", cfg.sweep.fourier_degree);
    if (s.contains("classes")) {
      cfg.sweep.classes.clear();
      for (const auto& e : s["classes"]) {
        if (!e.is_array() || e.size() != 2) fail("sweep.classes", "entries must be [c1,c2]");
        cfg.sweep.classes.push_back({e[0].get<double>(), e[1].get<double>()});
      }
    }
    try {
      cfg.sweep.validate();
    } catch (const std::exception& ex) {
      fail("sweep", ex.what());
    }
  }

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    reject_unknown(t, "tolerances",
                   {"tol_zero_rel", "bisect_tol", "eps_lift_rel", "eps_aubry",
                    "eps_class", "weight_floor", "phi_export_threshold"});
    cfg.tol.tol_zero_rel = get_field(t, "tolerances", "tol_zero_rel", cfg.tol.tol_zero_rel);
    cfg.tol.bisect_tol = get_field(t, "tolerances", "bisect_tol", cfg.tol.bisect_tol);
    cfg.tol.eps_lift_rel = get_field(t, "tolerances", "eps_lift_rel", cfg.tol.eps_lift_rel);
    cfg.tol.eps_aubry = get_field(t, "tolerances", "eps_aubry", cfg.tol.eps_aubry);
    cfg.tol.eps_class = get_field(t, "tolerances", "eps_class", cfg.tol.eps_class);
    cfg.tol.weight_floor = get_field(t, "tolerances", "weight_floor", cfg.tol.weight_floor);
    cfg.tol.phi_export_threshold =
        get_field(t, "tolerances", "phi_export_threshold", cfg.tol.phi_export_threshold);
    for (double v : {cfg.tol.tol_zero_rel, cfg.tol.bisect_tol, cfg.tol.eps_lift_rel})
      if (!(v > 0.0)) fail("tolerances", "tol_zero_rel, bisect_tol, eps_lift_rel must be positive");
  }

  if (j.contains("integrate")) {
    const json& it = j["integrate"];
    reject_unknown(it, "integrate", {"x", "y", "v1", "v2", "T", "h"});
    cfg.integrate.x = get_field(it, "integrate", "x", cfg.integrate.x);
    cfg.integrate.y = get_field(it, "integrate", "y", cfg.integrate.y);
    cfg.integrate.v1 = get_field(it, "integrate", "v1", cfg.integrate.v1);
    cfg.integrate.v2 = get_field(it, "integrate", "v2", cfg.integrate.v2);
    cfg.integrate.T = get_field(it, "integrate", "T", cfg.integrate.T);
    cfg.integrate.h = get_field(it, "integrate", "h", cfg.integrate.h);
    if (!(cfg.integrate.h > 0.0) || !(cfg.integrate.T >= cfg.integrate.h))
      fail("integrate", "need 0 < h <= T");
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

MagneticLagrangian Config::lagrangian() const {
  if (oneform) return MagneticLagrangian(*oneform);
  if (example) return build_example(*example);
  throw ConfigError("config has no lagrangian");
}

std::string Config::echo_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["grid"] = {{"n", grid.n},
               {"h_time", grid.h_time},
               {"speed_cap", grid.speed_cap},
               {"windings", grid.windings}};
  if (oneform) {
    j["lagrangian"] = {{"oneform", json::parse(oneform->to_json())}};
  } else if (example) {
    json lag;
    lag["f_kind"] = to_string(example->f_kind);
    lag["f_min"] = example->f_min;
    lag["f_top"] = example->f_top;
    if (example->f_kind == FKind::cantor_stage) {
      lag["cantor_stage"] = example->cantor_stage;
      lag["cantor_span"] = example->cantor_span;
      lag["cantor_center"] = example->cantor_center;
    }
    j["lagrangian"] = lag;
  }
  json sw;
  sw["seed"] = sweep.seed;
  sw["num_perturbations"] = sweep.num_perturbations;
  sw["amplitude"] = sweep.amplitude;
  sw["fourier_degree"] = sweep.fourier_degree;
  json cls = json::array();
  for (const auto& c : sweep.classes) cls.push_back({c.c1, c.c2});
  sw["classes"] = cls;
  j["sweep"] = sw;
  j["tolerances"] = {{"tol_zero_rel", tol.tol_zero_rel},
                     {"bisect_tol", tol.bisect_tol},
                     {"eps_lift_rel", tol.eps_lift_rel},
                     {"eps_aubry", tol.eps_aubry},
                     {"eps_class", tol.eps_class},
                     {"weight_floor", tol.weight_floor},
                     {"phi_export_threshold", tol.phi_export_threshold}};
  j["integrate"] = {{"x", integrate.x}, {"y", integrate.y}, {"v1", integrate.v1},
                    {"v2", integrate.v2}, {"T", integrate.T}, {"h", integrate.h}};
  return j.dump(2);
}

}  // namespace aubry
