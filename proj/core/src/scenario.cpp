#include "lieswarm/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "lieswarm/errors.hpp"

namespace lieswarm {

namespace {

using nlohmann::json;

struct PresetEntry {
  const char* name;
  const char* json;
};

constexpr PresetEntry kBundled[] = {
#include "bundled_presets.inc"
};

void check_keys(const json& obj, std::string_view where, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ScenarioError(fmt::format("'{}' must be an object", where));
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ScenarioError(fmt::format("unknown key '{}.{}'", where, key));
  }
}

double number(const json& obj, const char* key, std::string_view where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError(fmt::format("missing '{}.{}'", where, key));
  if (!it->is_number()) throw ScenarioError(fmt::format("'{}.{}' must be a number", where, key));
  return it->get<double>();
}

double number_or(const json& obj, const char* key, double fallback, std::string_view where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

Vec3 vec3(const json& v, std::string_view where) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    throw ScenarioError(fmt::format("'{}' must be an array of three numbers", where));
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::string string_or(const json& obj, const char* key, std::string fallback,
                      std::string_view where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw ScenarioError(fmt::format("'{}.{}' must be a string", where, key));
  return it->get<std::string>();
}

void parse_embedding(const json& j, Scenario& sc) {
  check_keys(j, "embedding", {"r_d", "omega_zd", "center"});
  auto& e = sc.control.embedding;
  e.r_d = number(j, "r_d", "embedding");
  e.omega_zd = number(j, "omega_zd", "embedding");
  e.center = j.contains("center") ? vec3(j["center"], "embedding.center") : Vec3{};
}

void parse_deformation(const json& j, Scenario& sc) {
  check_keys(j, "deformation", {"preset", "omega_x", "omega_y", "s"});
  try {
    if (j.contains("preset")) {
      if (j.contains("omega_x") || j.contains("omega_y")) {
        throw ScenarioError("deformation: give either 'preset' or 'omega_x'/'omega_y'");
      }
      const std::string name = string_or(j, "preset", "", "deformation");
      sc.control.embedding.deformation = preset(name).deformation;
      sc.deformation_label = name;
      if (j.contains("s")) sc.control.embedding.deformation.s = number(j, "s", "deformation");
    } else {
      const std::string wx = string_or(j, "omega_x", "0", "deformation");
      const std::string wy = string_or(j, "omega_y", "0", "deformation");
      sc.control.embedding.deformation =
          DeformationSpec::from_text(wx, wy, number_or(j, "s", 0.0, "deformation"));
      sc.deformation_label = "inline";
    }
    validate_deformation(sc.control.embedding.deformation);
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError(fmt::format("deformation: {}", e.what()));
  }
}

void parse_spawn(const json& j, SpawnSpec& sp) {
  check_keys(j, "agents.spawn",
             {"kind", "max_offset", "phases", "jitter", "min", "max", "positions", "velocity"});
  const std::string kind = string_or(j, "kind", "near_curve", "agents.spawn");
  if (kind == "near_curve") {
    sp.kind = SpawnSpec::Kind::NearCurve;
    sp.max_offset = number(j, "max_offset", "agents.spawn");
    if (sp.max_offset < 0.0) throw ScenarioError("agents.spawn.max_offset must be >= 0");
  } else if (kind == "on_curve") {
    sp.kind = SpawnSpec::Kind::OnCurve;
  } else if (kind == "box") {
    sp.kind = SpawnSpec::Kind::Box;
    if (!j.contains("min") || !j.contains("max")) {
      throw ScenarioError("agents.spawn: box needs 'min' and 'max'");
    }
    sp.box_min = vec3(j["min"], "agents.spawn.min");
    sp.box_max = vec3(j["max"], "agents.spawn.max");
    if (sp.box_min.x > sp.box_max.x || sp.box_min.y > sp.box_max.y ||
        sp.box_min.z > sp.box_max.z) {
      throw ScenarioError("agents.spawn: box min exceeds max");
    }
  } else if (kind == "explicit") {
    sp.kind = SpawnSpec::Kind::Explicit;
    if (!j.contains("positions") || !j["positions"].is_array()) {
      throw ScenarioError("agents.spawn: explicit needs a 'positions' array");
    }
    for (std::size_t i = 0; i < j["positions"].size(); ++i) {
      sp.positions.push_back(vec3(j["positions"][i], fmt::format("agents.spawn.positions[{}]", i)));
    }
  } else {
    throw ScenarioError(fmt::format("agents.spawn: unknown kind '{}'", kind));
  }

  const std::string phases = string_or(j, "phases", "random", "agents.spawn");
  if (phases == "random") {
    sp.phases = SpawnSpec::Phases::Random;
  } else if (phases == "uniform") {
    sp.phases = SpawnSpec::Phases::Uniform;
  } else {
    throw ScenarioError(fmt::format("agents.spawn: unknown phases '{}'", phases));
  }
  sp.jitter = number_or(j, "jitter", 0.0, "agents.spawn");
  if (sp.jitter < 0.0 || sp.jitter >= 0.5) {
    throw ScenarioError("agents.spawn.jitter must be in [0, 0.5)");
  }

  const std::string vel = string_or(j, "velocity", "rest", "agents.spawn");
  if (vel == "rest") {
    sp.velocity = SpawnSpec::Velocity::Rest;
  } else if (vel == "curve") {
    sp.velocity = SpawnSpec::Velocity::Curve;
  } else {
    throw ScenarioError(fmt::format("agents.spawn: unknown velocity '{}'", vel));
  }
}

void parse_agents(const json& j, Scenario& sc) {
  check_keys(j, "agents", {"n", "spawn"});
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw ScenarioError("'agents.n' must be an integer");
  }
  sc.n_agents = j["n"].get<int>();
  if (j.contains("spawn")) parse_spawn(j["spawn"], sc.spawn);
}

void parse_gains(const json& j, Scenario& sc) {
  check_keys(j, "gains", {"k_x", "k_v", "k_phi"});
  auto& c = sc.control;
  c.position.k_x = number_or(j, "k_x", c.position.k_x, "gains");
  c.position.k_v = number_or(j, "k_v", c.position.k_v, "gains");
  c.phase.k_phi = number_or(j, "k_phi", c.phase.k_phi, "gains");
}

void parse_phase(const json& j, Scenario& sc) {
  check_keys(j, "phase", {"eps_clamp", "cap_factor", "iterations"});
  auto& c = sc.control;
  c.phase.eps_clamp = number_or(j, "eps_clamp", c.phase.eps_clamp, "phase");
  c.phase.cap_factor = number_or(j, "cap_factor", c.phase.cap_factor, "phase");
  if (j.contains("iterations")) {
    if (!j["iterations"].is_number_integer()) {
      throw ScenarioError("'phase.iterations' must be an integer");
    }
    c.phase_iterations = j["iterations"].get<int>();
  }
}

void parse_sim(const json& j, Scenario& sc) {
  check_keys(j, "sim", {"dt", "duration", "seed", "threads", "derivative", "ring_policy"});
  sc.control.dt = number_or(j, "dt", sc.control.dt, "sim");
  sc.duration = number(j, "duration", "sim");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0) {
      throw ScenarioError("'sim.seed' must be a non-negative integer");
    }
    sc.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_integer()) throw ScenarioError("'sim.threads' must be an integer");
    sc.threads = j["threads"].get<int>();
  }
  const std::string deriv = string_or(j, "derivative", "position_difference", "sim");
  if (deriv == "position_difference") {
    sc.control.derivative = DerivativeMode::PositionDifference;
  } else if (deriv == "plant_velocity") {
    sc.control.derivative = DerivativeMode::PlantVelocity;
  } else {
    throw ScenarioError(fmt::format("sim: unknown derivative '{}'", deriv));
  }
  const std::string policy = string_or(j, "ring_policy", "reassign_on_overtake", "sim");
  if (policy == "reassign_on_overtake") {
    sc.ring_policy = RingPolicy::ReassignOnOvertake;
  } else if (policy == "frozen") {
    sc.ring_policy = RingPolicy::Frozen;
  } else {
    throw ScenarioError(fmt::format("sim: unknown ring_policy '{}'", policy));
  }
}

void parse_metrics(const json& j, Scenario& sc) {
  check_keys(j, "metrics", {"band_deg", "hold_s"});
  if (j.contains("band_deg")) sc.convergence_band_deg = number(j, "band_deg", "metrics");
  sc.convergence_hold_s = number_or(j, "hold_s", sc.convergence_hold_s, "metrics");
}

void parse_events(const json& j, Scenario& sc) {
  if (!j.is_array()) throw ScenarioError("'events' must be an array");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = fmt::format("events[{}]", i);
    const json& ev = j[i];
    check_keys(ev, where, {"t", "kind", "position", "phi", "placement", "id"});
    TimedEvent out;
    out.t = number(ev, "t", where);
    const std::string kind = string_or(ev, "kind", "", where);
    if (kind == "insert") {
      InsertEvent ins;
      if (ev.contains("position")) ins.position = vec3(ev["position"], where + ".position");
      if (ev.contains("phi")) ins.phi = number(ev, "phi", where);
      const std::string placement = string_or(ev, "placement", "", where);
      if (!placement.empty() && placement != "largest_gap") {
        throw ScenarioError(fmt::format("{}: unknown placement '{}'", where, placement));
      }
      ins.largest_gap = !placement.empty();
      if (int(ins.position.has_value()) + int(ins.phi.has_value()) + int(ins.largest_gap) != 1) {
        throw ScenarioError(where +
                            ": insert needs exactly one of 'position', 'phi' or 'placement'");
      }
      out.action = ins;
    } else if (kind == "remove") {
      if (!ev.contains("id") || !ev["id"].is_number_integer()) {
        throw ScenarioError(where + ": remove needs an integer 'id'");
      }
      out.action = RemoveEvent{ev["id"].get<AgentId>()};
    } else {
      throw ScenarioError(fmt::format("{}: unknown kind '{}'", where, kind));
    }
    sc.events.push_back(out);
  }
}

}  // namespace

void Scenario::validate() const {
  control.validate();
  if (n_agents < 2) throw ScenarioError("agents.n must be >= 2");
  if (!(duration > 0.0)) throw ScenarioError("sim.duration must be > 0");
  if (!(sigma >= 0.0)) throw ScenarioError("noise.sigma must be >= 0");
  if (threads < 1) throw ScenarioError("sim.threads must be >= 1");
  if (spawn.kind == SpawnSpec::Kind::Explicit &&
      spawn.positions.size() != static_cast<std::size_t>(n_agents)) {
    throw ScenarioError(fmt::format("agents.spawn lists {} positions for {} agents",
                                    spawn.positions.size(), n_agents));
  }
  for (const auto& ev : events) {
    if (!(ev.t >= 0.0 && ev.t <= duration)) {
      throw ScenarioError(fmt::format("event at t={} lies outside [0, duration]", ev.t));
    }
  }
  if (convergence_band_deg && !(*convergence_band_deg > 0.0)) {
    throw ScenarioError("metrics.band_deg must be > 0");
  }
  if (!(convergence_hold_s >= 0.0)) throw ScenarioError("metrics.hold_s must be >= 0");
}

long Scenario::ticks() const { return std::lround(duration / control.dt); }

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(fmt::format("malformed JSON: {}", e.what()));
  }
  check_keys(doc, "scenario",
             {"name", "description", "embedding", "deformation", "agents", "gains", "phase",
              "noise", "sim", "events", "metrics"});
  for (const char* required : {"embedding", "agents", "sim"}) {
    if (!doc.contains(required)) throw ScenarioError(fmt::format("missing '{}'", required));
  }

  Scenario sc;
  sc.name = string_or(doc, "name", "", "scenario");
  sc.description = string_or(doc, "description", "", "scenario");
  try {
    parse_embedding(doc["embedding"], sc);
    if (doc.contains("deformation")) {
      parse_deformation(doc["deformation"], sc);
    } else {
      sc.deformation_label = "none";
    }
    parse_agents(doc["agents"], sc);
    if (doc.contains("gains")) parse_gains(doc["gains"], sc);
    if (doc.contains("phase")) parse_phase(doc["phase"], sc);
    if (doc.contains("noise")) {
      check_keys(doc["noise"], "noise", {"sigma"});
      sc.sigma = number_or(doc["noise"], "sigma", 0.0, "noise");
    }
    parse_sim(doc["sim"], sc);
    if (doc.contains("metrics")) parse_metrics(doc["metrics"], sc);
    if (doc.contains("events")) parse_events(doc["events"], sc);
  } catch (const json::exception& e) {
    throw ScenarioError(fmt::format("invalid value: {}", e.what()));
  }
  sc.control.phase.omega_zd = sc.control.embedding.omega_zd;
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot read scenario file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::vector<BundledScenario> bundled_scenarios() {
  std::vector<BundledScenario> out;
  for (const auto& p : kBundled) {
    const json doc = json::parse(p.json);
    out.push_back({p.name, doc.value("description", std::string{}), p.json});
  }
  return out;
}

Scenario bundled_scenario(std::string_view name) {
  for (const auto& p : kBundled) {
    if (name == p.name) return parse_scenario(p.json);
  }
  throw UnknownPreset(std::string(name));
}

}  // namespace lieswarm
