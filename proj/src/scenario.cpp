#include "popdyn/scenario.hpp"

#include <fstream>
#include <stdexcept>
#include <utility>

namespace popdyn::scenario {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + " " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw std::invalid_argument("config: unknown key '" + path + "." + item.key() + "'");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "is required");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "must be an integer");
  return v.get<int>();
}

std::uint64_t as_u64(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !v.is_number_integer()) fail(path, "must be an integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0) fail(path, "must be nonnegative");
  return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "must be a string");
  return v.get<std::string>();
}

games::GameSpec parse_game(const json& j, const std::string& path) {
  check_keys(j, path, {"variant", "threshold_schedule"});
  const std::string variant = as_string(require(j, path, "variant"), path + ".variant");
  games::GameSpec game;
  if (variant == "public_goods") {
    game = games::GameSpec::public_goods();
  } else if (variant == "mac_windows") {
    game = games::GameSpec::mac_windows();
  } else if (variant == "el_farol") {
    game = games::GameSpec::el_farol();
  } else {
    fail(path + ".variant", "must be public_goods, mac_windows or el_farol");
  }
  if (auto it = j.find("threshold_schedule"); it != j.end()) {
    if (game.variant != games::Variant::ElFarol) {
      fail(path + ".threshold_schedule", "only applies to el_farol");
    }
    if (!it->is_array()) fail(path + ".threshold_schedule", "must be an array of [t, threshold]");
    game.threshold_schedule.clear();
    for (const auto& entry : *it) {
      if (!entry.is_array() || entry.size() != 2) {
        fail(path + ".threshold_schedule", "entries must be [t, threshold] pairs");
      }
      game.threshold_schedule.push_back({as_number(entry[0], path + ".threshold_schedule"),
                                         as_number(entry[1], path + ".threshold_schedule")});
    }
  }
  games::validate(game);
  return game;
}

learners::LearnerSpec parse_learner(const json& j, const std::string& path) {
  check_keys(j, path, {"family", "alpha", "tau"});
  const std::string family = as_string(require(j, path, "family"), path + ".family");
  learners::LearnerSpec spec;
  if (family == "cross") {
    spec.family = learners::Family::Cross;
    spec.alpha = 0.01;
  } else if (family == "qboltzmann") {
    spec.family = learners::Family::QBoltzmann;
    spec.alpha = 0.05;
  } else if (family == "iga") {
    spec.family = learners::Family::IGA;
    spec.alpha = 0.05;
  } else {
    fail(path + ".family", "must be cross, qboltzmann or iga");
  }
  if (auto it = j.find("alpha"); it != j.end()) spec.alpha = as_number(*it, path + ".alpha");
  if (auto it = j.find("tau"); it != j.end()) {
    if (spec.family != learners::Family::QBoltzmann) fail(path + ".tau", "only applies to qboltzmann");
    spec.tau = as_number(*it, path + ".tau");
  }
  learners::validate(spec);
  return spec;
}

init_dist::Component parse_component(const json& j, const std::string& path) {
  const std::string type = as_string(require(j, path, "type"), path + ".type");
  if (type == "trunc_normal") {
    check_keys(j, path, {"type", "mu", "sigma", "lo", "hi"});
    return init_dist::TruncNormal{as_number(require(j, path, "mu"), path + ".mu"),
                                  as_number(require(j, path, "sigma"), path + ".sigma"),
                                  as_number(require(j, path, "lo"), path + ".lo"),
                                  as_number(require(j, path, "hi"), path + ".hi")};
  }
  if (type == "beta") {
    check_keys(j, path, {"type", "a", "b"});
    return init_dist::Beta{as_number(require(j, path, "a"), path + ".a"),
                           as_number(require(j, path, "b"), path + ".b")};
  }
  fail(path + ".type", "must be trunc_normal or beta");
}

init_dist::InitialDistribution parse_init(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "must be an object");
  const std::string type = as_string(require(j, path, "type"), path + ".type");
  init_dist::InitialDistribution dist;
  if (type == "product") {
    check_keys(j, path, {"type", "components"});
    const json& comps = require(j, path, "components");
    if (!comps.is_array() || comps.size() < 2) {
      fail(path + ".components", "must be an array of at least two components");
    }
    for (size_t i = 0; i < comps.size(); ++i) {
      dist.components.push_back(
          parse_component(comps[i], path + ".components[" + std::to_string(i) + "]"));
    }
  } else {
    dist.components.push_back(parse_component(j, path));
  }
  init_dist::validate(dist);
  return dist;
}

json component_to_json(const init_dist::Component& comp) {
  json j;
  if (const auto* tn = std::get_if<init_dist::TruncNormal>(&comp)) {
    j["type"] = "trunc_normal";
    j["mu"] = tn->mu;
    j["sigma"] = tn->sigma;
    j["lo"] = tn->lo;
    j["hi"] = tn->hi;
  } else {
    const auto& be = std::get<init_dist::Beta>(comp);
    j["type"] = "beta";
    j["a"] = be.a;
    j["b"] = be.b;
  }
  return j;
}

std::vector<int> default_grid(const learners::LearnerSpec& spec) {
  return spec.family == learners::Family::QBoltzmann ? std::vector<int>{101, 101}
                                                     : std::vector<int>{401};
}

}  // namespace

void validate(const ScenarioConfig& config) {
  games::validate(config.game);
  learners::validate(config.learner);
  init_dist::validate(config.init);
  if (config.init.dim() != config.learner.state_dim()) {
    throw std::invalid_argument("config: init dimension does not match the learner state");
  }
  if (config.n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (config.runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (config.horizon < 0) throw std::invalid_argument("config: horizon must be >= 0");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("config: tolerance must be positive");
  if (config.min_substeps < 1) throw std::invalid_argument("config: min_substeps must be >= 1");
  const size_t want_dims = config.learner.family == learners::Family::QBoltzmann ? 2 : 1;
  if (config.grid_cells.size() != want_dims) {
    throw std::invalid_argument("config: grid.cells needs " + std::to_string(want_dims) +
                                " entries for this learner");
  }
  for (int c : config.grid_cells) {
    if (c < 8) throw std::invalid_argument("config: grid cell counts must be >= 8");
  }
  for (int t : config.snapshot_times) {
    if (t < 0 || t > config.horizon) {
      throw std::invalid_argument("config: snapshot_times entry " + std::to_string(t) +
                                  " outside [0, horizon]");
    }
  }
}

ScenarioConfig config_from_json(const json& j) {
  check_keys(j, "$",
             {"schema_version", "game", "learner", "init", "n", "runs", "horizon", "seed", "grid",
              "out_dir", "snapshot_times", "tolerance", "min_substeps"});
  const int version = as_int(require(j, "$", "schema_version"), "$.schema_version");
  if (version != 1) fail("$.schema_version", "must be 1");
  ScenarioConfig config;
  config.game = parse_game(require(j, "$", "game"), "$.game");
  config.learner = parse_learner(require(j, "$", "learner"), "$.learner");
  config.init = parse_init(require(j, "$", "init"), "$.init");
  config.horizon = as_int(require(j, "$", "horizon"), "$.horizon");
  config.seed = as_u64(require(j, "$", "seed"), "$.seed");
  if (auto it = j.find("n"); it != j.end()) config.n = as_int(*it, "$.n");
  if (auto it = j.find("runs"); it != j.end()) config.runs = as_int(*it, "$.runs");
  if (auto it = j.find("out_dir"); it != j.end()) config.out_dir = as_string(*it, "$.out_dir");
  if (auto it = j.find("tolerance"); it != j.end()) {
    config.tolerance = as_number(*it, "$.tolerance");
  }
  if (auto it = j.find("min_substeps"); it != j.end()) {
    config.min_substeps = as_int(*it, "$.min_substeps");
  }
  if (auto it = j.find("grid"); it != j.end()) {
    check_keys(*it, "$.grid", {"cells"});
    const json& cells = require(*it, "$.grid", "cells");
    if (!cells.is_array() || cells.empty()) fail("$.grid.cells", "must be a nonempty array");
    config.grid_cells.clear();
    for (size_t i = 0; i < cells.size(); ++i) {
      config.grid_cells.push_back(as_int(cells[i], "$.grid.cells"));
    }
  } else {
    config.grid_cells = default_grid(config.learner);
  }
  if (auto it = j.find("snapshot_times"); it != j.end()) {
    if (!it->is_array()) fail("$.snapshot_times", "must be an array");
    for (size_t i = 0; i < it->size(); ++i) {
      config.snapshot_times.push_back(as_int((*it)[i], "$.snapshot_times"));
    }
  }
  validate(config);
  return config;
}

json config_to_json(const ScenarioConfig& config) {
  json j;
  j["schema_version"] = 1;
  json game;
  switch (config.game.variant) {
    case games::Variant::PublicGoods: game["variant"] = "public_goods"; break;
    case games::Variant::MacWindows: game["variant"] = "mac_windows"; break;
    case games::Variant::ElFarol: {
      game["variant"] = "el_farol";
      json sched = json::array();
      for (const auto& entry : config.game.threshold_schedule) {
        sched.push_back(json::array({entry.t_start, entry.threshold}));
      }
      game["threshold_schedule"] = sched;
      break;
    }
  }
  j["game"] = game;
  json learner;
  switch (config.learner.family) {
    case learners::Family::Cross: learner["family"] = "cross"; break;
    case learners::Family::QBoltzmann: learner["family"] = "qboltzmann"; break;
    case learners::Family::IGA: learner["family"] = "iga"; break;
  }
  learner["alpha"] = config.learner.alpha;
  if (config.learner.family == learners::Family::QBoltzmann) learner["tau"] = config.learner.tau;
  j["learner"] = learner;
  if (config.init.dim() == 1) {
    j["init"] = component_to_json(config.init.components[0]);
  } else {
    json init;
    init["type"] = "product";
    json comps = json::array();
    for (const auto& comp : config.init.components) comps.push_back(component_to_json(comp));
    init["components"] = comps;
    j["init"] = init;
  }
  j["n"] = config.n;
  j["runs"] = config.runs;
  j["horizon"] = config.horizon;
  j["seed"] = config.seed;
  j["grid"] = json{{"cells", config.grid_cells}};
  j["out_dir"] = config.out_dir;
  j["snapshot_times"] = config.snapshot_times;
  j["tolerance"] = config.tolerance;
  j["min_substeps"] = config.min_substeps;
  return j;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

namespace {

std::vector<int> quarter_snapshots(int horizon) {
  return {0, horizon / 4, horizon / 2, 3 * horizon / 4, horizon};
}

ScenarioConfig make_member(const games::GameSpec& game, learners::Family family,
                           const init_dist::InitialDistribution& init, int horizon,
                           std::uint64_t seed, const std::string& out_dir, int runs,
                           double tolerance) {
  ScenarioConfig cfg;
  cfg.game = game;
  cfg.learner.family = family;
  cfg.learner.alpha = family == learners::Family::Cross ? 0.01 : 0.05;
  cfg.learner.tau = 2.0;
  cfg.init = init;
  cfg.n = 1000;
  cfg.runs = runs;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.grid_cells = default_grid(cfg.learner);
  cfg.out_dir = out_dir;
  cfg.snapshot_times = quarter_snapshots(horizon);
  cfg.tolerance = tolerance;
  cfg.min_substeps = 1;
  validate(cfg);
  return cfg;
}

init_dist::InitialDistribution q_default_init(const games::GameSpec& game) {
  const auto [r_min, r_max] = games::reward_bounds(game);
  const init_dist::Component comp =
      init_dist::TruncNormal{0.5 * (r_min + r_max), 0.4, r_min, r_max};
  return init_dist::InitialDistribution::product({comp, comp});
}

std::vector<Preset> build_presets() {
  using learners::Family;
  const auto tn = [](double mu, double sigma) {
    return init_dist::InitialDistribution::trunc_normal(mu, sigma, 0.0, 1.0);
  };
  const games::GameSpec pg = games::GameSpec::public_goods();
  const games::GameSpec mac = games::GameSpec::mac_windows();
  const games::GameSpec ef = games::GameSpec::el_farol();
  const games::GameSpec ef_varying =
      games::GameSpec::el_farol({{0.0, 0.6}, {40.0, 0.2}, {80.0, 0.5}});

  std::vector<Preset> list;

  // Density evolution scenarios: Cross on the public goods game from four
  // initial distributions.
  const init_dist::InitialDistribution fig1_inits[] = {
      tn(0.5, 0.1), init_dist::InitialDistribution::beta(0.4, 0.4), tn(0.8, 0.3), tn(0.2, 0.3)};
  const char* fig1_names[] = {"fig1a", "fig1b", "fig1c", "fig1d"};
  for (int i = 0; i < 4; ++i) {
    Preset p;
    p.name = fig1_names[i];
    p.members.push_back({"", make_member(pg, Family::Cross, fig1_inits[i], 1000,
                                         101 + static_cast<std::uint64_t>(i),
                                         std::string("out/") + fig1_names[i], 20, 0.05)});
    list.push_back(std::move(p));
  }

  const auto family_preset = [&](const std::string& name, const games::GameSpec& game,
                                 const init_dist::InitialDistribution& init_1d,
                                 const init_dist::InitialDistribution& init_q, int hor_cross,
                                 int hor_q, int hor_iga, std::uint64_t seed, int runs,
                                 double tolerance) {
    Preset p;
    p.name = name;
    p.members.push_back({"cross", make_member(game, Family::Cross, init_1d, hor_cross, seed,
                                              "out/" + name + "/cross", runs, tolerance)});
    p.members.push_back({"qboltzmann", make_member(game, Family::QBoltzmann, init_q, hor_q, seed,
                                                   "out/" + name + "/qboltzmann", runs, tolerance)});
    p.members.push_back({"iga", make_member(game, Family::IGA, init_1d, hor_iga, seed,
                                            "out/" + name + "/iga", runs, tolerance)});
    return p;
  };

  list.push_back(family_preset("fig2a", pg, tn(0.5, 0.1), q_default_init(pg), 700, 400, 100, 201,
                               20, 0.05));
  list.push_back(family_preset("fig2b", mac, tn(0.5, 0.1), q_default_init(mac), 400, 500, 100, 202,
                               20, 0.05));
  // Start near 28% adoption; the Q initials are the asymmetric pair.
  Preset fig2c = family_preset("fig2c", mac, tn(0.28, 0.1), q_default_init(mac), 600, 800, 100,
                               203, 20, 0.05);
  fig2c.members[1].config.init = init_dist::InitialDistribution::product(
      {init_dist::TruncNormal{0.0, 0.1, 0.0, 2.0}, init_dist::TruncNormal{0.5, 0.1, 0.0, 2.0}});
  validate(fig2c.members[1].config);
  list.push_back(std::move(fig2c));
  list.push_back(family_preset("fig2d", ef, tn(0.5, 0.1), q_default_init(ef), 300, 300, 300, 204,
                               100, 0.1));
  list.push_back(family_preset("fig2e", ef_varying, tn(0.5, 0.1), q_default_init(ef_varying), 120,
                               120, 120, 205, 100, 0.07));

  Preset pg_cross;
  pg_cross.name = "public-goods-cross";
  pg_cross.members.push_back({"", make_member(pg, Family::Cross, tn(0.5, 0.1), 700, 201,
                                              "out/public-goods-cross", 20, 0.05)});
  list.push_back(std::move(pg_cross));

  Preset ef_var;
  ef_var.name = "el-farol-varying";
  ef_var.members.push_back({"", make_member(ef_varying, Family::IGA, tn(0.5, 0.1), 120, 205,
                                            "out/el-farol-varying", 100, 0.07)});
  list.push_back(std::move(ef_var));
  return list;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = build_presets();
  return list;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace popdyn::scenario
