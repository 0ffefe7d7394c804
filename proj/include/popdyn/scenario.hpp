#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "popdyn/games.hpp"
#include "popdyn/init_dist.hpp"
#include "popdyn/learners.hpp"

namespace popdyn::scenario {

// Everything a command needs to run one game/learner pairing.
struct ScenarioConfig {
  games::GameSpec game;
  learners::LearnerSpec learner;
  init_dist::InitialDistribution init;
  int n = 1000;
  int runs = 20;
  int horizon = 100;
  std::uint64_t seed = 1;
  std::vector<int> grid_cells;  // one entry for policy grids, two for Q grids
  std::string out_dir = "out";
  std::vector<int> snapshot_times;
  double tolerance = 0.05;
  int min_substeps = 1;
};

void validate(const ScenarioConfig& config);

// Strict parsing: unknown keys fail with their field path, schema_version must
// match the supported version (1).
ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& config);
ScenarioConfig load_config(const std::string& path);

struct PresetMember {
  std::string label;  // empty for single-member presets
  ScenarioConfig config;
};

struct Preset {
  std::string name;
  std::vector<PresetMember> members;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

}  // namespace popdyn::scenario
