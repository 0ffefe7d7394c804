#pragma once

#include <utility>
#include <vector>

#include "popdyn/profile.hpp"

namespace popdyn::games {

enum class Variant { PublicGoods, MacWindows, ElFarol };

// Piecewise-constant crowd threshold; the entry with the largest t_start <= t
// is active.
struct ThresholdEntry {
  double t_start;
  double threshold;
};

struct GameSpec {
  Variant variant = Variant::PublicGoods;
  std::vector<ThresholdEntry> threshold_schedule;  // ElFarol only

  static GameSpec public_goods();
  static GameSpec mac_windows();
  static GameSpec el_farol(std::vector<ThresholdEntry> schedule = {{0.0, 0.6}});
};

void validate(const GameSpec& game);

double active_threshold(const GameSpec& game, double t);

/// Immediate reward for one action against a population profile.
/// Action 0 / action 1 mean: defect / cooperate (PublicGoods), Mac / Windows
/// (MacWindows), go / stay (ElFarol).
double reward(const GameSpec& game, int action_index, const PopulationProfile& profile, double t);

// Rewards for all actions at once (the per-action information set).
std::vector<double> reward_vector(const GameSpec& game, const PopulationProfile& profile, double t);

// Empirical profile from sampled action indices.
PopulationProfile profile_from_actions(const std::vector<int>& actions, int k);

// Extremes of the reward over the whole profile simplex: {r_min, r_max}.
std::pair<double, double> reward_bounds(const GameSpec& game);

}  // namespace popdyn::games
