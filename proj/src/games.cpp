#include "popdyn/games.hpp"

#include <stdexcept>
#include <string>

namespace popdyn::games {

GameSpec GameSpec::public_goods() { return GameSpec{Variant::PublicGoods, {}}; }

GameSpec GameSpec::mac_windows() { return GameSpec{Variant::MacWindows, {}}; }

GameSpec GameSpec::el_farol(std::vector<ThresholdEntry> schedule) {
  return GameSpec{Variant::ElFarol, std::move(schedule)};
}

void validate(const GameSpec& game) {
  if (game.variant != Variant::ElFarol) {
    if (!game.threshold_schedule.empty()) {
      throw std::domain_error("game: threshold_schedule only applies to el_farol");
    }
    return;
  }
  const auto& sched = game.threshold_schedule;
  if (sched.empty()) {
    throw std::domain_error("game: el_farol needs a threshold schedule");
  }
  if (sched.front().t_start != 0.0) {
    throw std::domain_error("game: threshold schedule must start at t = 0");
  }
  for (size_t i = 0; i < sched.size(); ++i) {
    if (!(sched[i].threshold > 0.0 && sched[i].threshold < 1.0)) {
      throw std::domain_error("game: threshold " + std::to_string(sched[i].threshold) +
                              " outside (0, 1)");
    }
    if (i > 0 && !(sched[i - 1].t_start < sched[i].t_start)) {
      throw std::domain_error("game: threshold schedule not sorted by t_start");
    }
  }
}

double active_threshold(const GameSpec& game, double t) {
  if (game.variant != Variant::ElFarol) {
    throw std::domain_error("active_threshold: game has no threshold schedule");
  }
  double theta = game.threshold_schedule.front().threshold;
  for (const auto& entry : game.threshold_schedule) {
    if (entry.t_start <= t) theta = entry.threshold;
  }
  return theta;
}

double reward(const GameSpec& game, int action_index, const PopulationProfile& profile, double t) {
  validate(profile);
  if (profile.k() != 2) {
    throw std::domain_error("reward: expected a two-action profile, got k=" +
                            std::to_string(profile.k()));
  }
  if (action_index < 0 || action_index >= 2) {
    throw std::domain_error("reward: action index " + std::to_string(action_index) +
                            " out of range for k=2");
  }
  if (t < 0.0) {
    throw std::domain_error("reward: negative time " + std::to_string(t));
  }
  switch (game.variant) {
    case Variant::PublicGoods: {
      double psi = profile.fractions[1];  // cooperating fraction
      return action_index == 0 ? 1.5 * psi : 1.5 * psi - 0.5;
    }
    case Variant::MacWindows: {
      double psi = profile.fractions[0];  // Mac fraction
      return action_index == 0 ? 0.5 + 1.5 * psi : 1.5 * (1.0 - psi);
    }
    case Variant::ElFarol: {
      if (action_index == 1) return 0.0;  // staying home pays nothing
      double going = profile.fractions[0];
      return going < active_threshold(game, t) ? 1.0 : -1.0;
    }
  }
  throw std::domain_error("reward: unknown game variant");
}

std::vector<double> reward_vector(const GameSpec& game, const PopulationProfile& profile, double t) {
  return {reward(game, 0, profile, t), reward(game, 1, profile, t)};
}

PopulationProfile profile_from_actions(const std::vector<int>& actions, int k) {
  if (actions.empty()) {
    throw std::domain_error("profile_from_actions: empty action list");
  }
  if (k < 1) {
    throw std::domain_error("profile_from_actions: k must be positive");
  }
  std::vector<double> counts(static_cast<size_t>(k), 0.0);
  for (int a : actions) {
    if (a < 0 || a >= k) {
      throw std::domain_error("profile_from_actions: action index " + std::to_string(a) +
                              " out of range for k=" + std::to_string(k));
    }
    counts[static_cast<size_t>(a)] += 1.0;
  }
  const double n = static_cast<double>(actions.size());
  for (double& c : counts) c /= n;
  return PopulationProfile{std::move(counts)};
}

std::pair<double, double> reward_bounds(const GameSpec& game) {
  switch (game.variant) {
    case Variant::PublicGoods: return {-0.5, 1.5};
    case Variant::MacWindows: return {0.0, 2.0};
    case Variant::ElFarol: return {-1.0, 1.0};
  }
  throw std::domain_error("reward_bounds: unknown game variant");
}

}  // namespace popdyn::games
