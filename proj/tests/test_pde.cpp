#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "popdyn/pde.hpp"

using namespace popdyn;
using learners::Family;
using learners::LearnerSpec;

namespace {

const LearnerSpec kCross{Family::Cross, 0.01, 2.0};
const LearnerSpec kQ{Family::QBoltzmann, 0.05, 2.0};
const LearnerSpec kIGA{Family::IGA, 0.05, 2.0};

init_dist::InitialDistribution unit_tn(double mu, double sigma) {
  return init_dist::InitialDistribution::trunc_normal(mu, sigma, 0.0, 1.0);
}

}  // namespace

TEST_CASE("policy grid puts cell centers exactly on the unit interval") {
  const auto grid = pde::make_policy_grid(401);
  REQUIRE(grid.dim() == 1);
  const auto& d = grid.dims[0];
  CHECK(d.cells == 401);
  CHECK(d.h == 1.0 / 400.0);
  CHECK(d.centers.front() == 0.0);  // exact: the absorbing endpoints are centers
  CHECK(d.centers.back() == 1.0);
  CHECK(d.centers[200] == 0.5);
  CHECK(d.lo == doctest::Approx(-0.5 * d.h));
  CHECK(d.hi == doctest::Approx(1.0 + 0.5 * d.h));
  CHECK(grid.cell_count() == 401);
  CHECK(grid.cell_volume() == d.h);
}

TEST_CASE("q grid covers the reward square with a margin") {
  const auto grid = pde::make_q_grid(games::GameSpec::public_goods(), 101);
  REQUIRE(grid.dim() == 2);
  for (const auto& d : grid.dims) {
    CHECK(d.cells == 101);
    CHECK(d.centers.front() == doctest::Approx(-0.6));
    CHECK(d.centers.back() == doctest::Approx(1.6));
  }
  CHECK(grid.cell_count() == 101 * 101);
}

TEST_CASE("grid constructors reject degenerate shapes") {
  CHECK_THROWS_AS(pde::make_policy_grid(7), std::invalid_argument);
  CHECK_THROWS_AS(pde::make_q_grid(games::GameSpec::public_goods(), 7), std::invalid_argument);
  CHECK_THROWS_AS(pde::make_uniform_grid({0.0}, {0.0}, {16}), std::invalid_argument);
  CHECK_THROWS_AS(pde::make_uniform_grid({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {16, 16, 16}),
                  std::invalid_argument);
}

TEST_CASE("grid_for picks the right shape per learner") {
  const auto pg = games::GameSpec::public_goods();
  CHECK(pde::grid_for(kCross, pg, {41}).dim() == 1);
  CHECK(pde::grid_for(kIGA, pg, {41}).dim() == 1);
  CHECK(pde::grid_for(kQ, pg, {15, 15}).dim() == 2);
  CHECK_THROWS_AS(pde::grid_for(kQ, pg, {15}), std::invalid_argument);
  CHECK_THROWS_AS(pde::grid_for(kQ, pg, {15, 17}), std::invalid_argument);
  CHECK_THROWS_AS(pde::grid_for(kCross, pg, {15, 15}), std::invalid_argument);
}

TEST_CASE("projection reproduces a flat density") {
  const auto grid = pde::make_uniform_grid({0.0}, {1.0}, {50});
  const auto p = pde::project_initial(init_dist::InitialDistribution::beta(1.0, 1.0), grid);
  for (double v : p.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pde::mass(p, grid) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("projection keeps symmetry and unit mass") {
  const auto grid = pde::make_policy_grid(201);
  const auto p = pde::project_initial(unit_tn(0.5, 0.1), grid);
  CHECK(pde::mass(p, grid) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(pde::min_value(p) >= 0.0);
  for (size_t i = 0; i < 201; ++i) {
    CHECK(p.values[i] == doctest::Approx(p.values[200 - i]).epsilon(1e-11));
  }
  // Mode at the center for a bell, endpoints for the U-shaped density.
  CHECK(p.values[100] > p.values[0]);
  const auto u =
      pde::project_initial(init_dist::InitialDistribution::beta(0.4, 0.4), grid);
  CHECK(u.values[0] > u.values[100]);
  CHECK(u.values[200] > u.values[100]);
}

TEST_CASE("projection fails off the support") {
  const auto far_grid = pde::make_uniform_grid({5.0}, {6.0}, {32});
  CHECK_THROWS_AS(pde::project_initial(unit_tn(0.5, 0.1), far_grid), std::domain_error);
  const auto qgrid = pde::make_q_grid(games::GameSpec::public_goods(), 15);
  CHECK_THROWS_AS(pde::project_initial(unit_tn(0.5, 0.1), qgrid), std::domain_error);
}

TEST_CASE("mean_profile of a point mass is the cell center") {
  const auto grid = pde::make_policy_grid(41);
  pde::DensityField p;
  p.values.assign(41, 0.0);
  p.values[30] = 1.0 / grid.cell_volume();
  const auto prof = pde::mean_profile(p, grid, kCross);
  CHECK(prof.fractions[0] == doctest::Approx(grid.dims[0].centers[30]).epsilon(1e-14));
  CHECK(prof.fractions[0] + prof.fractions[1] == 1.0);
}

TEST_CASE("mean_profile of a swap-symmetric q density is even money") {
  const auto grid = pde::make_q_grid(games::GameSpec::public_goods(), 15);
  pde::DensityField p;
  p.values.resize(15 * 15);
  for (size_t i1 = 0; i1 < 15; ++i1) {
    for (size_t i0 = 0; i0 < 15; ++i0) {
      const double g0 = 1.0 + static_cast<double>(i0 % 3);
      const double g1 = 1.0 + static_cast<double>(i1 % 3);
      p.values[i0 + 15 * i1] = g0 * g1;
    }
  }
  const double m = pde::mass(p, grid);
  for (double& v : p.values) v /= m;
  const auto prof = pde::mean_profile(p, grid, kQ);
  CHECK(prof.fractions[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cross drift field vanishes exactly at the absorbing boundary cells") {
  const auto grid = pde::make_policy_grid(101);
  const auto v = pde::drift_field(grid, kCross, games::GameSpec::public_goods(),
                                  PopulationProfile{{0.6, 0.4}}, 0.0);
  REQUIRE(v.comp.size() == 1);
  CHECK(v.comp[0].front() == 0.0);
  CHECK(v.comp[0].back() == 0.0);
  // Interior velocities follow alpha * x(1-x) * gap with gap 0.5.
  const double x = grid.dims[0].centers[25];
  CHECK(v.comp[0][25] == doctest::Approx(0.01 * x * (1 - x) * 0.5).epsilon(1e-14));
}

TEST_CASE("iga drift field is constant in the state") {
  const auto grid = pde::make_policy_grid(64);
  const auto v = pde::drift_field(grid, kIGA, games::GameSpec::public_goods(),
                                  PopulationProfile{{0.6, 0.4}}, 0.0);
  for (double vv : v.comp[0]) CHECK(vv == doctest::Approx(0.025).epsilon(1e-15));
}

TEST_CASE("q drift field is zero where the q values equal the rewards") {
  // All-cooperate public goods prices the actions at [1.5, 1.0]; a dyadic grid
  // puts a cell center exactly on that point.
  const auto grid = pde::make_uniform_grid({1.0625, 0.5625}, {2.0625, 1.5625}, {8, 8});
  CHECK(grid.dims[0].centers[3] == 1.5);
  CHECK(grid.dims[1].centers[3] == 1.0);
  const auto v = pde::drift_field(grid, kQ, games::GameSpec::public_goods(),
                                  PopulationProfile{{0.0, 1.0}}, 0.0);
  const size_t c = 3 + 8 * 3;
  CHECK(v.comp[0][c] == 0.0);
  CHECK(v.comp[1][c] == 0.0);
  // Drift points toward the reward point elsewhere.
  CHECK(v.comp[0][0 + 8 * 3] > 0.0);
  CHECK(v.comp[0][7 + 8 * 3] < 0.0);
}

TEST_CASE("advection with zero velocity is the identity") {
  const auto grid = pde::make_policy_grid(33);
  const auto p = pde::project_initial(unit_tn(0.5, 0.2), grid);
  pde::VelocityField v;
  v.comp.assign(1, std::vector<double>(33, 0.0));
  const auto out = pde::advect_step(p, v, grid, 1.0);
  CHECK(out.values == p.values);
  CHECK(out.t == p.t + 1.0);
}

TEST_CASE("advection conserves mass and positivity") {
  const auto grid = pde::make_policy_grid(101);
  auto p = pde::project_initial(unit_tn(0.3, 0.15), grid);
  const auto v = pde::drift_field(grid, kCross, games::GameSpec::public_goods(),
                                  PopulationProfile{{0.3, 0.7}}, 0.0);
  for (int s = 0; s < 200; ++s) p = pde::advect_step(p, v, grid, 1.0);
  CHECK(pde::mass(p, grid) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(pde::min_value(p) >= 0.0);
}

TEST_CASE("advection conserves mass in two dimensions") {
  const auto grid = pde::make_q_grid(games::GameSpec::mac_windows(), 21);
  const auto init = init_dist::InitialDistribution::product(
      {init_dist::TruncNormal{1.0, 0.3, 0.0, 2.0}, init_dist::TruncNormal{0.8, 0.3, 0.0, 2.0}});
  auto p = pde::project_initial(init, grid);
  const auto v = pde::drift_field(grid, kQ, games::GameSpec::mac_windows(),
                                  PopulationProfile{{0.5, 0.5}}, 0.0);
  for (int s = 0; s < 50; ++s) p = pde::advect_step(p, v, grid, 1.0);
  CHECK(pde::mass(p, grid) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pde::min_value(p) >= 0.0);
}

TEST_CASE("advection rejects steps past the CFL bound") {
  const auto grid = pde::make_policy_grid(33);
  const auto p = pde::project_initial(unit_tn(0.5, 0.2), grid);
  pde::VelocityField v;
  v.comp.assign(1, std::vector<double>(33, 1.0));  // CFL = 32 at dt=1
  CHECK_THROWS_WITH_AS(pde::advect_step(p, v, grid, 1.0),
                       doctest::Contains("dt=1.000000"), std::runtime_error);
  CHECK_THROWS_AS(pde::advect_step(p, v, grid, 0.0), std::runtime_error);
  CHECK_NOTHROW(pde::advect_step(p, v, grid, grid.dims[0].h));  // CFL = 1 is allowed
}

TEST_CASE("constant velocity at CFL 1 translates the density bitwise") {
  const auto grid = pde::make_uniform_grid({0.0}, {1.0}, {256});
  const double h = grid.dims[0].h;
  pde::DensityField p;
  p.values.assign(256, 0.0);
  // Dyadic bump: every intermediate of the update stays exactly representable.
  const double bump[] = {1.0, 2.0, 4.0, 8.0, 4.0, 2.0, 1.0};
  for (int i = 0; i < 7; ++i) p.values[static_cast<size_t>(40 + i)] = bump[i];
  pde::VelocityField v;
  v.comp.assign(1, std::vector<double>(256, h));
  const auto out = pde::advect_step(p, v, grid, 1.0);
  for (size_t i = 255; i >= 1; --i) CHECK(out.values[i] == p.values[i - 1]);
  CHECK(out.values[0] == 0.0);
}

TEST_CASE("solve records every round and keeps the density sane") {
  const auto grid = pde::make_policy_grid(101);
  const pde::SolveOptions opts{{0, 25, 50}, 1};
  const auto trace = pde::solve(games::GameSpec::public_goods(), kCross, unit_tn(0.5, 0.1), grid,
                                50, opts);
  REQUIRE(trace.records.size() == 51);
  for (size_t t = 0; t < trace.records.size(); ++t) {
    const auto& rec = trace.records[t];
    CHECK(rec.t == static_cast<double>(t));
    CHECK(std::abs(rec.mass - 1.0) < 1e-9);
    CHECK(rec.min_value >= 0.0);
    if (t > 0) {
      // Defection only gains under the public goods payoffs.
      CHECK(rec.expected.fractions[0] >= trace.records[t - 1].expected.fractions[0] - 1e-14);
    }
  }
  REQUIRE(trace.records[0].snapshot.has_value());
  REQUIRE(trace.records[25].snapshot.has_value());
  CHECK_FALSE(trace.records[10].snapshot.has_value());
  // The t=0 snapshot is the untouched projection.
  const auto p0 = pde::project_initial(unit_tn(0.5, 0.1), grid);
  CHECK(trace.records[0].snapshot->values == p0.values);
}

TEST_CASE("solve substep floor does not disturb the endpoint") {
  const auto grid = pde::make_policy_grid(101);
  const auto a = pde::solve(games::GameSpec::public_goods(), kCross, unit_tn(0.5, 0.1), grid, 40,
                            {{}, 1});
  const auto b = pde::solve(games::GameSpec::public_goods(), kCross, unit_tn(0.5, 0.1), grid, 40,
                            {{}, 8});
  CHECK(a.records.back().expected.fractions[0] ==
        doctest::Approx(b.records.back().expected.fractions[0]).epsilon(1e-3));
  CHECK(std::abs(b.records.back().mass - 1.0) < 1e-9);
}

TEST_CASE("solve argument validation") {
  const auto grid = pde::make_policy_grid(64);
  CHECK_THROWS_AS(pde::solve(games::GameSpec::public_goods(), kCross, unit_tn(0.5, 0.1), grid, -1,
                             {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pde::solve(games::GameSpec::public_goods(), kCross, unit_tn(0.5, 0.1), grid, 10,
                             {{11}, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pde::solve(games::GameSpec::public_goods(), kCross, unit_tn(0.5, 0.1), grid, 10,
                             {{}, 0}),
                  std::invalid_argument);
}
