#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "lava/tracker.hpp"

using namespace lava;

namespace {

ObjectBelief make_belief(std::vector<Vec3> particles, std::vector<double> weights, int tag = 1) {
  ObjectBelief b;
  b.tag_id = tag;
  b.particles = std::move(particles);
  b.weights = std::move(weights);
  return b;
}

double weight_sum(const ObjectBelief& b) {
  return std::accumulate(b.weights.begin(), b.weights.end(), 0.0);
}

}  // namespace

TEST_CASE("init_belief small and large") {
  TrackerConfig cfg;
  cfg.particle_count = 4;
  Rng rng(1);
  const Area area{0.0, 10.0, 0.0, 10.0};
  const auto b = init_belief(3, area, 1.0, cfg, rng);
  CHECK(b.tag_id == 3);
  REQUIRE(b.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(area.contains(b.particles[i]));
    CHECK(b.particles[i].z == 1.0);
    CHECK(b.weights[i] == 0.25);
  }
  CHECK_FALSE(b.localized);

  cfg.particle_count = 10000;
  Rng big(2);
  const auto wide = init_belief(1, Area{}, 1.0, cfg, big);
  const Vec3 m = estimate(wide);
  CHECK(std::abs(m.x - 500.0) < 20.0);
  CHECK(std::abs(m.y - 500.0) < 20.0);

  Rng a(5), c(5);
  CHECK(init_belief(1, Area{}, 1.0, cfg, a).particles == init_belief(1, Area{}, 1.0, cfg, c).particles);
}

TEST_CASE("predict leaves weights alone") {
  TrackerConfig cfg;
  cfg.particle_count = 100;
  Rng rng(3);
  auto b = init_belief(1, Area{}, 1.0, cfg, rng);
  b.weights[0] = 0.5;
  b.weights[1] = 0.5 - 98 * 0.0;
  const auto weights = b.weights;
  const auto particles = b.particles;

  TargetDynamics still;
  still.process_noise_var = {0.0, 0.0, 0.0};
  predict(b, still, Area{}, rng);
  CHECK(b.particles == particles);

  predict(b, TargetDynamics{}, Area{}, rng);
  CHECK(b.weights == weights);
  CHECK(b.particles != particles);
  for (const auto& p : b.particles) CHECK(Area{}.contains(p));
}

TEST_CASE("predict spreads the belief in expectation") {
  TrackerConfig cfg;
  cfg.particle_count = 500;
  TargetDynamics dyn;
  dyn.process_noise_var = {4.0, 4.0, 0.0};
  double before = 0.0;
  double after = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    auto b = make_belief(std::vector<Vec3>(cfg.particle_count, Vec3{500.0, 500.0, 1.0}),
                         std::vector<double>(cfg.particle_count, 1.0 / cfg.particle_count));
    std::normal_distribution<double> g(0.0, 10.0);
    for (auto& p : b.particles) p.x += g(rng), p.y += g(rng);
    before += uncertainty(b);
    for (int k = 0; k < 5; ++k) predict(b, dyn, Area{}, rng);
    after += uncertainty(b);
  }
  CHECK(after > before);
}

TEST_CASE("update with constant likelihood keeps the weights") {
  PropagationConfig rf;
  UavState uav{{0.0, 0.0, 30.0}, 0.0, 0.0};
  // Every particle at the same range and relative azimuth sees the same power.
  auto b = make_belief({{100.0, 0.0, 1.0}, {100.0, 0.0, 1.0}, {100.0, 0.0, 1.0}}, {0.2, 0.3, 0.5});
  REQUIRE(update(b, Measurement{1, -95.0, 1}, uav, rf));
  CHECK(b.weights[0] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(b.weights[1] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(b.weights[2] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("update applies Bayes with a 3:1 likelihood ratio") {
  PropagationConfig rf;
  UavState uav{{0.0, 0.0, 30.0}, 0.0, 0.0};
  const Vec3 p1{80.0, 0.0, 1.0};
  const Vec3 p2{160.0, 0.0, 1.0};
  const double h1 = received_power(p1, uav, rf);
  const double h2 = received_power(p2, uav, rf);
  // (z - h2)^2 - (z - h1)^2 = 2 Q ln 3 gives g1 / g2 = 3.
  const double z = 0.5 * (h1 + h2) + rf.noise_var_db2 * std::log(3.0) / (h1 - h2);
  auto b = make_belief({p1, p2}, {0.5, 0.5});
  REQUIRE(update(b, Measurement{1, z, 1}, uav, rf));
  CHECK(b.weights[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(b.weights[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("update matches a long-double normalisation oracle") {
  PropagationConfig rf;
  UavState uav{{200.0, 300.0, 30.0}, 0.7, 0.0};
  Rng rng(11);
  std::uniform_real_distribution<double> xy(0.0, 1000.0);
  std::uniform_real_distribution<double> w(0.01, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Vec3> ps;
    std::vector<double> ws;
    for (int i = 0; i < 5; ++i) {
      ps.push_back({xy(rng), xy(rng), 1.0});
      ws.push_back(w(rng));
    }
    const double total = std::accumulate(ws.begin(), ws.end(), 0.0);
    for (auto& x : ws) x /= total;
    const double z = received_power(ps[0], uav, rf) + 3.0;

    std::vector<long double> expect(5);
    long double norm = 0.0L;
    for (int i = 0; i < 5; ++i) {
      const long double r = z - static_cast<long double>(received_power(ps[i], uav, rf));
      expect[i] = ws[i] * std::exp(-r * r / (2.0L * rf.noise_var_db2));
      norm += expect[i];
    }
    auto b = make_belief(ps, ws);
    REQUIRE(update(b, Measurement{1, z, 0}, uav, rf));
    for (int i = 0; i < 5; ++i) {
      const long double e = expect[i] / norm;
      CHECK(std::abs(b.weights[i] - e) <= 1e-12L * std::max(e, 1e-300L) + 1e-300L);
    }
    CHECK(std::abs(weight_sum(b) - 1.0) < 1e-9);
  }
}

TEST_CASE("update survives extreme measurements and flags underflow") {
  PropagationConfig rf;
  UavState uav{{0.0, 0.0, 30.0}, 0.0, 0.0};
  auto b = make_belief({{100.0, 0.0, 1.0}, {900.0, 0.0, 1.0}}, {0.5, 0.5});
  // Far in the tail: a naive product underflows, log-sum-exp does not.
  REQUIRE(update(b, Measurement{1, 400.0, 0}, uav, rf));
  CHECK(b.weights[0] == doctest::Approx(1.0));
  CHECK(std::abs(weight_sum(b) - 1.0) < 1e-12);

  // Every particle on the antenna: all likelihoods are -inf.
  auto dead = make_belief({{0.0, 0.0, 30.0}, {0.0, 0.0, 30.0}}, {0.9, 0.1});
  CHECK_FALSE(update(dead, Measurement{1, -50.0, 0}, uav, rf));
  CHECK(dead.weights[0] == 0.5);
  CHECK(dead.weights[1] == 0.5);

  auto other = make_belief({{1.0, 0.0, 1.0}}, {1.0}, 2);
  CHECK_THROWS(update(other, Measurement{1, -50.0, 0}, uav, rf));
}

TEST_CASE("resampling") {
  TrackerConfig cfg;
  Rng rng(0);
  auto uniform = make_belief({{1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}}, {0.25, 0.25, 0.25, 0.25});
  const auto copy = uniform.particles;
  CHECK(effective_sample_size(uniform) == doctest::Approx(4.0));
  CHECK_FALSE(resample_if_needed(uniform, cfg, rng));
  CHECK(uniform.particles == copy);

  auto degenerate = make_belief({{1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}}, {1.0, 0.0, 0.0, 0.0});
  CHECK(resample_if_needed(degenerate, cfg, rng));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(degenerate.particles[i] == Vec3{1, 0, 0});
    CHECK(degenerate.weights[i] == 0.25);
  }

  auto late = make_belief({{1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}}, {0.0, 0.0, 0.0, 1.0});
  systematic_resample(late, rng);
  for (const auto& p : late.particles) CHECK(p == Vec3{4, 0, 0});
}

TEST_CASE("systematic resampling copy proportions") {
  Rng rng(123);
  const int reps = 100000;
  std::vector<double> counts(3, 0.0);
  for (int r = 0; r < reps; ++r) {
    auto b = make_belief({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {0.5, 0.3, 0.2});
    systematic_resample(b, rng);
    for (const auto& p : b.particles) counts[static_cast<std::size_t>(p.x)] += 1.0;
  }
  const double total = 3.0 * reps;
  CHECK(std::abs(counts[0] / total - 0.5) < 0.01);
  CHECK(std::abs(counts[1] / total - 0.3) < 0.01);
  CHECK(std::abs(counts[2] / total - 0.2) < 0.01);
}

TEST_CASE("estimate") {
  CHECK(estimate(make_belief({{3, 4, 5}}, {1.0})) == Vec3{3, 4, 5});
  CHECK(estimate(make_belief({{0, 0, 0}, {2, 0, 0}}, {0.5, 0.5})).x == doctest::Approx(1.0));
  CHECK(estimate(make_belief({{0, 0, 0}, {4, 0, 0}}, {0.25, 0.75})).x == doctest::Approx(3.0));
}

TEST_CASE("uncertainty") {
  CHECK(uncertainty(make_belief({{7, 7, 1}, {7, 7, 1}, {7, 7, 1}}, {0.2, 0.3, 0.5})) == 0.0);
  CHECK(uncertainty(make_belief({{0, 0, 0}, {2, 0, 0}}, {0.5, 0.5})) == doctest::Approx(1.0));
  const double s3 = uncertainty(make_belief({{0, 0, 0}, {4, 0, 0}}, {0.25, 0.75}));
  CHECK(std::abs(s3 - std::sqrt(3.0L)) <= 1e-10L * std::sqrt(3.0L));
}

TEST_CASE("uncertainty agrees with an unweighted covariance oracle") {
  Rng rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 200;
    std::vector<Vec3> ps(n);
    for (auto& p : ps) p = {30.0 * g(rng), 10.0 * g(rng), 1.0};
    long double mx = 0, my = 0;
    for (const auto& p : ps) mx += p.x, my += p.y;
    mx /= n;
    my /= n;
    long double vx = 0, vy = 0;
    for (const auto& p : ps) vx += (p.x - mx) * (p.x - mx), vy += (p.y - my) * (p.y - my);
    const long double expect = std::sqrt(std::max(vx, vy) / n);
    const double got = uncertainty(make_belief(ps, std::vector<double>(n, 1.0 / n)));
    CHECK(std::abs(got - expect) <= 1e-10L * expect);
  }
}

TEST_CASE("localized flag latches") {
  auto b = make_belief({{0, 0, 0}, {2, 0, 0}}, {0.5, 0.5});
  CHECK_FALSE(refresh_localized(b, 0.5));
  CHECK(refresh_localized(b, 1.5));
  b.particles[1] = {1000, 0, 0};
  CHECK(refresh_localized(b, 1.5));
  CHECK(b.localized);
}

TEST_CASE("filter loop keeps weights normalised and particles in the area") {
  TrackerConfig cfg;
  cfg.particle_count = 2000;
  PropagationConfig rf;
  TargetDynamics dyn;
  const Area area{};
  Rng rng(31);
  auto b = init_belief(1, area, 1.0, cfg, rng);
  const ObjectState truth{{400.0, 600.0, 1.0}, 1};
  UavState uav{{500.0, 500.0, 30.0}, 0.0, 0.0};
  for (int k = 0; k < 60; ++k) {
    uav.heading = normalize_heading(0.3 * k);
    predict(b, dyn, area, rng);
    update(b, sample_measurement(truth, uav, rf, rng, k), uav, rf);
    resample_if_needed(b, cfg, rng);
    REQUIRE(std::abs(weight_sum(b) - 1.0) < 1e-9);
    for (double w : b.weights) REQUIRE(w >= 0.0);
    for (const auto& p : b.particles) REQUIRE(area.contains(p));
    REQUIRE(b.size() == cfg.particle_count);
  }
}
