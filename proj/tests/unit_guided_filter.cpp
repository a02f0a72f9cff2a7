#include "doctest.h"
#include "satac/error.hpp"
#include "satac/guided_filter.hpp"
#include "test_util.hpp"

using namespace satac;

TEST_CASE("box_mean matches the brute-force window mean") {
  auto rng = testutil::make_rng(101);
  for (int r : {1, 2, 5, 9}) {
    ScalarField f = testutil::random_field(23, 17, rng);
    ScalarField fast = box_mean(f, r);
    ScalarField brute = testutil::brute_box_mean(f, r);
    CHECK(testutil::max_abs_diff(fast, brute) < 1e-12);
  }
}

TEST_CASE("box_mean handles radii larger than the image") {
  auto rng = testutil::make_rng(102);
  ScalarField f = testutil::random_field(7, 5, rng);
  ScalarField fast = box_mean(f, 50);
  ScalarField brute = testutil::brute_box_mean(f, 50);
  CHECK(testutil::max_abs_diff(fast, brute) < 1e-12);
  // a window covering everything equals the global mean
  double total = 0.0;
  for (double v : f.values) total += v;
  CHECK(fast.at(3, 2) == doctest::Approx(total / f.values.size()).epsilon(1e-12));
}

TEST_CASE("box_mean of a constant is the constant, negative radius throws") {
  ScalarField f = ScalarField::filled(16, 16, 0.77);
  ScalarField out = box_mean(f, 3);
  CHECK(testutil::max_abs_diff(out, f) < 1e-12);
  CHECK_THROWS_AS(box_mean(f, -1), Error);
}

TEST_CASE("guided filter: constant input stays constant") {
  auto rng = testutil::make_rng(103);
  ScalarField guide = testutil::random_field(32, 24, rng);
  ScalarField input = ScalarField::filled(32, 24, 0.42);
  ScalarField out = guided_filter(input, guide, 3, 0.01);
  for (double v : out.values) CHECK(v == doctest::Approx(0.42).epsilon(1e-9));
}

TEST_CASE("guided filter: eps >> range^2 degenerates to a double box mean") {
  auto rng = testutil::make_rng(104);
  ScalarField f = testutil::random_field(48, 48, rng);
  ScalarField out = guided_filter(f, f, 4, 1e6);
  ScalarField twice = testutil::brute_box_mean(testutil::brute_box_mean(f, 4), 4);
  CHECK(testutil::max_abs_diff(out, twice) <= 1e-3);
}

TEST_CASE("guided filter: matches the brute-force definition") {
  auto rng = testutil::make_rng(105);
  SUBCASE("random 32x32, r=3, eps=0.01") {
    ScalarField input = testutil::random_field(32, 32, rng);
    ScalarField guide = testutil::random_field(32, 32, rng);
    ScalarField fast = guided_filter(input, guide, 3, 0.01);
    ScalarField brute = testutil::brute_guided_filter(input, guide, 3, 0.01);
    CHECK(testutil::max_abs_diff(fast, brute) < 1e-6);
  }
  SUBCASE("self-guided") {
    ScalarField f = testutil::random_field(40, 28, rng);
    ScalarField fast = guided_filter(f, f, 5, 1e-3);
    ScalarField brute = testutil::brute_guided_filter(f, f, 5, 1e-3);
    CHECK(testutil::max_abs_diff(fast, brute) < 1e-6);
  }
  SUBCASE("self-guided shares the code path with guide == input copies") {
    ScalarField f = testutil::random_field(20, 20, rng);
    ScalarField copy = f;
    ScalarField a = guided_filter(f, f, 2, 0.05);
    ScalarField b = guided_filter(f, copy, 2, 0.05);
    CHECK(testutil::max_abs_diff(a, b) < 1e-12);
  }
}

TEST_CASE("guided filter: edge preservation beats plain smoothing on a step") {
  // step image with mild noise: the filter should keep the step much
  // sharper than a box mean of the same radius
  auto rng = testutil::make_rng(106);
  ScalarField f = ScalarField::filled(64, 32, 0.2);
  for (int y = 0; y < 32; ++y)
    for (int x = 32; x < 64; ++x) f.at(x, y) = 0.8;
  std::normal_distribution<double> noise(0.0, 0.005);
  for (double& v : f.values) v += noise(rng);
  ScalarField guided = guided_filter(f, f, 4, 1e-3);
  ScalarField boxed = box_mean(f, 4);
  // compare the jump across the two pixels straddling the step: the box
  // mean spreads it over the whole window, the guided filter keeps it
  double guided_jump = guided.at(32, 16) - guided.at(31, 16);
  double boxed_jump = boxed.at(32, 16) - boxed.at(31, 16);
  CHECK(guided_jump > 3.0 * boxed_jump);
  CHECK(guided_jump > 0.5);
}

TEST_CASE("guided filter: argument validation") {
  ScalarField a = ScalarField::filled(16, 16, 0.5);
  ScalarField b = ScalarField::filled(8, 8, 0.5);
  CHECK_THROWS_AS(guided_filter(a, b, 3, 0.01), Error);   // dim mismatch
  CHECK_THROWS_AS(guided_filter(a, a, 0, 0.01), Error);   // radius < 1
  CHECK_THROWS_AS(guided_filter(a, a, 3, -1.0), Error);   // negative eps
}
