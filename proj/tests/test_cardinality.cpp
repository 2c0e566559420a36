#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "ppdepth/cardinality.hpp"
#include "ppdepth/error.hpp"
#include "ppdepth/rng.hpp"
#include "ppdepth/simulate.hpp"
#include "ppdepth/stats.hpp"
#include "support/oracle.hpp"

using namespace ppdepth;
using cardinality::CardinalityModel;

TEST_CASE("empirical fit tallies counts") {
  const std::vector<long long> counts{2, 2, 3, 5};
  const CardinalityModel m = cardinality::fit_empirical(counts);
  CHECK(m.kind() == cardinality::Kind::empirical);
  CHECK(m.cap() == 10);  // max count + 5
  CHECK(m.pmf(2) == doctest::Approx(0.5));
  CHECK(m.pmf(3) == doctest::Approx(0.25));
  CHECK(m.pmf(5) == doctest::Approx(0.25));
  CHECK(m.pmf(4) == 0.0);
  CHECK(m.pmf(11) == 0.0);
  CHECK(m.pmf(-1) == 0.0);
  CHECK(m.max_pmf() == doctest::Approx(0.5));
}

TEST_CASE("empirical fit rejects counts beyond an explicit cap") {
  try {
    cardinality::fit_empirical({1, 7}, 3);
    FAIL("expected cap_exceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cap_exceeded);
  }
}

TEST_CASE("poisson MLE is the count mean") {
  const CardinalityModel m = cardinality::fit_poisson_mle({1, 2, 3});
  CHECK(m.kind() == cardinality::Kind::poisson);
  CHECK(m.poisson_mean() == 2.0);
  CHECK(m.pmf(0) == doctest::Approx(std::exp(-2.0)));
  CHECK(m.pmf(2) == doctest::Approx(stats::poisson_pmf(2, 2.0)));
}

TEST_CASE("model constructors validate") {
  CHECK_THROWS_AS(CardinalityModel::empirical({}), Error);
  CHECK_THROWS_AS(CardinalityModel::empirical({0.5, 0.6}), Error);
  CHECK_THROWS_AS(CardinalityModel::empirical({1.5, -0.5}), Error);
  CHECK_THROWS_AS(CardinalityModel::poisson(-1.0, 5), Error);
  CHECK_THROWS_AS(CardinalityModel::poisson(1.0, -1), Error);
  CHECK_THROWS_AS(
      CardinalityModel::poisson_mixture({0.5, 0.6}, {1.0, 2.0}, 5), Error);
  CHECK_THROWS_AS(
      CardinalityModel::poisson_mixture({0.5, 0.5}, {1.0, -2.0}, 5), Error);
  // Accessors guard their kind.
  const CardinalityModel m = cardinality::fit_poisson_mle({1, 2, 3});
  CHECK_THROWS_AS(m.empirical_pmf(), Error);
  CHECK_THROWS_AS(m.mixture_weights(), Error);
}

TEST_CASE("weight is the pmf ratio raised to r") {
  // pmf(0) = 1/3, pmf(1) = 2/3: the ratio is exactly one half.
  const CardinalityModel m = cardinality::fit_empirical({0, 1, 1}, 1);
  CHECK(cardinality::weight(m, 1, 1.0) == 1.0);
  CHECK(cardinality::weight(m, 0, 1.0) == 0.5);
  CHECK(cardinality::weight(m, 0, 10.0) == oracle::kWeightHalfPow10);
  CHECK(cardinality::weight(m, 0, 0.0) == 1.0);  // r = 0 flattens support
  CHECK(cardinality::weight(m, 5, 0.0) == 0.0);  // but not off support
  CHECK(cardinality::weight(m, 5, 1.0) == 0.0);
  CHECK_THROWS_AS(cardinality::weight(m, 0, -1.0), Error);
}

TEST_CASE("single component EM equals the poisson MLE bit for bit") {
  std::mt19937_64 gen(substream(17, 0));
  std::poisson_distribution<long long> pois(6.3);
  std::vector<long long> counts(400);
  for (auto& c : counts) c = pois(gen);

  const CardinalityModel mle = cardinality::fit_poisson_mle(counts);
  cardinality::EmFitInfo info;
  const CardinalityModel em =
      cardinality::fit_poisson_mixture_em(counts, 1, -1, 1e-8, 500, 1, &info);
  REQUIRE(em.mixture_means().size() == 1);
  CHECK(em.mixture_means()[0] == mle.poisson_mean());
  CHECK(em.mixture_weights()[0] == 1.0);
  CHECK(info.converged);
}

TEST_CASE("EM log likelihood never decreases") {
  std::mt19937_64 gen(substream(18, 0));
  std::poisson_distribution<long long> lo(3.0), hi(15.0);
  std::vector<long long> counts;
  for (int i = 0; i < 150; ++i) counts.push_back(lo(gen));
  for (int i = 0; i < 150; ++i) counts.push_back(hi(gen));

  cardinality::EmFitInfo info;
  cardinality::fit_poisson_mixture_em(counts, 2, -1, 1e-8, 500, 5, &info);
  REQUIRE(info.log_likelihoods.size() >= 2);
  for (std::size_t i = 1; i < info.log_likelihoods.size(); ++i) {
    CHECK(info.log_likelihoods[i] >= info.log_likelihoods[i - 1] - 1e-10);
  }
  CHECK(info.converged);
}

TEST_CASE("two component EM separates well separated modes") {
  std::mt19937_64 gen(substream(19, 0));
  std::poisson_distribution<long long> lo(2.0), hi(20.0);
  std::vector<long long> counts;
  for (int i = 0; i < 200; ++i) counts.push_back(lo(gen));
  for (int i = 0; i < 200; ++i) counts.push_back(hi(gen));

  const CardinalityModel m =
      cardinality::fit_poisson_mixture_em(counts, 2, -1, 1e-8, 500, 3);
  REQUIRE(m.mixture_means().size() == 2);
  const double a = std::min(m.mixture_means()[0], m.mixture_means()[1]);
  const double b = std::max(m.mixture_means()[0], m.mixture_means()[1]);
  CHECK(a == doctest::Approx(2.0).epsilon(0.2));
  CHECK(b == doctest::Approx(20.0).epsilon(0.1));
}

TEST_CASE("BIC picks a sensible component count") {
  std::mt19937_64 gen(substream(20, 0));
  std::poisson_distribution<long long> single(7.0);
  std::vector<long long> one_mode(300);
  for (auto& c : one_mode) c = single(gen);
  int chosen = 0;
  cardinality::fit_poisson_mixture_bic(one_mode, 5, -1, 1e-8, 500, 1, &chosen);
  CHECK(chosen == 1);

  std::poisson_distribution<long long> lo(2.0), hi(25.0);
  std::vector<long long> two_modes;
  for (int i = 0; i < 150; ++i) two_modes.push_back(lo(gen));
  for (int i = 0; i < 150; ++i) two_modes.push_back(hi(gen));
  cardinality::fit_poisson_mixture_bic(two_modes, 5, -1, 1e-8, 500, 1,
                                       &chosen);
  CHECK(chosen >= 2);
}

TEST_CASE("dataset_counts reads cardinalities off the dataset") {
  const TimeDomain dom(0.0, 1.0);
  Dataset d(dom);
  d.add(Realization(dom, {}));
  d.add(Realization(dom, {0.5}));
  d.add(Realization(dom, {0.2, 0.8}));
  CHECK(cardinality::dataset_counts(d) == std::vector<long long>{0, 1, 2});
}
