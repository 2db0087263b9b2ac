#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "erpm/diagnostics.hpp"
#include "erpm/exact.hpp"

using namespace erpm;

namespace {

double value_of(const std::vector<AuxValue>& values, const std::string& name) {
  for (const auto& v : values)
    if (v.name == name) {
      REQUIRE(v.defined);
      return v.value;
    }
  FAIL("missing auxiliary value ", name);
  return 0;
}

bool defined(const std::vector<AuxValue>& values, const std::string& name) {
  for (const auto& v : values)
    if (v.name == name) return v.defined;
  FAIL("missing auxiliary value ", name);
  return false;
}

}  // namespace

TEST_CASE("auxiliary spec parsing") {
  CHECK(AuxiliarySpec::parse("size_hist").kind == AuxKind::SizeHistogram);
  CHECK(AuxiliarySpec::parse("icc:age").kind == AuxKind::Icc);
  CHECK(AuxiliarySpec::parse("icc:age").attribute == "age");
  CHECK(AuxiliarySpec::parse("mean_size_by:language").kind == AuxKind::MeanSizeByCategory);
  CHECK_THROWS_AS(AuxiliarySpec::parse("nonsense"), ValidationError);
  CHECK_THROWS_AS(AuxiliarySpec::parse("icc"), ValidationError);
}

TEST_CASE("size histogram of a four-block partition") {
  const Partition p({0, 0, 1, 1, 0, 2, 3, 3, 3, 3});
  const auto cov = CovariateStore::empty(10);
  const auto values = auxiliary_statistics(p, cov, {AuxiliarySpec::parse("size_hist")});
  CHECK(value_of(values, "size_count_1") == 1);
  CHECK(value_of(values, "size_count_2") == 1);
  CHECK(value_of(values, "size_count_3") == 1);
  CHECK(value_of(values, "size_count_4") == 1);
  CHECK(value_of(values, "size_count_5") == 0);
}

TEST_CASE("tie difference counts") {
  CovariateStore cov = CovariateStore::empty(5);
  cov.add_attribute("age", {0, 0, 1, 3, std::nan("")});
  const Partition p({0, 0, 0, 0, 0});
  const auto values = auxiliary_statistics(p, cov, {AuxiliarySpec::parse("tie_diff:age")});
  CHECK(value_of(values, "tie_diff_age_0") == 1);  // (1,2)
  CHECK(value_of(values, "tie_diff_age_1") == 2);  // (1,3), (2,3)
  CHECK(value_of(values, "tie_diff_age_2") == 1);  // (3,4)
  CHECK(value_of(values, "tie_diff_age_3") == 2);  // (1,4), (2,4)
}

TEST_CASE("intraclass correlation") {
  CovariateStore cov = CovariateStore::empty(6);

  SUBCASE("attribute equal to the block index gives 1") {
    cov.add_attribute("a", {0, 0, 1, 1, 2, 2});
    const Partition p({0, 0, 1, 1, 2, 2});
    const auto values = auxiliary_statistics(p, cov, {AuxiliarySpec::parse("icc:a")});
    CHECK(value_of(values, "icc_a") == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("single block is undefined") {
    cov.add_attribute("a", {1, 2, 3, 4, 5, 6});
    const auto values =
        auxiliary_statistics(Partition::one_block(6), cov, {AuxiliarySpec::parse("icc:a")});
    CHECK_FALSE(defined(values, "icc_a"));
  }
  SUBCASE("all singletons is undefined") {
    cov.add_attribute("a", {1, 2, 3, 4, 5, 6});
    const auto values =
        auxiliary_statistics(Partition::singletons(6), cov, {AuxiliarySpec::parse("icc:a")});
    CHECK_FALSE(defined(values, "icc_a"));
  }
}

TEST_CASE("attribute-size correlation") {
  CovariateStore cov = CovariateStore::empty(6);
  cov.add_attribute("a", {1, 1, 1, 0, 0, 0});
  // the ones sit in a 3-block and a 2-block; the zeros in smaller ones
  const Partition p({0, 0, 0, 1, 1, 2});
  const auto values =
      auxiliary_statistics(p, cov, {AuxiliarySpec::parse("attr_size_corr:a")});
  // sizes for actors: 3,3,3,2,2,1 against attribute 1,1,1,0,0,0
  CHECK(value_of(values, "attr_size_corr_a") > 0.8);

  CovariateStore constant = CovariateStore::empty(6);
  constant.add_attribute("a", {1, 1, 1, 1, 1, 1});
  const auto undefined_values =
      auxiliary_statistics(p, constant, {AuxiliarySpec::parse("attr_size_corr:a")});
  CHECK_FALSE(defined(undefined_values, "attr_size_corr_a"));
}

TEST_CASE("same-tie proportion is 1 for a constant attribute") {
  CovariateStore cov = CovariateStore::empty(5);
  cov.add_attribute("a", {2, 2, 2, 2, 2});
  const Partition p({0, 0, 1, 1, 1});
  const auto values = auxiliary_statistics(p, cov, {AuxiliarySpec::parse("same_tie_prop:a")});
  CHECK(value_of(values, "same_tie_prop_a") == 1.0);

  const auto singletons =
      auxiliary_statistics(Partition::singletons(5), cov, {AuxiliarySpec::parse("same_tie_prop:a")});
  CHECK_FALSE(defined(singletons, "same_tie_prop_a"));
}

TEST_CASE("mean block size by category") {
  CovariateStore cov = CovariateStore::empty(6);
  cov.add_attribute("lang", {0, 0, 1, 1, 1, 2});
  const Partition p({0, 0, 0, 1, 1, 2});  // sizes 3, 2, 1
  const auto values = auxiliary_statistics(p, cov, {AuxiliarySpec::parse("mean_size_by:lang")});
  CHECK(value_of(values, "mean_size_lang_0") == 3.0);
  CHECK(value_of(values, "mean_size_lang_1") == doctest::Approx((3.0 + 2 + 2) / 3));
  CHECK(value_of(values, "mean_size_lang_2") == 1.0);
}

TEST_CASE("type-7 quantiles") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(quantile_type7(x, 0.25) == doctest::Approx(3.25));
  CHECK(quantile_type7(x, 0.5) == doctest::Approx(5.5));
  CHECK(quantile_type7(x, 0.0) == 1.0);
  CHECK(quantile_type7(x, 1.0) == 10.0);
  const std::vector<double> one{7.0};
  CHECK(quantile_type7(one, 0.3) == 7.0);
}

TEST_CASE("gof recovers a sufficient statistic of the fitted model") {
  const int n = 10;
  const auto cov = CovariateStore::empty(n);
  const std::vector<StatisticSpec> specs{StatisticSpec::num_groups(),
                                         StatisticSpec::num_groups_of_size(4)};
  // observed sizes (4, 3, 2, 1): fit exactly, then simulate
  const Partition p_obs({0, 0, 0, 0, 1, 1, 1, 2, 2, 3});
  const auto s_obs = evaluate(p_obs, specs, cov);
  const auto alpha = newton_mle_size_only(specs, s_obs, n, SizeBounds::all());
  const ModelSpec fitted{specs, alpha, SizeBounds::all()};

  ChainConfig cfg;
  cfg.mixture = ProposalMixture::merge_split_only();
  cfg.burn_in = 2000;
  cfg.thinning = 20;
  cfg.seed = 37;
  const auto report = gof(fitted, cov, p_obs, 2000, {AuxiliarySpec::parse("size_hist")}, cfg);

  CHECK(report.num_sims == 2000);
  for (const auto& entry : report.entries) {
    if (entry.name != "size_count_4") continue;
    // sufficient statistic: |simulated mean - observed| / sd within the
    // convergence-ratio criterion
    CHECK(entry.observed == 1.0);
    CHECK(std::abs(entry.mean - entry.observed) / entry.sd <= 0.1);
    CHECK_FALSE(entry.outside_interval);
  }
  // quantiles are monotone
  for (const auto& entry : report.entries) {
    CHECK(entry.q025 <= entry.q25);
    CHECK(entry.q25 <= entry.q50);
    CHECK(entry.q50 <= entry.q75);
    CHECK(entry.q75 <= entry.q975);
  }
}

TEST_CASE("gof rejects zero simulations") {
  const auto cov = CovariateStore::empty(4);
  const ModelSpec m{{StatisticSpec::num_groups()}, {0.0}, SizeBounds::all()};
  ChainConfig cfg;
  CHECK_THROWS_AS(gof(m, cov, Partition::singletons(4), 0, {AuxiliarySpec::parse("size_hist")}, cfg),
                  ValidationError);
}
