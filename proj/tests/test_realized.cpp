#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "asyspill/realized.hpp"

using namespace asyspill;

TEST(LogReturns, FirstDifferences) {
  std::vector<double> flat{1.0, 1.0, 1.0};
  EXPECT_EQ(log_returns(flat), (std::vector<double>{0.0, 0.0}));
  std::vector<double> lp{0.0, 0.01, -0.01};
  auto r = log_returns(lp);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_DOUBLE_EQ(r[0], 0.01);
  EXPECT_DOUBLE_EQ(r[1], -0.02);
  EXPECT_TRUE(log_returns(std::vector<double>{1.0}).empty());
}

TEST(Semivariances, HandExample) {
  std::vector<double> r{0.01, -0.02, 0.03};
  auto s = semivariances(r);
  EXPECT_NEAR(s.rv, 0.0014, 1e-16);
  EXPECT_NEAR(s.rs_minus, 0.0004, 1e-16);
  EXPECT_NEAR(s.rs_plus, 0.0010, 1e-16);
}

TEST(Semivariances, OneSided) {
  std::vector<double> r{-0.01, -0.03, -0.002};
  auto s = semivariances(r);
  EXPECT_EQ(s.rs_plus, 0.0);
  EXPECT_EQ(s.rv, s.rs_minus);
}

TEST(Semivariances, ZeroReturnsAddNothing) {
  std::vector<double> r{0.0, 0.0, 0.01, 0.0};
  auto s = semivariances(r);
  EXPECT_EQ(s.rs_minus, 0.0);
  EXPECT_DOUBLE_EQ(s.rs_plus, 1e-4);
  EXPECT_DOUBLE_EQ(s.rv, 1e-4);
}

TEST(Semivariances, Properties) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(1, 500);
  std::normal_distribution<double> z(0.0, 0.01);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> r(static_cast<std::size_t>(len(rng)));
    for (double& x : r) x = z(rng);
    const auto s = semivariances(r);
    EXPECT_LE(std::abs(s.rv - (s.rs_minus + s.rs_plus)), 1e-12 * std::max(s.rv, 1e-300));

    // sign flip swaps the halves exactly
    std::vector<double> neg(r);
    for (double& x : neg) x = -x;
    const auto f = semivariances(neg);
    EXPECT_EQ(f.rs_minus, s.rs_plus);
    EXPECT_EQ(f.rs_plus, s.rs_minus);
    EXPECT_EQ(f.rv, s.rv);

    // scaling by c multiplies by c^2
    const double c = scale(rng);
    std::vector<double> scaled(r);
    for (double& x : scaled) x *= c;
    const auto g = semivariances(scaled);
    EXPECT_NEAR(g.rv, c * c * s.rv, 1e-12 * c * c * s.rv);
    EXPECT_NEAR(g.rs_minus, c * c * s.rs_minus, 1e-12 * c * c * s.rv);
    EXPECT_NEAR(g.rs_plus, c * c * s.rs_plus, 1e-12 * c * c * s.rv);
  }
}

TEST(RealizedMeasures, PanelShapeAndValues) {
  IntradayPanel panel;
  panel.assets = {"A", "B"};
  panel.days = {Date{std::chrono::year{2020}, std::chrono::January, std::chrono::day{6}}};
  panel.bar_times = {{570}, {575}, {580}, {585}};
  // A: returns 0.01, -0.02, 0.03 ; B: constant
  panel.log_prices = {0.0, 0.01, -0.01, 0.02, 1.0, 1.0, 1.0, 1.0};
  panel.prices.resize(panel.log_prices.size(), 1.0);
  auto m = realized_measures(panel);
  EXPECT_EQ(m.rv.values.rows(), 1);
  EXPECT_EQ(m.rv.values.cols(), 2);
  EXPECT_NEAR(m.rv.values(0, 0), 0.0014, 1e-15);
  EXPECT_NEAR(m.rs_minus.values(0, 0), 0.0004, 1e-15);
  EXPECT_NEAR(m.rs_plus.values(0, 0), 0.0010, 1e-15);
  EXPECT_EQ(m.rv.values(0, 1), 0.0);
  EXPECT_EQ(m.rs_minus.kind, MeasureKind::rs_minus);
}

TEST(MeasureCsv, RoundTripsAtFullPrecision) {
  MeasurePanel p{MeasureKind::rv, {"A", "B"},
                 {Date{std::chrono::year{2020}, std::chrono::January, std::chrono::day{6}},
                  Date{std::chrono::year{2020}, std::chrono::January, std::chrono::day{7}}},
                 Eigen::MatrixXd(2, 2)};
  p.values << 0.1, 1.0 / 3.0, 2.0e-7, 12345.678901234567;
  std::stringstream ss;
  write_measure_csv(ss, p);
  EXPECT_EQ(ss.str().substr(0, 11), "date,A,B\n20");
  auto back = read_measure_csv(ss, MeasureKind::rv);
  EXPECT_EQ(back.assets, p.assets);
  EXPECT_EQ(back.dates, p.dates);
  EXPECT_EQ(back.values, p.values);
}

TEST(MeasureCsv, RejectsBadInput) {
  std::istringstream wrong_header("day,A\n2020-01-01,1\n");
  EXPECT_THROW(read_measure_csv(wrong_header, MeasureKind::rv), ParseError);
  std::istringstream ragged("date,A,B\n2020-01-01,1\n");
  EXPECT_THROW(read_measure_csv(ragged, MeasureKind::rv), ParseError);
  std::istringstream unordered("date,A\n2020-01-02,1\n2020-01-01,1\n");
  EXPECT_THROW(read_measure_csv(unordered, MeasureKind::rv), ParseError);
}

TEST(LogTransform, AddsEpsilon) {
  MeasurePanel p{MeasureKind::rv, {"A"}, {}, Eigen::MatrixXd(2, 1)};
  p.values << 0.0, 1.0;
  auto q = log_transform(p);
  EXPECT_DOUBLE_EQ(q.values(0, 0), std::log(1e-12));
  EXPECT_DOUBLE_EQ(q.values(1, 0), std::log(1.0 + 1e-12));
}
