#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>

#include "reference_values.hpp"
#include "zsinh/oracle.hpp"

using namespace zsinh;

namespace {

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]) / std::abs(b[i]));
  return e;
}

}  // namespace

TEST(TrapezoidOracle, GeometricCoefficient) {
  auto r = trapezoid_oracle(refs::geometric(2.0), 7, 1.0, 1e-17);
  EXPECT_NEAR(r.value, 0.00390625, 1e-17);
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.N_used, 2048);
}

TEST(TrapezoidOracle, KobolMoment) {
  auto r = trapezoid_oracle(kobol_mgf(0.1, 0.5, 1.01), 100);
  EXPECT_NEAR(r.value, refs::published::kobol_mu100, 1e-15);
  EXPECT_NEAR(r.value, refs::exact::kobol_mu100, 1e-16);
}

TEST(TrapezoidOracle, KobolOrderAboveOne) {
  auto r = trapezoid_oracle(kobol_mgf(0.1, 1.5, 1.01), 100);
  EXPECT_NEAR(r.value, refs::published::kobol15_mu100, 1e-15);
  EXPECT_NEAR(r.value, refs::exact::kobol15_mu100, 1e-16);
}

TEST(TrapezoidOracle, ReportsGapWhenNotConverged) {
  // a pole 1e-6 outside the circle cannot be resolved with 2^22 nodes
  auto r = trapezoid_oracle(refs::geometric(1.0 + 1e-6), 3, 1.0, 1e-17);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.stability_gap, 0.0);
  EXPECT_EQ(r.N_used, 1L << 22);
}

TEST(TrapezoidOracle, RadiusChoice) {
  AnalyticityDescriptor d;
  d.a_plus = 1.01;
  EXPECT_EQ(oracle_radius(d, 10), 1.0);
  d.a_plus = 0.9;
  EXPECT_NEAR(oracle_radius(d, 10), 0.9 * std::exp(-0.1), 1e-15);
}

TEST(BinomialSeries, LinearPolynomial) {
  auto h = binomial_series_h(3.0, 2.0, 1.0, 0.0, 6);
  EXPECT_EQ(h[0], 3.0);
  EXPECT_EQ(h[1], -1.0);
  for (int n = 2; n <= 6; ++n) EXPECT_EQ(h[n], 0.0);
}

TEST(BinomialSeries, GeometricSeries) {
  const double am = 1.5;
  auto h = binomial_series_h(2.0, am, 0.0, -1.0, 40);
  // the recurrence adds about one rounding per step
  for (int n = 0; n <= 40; ++n) EXPECT_NEAR(h[n] / (std::pow(-1.0 / am, n) / am), 1.0, (n + 1) * DBL_EPSILON) << n;
}

TEST(BinomialSeries, FractionalOrders) {
  // (4 - x)^{1/2} = 2 (1 - x/4)^{1/2}: second coefficient 2 * (-1/8) * (1/4)
  auto h = binomial_series_h(4.0, 3.0, 0.5, 0.0, 3);
  EXPECT_NEAR(h[0], 2.0, 1e-15);
  EXPECT_NEAR(h[1], -0.25, 1e-15);
  EXPECT_NEAR(h[2], 2.0 * (-1.0 / 8.0) / 16.0, 1e-15);
}

TEST(BinomialSeries, RejectsRadiiInsideCircle) { EXPECT_THROW(binomial_series_h(0.5, 2.0, 1, 1, 3), domain_error); }

TEST(ReferenceImpulseResponse, UnitTransferFunction) {
  auto h = reference_impulse_response([](cplx) { return cplx(1.0); }, 0, 5, 1.0, 16);
  EXPECT_NEAR(h[0], 1.0, 1e-15);
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(h[n], 0.0, 1e-15);
}

TEST(ReferenceImpulseResponse, AgreesWithBinomialSeriesOnCubicFilter) {
  auto r = rational_psd(1.0001, 1.00015, 3, -1);
  auto series = binomial_series_h(1.0001, 1.00015, 3, -1, 400);
  std::vector<double> ref(series.begin() + 100, series.end());
  auto trap = reference_impulse_response(r.H_plus, 100, 400, 1.0, 800001, 4);
  EXPECT_LE(max_rel(trap, ref), 1e-13);
}

TEST(ReferenceImpulseResponse, TenfoldFewerNodesLosesAccuracy) {
  auto r = rational_psd(1.0001, 1.00015, 3, -1);
  auto series = binomial_series_h(1.0001, 1.00015, 3, -1, 400);
  std::vector<double> ref(series.begin() + 100, series.end());
  auto coarse = reference_impulse_response(r.H_plus, 100, 400, 1.0, 80001, 4);
  double e = max_rel(coarse, ref);
  // published: 8.15e-6
  EXPECT_GT(e, 8.15e-6 / 3);
  EXPECT_LT(e, 8.15e-6 * 3);
}

TEST(ReferenceImpulseResponse, DoublingNodesStaysAtRoundingFloor) {
  auto r = rational_psd(1.0001, 1.00015, 3, -1);
  auto a = reference_impulse_response(r.H_plus, 100, 120, 1.0, 800001, 4);
  auto b = reference_impulse_response(r.H_plus, 100, 120, 1.0, 1600001, 4);
  double gap = max_rel(a, b);
  EXPECT_LT(gap, 1e-13);
}

TEST(TwoOracles, AgreeOnRationalFilters) {
  struct C {
    double ap, am, mp, mm;
  };
  for (C c : {C{1.0001, 1.00015, 3, -1}, C{1.0001, 1.00015, -1, -1}, C{1.05, 1.1, 2, 0.5}}) {
    auto r = rational_psd(c.ap, c.am, c.mp, c.mm);
    auto series = binomial_series_h(c.ap, c.am, c.mp, c.mm, 60);
    AnalyticFunction H;
    H.evaluator = r.H_plus;
    H.descriptor.a_plus = std::min(c.ap, c.am);
    // odd coefficients of the pole pair nearly cancel, so errors are measured
    // against the size of the sequence
    double scale = 0.0;
    for (double v : series) scale = std::max(scale, std::abs(v));
    for (int n : {10, 35, 60}) {
      auto o = trapezoid_oracle(H, n, 1.0, 1e-17);
      EXPECT_LE(std::abs(o.value - series[n]), 1e-12 * scale) << c.mp << " " << c.mm << " n=" << n;
    }
  }
}
