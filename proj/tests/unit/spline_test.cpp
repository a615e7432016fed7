#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "splinenet/spline/bspline.hpp"
#include "splinenet/spline/dual_functionals.hpp"
#include "splinenet/spline/knot_vector.hpp"
#include "splinenet/spline/quasi_interpolant.hpp"
#include "splinenet/spline/sobolev.hpp"

using namespace splinenet::spline;

namespace {

// Textbook Cox-de Boor recursion on the raw knot list, 0/0 := 0. At x == 1
// the last nonempty interval is treated as closed.
double naive_bspline(const std::vector<double>& t, int i, int k, double x) {
  if (k == 1) {
    const bool last = t[i + 1] == 1.0 && t[i] < 1.0;
    return (t[i] <= x && x < t[i + 1]) || (last && x == 1.0) ? 1.0 : 0.0;
  }
  double v = 0.0;
  if (t[i + k - 1] > t[i]) v += (x - t[i]) / (t[i + k - 1] - t[i]) * naive_bspline(t, i, k - 1, x);
  if (t[i + k] > t[i + 1]) v += (t[i + k] - x) / (t[i + k] - t[i + 1]) * naive_bspline(t, i + 1, k - 1, x);
  return v;
}

std::vector<double> knot_list(const KnotVector& kv) { return {kv.knots().begin(), kv.knots().end()}; }

// Gaussian elimination with partial pivoting; independent of the library's LU.
std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t j = r + 1; j < n; ++j) s -= a[r][j] * x[j];
    x[r] = s / a[r][r];
  }
  return x;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

TEST(Knots, SmallExamples) {
  const KnotVector a = make_knots(2, 2);
  EXPECT_EQ(knot_list(a), (std::vector<double>{0, 0, 0.5, 1, 1}));
  const KnotVector b = make_knots(1, 3);
  EXPECT_EQ(knot_list(b), (std::vector<double>{0, 0, 0, 1, 1, 1}));
  const KnotVector c = make_knots(4, 4);
  ASSERT_EQ(c.knots().size(), 11u);
  EXPECT_EQ(c[4], 0.25);
  EXPECT_EQ(c[5], 0.5);
  EXPECT_EQ(c[6], 0.75);
  EXPECT_EQ(c.basis_count(), 7);
}

TEST(Knots, Invariants) {
  for (int k = 2; k <= 6; ++k) {
    for (int n : {1, 3, 8, 17}) {
      const KnotVector kv(n, k);
      const auto t = knot_list(kv);
      ASSERT_EQ(static_cast<int>(t.size()), n + 2 * k - 1);
      for (int i = 0; i < k; ++i) {
        EXPECT_EQ(t[i], 0.0);
        EXPECT_EQ(t[t.size() - 1 - i], 1.0);
      }
      for (std::size_t i = 1; i < t.size(); ++i) EXPECT_LE(t[i - 1], t[i]);
      for (int j = 1; j < n; ++j) EXPECT_NEAR(t[k - 1 + j] - t[k - 2 + j], 1.0 / n, 1e-15);
    }
  }
}

TEST(Knots, RejectsBadArguments) {
  EXPECT_THROW(make_knots(0, 3), std::invalid_argument);
  EXPECT_THROW(make_knots(3, 1), std::invalid_argument);
  EXPECT_THROW((void)make_knots(4, 3).find_span(1.5), std::domain_error);
}

TEST(Knots, SpanAtRightEndIsLastInterval) {
  const KnotVector kv(4, 3);
  EXPECT_EQ(kv.find_span(1.0), kv.find_span(0.999));
  EXPECT_EQ(kv.find_span(0.0), kv.order() - 1);
}

TEST(Bspline, HatFunction) {
  const KnotVector kv(2, 2);
  EXPECT_DOUBLE_EQ(bspline_eval(kv, 1, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(bspline_eval(kv, 1, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(bspline_eval(kv, 0, 0.0), 1.0);
}

TEST(Bspline, MatchesNaiveRecursion) {
  std::mt19937_64 rng(11);
  for (int k = 2; k <= 6; ++k) {
    for (int n : {1, 4, 9}) {
      const KnotVector kv(n, k);
      const auto t = knot_list(kv);
      for (int s = 0; s < 200; ++s) {
        const double x = s == 0 ? 1.0 : uniform01(rng);
        for (int i = 0; i < kv.basis_count(); ++i) {
          EXPECT_NEAR(bspline_eval(kv, i, x), naive_bspline(t, i, k, x), 1e-13) << k << " " << n << " " << i;
        }
      }
    }
  }
}

TEST(Bspline, PartitionOfUnity) {
  std::mt19937_64 rng(3);
  for (int k = 2; k <= 6; ++k) {
    for (int n : {1, 7, 64}) {
      const KnotVector kv(n, k);
      for (int s = 0; s < 10000 / 15; ++s) {
        const double x = uniform01(rng);
        double sum = 0.0;
        for (int i = 0; i < kv.basis_count(); ++i) sum += bspline_eval(kv, i, x);
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
    }
  }
}

TEST(Bspline, ZeroOutsideSupport) {
  const KnotVector kv(8, 4);
  for (int i = 0; i < kv.basis_count(); ++i) {
    for (double x = 0.0; x <= 1.0; x += 1.0 / 64) {
      if (x < kv[i] || x > kv[i + 4]) EXPECT_EQ(bspline_eval(kv, i, x), 0.0);
    }
  }
}

TEST(Bspline, DerivativeOrderZeroIsValue) {
  const KnotVector kv(5, 4);
  for (int i = 0; i < kv.basis_count(); ++i) {
    for (double x : {0.0, 0.13, 0.5, 0.77, 1.0}) EXPECT_EQ(bspline_deriv(kv, i, x, 0), bspline_eval(kv, i, x));
  }
}

TEST(Bspline, DerivativesSumToZero) {
  const KnotVector kv(6, 5);
  for (double x : {0.01, 0.3, 0.5, 0.91}) {
    for (int s = 1; s < 5; ++s) {
      double sum = 0.0;
      for (int i = 0; i < kv.basis_count(); ++i) sum += bspline_deriv(kv, i, x, s);
      EXPECT_NEAR(sum, 0.0, 1e-9 * std::pow(12.0, s));
    }
  }
}

TEST(Bspline, DerivativeMatchesFiniteDifferences) {
  const KnotVector kv(7, 4);
  const auto t = knot_list(kv);
  const double h = 1e-6;
  for (int i = 0; i < kv.basis_count(); ++i) {
    for (double x : {0.05, 0.33, 0.61, 0.9}) {
      const double fd = (naive_bspline(t, i, 4, x + h) - naive_bspline(t, i, 4, x - h)) / (2 * h);
      EXPECT_NEAR(bspline_deriv(kv, i, x, 1), fd, 1e-6);
    }
  }
}

TEST(Bspline, FirstDerivativeBoundK4N8) {
  const KnotVector kv(8, 4);
  EXPECT_DOUBLE_EQ(bspline_derivative_bound(kv, 1), 48.0);
  double worst = 0.0;
  for (int g = 0; g <= 20000; ++g) {
    for (int i = 0; i < kv.basis_count(); ++i) worst = std::max(worst, std::abs(bspline_deriv(kv, i, g / 20000.0, 1)));
  }
  EXPECT_LE(worst, 48.0);
  EXPECT_GT(worst, 10.0);
}

TEST(Bspline, DerivativeBoundAllOrders) {
  for (int k = 2; k <= 6; ++k) {
    for (int n : {1, 4, 16}) {
      const KnotVector kv(n, k);
      for (int s = 0; s < k; ++s) {
        const double bound = bspline_derivative_bound(kv, s);
        for (int g = 0; g <= 2000; ++g) {
          for (int i = 0; i < kv.basis_count(); ++i) {
            EXPECT_LE(std::abs(bspline_deriv(kv, i, g / 2000.0, s)), bound * (1 + 1e-12));
          }
        }
      }
    }
  }
}

TEST(Bspline, Errors) {
  const KnotVector kv(4, 3);
  EXPECT_THROW(bspline_eval(kv, -1, 0.5), std::out_of_range);
  EXPECT_THROW(bspline_eval(kv, kv.basis_count(), 0.5), std::out_of_range);
  EXPECT_THROW(bspline_deriv(kv, 0, 0.5, 3), std::invalid_argument);
}

TEST(DualFunctionals, DualityMatrixIsIdentity) {
  for (int k = 2; k <= 6; ++k) {
    for (int n : {1, 2, 5, 16}) {
      const KnotVector kv(n, k);
      const auto duals = dual_functionals(kv);
      ASSERT_EQ(duals.size(), kv.basis_count());
      for (int i = 0; i < duals.size(); ++i) {
        for (int j = 0; j < kv.basis_count(); ++j) {
          const double v = duals[i].apply([&](double x) { return bspline_eval(kv, j, x); });
          EXPECT_NEAR(v, i == j ? 1.0 : 0.0, 1e-10) << "k=" << k << " N=" << n;
        }
      }
    }
  }
}

TEST(DualFunctionals, PointsInOneIntervalOfSupport) {
  for (int k = 2; k <= 6; ++k) {
    const KnotVector kv(9, k);
    const auto duals = dual_functionals(kv);
    for (int i = 0; i < duals.size(); ++i) {
      const auto& f = duals[i];
      ASSERT_EQ(static_cast<int>(f.points.size()), k);
      EXPECT_GE(f.interval, i);
      EXPECT_LT(f.interval, i + k);
      for (double p : f.points) {
        EXPECT_GT(p, kv[f.interval]);
        EXPECT_LT(p, kv[f.interval + 1]);
      }
    }
  }
}

TEST(DualFunctionals, WeightsMatchIndependentSolve) {
  for (int k = 2; k <= 5; ++k) {
    const KnotVector kv(6, k);
    const auto t = knot_list(kv);
    const auto duals = dual_functionals(kv);
    for (int i = 0; i < duals.size(); ++i) {
      const auto& f = duals[i];
      const int first = f.interval - k + 1;  // B_first..B_{first+k-1} live on the interval
      std::vector<std::vector<double>> a(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
      std::vector<double> rhs(static_cast<std::size_t>(k), 0.0);
      for (int m = 0; m < k; ++m) {
        for (int j = 0; j < k; ++j) a[m][j] = naive_bspline(t, first + m, k, f.points[j]);
        rhs[m] = first + m == i ? 1.0 : 0.0;
      }
      const auto w = solve(a, rhs);
      for (int j = 0; j < k; ++j) EXPECT_NEAR(f.weights[j], w[j], 1e-9 * (1 + std::abs(w[j])));
    }
  }
}

TEST(DualFunctionals, WeightSumUnderEnvelope) {
  for (int k = 2; k <= 6; ++k) {
    const KnotVector kv(12, k);
    const auto duals = dual_functionals(kv);
    for (int i = 0; i < duals.size(); ++i) {
      double s = 0.0;
      for (double w : duals[i].weights) s += std::abs(w);
      EXPECT_LE(s, dual_weight_bound(k));
    }
  }
  EXPECT_DOUBLE_EQ(dual_weight_bound(3), 7.0 * 81.0);
}

TEST(DualFunctionals, SupNormBoundOnRandomData) {
  std::mt19937_64 rng(5);
  const KnotVector kv(10, 4);
  const auto duals = dual_functionals(kv);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = 2 * uniform01(rng) - 1;
    const double b = 10 * uniform01(rng);
    const auto f = [&](double x) { return a * std::cos(b * x) + std::sin(3 * x); };
    double sup = 0.0;
    for (int g = 0; g <= 4000; ++g) sup = std::max(sup, std::abs(f(g / 4000.0)));
    for (int i = 0; i < duals.size(); ++i) EXPECT_LE(std::abs(duals[i].apply(f)), dual_weight_bound(4) * sup);
  }
}

TEST(QuasiInterpolant, ConstantGivesUnitCoefficients) {
  for (int d : {1, 2}) {
    const TensorSplineSpace space(d, 5, 4);
    const auto qi = quasi_interpolate(space, [](std::span<const double>) { return 1.0; });
    ASSERT_EQ(static_cast<long>(qi.coeffs.size()), space.total_basis());
    for (double c : qi.coeffs) EXPECT_NEAR(c, 1.0, 1e-12);
  }
}

TEST(QuasiInterpolant, BasisSplineGivesUnitVector) {
  const TensorSplineSpace space(1, 6, 4);
  const KnotVector& kv = space.axis(0);
  const auto qi = quasi_interpolate(space, [&](std::span<const double> x) { return bspline_eval(kv, 3, x[0]); });
  for (std::size_t i = 0; i < qi.coeffs.size(); ++i) EXPECT_NEAR(qi.coeffs[i], i == 3 ? 1.0 : 0.0, 1e-12);
}

TEST(QuasiInterpolant, ReproducesIdentityOnDenseGrid) {
  for (int k = 3; k <= 6; ++k) {
    const TensorSplineSpace space(1, 7, k);
    const auto qi = quasi_interpolate(space, [](std::span<const double> x) { return x[0]; });
    for (int g = 0; g < 1000; ++g) {
      const double x = g / 999.0;
      EXPECT_NEAR(spline_eval(qi, std::span<const double>(&x, 1)), x, 1e-10);
    }
  }
}

TEST(QuasiInterpolant, ReproducesMonomials) {
  for (int k = 2; k <= 5; ++k) {
    for (int d : {1, 2}) {
      const TensorSplineSpace space(d, 4, k);
      for (const auto& alpha : multi_indices(d, k - 1)) {
        bool ok = true;
        for (int a : alpha) ok = ok && a < k;
        if (!ok) continue;
        const auto mono = [&](std::span<const double> x) {
          double v = 1.0;
          for (int j = 0; j < d; ++j) v *= std::pow(x[j], alpha[j]);
          return v;
        };
        const auto qi = quasi_interpolate(space, mono);
        const int g = d == 1 ? 2000 : 120;
        std::vector<double> x(static_cast<std::size_t>(d));
        for (int a = 0; a <= g; ++a) {
          for (int b = 0; b <= (d == 2 ? g : 0); ++b) {
            x[0] = static_cast<double>(a) / g;
            if (d == 2) x[1] = static_cast<double>(b) / g;
            ASSERT_NEAR(spline_eval(qi, x), mono(x), 1e-9);
          }
        }
      }
    }
  }
}

TEST(QuasiInterpolant, SplineReproductionAtCoefficientLevel) {
  std::mt19937_64 rng(17);
  for (int d : {1, 2}) {
    const TensorSplineSpace space(d, 5, 4);
    QuasiInterpolant s{space, std::vector<double>(static_cast<std::size_t>(space.total_basis()))};
    for (double& c : s.coeffs) c = 2 * uniform01(rng) - 1;
    const auto again = quasi_interpolate(space, [&](std::span<const double> x) { return spline_eval(s, x); });
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) EXPECT_NEAR(again.coeffs[i], s.coeffs[i], 1e-11);
  }
}

TEST(QuasiInterpolant, CubicDerivative) {
  const TensorSplineSpace space(1, 8, 4);
  const auto qi = quasi_interpolate(space, [](std::span<const double> x) { return x[0] * x[0] * x[0]; });
  const int one = 1;
  for (int g = 0; g <= 500; ++g) {
    const double x = g / 500.0;
    EXPECT_NEAR(spline_eval(qi, std::span<const double>(&x, 1), std::span<const int>(&one, 1)), 3 * x * x, 1e-9);
  }
}

TEST(QuasiInterpolant, SeparableMixedPartialFactorizes) {
  const TensorSplineSpace space2(2, 6, 4);
  const TensorSplineSpace space1(1, 6, 4);
  const auto g = [](double x) { return std::sin(2 * x) + x; };
  const auto h = [](double y) { return std::exp(y); };
  const auto qi2 = quasi_interpolate(space2, [&](std::span<const double> x) { return g(x[0]) * h(x[1]); });
  const auto qg = quasi_interpolate(space1, [&](std::span<const double> x) { return g(x[0]); });
  const auto qh = quasi_interpolate(space1, [&](std::span<const double> x) { return h(x[0]); });
  const std::vector<int> mixed{1, 2};
  const int a1 = 1;
  const int a2 = 2;
  for (double x : {0.1, 0.45, 0.8}) {
    for (double y : {0.0, 0.3, 1.0}) {
      const std::vector<double> p{x, y};
      const double lhs = spline_eval(qi2, p, mixed);
      const double rhs = spline_eval(qg, std::span<const double>(&x, 1), std::span<const int>(&a1, 1)) *
                         spline_eval(qh, std::span<const double>(&y, 1), std::span<const int>(&a2, 1));
      EXPECT_NEAR(lhs, rhs, 1e-8 * (1 + std::abs(rhs)));
    }
  }
}

TEST(QuasiInterpolant, Errors) {
  const TensorSplineSpace space(1, 4, 3);
  EXPECT_THROW(quasi_interpolate(space, [](std::span<const double>) { return std::nan(""); }), std::domain_error);
  const auto qi = quasi_interpolate(space, [](std::span<const double> x) { return x[0]; });
  const double x = 0.5;
  const int bad = 3;
  EXPECT_THROW(spline_eval(qi, std::span<const double>(&x, 1), std::span<const int>(&bad, 1)), std::invalid_argument);
  EXPECT_THROW(TensorSplineSpace(0, 4, 3), std::invalid_argument);
}

TEST(QuasiInterpolant, FlatIndexRoundTrip) {
  const TensorSplineSpace space(3, 3, 3);
  for (long f = 0; f < space.total_basis(); ++f) EXPECT_EQ(space.flat_index(space.unflatten(f)), f);
  const std::vector<int> idx{1, 0, 2};
  EXPECT_EQ(space.flat_index(idx), (1 * 5 + 0) * 5 + 2);
}

TEST(Sobolev, MultiIndicesGraded) {
  const auto m = multi_indices(2, 2);
  ASSERT_EQ(m.size(), 6u);
  EXPECT_EQ(m[0], (std::vector<int>{0, 0}));
  for (std::size_t i = 1; i < m.size(); ++i) EXPECT_LE(m[i - 1][0] + m[i - 1][1], m[i][0] + m[i][1]);
}

TEST(Sobolev, GeneratingSplineHasZeroError) {
  std::mt19937_64 rng(23);
  const TensorSplineSpace space(1, 6, 4);
  QuasiInterpolant s{space, std::vector<double>(static_cast<std::size_t>(space.total_basis()))};
  for (double& c : s.coeffs) c = 2 * uniform01(rng) - 1;
  const auto qi = quasi_interpolate(space, [&](std::span<const double> x) { return spline_eval(s, x); });
  const DerivativeField f = [&](std::span<const double> x, std::span<const int> a) { return spline_eval(s, x, a); };
  for (int sdeg = 0; sdeg <= 2; ++sdeg) EXPECT_LE(sobolev_error(f, qi, sdeg, kInfinityNorm, 512), 1e-12 * std::pow(50, sdeg));
}

TEST(Sobolev, SupNormIsGridMax) {
  const TensorSplineSpace space(1, 4, 4);
  const auto f = [](double x) { return std::sin(2 * std::numbers::pi * x); };
  const auto qi = quasi_interpolate(space, [&](std::span<const double> x) { return f(x[0]); });
  const DerivativeField df = [&](std::span<const double> x, std::span<const int>) { return f(x[0]); };
  double worst = 0.0;
  for (int g = 0; g < 300; ++g) {
    const double x = g / 299.0;
    worst = std::max(worst, std::abs(f(x) - spline_eval(qi, std::span<const double>(&x, 1))));
  }
  EXPECT_DOUBLE_EQ(sobolev_error(df, qi, 0, kInfinityNorm, 300), worst);
}

TEST(Sobolev, FiniteTwoNormOfConstantGap) {
  // f - Jf = 0 for f = 1; f + 0.5 compared against J1 leaves 0.5 everywhere.
  const TensorSplineSpace space(2, 3, 3);
  const auto qi = quasi_interpolate(space, [](std::span<const double>) { return 1.0; });
  const DerivativeField f = [](std::span<const double>, std::span<const int> a) {
    return (a.empty() || (a[0] == 0 && a[1] == 0)) ? 1.5 : 0.0;
  };
  EXPECT_NEAR(sobolev_error(f, qi, 1, 2.0, 64), 0.5, 1e-12);
}

namespace {

double sin_rate(int n, int s, double (*f)(double, int)) {
  const TensorSplineSpace space(1, n, 4);
  const auto qi = quasi_interpolate(space, [&](std::span<const double> x) { return f(x[0], 0); });
  const DerivativeField df = [&](std::span<const double> x, std::span<const int> a) {
    return f(x[0], a.empty() ? 0 : a[0]);
  };
  return sobolev_error(df, qi, s, kInfinityNorm);
}

double sin2pi(double x, int a) {
  const double w = 2 * std::numbers::pi;
  return std::pow(w, a) * std::sin(w * x + a * std::numbers::pi / 2);
}

double expx(double x, int) { return std::exp(x); }

}  // namespace

TEST(Sobolev, SinRatioApproachesTheoreticalRate) {
  // The derivative of an odd-symmetric target superconverges on the uniform
  // grid, so the ratio is held to the theoretical order from below.
  for (int s = 0; s <= 2; ++s) {
    const double r = std::log2(sin_rate(16, s, sin2pi) / sin_rate(32, s, sin2pi));
    EXPECT_GE(r, 4 - s - 0.5) << "s=" << s;
  }
  const double r0 = std::log2(sin_rate(32, 0, sin2pi) / sin_rate(64, 0, sin2pi));
  const double r2 = std::log2(sin_rate(32, 2, sin2pi) / sin_rate(64, 2, sin2pi));
  EXPECT_NEAR(r0, 4.0, 0.5);
  EXPECT_NEAR(r2, 2.0, 0.5);
}

TEST(Sobolev, RateForAnalyticTarget) {
  for (int n : {8, 16, 32}) {
    for (int s = 0; s <= 2; ++s) {
      const double r = std::log2(sin_rate(n, s, expx) / sin_rate(2 * n, s, expx));
      EXPECT_GE(r, 4 - s - 0.5) << "N=" << n << " s=" << s;
      EXPECT_LE(r, 4 - s + 0.5) << "N=" << n << " s=" << s;
    }
  }
}

TEST(Sobolev, Errors) {
  const TensorSplineSpace space(1, 4, 3);
  const auto qi = quasi_interpolate(space, [](std::span<const double> x) { return x[0]; });
  const DerivativeField f = [](std::span<const double> x, std::span<const int>) { return x[0]; };
  EXPECT_THROW(sobolev_error(f, qi, 3, kInfinityNorm, 10), std::invalid_argument);
  EXPECT_THROW(sobolev_error(f, qi, 0, kInfinityNorm, 1), std::invalid_argument);
  EXPECT_THROW(sobolev_error(f, qi, 0, 0.5, 10), std::invalid_argument);
}
