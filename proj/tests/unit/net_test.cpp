#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "splinenet/net/compose.hpp"
#include "splinenet/net/network.hpp"
#include "splinenet/net/power_decomposition.hpp"
#include "splinenet/net/subnets.hpp"

using namespace splinenet::net;

namespace {

double eval1(const Network& net, double x) { return net_eval(net, std::span<const double>(&x, 1))[0]; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Network random_net(std::mt19937_64& rng, int in, const std::vector<int>& widths, int t) {
  Network net;
  net.input_dim = in;
  int prev = in;
  for (int w : widths) {
    Eigen::MatrixXd a(w, prev);
    for (double& v : a.reshaped()) v = uniform(rng, -1, 1);
    Eigen::VectorXd b(w);
    for (double& v : b) v = uniform(rng, -0.5, 0.5);
    net = net.depth() == 0 && net.out_weights.size() == 0 ? activation_net(a, b, t)
                                                           : compose(net, activation_net(a, b, t));
    prev = w;
  }
  Eigen::MatrixXd o(1, prev);
  for (double& v : o.reshaped()) v = uniform(rng, -1, 1);
  return compose(net, affine_net(o, Eigen::VectorXd::Constant(1, 0.2)));
}

}  // namespace

TEST(Network, AffineOnly) {
  const Eigen::MatrixXd a{{1.0, -2.0}, {0.5, 3.0}};
  const Eigen::VectorXd c{{0.25, -1.0}};
  const Network net = affine_net(a, c);
  EXPECT_EQ(net.depth(), 0);
  const std::vector<double> x{0.3, -0.7};
  const Eigen::VectorXd y = net_eval(net, x);
  EXPECT_DOUBLE_EQ(y[0], 0.3 + 1.4 + 0.25);
  EXPECT_DOUBLE_EQ(y[1], 0.15 - 2.1 - 1.0);
}

TEST(Network, DimensionMismatchThrows) {
  const Network net = build_square_net(3);
  const std::vector<double> x{0.1, 0.2};
  EXPECT_THROW(net_eval(net, x), std::invalid_argument);
}

TEST(Network, NonzeroCountIsExact) {
  Eigen::MatrixXd a{{1.0, 0.0}, {0.0, 2.0}};
  const Network net = activation_net(a, Eigen::VectorXd::Zero(2), 2);
  // Two weights; output layer is the 2x2 identity.
  EXPECT_EQ(net.nonzero_count(), 4);
}

TEST(Network, ValidateRejectsBoundAndBudget) {
  Network net = build_square_net(4);
  net.weight_bound = 1e-3;
  EXPECT_THROW(net.validate(), std::logic_error);
  net.weight_bound = std::numeric_limits<double>::infinity();
  net.parameter_budget = 1;
  EXPECT_THROW(net.validate(), std::logic_error);
}

TEST(Network, ReluPower) {
  EXPECT_EQ(relu_power(-1.0, 3), 0.0);
  EXPECT_EQ(relu_power(2.0, 3), 8.0);
  EXPECT_EQ(relu_power(0.5, 1), 0.5);
}

TEST(Network, BatchMatchesSinglePoint) {
  std::mt19937_64 rng(9);
  const Network net = random_net(rng, 2, {5, 4}, 2);
  Eigen::MatrixXd xs(2, 20);
  for (double& v : xs.reshaped()) v = uniform(rng, -1, 1);
  const Eigen::MatrixXd ys = net_eval_batch(net, xs);
  for (int c = 0; c < xs.cols(); ++c) {
    const std::vector<double> x{xs(0, c), xs(1, c)};
    EXPECT_NEAR(ys(0, c), net_eval(net, x)[0], 1e-14);
  }
}

TEST(PowerDecomposition, SquareInCubes) {
  const auto pd = power_decomposition(2, 3);
  for (double x : {0.0, 0.3, 0.9}) EXPECT_LE(std::abs(pd.evaluate(x) - x * x), 1e-12);
}

TEST(PowerDecomposition, ConstantTermVanishes) {
  for (int k = 2; k <= 7; ++k) {
    for (int l = 1; l < k; ++l) {
      const auto pd = power_decomposition(l, k);
      double s = 0.0;
      for (int i = 0; i <= k; ++i) s += pd.coeffs[i] * std::pow(pd.nodes[i], k);
      EXPECT_NEAR(s, 0.0, 1e-10) << l << " " << k;
    }
  }
}

TEST(PowerDecomposition, CoefficientsUnderBoundAndExact) {
  std::mt19937_64 rng(4);
  for (int k = 2; k <= 7; ++k) {
    for (int l = 1; l < k; ++l) {
      for (double center : {0.0, 0.5, -0.25}) {
        const auto pd = power_decomposition(l, k, center);
        ASSERT_EQ(static_cast<int>(pd.nodes.size()), k + 1);
        EXPECT_NEAR(pd.nodes.back() - pd.nodes.front(), 2.0, 1e-15);
        for (double a : pd.coeffs) EXPECT_LE(std::abs(a), pd.bound);
        for (int s = 0; s < 50; ++s) {
          const double x = uniform(rng, 0, 3);
          const double want = std::pow(x, l);
          EXPECT_NEAR(pd.evaluate(x), want, 1e-10 * std::max(1.0, want));
        }
      }
    }
  }
}

TEST(PowerDecomposition, BoundFormula) {
  // k = 3, l = 1, M = 1: 4 * 27 * C(3,2) / (8 * (2!)^2 * C(3,1)) = 324 / 96.
  EXPECT_NEAR(power_decomposition_bound(1, 3, 1.0), 324.0 / 96.0, 1e-14);
  EXPECT_NEAR(power_decomposition_bound(1, 3, 2.0), 324.0 / 96.0 * 16.0, 1e-12);
  EXPECT_THROW(power_decomposition(3, 3), std::invalid_argument);
  EXPECT_THROW(power_decomposition(0, 3), std::invalid_argument);
}

TEST(PowerDecomposition, PolyNet) {
  const std::vector<double> poly{0.5, -1.0, 2.0, 0.25};
  const Network net = poly_net(poly, 3);
  for (int g = 0; g <= 100; ++g) {
    const double x = -1.0 + g / 50.0;
    EXPECT_NEAR(eval1(net, x), 0.5 - x + 2 * x * x + 0.25 * x * x * x, 1e-11);
  }
}

TEST(Subnets, SquareExamples) {
  for (int k = 3; k <= 6; ++k) {
    const Network sq = build_square_net(k);
    EXPECT_EQ(sq.depth(), 1);
    EXPECT_EQ(*sq.exponent_set().begin(), k - 1);
    EXPECT_NEAR(eval1(sq, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(eval1(sq, 0.5), 0.25, 1e-12);
    EXPECT_NEAR(eval1(sq, -0.3), 0.09, 1e-12);
  }
}

TEST(Subnets, IdentityExamples) {
  for (int k = 3; k <= 6; ++k) {
    const Network id = build_identity_net(k);
    EXPECT_NEAR(eval1(id, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(eval1(id, 1.0), 1.0, 1e-12);
    EXPECT_NEAR(eval1(id, -0.7), -0.7, 1e-12);
  }
}

TEST(Subnets, IdentityTwiceIsIdentity) {
  const Network id = build_identity_net(4);
  const Network twice = compose(id, id);
  EXPECT_EQ(twice.depth(), 2);
  for (int g = 0; g <= 200; ++g) {
    const double x = -1.0 + g / 100.0;
    EXPECT_NEAR(eval1(twice, x), x, 1e-12);
  }
}

TEST(Subnets, ExactOnDenseGrid) {
  for (int k = 3; k <= 6; ++k) {
    const Network sq = build_square_net(k);
    const Network id = build_identity_net(k);
    for (int g = 0; g <= 2000; ++g) {
      const double x = -1.0 + g / 1000.0;
      EXPECT_LE(std::abs(eval1(sq, x) - x * x), 1e-10);
      EXPECT_LE(std::abs(eval1(id, x) - x), 1e-10);
    }
  }
}

TEST(Subnets, RejectLowOrder) {
  EXPECT_THROW(build_square_net(2), std::invalid_argument);
  EXPECT_THROW(build_identity_net(2), std::invalid_argument);
  EXPECT_THROW(build_mult_net(1, 4), std::invalid_argument);
}

TEST(Subnets, MultExamples) {
  const Network m2 = build_mult_net(2, 4);
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(net_eval(m2, half)[0], 0.25, 1e-12);
  const Network m3 = build_mult_net(3, 4);
  const std::vector<double> ones{1, 1, 1};
  EXPECT_NEAR(net_eval(m3, ones)[0], 1.0, 1e-12);
  EXPECT_EQ(m3.depth(), 2);
}

TEST(Subnets, MultRandomPoints) {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 8; ++n) {
    for (int k : {3, 4, 5}) {
      const Network m = build_mult_net(n, k);
      EXPECT_EQ(m.depth(), static_cast<int>(std::ceil(std::log2(n))));
      std::vector<double> x(static_cast<std::size_t>(n));
      for (int s = 0; s < 100; ++s) {
        double prod = 1.0;
        for (double& v : x) {
          v = uniform(rng, -1, 1);
          prod *= v;
        }
        EXPECT_NEAR(net_eval(m, x)[0], prod, 1e-10) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(Subnets, Mult2OnWiderIntervals) {
  const Network m = build_mult2_net(4, Interval{-3, 3}, Interval{-2, 5});
  for (double x : {-3.0, -1.2, 0.0, 2.9}) {
    for (double y : {-2.0, 0.4, 5.0}) {
      const std::vector<double> p{x, y};
      EXPECT_NEAR(net_eval(m, p)[0], x * y, 1e-10 * std::max(1.0, std::abs(x * y)));
    }
  }
}

TEST(Subnets, ConstantBank) {
  const Network c = constant_bank_net(2, 5, 3);
  const std::vector<double> x{0.3, -0.9};
  EXPECT_DOUBLE_EQ(net_eval(c, x)[0], 5.0);
}

TEST(Compose, ParallelStackChannelwise) {
  const Network sq = build_square_net(3);
  const Network id = build_identity_net(3);
  const Network par = parallel({sq, id});
  EXPECT_EQ(par.output_dim(), 2);
  const Eigen::VectorXd y = net_eval(par, std::vector<double>{0.4});
  EXPECT_NEAR(y[0], 0.16, 1e-12);
  EXPECT_NEAR(y[1], 0.4, 1e-12);

  const Network st = stack({sq, id});
  const Eigen::VectorXd z = net_eval(st, std::vector<double>{0.4, -0.6});
  EXPECT_NEAR(z[0], 0.16, 1e-12);
  EXPECT_NEAR(z[1], -0.6, 1e-12);

  const Network cw = channelwise(sq, 3);
  const Eigen::VectorXd w = net_eval(cw, std::vector<double>{0.1, -0.2, 0.3});
  EXPECT_NEAR(w[0], 0.01, 1e-12);
  EXPECT_NEAR(w[1], 0.04, 1e-12);
  EXPECT_NEAR(w[2], 0.09, 1e-12);

  EXPECT_THROW(parallel({sq, compose(id, id)}), std::invalid_argument);
}

TEST(Compose, SelectAndCompose) {
  const Network sel = select_net(3, {2, 0});
  const Network m = compose(sel, build_mult_net(2, 3));
  EXPECT_NEAR(net_eval(m, std::vector<double>{0.5, 9.0, -0.4})[0], -0.2, 1e-12);
}

TEST(Compose, ReplicationKeepsFunction) {
  std::mt19937_64 rng(31);
  const Network big = compose(build_square_net(4), affine_net(Eigen::MatrixXd::Constant(1, 1, 7.5),
                                                              Eigen::VectorXd::Constant(1, 0.0)));
  const Network rep = replicate_for_bound(big);
  double worst_out = 0.0;
  for (Eigen::Index r = 0; r < rep.out_weights.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(rep.out_weights, r); it; ++it) worst_out = std::max(worst_out, std::abs(it.value()));
  }
  EXPECT_LE(worst_out, 1.0);
  for (int s = 0; s < 50; ++s) {
    const double x = uniform(rng, -1, 1);
    EXPECT_NEAR(eval1(rep, x), eval1(big, x), 1e-12);
  }
}

TEST(Compose, RemoveDeadUnits) {
  Eigen::MatrixXd a{{1.0}, {-1.0}, {2.0}};
  Network net = compose(activation_net(a, Eigen::VectorXd::Zero(3), 2),
                        affine_net(Eigen::MatrixXd{{1.0, 0.0, 0.5}}, Eigen::VectorXd::Zero(1)));
  const Network slim = remove_dead_units(net);
  EXPECT_EQ(slim.widths(), std::vector<int>{2});
  for (double x : {-0.5, 0.2, 0.9}) EXPECT_DOUBLE_EQ(eval1(slim, x), eval1(net, x));
}
