#include "splinenet/net/spline_net.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "splinenet/net/compose.hpp"
#include "splinenet/net/power_decomposition.hpp"
#include "splinenet/net/subnets.hpp"
#include "splinenet/spline/bspline.hpp"

namespace splinenet::net {

using spline::KnotVector;

namespace {

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_order(int k, const char* who) {
  if (k < 3) throw std::invalid_argument(std::string(who) + ": need k >= 3, got k = " + std::to_string(k));
}

void require_envelope(int k, int n, int d, const char* who) {
  if (k > BoundedEnvelope::max_order || n > BoundedEnvelope::max_interior || d > BoundedEnvelope::max_dim) {
    throw std::invalid_argument(std::string(who) + ": bounded mode supports k <= 5, N <= 32, d <= 2; got k = " +
                                std::to_string(k) + ", N = " + std::to_string(n) + ", d = " + std::to_string(d));
  }
}

// One hidden layer whose outputs are B_i(x) / scale, i = 0..N+k-2.
Network basis_layer(const KnotVector& kv, double scale) {
  const int k = kv.order();
  const int deg = k - 1;
  const int n_interior = kv.interior_count();
  const int count = kv.basis_count();

  std::vector<TruncatedPowerForm> forms;
  forms.reserve(static_cast<std::size_t>(count));
  bool need_one = false;
  std::vector<bool> need_power(static_cast<std::size_t>(deg), false);
  for (int i = 0; i < count; ++i) {
    forms.push_back(spline_regime(kv, i) == SplineRegime::interior ? interior_truncated_power_form(kv, i)
                                                                    : truncated_power_form(kv, i));
    const auto& poly = forms.back().poly;
    need_one = need_one || poly[0] != 0.0;
    for (int m = 1; m < deg; ++m) need_power[static_cast<std::size_t>(m)] = need_power[static_cast<std::size_t>(m)] || poly[static_cast<std::size_t>(m)] != 0.0;
  }

  // Units: (slope, bias); output columns filled per spline below.
  std::vector<std::array<double, 2>> units;
  std::vector<std::vector<std::pair<int, double>>> columns(static_cast<std::size_t>(count));

  if (need_one) {
    const int u = static_cast<int>(units.size());
    units.push_back({0.0, 1.0});
    for (int i = 0; i < count; ++i) columns[static_cast<std::size_t>(i)].emplace_back(u, forms[static_cast<std::size_t>(i)].poly[0]);
  }

  bool any_power = false;
  for (int m = 1; m < deg; ++m) any_power = any_power || need_power[static_cast<std::size_t>(m)];
  if (any_power) {
    std::vector<PowerDecomposition> pds;
    for (int m = 1; m < deg; ++m) pds.push_back(power_decomposition(m, deg));
    const std::vector<double>& nodes = pds.front().nodes;
    const double sign = deg % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      // On [0,1]: (x+b)_+ vanishes iff b <= -1, (-x-b)_+ vanishes iff b >= 0.
      const bool plus = 1.0 + nodes[b] > 0.0;
      const bool minus = nodes[b] < 0.0;
      const int u_plus = plus ? static_cast<int>(units.size()) : -1;
      if (plus) units.push_back({1.0, nodes[b]});
      const int u_minus = minus ? static_cast<int>(units.size()) : -1;
      if (minus) units.push_back({-1.0, -nodes[b]});
      for (int i = 0; i < count; ++i) {
        double w = 0.0;
        for (int m = 1; m < deg; ++m) {
          w += forms[static_cast<std::size_t>(i)].poly[static_cast<std::size_t>(m)] *
               pds[static_cast<std::size_t>(m - 1)].coeffs[b];
        }
        if (w == 0.0) continue;
        if (plus) columns[static_cast<std::size_t>(i)].emplace_back(u_plus, w);
        if (minus) columns[static_cast<std::size_t>(i)].emplace_back(u_minus, sign * w);
      }
    }
  }

  const int first_knot = static_cast<int>(units.size());
  for (int j = 0; j < n_interior; ++j) units.push_back({1.0, -static_cast<double>(j) / n_interior});
  for (int i = 0; i < count; ++i) {
    const auto& kw = forms[static_cast<std::size_t>(i)].knot_weights;
    for (int j = 0; j < n_interior; ++j) {
      if (kw[static_cast<std::size_t>(j)] != 0.0) columns[static_cast<std::size_t>(i)].emplace_back(first_knot + j, kw[static_cast<std::size_t>(j)]);
    }
  }

  const auto nu = static_cast<Eigen::Index>(units.size());
  Eigen::MatrixXd a(nu, 1);
  Eigen::VectorXd c(nu);
  for (Eigen::Index u = 0; u < nu; ++u) {
    a(u, 0) = units[static_cast<std::size_t>(u)][0];
    c(u) = units[static_cast<std::size_t>(u)][1];
  }
  Network net = activation_net(a, c, deg);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < count; ++i) {
    for (const auto& [u, w] : columns[static_cast<std::size_t>(i)]) t.emplace_back(i, u, w / scale);
  }
  SparseMatrix ow(count, nu);
  ow.setFromTriplets(t.begin(), t.end());
  net.out_weights = ow;
  net.out_biases = Eigen::VectorXd::Zero(count);
  net.prune_zeros();
  return net;
}

// Multiplies each of m channels by the constant carried in input channel m.
Network restore_stage(const std::vector<Interval>& domains, int k, bool emit_bank) {
  const int m = static_cast<int>(domains.size());
  const double c = kRestoreFactor;
  std::vector<Network> parts;
  parts.reserve(static_cast<std::size_t>(m + 1));
  for (int i = 0; i < m; ++i) {
    parts.push_back(compose(select_net(m + 1, {i, m}), build_mult2_net(k, domains[static_cast<std::size_t>(i)], {c, c})));
  }
  if (emit_bank) parts.push_back(constant_bank_net(m + 1, kRestoreFactor, k - 1));
  return parallel(parts);
}

// Outer products of consecutive channel groups; values lie in [0, 1].
// Input layout: groups back to back, then the bank channel if has_bank.
Network product_stage(const std::vector<int>& groups, int k, bool has_bank, bool emit_bank,
                      std::vector<int>& next_groups) {
  int in_dim = 0;
  for (int g : groups) in_dim += g;
  if (has_bank) ++in_dim;

  const Network mult2 = build_mult2_net(k, {0.0, 1.0}, {0.0, 1.0});
  const Network ident = build_identity_net(k, {0.0, 1.0});
  std::vector<Network> parts;
  next_groups.clear();
  int offset = 0;
  std::size_t g = 0;
  for (; g + 1 < groups.size(); g += 2) {
    const int a0 = offset;
    const int b0 = offset + groups[g];
    for (int i = 0; i < groups[g]; ++i) {
      for (int j = 0; j < groups[g + 1]; ++j) parts.push_back(compose(select_net(in_dim, {a0 + i, b0 + j}), mult2));
    }
    next_groups.push_back(groups[g] * groups[g + 1]);
    offset += groups[g] + groups[g + 1];
  }
  if (g < groups.size()) {
    for (int i = 0; i < groups[g]; ++i) parts.push_back(compose(select_net(in_dim, {offset + i}), ident));
    next_groups.push_back(groups[g]);
  }
  if (emit_bank) {
    if (!has_bank) throw std::logic_error("product_stage: bank requested without a bank input");
    parts.push_back(constant_bank_net(in_dim, kRestoreFactor, k - 1));
  }
  return parallel(parts);
}

// Basis outputs for every axis of a d-dimensional input, scaled by 1/scale,
// followed by the bank channel when bank > 0.
Network axis_bases(const KnotVector& kv, int d, double scale, int bank) {
  const Network layer = basis_layer(kv, scale);
  std::vector<Network> parts;
  for (int a = 0; a < d; ++a) parts.push_back(compose(select_net(d, {a}), layer));
  if (bank > 0) parts.push_back(constant_bank_net(d, bank, kv.order() - 1));
  return parallel(parts);
}

// Multiplies channels by 4^stages. After the last stage each channel lies in
// [0, top], or [-top, top] if is_signed.
Network restore_all(Network net, int channels, int k, int stages, bool keep_bank_after, double top,
                    bool is_signed) {
  const double scale = std::pow(static_cast<double>(kRestoreFactor), stages);
  for (int s = 1; s <= stages; ++s) {
    const double hi = top * std::pow(static_cast<double>(kRestoreFactor), s - 1) / scale;
    const std::vector<Interval> domains(static_cast<std::size_t>(channels), Interval{is_signed ? -hi : 0.0, hi});
    net = compose(net, restore_stage(domains, k, s < stages || keep_bank_after));
  }
  return net;
}

Network finalize_bounded(Network net) {
  net = replicate_for_bound(remove_dead_units(net));
  net.prune_zeros();
  if (net.max_abs_parameter() > 1.0) {
    throw std::logic_error("bounded build left a parameter of magnitude " + std::to_string(net.max_abs_parameter()));
  }
  net.weight_bound = 1.0;
  net.parameter_budget = net.nonzero_count();
  net.validate();
  return net;
}

}  // namespace

std::string to_string(BuildMode mode) { return mode == BuildMode::plain ? "plain" : "bounded"; }

BuildMode parse_build_mode(const std::string& text) {
  if (text == "plain") return BuildMode::plain;
  if (text == "bounded") return BuildMode::bounded;
  throw std::invalid_argument("unknown build mode '" + text + "' (expected plain or bounded)");
}

SplineRegime spline_regime(const KnotVector& kv, int i) {
  if (i < 0 || i >= kv.basis_count()) throw std::out_of_range("spline_regime: index out of range");
  if (i < kv.degree()) return SplineRegime::left;
  if (i > kv.interior_count() - 1) return SplineRegime::right;
  return SplineRegime::interior;
}

TruncatedPowerForm truncated_power_form(const KnotVector& kv, int i) {
  const int deg = kv.degree();
  const int n = kv.interior_count();
  TruncatedPowerForm form;
  form.poly.assign(static_cast<std::size_t>(deg), 0.0);
  form.knot_weights.assign(static_cast<std::size_t>(n), 0.0);
  double fact = 1.0;
  for (int m = 0; m < deg; ++m) {
    if (m > 0) fact *= m;
    form.poly[static_cast<std::size_t>(m)] = spline::bspline_deriv(kv, i, 0.0, m) / fact;
  }
  const double kfact = factorial(deg);
  double prev = spline::bspline_deriv(kv, i, 0.5 / n, deg);
  form.knot_weights[0] = prev / kfact;
  for (int j = 1; j < n; ++j) {
    const double cur = spline::bspline_deriv(kv, i, (j + 0.5) / n, deg);
    form.knot_weights[static_cast<std::size_t>(j)] = (cur - prev) / kfact;
    prev = cur;
  }
  return form;
}

TruncatedPowerForm interior_truncated_power_form(const KnotVector& kv, int i) {
  if (spline_regime(kv, i) != SplineRegime::interior) {
    throw std::invalid_argument("interior_truncated_power_form: B_" + std::to_string(i) + " is not interior");
  }
  const int k = kv.order();
  const int deg = k - 1;
  const int n = kv.interior_count();
  TruncatedPowerForm form;
  form.poly.assign(static_cast<std::size_t>(deg), 0.0);
  form.knot_weights.assign(static_cast<std::size_t>(n), 0.0);
  const double lead = std::pow(static_cast<double>(n), deg) / factorial(deg);
  const int first = i - deg;  // t_i = first / N
  for (int j = 0; j <= k; ++j) {
    const int knot = first + j;
    if (knot >= n) continue;
    form.knot_weights[static_cast<std::size_t>(knot)] = lead * ((j % 2 == 0) ? 1.0 : -1.0) * binomial(k, j);
  }
  return form;
}

int axis_restoration_stages(int k) {
  require_order(k, "axis_restoration_stages");
  // Largest outgoing basis weight anywhere in the envelope is attained at N = 32.
  const Network layer = basis_layer(KnotVector(BoundedEnvelope::max_interior, k), 1.0);
  double w = 0.0;
  for (int o = 0; o < layer.out_weights.outerSize(); ++o) {
    for (SparseMatrix::InnerIterator it(layer.out_weights, o); it; ++it) w = std::max(w, std::abs(it.value()));
  }
  int q = 0;
  while (std::pow(static_cast<double>(kRestoreFactor), q) < w) ++q;
  return q;
}

Network build_spline_basis_net(const KnotVector& kv, BuildMode mode) {
  const int k = kv.order();
  require_order(k, "build_spline_basis_net");
  if (mode == BuildMode::plain) return basis_layer(kv, 1.0);
  require_envelope(k, kv.interior_count(), 1, "build_spline_basis_net");
  const int q = axis_restoration_stages(k);
  Network net = axis_bases(kv, 1, std::pow(static_cast<double>(kRestoreFactor), q), q > 0 ? kRestoreFactor : 0);
  net = restore_all(net, kv.basis_count(), k, q, false, 1.0, false);
  return finalize_bounded(net);
}

Network build_qi_net(const spline::QuasiInterpolant& qi, BuildMode mode) {
  const auto& space = qi.space;
  const int k = space.order();
  const int d = space.dim();
  const KnotVector& kv = space.axis(0);
  const int n = kv.basis_count();
  require_order(k, "build_qi_net");
  if (d > 3) throw std::invalid_argument("build_qi_net: supports d <= 3, got d = " + std::to_string(d));
  if (mode == BuildMode::bounded) require_envelope(k, kv.interior_count(), d, "build_qi_net");

  const bool bounded = mode == BuildMode::bounded;
  const int q_axis = bounded ? axis_restoration_stages(k) : 0;
  const double axis_scale = std::pow(static_cast<double>(kRestoreFactor), q_axis);
  const bool bank = bounded;  // the bank also feeds the coefficient stages
  Network net = axis_bases(kv, d, axis_scale, bank ? kRestoreFactor : 0);
  if (bounded) net = restore_all(net, d * n, k, q_axis, true, 1.0, false);

  std::vector<int> groups(static_cast<std::size_t>(d), n);
  while (groups.size() > 1) {
    std::vector<int> next;
    net = compose(net, product_stage(groups, k, bank, bank, next));
    groups = next;
  }
  const long total = groups.front();
  const Eigen::Index width = bank ? total + 1 : total;

  // Smallest q such that J_I / 4^q times the largest outgoing weight of the
  // unit producing B_I is at most one.
  int q_coef = 0;
  if (bounded) {
    double need = 0.0;
    for (int o = 0; o < net.out_weights.outerSize(); ++o) {
      if (o >= total) break;
      double row = 0.0;
      for (SparseMatrix::InnerIterator it(net.out_weights, o); it; ++it) row = std::max(row, std::abs(it.value()));
      need = std::max(need, row * std::abs(qi.coeffs[static_cast<std::size_t>(o)]));
    }
    while (std::pow(static_cast<double>(kRestoreFactor), q_coef) < need) ++q_coef;
  }

  const double coef_scale = std::pow(static_cast<double>(kRestoreFactor), q_coef);
  Eigen::MatrixXd contract = Eigen::MatrixXd::Zero(q_coef > 0 ? 2 : 1, width);
  for (long i = 0; i < total; ++i) contract(0, i) = qi.coeffs[static_cast<std::size_t>(i)] / coef_scale;
  if (q_coef > 0) contract(1, width - 1) = 1.0;
  net = compose(net, affine_net(contract, Eigen::VectorXd::Zero(contract.rows())));
  if (q_coef > 0) {
    double top = 0.0;
    for (double c : qi.coeffs) top = std::max(top, std::abs(c));
    net = restore_all(net, 1, k, q_coef, false, top, true);
  }
  if (!bounded) {
    net = remove_dead_units(net);
    net.prune_zeros();
    net.parameter_budget = net.nonzero_count();
    net.validate();
    return net;
  }
  return finalize_bounded(net);
}

}  // namespace splinenet::net
