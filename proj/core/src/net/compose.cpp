#include "splinenet/net/compose.hpp"

#include <cmath>
#include <stdexcept>

namespace splinenet::net {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix from_triplets(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.prune([](Eigen::Index, Eigen::Index, const double& v) { return v != 0.0; });
  m.makeCompressed();
  return m;
}

SparseMatrix to_sparse(const Eigen::MatrixXd& a) {
  std::vector<Triplet> t;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (a(r, c) != 0.0) t.emplace_back(r, c, a(r, c));
    }
  }
  return from_triplets(a.rows(), a.cols(), t);
}

void append_block(std::vector<Triplet>& t, const SparseMatrix& m, Eigen::Index row0, Eigen::Index col0) {
  for (int o = 0; o < m.outerSize(); ++o) {
    for (SparseMatrix::InnerIterator it(m, o); it; ++it) t.emplace_back(row0 + it.row(), col0 + it.col(), it.value());
  }
}

SparseMatrix product(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix m = (a * b).pruned();
  m.prune([](Eigen::Index, Eigen::Index, const double& v) { return v != 0.0; });
  m.makeCompressed();
  return m;
}

Eigen::VectorXd concat(const std::vector<const Eigen::VectorXd*>& parts) {
  Eigen::Index n = 0;
  for (const auto* p : parts) n += p->size();
  Eigen::VectorXd out(n);
  Eigen::Index pos = 0;
  for (const auto* p : parts) {
    out.segment(pos, p->size()) = *p;
    pos += p->size();
  }
  return out;
}

// Block-diagonal combination of the matrices selected by `pick`; if
// shared_input, blocks are stacked vertically over a common column range.
template <class Pick>
SparseMatrix combine(const std::vector<Network>& parts, Pick pick, bool shared_input) {
  std::vector<Triplet> t;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const Network& p : parts) {
    const SparseMatrix& m = pick(p);
    append_block(t, m, rows, shared_input ? 0 : cols);
    rows += m.rows();
    cols = shared_input ? m.cols() : cols + m.cols();
  }
  return from_triplets(rows, cols, t);
}

Network combine_networks(const std::vector<Network>& parts, bool shared_input) {
  if (parts.empty()) throw std::invalid_argument("combine: no parts");
  const int depth = parts.front().depth();
  for (const Network& p : parts) {
    if (p.depth() != depth) throw std::invalid_argument("parallel/stack: parts must have equal depth");
    if (shared_input && p.input_dim != parts.front().input_dim) {
      throw std::invalid_argument("parallel: parts must share the input dimension");
    }
  }
  Network out;
  out.input_dim = 0;
  for (const Network& p : parts) out.input_dim = shared_input ? p.input_dim : out.input_dim + p.input_dim;

  for (int l = 0; l < depth; ++l) {
    Layer layer;
    layer.weights = combine(
        parts, [l](const Network& p) -> const SparseMatrix& { return p.hidden[static_cast<std::size_t>(l)].weights; },
        shared_input && l == 0);
    std::vector<const Eigen::VectorXd*> biases;
    for (const Network& p : parts) {
      const Layer& src = p.hidden[static_cast<std::size_t>(l)];
      biases.push_back(&src.biases);
      layer.exponents.insert(layer.exponents.end(), src.exponents.begin(), src.exponents.end());
    }
    layer.biases = concat(biases);
    out.hidden.push_back(std::move(layer));
  }
  out.out_weights = combine(
      parts, [](const Network& p) -> const SparseMatrix& { return p.out_weights; }, shared_input && depth == 0);
  std::vector<const Eigen::VectorXd*> biases;
  for (const Network& p : parts) biases.push_back(&p.out_biases);
  out.out_biases = concat(biases);
  return out;
}

}  // namespace

Network affine_net(const Eigen::MatrixXd& a, const Eigen::VectorXd& c) {
  if (c.size() != a.rows()) throw std::invalid_argument("affine_net: bias size mismatch");
  return {to_sparse(a), c};
}

Network select_net(int in_dim, const std::vector<int>& channels) {
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < channels.size(); ++r) {
    if (channels[r] < 0 || channels[r] >= in_dim) throw std::out_of_range("select_net: channel out of range");
    t.emplace_back(static_cast<Eigen::Index>(r), channels[r], 1.0);
  }
  Network net(from_triplets(static_cast<Eigen::Index>(channels.size()), in_dim, t),
              Eigen::VectorXd::Zero(static_cast<Eigen::Index>(channels.size())));
  return net;
}

Network activation_net(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, int exponent) {
  if (c.size() != a.rows()) throw std::invalid_argument("activation_net: bias size mismatch");
  if (exponent < 1) throw std::invalid_argument("activation_net: exponent must be >= 1");
  Network net;
  net.input_dim = static_cast<int>(a.cols());
  net.hidden.push_back(Layer{to_sparse(a), c, std::vector<int>(static_cast<std::size_t>(a.rows()), exponent)});
  SparseMatrix eye(a.rows(), a.rows());
  eye.setIdentity();
  net.out_weights = eye;
  net.out_biases = Eigen::VectorXd::Zero(a.rows());
  return net;
}

Network compose(const Network& first, const Network& second) {
  if (second.input_dim != first.output_dim()) {
    throw std::invalid_argument("compose: output dimension " + std::to_string(first.output_dim()) +
                                " does not match input dimension " + std::to_string(second.input_dim));
  }
  Network out;
  out.input_dim = first.input_dim;
  out.hidden = first.hidden;
  if (second.hidden.empty()) {
    out.out_weights = product(second.out_weights, first.out_weights);
    out.out_biases = second.out_weights * first.out_biases + second.out_biases;
    return out;
  }
  Layer merged = second.hidden.front();
  merged.biases = merged.weights * first.out_biases + merged.biases;
  merged.weights = product(merged.weights, first.out_weights);
  out.hidden.push_back(std::move(merged));
  out.hidden.insert(out.hidden.end(), second.hidden.begin() + 1, second.hidden.end());
  out.out_weights = second.out_weights;
  out.out_biases = second.out_biases;
  return out;
}

Network parallel(const std::vector<Network>& parts) { return combine_networks(parts, true); }

Network stack(const std::vector<Network>& parts) { return combine_networks(parts, false); }

Network channelwise(const Network& unary, int n) {
  if (n < 1) throw std::invalid_argument("channelwise: need at least one channel");
  return stack(std::vector<Network>(static_cast<std::size_t>(n), unary));
}

Network replicate_for_bound(const Network& net) {
  Network out = net;
  for (std::size_t l = 0; l < out.hidden.size(); ++l) {
    Layer& layer = out.hidden[l];
    SparseMatrix& next = l + 1 < out.hidden.size() ? out.hidden[l + 1].weights : out.out_weights;

    std::vector<double> col_max(static_cast<std::size_t>(layer.out_dim()), 0.0);
    for (int o = 0; o < next.outerSize(); ++o) {
      for (SparseMatrix::InnerIterator it(next, o); it; ++it) {
        auto& m = col_max[static_cast<std::size_t>(it.col())];
        m = std::max(m, std::abs(it.value()));
      }
    }
    std::vector<int> copies(col_max.size());
    std::vector<int> first_col(col_max.size());
    int width = 0;
    for (std::size_t j = 0; j < col_max.size(); ++j) {
      copies[j] = col_max[j] > 1.0 ? static_cast<int>(std::ceil(col_max[j])) : 1;
      first_col[j] = width;
      width += copies[j];
    }
    if (width == layer.out_dim()) continue;

    std::vector<Triplet> wt;
    Eigen::VectorXd biases(width);
    std::vector<int> exponents(static_cast<std::size_t>(width));
    for (int o = 0; o < layer.weights.outerSize(); ++o) {
      const auto j = static_cast<std::size_t>(o);
      for (int c = 0; c < copies[j]; ++c) {
        const int row = first_col[j] + c;
        for (SparseMatrix::InnerIterator it(layer.weights, o); it; ++it) wt.emplace_back(row, it.col(), it.value());
        biases[row] = layer.biases[o];
        exponents[static_cast<std::size_t>(row)] = layer.exponents[j];
      }
    }
    std::vector<Triplet> nt;
    for (int o = 0; o < next.outerSize(); ++o) {
      for (SparseMatrix::InnerIterator it(next, o); it; ++it) {
        const auto j = static_cast<std::size_t>(it.col());
        for (int c = 0; c < copies[j]; ++c) nt.emplace_back(it.row(), first_col[j] + c, it.value() / copies[j]);
      }
    }
    const Eigen::Index in_dim = layer.weights.cols();
    const Eigen::Index next_rows = next.rows();
    layer.weights = from_triplets(width, in_dim, wt);
    layer.biases = biases;
    layer.exponents = exponents;
    next = from_triplets(next_rows, width, nt);
  }
  return out;
}

Network remove_dead_units(const Network& net) {
  Network out = net;
  for (std::size_t l = out.hidden.size(); l-- > 0;) {
    Layer& layer = out.hidden[l];
    SparseMatrix& next = l + 1 < out.hidden.size() ? out.hidden[l + 1].weights : out.out_weights;
    std::vector<int> remap(static_cast<std::size_t>(layer.out_dim()), -1);
    for (int o = 0; o < next.outerSize(); ++o) {
      for (SparseMatrix::InnerIterator it(next, o); it; ++it) {
        if (it.value() != 0.0) remap[static_cast<std::size_t>(it.col())] = 0;
      }
    }
    int width = 0;
    for (int& r : remap) {
      if (r == 0) r = width++;
    }
    if (width == layer.out_dim()) continue;

    std::vector<Triplet> wt;
    Eigen::VectorXd biases(width);
    std::vector<int> exponents(static_cast<std::size_t>(width));
    for (int o = 0; o < layer.weights.outerSize(); ++o) {
      const int row = remap[static_cast<std::size_t>(o)];
      if (row < 0) continue;
      for (SparseMatrix::InnerIterator it(layer.weights, o); it; ++it) wt.emplace_back(row, it.col(), it.value());
      biases[row] = layer.biases[o];
      exponents[static_cast<std::size_t>(row)] = layer.exponents[static_cast<std::size_t>(o)];
    }
    std::vector<Triplet> nt;
    for (int o = 0; o < next.outerSize(); ++o) {
      for (SparseMatrix::InnerIterator it(next, o); it; ++it) {
        const int col = remap[static_cast<std::size_t>(it.col())];
        if (col >= 0) nt.emplace_back(it.row(), col, it.value());
      }
    }
    const Eigen::Index in_dim = layer.weights.cols();
    const Eigen::Index next_rows = next.rows();
    layer.weights = from_triplets(width, in_dim, wt);
    layer.biases = biases;
    layer.exponents = exponents;
    next = from_triplets(next_rows, width, nt);
  }
  return out;
}

}  // namespace splinenet::net
