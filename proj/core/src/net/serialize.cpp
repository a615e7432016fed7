#include "splinenet/net/serialize.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace splinenet::net {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "splinenet-network";
constexpr int kVersion = 1;

json matrix_json(const SparseMatrix& m) {
  json entries = json::array();
  for (int o = 0; o < m.outerSize(); ++o) {  // row-major storage: rows in order
    for (SparseMatrix::InnerIterator it(m, o); it; ++it) {
      entries.push_back(json::array({it.row(), it.col(), hex_double(it.value())}));
    }
  }
  return entries;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(hex_double(v[i]));
  return out;
}

SparseMatrix matrix_from(const json& entries, Eigen::Index rows, Eigen::Index cols) {
  std::vector<Eigen::Triplet<double>> t;
  for (const auto& e : entries) {
    const auto r = e.at(0).get<Eigen::Index>();
    const auto c = e.at(1).get<Eigen::Index>();
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw std::runtime_error("weight entry out of range");
    t.emplace_back(r, c, parse_hex_double(e.at(2).get<std::string>()));
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

Eigen::VectorXd vector_from(const json& arr, Eigen::Index n) {
  if (static_cast<Eigen::Index>(arr.size()) != n) throw std::runtime_error("bias vector has wrong length");
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = parse_hex_double(arr.at(static_cast<std::size_t>(i)).get<std::string>());
  return v;
}

}  // namespace

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error("malformed floating-point literal '" + s + "'");
  }
  return v;
}

std::string serialize_network(const Network& net) {
  json layers = json::array();
  for (const Layer& layer : net.hidden) {
    layers.push_back({{"in", layer.in_dim()},
                      {"out", layer.out_dim()},
                      {"activation", "power"},
                      {"exponents", layer.exponents},
                      {"weights", matrix_json(layer.weights)},
                      {"biases", vector_json(layer.biases)}});
  }
  layers.push_back({{"in", static_cast<int>(net.out_weights.cols())},
                    {"out", net.output_dim()},
                    {"activation", "affine"},
                    {"weights", matrix_json(net.out_weights)},
                    {"biases", vector_json(net.out_biases)}});
  const json doc = {{"format", kFormat},
                    {"version", kVersion},
                    {"input_dim", net.input_dim},
                    {"output_dim", net.output_dim()},
                    {"weight_bound", hex_double(net.weight_bound)},
                    {"parameter_budget", net.parameter_budget},
                    {"nonzero_parameters", net.nonzero_count()},
                    {"layers", layers}};
  return doc.dump(1) + "\n";
}

Network deserialize_network(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kFormat || doc.at("version").get<int>() != kVersion) {
      throw std::runtime_error("unsupported format or version");
    }
    Network net;
    net.input_dim = doc.at("input_dim").get<int>();
    net.weight_bound = parse_hex_double(doc.at("weight_bound").get<std::string>());
    net.parameter_budget = doc.at("parameter_budget").get<long>();
    const json& layers = doc.at("layers");
    if (layers.empty()) throw std::runtime_error("no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const json& lj = layers[l];
      const int in = lj.at("in").get<int>();
      const int out = lj.at("out").get<int>();
      const std::string act = lj.at("activation").get<std::string>();
      const bool is_last = l + 1 == layers.size();
      if (is_last != (act == "affine")) throw std::runtime_error("only the final layer may be affine");
      SparseMatrix w = matrix_from(lj.at("weights"), out, in);
      Eigen::VectorXd b = vector_from(lj.at("biases"), out);
      if (is_last) {
        net.out_weights = std::move(w);
        net.out_biases = std::move(b);
      } else {
        net.hidden.push_back(Layer{std::move(w), std::move(b), lj.at("exponents").get<std::vector<int>>()});
      }
    }
    if (net.output_dim() != doc.at("output_dim").get<int>()) throw std::runtime_error("output_dim mismatch");
    net.validate();
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("deserialize_network: ") + e.what());
  } catch (const std::logic_error& e) {
    throw std::runtime_error(std::string("deserialize_network: ") + e.what());
  }
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << serialize_network(net);
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return deserialize_network(ss.str());
}

}  // namespace splinenet::net
