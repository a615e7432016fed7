#pragma once

#include <filesystem>
#include <string>

#include "splinenet/net/network.hpp"

namespace splinenet::net {

/// JSON text with layer shapes, exponents, weights as row-major sorted
/// [row, col, value] triplets, biases, weight bound and parameter budget.
/// Reals are written as hexadecimal floats, so a round trip is bit-exact.
std::string serialize_network(const Network& net);

/// Inverse of serialize_network. Throws std::runtime_error on malformed input.
Network deserialize_network(const std::string& text);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

/// "%a" formatting and its inverse; used by every text format in the library.
std::string hex_double(double v);
double parse_hex_double(const std::string& s);

}  // namespace splinenet::net
