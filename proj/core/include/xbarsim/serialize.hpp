#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "xbarsim/common.hpp"
#include "xbarsim/nn_model.hpp"

namespace xbarsim {

// Versioned line-oriented text formats. Reals are written as hexfloats so
// a write/read round trip is bit-exact.
inline constexpr int network_format_version = 1;

std::string serialize_network(const NetworkSpec &net);
NetworkSpec parse_network(std::string_view text);

std::string serialize_quantized(const QuantizedNetwork &net);
QuantizedNetwork parse_quantized(std::string_view text);

std::string serialize_matrix(const Matrix &m, std::string_view label = "matrix");
Matrix parse_matrix(std::string_view text);

void write_text_file(const std::filesystem::path &path, std::string_view text);
std::string read_text_file(const std::filesystem::path &path);

std::string format_hex(double v);

} // namespace xbarsim
