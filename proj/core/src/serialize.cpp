#include "xbarsim/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace xbarsim {

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : in_(std::string(text)) {}

    std::istringstream next(std::string_view expected_tag)
    {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line != "\r") {
                break;
            }
        }
        if (!in_ && line.empty()) {
            fail("unexpected end of input, wanted '" + std::string(expected_tag) + "'");
        }
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag != expected_tag) {
            fail("expected '" + std::string(expected_tag) + "', found '" + tag + "'");
        }
        ls >> std::ws;
        return ls;
    }

    [[noreturn]] void fail(const std::string &what) const
    {
        throw ConfigError("line " + std::to_string(line_no_) + ": " + what);
    }

private:
    std::istringstream in_;
    std::size_t line_no_ = 0;
};

double read_real(std::istringstream &ls, const LineReader &r)
{
    std::string tok;
    if (!(ls >> tok)) {
        r.fail("missing real value");
    }
    char *end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
        r.fail("bad real value '" + tok + "'");
    }
    return v;
}

template <typename T>
T read_int(std::istringstream &ls, const LineReader &r)
{
    long long v = 0;
    if (!(ls >> v)) {
        r.fail("missing integer value");
    }
    return static_cast<T>(v);
}

std::string rest_of_line(std::istringstream &ls)
{
    std::string s;
    std::getline(ls, s);
    if (!s.empty() && s.back() == '\r') {
        s.pop_back();
    }
    return s;
}

void write_activation(std::ostream &out, const ActivationKind &kind)
{
    if (const auto *lut = std::get_if<Lut8>(&kind)) {
        out << "lut " << format_hex(lut->input_step) << ' ' << format_hex(lut->output_scale);
        for (const auto t : lut->table) {
            out << ' ' << static_cast<int>(t);
        }
        out << '\n';
    }
}

ActivationKind activation_from_name(const std::string &name, LineReader &r)
{
    if (name == "threshold") {
        return Threshold{};
    }
    if (name == "sigmoid") {
        return Sigmoid{};
    }
    if (name == "linear") {
        return Linear{};
    }
    if (name == "lut8") {
        auto ls = r.next("lut");
        Lut8 lut;
        lut.input_step = read_real(ls, r);
        lut.output_scale = read_real(ls, r);
        for (auto &t : lut.table) {
            const int v = read_int<int>(ls, r);
            if (v < -128 || v > 127) {
                r.fail("lut entry out of signed 8-bit range");
            }
            t = static_cast<std::int8_t>(v);
        }
        return lut;
    }
    r.fail("unknown activation '" + name + "'");
}

void write_mask(std::ostream &out, const std::vector<std::uint8_t> &mask, std::size_t rows,
        std::size_t cols)
{
    for (std::size_t i = 0; i < rows; ++i) {
        out << "m ";
        for (std::size_t j = 0; j < cols; ++j) {
            out << (mask[i * cols + j] ? '1' : '0');
        }
        out << '\n';
    }
}

std::vector<std::uint8_t> read_mask(LineReader &r, std::size_t rows, std::size_t cols)
{
    std::vector<std::uint8_t> mask(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        auto ls = r.next("m");
        std::string bits;
        ls >> bits;
        if (bits.size() != cols) {
            r.fail("mask row has the wrong width");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            mask[i * cols + j] = bits[j] == '1' ? 1 : 0;
        }
    }
    return mask;
}

void check_header(LineReader &r, std::string_view magic)
{
    auto ls = r.next(magic);
    if (read_int<int>(ls, r) != network_format_version) {
        r.fail("unsupported format version");
    }
}

} // namespace

std::string format_hex(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

std::string serialize_network(const NetworkSpec &net)
{
    net.validate();
    std::ostringstream out;
    out << "xbarsim-network " << network_format_version << '\n';
    out << "name " << net.name << '\n';
    out << "layers " << net.layers.size() << '\n';
    for (const auto &layer : net.layers) {
        out << "layer " << layer.n_inputs << ' ' << layer.n_neurons << ' '
            << activation_name(layer.activation) << ' ' << (layer.bias_enabled ? 1 : 0) << ' '
            << (layer.mask.empty() ? 0 : 1) << '\n';
        write_activation(out, layer.activation);
        for (std::size_t i = 0; i < layer.weights.rows; ++i) {
            out << 'w';
            for (const double w : layer.weights.row(i)) {
                out << ' ' << format_hex(w);
            }
            out << '\n';
        }
        if (!layer.mask.empty()) {
            write_mask(out, layer.mask, layer.weights.rows, layer.weights.cols);
        }
    }
    out << "end\n";
    return out.str();
}

NetworkSpec parse_network(std::string_view text)
{
    LineReader r(text);
    check_header(r, "xbarsim-network");
    NetworkSpec net;
    auto name_line = r.next("name");
    net.name = rest_of_line(name_line);
    auto count_line = r.next("layers");
    const auto n_layers = read_int<std::size_t>(count_line, r);
    for (std::size_t k = 0; k < n_layers; ++k) {
        auto ls = r.next("layer");
        LayerSpec layer;
        layer.n_inputs = read_int<std::size_t>(ls, r);
        layer.n_neurons = read_int<std::size_t>(ls, r);
        std::string act;
        ls >> act;
        layer.bias_enabled = read_int<int>(ls, r) != 0;
        const bool masked = read_int<int>(ls, r) != 0;
        layer.activation = activation_from_name(act, r);
        layer.weights = Matrix(layer.weight_rows(), layer.n_neurons);
        for (std::size_t i = 0; i < layer.weights.rows; ++i) {
            auto ws = r.next("w");
            for (auto &w : layer.weights.row(i)) {
                w = read_real(ws, r);
            }
        }
        if (masked) {
            layer.mask = read_mask(r, layer.weights.rows, layer.weights.cols);
        }
        net.layers.push_back(std::move(layer));
    }
    r.next("end");
    net.validate();
    return net;
}

std::string serialize_quantized(const QuantizedNetwork &net)
{
    std::ostringstream out;
    out << "xbarsim-qnetwork " << network_format_version << '\n';
    out << "name " << net.name << '\n';
    out << "io " << net.input_bits << ' ' << net.output_bits << ' ' << format_hex(net.input_scale)
        << '\n';
    out << "layers " << net.layers.size() << '\n';
    for (const auto &layer : net.layers) {
        out << "layer " << layer.n_inputs << ' ' << layer.n_neurons << ' '
            << activation_name(layer.activation) << ' ' << (layer.bias_enabled ? 1 : 0) << ' '
            << (layer.mask.empty() ? 0 : 1) << ' ' << layer.bits << ' '
            << format_hex(layer.weight_scale) << ' ' << layer.reduce_shift << '\n';
        write_activation(out, layer.activation);
        for (std::size_t i = 0; i < layer.weight_rows(); ++i) {
            out << 'q';
            for (std::size_t j = 0; j < layer.n_neurons; ++j) {
                out << ' ' << layer.code(i, j);
            }
            out << '\n';
        }
        if (!layer.mask.empty()) {
            write_mask(out, layer.mask, layer.weight_rows(), layer.n_neurons);
        }
    }
    out << "end\n";
    return out.str();
}

QuantizedNetwork parse_quantized(std::string_view text)
{
    LineReader r(text);
    check_header(r, "xbarsim-qnetwork");
    QuantizedNetwork net;
    auto name_line = r.next("name");
    net.name = rest_of_line(name_line);
    auto io = r.next("io");
    net.input_bits = read_int<int>(io, r);
    net.output_bits = read_int<int>(io, r);
    net.input_scale = read_real(io, r);
    auto count_line = r.next("layers");
    const auto n_layers = read_int<std::size_t>(count_line, r);
    for (std::size_t k = 0; k < n_layers; ++k) {
        auto ls = r.next("layer");
        QuantizedLayer layer;
        layer.n_inputs = read_int<std::size_t>(ls, r);
        layer.n_neurons = read_int<std::size_t>(ls, r);
        std::string act;
        ls >> act;
        layer.bias_enabled = read_int<int>(ls, r) != 0;
        const bool masked = read_int<int>(ls, r) != 0;
        layer.bits = read_int<int>(ls, r);
        layer.weight_scale = read_real(ls, r);
        layer.reduce_shift = read_int<int>(ls, r);
        if (layer.bits < 2 || layer.bits > 16) {
            r.fail("quantized bit width outside [2, 16]");
        }
        layer.activation = activation_from_name(act, r);
        layer.codes.resize(layer.weight_rows() * layer.n_neurons);
        for (std::size_t i = 0; i < layer.weight_rows(); ++i) {
            auto qs = r.next("q");
            for (std::size_t j = 0; j < layer.n_neurons; ++j) {
                const auto c = read_int<std::int32_t>(qs, r);
                if (c > layer.max_code() || c < -layer.max_code()) {
                    r.fail("weight code exceeds the layer bit width");
                }
                layer.codes[i * layer.n_neurons + j] = c;
            }
        }
        if (masked) {
            layer.mask = read_mask(r, layer.weight_rows(), layer.n_neurons);
        }
        net.layers.push_back(std::move(layer));
    }
    r.next("end");
    return net;
}

std::string serialize_matrix(const Matrix &m, std::string_view label)
{
    std::ostringstream out;
    out << "xbarsim-matrix " << network_format_version << '\n';
    out << "name " << label << '\n';
    out << "shape " << m.rows << ' ' << m.cols << '\n';
    for (std::size_t i = 0; i < m.rows; ++i) {
        out << 'w';
        for (const double v : m.row(i)) {
            out << ' ' << format_hex(v);
        }
        out << '\n';
    }
    out << "end\n";
    return out.str();
}

Matrix parse_matrix(std::string_view text)
{
    LineReader r(text);
    check_header(r, "xbarsim-matrix");
    r.next("name");
    auto shape = r.next("shape");
    const auto rows = read_int<std::size_t>(shape, r);
    const auto cols = read_int<std::size_t>(shape, r);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        auto ws = r.next("w");
        for (auto &v : m.row(i)) {
            v = read_real(ws, r);
        }
    }
    r.next("end");
    return m;
}

void write_text_file(const std::filesystem::path &path, std::string_view text)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace xbarsim
