#include "doctest.h"

#include "xbarsim/serialize.hpp"

using namespace xbarsim;

TEST_CASE("network round trip is bit-exact")
{
    NetworkSpec net = make_network({5, 4, 3}, Threshold{}, make_sigmoid_lut());
    net.name = "demo";
    initialize_weights(net, 3);
    net.layers[0].mask.assign(net.layers[0].weight_rows() * 4, 1);
    net.layers[0].mask[2] = 0;
    net.layers[0].weights.data[2] = 0.0;
    const std::string text = serialize_network(net);
    CHECK(parse_network(text) == net);
    CHECK(serialize_network(parse_network(text)) == text);
}

TEST_CASE("quantized round trip")
{
    NetworkSpec net = make_network({6, 3, 2}, make_sigmoid_lut(), make_sigmoid_lut());
    initialize_weights(net, 4);
    const QuantizedNetwork q = quantize(net, 6);
    CHECK(parse_quantized(serialize_quantized(q)) == q);
}

TEST_CASE("matrix round trip and malformed input")
{
    Matrix m(2, 3);
    m(0, 1) = 0.1;
    m(1, 2) = -1e-300;
    CHECK(parse_matrix(serialize_matrix(m)) == m);
    CHECK(format_hex(0.5) == "0x1p-1");
    CHECK_THROWS_AS(parse_network("xbarsim-network 9\n"), ConfigError);
    CHECK_THROWS_AS(parse_network(""), ConfigError);
    std::string text = serialize_network(make_network({2, 1}, Sigmoid{}, Sigmoid{}));
    text.resize(text.size() / 2);
    CHECK_THROWS_AS(parse_network(text), ConfigError);
}
