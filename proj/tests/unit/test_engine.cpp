#include "doctest.h"

#include "xbarsim/engine.hpp"

using namespace xbarsim;

namespace {

LabeledDataset random_pixels(std::size_t n, std::size_t dim, std::uint64_t seed)
{
    Rng rng(seed);
    LabeledDataset ds;
    ds.input_size = dim;
    ds.n_classes = 4;
    std::vector<std::uint8_t> x(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto &v : x) {
            v = static_cast<std::uint8_t>(rng.below(256));
        }
        ds.add(x, static_cast<std::uint16_t>(rng.below(4)));
    }
    return ds;
}

} // namespace

TEST_CASE("engine names")
{
    CHECK(engine_name(Engine::floating) == "float");
    CHECK(engine_name(Engine::crossbar) == "crossbar");
}

TEST_CASE("zero-wire crossbar network agrees with the float threshold network")
{
    NetworkSpec net = make_network({30, 12, 4}, Threshold{}, Threshold{});
    initialize_weights(net, 5);
    const auto data = random_pixels(200, 30, 9);
    const CrossbarNetwork xb(net, 0);
    CHECK(xb.layers() == 2);
    std::size_t same = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto s = xb.scores(data.sample(i));
        CHECK(s.size() == 4);
        same += classify_scores(s) == classify_scores(output_pre_activation(net, data.sample(i)));
    }
    CHECK(same == data.size());
    CHECK(evaluate_accuracy(net, data, Engine::crossbar, {0, {}, 0.0})
            == doctest::Approx(evaluate_accuracy(net, data)));
}

TEST_CASE("crossbar network rejects non-threshold hidden layers")
{
    NetworkSpec net = make_network({4, 3, 2}, Sigmoid{}, Threshold{});
    CHECK_THROWS_AS(CrossbarNetwork(net, 8), ConfigError);
}

TEST_CASE("quantized engine at 8 bits stays close to float")
{
    NetworkSpec net = make_network({20, 8, 4}, Sigmoid{}, Sigmoid{});
    initialize_weights(net, 3);
    const auto data = random_pixels(300, 20, 4);
    const double f = evaluate_accuracy(net, data, Engine::floating);
    const double q = evaluate_accuracy(net, data, Engine::quantized, {8, {}, 0.0});
    CHECK(std::abs(f - q) < 0.05);
}
