#include "doctest.h"

#include <cmath>

#include "xbarsim/crossbar.hpp"
#include "xbarsim/nn_model.hpp"

using namespace xbarsim;

namespace {

// Floating summing node of one column: sum v (g+ - g-) / sum (g+ + g-), with
// the true line at +v and the inverted line at -v of every row.
double oracle_column(const CrossbarInstance &xb, const std::vector<double> &in, std::size_t col)
{
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < xb.rows(); ++r) {
        const double v = r < xb.n_inputs ? in[r] : 1.0;
        const SynapsePair p = xb.pair(r, col);
        num += v * p.g_plus - v * p.g_minus;
        den += p.g_plus + p.g_minus;
    }
    return num / den;
}

CrossbarInstance random_instance(std::size_t rows, std::size_t cols, Rng &rng, double wire_r)
{
    Matrix w(rows, cols);
    for (auto &v : w.data) {
        v = rng.uniform(-1.0, 1.0);
    }
    return make_crossbar(w, true, {}, wire_r).first;
}

} // namespace

TEST_CASE("weight mapping examples")
{
    const ConductanceBounds b;
    Matrix w(1, 3);
    w(0, 0) = 0.0;
    w(0, 1) = 1.0;
    w(0, 2) = -0.5;
    const auto pairs = weights_to_pairs(w, b);
    CHECK(pairs[0].g_plus == b.mid());
    CHECK(pairs[0].g_minus == b.mid());
    CHECK(pairs[1].g_plus == doctest::Approx(8e-6));
    CHECK(pairs[1].g_minus == doctest::Approx(8e-9));
    CHECK(pairs[2].g_plus == doctest::Approx(2.006e-6));
    CHECK(pairs[2].g_minus == doctest::Approx(6.002e-6));
    w(0, 0) = 1.5;
    CHECK_THROWS_AS(weights_to_pairs(w, b), DimensionError);
}

TEST_CASE("property: constant pair sum and bounds")
{
    Rng rng(1);
    const ConductanceBounds b;
    Matrix w(40, 10);
    for (auto &v : w.data) {
        v = rng.uniform(-3.0, 3.0);
    }
    const auto [normalized, scale] = normalize_weights(w);
    for (const auto &p : weights_to_pairs(normalized, b)) {
        CHECK(p.g_plus + p.g_minus == doctest::Approx(b.g_min + b.g_max));
        CHECK(p.g_plus >= b.g_min * (1 - 1e-12));
        CHECK(p.g_minus <= b.g_max * (1 + 1e-12));
    }
    CHECK(scale > 2.9);
}

TEST_CASE("ideal column voltage examples")
{
    std::vector<SynapsePair> col{{8e-6, 1e-6}};
    std::vector<double> in{0.5};
    CHECK(ideal_column_voltage(in, col) == doctest::Approx(0.5 * 7.0 / 9.0));
    std::vector<SynapsePair> same{{3e-6, 3e-6}, {1e-6, 1e-6}};
    CHECK(ideal_column_voltage(std::vector<double>{0.7, -0.2}, same) == 0.0);
    std::vector<SynapsePair> twin{{5e-6, 2e-6}, {5e-6, 2e-6}};
    CHECK(ideal_column_voltage(std::vector<double>{0.4, -0.4}, twin) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("zero wire resistance matches the summing-node formula")
{
    Rng rng(2);
    for (int k = 0; k < 5; ++k) {
        const CrossbarInstance xb = random_instance(128, 64, rng, 0.0);
        std::vector<double> in(127);
        for (auto &v : in) {
            v = rng.uniform(-1.0, 1.0);
        }
        const auto nodal = nonideal_solve(xb, in);
        for (std::size_t j = 0; j < 64; ++j) {
            const double o = oracle_column(xb, in, j);
            CHECK(std::abs(nodal[j] - o) <= 1e-9 * std::max(std::abs(o), 1e-12));
        }
    }
}

TEST_CASE("1x1 crossbar with wire resistance is a series divider")
{
    for (const double r : {0.0, 10.0, 1000.0}) {
        CrossbarInstance xb;
        xb.n_inputs = 1;
        xb.n_neurons = 1;
        xb.bias_row = false;
        xb.pairs = {{6e-6, 2e-6}};
        xb.wire_r_segment = r;
        const double v = 0.8;
        // +v -> R -> g+ -> column node -> R -> sense node -> g- -> R -> -v
        const double i = 2 * v / (3 * r + 1 / 6e-6 + 1 / 2e-6);
        const double sense = -v + i * (r + 1 / 2e-6);
        CHECK(nonideal_solve(xb, std::vector<double>{v})[0] == doctest::Approx(sense).epsilon(1e-10));
    }
}

TEST_CASE("homogeneous input gives zero and error grows with wire resistance")
{
    Rng rng(3);
    CrossbarInstance xb = random_instance(31, 16, rng, 2.0);
    xb.bias_row = false;
    xb.n_inputs = 31;
    const auto zero = nonideal_solve(xb, std::vector<double>(31, 0.0));
    for (const double v : zero) {
        CHECK(v == doctest::Approx(0.0).scale(1.0));
    }

    CrossbarInstance big = random_instance(128, 64, rng, 0.0);
    std::vector<double> in(127);
    for (auto &v : in) {
        v = rng.uniform(-1.0, 1.0);
    }
    double last = -1.0;
    for (const double r : {0.0, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        big.wire_r_segment = r;
        const auto nodal = nonideal_solve(big, in);
        double err = 0.0;
        for (std::size_t j = 0; j < 64; ++j) {
            err += std::abs(nodal[j] - oracle_column(big, in, j));
        }
        CHECK(err >= last);
        last = err;
    }
    CHECK(last > 1e-4);
}

TEST_CASE("readout and DAC")
{
    CHECK(threshold_readout(0.39) == 1.0);
    CHECK(threshold_readout(0.0) == -1.0);
    CHECK(threshold_readout(-1e-6) == -1.0);
    CHECK(dac_convert(0).true_line == 0.0);
    CHECK(dac_convert(0).inverted_line == 0.0);
    CHECK(dac_convert(255).true_line == 1.0);
    CHECK(dac_convert(255).inverted_line == -1.0);
    CHECK(dac_convert(128).true_line == doctest::Approx(128.0 / 255.0));
    CHECK(dac_convert(128).inverted_line == doctest::Approx(-128.0 / 255.0));
}

TEST_CASE("layer forward examples")
{
    Matrix w(2, 1);
    w(0, 0) = 1.0;
    const CrossbarSolver one(make_crossbar(w, true, {}, 0.0).first);
    CHECK(crossbar_layer_forward(one, std::vector<std::uint8_t>{255}) == std::vector<double>{1.0});

    const Matrix zero(5, 3);
    const CrossbarSolver balanced(make_crossbar(zero, true, {}, 0.0).first);
    CHECK(crossbar_layer_forward(balanced, std::vector<std::uint8_t>{9, 200, 3, 0}) == std::vector<double>(3, -1.0));
}

TEST_CASE("layer forward matches the float threshold layer")
{
    Rng rng(4);
    NetworkSpec net = make_network({40, 12}, Threshold{}, Threshold{});
    initialize_weights(net, 8);
    const QuantizedNetwork q = quantize(net, 8);
    const NetworkSpec exact = dequantize(q);
    const CrossbarSolver solver(make_crossbar(exact.layers[0].weights, true, {}, 0.0).first);
    std::vector<std::uint8_t> px(40);
    for (int t = 0; t < 100; ++t) {
        for (auto &p : px) {
            p = static_cast<std::uint8_t>(rng.below(256));
        }
        CHECK(crossbar_layer_forward(solver, px) == forward_pixels(exact, px));
    }
}
