#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "xbarsim/common.hpp"
#include "xbarsim/device.hpp"

namespace xbarsim {

struct SynapsePair {
    double g_plus = 0.0;
    double g_minus = 0.0;
    bool operator==(const SynapsePair &) const = default;
};

struct ConductanceBounds {
    double g_min = 8e-9;
    double g_max = 8e-6;

    static ConductanceBounds of(const DeviceParams &p) { return {p.g_min(), p.g_max()}; }
    double mid() const { return 0.5 * (g_min + g_max); }
    double range() const { return g_max - g_min; }
};

// Scales a weight matrix by 1/max|w| so every entry lies in [-1, 1].
// Returns the scaled matrix and the factor max|w| (1 for an all-zero matrix).
std::pair<Matrix, double> normalize_weights(const Matrix &w);

// Constant-pair-sum mapping g+/- = mid +/- w * range / 2 (row-major, same
// shape as w). Throws DimensionError if some |w| > 1.
std::vector<SynapsePair> weights_to_pairs(const Matrix &w, ConductanceBounds bounds);

// Crossbar with `n_inputs` signal rows plus an optional bias row driven at
// +1 V. Each logical row is a true line and an inverted line, so there are
// 2 * rows() physical rows. Pairs are row-major over logical rows.
struct CrossbarInstance {
    std::size_t n_inputs = 0;
    std::size_t n_neurons = 0;
    bool bias_row = true;
    std::vector<SynapsePair> pairs;
    double wire_r_segment = 1.0;
    ConductanceBounds bounds;

    std::size_t rows() const { return n_inputs + (bias_row ? 1 : 0); }
    const SynapsePair &pair(std::size_t row, std::size_t col) const
    {
        return pairs[row * n_neurons + col];
    }
    SynapsePair &pair(std::size_t row, std::size_t col) { return pairs[row * n_neurons + col]; }
    void validate() const;
    // Conductance matrix with 2*rows() physical rows (true line, then
    // inverted line of each logical row).
    Matrix conductance_matrix() const;
};

// Builds a crossbar holding the (bias-last) weight rows of a layer; the
// returned scale is the max|w| the weights were normalized by.
std::pair<CrossbarInstance, double> make_crossbar(const Matrix &weights, bool bias_row,
        ConductanceBounds bounds = {}, double wire_r_segment = 1.0);

// Floating summing-node voltage sum v_i (g+ - g-) / sum (g+ + g-).
double ideal_column_voltage(std::span<const double> inputs, std::span<const SynapsePair> column);
std::vector<double> ideal_solve(const CrossbarInstance &xb, std::span<const double> inputs);

// Nodal analysis of the crossbar including wire segments. The matrix is
// factorized once in the constructor; solve() can then be called for many
// input vectors.
class CrossbarSolver {
public:
    explicit CrossbarSolver(const CrossbarInstance &xb);
    ~CrossbarSolver();
    CrossbarSolver(CrossbarSolver &&) noexcept;
    CrossbarSolver &operator=(CrossbarSolver &&) noexcept;

    // `inputs` holds one voltage per signal row (bias excluded); returns the
    // sense-node voltage of every column.
    std::vector<double> solve(std::span<const double> inputs) const;
    std::size_t unknowns() const;
    const CrossbarInstance &instance() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::vector<double> nonideal_solve(const CrossbarInstance &xb, std::span<const double> inputs);

inline double threshold_readout(double dp) { return dp > 0.0 ? 1.0 : -1.0; }

struct DacOutput {
    double true_line = 0.0;
    double inverted_line = 0.0;
};
DacOutput dac_convert(std::uint8_t v8, double v_read = 1.0);

// DAC conversion, nodal solve and inverter readout of one crossbar layer.
std::vector<double> crossbar_layer_forward(const CrossbarSolver &solver,
        std::span<const std::uint8_t> inputs);
// Layer evaluation for inputs that are already +-1 V levels.
std::vector<double> crossbar_layer_forward_levels(const CrossbarSolver &solver,
        std::span<const double> levels);

} // namespace xbarsim
