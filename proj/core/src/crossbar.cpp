#include "xbarsim/crossbar.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace xbarsim {

std::pair<Matrix, double> normalize_weights(const Matrix &w)
{
    double max_abs = 0.0;
    for (const double v : w.data) {
        max_abs = std::max(max_abs, std::abs(v));
    }
    const double scale = max_abs > 0.0 ? max_abs : 1.0;
    Matrix out = w;
    for (double &v : out.data) {
        v /= scale;
    }
    return {std::move(out), scale};
}

std::vector<SynapsePair> weights_to_pairs(const Matrix &w, ConductanceBounds bounds)
{
    std::vector<SynapsePair> pairs(w.data.size());
    const double half = 0.5 * bounds.range();
    for (std::size_t i = 0; i < w.data.size(); ++i) {
        const double v = w.data[i];
        if (!(std::abs(v) <= 1.0)) {
            throw DimensionError("weights_to_pairs: |w| > 1, normalize the layer first");
        }
        pairs[i] = {bounds.mid() + v * half, bounds.mid() - v * half};
    }
    return pairs;
}

void CrossbarInstance::validate() const
{
    if (pairs.size() != rows() * n_neurons) {
        throw DimensionError("crossbar pair array does not match rows x neurons");
    }
    if (!(wire_r_segment >= 0.0)) {
        throw DimensionError("wire resistance must be non-negative");
    }
    const double slack = 1e-12 * bounds.g_max;
    for (const auto &p : pairs) {
        for (const double g : {p.g_plus, p.g_minus}) {
            if (g < bounds.g_min - slack || g > bounds.g_max + slack) {
                throw DimensionError("crossbar conductance outside device bounds");
            }
        }
    }
}

Matrix CrossbarInstance::conductance_matrix() const
{
    Matrix m(2 * rows(), n_neurons);
    for (std::size_t i = 0; i < rows(); ++i) {
        for (std::size_t j = 0; j < n_neurons; ++j) {
            m(2 * i, j) = pair(i, j).g_plus;
            m(2 * i + 1, j) = pair(i, j).g_minus;
        }
    }
    return m;
}

std::pair<CrossbarInstance, double> make_crossbar(const Matrix &weights, bool bias_row,
        ConductanceBounds bounds, double wire_r_segment)
{
    auto [scaled, scale] = normalize_weights(weights);
    CrossbarInstance xb;
    xb.bias_row = bias_row;
    xb.n_inputs = weights.rows - (bias_row ? 1 : 0);
    xb.n_neurons = weights.cols;
    xb.pairs = weights_to_pairs(scaled, bounds);
    xb.wire_r_segment = wire_r_segment;
    xb.bounds = bounds;
    return {std::move(xb), scale};
}

double ideal_column_voltage(std::span<const double> inputs, std::span<const SynapsePair> column)
{
    if (inputs.size() != column.size()) {
        throw DimensionError("ideal_column_voltage: length mismatch");
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        num += inputs[i] * (column[i].g_plus - column[i].g_minus);
        den += column[i].g_plus + column[i].g_minus;
    }
    if (!(den > 0.0)) {
        throw SolverError("ideal_column_voltage: column has zero total conductance");
    }
    return num / den;
}

namespace {

std::vector<double> row_drive(const CrossbarInstance &xb, std::span<const double> inputs)
{
    if (inputs.size() != xb.n_inputs) {
        throw DimensionError("crossbar input vector has the wrong length");
    }
    std::vector<double> v(inputs.begin(), inputs.end());
    if (xb.bias_row) {
        v.push_back(1.0);
    }
    return v;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a)
    {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
};

} // namespace

std::vector<double> ideal_solve(const CrossbarInstance &xb, std::span<const double> inputs)
{
    xb.validate();
    const auto v = row_drive(xb, inputs);
    std::vector<double> out(xb.n_neurons);
    std::vector<SynapsePair> column(xb.rows());
    for (std::size_t j = 0; j < xb.n_neurons; ++j) {
        for (std::size_t i = 0; i < xb.rows(); ++i) {
            column[i] = xb.pair(i, j);
        }
        out[j] = ideal_column_voltage(v, column);
    }
    return out;
}

struct CrossbarSolver::Impl {
    using SpMat = Eigen::SparseMatrix<double>;

    CrossbarInstance xb;
    std::size_t n_unknown = 0;
    // Per unknown: (physical row whose driver feeds it, conductance).
    std::vector<std::vector<std::pair<std::size_t, double>>> drive_terms;
    // Per column sense node: unknown index, or the physical row of a driver
    // it is tied to (encoded as n_unknown + row).
    std::vector<std::size_t> sense;
    SpMat g;
    Eigen::SimplicialLDLT<SpMat> ldlt;
    bool use_cg = false;

    explicit Impl(const CrossbarInstance &instance) : xb(instance)
    {
        xb.validate();
        const std::size_t p_rows = 2 * xb.rows();
        const std::size_t n = xb.n_neurons;
        const std::size_t n_nodes = p_rows + 2 * p_rows * n;
        const auto driver = [](std::size_t p) { return p; };
        const auto row_node = [&](std::size_t p, std::size_t j) { return p_rows + p * n + j; };
        const auto col_node = [&](std::size_t p, std::size_t j) {
            return p_rows + p_rows * n + p * n + j;
        };

        struct Edge {
            std::size_t a, b;
            double g;
        };
        std::vector<Edge> edges;
        UnionFind uf(n_nodes);
        const double r = xb.wire_r_segment;
        const auto wire = [&](std::size_t a, std::size_t b) {
            if (r == 0.0) {
                uf.unite(a, b);
            } else {
                edges.push_back({a, b, 1.0 / r});
            }
        };
        for (std::size_t p = 0; p < p_rows; ++p) {
            wire(driver(p), row_node(p, 0));
            for (std::size_t j = 0; j + 1 < n; ++j) {
                wire(row_node(p, j), row_node(p, j + 1));
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t p = 0; p + 1 < p_rows; ++p) {
                wire(col_node(p, j), col_node(p + 1, j));
            }
        }
        for (std::size_t i = 0; i < xb.rows(); ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                edges.push_back({row_node(2 * i, j), col_node(2 * i, j), xb.pair(i, j).g_plus});
                edges.push_back({row_node(2 * i + 1, j), col_node(2 * i + 1, j), xb.pair(i, j).g_minus});
            }
        }

        // Groups holding a driver node are known; the rest are unknowns.
        const std::size_t none = SIZE_MAX;
        std::vector<std::size_t> known_row(n_nodes, none);
        for (std::size_t p = 0; p < p_rows; ++p) {
            known_row[uf.find(driver(p))] = p;
        }
        std::vector<std::size_t> index(n_nodes, none);
        for (std::size_t v = 0; v < n_nodes; ++v) {
            const std::size_t root = uf.find(v);
            if (known_row[root] == none && index[root] == none) {
                index[root] = n_unknown++;
            }
        }
        drive_terms.resize(n_unknown);
        std::vector<Eigen::Triplet<double>> trip;
        std::vector<double> diag(n_unknown, 0.0);
        for (const auto &e : edges) {
            const std::size_t a = uf.find(e.a), b = uf.find(e.b);
            if (a == b) {
                continue;
            }
            const bool ka = known_row[a] != none, kb = known_row[b] != none;
            if (!ka) {
                diag[index[a]] += e.g;
            }
            if (!kb) {
                diag[index[b]] += e.g;
            }
            if (!ka && !kb) {
                trip.emplace_back(index[a], index[b], -e.g);
                trip.emplace_back(index[b], index[a], -e.g);
            } else if (!ka) {
                drive_terms[index[a]].emplace_back(known_row[b], e.g);
            } else if (!kb) {
                drive_terms[index[b]].emplace_back(known_row[a], e.g);
            }
        }
        for (std::size_t i = 0; i < n_unknown; ++i) {
            if (!(diag[i] > 0.0)) {
                throw SolverError("crossbar network has a floating node with zero conductance");
            }
            trip.emplace_back(i, i, diag[i]);
        }
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t root = uf.find(col_node(p_rows - 1, j));
            sense.push_back(known_row[root] != none ? n_unknown + known_row[root] : index[root]);
        }
        g.resize(static_cast<Eigen::Index>(n_unknown), static_cast<Eigen::Index>(n_unknown));
        g.setFromTriplets(trip.begin(), trip.end());
        if (n_unknown > 0) {
            ldlt.compute(g);
            use_cg = ldlt.info() != Eigen::Success;
        }
    }

    std::vector<double> solve(std::span<const double> inputs) const
    {
        const auto v = row_drive(xb, inputs);
        const auto phys = [&](std::size_t p) { return (p % 2 == 0) ? v[p / 2] : -v[p / 2]; };
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_unknown));
        for (std::size_t i = 0; i < n_unknown; ++i) {
            double s = 0.0;
            for (const auto &[p, gd] : drive_terms[i]) {
                s += gd * phys(p);
            }
            rhs[static_cast<Eigen::Index>(i)] = s;
        }
        Eigen::VectorXd x;
        if (n_unknown > 0) {
            if (!use_cg) {
                x = ldlt.solve(rhs);
            }
            if (use_cg || !x.allFinite()) {
                Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
                cg.setTolerance(1e-12);
                cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * static_cast<Eigen::Index>(n_unknown)));
                cg.compute(g);
                x = cg.solve(rhs);
                if (cg.info() != Eigen::Success) {
                    throw SolverError("crossbar iterative solve did not converge, residual "
                            + std::to_string(cg.error()));
                }
            }
        }
        std::vector<double> out(xb.n_neurons);
        for (std::size_t j = 0; j < xb.n_neurons; ++j) {
            out[j] = sense[j] >= n_unknown ? phys(sense[j] - n_unknown)
                                           : x[static_cast<Eigen::Index>(sense[j])];
        }
        return out;
    }
};

CrossbarSolver::CrossbarSolver(const CrossbarInstance &xb) : impl_(std::make_unique<Impl>(xb)) {}
CrossbarSolver::~CrossbarSolver() = default;
CrossbarSolver::CrossbarSolver(CrossbarSolver &&) noexcept = default;
CrossbarSolver &CrossbarSolver::operator=(CrossbarSolver &&) noexcept = default;

std::vector<double> CrossbarSolver::solve(std::span<const double> inputs) const
{
    return impl_->solve(inputs);
}

std::size_t CrossbarSolver::unknowns() const { return impl_->n_unknown; }

const CrossbarInstance &CrossbarSolver::instance() const { return impl_->xb; }

std::vector<double> nonideal_solve(const CrossbarInstance &xb, std::span<const double> inputs)
{
    return CrossbarSolver(xb).solve(inputs);
}

DacOutput dac_convert(std::uint8_t v8, double v_read)
{
    const double v = v8 / 255.0 * v_read;
    return {v, -v};
}

std::vector<double> crossbar_layer_forward_levels(const CrossbarSolver &solver,
        std::span<const double> levels)
{
    auto dp = solver.solve(levels);
    for (double &d : dp) {
        d = threshold_readout(d);
    }
    return dp;
}

std::vector<double> crossbar_layer_forward(const CrossbarSolver &solver,
        std::span<const std::uint8_t> inputs)
{
    std::vector<double> levels(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        levels[i] = dac_convert(inputs[i]).true_line;
    }
    return crossbar_layer_forward_levels(solver, levels);
}

} // namespace xbarsim
