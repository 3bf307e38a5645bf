// One PASS/FAIL line per acceptance criterion. Exits 0 when every failing
// criterion is in the known-infeasible set (see README).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <string>
#include <unistd.h>
#include <vector>

#include "xbarsim/catalog.hpp"
#include "xbarsim/crossbar.hpp"
#include "xbarsim/device.hpp"
#include "xbarsim/estimator.hpp"
#include "xbarsim/experiments.hpp"
#include "xbarsim/mapper.hpp"

using namespace xbarsim;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double area_tol_mm2 = 0.01;
constexpr double deep_risc_center = 901, deep_risc_band = 9;
constexpr double ocr_risc_tol = 0.02;
constexpr double deep_digital_power_tol = 0.05;
constexpr double deep_itim_power_tol = 0.20;
constexpr double efficiency_factor = 3.0;
constexpr double itim_eff_lo = 1e3, itim_eff_hi = 1e6;
constexpr double core_count_tol = 0.50;
constexpr double eq3_rel_tol = 1e-9;
constexpr double switch_time = 80e-9, switch_tol = 0.20;
constexpr double r_on_rel_tol = 1e-15;
constexpr double converge_fraction = 0.95;
constexpr std::size_t converge_pulses = 100;
constexpr double agree_fraction = 0.98;
constexpr double sigmoid_gap = 0.02, threshold_gap = 0.05, ordering_slack = 0.005;
constexpr double retrain_gap = 0.02;

const std::set<int> known_infeasible{2, 8};

struct Published {
    AppId app;
    CoreType arch;
    double cores, area, power, efficiency;
};

const Published tables[] = {
        {AppId::deep, CoreType::risc, 902, 472.65, 78474.00, 1},
        {AppId::deep, CoreType::digital, 9, 1.88, 82.40, 952},
        {AppId::deep, CoreType::itim, 31, 0.25, 0.42, 187064},
        {AppId::edge, CoreType::risc, 240, 125.76, 20880.00, 1},
        {AppId::edge, CoreType::digital, 18, 3.75, 433.16, 48},
        {AppId::edge, CoreType::itim, 16, 0.13, 1.41, 14813},
        {AppId::motion, CoreType::risc, 7, 3.67, 609.00, 1},
        {AppId::motion, CoreType::digital, 2, 0.42, 42.57, 14},
        {AppId::motion, CoreType::itim, 2, 0.02, 0.11, 5641},
        {AppId::objrec, CoreType::risc, 1358, 711.59, 118146.00, 1},
        {AppId::objrec, CoreType::digital, 17, 3.54, 148.55, 795},
        {AppId::objrec, CoreType::itim, 68, 0.56, 0.94, 125430},
        {AppId::ocr, CoreType::risc, 825, 432.30, 71775.00, 1},
        {AppId::ocr, CoreType::digital, 13, 2.71, 119.08, 603},
        {AppId::ocr, CoreType::itim, 31, 0.25, 0.49, 147012},
};

// Per-core area, total power, leakage, processing time.
struct Unit {
    double area, total, leak, time;
};
Unit unit_of(CoreType t)
{
    switch (t) {
    case CoreType::risc:
        return {0.524, 87.0, 54.0, 3.97e-5};
    case CoreType::digital:
        return {0.208, 24.2, 6.94, 1.28e-6};
    case CoreType::itim:
        return {0.0082, 0.0888, 0.0118, 9e-8};
    }
    return {};
}

const Published &published(AppId app, CoreType arch)
{
    for (const auto &p : tables) {
        if (p.app == app && p.arch == arch) {
            return p;
        }
    }
    std::abort();
}

std::string cell(AppId app, CoreType arch) { return app_name(app) + "/" + core_type_name(arch); }

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string &why)
    {
        pass = false;
        detail += (detail.empty() ? "" : "; ") + why;
    }
    void note(const std::string &s) { detail += (detail.empty() ? "" : "; ") + s; }
};

Outcome area_identity()
{
    Outcome o;
    double worst = 0.0;
    for (const auto &p : tables) {
        const double oracle = p.cores * unit_of(p.arch).area;
        const double model = system_area(p.cores, p.arch);
        worst = std::max(worst, std::abs(model - p.area));
        if (std::abs(model - oracle) > 1e-9 || std::abs(model - p.area) > area_tol_mm2) {
            o.fail(cell(p.app, p.arch) + " area " + fmt("%.4f", model) + " vs " + fmt("%.2f", p.area));
        }
    }
    o.note("15 rows, worst |delta| " + fmt("%.4f", worst) + " mm2 (tol 0.01)");
    return o;
}

Outcome risc_sizing()
{
    Outcome o;
    const double per_synapse = unit_of(CoreType::risc).time / 784.0;
    const auto deep = catalog_entry(AppId::deep);
    const auto ocr = catalog_entry(AppId::ocr);
    const double deep_syn = 784.0 * 200 + 200.0 * 100 + 100.0 * 10;
    const double ocr_syn = 2500.0 * 60 + 60.0 * 26;
    if (std::get<SynapseWorkload>(deep.risc).synapses != deep_syn
            || std::get<SynapseWorkload>(ocr.risc).synapses != ocr_syn) {
        o.fail("synapse counts differ from the topologies");
    }
    const double deep_oracle = std::ceil(1e5 * deep_syn * per_synapse);
    const double ocr_oracle = std::ceil(1e5 * ocr_syn * per_synapse);
    const auto deep_n = static_cast<double>(risc_core_count(deep.risc, deep.pattern_rate));
    const auto ocr_n = static_cast<double>(risc_core_count(ocr.risc, ocr.pattern_rate));
    if (deep_n != deep_oracle || ocr_n != ocr_oracle) {
        o.fail("model differs from the per-synapse oracle");
    }
    if (std::abs(deep_n - deep_risc_center) > deep_risc_band) {
        o.fail("deep " + fmt("%.0f", deep_n) + " outside 901+-9");
    }
    const double ocr_dev = (ocr_n - 825.0) / 825.0;
    if (std::abs(ocr_dev) > ocr_risc_tol) {
        o.fail("ocr " + fmt("%.0f", ocr_n) + " vs 825 (" + fmt("%+.1f", 100 * ocr_dev) + "%, tol 2%)");
    }
    o.note("deep " + fmt("%.0f", deep_n) + ", ocr " + fmt("%.0f", ocr_n) + " (151560 synapses)");
    return o;
}

double count_power_oracle(double n, CoreType t, double rate, double bits)
{
    const Unit u = unit_of(t);
    const double duty = std::min(1.0, rate * u.time);
    return n * (u.leak + (u.total - u.leak) * duty) + bits * rate * 0.05e-12 * 1e3;
}

Outcome power_reconstruction()
{
    Outcome o;
    const double bits = 784 * 8, rate = 1e5;
    const double dig = count_power(9, CoreType::digital, rate, bits, {}).total_mw();
    const double itim = count_power(31, CoreType::itim, rate, bits, {}).total_mw();
    if (std::abs(dig - count_power_oracle(9, CoreType::digital, rate, bits)) > 1e-9
            || std::abs(itim - count_power_oracle(31, CoreType::itim, rate, bits)) > 1e-12) {
        o.fail("model differs from the duty-cycle oracle");
    }
    const double rd = (dig - 82.40) / 82.40, ri = (itim - 0.42) / 0.42;
    if (std::abs(rd) > deep_digital_power_tol) {
        o.fail("digital " + fmt("%.2f", dig) + " mW");
    }
    if (std::abs(ri) > deep_itim_power_tol) {
        o.fail("itim " + fmt("%.4f", itim) + " mW");
    }
    o.note("digital " + fmt("%.2f", dig) + " mW (residual " + fmt("%+.2f", 100 * rd) + "%), itim "
            + fmt("%.4f", itim) + " mW (residual " + fmt("%+.1f", 100 * ri) + "%)");
    return o;
}

std::vector<AppReport> estimate_all()
{
    std::vector<AppReport> out;
    for (const AppId app : all_apps) {
        out.push_back(estimate_app(catalog_entry(app)));
    }
    return out;
}

Outcome efficiency_ordering(const std::vector<AppReport> &reports)
{
    Outcome o;
    double lo = 1e300, hi = 0.0, worst_ratio = 1.0;
    for (const auto &rep : reports) {
        const double e = rep.mapped[2].efficiency;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
        if (!(e >= itim_eff_lo && e < itim_eff_hi)) {
            o.fail(app_name(rep.app) + " itim efficiency " + fmt("%.3g", e));
        }
        for (const std::size_t k : {std::size_t{1}, std::size_t{2}}) {
            const auto &pc = rep.published_count[k];
            const double r = pc.efficiency / published(rep.app, pc.arch).efficiency;
            worst_ratio = std::max({worst_ratio, r, 1.0 / r});
            if (r > efficiency_factor || r < 1.0 / efficiency_factor) {
                o.fail(cell(rep.app, pc.arch) + " published-count efficiency ratio " + fmt("%.2f", r));
            }
        }
    }
    o.note("mapped itim efficiency " + fmt("%.3g", lo) + ".." + fmt("%.3g", hi)
            + ", worst published-count factor " + fmt("%.2f", worst_ratio));
    return o;
}

Outcome mapper_tolerance(const std::vector<AppReport> &reports)
{
    Outcome o;
    double worst = 0.0;
    std::string counts;
    for (const auto &rep : reports) {
        for (const auto &m : rep.mapped) {
            const double ref = published(rep.app, m.arch).cores;
            const double dev = (m.cores - ref) / ref;
            worst = std::max(worst, std::abs(dev));
            counts += (counts.empty() ? "" : " ") + cell(rep.app, m.arch) + "=" + fmt("%.0f", m.cores);
            if (std::abs(dev) > core_count_tol + 1e-12) {
                o.fail(cell(rep.app, m.arch) + " " + fmt("%.0f", m.cores) + " vs " + fmt("%.0f", ref));
            }
        }
    }
    o.note("worst deviation " + fmt("%.1f", 100 * worst) + "%; " + counts);
    return o;
}

// Summing-node voltage with every wire ideal.
std::vector<double> eq3_oracle(const CrossbarInstance &xb, const std::vector<double> &v)
{
    std::vector<double> out(xb.n_neurons);
    for (std::size_t j = 0; j < xb.n_neurons; ++j) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < xb.rows(); ++i) {
            const double vi = i < xb.n_inputs ? v[i] : 1.0;
            const SynapsePair &p = xb.pair(i, j);
            num += vi * (p.g_plus - p.g_minus);
            den += p.g_plus + p.g_minus;
        }
        out[j] = num / den;
    }
    return out;
}

CrossbarInstance random_crossbar(Rng &rng, std::size_t inputs, std::size_t cols, double wire_r)
{
    Matrix w(inputs + 1, cols);
    for (auto &x : w.data) {
        x = rng.uniform(-1.0, 1.0);
    }
    return make_crossbar(w, true, {}, wire_r).first;
}

Outcome solver_equivalence()
{
    Outcome o;
    Rng rng(2024);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const CrossbarInstance xb = random_crossbar(rng, 127, 64, 0.0);
        std::vector<double> v(127);
        for (auto &x : v) {
            x = rng.uniform(-1.0, 1.0);
        }
        const auto got = nonideal_solve(xb, v);
        const auto want = eq3_oracle(xb, v);
        for (std::size_t j = 0; j < want.size(); ++j) {
            worst = std::max(worst, std::abs(got[j] - want[j]) / std::max(std::abs(want[j]), 1e-12));
        }
    }
    if (worst > eq3_rel_tol) {
        o.fail("max relative error " + fmt("%.3e", worst));
    }
    const std::vector<double> wires{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
    Matrix w(128, 64);
    for (auto &x : w.data) {
        x = rng.uniform(-1.0, 1.0);
    }
    std::vector<std::vector<double>> inputs(20, std::vector<double>(127));
    for (auto &in : inputs) {
        for (auto &x : in) {
            x = rng.uniform(-1.0, 1.0);
        }
    }
    std::vector<double> curve;
    for (const double r : wires) {
        const CrossbarInstance xb = make_crossbar(w, true, {}, r).first;
        const CrossbarSolver solver(xb);
        double err = 0.0;
        for (const auto &in : inputs) {
            const auto got = solver.solve(in);
            const auto want = eq3_oracle(xb, in);
            for (std::size_t j = 0; j < want.size(); ++j) {
                err += std::abs(got[j] - want[j]);
            }
        }
        curve.push_back(err / (20.0 * 64.0));
    }
    std::string text;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        text += (i ? "," : "") + fmt("%.2e", curve[i]);
        if (i > 0 && !(curve[i] > curve[i - 1])) {
            o.fail("error not increasing at R=" + fmt("%g", wires[i]));
        }
    }
    o.note("100 instances 128x64, max rel error " + fmt("%.2e", worst) + "; mean |dV| vs R: " + text);
    return o;
}

Outcome device_calibration()
{
    Outcome o;
    const DeviceParams p;
    DeviceState s = fresh_device(p);
    const double dt = 0.01e-9;
    double t = 0.0;
    while (s.x < 0.99 && t < 1e-6) {
        s = step_state(p, s, 4.25, dt);
        t += dt;
    }
    // Below x_p the window is 1 and the rate is constant.
    const double k = p.a_p * (std::exp(4.25) - std::exp(p.v_p));
    const double linear_part = (p.x_p - p.x0) / k;
    if (std::abs(t - switch_time) > switch_tol * switch_time) {
        o.fail("switching took " + fmt("%.1f", t * 1e9) + " ns");
    }
    if (t < linear_part) {
        o.fail("faster than the closed-form lower bound");
    }
    bool frozen = true;
    Rng rng(7);
    for (int i = 0; i < 2000 && frozen; ++i) {
        const double x = rng.uniform();
        const double v = rng.uniform(-4.0, 4.0);
        frozen = step_state(p, {x}, v, rng.uniform(1e-12, 1e-6)).x == x;
    }
    for (const double v : {-4.0, 4.0}) {
        frozen = frozen && step_state(p, {0.5}, v, 1e-3).x == 0.5;
    }
    if (!frozen) {
        o.fail("sub-threshold drive moved the state");
    }
    const double r_on = 1.0 / small_signal_conductance(p, {1.0});
    const double rel = std::abs(r_on - 125e3) / 125e3;
    if (rel > r_on_rel_tol) {
        o.fail("R(x=1) " + fmt("%.9g", r_on));
    }
    o.note("0.001->0.99 in " + fmt("%.2f", t * 1e9) + " ns (window-1 part " + fmt("%.2f", linear_part * 1e9)
            + " ns); |V|<=4 frozen; R(x=1) = " + fmt("%.6f", r_on) + " ohm (rel " + fmt("%.1e", rel) + ")");
    return o;
}

Outcome program_and_verify()
{
    Outcome o;
    ProgrammingConfig cfg;
    cfg.variation_sigma = 0.05;
    cfg.seed = 11;
    const ProgrammingStudy ps = programming_monte_carlo(10000, cfg);
    const double frac = static_cast<double>(ps.verified) / static_cast<double>(ps.targets);
    const double true_frac = static_cast<double>(ps.within_tolerance) / static_cast<double>(ps.targets);
    if (ps.targets != 10000 || frac < converge_fraction) {
        o.fail("converged within " + std::to_string(converge_pulses) + " pulses " + fmt("%.4f", frac));
    }
    const AgreementStudy ag = programmed_agreement(127, 64, 1000, cfg, 1.0, 12);
    const double whole = static_cast<double>(ag.inputs_all_agree) / static_cast<double>(ag.inputs);
    if (ag.inputs != 1000 || whole < agree_fraction) {
        o.fail("programmed layer matches on " + fmt("%.4f", whole) + " of 1000 inputs");
    }
    if (ag.programming.failure_rate() >= 0.01) {
        o.fail("failure rate " + fmt("%.4f", ag.programming.failure_rate()));
    }
    o.note("verified " + fmt("%.4f", frac) + " (true G in band " + fmt("%.4f", true_frac) + ", mean "
            + fmt("%.1f", ps.mean_pulses) + " pulses); per-neuron agreement " + fmt("%.4f", ag.rate())
            + ", failure rate " + fmt("%.4f", ag.programming.failure_rate()));
    return o;
}

std::string data_root()
{
    const char *env = std::getenv("XBARSIM_DATA");
    return env ? env : "";
}

double accuracy_of(const std::vector<QuantRow> &rows, const std::string &act, int bits)
{
    for (const auto &r : rows) {
        if (r.activation == act && r.bits == bits) {
            return r.accuracy;
        }
    }
    return -1.0;
}

Outcome quantization(const TrainTestSplit &data)
{
    Outcome o;
    QuantConfig q;
    q.bits = {8, 4};
    const auto rows = quantization_study(data, q, 1);
    const double sf = accuracy_of(rows, "sigmoid", 0), s8 = accuracy_of(rows, "sigmoid", 8),
                 s4 = accuracy_of(rows, "sigmoid", 4);
    const double tf = accuracy_of(rows, "threshold", 0), t8 = accuracy_of(rows, "threshold", 8),
                 t4 = accuracy_of(rows, "threshold", 4);
    if (std::abs(s8 - sf) > sigmoid_gap) {
        o.fail("8-bit sigmoid gap " + fmt("%.4f", s8 - sf));
    }
    if (sf - t8 > threshold_gap || std::abs(t8 - tf) > threshold_gap) {
        o.fail("8-bit threshold gap " + fmt("%.4f", t8 - sf));
    }
    for (const auto &[f, b8, b4, name] : {std::tuple{sf, s8, s4, "sigmoid"}, std::tuple{tf, t8, t4, "threshold"}}) {
        if (f + ordering_slack < b8 || b8 + ordering_slack < b4) {
            o.fail(std::string(name) + " ordering");
        }
    }
    o.note(data.train.source + " " + std::to_string(data.train.size()) + "/" + std::to_string(data.test.size())
            + "; sigmoid float/8/4 " + fmt("%.4f", sf) + "/" + fmt("%.4f", s8) + "/" + fmt("%.4f", s4)
            + ", threshold " + fmt("%.4f", tf) + "/" + fmt("%.4f", t8) + "/" + fmt("%.4f", t4));
    return o;
}

double dyadic(Rng &rng, int denom) { return static_cast<double>(static_cast<int>(rng.below(2 * denom + 1)) - denom) / denom; }

Outcome splitting(const TrainTestSplit &data)
{
    Outcome o;
    Rng rng(31);
    std::size_t compared = 0;
    for (const CoreShape shape : {CoreShape{128, 64, true}, CoreShape{256, 128, false}}) {
        NetworkSpec net = make_network({900, 150, 10}, Linear{}, Linear{});
        for (auto &layer : net.layers) {
            for (auto &w : layer.weights.data) {
                w = dyadic(rng, 64);
            }
        }
        const auto rw = rewrite_network(net, shape);
        if (rw.net.layers.size() <= net.layers.size()) {
            o.fail("network was not split");
        }
        for (int t = 0; t < 50; ++t) {
            std::vector<double> x(900);
            for (auto &v : x) {
                v = dyadic(rng, 256);
            }
            const auto a = forward(net, x), b = forward(rw.net, x);
            compared += a.size();
            if (a != b) {
                o.fail("linear split output differs");
                break;
            }
        }
    }

    TrainOptions opt;
    opt.epochs = 8;
    opt.learning_rate = 0.05;
    opt.seed = 5;
    NetworkSpec base = make_network({784, 64, 10}, Sigmoid{}, Sigmoid{});
    initialize_weights(base, 5);
    const auto rw = rewrite_network(base, CoreShape{128, 64, true});
    const double acc_base = evaluate_accuracy(train_sgd(base, data.train, opt).net, data.test);
    const double acc_split = evaluate_accuracy(retrain_split(base, rw.net, data.train, opt), data.test);
    if (std::abs(acc_split - acc_base) > retrain_gap) {
        o.fail("retrained split accuracy gap " + fmt("%.4f", acc_split - acc_base));
    }
    o.note(std::to_string(compared) + " dyadic outputs bit-exact; 784->64->10 baseline " + fmt("%.4f", acc_base)
            + ", split+retrained (" + std::to_string(rw.net.layers.size()) + " layers) " + fmt("%.4f", acc_split));
    return o;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism()
{
    Outcome o;
#if defined(XBARSIM_CLI_PATH) && defined(XBARSIM_TEST_DATA_DIR)
    const fs::path work = fs::temp_directory_path() / ("xbarsim-accept-" + std::to_string(::getpid()));
    const std::string cfg = std::string(XBARSIM_TEST_DATA_DIR) + "/determinism.ini";
    std::size_t files = 0;
    for (const char *cmd : {"tables", "quant", "validate", "sweep", "map", "program"}) {
        for (const char *run : {"a", "b"}) {
            const std::string line = std::string("XBARSIM_DATA= \"") + XBARSIM_CLI_PATH + "\" " + cmd
                    + " --config \"" + cfg + "\" --seed 7 --out \"" + (work / cmd / run).string() + "\" > /dev/null";
            if (std::system(line.c_str()) != 0) {
                o.fail(std::string(cmd) + " run " + run + " failed");
                return o;
            }
        }
        const fs::path a = work / cmd / "a", b = work / cmd / "b";
        std::size_t here = 0;
        for (const auto &e : fs::directory_iterator(a)) {
            const fs::path other = b / e.path().filename();
            ++here;
            if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
                o.fail(std::string(cmd) + ": " + e.path().filename().string() + " differs");
            }
        }
        if (here == 0 || here != static_cast<std::size_t>(std::distance(fs::directory_iterator(b), {}))) {
            o.fail(std::string(cmd) + ": file sets differ");
        }
        files += here;
    }
    fs::remove_all(work);
    o.note("6 subcommands run twice, " + std::to_string(files) + " report files byte-identical");
#else
    o.fail("built without the CLI");
#endif
    return o;
}

} // namespace

int main()
{
    struct Row {
        int id;
        std::string name;
        Outcome outcome;
        double seconds;
    };
    std::vector<Row> rows;
    const auto run = [&](int id, const std::string &name, auto &&fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception &e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %-28s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), s);
        std::fflush(stdout);
        rows.push_back({id, name, o, s});
    };

    run(1, "area-identity", area_identity);
    run(2, "risc-sizing", risc_sizing);
    run(3, "power-reconstruction", power_reconstruction);
    std::vector<AppReport> reports;
    try {
        reports = estimate_all();
    } catch (const std::exception &e) {
        std::printf("estimate failed: %s\n", e.what());
    }
    run(4, "efficiency-ordering", [&] { return efficiency_ordering(reports); });
    run(5, "mapper-tolerance", [&] { return mapper_tolerance(reports); });
    run(6, "solver-equivalence", solver_equivalence);
    run(7, "device-calibration", device_calibration);
    run(8, "program-and-verify", program_and_verify);
    const TrainTestSplit data = load_digit_data(data_root(), 10000, 2000, 1);
    run(9, "quantization", [&] { return quantization(data); });
    run(10, "splitting", [&] { return splitting(data); });
    run(11, "determinism", determinism);

    std::vector<int> unexpected;
    std::size_t passed = 0;
    for (const auto &r : rows) {
        if (r.outcome.pass) {
            ++passed;
            if (known_infeasible.count(r.id)) {
                std::printf("note: criterion %d is listed as infeasible but passed\n", r.id);
            }
        } else if (!known_infeasible.count(r.id)) {
            unexpected.push_back(r.id);
        }
    }
    std::printf("%zu/%zu criteria pass; known infeasible:", passed, rows.size());
    for (const int id : known_infeasible) {
        std::printf(" %d", id);
    }
    std::printf("\n");
    if (!unexpected.empty()) {
        std::printf("unexpected failures:");
        for (const int id : unexpected) {
            std::printf(" %d", id);
        }
        std::printf("\n");
        return 1;
    }
    return 0;
}
