#include "xbarsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "xbarsim/engine.hpp"
#include "xbarsim/noc.hpp"

namespace xbarsim {

using json = nlohmann::ordered_json;

namespace {

std::string num(double v, const char *f = "%.6g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

json provenance(const ExperimentConfig &cfg)
{
    json j;
    j["config_hash"] = config_hash(cfg);
    j["seed"] = cfg.seed;
    j["calibration"] = {
        {"tsv_pj_per_bit", cfg.estimator.constants.tsv_pj_per_bit},
        {"hop_energy_pj_per_flit", cfg.estimator.constants.hop_energy_pj
                        ? json(*cfg.estimator.constants.hop_energy_pj)
                        : json("unset")},
        {"nonvolatile_idle_off", cfg.estimator.constants.nonvolatile_idle_off},
        {"memristor_control_cycles", cfg.estimator.memristor.control_cycles},
        {"risc_seconds_per_synapse", risc_seconds_per_synapse},
        {"edge_seconds_per_op", edge_seconds_per_op},
        {"motion_seconds_per_op", motion_seconds_per_op},
    };
    return j;
}

json power_json(const PowerBreakdown &p)
{
    return {{"total_mw", p.total_mw()}, {"leakage_mw", p.leakage_mw}, {"dynamic_mw", p.dynamic_mw},
            {"routing_mw", p.routing_mw}, {"tsv_mw", p.tsv_mw}, {"max_duty", p.max_duty},
            {"saturated", p.saturated}};
}

std::string xml_escape(const std::string &s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

bool wanted(const ExperimentConfig &cfg, CoreType t)
{
    return std::find(cfg.archs.begin(), cfg.archs.end(), t) != cfg.archs.end();
}

struct Delta {
    std::string app, arch, metric;
    double ours = 0.0, published = 0.0;
    std::string tolerance;
    bool pass = true;
};

} // namespace

RunOutput run_tables(const ExperimentConfig &cfg)
{
    RunOutput out;
    json root;
    root["provenance"] = provenance(cfg);
    root["apps"] = json::array();
    std::vector<Delta> deltas;
    EstimatorOptions opt = cfg.estimator;
    for (const AppId app : cfg.apps) {
        const AppCatalogEntry entry = catalog_entry(app, cfg.frame, cfg.character_rate);
        const AppReport rep = estimate_app(entry, opt);
        json ja;
        ja["app"] = entry.name;
        ja["pattern_rate"] = entry.pattern_rate;
        ja["rate_basis"] = entry.rate_basis;
        ja["input_bits_per_pattern"] = entry.input_bits_per_pattern;
        ja["reference"] = "[PAPER " + published_table_label(app) + "]";
        ja["archs"] = json::array();
        for (std::size_t k = 0; k < rep.mapped.size(); ++k) {
            const ArchReport &m = rep.mapped[k];
            if (!wanted(cfg, m.arch)) {
                continue;
            }
            const ArchReport &pc = rep.published_count[k];
            const PublishedRow ref = published_row(app, m.arch);
            const std::string arch = core_type_name(m.arch);
            json jr;
            jr["arch"] = arch;
            jr["model"] = {{"cores", m.cores}, {"instance_cores", m.instance_cores},
                    {"replication", m.replication}, {"interval_s", m.interval_s},
                    {"routing_latency_s", m.routing_latency_s}, {"area_mm2", m.area_mm2},
                    {"power", power_json(m.power)}, {"efficiency", m.efficiency}};
            jr["paper_counts"] = {{"cores", pc.cores}, {"area_mm2", pc.area_mm2},
                    {"power", power_json(pc.power)}, {"efficiency", pc.efficiency}};
            jr["paper"] = {{"cores", ref.cores}, {"area_mm2", ref.area_mm2},
                    {"power_mw", ref.power_mw}, {"efficiency", ref.efficiency}};
            ja["archs"].push_back(jr);

            const double core_tol = m.arch == CoreType::risc ? 0.02 : 0.5;
            deltas.push_back({entry.name, arch, "cores", m.cores, ref.cores,
                    "+-" + num(core_tol * 100) + "%",
                    std::abs(m.cores - ref.cores) <= core_tol * ref.cores});
            deltas.push_back({entry.name, arch, "area_at_paper_count", pc.area_mm2, ref.area_mm2,
                    "+-0.01 mm2", std::abs(pc.area_mm2 - ref.area_mm2) <= 0.01 + 1e-12});
            const bool deep_digital = app == AppId::deep && m.arch == CoreType::digital;
            const double power_tol = deep_digital ? 0.05 : 0.2;
            deltas.push_back({entry.name, arch, "power_at_paper_count", pc.power.total_mw(),
                    ref.power_mw, "+-" + num(power_tol * 100) + "%",
                    std::abs(pc.power.total_mw() - ref.power_mw) <= power_tol * ref.power_mw});
            if (m.arch != CoreType::risc) {
                const double r = pc.efficiency / ref.efficiency;
                deltas.push_back({entry.name, arch, "efficiency_at_paper_count", pc.efficiency,
                        ref.efficiency, "within 3x", r >= 1.0 / 3.0 && r <= 3.0});
            }
            if (m.arch == CoreType::itim) {
                deltas.push_back({entry.name, arch, "efficiency_model", m.efficiency, ref.efficiency,
                        "[1e3, 1e6)", m.efficiency >= 1e3 && m.efficiency < 1e6});
            }
        }
        root["apps"].push_back(ja);
    }

    std::ostringstream csv;
    csv << "app,arch,metric,ours,paper,ratio,tolerance,pass\n";
    std::size_t fails = 0;
    json jd = json::array();
    for (const auto &d : deltas) {
        csv << d.app << ',' << d.arch << ',' << d.metric << ',' << num(d.ours, "%.9g") << ','
            << num(d.published, "%.9g") << ',' << num(d.ours / d.published, "%.6g") << ',' << d.tolerance
            << ',' << (d.pass ? "pass" : "FAIL") << '\n';
        fails += d.pass ? 0 : 1;
        jd.push_back({{"app", d.app}, {"arch", d.arch}, {"metric", d.metric}, {"ours", d.ours},
                {"paper", d.published}, {"tolerance", d.tolerance}, {"pass", d.pass}});
    }
    root["deltas"] = jd;
    out.files["tables.json"] = root.dump(2) + "\n";
    out.files["tables_delta.csv"] = csv.str();
    out.summary = "tables: " + std::to_string(deltas.size() - fails) + "/" + std::to_string(deltas.size())
            + " checks within tolerance\n";
    for (const auto &d : deltas) {
        if (!d.pass) {
            out.summary += "  outside tolerance: " + d.app + "/" + d.arch + " " + d.metric + " ours="
                    + num(d.ours) + " paper=" + num(d.published) + "\n";
        }
    }
    return out;
}

TrainTestSplit load_digit_data(const std::string &root, std::size_t train, std::size_t test,
        std::uint64_t seed)
{
    if (!root.empty()) {
        if (auto mnist = find_mnist(root, train, test)) {
            return std::move(*mnist);
        }
    }
    return {synthetic_digits(train, seed), synthetic_digits(test, seed + 1)};
}

std::vector<QuantRow> quantization_study(const TrainTestSplit &data, const QuantConfig &q,
        std::uint64_t seed)
{
    std::vector<QuantRow> rows;
    const std::vector<std::pair<std::string, ActivationKind>> kinds{
            {"sigmoid", Sigmoid{}}, {"threshold", Threshold{}}};
    for (const auto &[name, act] : kinds) {
        NetworkSpec net = make_network({data.train.input_size, q.hidden, data.train.n_classes}, act, act);
        initialize_weights(net, seed);
        TrainOptions topt;
        topt.epochs = q.epochs;
        topt.learning_rate = q.learning_rate;
        topt.seed = seed;
        const NetworkSpec trained = train_sgd(net, data.train, topt).net;
        rows.push_back({name, 0, evaluate_accuracy(trained, data.test)});
        for (const int bits : q.bits) {
            rows.push_back({name, bits, evaluate_accuracy(quantize(trained, bits), data.test)});
        }
    }
    return rows;
}

RunOutput run_quantization_study(const ExperimentConfig &cfg, const TrainTestSplit &data)
{
    RunOutput out;
    const auto rows = quantization_study(data, cfg.quant, cfg.seed);
    std::ostringstream csv;
    csv << "activation,precision,accuracy\n";
    json j;
    j["provenance"] = provenance(cfg);
    j["dataset"] = {{"source", data.train.source}, {"train", data.train.size()}, {"test", data.test.size()}};
    j["topology"] = std::to_string(data.train.input_size) + "->" + std::to_string(cfg.quant.hidden) + "->"
            + std::to_string(data.train.n_classes);
    j["rows"] = json::array();
    for (const auto &r : rows) {
        const std::string prec = r.bits == 0 ? "float" : std::to_string(r.bits) + "bit";
        csv << r.activation << ',' << prec << ',' << num(r.accuracy, "%.4f") << '\n';
        j["rows"].push_back({{"activation", r.activation}, {"precision", prec}, {"accuracy", r.accuracy}});
        out.summary += r.activation + " " + prec + ": " + num(100 * r.accuracy, "%.2f") + "%\n";
    }
    out.files["quant.csv"] = csv.str();
    out.files["quant.json"] = j.dump(2) + "\n";
    return out;
}

namespace {

CrossbarInstance random_crossbar(std::size_t rows, std::size_t cols, double wire_r, Rng &rng)
{
    Matrix w(rows, cols);
    for (auto &v : w.data) {
        v = rng.uniform(-1.0, 1.0);
    }
    return make_crossbar(w, true, {}, wire_r).first;
}

std::vector<double> random_levels(std::size_t n, Rng &rng)
{
    std::vector<double> v(n);
    for (auto &x : v) {
        x = rng.uniform(-1.0, 1.0);
    }
    return v;
}

} // namespace

double zero_wire_max_relative_error(std::size_t instances, std::size_t rows, std::size_t cols,
        std::uint64_t seed)
{
    Rng rng(seed);
    double worst = 0.0;
    for (std::size_t k = 0; k < instances; ++k) {
        const CrossbarInstance xb = random_crossbar(rows, cols, 0.0, rng);
        const auto in = random_levels(xb.n_inputs, rng);
        const auto ideal = ideal_solve(xb, in);
        const auto nodal = nonideal_solve(xb, in);
        for (std::size_t j = 0; j < cols; ++j) {
            worst = std::max(worst, std::abs(nodal[j] - ideal[j]) / std::max(std::abs(ideal[j]), 1e-12));
        }
    }
    return worst;
}

std::vector<double> wire_error_curve(std::size_t rows, std::size_t cols,
        const std::vector<double> &wire_r, std::uint64_t seed)
{
    Rng rng(seed);
    CrossbarInstance xb = random_crossbar(rows, cols, 0.0, rng);
    const auto in = random_levels(xb.n_inputs, rng);
    const auto ideal = ideal_solve(xb, in);
    std::vector<double> out;
    for (const double r : wire_r) {
        xb.wire_r_segment = r;
        const auto nodal = nonideal_solve(xb, in);
        double sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            sum += std::abs(nodal[j] - ideal[j]);
        }
        out.push_back(sum / static_cast<double>(cols));
    }
    return out;
}

ProgrammingStudy programming_monte_carlo(std::size_t targets, const ProgrammingConfig &cfg)
{
    const DeviceParams params;
    const ConductanceBounds b = ConductanceBounds::of(params);
    Rng rng(cfg.seed);
    ProgrammingStudy s;
    s.targets = targets;
    double pulses = 0.0;
    for (std::size_t k = 0; k < targets; ++k) {
        const double target = rng.uniform(b.g_min, b.g_max);
        DeviceArray a = DeviceArray::fresh(params, 1, 1);
        const auto r = program_device(a, 0, 0, target, cfg, rng);
        const bool close = std::abs(a.conductance(0, 0) - target) <= cfg.tolerance * b.range();
        s.verified += r.converged && r.pulses <= 100 ? 1 : 0;
        s.within_tolerance += close ? 1 : 0;
        pulses += static_cast<double>(r.pulses);
        s.max_pulses = std::max(s.max_pulses, r.pulses);
    }
    s.mean_pulses = targets ? pulses / static_cast<double>(targets) : 0.0;
    return s;
}

AgreementStudy programmed_agreement(std::size_t rows, std::size_t cols, std::size_t inputs,
        const ProgrammingConfig &cfg, double wire_r, std::uint64_t seed)
{
    const DeviceParams params;
    const ConductanceBounds b = ConductanceBounds::of(params);
    Rng rng(seed);
    Matrix w(rows + 1, cols);
    for (auto &v : w.data) {
        v = rng.uniform(-1.0, 1.0);
    }
    const auto [exact, scale] = make_crossbar(w, true, b, wire_r);
    DeviceArray array = DeviceArray::fresh(params, 2 * exact.rows(), cols);
    AgreementStudy s;
    s.programming = program_core(array, exact.pairs, cfg);
    const CrossbarSolver ref(exact);
    const CrossbarSolver prog(array.to_crossbar(rows, true, wire_r));
    std::vector<std::uint8_t> x(rows);
    for (std::size_t k = 0; k < inputs; ++k) {
        for (auto &v : x) {
            v = static_cast<std::uint8_t>(rng.below(256));
        }
        const auto a = crossbar_layer_forward(ref, x);
        const auto p = crossbar_layer_forward(prog, x);
        std::size_t same = 0;
        for (std::size_t j = 0; j < cols; ++j) {
            same += a[j] == p[j] ? 1 : 0;
        }
        s.agreeing += same;
        s.comparisons += cols;
        s.inputs += 1;
        s.inputs_all_agree += same == cols ? 1 : 0;
    }
    return s;
}

std::string junit_xml(const std::string &suite, const std::vector<std::pair<std::string, std::string>> &cases,
        const std::map<std::string, std::string> &properties)
{
    std::size_t failures = 0;
    for (const auto &c : cases) {
        failures += c.second.empty() ? 0 : 1;
    }
    std::ostringstream x;
    x << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    x << "<testsuite name=\"" << xml_escape(suite) << "\" tests=\"" << cases.size() << "\" failures=\""
      << failures << "\" errors=\"0\">\n";
    x << "  <properties>\n";
    for (const auto &[k, v] : properties) {
        x << "    <property name=\"" << xml_escape(k) << "\" value=\"" << xml_escape(v) << "\"/>\n";
    }
    x << "  </properties>\n";
    for (const auto &[name, failure] : cases) {
        x << "  <testcase classname=\"" << xml_escape(suite) << "\" name=\"" << xml_escape(name) << "\"";
        if (failure.empty()) {
            x << "/>\n";
        } else {
            x << ">\n    <failure message=\"" << xml_escape(failure) << "\"/>\n  </testcase>\n";
        }
    }
    x << "</testsuite>\n";
    return x.str();
}

RunOutput run_crossbar_validation(const ExperimentConfig &cfg)
{
    const ValidationConfig &v = cfg.validation;
    std::vector<std::pair<std::string, std::string>> cases;
    std::map<std::string, std::string> props{{"config_hash", config_hash(cfg)},
            {"seed", std::to_string(cfg.seed)}};

    const double rel = zero_wire_max_relative_error(v.instances, v.rows, v.cols, cfg.seed);
    props["zero_wire_max_relative_error"] = num(rel, "%.3e");
    cases.emplace_back("zero_wire_matches_ideal_1e-9",
            rel <= 1e-9 ? "" : "max relative error " + num(rel, "%.3e"));

    const auto curve = wire_error_curve(v.rows, v.cols, v.wire_r, cfg.seed + 1);
    std::string curve_text;
    bool monotone = true;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        curve_text += (i ? "," : "") + num(curve[i], "%.6e");
        monotone = monotone && (i == 0 || curve[i] >= curve[i - 1]);
    }
    props["wire_error_curve"] = curve_text;
    cases.emplace_back("error_grows_with_wire_resistance", monotone ? "" : "curve " + curve_text);

    ProgrammingConfig pc = cfg.programming;
    pc.seed = cfg.seed;
    const ProgrammingStudy ps = programming_monte_carlo(v.program_targets, pc);
    const double frac = ps.targets ? static_cast<double>(ps.verified) / ps.targets : 0.0;
    props["programming_verified_within_100_pulses"] = num(frac, "%.4f");
    props["programming_true_conductance_within_tolerance"] =
            num(ps.targets ? static_cast<double>(ps.within_tolerance) / ps.targets : 0.0, "%.4f");
    props["programming_mean_pulses"] = num(ps.mean_pulses, "%.3f");
    cases.emplace_back("programming_converges_95pct_within_100_pulses",
            frac >= 0.95 ? "" : "fraction " + num(frac, "%.4f"));

    const AgreementStudy ag = programmed_agreement(v.agreement_rows, v.agreement_cols, v.agreement_inputs,
            pc, cfg.wire_r, cfg.seed + 2);
    const double whole = static_cast<double>(ag.inputs_all_agree) / std::max<std::size_t>(ag.inputs, 1);
    props["programmed_neuron_agreement"] = num(ag.rate(), "%.4f");
    props["programmed_inputs_fully_agreeing"] = num(whole, "%.4f");
    props["programming_failure_rate"] = num(ag.programming.failure_rate(), "%.4f");
    cases.emplace_back("programmed_matches_exact_98pct_of_inputs",
            whole >= 0.98 ? "" : "inputs with every output equal " + num(whole, "%.4f"));

    // Digital core against the reference integer model on random layers.
    Rng rng(cfg.seed + 3);
    bool digital_equal = true;
    DigitalCoreConfig dc;
    for (int t = 0; t < 20 && digital_equal; ++t) {
        NetworkSpec net = make_network({200, 100}, make_sigmoid_lut(), make_sigmoid_lut());
        initialize_weights(net, rng.next());
        const QuantizedNetwork q = quantize(net, 8);
        QuantizedActivity in;
        in.scale = 1.0 / 255.0;
        for (std::size_t i = 0; i < 200; ++i) {
            in.codes.push_back(static_cast<std::int64_t>(rng.below(256)));
        }
        digital_equal = digital_core_forward(dc, q.layers[0], in).output.codes
                == quantized_layer_forward(q.layers[0], in).output.codes;
    }
    cases.emplace_back("digital_core_matches_integer_model", digital_equal ? "" : "code mismatch");

    // Crossbar engine at zero wire resistance against the float model.
    NetworkSpec net = make_network({64, 32, 10}, Threshold{}, Threshold{});
    initialize_weights(net, cfg.seed + 4);
    const CrossbarNetwork xnet(net, 0);
    std::size_t same = 0;
    const std::size_t trials = 200;
    std::vector<std::uint8_t> px(64);
    for (std::size_t k = 0; k < trials; ++k) {
        for (auto &p : px) {
            p = static_cast<std::uint8_t>(rng.below(256));
        }
        same += classify_scores(xnet.scores(px)) == classify_scores(output_pre_activation(net, px)) ? 1 : 0;
    }
    cases.emplace_back("crossbar_engine_matches_float_classes",
            same == trials ? "" : std::to_string(trials - same) + " of " + std::to_string(trials) + " differ");

    RunOutput out;
    out.files["validation.xml"] = junit_xml("xbarsim-validate", cases, props);
    for (const auto &[name, failure] : cases) {
        out.summary += (failure.empty() ? "PASS " : "FAIL ") + name + (failure.empty() ? "" : ": " + failure) + "\n";
    }
    return out;
}

RunOutput run_sweep(const ExperimentConfig &cfg)
{
    RunOutput out;
    for (const CoreType arch : {CoreType::itim, CoreType::digital}) {
        if (!wanted(cfg, arch)) {
            continue;
        }
        const auto &sizes = arch == CoreType::itim ? cfg.memristor_sizes : cfg.digital_sizes;
        const auto rows = design_space_sweep(cfg.apps, sizes, arch, cfg.estimator, cfg.scaling, cfg.sweep_frame);
        out.files["sweep_" + core_type_name(arch) + ".csv"] = sweep_csv(rows);
        out.summary += core_type_name(arch) + ": " + std::to_string(rows.size()) + " rows\n";
    }
    return out;
}

RunOutput run_map(const ExperimentConfig &cfg)
{
    RunOutput out;
    for (const AppId app : cfg.apps) {
        const AppCatalogEntry entry = catalog_entry(app, cfg.frame, cfg.character_rate);
        for (const CoreType arch : cfg.archs) {
            if (arch == CoreType::risc) {
                continue;
            }
            const MapperTarget target = arch == CoreType::digital
                    ? MapperTarget::digital_target(cfg.estimator.digital)
                    : MapperTarget::itim_target(cfg.estimator.memristor);
            CoreAllocation alloc = pack_cores(entry.networks_for(arch), target, entry.name);
            const RoutedAllocation routed = route_allocation(alloc, cfg.estimator.constants.hop_energy_pj,
                    cfg.estimator.placement);
            alloc = replicate_for_rate(std::move(alloc), entry.pattern_rate);
            json j;
            j["provenance"] = provenance(cfg);
            j["app"] = entry.name;
            j["arch"] = core_type_name(arch);
            j["instance_cores"] = alloc.instance_cores();
            j["replication"] = alloc.replication;
            j["total_cores"] = alloc.total_cores();
            j["interval_s"] = alloc.interval;
            j["max_core_busy_s"] = alloc.max_core_busy;
            j["routing_latency_s"] = alloc.routing_latency;
            j["stage_latencies_s"] = alloc.stage_latencies;
            j["cores"] = json::array();
            for (std::size_t c = 0; c < alloc.cores.size(); ++c) {
                const CoreSlot &core = alloc.cores[c];
                json jc = {{"id", core.id}, {"kind", core_kind_name(core.kind)}, {"stage", core.stage},
                        {"x", routed.placement[c].x}, {"y", routed.placement[c].y},
                        {"rows_used", core.rows_used}, {"neurons_used", core.neurons_used},
                        {"busy_time_s", core.busy_time}};
                jc["sublayers"] = json::array();
                for (const auto &s : core.sublayers) {
                    jc["sublayers"].push_back({{"network", s.network}, {"copy", s.copy}, {"layer", s.layer},
                            {"source_layer", s.source_layer}, {"combiner", s.is_combiner},
                            {"neurons", {s.tile.begin, s.tile.end}}, {"rows", s.tile.rows(target.shape())}});
                }
                j["cores"].push_back(jc);
            }
            j["mesh"] = {{"width", routed.mesh.width}, {"height", routed.mesh.height},
                    {"link_bits", routed.mesh.link_bits}};
            j["slot_table"] = {{"latency_cycles", routed.table.latency_cycles}, {"flows", json::array()}};
            for (const auto &f : routed.table.flows) {
                j["slot_table"]["flows"].push_back({{"src", f.demand.src_core}, {"dst", f.demand.dst_core},
                        {"payload_bits", f.demand.payload_bits}, {"flits", f.flits},
                        {"hops", f.hops()}, {"start_slot", f.start_slot}, {"loopback", f.loopback()}});
            }
            out.files["map_" + entry.name + "_" + core_type_name(arch) + ".json"] = j.dump(2) + "\n";
            out.summary += entry.name + "/" + core_type_name(arch) + ": " + std::to_string(alloc.instance_cores())
                    + " cores x " + std::to_string(alloc.replication) + " = "
                    + std::to_string(alloc.total_cores()) + "\n";
        }
    }
    return out;
}

RunOutput run_program(const ExperimentConfig &cfg)
{
    RunOutput out;
    ProgrammingConfig pc = cfg.programming;
    pc.seed = cfg.seed;
    const ValidationConfig &v = cfg.validation;
    const AgreementStudy ag = programmed_agreement(v.agreement_rows, v.agreement_cols, v.agreement_inputs,
            pc, cfg.wire_r, cfg.seed + 2);
    const ProgrammingReport &r = ag.programming;
    json j;
    j["provenance"] = provenance(cfg);
    j["crossbar"] = {{"signal_rows", v.agreement_rows}, {"bias_row", true}, {"columns", v.agreement_cols},
            {"wire_r_segment", cfg.wire_r}};
    j["variation_sigma"] = pc.variation_sigma;
    j["tolerance"] = pc.tolerance;
    j["devices"] = r.devices.size();
    j["failures"] = r.failures.size();
    j["failure_rate"] = r.failure_rate();
    j["total_steps"] = r.total_steps;
    j["output_agreement"] = ag.rate();
    out.files["program.json"] = j.dump(2) + "\n";
    std::ostringstream csv;
    csv << "row,col,target_s,achieved_s,pulses,reads,converged\n";
    for (const auto &d : r.devices) {
        csv << d.row << ',' << d.col << ',' << num(d.target_g, "%.9e") << ',' << num(d.achieved_g, "%.9e")
            << ',' << d.pulses << ',' << d.reads << ',' << (d.converged ? 1 : 0) << '\n';
    }
    out.files["program_devices.csv"] = csv.str();
    out.summary = std::to_string(r.devices.size()) + " devices, " + std::to_string(r.failures.size())
            + " failed, " + std::to_string(r.total_steps) + " steps, output agreement "
            + num(100 * ag.rate(), "%.2f") + "%\n";
    return out;
}

} // namespace xbarsim
