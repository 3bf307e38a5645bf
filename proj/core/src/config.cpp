#include "xbarsim/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "xbarsim/serialize.hpp"

namespace xbarsim {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) {
            out.push_back(item.substr(b, e - b + 1));
        }
    }
    return out;
}

double to_double(const std::string &key, const std::string &v)
{
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != v.size()) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    return d;
}

std::uint64_t to_uint(const std::string &key, const std::string &v)
{
    std::uint64_t u = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), u);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return u;
}

bool to_bool(const std::string &key, const std::string &v)
{
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<CoreSize> to_sizes(const std::string &key, const std::string &v)
{
    std::vector<CoreSize> out;
    for (const auto &item : split_list(v)) {
        const auto x = item.find('x');
        if (x == std::string::npos) {
            throw ConfigError(key + ": sizes are written ROWSxCOLS, got '" + item + "'");
        }
        out.push_back({to_uint(key, item.substr(0, x)), to_uint(key, item.substr(x + 1))});
    }
    return out;
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T> &items, F f)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? "," : "") + f(items[i]);
    }
    return out;
}

std::string placement_name(Placement p) { return p == Placement::spread_dac ? "spread_dac" : "stage_order"; }

// Key table: setter from text and getter to canonical text for every key.
struct Key {
    std::function<void(ExperimentConfig &, const std::string &, const std::string &)> set;
    std::function<std::string(const ExperimentConfig &)> get;
};

#define NUM_KEY(path, field)                                                                      \
    {                                                                                             \
        path, Key                                                                                 \
        {                                                                                         \
            [](ExperimentConfig &c, const std::string &k, const std::string &v) {                 \
                c.field = static_cast<decltype(c.field)>(to_double(k, v));                         \
            },                                                                                    \
                    [](const ExperimentConfig &c) { return fmt(static_cast<double>(c.field)); }   \
        }                                                                                         \
    }
#define UINT_KEY(path, field)                                                                     \
    {                                                                                             \
        path, Key                                                                                 \
        {                                                                                         \
            [](ExperimentConfig &c, const std::string &k, const std::string &v) {                 \
                c.field = static_cast<decltype(c.field)>(to_uint(k, v));                           \
            },                                                                                    \
                    [](const ExperimentConfig &c) { return std::to_string(c.field); }             \
        }                                                                                         \
    }
#define BOOL_KEY(path, field)                                                                     \
    {                                                                                             \
        path, Key                                                                                 \
        {                                                                                         \
            [](ExperimentConfig &c, const std::string &k, const std::string &v) {                 \
                c.field = to_bool(k, v);                                                          \
            },                                                                                    \
                    [](const ExperimentConfig &c) { return std::string(c.field ? "true" : "false"); } \
        }                                                                                         \
    }

const std::map<std::string, Key> &keys()
{
    static const std::map<std::string, Key> table = {
        UINT_KEY("run.seed", seed),
        {"run.apps", {[](ExperimentConfig &c, const std::string &, const std::string &v) {
                          c.apps.clear();
                          for (const auto &a : split_list(v)) {
                              c.apps.push_back(parse_app(a));
                          }
                      },
                             [](const ExperimentConfig &c) { return join(c.apps, app_name); }}},
        {"run.archs", {[](ExperimentConfig &c, const std::string &, const std::string &v) {
                           c.archs.clear();
                           for (const auto &a : split_list(v)) {
                               c.archs.push_back(parse_core_type(a));
                           }
                       },
                              [](const ExperimentConfig &c) { return join(c.archs, core_type_name); }}},
        {"dataset.root", {[](ExperimentConfig &c, const std::string &, const std::string &v) { c.dataset.root = v; },
                                 [](const ExperimentConfig &c) { return c.dataset.root; }}},
        UINT_KEY("dataset.train", dataset.train),
        UINT_KEY("dataset.test", dataset.test),
        UINT_KEY("quant.hidden", quant.hidden),
        UINT_KEY("quant.epochs", quant.epochs),
        NUM_KEY("quant.learning_rate", quant.learning_rate),
        {"quant.bits", {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
                            c.quant.bits.clear();
                            for (const auto &b : split_list(v)) {
                                c.quant.bits.push_back(static_cast<int>(to_uint(k, b)));
                            }
                        },
                               [](const ExperimentConfig &c) {
                                   return join(c.quant.bits, [](int b) { return std::to_string(b); });
                               }}},
        UINT_KEY("validate.instances", validation.instances),
        UINT_KEY("validate.rows", validation.rows),
        UINT_KEY("validate.cols", validation.cols),
        {"validate.wire_r", {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
                                 c.validation.wire_r.clear();
                                 for (const auto &r : split_list(v)) {
                                     c.validation.wire_r.push_back(to_double(k, r));
                                 }
                             },
                                    [](const ExperimentConfig &c) { return join(c.validation.wire_r, fmt); }}},
        UINT_KEY("validate.program_targets", validation.program_targets),
        UINT_KEY("validate.agreement_inputs", validation.agreement_inputs),
        UINT_KEY("validate.agreement_rows", validation.agreement_rows),
        UINT_KEY("validate.agreement_cols", validation.agreement_cols),
        NUM_KEY("programming.v_write", programming.v_write),
        NUM_KEY("programming.pulse_width", programming.pulse_width),
        NUM_KEY("programming.min_pulse_width", programming.min_pulse_width),
        NUM_KEY("programming.v_read", programming.v_read),
        NUM_KEY("programming.r_sense", programming.r_sense),
        NUM_KEY("programming.adc_bits", programming.adc_bits),
        NUM_KEY("programming.tolerance", programming.tolerance),
        UINT_KEY("programming.max_pulses", programming.max_pulses),
        NUM_KEY("programming.variation_sigma", programming.variation_sigma),
        NUM_KEY("programming.wire_r", wire_r),
        NUM_KEY("estimator.tsv_pj_per_bit", estimator.constants.tsv_pj_per_bit),
        BOOL_KEY("estimator.nonvolatile_idle_off", estimator.constants.nonvolatile_idle_off),
        {"estimator.hop_energy_pj", {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
                                         if (v == "unset") {
                                             c.estimator.constants.hop_energy_pj.reset();
                                         } else {
                                             c.estimator.constants.hop_energy_pj = to_double(k, v);
                                         }
                                     },
                                            [](const ExperimentConfig &c) {
                                                const auto &h = c.estimator.constants.hop_energy_pj;
                                                return h ? fmt(*h) : std::string("unset");
                                            }}},
        {"estimator.placement", {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
                                     if (v == "stage_order") {
                                         c.estimator.placement = Placement::stage_order;
                                     } else if (v == "spread_dac") {
                                         c.estimator.placement = Placement::spread_dac;
                                     } else {
                                         throw ConfigError(k + ": expected stage_order or spread_dac");
                                     }
                                 },
                                        [](const ExperimentConfig &c) { return placement_name(c.estimator.placement); }}},
        NUM_KEY("estimator.character_rate", character_rate),
        UINT_KEY("estimator.frame_width", frame.width),
        UINT_KEY("estimator.frame_height", frame.height),
        NUM_KEY("estimator.fps", frame.fps),
        UINT_KEY("digital.max_inputs", estimator.digital.max_inputs),
        UINT_KEY("digital.max_neurons", estimator.digital.max_neurons),
        NUM_KEY("digital.clock_hz", estimator.digital.clock_hz),
        UINT_KEY("memristor.max_inputs", estimator.memristor.max_inputs),
        UINT_KEY("memristor.max_neurons", estimator.memristor.max_neurons),
        NUM_KEY("memristor.clock_hz", estimator.memristor.clock_hz),
        NUM_KEY("memristor.control_cycles", estimator.memristor.control_cycles),
        NUM_KEY("sweep.area_periphery", scaling.area_periphery),
        NUM_KEY("sweep.power_periphery", scaling.power_periphery),
        UINT_KEY("sweep.frame_width", sweep_frame.width),
        UINT_KEY("sweep.frame_height", sweep_frame.height),
        NUM_KEY("sweep.fps", sweep_frame.fps),
        {"sweep.memristor_sizes", {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
                                       c.memristor_sizes = to_sizes(k, v);
                                   },
                                          [](const ExperimentConfig &c) {
                                              return join(c.memristor_sizes, [](CoreSize s) {
                                                  return std::to_string(s.rows) + "x" + std::to_string(s.cols);
                                              });
                                          }}},
        {"sweep.digital_sizes", {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
                                     c.digital_sizes = to_sizes(k, v);
                                 },
                                        [](const ExperimentConfig &c) {
                                            return join(c.digital_sizes, [](CoreSize s) {
                                                return std::to_string(s.rows) + "x" + std::to_string(s.cols);
                                            });
                                        }}},
    };
    return table;
}

#undef NUM_KEY
#undef UINT_KEY
#undef BOOL_KEY

} // namespace

void ExperimentConfig::validate() const
{
    if (apps.empty() || archs.empty()) {
        throw ConfigError("run.apps and run.archs must not be empty");
    }
    if (!(character_rate > 0.0) || !(frame.fps > 0.0) || frame.width < 8 || frame.height < 8) {
        throw ConfigError("workload rate and frame geometry must be positive");
    }
    if (dataset.train == 0 || dataset.test == 0 || quant.hidden == 0 || quant.epochs == 0) {
        throw ConfigError("dataset and quant sizes must be positive");
    }
    for (const int b : quant.bits) {
        if (b < 2 || b > 16) {
            throw ConfigError("quant.bits entries must lie in [2, 16]");
        }
    }
    if (validation.rows == 0 || validation.cols == 0 || validation.agreement_rows == 0
            || validation.agreement_cols == 0) {
        throw ConfigError("validation crossbar sizes must be positive");
    }
    for (const double r : validation.wire_r) {
        if (r < 0.0) {
            throw ConfigError("validate.wire_r entries must be >= 0");
        }
    }
    if (wire_r < 0.0) {
        throw ConfigError("programming.wire_r must be >= 0");
    }
    programming.validate(DeviceParams{});
    estimator.digital.validate();
    estimator.memristor.validate();
    if (estimator.constants.tsv_pj_per_bit < 0.0) {
        throw ConfigError("estimator.tsv_pj_per_bit must be >= 0");
    }
    for (const auto *sizes : {&memristor_sizes, &digital_sizes}) {
        if (sizes->empty()) {
            throw ConfigError("sweep size lists must not be empty");
        }
        for (const auto &s : *sizes) {
            if (s.rows < 2 || s.cols == 0) {
                throw ConfigError("sweep sizes need at least 2 rows and 1 column");
            }
        }
    }
    // Surfaces periphery range errors early.
    scaled_core_cost(CoreType::itim, 128, 64, scaling);
}

ExperimentConfig parse_config(const std::string &text)
{
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }
    ExperimentConfig cfg;
    for (const auto &[section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("key '" + section + "' outside any section");
        }
        for (const auto &[name, value] : body) {
            const std::string key = section + "." + name;
            const auto it = keys().find(key);
            if (it == keys().end()) {
                throw ConfigError("unknown config key '" + key + "'");
            }
            it->second.set(cfg, key, value.data());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    return parse_config(read_text_file(path));
}

std::string config_text(const ExperimentConfig &cfg)
{
    std::string out;
    std::string section;
    for (const auto &[key, k] : keys()) {
        const auto dot = key.find('.');
        const std::string s = key.substr(0, dot);
        if (s != section) {
            out += (section.empty() ? "" : "\n") + ("[" + s + "]\n");
            section = s;
        }
        out += key.substr(dot + 1) + " = " + k.get(cfg) + "\n";
    }
    return out;
}

std::string config_hash(const ExperimentConfig &cfg)
{
    return hex64(fnv1a64(config_text(cfg)));
}

} // namespace xbarsim
