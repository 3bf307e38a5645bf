#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "xbarsim/config.hpp"
#include "xbarsim/experiments.hpp"
#include "xbarsim/serialize.hpp"

namespace fs = std::filesystem;
using namespace xbarsim;

int main(int argc, char **argv)
{
    CLI::App app{"xbarsim: memristor crossbar neural core simulator and estimator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "xbarsim-out";
    std::optional<std::uint64_t> seed;
    std::string arch;
    std::string app_id;
    bool no_variation = false;

    app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Seed for every random stream");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--arch", arch, "Restrict to one architecture")
            ->check(CLI::IsMember({"risc", "digital", "itim"}));
    app.add_option("--app", app_id, "Restrict to one application")
            ->check(CLI::IsMember({"edge", "deep", "motion", "objrec", "ocr"}));
    app.add_flag("--no-variation", no_variation, "Disable programming-pulse variation");

    app.add_subcommand("tables", "Core counts, area, power and efficiency per app and architecture");
    app.add_subcommand("quant", "Accuracy versus weight precision and activation");
    app.add_subcommand("validate", "Crossbar, programming and engine equivalence suite (JUnit XML)");
    app.add_subcommand("sweep", "Core-size design space sweep (CSV per architecture)");
    app.add_subcommand("map", "Dump core allocations and slot tables");
    app.add_subcommand("program", "Program a random crossbar and dump the report");

    for (auto *sub : app.get_subcommands({})) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (seed) {
            cfg.seed = *seed;
        }
        if (!arch.empty()) {
            cfg.archs = {parse_core_type(arch)};
        }
        if (!app_id.empty()) {
            cfg.apps = {parse_app(app_id)};
        }
        if (no_variation) {
            cfg.programming.variation_sigma = 0.0;
        }
        if (cfg.dataset.root.empty()) {
            if (const char *env = std::getenv("XBARSIM_DATA")) {
                cfg.dataset.root = env;
            }
        }
        cfg.validate();

        const std::string cmd = app.get_subcommands().front()->get_name();
        RunOutput out;
        if (cmd == "tables") {
            out = run_tables(cfg);
        } else if (cmd == "quant") {
            const auto data = load_digit_data(cfg.dataset.root, cfg.dataset.train, cfg.dataset.test, cfg.seed);
            out = run_quantization_study(cfg, data);
        } else if (cmd == "validate") {
            out = run_crossbar_validation(cfg);
        } else if (cmd == "sweep") {
            out = run_sweep(cfg);
        } else if (cmd == "map") {
            out = run_map(cfg);
        } else {
            out = run_program(cfg);
        }

        fs::create_directories(out_dir);
        write_text_file(fs::path(out_dir) / "config.ini", config_text(cfg));
        for (const auto &[name, text] : out.files) {
            write_text_file(fs::path(out_dir) / name, text);
        }
        std::cout << out.summary;
        std::cout << "config hash " << config_hash(cfg) << ", reports in " << out_dir << "\n";
        return out.ok ? 0 : 1;
    } catch (const std::exception &e) {
        std::cerr << "xbarsim: " << e.what() << "\n";
        return 2;
    }
}
