#include "doctest.h"

#include "xbarsim/config.hpp"

using namespace xbarsim;

TEST_CASE("empty text gives defaults")
{
    const auto cfg = parse_config("");
    CHECK(cfg.seed == 1);
    CHECK(cfg.apps.size() == 5);
    CHECK(cfg.archs.size() == 3);
    CHECK(cfg.validation.instances == 100);
    CHECK(cfg.estimator.constants.hop_energy_pj.value() == doctest::Approx(0.98));
    CHECK(config_hash(cfg) == config_hash(ExperimentConfig{}));
}

TEST_CASE("values are parsed")
{
    const auto cfg = parse_config(
            "[run]\napps = deep, ocr\narchs = itim\n"
            "[quant]\nbits = 8, 4\n"
            "[estimator]\nhop_energy_pj = unset\nplacement = spread_dac\nnonvolatile_idle_off = yes\n"
            "[sweep]\nmemristor_sizes = 64x32\n");
    CHECK(cfg.apps == std::vector<AppId>{AppId::deep, AppId::ocr});
    CHECK(cfg.archs == std::vector<CoreType>{CoreType::itim});
    CHECK(cfg.quant.bits == std::vector<int>{8, 4});
    CHECK_FALSE(cfg.estimator.constants.hop_energy_pj.has_value());
    CHECK(cfg.estimator.placement == Placement::spread_dac);
    CHECK(cfg.estimator.constants.nonvolatile_idle_off);
    REQUIRE(cfg.memristor_sizes.size() == 1);
    CHECK(cfg.memristor_sizes[0].rows == 64);
    CHECK(cfg.memristor_sizes[0].cols == 32);
}

TEST_CASE("bad input is rejected")
{
    CHECK_THROWS_AS(parse_config("[run]\ncolour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nosuch]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\napps = speech\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[quant]\nbits = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[dataset]\ntrain = -3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[validate]\nwire_r = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[estimator]\nplacement = random\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sweep]\ndigital_sizes = 12\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run\n"), ConfigError);
}

TEST_CASE("property: canonical text round-trips")
{
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        ExperimentConfig cfg;
        cfg.seed = rng.next();
        cfg.quant.learning_rate = rng.uniform(0.001, 0.5);
        cfg.validation.wire_r = {rng.uniform(0.0, 3.0), 1.0 / 3.0};
        cfg.programming.tolerance = rng.uniform(0.005, 0.05);
        cfg.character_rate = rng.uniform(1e3, 1e6);
        if (rng.below(2) == 1) {
            cfg.estimator.constants.hop_energy_pj.reset();
        }
        const auto text = config_text(cfg);
        const auto back = parse_config(text);
        CHECK(config_text(back) == text);
        CHECK(config_hash(back) == config_hash(cfg));
        CHECK(back.seed == cfg.seed);
        CHECK(back.quant.learning_rate == cfg.quant.learning_rate);
        CHECK(back.validation.wire_r == cfg.validation.wire_r);
    }
}

TEST_CASE("hash changes with any setting")
{
    ExperimentConfig a, b;
    b.validation.agreement_inputs += 1;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}
