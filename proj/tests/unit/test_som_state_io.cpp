#include <doctest.h>

#include <sstream>

#include "semmap/errors.hpp"
#include "semmap/rng.hpp"
#include "semmap/som_state_io.hpp"

using namespace semmap;

namespace {

SomMap trained_map(OlarfdssomConfig& cfg) {
    std::mt19937_64 gen(42);
    SomMap map;
    for (int i = 0; i < 200; ++i) {
        std::vector<double> x(7);
        for (auto& v : x) v = uniform01(gen);
        train(map, x, cfg);
    }
    return map;
}

} // namespace

TEST_SUITE("som_state_io") {

TEST_CASE("hex round trip restores the exact map") {
    OlarfdssomConfig cfg;
    const SomMap map = trained_map(cfg);
    REQUIRE(!map.nodes.empty());

    std::ostringstream out;
    save_som_state(out, map, cfg, FloatFormat::Hex);
    std::istringstream in(out.str());
    const SomState loaded = load_som_state(in);

    CHECK(loaded.map == map);
    CHECK(loaded.config == cfg);

    std::ostringstream again;
    save_som_state(again, loaded.map, loaded.config, FloatFormat::Hex);
    CHECK(again.str() == out.str());
}

TEST_CASE("decimal form is bit-faithful on the text after one load") {
    OlarfdssomConfig cfg;
    const SomMap map = trained_map(cfg);

    std::ostringstream first;
    save_som_state(first, map, cfg, FloatFormat::Decimal6);
    std::istringstream in(first.str());
    const SomState loaded = load_som_state(in);

    std::ostringstream second;
    save_som_state(second, loaded.map, loaded.config, FloatFormat::Decimal6);
    CHECK(second.str() == first.str());
}

TEST_CASE("config fields survive either format exactly") {
    OlarfdssomConfig cfg;
    cfg.epsilon = 1e-9; // would vanish at 6 decimals
    SomMap map;
    map.dim = 3;

    std::ostringstream out;
    save_som_state(out, map, cfg, FloatFormat::Decimal6);
    std::istringstream in(out.str());
    const SomState loaded = load_som_state(in);
    CHECK(loaded.config == cfg);
    CHECK(loaded.map.nodes.empty());
}

TEST_CASE("malformed documents are rejected") {
    std::istringstream bad_magic("something-else v1 dec\n");
    CHECK_THROWS_AS(load_som_state(bad_magic), ValidationError);

    std::istringstream bad_fmt("olarfdssom-state v1 base64\n");
    CHECK_THROWS_AS(load_som_state(bad_fmt), ValidationError);

    std::istringstream orphan_vector(
        "olarfdssom-state v1 dec\ndim 2\ncenter 0.1 0.2\n");
    CHECK_THROWS_AS(load_som_state(orphan_vector), ValidationError);

    std::istringstream wrong_arity(
        "olarfdssom-state v1 dec\ndim 3\nnode 0 wins 1.0\n"
        "center 0.1 0.2\ndelta 0 0 0\nrelevance 1 1 1\n");
    CHECK_THROWS_AS(load_som_state(wrong_arity), ValidationError);
}

} // TEST_SUITE
