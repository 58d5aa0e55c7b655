#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "semmap/errors.hpp"
#include "semmap/olarfdssom.hpp"
#include "semmap/rng.hpp"

using namespace semmap;

namespace {

SomNode make_node(int id, std::vector<double> center) {
    SomNode n;
    n.id = id;
    n.delta.assign(center.size(), 0.0);
    n.relevance.assign(center.size(), 1.0);
    n.center = std::move(center);
    return n;
}

// orthogonal prototype in [0,1]^n: 1.0 on dims [3k, 3k+3), 0 elsewhere
std::vector<double> proto(int k, std::size_t n) {
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 3 * static_cast<std::size_t>(k); i < 3 * static_cast<std::size_t>(k) + 3 && i < n; ++i)
        v[i] = 1.0;
    return v;
}

} // namespace

TEST_SUITE("olarfdssom") {

TEST_CASE("weighted distance honors per-dimension relevance") {
    SomNode node = make_node(0, {0.0, 0.0});
    CHECK(weighted_distance({0.0, 0.0}, node) == 0.0);

    node.relevance = {0.25, 1.0};
    CHECK(weighted_distance({1.0, 0.0}, node) == doctest::Approx(0.5));

    node.relevance = {0.0, 0.0};
    CHECK(weighted_distance({0.7, 0.9}, node) == 0.0); // fully irrelevant subspace

    CHECK_THROWS_AS(weighted_distance({1.0}, node), ValidationError);
}

TEST_CASE("activation saturates at one and degenerates to zero") {
    SomNode node = make_node(0, std::vector<double>(18, 0.5));
    const double at_center = som_activation(node.center, node, 1e-9);
    CHECK(std::abs(at_center - 1.0) <= 1e-9);

    node.relevance.assign(18, 0.0);
    CHECK(som_activation(node.center, node, 1e-9) == 0.0);

    // sum of relevance equals the weighted distance -> activation one half
    SomNode half = make_node(0, {0.0, 0.0});
    const double r2 = std::sqrt(2.0);
    CHECK(som_activation({r2, r2}, half, 1e-12) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("winner search maximizes activation, ties to the lowest id") {
    SomMap map;
    map.dim = 2;
    CHECK_THROWS(som_find_winner(map, {0.1, 0.1}, 1e-9));

    map.nodes.push_back(make_node(0, {0.1, 0.1}));
    auto w = som_find_winner(map, {0.4, 0.4}, 1e-9);
    CHECK(w.first == 0);

    map.nodes.push_back(make_node(1, {0.9, 0.9}));
    w = som_find_winner(map, {0.9, 0.9}, 1e-9);
    CHECK(w.first == 1);

    map.nodes.push_back(make_node(2, {0.1, 0.1})); // identical to node 0
    w = som_find_winner(map, {0.1, 0.1}, 1e-9);
    CHECK(w.first == 0);
}

TEST_CASE("relevance ramp: equal deltas give uniform full relevance") {
    CHECK(relevance_from_delta({0.2, 0.2, 0.2}, 0.0781) ==
          std::vector<double>{1.0, 1.0, 1.0});
    CHECK(relevance_from_delta({0.0, 0.0}, 0.0781) == std::vector<double>{1.0, 1.0});
}

TEST_CASE("relevance ramp matches the independently evaluated logistic") {
    // delta=(0.4,0.0), s=0.0781: 1/(1+exp(+-0.2/(0.0781*0.4)))
    const auto omega = relevance_from_delta({0.4, 0.0}, 0.0781);
    CHECK(omega[0] == doctest::Approx(0.00165541186655954).epsilon(1e-10));
    CHECK(omega[1] == doctest::Approx(0.99834458813344046).epsilon(1e-10));
}

TEST_CASE("adapt at effective rate one snaps delta to the distance") {
    SomMap map;
    map.dim = 2;
    map.nodes.push_back(make_node(0, {0.25, 0.75}));
    map.nodes[0].delta = {0.3, 0.3};
    OlarfdssomConfig cfg;
    cfg.relevance_rate = 1.0; // beta * e_b == 1, moving-average limit
    cfg.winner_rate = 1.0;
    adapt(map, 0, {0.75, 0.25}, cfg);
    CHECK(map.nodes[0].delta == std::vector<double>{0.5, 0.5});
    CHECK(map.nodes[0].center == std::vector<double>{0.75, 0.25}); // full step
    CHECK(map.nodes[0].wins == 1.0);
}

TEST_CASE("repeated identical input is a fixed point") {
    OlarfdssomConfig cfg;
    SomMap map;
    const std::vector<double> x{0.3, 0.8, 0.1};
    train(map, x, cfg);
    for (int i = 0; i < 50; ++i) {
        const auto res = train(map, x, cfg);
        CHECK(!res.created); // activation stays at ~1 >= a_t
    }
    REQUIRE(map.nodes.size() == 1);
    CHECK(map.nodes[0].center == x);
    CHECK(map.nodes[0].relevance == std::vector<double>(3, 1.0));
    for (double d : map.nodes[0].delta) CHECK(d == 0.0);
}

TEST_CASE("bootstrap initializes the first node from the pattern") {
    SomMap map;
    OlarfdssomConfig cfg;
    const auto res = train(map, {0.2, 0.4}, cfg);
    CHECK(res.created);
    REQUIRE(map.nodes.size() == 1);
    CHECK(map.nodes[0].center == std::vector<double>{0.2, 0.4});
    CHECK(map.nodes[0].relevance == std::vector<double>{1.0, 1.0});
    CHECK(map.nodes[0].wins == 0.0);
    CHECK(map.nwins == 1);
}

TEST_CASE("a distant pattern inserts a node seeded with lp * nwins wins") {
    SomMap map;
    OlarfdssomConfig cfg;
    train(map, proto(0, 9), cfg);
    train(map, proto(0, 9), cfg); // nwins -> 2
    const long nwins_before = map.nwins;
    const auto res = train(map, proto(1, 9), cfg);
    CHECK(res.created);
    REQUIRE(map.nodes.size() == 2);
    CHECK(map.nodes[1].wins ==
          doctest::Approx(cfg.lowest_win_fraction * static_cast<double>(nwins_before)));
}

TEST_CASE("at the node budget the winner adapts despite low activation") {
    SomMap map;
    OlarfdssomConfig cfg;
    cfg.max_nodes = 1;
    train(map, proto(0, 9), cfg);
    const auto res = train(map, proto(1, 9), cfg);
    CHECK(!res.created);
    CHECK(map.nodes.size() == 1);
    CHECK(res.activation < cfg.activation_threshold);
    CHECK(map.nodes[0].wins == 1.0);        // adapt branch still counts the win
    CHECK(map.nodes[0].center != proto(0, 9)); // moved toward the pattern
}

TEST_CASE("pruning removes only nodes under lp * maxcomp and keeps wins") {
    OlarfdssomConfig cfg; // lp=0.1914, maxcomp=34 -> threshold 6.5076
    SomMap map;
    map.dim = 2;
    map.next_id = 3;
    map.nodes.push_back(make_node(0, {0.1, 0.1}));
    map.nodes.push_back(make_node(1, {0.5, 0.5}));
    map.nodes.push_back(make_node(2, {0.9, 0.9}));
    map.nodes[0].wins = 7.0;
    map.nodes[1].wins = 6.0;
    map.nodes[2].wins = 10.0;

    SUBCASE("not due yet") {
        map.nwins = cfg.max_competitions - 1;
        CHECK(maybe_prune(map, cfg).empty());
        CHECK(map.nodes.size() == 3);
    }

    SUBCASE("due") {
        map.nwins = cfg.max_competitions;
        const auto removed = maybe_prune(map, cfg);
        CHECK(removed == std::vector<int>{1}); // 6 < 6.5076, 7 survives
        REQUIRE(map.nodes.size() == 2);
        CHECK(map.nodes[0].wins == 7.0);  // undiminished
        CHECK(map.nodes[1].wins == 10.0); // undiminished
        CHECK(map.nwins == 0);
    }

    SUBCASE("all above threshold") {
        map.nodes[1].wins = 8.0;
        map.nwins = cfg.max_competitions + 5;
        CHECK(maybe_prune(map, cfg).empty());
        CHECK(map.nodes.size() == 3);
        CHECK(map.nwins == 0); // reset still happens
    }
}

TEST_CASE("clustering is deterministic and mutation free") {
    SomMap map;
    OlarfdssomConfig cfg;
    train(map, proto(0, 9), cfg);
    train(map, proto(1, 9), cfg);
    train(map, proto(2, 9), cfg);

    const SomMap before = map;
    const int c1 = cluster(map, proto(1, 9));
    const int c2 = cluster(map, proto(1, 9));
    CHECK(c1 == c2);
    CHECK(map == before); // pure read

    CHECK(cluster(map, proto(0, 9)) == 0);
    CHECK(cluster(map, proto(2, 9)) == 2);

    SomMap empty;
    CHECK_THROWS_WITH(cluster(empty, {0.1}), "no categories learned yet");
}

TEST_CASE("connection rule thresholds the relevance difference") {
    OlarfdssomConfig cfg;
    SomMap map;
    map.dim = 18;
    map.nodes.push_back(make_node(0, std::vector<double>(18, 0.2)));
    map.nodes.push_back(make_node(1, std::vector<double>(18, 0.8)));

    SUBCASE("zero threshold never connects") {
        cfg.connection_threshold = 0.0;
        update_connections(map, cfg); // identical relevance, still strict <
        CHECK(map.connections.empty());
    }

    SUBCASE("identical relevance connects for any positive threshold") {
        cfg.connection_threshold = 1e-6;
        update_connections(map, cfg);
        CHECK(map.connections.size() == 1);
    }

    SUBCASE("uniform 0.03 difference stays under the 0.5418 budget") {
        cfg.connection_threshold = 0.0301; // budget c*n = 0.5418
        map.nodes[1].relevance.assign(18, 0.97); // sum of diffs = 0.54
        update_connections(map, cfg);
        CHECK(map.connections.size() == 1);

        map.nodes[1].relevance.assign(18, 0.9698); // sum = 0.5436 > budget
        update_connections(map, cfg);
        CHECK(map.connections.empty());
    }
}

TEST_CASE("randomized training keeps the structural invariants") {
    std::mt19937_64 gen(99);
    OlarfdssomConfig cfg;
    cfg.max_nodes = 12;
    SomMap map;

    std::map<int, double> last_wins;
    for (int iter = 0; iter < 3000; ++iter) {
        std::vector<double> x = proto(static_cast<int>(gen() % 4), 12);
        for (auto& v : x) v = std::clamp(v + uniform_in(gen, -0.05, 0.05), 0.0, 1.0);

        const auto res = train(map, x, cfg);

        CHECK(map.nodes.size() <= static_cast<std::size_t>(cfg.max_nodes));
        for (const auto& n : map.nodes) {
            for (double w : n.relevance) {
                CHECK(w >= 0.0);
                CHECK(w <= 1.0);
            }
            for (double d : n.delta) CHECK(d >= 0.0);
            for (double c : n.center) {
                CHECK(c >= 0.0);
                CHECK(c <= 1.0);
            }
            // wins never shrink while a node lives
            auto it = last_wins.find(n.id);
            if (it != last_wins.end()) CHECK(n.wins >= it->second);
            last_wins[n.id] = n.wins;
        }
        if (res.reset) {
            const double floor = cfg.lowest_win_fraction * cfg.max_competitions;
            for (const auto& n : map.nodes) CHECK(n.wins >= floor);
        }
        for (const auto& [a, b] : map.connections) {
            CHECK(map.find(a) != nullptr);
            CHECK(map.find(b) != nullptr);
            CHECK(a < b);
        }
    }
    CHECK(map.nodes.size() >= 1);
}

TEST_CASE("training is deterministic for a fixed stream") {
    OlarfdssomConfig cfg;
    auto run = [&cfg] {
        std::mt19937_64 gen(7);
        SomMap map;
        for (int i = 0; i < 500; ++i) {
            std::vector<double> x(6);
            for (auto& v : x) v = uniform01(gen);
            train(map, x, cfg);
        }
        return map;
    };
    CHECK(run() == run());
}

TEST_CASE("activation strictly decreases with weighted distance") {
    SomNode node = make_node(0, {0.5, 0.5});
    double prev = som_activation({0.5, 0.5}, node, 1e-9);
    for (double step = 0.05; step <= 0.5; step += 0.05) {
        const double act = som_activation({0.5 + step, 0.5}, node, 1e-9);
        CHECK(act < prev);
        prev = act;
    }
}

} // TEST_SUITE
