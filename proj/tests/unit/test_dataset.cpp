#include <doctest.h>

#include <set>
#include <sstream>
#include <string>

#include "semmap/dataset.hpp"
#include "semmap/errors.hpp"

using namespace semmap;

namespace {

std::string seq_text(const Sequence& seq) {
    std::ostringstream out;
    write_sequence(out, seq);
    return out.str();
}

} // namespace

TEST_SUITE("dataset") {

TEST_CASE("empty body parses to an empty record list") {
    std::istringstream in("# objects: a,b,c\n");
    const Sequence seq = parse_sequence(in);
    CHECK(seq.n_objects() == 3);
    CHECK(seq.records.empty());
}

TEST_CASE("a single valid line carries all fields") {
    std::istringstream in(
        "# objects: stove,sink\n"
        "# sequence: kitchen-run\n"
        "1.5 -2.25 0.75 0.125 kitchen\n");
    const Sequence seq = parse_sequence(in);
    CHECK(seq.name == "kitchen-run");
    REQUIRE(seq.records.size() == 1);
    const auto& rec = seq.records[0];
    CHECK(rec.position.x == 1.5);
    CHECK(rec.position.y == -2.25);
    CHECK(rec.evidence == ObjectEvidence{0.75, 0.125});
    CHECK(rec.label == "kitchen");

    std::istringstream unlabeled("# objects: stove,sink\n0 0 0.5 0.5\n");
    CHECK(parse_sequence(unlabeled).records[0].label.empty());
}

TEST_CASE("validation errors name the offending line") {
    std::string text = "# objects: a,b\n";
    for (int i = 0; i < 5; ++i) text += "0 0 0.1 0.1 lab\n"; // lines 2..6
    text += "0 0 1.2 0.1 lab\n";                             // line 7
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(parse_sequence(in), doctest::Contains("line 7"), ValidationError);

    std::istringstream arity("# objects: a,b\n0 0 0.5\n");
    CHECK_THROWS_WITH_AS(parse_sequence(arity), doctest::Contains("line 2"), ValidationError);

    std::istringstream nonfinite("# objects: a,b\nnan 0 0.5 0.5\n");
    CHECK_THROWS_AS(parse_sequence(nonfinite), ValidationError);

    std::istringstream headerless("0 0 0.5 0.5\n");
    CHECK_THROWS_AS(parse_sequence(headerless), ValidationError);
}

TEST_CASE("zero-noise single-room synthesis reproduces the signature") {
    SynthSpec spec;
    spec.object_names = {"a", "b", "c"};
    spec.rooms = {{"lab", 0, 0, 10, 10, {0.9, 0.0, 0.25}}};
    spec.waypoints = {{1, 1}, {9, 9}};
    spec.samples_per_leg = 8;
    const Sequence seq = generate_synthetic(spec);
    REQUIRE(seq.records.size() == 9); // 8 leg samples + final waypoint
    for (const auto& rec : seq.records) {
        CHECK(rec.evidence == ObjectEvidence{0.9, 0.0, 0.25});
        CHECK(rec.label == "lab");
    }
}

TEST_CASE("orthogonal rooms give separable evidence") {
    SynthSpec spec;
    spec.object_names = {"a", "b", "c", "d"};
    spec.rooms = {{"left", 0, 0, 5, 4, {0.9, 0.9, 0.0, 0.0}},
                  {"right", 5, 0, 10, 4, {0.0, 0.0, 0.9, 0.9}}};
    spec.waypoints = {{1, 2}, {9, 2}};
    spec.samples_per_leg = 16;
    const Sequence seq = generate_synthetic(spec);
    for (const auto& rec : seq.records) {
        if (rec.label == "left") {
            CHECK(rec.evidence[0] == 0.9);
            CHECK(rec.evidence[2] == 0.0);
        } else {
            CHECK(rec.evidence[0] == 0.0);
            CHECK(rec.evidence[2] == 0.9);
        }
    }
}

TEST_CASE("generation is byte-identical per seed and round-trips") {
    SynthSpec spec = demo_spec();
    spec.samples_per_leg = 6;
    const Sequence a = generate_synthetic(spec);
    const Sequence b = generate_synthetic(spec);
    CHECK(seq_text(a) == seq_text(b));

    spec.seed += 1;
    const Sequence c = generate_synthetic(spec);
    CHECK(seq_text(a) != seq_text(c));

    // parse(write(seq)) == seq
    std::istringstream in(seq_text(a));
    const Sequence parsed = parse_sequence(in);
    CHECK(parsed.object_names == a.object_names);
    REQUIRE(parsed.records.size() == a.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(parsed.records[i].position == a.records[i].position);
        CHECK(parsed.records[i].evidence == a.records[i].evidence);
        CHECK(parsed.records[i].label == a.records[i].label);
    }
}

TEST_CASE("noise stays clipped to the unit interval") {
    SynthSpec spec;
    spec.object_names = {"a"};
    spec.rooms = {{"r", 0, 0, 4, 4, {0.9}}};
    spec.waypoints = {{1, 1}, {3, 3}};
    spec.samples_per_leg = 200;
    spec.noise = 0.5;
    spec.seed = 11;
    const Sequence seq = generate_synthetic(spec);
    bool clipped_high = false;
    for (const auto& rec : seq.records) {
        CHECK(rec.evidence[0] >= 0.0);
        CHECK(rec.evidence[0] <= 1.0);
        if (rec.evidence[0] == 1.0) clipped_high = true;
    }
    CHECK(clipped_high); // 0.9 + U(-0.5,0.5) exceeds 1 often
}

TEST_CASE("boundary smearing blends the neighboring signature") {
    SynthSpec spec;
    spec.object_names = {"a", "b"};
    spec.rooms = {{"left", 0, 0, 5, 4, {1.0, 0.0}}, {"right", 5, 0, 10, 4, {0.0, 1.0}}};
    spec.waypoints = {{2.5, 2}, {4.75, 2}};
    spec.samples_per_leg = 2;
    spec.smear_radius = 1.0;
    const Sequence seq = generate_synthetic(spec);
    // sample at x=2.5: 2.5 away from "right", untouched
    CHECK(seq.records.front().evidence == ObjectEvidence{1.0, 0.0});
    // final waypoint at x=4.75: 0.25 from the boundary -> blend weight 0.375
    CHECK(seq.records.back().evidence[0] == doctest::Approx(0.625));
    CHECK(seq.records.back().evidence[1] == doctest::Approx(0.375));
}

TEST_CASE("invalid specs are rejected") {
    SynthSpec spec;
    spec.object_names = {"a"};
    spec.rooms = {{"r", 0, 0, 4, 4, {0.5}}};
    spec.waypoints = {{8, 8}, {9, 9}}; // outside the room
    CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);

    SynthSpec overlap;
    overlap.object_names = {"a"};
    overlap.rooms = {{"r1", 0, 0, 4, 4, {0.5}}, {"r2", 3, 0, 6, 4, {0.5}}};
    overlap.waypoints = {{1, 1}, {2, 2}};
    CHECK_THROWS_AS(generate_synthetic(overlap), ValidationError);

    CHECK_THROWS_AS(synth_spec_from_json("{not json"), ValidationError);
    CHECK_THROWS_AS(synth_spec_from_json("{}"), ValidationError);
}

TEST_CASE("the demo spec is valid and labeled with five categories") {
    const Sequence seq = generate_synthetic(demo_spec());
    CHECK(seq.n_objects() == 18);
    std::set<std::string> labels;
    for (const auto& rec : seq.records) labels.insert(rec.label);
    CHECK(labels.size() == 5);
}

} // TEST_SUITE
