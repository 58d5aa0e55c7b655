#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "semmap/topo_map.hpp"

namespace semmap {

/// One replay sample: where the agent was, what the recognizer reported,
/// and (for evaluation only) the ground-truth place category.
struct DatasetRecord {
    PositionSample position;
    ObjectEvidence evidence;
    std::string label; // empty means unlabeled
};

struct Sequence {
    std::string name;
    std::vector<std::string> object_names;
    std::vector<DatasetRecord> records;

    int n_objects() const { return static_cast<int>(object_names.size()); }
};

/// Line-oriented sequence file:
///   # objects: name1,...,nameN
///   # sequence: <id>            (optional)
///   x y r1 ... rN [label]
/// Validation failures identify the offending line number.
Sequence parse_sequence(std::istream& in, const std::string& fallback_name = "");
Sequence parse_sequence_file(const std::string& path);
void write_sequence(std::ostream& out, const Sequence& seq);

/// Axis-aligned room with a per-object mean certainty signature.
struct Room {
    std::string name;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    std::vector<double> signature; // in [0,1]^n

    bool contains(double x, double y) const;
    double distance_to(double x, double y) const;
};

struct SynthSpec {
    std::string sequence_name = "synthetic";
    std::vector<std::string> object_names;
    std::vector<Room> rooms;
    double noise = 0.0;        // clipped uniform, +/- this amplitude
    double smear_radius = 0.0; // blend signatures near room boundaries
    std::vector<PositionSample> waypoints;
    int samples_per_leg = 20;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Walks the waypoints, sampling positions along each leg; evidence is the
/// containing room's signature plus clipped noise; labels come from the
/// room. Deterministic per seed, values quantized to 6 decimals so the
/// written file parses back to identical records.
Sequence generate_synthetic(const SynthSpec& spec);

SynthSpec synth_spec_from_json(const std::string& text);

/// Five-room demo layout with disjoint object signatures.
SynthSpec demo_spec();
const char* demo_spec_json();

} // namespace semmap
