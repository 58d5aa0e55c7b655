#include "semmap/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "semmap/errors.hpp"
#include "semmap/rng.hpp"

namespace semmap {

namespace {

std::string line_err(std::size_t lineno, const std::string& msg) {
    return "line " + std::to_string(lineno) + ": " + msg;
}

double parse_number(const std::string& tok, std::size_t lineno, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ValidationError(line_err(lineno, std::string("bad ") + what + " value: " + tok));
    return v;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        // trim
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    return out;
}

double quantize6(double v) {
    return std::round(v * 1e6) / 1e6;
}

} // namespace

Sequence parse_sequence(std::istream& in, const std::string& fallback_name) {
    Sequence seq;
    seq.name = fallback_name;
    bool have_header = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# objects:", 0) == 0) {
                seq.object_names = split_csv(line.substr(10));
                for (const auto& n : seq.object_names)
                    if (n.empty())
                        throw ValidationError(line_err(lineno, "empty object name"));
                if (seq.object_names.empty())
                    throw ValidationError(line_err(lineno, "object header lists no names"));
                have_header = true;
            } else if (line.rfind("# sequence:", 0) == 0) {
                const auto b = line.find_first_not_of(" \t", 11);
                if (b != std::string::npos) seq.name = line.substr(b);
            }
            continue; // other comment lines are ignored
        }

        if (!have_header)
            throw ValidationError(line_err(lineno, "record before '# objects:' header"));

        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);

        const std::size_t n = seq.object_names.size();
        std::string label;
        if (tokens.size() == n + 3) {
            label = tokens.back();
            tokens.pop_back();
        } else if (tokens.size() != n + 2) {
            throw ValidationError(line_err(
                lineno, "expected x y and " + std::to_string(n) +
                            " certainties (optional label), got " +
                            std::to_string(tokens.size()) + " fields"));
        }

        DatasetRecord rec;
        rec.position.x = parse_number(tokens[0], lineno, "x");
        rec.position.y = parse_number(tokens[1], lineno, "y");
        if (!std::isfinite(rec.position.x) || !std::isfinite(rec.position.y))
            throw ValidationError(line_err(lineno, "non-finite position"));
        rec.evidence.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = parse_number(tokens[2 + i], lineno, "certainty");
            if (!(r >= 0.0 && r <= 1.0))
                throw ValidationError(
                    line_err(lineno, "certainty " + tokens[2 + i] + " out of [0,1]"));
            rec.evidence.push_back(r);
        }
        rec.label = std::move(label);
        seq.records.push_back(std::move(rec));
    }
    return seq;
}

Sequence parse_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open sequence file: " + path);
    std::string name = path;
    const auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    return parse_sequence(in, name);
}

void write_sequence(std::ostream& out, const Sequence& seq) {
    out << "# objects: ";
    for (std::size_t i = 0; i < seq.object_names.size(); ++i)
        out << (i ? "," : "") << seq.object_names[i];
    out << '\n';
    if (!seq.name.empty()) out << "# sequence: " << seq.name << '\n';
    char buf[48];
    for (const auto& rec : seq.records) {
        std::snprintf(buf, sizeof buf, "%.6f %.6f", rec.position.x, rec.position.y);
        out << buf;
        for (double r : rec.evidence) {
            std::snprintf(buf, sizeof buf, " %.6f", r);
            out << buf;
        }
        if (!rec.label.empty()) out << ' ' << rec.label;
        out << '\n';
    }
}

bool Room::contains(double x, double y) const {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
}

double Room::distance_to(double x, double y) const {
    const double dx = std::max({x0 - x, 0.0, x - x1});
    const double dy = std::max({y0 - y, 0.0, y - y1});
    return std::hypot(dx, dy);
}

void SynthSpec::validate() const {
    if (object_names.empty())
        throw ValidationError("synth spec: no objects defined");
    if (rooms.empty())
        throw ValidationError("synth spec: no rooms defined");
    if (waypoints.size() < 2)
        throw ValidationError("synth spec: need at least two waypoints");
    if (samples_per_leg < 1)
        throw ValidationError("synth spec: samples_per_leg must be >= 1");
    if (noise < 0.0)
        throw ValidationError("synth spec: noise must be >= 0");
    if (smear_radius < 0.0)
        throw ValidationError("synth spec: smear_radius must be >= 0");
    for (const auto& room : rooms) {
        if (room.name.empty())
            throw ValidationError("synth spec: room without a name");
        if (!(room.x0 < room.x1 && room.y0 < room.y1))
            throw ValidationError("synth spec: degenerate rectangle for room " + room.name);
        if (room.signature.size() != object_names.size())
            throw ValidationError("synth spec: signature arity mismatch for room " + room.name);
        for (double v : room.signature)
            if (!(v >= 0.0 && v <= 1.0))
                throw ValidationError("synth spec: signature out of [0,1] for room " + room.name);
    }
    for (std::size_t i = 0; i < rooms.size(); ++i) {
        for (std::size_t j = i + 1; j < rooms.size(); ++j) {
            const Room& a = rooms[i];
            const Room& b = rooms[j];
            const bool overlap = a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
            if (overlap)
                throw ValidationError("synth spec: rooms " + a.name + " and " + b.name +
                                      " overlap");
        }
    }
    for (const auto& w : waypoints) {
        const bool inside = std::any_of(rooms.begin(), rooms.end(), [&](const Room& r) {
            return r.contains(w.x, w.y);
        });
        if (!inside)
            throw ValidationError("synth spec: waypoint (" + std::to_string(w.x) + "," +
                                  std::to_string(w.y) + ") outside all rooms");
    }
}

Sequence generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    const std::size_t n = spec.object_names.size();

    Sequence seq;
    seq.name = spec.sequence_name;
    seq.object_names = spec.object_names;

    std::mt19937_64 gen(spec.seed);

    auto emit = [&](double x, double y) {
        const Room* room = nullptr;
        for (const auto& r : spec.rooms) {
            if (r.contains(x, y)) {
                room = &r;
                break;
            }
        }
        if (!room)
            throw ValidationError("synth spec: path point (" + std::to_string(x) + "," +
                                  std::to_string(y) + ") outside all rooms");

        std::vector<double> evidence = room->signature;
        if (spec.smear_radius > 0.0) {
            const Room* nearest = nullptr;
            double best = spec.smear_radius;
            for (const auto& r : spec.rooms) {
                if (&r == room) continue;
                const double d = r.distance_to(x, y);
                if (d < best) {
                    best = d;
                    nearest = &r;
                }
            }
            if (nearest) {
                const double w = 0.5 * (1.0 - best / spec.smear_radius);
                for (std::size_t i = 0; i < n; ++i)
                    evidence[i] = (1.0 - w) * evidence[i] + w * nearest->signature[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double noisy = evidence[i] + uniform_in(gen, -spec.noise, spec.noise);
            evidence[i] = quantize6(std::clamp(noisy, 0.0, 1.0));
        }

        DatasetRecord rec;
        rec.position = {quantize6(x), quantize6(y)};
        rec.evidence = std::move(evidence);
        rec.label = room->name;
        seq.records.push_back(std::move(rec));
    };

    for (std::size_t leg = 0; leg + 1 < spec.waypoints.size(); ++leg) {
        const auto& a = spec.waypoints[leg];
        const auto& b = spec.waypoints[leg + 1];
        for (int j = 0; j < spec.samples_per_leg; ++j) {
            const double t = static_cast<double>(j) / spec.samples_per_leg;
            emit(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        }
    }
    const auto& last = spec.waypoints.back();
    emit(last.x, last.y);
    return seq;
}

SynthSpec synth_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("synth spec: invalid JSON: ") + e.what());
    }

    SynthSpec spec;
    try {
        if (j.contains("sequence_name")) spec.sequence_name = j["sequence_name"].get<std::string>();
        if (j.contains("object_names")) {
            spec.object_names = j["object_names"].get<std::vector<std::string>>();
        } else if (j.contains("n_objects")) {
            const int n = j["n_objects"].get<int>();
            for (int i = 0; i < n; ++i) spec.object_names.push_back("o" + std::to_string(i + 1));
        }
        for (const auto& rj : j.at("rooms")) {
            Room room;
            room.name = rj.at("name").get<std::string>();
            const auto rect = rj.at("rect").get<std::vector<double>>();
            if (rect.size() != 4)
                throw ValidationError("synth spec: rect must be [x0,y0,x1,y1]");
            room.x0 = rect[0];
            room.y0 = rect[1];
            room.x1 = rect[2];
            room.y1 = rect[3];
            room.signature = rj.at("signature").get<std::vector<double>>();
            spec.rooms.push_back(std::move(room));
        }
        if (j.contains("noise")) spec.noise = j["noise"].get<double>();
        if (j.contains("smear_radius")) spec.smear_radius = j["smear_radius"].get<double>();
        for (const auto& wj : j.at("waypoints")) {
            const auto w = wj.get<std::vector<double>>();
            if (w.size() != 2)
                throw ValidationError("synth spec: waypoint must be [x,y]");
            spec.waypoints.push_back({w[0], w[1]});
        }
        if (j.contains("samples_per_leg")) spec.samples_per_leg = j["samples_per_leg"].get<int>();
        if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("synth spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

// Five rooms in a row, one disjoint triplet of active objects each; the
// walk goes end to end and back so every boundary is crossed twice.
const char* demo_spec_json() {
    return R"({
  "sequence_name": "demo5",
  "n_objects": 18,
  "noise": 0.02,
  "samples_per_leg": 25,
  "seed": 7,
  "rooms": [
    {"name": "office",   "rect": [0,  0, 4,  4], "signature": [0.9,0.9,0.9,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]},
    {"name": "corridor", "rect": [4,  0, 8,  4], "signature": [0,0,0,0.9,0.9,0.9,0,0,0,0,0,0,0,0,0,0,0,0]},
    {"name": "kitchen",  "rect": [8,  0, 12, 4], "signature": [0,0,0,0,0,0,0.9,0.9,0.9,0,0,0,0,0,0,0,0,0]},
    {"name": "lab",      "rect": [12, 0, 16, 4], "signature": [0,0,0,0,0,0,0,0,0,0.9,0.9,0.9,0,0,0,0,0,0]},
    {"name": "bathroom", "rect": [16, 0, 20, 4], "signature": [0,0,0,0,0,0,0,0,0,0,0,0,0.9,0.9,0.9,0,0,0]}
  ],
  "waypoints": [[2,2],[6,2],[10,2],[14,2],[18,2],[14,2],[10,2],[6,2],[2,2]]
})";
}

SynthSpec demo_spec() {
    return synth_spec_from_json(demo_spec_json());
}

} // namespace semmap
