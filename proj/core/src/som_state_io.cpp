#include "semmap/som_state_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "semmap/errors.hpp"

namespace semmap {

namespace {

// Shortest exact representation; config values must survive any format.
std::string exact(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string render(double v, FloatFormat fmt) {
    char buf[48];
    if (fmt == FloatFormat::Hex)
        std::snprintf(buf, sizeof buf, "%a", v);
    else
        std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void write_vector(std::ostream& out, const char* tag, const std::vector<double>& v,
                  FloatFormat fmt) {
    out << tag;
    for (double x : v) out << ' ' << render(x, fmt);
    out << '\n';
}

double parse_double(std::istringstream& line, const std::string& what) {
    std::string tok;
    if (!(line >> tok))
        throw ValidationError("som state: missing value for " + what);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw ValidationError("som state: bad value for " + what + ": " + tok);
    return v;
}

std::vector<double> parse_vector(std::istringstream& line, const std::string& what) {
    std::vector<double> out;
    std::string tok;
    while (line >> tok) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw ValidationError("som state: bad value in " + what + ": " + tok);
        out.push_back(v);
    }
    return out;
}

} // namespace

void save_som_state(std::ostream& out, const SomMap& map, const OlarfdssomConfig& cfg,
                    FloatFormat fmt) {
    out << "olarfdssom-state v1 " << (fmt == FloatFormat::Hex ? "hex" : "dec") << '\n';
    out << "dim " << map.dim << '\n';
    out << "nwins " << map.nwins << '\n';
    out << "next_id " << map.next_id << '\n';
    out << "config"
        << " at " << exact(cfg.activation_threshold)
        << " lp " << exact(cfg.lowest_win_fraction)
        << " beta " << exact(cfg.relevance_rate)
        << " maxcomp " << cfg.max_competitions
        << " eb " << exact(cfg.winner_rate)
        << " en " << exact(cfg.neighbor_rate)
        << " s " << exact(cfg.relevance_smoothness)
        << " c " << exact(cfg.connection_threshold)
        << " nmax " << cfg.max_nodes
        << " eps " << exact(cfg.epsilon) << '\n';
    for (const auto& n : map.nodes) {
        out << "node " << n.id << " wins " << render(n.wins, fmt) << '\n';
        write_vector(out, "center", n.center, fmt);
        write_vector(out, "delta", n.delta, fmt);
        write_vector(out, "relevance", n.relevance, fmt);
    }
    for (const auto& [a, b] : map.connections)
        out << "conn " << a << ' ' << b << '\n';
}

SomState load_som_state(std::istream& in) {
    SomState state;
    std::string line;

    if (!std::getline(in, line))
        throw ValidationError("som state: empty document");
    {
        std::istringstream hdr(line);
        std::string magic, version, fmt;
        hdr >> magic >> version >> fmt;
        if (magic != "olarfdssom-state" || version != "v1")
            throw ValidationError("som state: unrecognized header: " + line);
        if (fmt != "hex" && fmt != "dec")
            throw ValidationError("som state: unknown float format: " + fmt);
    }

    SomNode* current = nullptr;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dim") {
            ls >> state.map.dim;
        } else if (key == "nwins") {
            ls >> state.map.nwins;
        } else if (key == "next_id") {
            ls >> state.map.next_id;
        } else if (key == "config") {
            std::string field;
            while (ls >> field) {
                if (field == "at") state.config.activation_threshold = parse_double(ls, field);
                else if (field == "lp") state.config.lowest_win_fraction = parse_double(ls, field);
                else if (field == "beta") state.config.relevance_rate = parse_double(ls, field);
                else if (field == "maxcomp") ls >> state.config.max_competitions;
                else if (field == "eb") state.config.winner_rate = parse_double(ls, field);
                else if (field == "en") state.config.neighbor_rate = parse_double(ls, field);
                else if (field == "s") state.config.relevance_smoothness = parse_double(ls, field);
                else if (field == "c") state.config.connection_threshold = parse_double(ls, field);
                else if (field == "nmax") ls >> state.config.max_nodes;
                else if (field == "eps") state.config.epsilon = parse_double(ls, field);
                else throw ValidationError("som state: unknown config field: " + field);
            }
        } else if (key == "node") {
            SomNode node;
            std::string winstag;
            ls >> node.id >> winstag;
            if (winstag != "wins")
                throw ValidationError("som state: malformed node line: " + line);
            node.wins = parse_double(ls, "wins");
            state.map.nodes.push_back(std::move(node));
            current = &state.map.nodes.back();
        } else if (key == "center" || key == "delta" || key == "relevance") {
            if (!current)
                throw ValidationError("som state: vector line before any node: " + line);
            auto v = parse_vector(ls, key);
            if (key == "center") current->center = std::move(v);
            else if (key == "delta") current->delta = std::move(v);
            else current->relevance = std::move(v);
        } else if (key == "conn") {
            int a = 0, b = 0;
            ls >> a >> b;
            state.map.connections.insert({std::min(a, b), std::max(a, b)});
        } else {
            throw ValidationError("som state: unknown record: " + key);
        }
    }

    for (const auto& n : state.map.nodes) {
        if (static_cast<int>(n.center.size()) != state.map.dim ||
            static_cast<int>(n.delta.size()) != state.map.dim ||
            static_cast<int>(n.relevance.size()) != state.map.dim)
            throw ValidationError("som state: node vectors do not match dim");
    }
    return state;
}

} // namespace semmap
