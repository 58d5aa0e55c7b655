#pragma once

#include <iosfwd>

#include "semmap/olarfdssom.hpp"

namespace semmap {

/// Per-node vector encoding in the state document. Decimal6 is the
/// human-readable lossy form; Hex round-trips doubles exactly.
enum class FloatFormat { Decimal6, Hex };

struct SomState {
    SomMap map;
    OlarfdssomConfig config;
};

/// Versioned text document: config, nwins, per node id/wins/center/delta/
/// relevance, then connection pairs. Canonical ordering, so re-saving a
/// loaded document reproduces it byte for byte.
void save_som_state(std::ostream& out, const SomMap& map, const OlarfdssomConfig& cfg,
                    FloatFormat fmt = FloatFormat::Decimal6);

SomState load_som_state(std::istream& in);

} // namespace semmap
