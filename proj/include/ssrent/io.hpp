#pragma once

#include <string>
#include <variant>

#include "ssrent/convertibility.hpp"
#include "ssrent/fock.hpp"

namespace ssrent {

// Pure state:
//   {"total_particles": N, "alice_degeneracy": [...], "bob_degeneracy": [...],
//    "amplitudes": [{"a": [n, i], "b": [m, j], "re": x, "im": y}, ...]}
// Density matrix:
//   {"alice_degeneracy": [...], "bob_degeneracy": [...],
//    "blocks": [{"total_particles": N, "basis": [[[n, i], [m, j]], ...], "re": [[...]], "im": [[...]]}]}
// Degeneracy fields are optional on input (inferred from the labels).
std::string to_json(const SectoredPureState& state);
std::string to_json(const BlockDensityMatrix& rho);

using ParsedState = std::variant<SectoredPureState, BlockDensityMatrix>;
// ParseError names the offending field (and line/column for malformed JSON)
ParsedState parse_state(const std::string& text);
SectoredPureState parse_pure_state(const std::string& text);
BlockDensityMatrix parse_density(const std::string& text);

// targets: a single state (deterministic task) or
//   {"targets": [{"probability": p, "state": {...}}, ...]}
ConversionTask parse_task(const std::string& source_text, const std::string& targets_text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ssrent
