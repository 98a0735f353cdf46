#pragma once

#include <string>

#include "cmpdet/synth.hpp"
#include "json.hpp"

namespace cmpdet {

// Serializes for golden-file comparison: object keys sorted (the default
// nlohmann map order), floats fixed at 6 decimals, 2-space indentation,
// trailing newline.
std::string dump_stable(const nlohmann::json& j);

// Ground-truth sidecar: {"width", "height", "corners": [{"i","j","x","y"}]}.
nlohmann::json truth_to_json(const GroundTruth& truth, int width, int height);

// Parses the sidecar back; missing lattice indices default to 0, missing
// coordinates throw.
GroundTruth truth_from_json(const nlohmann::json& j);

}  // namespace cmpdet
