#pragma once

// Regenerates the CSV bundles behind the toolkit's standard result
// figures: orbit phase portraits, exact-plant walking traces, the velocity
// sweep, push recovery, and the per-mode maximum-speed comparison. All
// outputs are deterministic functions of the config.

#include <string>

namespace mlip {

// config_json selects figures by name ("fig4".."fig8") and can override
// the default speed/push/width/limit sets. Writes CSV and JSON artifacts
// under out_dir and returns a metrics JSON summarizing them.
std::string generate_figures(const std::string& config_json,
                             const std::string& out_dir);

}  // namespace mlip
