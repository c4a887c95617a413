#pragma once

// JSON import/export for the toolkit's objects and the CSV trace formats.
// Parsing is strict: unknown keys are rejected by name. All file output
// goes through an atomic temp-file-plus-rename path, CSV uses '.' decimal,
// ',' delimiter, LF line endings, and 17 significant digits.

#include <stdexcept>
#include <string>
#include <vector>

#include "mlip/gains.hpp"
#include "mlip/model.hpp"
#include "mlip/orbit.hpp"
#include "mlip/s2s.hpp"
#include "mlip/sim.hpp"
#include "mlip/trajectory.hpp"

namespace mlip {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- JSON ---------------------------------------------------------------

std::string params_to_json(const GaitParams& params);
GaitParams params_from_json(const std::string& text);

std::string scenario_to_json(const Scenario& scenario);
// Synthesizes the gain spec named in the document against the scenario's
// own step-to-step model.
Scenario scenario_from_json(const std::string& text);

std::string orbit_to_json(const OrbitSpec& orbit);
std::string gains_to_json(const GainSpec& gains);
std::string gains_to_json(const GainSpec& gains, const DisturbanceBound& w,
                          const InvariantBox& box);
std::string s2s_to_json(const S2SDynamics& dyn, const StructureReport& report);

// --- CSV ----------------------------------------------------------------

std::string format_double(double v);  // %.17g

// File-name fragment for a numeric tag: 0.5 -> "0p5", -1.5 -> "m1p5".
std::string filename_tag(double v);

std::string trace_samples_csv(const StepTrace& trace);
std::string trace_steps_csv(const StepTrace& trace);
std::string phase_portrait_csv(const std::vector<OrbitSample>& samples);
std::string reference_trace_csv(const std::vector<ReferenceSample>& samples);

// --- files ----------------------------------------------------------------

// Writes content to path via a temporary file in the same directory and an
// atomic rename. Creates parent directories.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace mlip
