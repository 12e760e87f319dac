#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "holoqed/errors.hpp"
#include "json.hpp"

namespace holoqed::harness {

enum class Experiment {
  SynthesizeGrape,
  SynthesizeSnap,
  CompareControl,
  VqeIdeal,
  VqeNoisy,
  DmrgReference,
  Correlations,
  Sample,
};

const char* to_string(Experiment e);
const std::vector<std::string>& experiment_names();

/// Exit status for each error category; 0 is success.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int schema = 2;
inline constexpr int missing_file = 3;
inline constexpr int module = 4;
inline constexpr int locked = 5;
inline constexpr int usage = 64;
}  // namespace exit_code

int exit_code_for(ErrorCode code);

/// git-describe stamp baked in at build time.
const char* version();

/// FNV-1a 64 over the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string manifest_hash(const nlohmann::json& manifest);

/// Reads and parses a manifest file; MissingFile or Schema on failure.
nlohmann::json load_manifest(const std::filesystem::path& path);

/// Schema and cross-field violations. Relative paths resolve against base_dir.
std::vector<std::string> validate(const nlohmann::json& manifest,
                                  const std::filesystem::path& base_dir = ".");

struct RunOutcome {
  std::filesystem::path output_dir;
  nlohmann::json results;
  std::vector<std::string> files;  // written artifacts, relative to output_dir
};

/// Validates, locks output_dir, dispatches, and writes results.json, figure
/// CSVs, manifest.json, VERSION and run.log. `output_override` replaces the
/// manifest's output_dir when nonempty.
RunOutcome run(const nlohmann::json& manifest, const std::filesystem::path& base_dir = ".",
               const std::filesystem::path& output_override = {});

/// Figure-pipeline templates keyed fig1b, fig1c, fig2a, fig2b, fig2c.
nlohmann::json templates();

}  // namespace holoqed::harness
