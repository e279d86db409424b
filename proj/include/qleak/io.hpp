#pragma once

// JSON schemas:
//   matrix:   {"dim": d, "entries": [[[re, im], ...], ...]}  (row-major)
//   ensemble: {"labels": [...], "probs": [...], "states": [matrix, ...]}
//   POVM:     {"labels": [...], "elements": [matrix, ...], "implementation": [matrix, ...]}
// with "implementation" optional.

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qleak/cloning.hpp"
#include "qleak/leakage.hpp"
#include "qleak/measurements.hpp"
#include "qleak/protocol.hpp"
#include "qleak/states.hpp"

namespace qleak {

using json = nlohmann::json;

json to_json(const ComplexMatrix& m);
// `where` prefixes error messages (e.g. "states[2]").
ComplexMatrix matrix_from_json(const json& j, const std::string& where = "matrix");

json to_json(const CqEnsemble& e);
CqEnsemble ensemble_from_json(const json& j);

struct PovmFile {
  Povm povm;
  std::optional<PovmImplementation> implementation;
};

json to_json(const Povm& povm, const PovmImplementation* impl = nullptr);
PovmFile povm_from_json(const json& j);

json to_json(const LeakageEstimate& est);
json to_json(const CertificationReport& report);
json to_json(const GentleLeakageInterval& interval);
json to_json(const CloningBoundResult& r);
json to_json(const SimReport& r);
json to_json(const ExactRoundStatistics& s);
json to_json(const RegionDisagreement& r);

// Reads and parses a JSON file; InvalidInput names the path on failure.
json read_json_file(const std::filesystem::path& path);
CqEnsemble load_ensemble(const std::filesystem::path& path);
PovmFile load_povm(const std::filesystem::path& path);

// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qleak
