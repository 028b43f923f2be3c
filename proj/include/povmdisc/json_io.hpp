#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "povmdisc/adaptive.hpp"
#include "povmdisc/classify.hpp"
#include "povmdisc/povm.hpp"

namespace povmdisc {

using Json = nlohmann::json;

// Complex payloads are nested [re, im] arrays; doubles survive a round trip
// exactly (shortest-representation decimal output).

Json pair_to_json(const PovmPair& pair);
PovmPair pair_from_json(const Json& j);

Json verdict_to_json(const Verdict& v, bool include_witness = true);

Json scheme_to_json(const AdaptiveScheme& scheme);
AdaptiveScheme scheme_from_json(const Json& j);

Json report_to_json(const SimulationReport& report, bool include_paths = true);

Json parallel_result_to_json(const ParallelCheckResult& result,
                             bool include_witness = true);

/// Parses a JSON file; IoError carries the parse position on failure.
Json read_json_file(const std::filesystem::path& path);

/// Temp-file-plus-rename write.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const Json& j);

}  // namespace povmdisc
