#pragma once

#include <filesystem>
#include <string>

#include "closure/verdicts/verdicts.hpp"
#include "json.hpp"

namespace closure {

using Json = nlohmann::ordered_json;

constexpr int kReportSchemaVersion = 1;

/// Finite values as numbers; ±inf and NaN as the strings "inf", "-inf", "nan".
Json json_number(double v);
Json to_json(const KInterval& iv);
Json to_json(const BMCertificate& c);
Json to_json(const ConditionResult& c);
Json to_json(const ClosureReport& r);

/// Two-space indented dump with a trailing newline.
std::string dump_report(const Json& j);

/// Writes through a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace closure
