#pragma once

#include "instance_file.hpp"
#include "wdk/congruence.hpp"
#include "wdk/cotangent.hpp"
#include "wdk/freeness.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace wdk::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Report skeleton shared by every command: schema version, command, instance echo.
Json report_header(const std::string& command, const InstanceFile& f);

Json point_json(const OPoint& v);
OPoint point_from_json(const Json& j, const Dvr& ring);

Json cotangent_json(const std::string& point, const Instance& inst, SigmaSet sigma, std::optional<int> s,
                    const OPoint& v, const CotangentReport& r);
Json ledger_json(const std::string& point, const OPoint& v, const Instance& inst, const DefectLedger& led);

Json step_json(const DescentStep& st);
Json certificate_json(const DescentCertificate& cert);
/// Inverse of certificate_json; witnesses are parsed over `ring`.
DescentCertificate certificate_from_json(const Json& j, const Dvr& ring);

/// Minimal RFC 4180 writer: quotes a field only when it needs it.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);

} // namespace wdk::cli
