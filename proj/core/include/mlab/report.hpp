#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlab/identities.hpp"
#include "mlab/rigidity.hpp"
#include "mlab/spectral.hpp"

namespace mlab {

inline constexpr const char* kReportSchema = "minkowski-lab/1";

// Result payloads; key order is fixed so that dumps are byte-stable.
nlohmann::ordered_json to_json(const IdentityReport& r);
nlohmann::ordered_json to_json(const ChainReport& r);
nlohmann::ordered_json to_json(const RigidityProbe& r);
nlohmann::ordered_json to_json(const EigenReport& r);
nlohmann::ordered_json to_json(const SweepTable& t);

// One CSV field, quoted when needed.
std::string csv_field(const std::string& s);
// Shortest round-trip decimal form of a double ("nan", "inf" for non-finite).
std::string format_double(double v);

}  // namespace mlab
