#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlab/immersion.hpp"

namespace mlab {

struct SurfaceInfo {
  std::string label;
  std::string ambients;     // which ambient names the surface accepts
  std::string params;       // human-readable parameter schema
};

// The test-surface zoo, in registry order.
const std::vector<SurfaceInfo>& builtin_surfaces();

// The ambient a surface lives in when the caller does not name one.
AmbientSpace default_ambient(const std::string& label);

// Builds a zoo surface. Unknown labels, parameters of the wrong type and
// parameters that break embeddedness raise ConfigError.
Immersion builtin(const std::string& label, const nlohmann::json& params,
                  const AmbientSpace& ambient);
Immersion builtin(const std::string& label, const nlohmann::json& params = {});

}  // namespace mlab
