#pragma once

#include <string>
#include <vector>

#include "dynlearn/support/config.hpp"

namespace dynlearn {

/// Names of the built-in run configurations, paper scale and desk scale.
std::vector<std::string> preset_names();

/// Full run configuration for a built-in preset; throws ConfigError for an
/// unknown name.
KeyValue preset_config(const std::string& name);

}  // namespace dynlearn
