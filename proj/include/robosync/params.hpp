#pragma once

#include <map>
#include <string>
#include <variant>

namespace robosync {

/// Flat plugin parameters: identifier -> number or string.
using ParamValue = std::variant<double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

} // namespace robosync
