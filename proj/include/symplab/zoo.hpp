#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symplab/maps.hpp"

namespace symplab {

/// A map spec or experiment config that cannot be resolved.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "name" or "name:key=value,key=value". Keys are lowercased; names are not.
struct MapSpec {
    std::string name;
    std::vector<Parameter> parameters;
};

MapSpec parse_map_spec(std::string_view text);

/// Builds a registered map. Missing keys take the defaults listed by
/// zoo_entries(); unknown names or keys throw ConfigError.
PlanarMap make_map(std::string_view text);

struct ZooEntry {
    std::string name;
    std::string defaults;  ///< spec string with every key at its default
    std::string summary;
};

/// Registered maps in a stable order.
const std::vector<ZooEntry>& zoo_entries();

/// Specs exercised by the property suites ("every zoo map").
std::vector<std::string> zoo_suite();

}  // namespace symplab
