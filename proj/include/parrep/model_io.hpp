#pragma once

#include <string>

#include "parrep/model.hpp"

namespace parrep {

/// Serializes a network to the network definition document (JSON text).
std::string export_network(const ReactionNetwork& net);

/// Parses and validates a network definition document.  SchemaError (with
/// the offending field path) on malformed or unknown content.
ReactionNetwork parse_network(const std::string& text);

/// Field-by-field equality, used by the export/parse round-trip check.
bool networks_identical(const ReactionNetwork& a, const ReactionNetwork& b);

}  // namespace parrep
