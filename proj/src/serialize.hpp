#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "map_model.hpp"

namespace raycensus {

// %.17g; non-finite values have no JSON spelling and are written as null.
std::string format_double(double x);

// Sorted keys, no whitespace, doubles via format_double. Byte-identical for
// equal trees.
std::string canonical_json(const nlohmann::json& value);

nlohmann::json complex_json(Complex z);
nlohmann::json complex_list_json(const std::vector<Complex>& points);

}  // namespace raycensus
