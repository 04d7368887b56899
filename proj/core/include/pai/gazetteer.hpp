#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small built-in place-name lists used by location matching and by the
// rule-based anonymizer. All lookups are case-insensitive.
namespace pai::gazetteer {

/// Canonical lowercase country for a country name, alias ("usa", "uk"), or a
/// sub-national region that implies a country ("ohio", "england").
std::optional<std::string> canonical_country(std::string_view name);

/// Canonical country of a known city.
std::optional<std::string> country_of_city(std::string_view city);

bool is_known_city(std::string_view name);

/// City, country, alias and region names usable for masking (names that are
/// also common words such as "us" or "nice" are left out), longest first.
const std::vector<std::string>& all_place_names();

}  // namespace pai::gazetteer
