#pragma once

#include <json.hpp>
#include <string>

#include "smashline/matrix_realization.hpp"
#include "smashline/smash_algebra.hpp"

namespace smashline {

using Json = nlohmann::json;

// Deterministic shortest-round-trip-safe formatting for CSV output.
std::string format_double(double v);

Json complex_to_json(Complex c);  // [re, im]

// Stable form: terms as an array sorted by ascending power tuples, complex
// coefficients as [re, im].
Json to_json(const SmashElement& e);
SmashElement smash_element_from_json(const Json& j);

Json to_json(const MultiSlotExpansion& e);

// Row-major dump of a dense complex matrix, entries as [re, im].
Json matrix_to_json(const RepMatrix& m);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace smashline
