#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cubeq/forms.hpp"

namespace cubeq {

// {"n": <int>, "terms": [{"e": [<int> x n], "c": <int>}, ...]}
CubicForm parse_form(std::string_view json_text);
CubicForm load_form(const std::string& path);

// Terms in canonical order, no whitespace. Equal forms give equal strings.
std::string canonical_form_json(const CubicForm& form);

using FormHash = std::array<std::uint8_t, 32>;
// SHA-256 of the canonical serialization.
FormHash form_hash(const CubicForm& form);
std::string hex(const FormHash& hash);

// {"n": <int>, "polys": [[{"e": [...], "c": <int>}, ...], ...]} with one or
// two polynomials of any degree.
std::vector<IntPolynomial> parse_polynomials(std::string_view json_text);
std::vector<IntPolynomial> load_polynomials(const std::string& path);

}  // namespace cubeq
