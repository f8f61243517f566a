#pragma once

#include <string_view>

#include "valkey/poly.hpp"

namespace valkey {

/// Parses polynomial text such as "x^2 - t*x + 3/2" or "(1 + t)/(1 - t)*x".
/// Grammar: sums of products of integers, `x`, `t`, parenthesized groups and
/// `^` powers; division only by nonzero constants; no implicit multiplication.
/// `t` is only available over t-adic fields. Errors carry line and column.
Poly parse_poly(const GroundField& field, std::string_view text);

/// Parses a ground element (a polynomial expression that must be constant).
GroundElement parse_ground(const GroundField& field, std::string_view text);

}  // namespace valkey
