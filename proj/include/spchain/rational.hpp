#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

namespace spchain {

// Exact arithmetic for the whole core pipeline. GMP-backed so that deep
// networks (b doubles per series tier) stay cheap. Expression templates are
// off: operators return plain values, so deduced return types stay safe.
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

// Accepts "p", "-p", "p/q" with optional sign on p. Canonicalizes.
std::optional<Rat> try_parse_rat(const std::string& text);

// Same, but throws std::invalid_argument naming the offending text.
Rat parse_rat(const std::string& text);

// Canonical rendering: "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

// 12 significant digits, for spreadsheet-style output.
std::string rat_to_decimal(const Rat& r);

double rat_to_double(const Rat& r);

// Exact: every finite double is a dyadic rational.
Rat rat_from_double(double x);

}  // namespace spchain
