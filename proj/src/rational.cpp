#include "spchain/rational.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace spchain {

namespace {

bool is_integer_literal(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

std::optional<Rat> try_parse_rat(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_integer_literal(text)) return std::nullopt;
        return Rat(BigInt(text));
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den)) return std::nullopt;
    BigInt d(den);
    if (d == 0) return std::nullopt;
    // Division canonicalizes; constructing mpq from a raw "p/q" string would not.
    return Rat(BigInt(num)) / Rat(d);
}

Rat parse_rat(const std::string& text) {
    auto r = try_parse_rat(text);
    if (!r) throw std::invalid_argument("not a rational literal: '" + text + "'");
    return *r;
}

std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string rat_to_decimal(const Rat& r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", rat_to_double(r));
    return buf;
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

Rat rat_from_double(double x) { return Rat(x); }

}  // namespace spchain
