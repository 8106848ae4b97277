#pragma once

#include "spchain/analysis.hpp"
#include "spchain/extensions.hpp"

#include <string>

namespace spchain {

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& name);  // throws validation_error

// Number rendering shared by every emitter: canonical "p/q" rationals, or
// 12-significant-digit decimals when `decimal` is set.
std::string render_number(const Rat& r, bool decimal);

std::string render_validate(const Network& net, Format f);
std::string render_solution(const Network& original, const Solution& sol, Format f, bool decimal,
                            bool emit_prices, bool emit_equilibrium);
std::string render_analysis(const Network& original, const Solution& sol, Format f, bool decimal);
std::string render_swap(const Network& original, int series_index, Format f, bool decimal);
std::string render_sweep(const SweepTable& table, Format f, bool decimal);
std::string render_two_market(const TwoMarketScenario& sc, const StrategyOutcome& out, Format f,
                              bool decimal);
std::string render_two_market_sweep(const Rat& cost, const Rat& b1, const Rat& a2, const Rat& b2,
                                    const Rat& lo, const Rat& hi, const Rat& step, Format f,
                                    bool decimal);
std::string render_msspg(const MsspgTrace& trace, Format f, bool decimal);
std::string render_dag(const DagReport& rep, Format f, bool decimal);
std::string render_smspg(const Network& net, const SmspgSolution& sol, Format f, bool decimal);

}  // namespace spchain
