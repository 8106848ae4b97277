#include "spchain/report.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace spchain {

using nlohmann::json;

Format parse_format(const std::string& name) {
    if (name == "table") return Format::Table;
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw validation_error("unknown format '" + name + "' (table|csv|json)");
}

std::string render_number(const Rat& r, bool decimal) {
    return decimal ? rat_to_decimal(r) : rat_to_string(r);
}

namespace {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_text() const {
        std::vector<std::size_t> width(header.size());
        for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
        for (const auto& row : rows)
            for (std::size_t c = 0; c < row.size(); ++c)
                width[c] = std::max(width[c], row[c].size());
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& row) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                os << std::left << std::setw(static_cast<int>(width[c]) + 2) << row[c];
            }
            os << "\n";
        };
        line(header);
        for (const auto& row : rows) line(row);
        return os.str();
    }

    std::string to_csv() const {
        std::ostringstream os;
        auto line = [&](const std::vector<std::string>& row) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) os << ",";
                os << row[c];
            }
            os << "\n";
        };
        line(header);
        for (const auto& row : rows) line(row);
        return os.str();
    }
};

std::string render_tables(const std::vector<std::pair<std::string, Table>>& tables, Format f) {
    std::ostringstream os;
    for (const auto& [title, tab] : tables) {
        if (f == Format::Table) {
            os << "# " << title << "\n" << tab.to_text() << "\n";
        } else {
            os << "# " << title << "\n" << tab.to_csv();
        }
    }
    return os.str();
}

}  // namespace

std::string render_validate(const Network& net, Format f) {
    if (f == Format::Json) {
        json doc;
        doc["kind"] = kind_name(net.kind);
        doc["nodes"] = net.node_count();
        doc["arcs"] = net.arc_count();
        if (net.kind == NetworkKind::Spg) {
            auto [reduced, removal] = remove_dominated_paths(net);
            json sc = json::array();
            for (const auto& e : removal.shortcuts) {
                json one;
                one["shortcut"] = {e.arc.first, e.arc.second};
                json rem = json::array();
                for (const auto& [u, v] : e.removed_arcs) rem.push_back({u, v});
                one["removes"] = rem;
                sc.push_back(one);
            }
            doc["shortcuts"] = sc;
            auto spd = decompose(reduced);
            auto ms = merge_sets(reduced, spd);
            auto cases = classify_arcs(reduced, ms);
            json nodes = json::object();
            for (int v = 0; v < reduced.node_count(); ++v) {
                json e;
                json cs = json::array(), cp = json::array();
                for (int h : ms.c_self[v]) cs.push_back(reduced.ids[h]);
                for (int h : ms.c_parent[v]) cp.push_back(reduced.ids[h]);
                e["C_S"] = cs;
                e["C_P"] = cp;
                nodes[reduced.ids[v]] = e;
            }
            doc["merge_sets"] = nodes;
            json arcs = json::object();
            for (int a = 0; a < reduced.arc_count(); ++a)
                arcs[reduced.ids[reduced.arcs[a].first] + "->" +
                     reduced.ids[reduced.arcs[a].second]] = arc_case_name(cases[a]);
            doc["arc_cases"] = arcs;
        }
        return doc.dump(2) + "\n";
    }

    std::ostringstream os;
    os << "kind: " << kind_name(net.kind) << "\n";
    os << "nodes: " << net.node_count() << ", arcs: " << net.arc_count() << "\n";
    if (net.kind != NetworkKind::Spg) return os.str();

    auto [reduced, removal] = remove_dominated_paths(net);
    if (removal.empty()) {
        os << "shortcuts: none\n";
    } else {
        for (const auto& e : removal.shortcuts) {
            os << "shortcut (" << e.arc.first << ", " << e.arc.second << ") dominates:";
            for (const auto& [u, v] : e.removed_arcs) os << " (" << u << ", " << v << ")";
            os << "\n";
        }
    }
    auto spd = decompose(reduced);
    auto ms = merge_sets(reduced, spd);
    auto cases = classify_arcs(reduced, ms);
    os << "decomposition:\n" << spd.describe(reduced);
    os << "merge sets:\n";
    for (int v = 0; v < reduced.node_count(); ++v) {
        os << "  " << reduced.ids[v] << ": C_S = {";
        for (std::size_t k = 0; k < ms.c_self[v].size(); ++k)
            os << (k ? ", " : "") << reduced.ids[ms.c_self[v][k]];
        os << "}, C_P = {";
        for (std::size_t k = 0; k < ms.c_parent[v].size(); ++k)
            os << (k ? ", " : "") << reduced.ids[ms.c_parent[v][k]];
        os << "}\n";
    }
    os << "arc cases:\n";
    for (int a = 0; a < reduced.arc_count(); ++a)
        os << "  (" << reduced.ids[reduced.arcs[a].first] << ", "
           << reduced.ids[reduced.arcs[a].second] << "): " << arc_case_name(cases[a]) << "\n";
    return os.str();
}

namespace {

Table equilibrium_arc_table(const Network& net, const Equilibrium& eq, bool decimal) {
    Table t;
    t.header = {"seller", "buyer", "flow", "active"};
    for (int a = 0; a < net.arc_count(); ++a) {
        t.rows.push_back({net.ids[net.arcs[a].first], net.ids[net.arcs[a].second],
                          render_number(eq.flow[a], decimal), eq.active[a] ? "yes" : "no"});
    }
    return t;
}

Table equilibrium_node_table(const Network& net, const Equilibrium& eq, bool decimal) {
    Table t;
    t.header = {"node", "throughput", "price"};
    for (int v = 0; v < net.node_count(); ++v) {
        t.rows.push_back({net.ids[v], render_number(eq.X[v], decimal),
                          eq.p[v] ? render_number(*eq.p[v], decimal) : ""});
    }
    return t;
}

Table price_table(const Network& net, const MergeSets& ms, const PriceSchedule& ps,
                  bool decimal) {
    Table t;
    t.header = {"node", "b", "C_P", "alpha_arcs"};
    for (int v = 0; v < net.node_count(); ++v) {
        std::string cp;
        for (std::size_t k = 0; k < ms.c_parent[v].size(); ++k)
            cp += (k ? " " : "") + net.ids[ms.c_parent[v][k]];
        std::string alphas;
        for (int a : net.out_arcs[v])
            if (ps.has_alpha[a])
                alphas += (alphas.empty() ? "" : " ") + net.ids[net.arcs[a].second] + "=" +
                          render_number(ps.alpha[a], decimal);
        t.rows.push_back({net.ids[v], render_number(ps.b[v], decimal), cp, alphas});
    }
    return t;
}

json eq_to_json(const Network& net, const Equilibrium& eq, bool decimal) {
    json arcs = json::array();
    for (int a = 0; a < net.arc_count(); ++a)
        arcs.push_back({{"seller", net.ids[net.arcs[a].first]},
                        {"buyer", net.ids[net.arcs[a].second]},
                        {"flow", render_number(eq.flow[a], decimal)},
                        {"active", static_cast<bool>(eq.active[a])}});
    json nodes = json::array();
    for (int v = 0; v < net.node_count(); ++v) {
        json n = {{"id", net.ids[v]}, {"throughput", render_number(eq.X[v], decimal)}};
        if (eq.p[v]) n["price"] = render_number(*eq.p[v], decimal);
        nodes.push_back(n);
    }
    return {{"arcs", arcs}, {"nodes", nodes}};
}

}  // namespace

std::string render_solution(const Network& original, const Solution& sol, Format f, bool decimal,
                            bool emit_prices, bool emit_equilibrium) {
    if (f == Format::Json) {
        json doc;
        if (emit_equilibrium) doc["equilibrium"] = eq_to_json(original, sol.full, decimal);
        if (emit_prices) {
            json prices = json::object();
            for (int v = 0; v < sol.reduced.node_count(); ++v)
                prices[sol.reduced.ids[v]] = render_number(sol.prices.b[v], decimal);
            json alphas = json::object();
            for (int a = 0; a < sol.reduced.arc_count(); ++a)
                if (sol.prices.has_alpha[a])
                    alphas[sol.reduced.ids[sol.reduced.arcs[a].first] + "->" +
                           sol.reduced.ids[sol.reduced.arcs[a].second]] =
                        render_number(sol.prices.alpha[a], decimal);
            doc["price_slopes"] = prices;
            doc["alpha"] = alphas;
            doc["X_s"] = render_number(sol.prices.source_inflow, decimal);
        }
        if (!sol.removal.empty()) {
            json rem = json::array();
            for (const auto& [u, v] : sol.removal.removed_arcs) rem.push_back({u, v});
            doc["removed_arcs"] = rem;
        }
        return doc.dump(2) + "\n";
    }
    std::vector<std::pair<std::string, Table>> tables;
    if (emit_equilibrium) {
        tables.emplace_back("arcs", equilibrium_arc_table(original, sol.full, decimal));
        tables.emplace_back("nodes", equilibrium_node_table(original, sol.full, decimal));
    }
    if (emit_prices)
        tables.emplace_back("prices", price_table(sol.reduced, sol.ms, sol.prices, decimal));
    std::string out = render_tables(tables, f);
    if (emit_prices) out += "# X_s = " + render_number(sol.prices.source_inflow, decimal) + "\n";
    return out;
}

std::string render_analysis(const Network& original, const Solution& sol, Format f,
                            bool decimal) {
    (void)original;
    auto util = node_utilities(sol.reduced, sol.ms, sol.prices, sol.eq);
    auto welfare = social_welfare(sol.reduced, sol.prices, util, sol.eq);
    auto factor = component_factor(sol.reduced, sol.spd, sol.prices);
    auto pairs = check_double_utility(sol.reduced, sol.cases, util);
    const Rat p_src = source_price(sol.reduced);

    if (f == Format::Json) {
        json doc;
        json u = json::object();
        for (int v = 0; v < sol.reduced.node_count(); ++v)
            if (v != sol.reduced.sink()) u[sol.reduced.ids[v]] = render_number(util[v], decimal);
        doc["utility"] = u;
        doc["consumer_surplus"] = render_number(welfare.consumer_surplus, decimal);
        doc["sw_by_sum"] = render_number(welfare.sw_by_sum, decimal);
        doc["sw_by_flow"] = render_number(welfare.sw_by_flow, decimal);
        doc["sw_by_lambda"] = render_number(welfare.sw_by_lambda, decimal);
        doc["lambda"] = render_number(factor.lambda, decimal);
        doc["source_price"] = render_number(p_src, decimal);
        json du = json::array();
        for (const auto& e : pairs)
            du.push_back({{"parent", e.parent},
                          {"child", e.child},
                          {"parent_utility", render_number(e.parent_utility, decimal)},
                          {"child_utility", render_number(e.child_utility, decimal)},
                          {"holds", e.holds}});
        doc["double_utility"] = du;
        return doc.dump(2) + "\n";
    }

    Table summary;
    summary.header = {"quantity", "value"};
    summary.rows = {
        {"X_s", render_number(sol.prices.source_inflow, decimal)},
        {"lambda", render_number(factor.lambda, decimal)},
        {"source_price", render_number(p_src, decimal)},
        {"consumer_surplus", render_number(welfare.consumer_surplus, decimal)},
        {"sw_by_sum", render_number(welfare.sw_by_sum, decimal)},
        {"sw_by_flow", render_number(welfare.sw_by_flow, decimal)},
        {"sw_by_lambda", render_number(welfare.sw_by_lambda, decimal)},
    };
    Table ut;
    ut.header = {"node", "utility"};
    for (int v = 0; v < sol.reduced.node_count(); ++v)
        if (v != sol.reduced.sink())
            ut.rows.push_back({sol.reduced.ids[v], render_number(util[v], decimal)});
    Table du;
    du.header = {"parent", "child", "parent_utility", "child_utility", "holds"};
    for (const auto& e : pairs)
        du.rows.push_back({e.parent, e.child, render_number(e.parent_utility, decimal),
                           render_number(e.child_utility, decimal), e.holds ? "yes" : "no"});
    return render_tables({{"summary", summary}, {"utilities", ut}, {"double-utility", du}}, f);
}

std::string render_swap(const Network& original, int series_index, Format f, bool decimal) {
    auto sol = solve(original);
    Network swapped = swap_series(sol.reduced, sol.spd, series_index);
    auto sol2 = solve(swapped);

    auto metrics = [&](const Solution& s) {
        auto util = node_utilities(s.reduced, s.ms, s.prices, s.eq);
        auto welfare = social_welfare(s.reduced, s.prices, util, s.eq);
        const Rat lambda = s.prices.b[s.reduced.source()] / s.reduced.sink_slope();
        return std::tuple<Rat, Rat, Rat, Rat>{lambda, s.prices.source_inflow, welfare.sw_by_sum,
                                              util[s.reduced.source()]};
    };
    auto [l1, x1, w1, u1] = metrics(sol);
    auto [l2, x2, w2, u2] = metrics(sol2);
    const bool invariant = l1 == l2 && x1 == x2 && w1 == w2 && u1 == u2;
    if (!invariant)
        throw internal_error("series swap changed an invariant quantity");

    if (f == Format::Json) {
        json doc;
        doc["swapped_node"] = series_index;
        doc["lambda"] = render_number(l1, decimal);
        doc["X_s"] = render_number(x1, decimal);
        doc["SW"] = render_number(w1, decimal);
        doc["source_utility"] = render_number(u1, decimal);
        doc["invariant"] = invariant;
        doc["swapped_network"] = json::parse(serialize_network(swapped));
        return doc.dump(2) + "\n";
    }
    Table t;
    t.header = {"quantity", "original", "swapped"};
    t.rows = {{"lambda", render_number(l1, decimal), render_number(l2, decimal)},
              {"X_s", render_number(x1, decimal), render_number(x2, decimal)},
              {"SW", render_number(w1, decimal), render_number(w2, decimal)},
              {"source_utility", render_number(u1, decimal), render_number(u2, decimal)}};
    std::string out = render_tables({{"swap invariants", t}}, f);
    out += "invariant: " + std::string(invariant ? "yes" : "no") + "\n";
    if (f == Format::Table) out += "swapped network:\n" + serialize_network(swapped);
    return out;
}

std::string render_sweep(const SweepTable& table, Format f, bool decimal) {
    Table t;
    t.header = {table.parameter, "X_s", "SW"};
    if (!table.rows.empty())
        for (const auto& [id, u] : table.rows.front().utilities) t.header.push_back("pi_" + id);
    for (const auto& row : table.rows) {
        std::vector<std::string> r{render_number(row.value, decimal),
                                   render_number(row.X_s, decimal),
                                   render_number(row.SW, decimal)};
        for (const auto& [id, u] : row.utilities) r.push_back(render_number(u, decimal));
        t.rows.push_back(std::move(r));
    }
    if (f == Format::Json) {
        json doc;
        doc["parameter"] = table.parameter;
        doc["monotone"] = table.monotone;
        json rows = json::array();
        for (const auto& row : table.rows) {
            json r = {{"value", render_number(row.value, decimal)},
                      {"X_s", render_number(row.X_s, decimal)},
                      {"SW", render_number(row.SW, decimal)}};
            json u = json::object();
            for (const auto& [id, uu] : row.utilities) u[id] = render_number(uu, decimal);
            r["utility"] = u;
            rows.push_back(r);
        }
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }
    std::string out = render_tables({{"sweep", t}}, f);
    if (f == Format::Table) out += "monotone: " + std::string(table.monotone ? "yes" : "no") + "\n";
    return out;
}

namespace {

Table two_market_table(const StrategyOutcome& out, bool decimal) {
    Table t;
    t.header = {"strategy", "feasible", "X", "pi_s", "pi_v", "CS", "SW"};
    t.rows.push_back({"high", out.high.feasible ? "yes" : "no",
                      render_number(out.high.X, decimal), render_number(out.high.pi_s, decimal),
                      render_number(out.high.pi_v, decimal), render_number(out.high.cs, decimal),
                      render_number(out.high.sw, decimal)});
    t.rows.push_back({"low", out.low.feasible ? "yes" : "no", render_number(out.low.X, decimal),
                      render_number(out.low.pi_s, decimal), render_number(out.low.pi_v, decimal),
                      render_number(out.low.cs, decimal), render_number(out.low.sw, decimal)});
    return t;
}

}  // namespace

std::string render_two_market(const TwoMarketScenario& sc, const StrategyOutcome& out, Format f,
                              bool decimal) {
    (void)sc;
    if (f == Format::Json) {
        json doc;
        auto one = [&](const StrategyValues& v) {
            return json{{"feasible", v.feasible},        {"X", render_number(v.X, decimal)},
                        {"pi_s", render_number(v.pi_s, decimal)}, {"pi_v", render_number(v.pi_v, decimal)},
                        {"CS", render_number(v.cs, decimal)},     {"SW", render_number(v.sw, decimal)}};
        };
        doc["high"] = one(out.high);
        doc["low"] = one(out.low);
        doc["x1"] = render_number(out.x1, decimal);
        doc["x2"] = render_number(out.x2, decimal);
        doc["preferred"] = out.preferred;
        doc["multiple_equilibria"] = out.multiple_equilibria;
        doc["a1_star"] = fmt_double(out.a1_star);
        return doc.dump(2) + "\n";
    }
    std::string res = render_tables({{"two-market", two_market_table(out, decimal)}}, f);
    std::ostringstream os;
    os << res;
    os << "preferred: " << out.preferred << "\n";
    os << "low-strategy market flows: x1 = " << render_number(out.x1, decimal)
       << ", x2 = " << render_number(out.x2, decimal) << "\n";
    os << "Pi_s = "
       << render_number(out.preferred == "low" ? out.low.pi_s : out.high.pi_s, decimal) << "\n";
    os << "indifference a1* = " << fmt_double(out.a1_star) << "\n";
    if (out.multiple_equilibria) os << "multiple equilibria: yes\n";
    return os.str();
}

std::string render_two_market_sweep(const Rat& cost, const Rat& b1, const Rat& a2, const Rat& b2,
                                    const Rat& lo, const Rat& hi, const Rat& step, Format f,
                                    bool decimal) {
    Table t;
    t.header = {"a1", "pi_s_high", "pi_s_low", "CS_high", "CS_low", "X_high", "X_low",
                "SW_high", "SW_low", "preferred"};
    for (Rat a1 = lo; a1 <= hi; a1 += step) {
        TwoMarketScenario sc{cost, a1, b1, a2, b2};
        auto out = two_market_analyze(sc);
        t.rows.push_back({render_number(a1, decimal), render_number(out.high.pi_s, decimal),
                          render_number(out.low.pi_s, decimal),
                          render_number(out.high.cs, decimal), render_number(out.low.cs, decimal),
                          render_number(out.high.X, decimal), render_number(out.low.X, decimal),
                          render_number(out.high.sw, decimal), render_number(out.low.sw, decimal),
                          out.preferred});
    }
    if (f == Format::Json) {
        json rows = json::array();
        for (const auto& r : t.rows) {
            json one = json::object();
            for (std::size_t c = 0; c < t.header.size(); ++c) one[t.header[c]] = r[c];
            rows.push_back(one);
        }
        return json{{"rows", rows}}.dump(2) + "\n";
    }
    return render_tables({{"two-market sweep", t}}, f);
}

std::string render_msspg(const MsspgTrace& trace, Format f, bool decimal) {
    Table t;
    t.header = {"round", "mover", "p1", "p2", "utility_before", "utility_after"};
    for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
        const auto& r = trace.rounds[k];
        t.rows.push_back({std::to_string(k + 1), "s" + std::to_string(r.mover),
                          render_number(r.p1, decimal), render_number(r.p2, decimal),
                          render_number(r.utility_before, decimal),
                          render_number(r.utility_after, decimal)});
    }
    if (f == Format::Json) {
        json rounds = json::array();
        for (const auto& r : trace.rounds)
            rounds.push_back({{"mover", r.mover},
                              {"p1", render_number(r.p1, decimal)},
                              {"p2", render_number(r.p2, decimal)},
                              {"utility_before", render_number(r.utility_before, decimal)},
                              {"utility_after", render_number(r.utility_after, decimal)}});
        return json{{"rounds", rounds},
                    {"strictly_decreasing", trace.strictly_decreasing},
                    {"reached_boundary", trace.reached_boundary},
                    {"note", trace.note}}
                   .dump(2) +
               "\n";
    }
    std::string out = render_tables({{"best-response trace", t}}, f);
    std::ostringstream os;
    os << out;
    os << "strictly decreasing: " << (trace.strictly_decreasing ? "yes" : "no") << "\n";
    if (trace.reached_boundary) os << "boundary: " << trace.note << "\n";
    return os.str();
}

std::string render_dag(const DagReport& rep, Format f, bool decimal) {
    if (f == Format::Json) {
        json cases = json::array();
        for (const auto& c : rep.cases)
            cases.push_back({{"case", c.name},
                             {"source_utility", render_number(c.source_utility, decimal)}});
        json doc;
        doc["cases"] = cases;
        doc["x"] = render_number(rep.x, decimal);
        doc["z"] = render_number(rep.z, decimal);
        doc["p_sa"] = render_number(rep.p_sa, decimal);
        doc["p_sb"] = render_number(rep.p_sb, decimal);
        doc["p_ac"] = render_number(rep.p_ac, decimal);
        doc["p_bd"] = render_number(rep.p_bd, decimal);
        doc["no_improving_deviation"] = rep.no_improving_deviation;
        doc["active_subgraph_is_spg"] = rep.active_subgraph_is_spg;
        return doc.dump(2) + "\n";
    }
    Table t;
    t.header = {"case", "source_utility"};
    for (const auto& c : rep.cases)
        t.rows.push_back({c.name, render_number(c.source_utility, decimal)});
    std::ostringstream os;
    os << render_tables({{"activity cases", t}}, f);
    os << "equilibrium: x = " << render_number(rep.x, decimal)
       << ", z = " << render_number(rep.z, decimal) << ", y = 0\n";
    os << "prices: p_sa = " << render_number(rep.p_sa, decimal)
       << ", p_sb = " << render_number(rep.p_sb, decimal)
       << ", p_ac = " << render_number(rep.p_ac, decimal)
       << ", p_bd = " << render_number(rep.p_bd, decimal) << "\n";
    os << "no improving deviation: " << (rep.no_improving_deviation ? "yes" : "no") << "\n";
    os << "active subgraph is a shortcut-free SPG: "
       << (rep.active_subgraph_is_spg ? "yes" : "no") << "\n";
    return os.str();
}

std::string render_smspg(const Network& net, const SmspgSolution& sol, Format f, bool decimal) {
    if (f == Format::Json) {
        json doc = eq_to_json(net, sol.eq, decimal);
        doc["X_s"] = render_number(sol.prices.source_inflow, decimal);
        return doc.dump(2) + "\n";
    }
    std::vector<std::pair<std::string, Table>> tables;
    tables.emplace_back("arcs", equilibrium_arc_table(net, sol.eq, decimal));
    tables.emplace_back("nodes", equilibrium_node_table(net, sol.eq, decimal));
    return render_tables(tables, f) + "# X_s = " +
           render_number(sol.prices.source_inflow, decimal) + "\n";
}

}  // namespace spchain
