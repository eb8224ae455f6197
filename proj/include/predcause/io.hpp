#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "predcause/dataset.hpp"
#include "predcause/discovery.hpp"
#include "predcause/graph.hpp"
#include "predcause/model.hpp"

namespace predcause {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Graph JSON:
//   {"variables":[{"name":"A","arity":2},...],
//    "directed":[["A","Y"],...], "bidirected":[["B","C"],...],
//    "outcome":"Y"}            // outcome optional
// ---------------------------------------------------------------------------

inline json graph_to_json(const Admg& g, std::optional<VarId> outcome = std::nullopt) {
    json j;
    j["variables"] = json::array();
    for (const auto& v : g.variables()) j["variables"].push_back({{"name", v.name}, {"arity", v.arity}});
    j["directed"] = json::array();
    for (auto [p, c] : g.directed_edges())
        j["directed"].push_back({g.variable(p).name, g.variable(c).name});
    j["bidirected"] = json::array();
    for (auto [a, b] : g.bidirected_edges())
        j["bidirected"].push_back({g.variable(a).name, g.variable(b).name});
    if (outcome) j["outcome"] = g.variable(*outcome).name;
    return j;
}

struct GraphFile {
    Admg graph;
    std::optional<VarId> outcome;
};

inline GraphFile graph_from_json(const json& j) {
    GraphFile out;
    if (!j.contains("variables") || !j["variables"].is_array())
        throw std::invalid_argument("graph json: missing 'variables' array");
    for (const auto& v : j["variables"])
        out.graph.add_variable(v.at("name").get<std::string>(), v.value("arity", 2));
    for (const auto& e : j.value("directed", json::array()))
        out.graph.add_directed(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    for (const auto& e : j.value("bidirected", json::array()))
        out.graph.add_bidirected(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    if (j.contains("outcome")) out.outcome = out.graph.index_of(j["outcome"].get<std::string>());
    return out;
}

// ---------------------------------------------------------------------------
// Model JSON: graph JSON plus
//   "latents":[{"name":"U0","arity":2},...],
//   "cpts":{"B":{"parents":["A"],"table":[[0.2,0.8],[0.7,0.3]]},...}
// CPT rows are parent instantiations in mixed radix, last parent fastest.
// ---------------------------------------------------------------------------

inline json model_to_json(const CausalModel& m, std::optional<VarId> outcome = std::nullopt) {
    json j = graph_to_json(m.observed, outcome);
    j["latents"] = json::array();
    for (const auto& u : m.latents) j["latents"].push_back({{"name", u.name}, {"arity", u.arity}});
    json cpts = json::object();
    for (const auto& cpt : m.cpts) {
        json entry;
        entry["parents"] = json::array();
        for (VarId p : cpt.parents) entry["parents"].push_back(m.name_of(p));
        const int k = m.arity_of(cpt.child);
        json table = json::array();
        for (std::size_t r = 0; r * static_cast<std::size_t>(k) < cpt.table.size(); ++r) {
            json row = json::array();
            for (int s = 0; s < k; ++s) row.push_back(cpt.table[r * static_cast<std::size_t>(k) + s]);
            table.push_back(row);
        }
        entry["table"] = table;
        cpts[m.name_of(cpt.child)] = entry;
    }
    j["cpts"] = cpts;
    return j;
}

struct ModelFile {
    CausalModel model;
    std::optional<VarId> outcome;
};

inline ModelFile model_from_json(const json& j) {
    GraphFile gf = graph_from_json(j);
    ModelFile out;
    out.model.observed = std::move(gf.graph);
    out.outcome = gf.outcome;
    CausalModel& m = out.model;

    // latents as declared, then aligned with the canonical bidirected order
    std::vector<Variable> declared;
    for (const auto& u : j.value("latents", json::array()))
        declared.push_back({u.at("name").get<std::string>(), u.value("arity", 2)});

    if (!j.contains("cpts") || !j["cpts"].is_object())
        throw std::invalid_argument("model json: missing 'cpts' object");
    const json& cpts = j["cpts"];

    // children of each declared latent, read off the cpt parent lists
    auto latent_children = [&](const std::string& name) {
        std::vector<VarId> kids;
        for (const auto& v : m.observed.variables()) {
            const json& entry = cpts.at(v.name);
            for (const auto& p : entry.at("parents"))
                if (p.get<std::string>() == name) kids.push_back(m.observed.index_of(v.name));
        }
        return kids;
    };

    auto edges = m.observed.bidirected_edges();
    if (edges.size() != declared.size())
        throw std::invalid_argument("model json: latent count must match bidirected edge count");
    m.latents.resize(edges.size());
    m.latent_edges = edges;
    std::vector<bool> used(declared.size(), false);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        bool found = false;
        for (std::size_t d = 0; d < declared.size() && !found; ++d) {
            if (used[d]) continue;
            auto kids = latent_children(declared[d].name);
            if (kids.size() == 2 &&
                ((kids[0] == edges[e].first && kids[1] == edges[e].second) ||
                 (kids[1] == edges[e].first && kids[0] == edges[e].second))) {
                m.latents[e] = declared[d];
                used[d] = true;
                found = true;
            }
        }
        if (!found)
            throw std::invalid_argument("model json: no latent matches bidirected edge (" +
                                        m.observed.variable(edges[e].first).name + ", " +
                                        m.observed.variable(edges[e].second).name + ")");
    }

    // name -> augmented id
    auto id_of = [&](const std::string& name) -> VarId {
        if (m.observed.has_variable(name)) return m.observed.index_of(name);
        for (std::size_t u = 0; u < m.latents.size(); ++u)
            if (m.latents[u].name == name)
                return static_cast<VarId>(m.observed.size() + u);
        throw std::out_of_range("model json: unknown cpt parent '" + name + "'");
    };

    const auto total = static_cast<VarId>(m.total_count());
    m.cpts.resize(static_cast<std::size_t>(total));
    for (VarId v = 0; v < total; ++v) {
        const std::string& name = m.name_of(v);
        if (!cpts.contains(name))
            throw std::invalid_argument("model json: missing cpt for '" + name + "'");
        const json& entry = cpts.at(name);
        Cpt c;
        c.child = v;
        for (const auto& p : entry.at("parents")) c.parents.push_back(id_of(p.get<std::string>()));
        for (const auto& row : entry.at("table"))
            for (const auto& x : row) c.table.push_back(x.get<double>());
        m.cpts[static_cast<std::size_t>(v)] = std::move(c);
    }
    m.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Dataset CSV: header row of variable names, one integer code per cell,
// newline-terminated rows, UTF-8.
// ---------------------------------------------------------------------------

inline void write_dataset_csv(const Dataset& d, std::ostream& os) {
    for (std::size_t v = 0; v < d.variables.size(); ++v) {
        if (v) os << ',';
        os << d.variables[v].name;
    }
    os << '\n';
    for (std::size_t r = 0; r < d.rows(); ++r) {
        for (std::size_t v = 0; v < d.columns.size(); ++v) {
            if (v) os << ',';
            os << static_cast<int>(d.columns[v][r]);
        }
        os << '\n';
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

/// Arity is inferred as max(code) + 1 per column (floor 2).
inline Dataset read_dataset_csv(std::istream& is) {
    Dataset d;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("dataset csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (const auto& name : split_csv_line(line)) {
        if (name.empty()) throw std::invalid_argument("dataset csv: empty column name");
        d.variables.push_back({name, 2});
    }
    d.columns.assign(d.variables.size(), {});
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != d.variables.size())
            throw std::invalid_argument("dataset csv: wrong cell count on line " +
                                        std::to_string(line_no));
        for (std::size_t v = 0; v < cells.size(); ++v) {
            int code;
            try {
                code = std::stoi(cells[v]);
            } catch (const std::exception&) {
                throw std::invalid_argument("dataset csv: non-integer cell on line " +
                                            std::to_string(line_no));
            }
            if (code < 0 || code > 254)
                throw std::invalid_argument("dataset csv: code out of range on line " +
                                            std::to_string(line_no));
            d.columns[v].push_back(static_cast<std::uint8_t>(code));
            if (code + 1 > d.variables[v].arity) d.variables[v].arity = code + 1;
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Discovery report JSON (schema_version 1)
// ---------------------------------------------------------------------------

inline json report_to_json(const DiscoveryReport& r, const std::vector<Variable>& variables,
                           const std::string& outcome_name, double alpha, double pairwise_alpha) {
    json j;
    j["schema_version"] = 1;
    j["algorithm"] = r.algorithm;
    j["outcome"] = outcome_name;
    j["alpha"] = alpha;
    j["pairwise_alpha"] = pairwise_alpha;
    j["causes"] = json::array();
    for (VarId v : r.causes) j["causes"].push_back(variables.at(static_cast<std::size_t>(v)).name);
    j["ci_tests"] = r.ci_count;
    j["pairwise_ci_tests"] = r.pairwise_ci_count;
    j["depth_reached"] = r.depth_reached;
    j["wall_time_seconds"] = r.wall_time_seconds;
    json scores = json::object();
    for (const auto& [v, p] : r.pvalue_scores)
        scores[variables.at(static_cast<std::size_t>(v)).name] = p;
    j["pvalue_scores"] = scores;
    return j;
}

// ---------------------------------------------------------------------------
// small file helpers
// ---------------------------------------------------------------------------

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

inline void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

inline void save_json_file(const std::string& path, const json& j) {
    save_text_file(path, j.dump(2) + "\n");
}

inline Dataset read_dataset_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_dataset_csv(in);
}

inline void write_dataset_csv_file(const std::string& path, const Dataset& d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_dataset_csv(d, out);
}

}  // namespace predcause
