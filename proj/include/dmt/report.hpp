#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dmt/field.hpp"

namespace dmt {

/// Everything a run reports: the field, the critical cells, deterministic
/// size metrics, and the verification verdict.  Wall-clock timings are
/// deliberately not part of the report (they go to the bench CSV) so that
/// two runs on the same input emit byte-identical files.
struct FieldReport {
    std::string mode;
    std::string ambient; ///< e.g. "grid2d 8 8", "path 4", "tree 2047 0"
    int k = 1;
    VectorField field;
    CriticalSet critical;
    std::vector<std::pair<std::string, long long>> metrics;
    std::string verdict;            ///< empty, "exact-equal" or "differs"
    std::vector<std::string> diffs; ///< first differences when "differs"
};

inline std::string ambient_description(const AmbientComplex& amb) {
    switch (amb.kind()) {
        case AmbientComplex::Kind::grid2d:
            return "grid2d " + std::to_string(amb.width()) + " " + std::to_string(amb.height());
        case AmbientComplex::Kind::path:
            return "path " + std::to_string(amb.width());
        case AmbientComplex::Kind::tree:
            return "tree " + std::to_string(amb.vertex_count()) + " " +
                   std::to_string(amb.tree_root());
    }
    return "unknown";
}

inline std::string emit_report(const FieldReport& r) {
    std::string out;
    out += "morsemerge report 1\n";
    out += "mode " + r.mode + "\n";
    out += "ambient " + r.ambient + "\n";
    out += "k " + std::to_string(r.k) + "\n";
    out += "pairs " + std::to_string(r.field.size()) + "\n";
    for (const CellPair& p : r.field.pairs())
        out += "P " + to_string(p.face) + " " + to_string(p.coface) + "\n";
    out += "critical " + std::to_string(r.critical.size()) + "\n";
    for (const Cell& c : r.critical.cells()) out += "C " + to_string(c) + "\n";
    for (const auto& [key, value] : r.metrics)
        out += "metric " + key + " " + std::to_string(value) + "\n";
    if (!r.verdict.empty()) {
        out += "verdict " + r.verdict + "\n";
        for (const std::string& d : r.diffs) out += "diff " + d + "\n";
    }
    out += "end\n";
    return out;
}

inline void write_report(const FieldReport& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << emit_report(r);
}

namespace detail {

inline Cell parse_cell(const std::string& tok, const std::string& ctx) {
    // "(x,y)"
    if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')')
        throw std::runtime_error(ctx + ": bad cell token '" + tok + "'");
    std::size_t comma = tok.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error(ctx + ": bad cell token '" + tok + "'");
    try {
        int x = std::stoi(tok.substr(1, comma - 1));
        int y = std::stoi(tok.substr(comma + 1, tok.size() - comma - 2));
        return {x, y};
    } catch (const std::exception&) {
        throw std::runtime_error(ctx + ": bad cell token '" + tok + "'");
    }
}

} // namespace detail

inline FieldReport parse_report(const std::string& text) {
    FieldReport r;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "morsemerge report 1")
        throw std::runtime_error("report: unrecognized header");
    std::vector<CellPair> pairs;
    std::vector<Cell> crit;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string ctx = "report line " + std::to_string(lineno);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "mode") {
            ls >> r.mode;
        } else if (tag == "ambient") {
            std::getline(ls, r.ambient);
            if (!r.ambient.empty() && r.ambient.front() == ' ') r.ambient.erase(0, 1);
        } else if (tag == "k") {
            ls >> r.k;
        } else if (tag == "pairs" || tag == "critical") {
            // counts are redundant; validated after the walk
        } else if (tag == "P") {
            std::string a, b;
            if (!(ls >> a >> b)) throw std::runtime_error(ctx + ": expected two cells");
            pairs.push_back({detail::parse_cell(a, ctx), detail::parse_cell(b, ctx)});
        } else if (tag == "C") {
            std::string a;
            if (!(ls >> a)) throw std::runtime_error(ctx + ": expected a cell");
            crit.push_back(detail::parse_cell(a, ctx));
        } else if (tag == "metric") {
            std::string key;
            long long value = 0;
            if (!(ls >> key >> value)) throw std::runtime_error(ctx + ": expected key and value");
            r.metrics.emplace_back(key, value);
        } else if (tag == "verdict") {
            ls >> r.verdict;
        } else if (tag == "diff") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
            r.diffs.push_back(rest);
        } else if (tag == "end") {
            break;
        } else {
            throw std::runtime_error(ctx + ": unknown tag '" + tag + "'");
        }
    }
    r.field = VectorField(std::move(pairs));
    r.critical = CriticalSet(std::move(crit));
    return r;
}

struct Verdict {
    bool exact_equal = false;
    std::vector<std::string> diffs; ///< at most 10 entries
};

/// Exact set comparison of two reports' fields and critical cells.
inline Verdict verify_reports(const FieldReport& a, const FieldReport& b) {
    if (a.ambient != b.ambient)
        throw std::invalid_argument("verify: reports describe different complexes ('" +
                                    a.ambient + "' vs '" + b.ambient + "')");
    Verdict v;
    std::vector<std::string> diffs;
    for (const CellPair& p : field_symmetric_difference(a.field, b.field)) {
        bool left = a.field.contains(p);
        diffs.push_back(std::string(left ? "pair only-left " : "pair only-right ") + to_string(p));
    }
    std::vector<Cell> conly;
    std::set_symmetric_difference(a.critical.cells().begin(), a.critical.cells().end(),
                                  b.critical.cells().begin(), b.critical.cells().end(),
                                  std::back_inserter(conly));
    for (const Cell& c : conly) {
        bool left = a.critical.contains(c);
        diffs.push_back(std::string(left ? "critical only-left " : "critical only-right ") +
                        to_string(c));
    }
    v.exact_equal = diffs.empty();
    if (diffs.size() > 10) diffs.resize(10);
    v.diffs = std::move(diffs);
    return v;
}

} // namespace dmt
