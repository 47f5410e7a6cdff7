#include "ultra/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ultra/constructions.hpp"
#include "ultra/error.hpp"

namespace ultra::io {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw InvalidInput(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(where + ": missing field '" + key + "'");
    return *it;
}

double number(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_number()) throw InvalidInput(where + "." + key + ": expected a number");
    return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

std::string text(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) throw InvalidInput(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

// JSON has no infinities; they are spelled out.
json number_json(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : v > 0 ? "inf" : "-inf";
}

WeightSequence sequence_desc(const json& j, const RunConfig& cfg, const std::string& where) {
    if (j.is_object() && !j.contains("kind") && j.contains("log_quotients")) return sequence_from_json(j);
    const std::string kind = text(j, "kind", where);
    const std::size_t P = std::size_t(number_or(j, "horizon", double(cfg.horizon), where));
    if (kind == "gevrey") return gevrey_sequence(number(j, "r", where), P);
    if (kind == "inline") return sequence_from_json(j);
    if (kind == "file") return sequence_desc(read_json_file(text(j, "path", where)), cfg, where + ".path");
    if (kind == "langenbruch") {
        const std::string v = j.value("variant", std::string("mg"));
        if (v != "mg" && v != "no_mg") throw InvalidInput(where + ".variant: expected 'mg' or 'no_mg'");
        return langenbruch_example(number(j, "gamma", where), v == "mg" ? LangenbruchVariant::mg : LangenbruchVariant::no_mg,
                                   P)
            .seq;
    }
    if (kind == "factorial_blocks") return factorial_block_example(P);
    if (kind == "transform") {
        const std::string mode = text(j, "mode", where);
        const auto base = sequence_desc(field(j, "base", where), cfg, where + ".base");
        if (mode == "power") return transform_sequence(base, SequenceTransform::power, number(j, "rho", where));
        if (mode == "hat") return transform_sequence(base, SequenceTransform::hat);
        if (mode == "unhat") return transform_sequence(base, SequenceTransform::unhat);
        throw InvalidInput(where + ".mode: unknown transform '" + mode + "'");
    }
    if (kind == "descendant") return descendant(sequence_desc(field(j, "base", where), cfg, where + ".base"),
                                                number(j, "r", where))
        .sigma;
    throw InvalidInput(where + ".kind: unknown sequence kind '" + kind + "'");
}

WeightFunction weight_desc(const json& j, const RunConfig& cfg, const std::string& where) {
    const std::string kind = text(j, "kind", where);
    if (kind == "power") return builtin_weight(BuiltinWeight::power, number(j, "s", where));
    if (kind == "logpower") return builtin_weight(BuiltinWeight::logpower, number(j, "s", where));
    if (kind == "sequence") return weight_from_sequence(sequence_desc(field(j, "sequence", where), cfg, where + ".sequence"));
    if (kind == "transform") {
        const std::string op = text(j, "op", where);
        const auto base = weight_desc(field(j, "base", where), cfg, where + ".base");
        if (op == "power") return power_weight(base, number(j, "r", where));
        if (op == "iota") return iota_weight(base);
        if (op == "scale") return scaled_weight(base, number(j, "c", where));
        if (op == "normalize") return normalized_weight(base);
        if (op == "heir") return kappa_heir(base, number(j, "r", where));
        throw InvalidInput(where + ".op: unknown weight transform '" + op + "'");
    }
    throw InvalidInput(where + ".kind: unknown weight kind '" + kind + "'");
}

}  // namespace

void RunConfig::validate() const {
    if (horizon < 4) throw InvalidInput("horizon must be at least 4");
    if (!(rel_tol > 0.0) || max_depth == 0) throw InvalidInput("quadrature tolerances must be positive");
    if (t_grid < 2 || !(t_max > 1.0)) throw InvalidInput("t-grid must be nonempty");
    if (!(0.0 < r_min && r_min < r_max) || !(r_resolution > 0.0) || r_max_iter <= 0)
        throw InvalidInput("r-grid must be nonempty with positive resolution");
    if (!(0.0 < sector_r_lo && sector_r_lo < sector_r_hi) || sector_radii < 2)
        throw InvalidInput("sector samples must be nonempty");
}

json RunConfig::to_json() const {
    return json{{"horizon", horizon},         {"rel_tol", rel_tol},         {"max_depth", max_depth},
                {"t_grid", t_grid},           {"t_max", t_max},             {"r_min", r_min},
                {"r_max", r_max},             {"r_resolution", r_resolution}, {"r_max_iter", r_max_iter},
                {"sector_r_lo", sector_r_lo}, {"sector_r_hi", sector_r_hi}, {"sector_radii", sector_radii}};
}

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("config: expected an object");
    RunConfig c;
    for (const auto& [k, v] : j.items()) {
        try {
            if (k == "horizon") c.horizon = v.get<std::size_t>();
            else if (k == "rel_tol") c.rel_tol = v.get<double>();
            else if (k == "max_depth") c.max_depth = v.get<unsigned>();
            else if (k == "t_grid") c.t_grid = v.get<int>();
            else if (k == "t_max") c.t_max = v.get<double>();
            else if (k == "r_min") c.r_min = v.get<double>();
            else if (k == "r_max") c.r_max = v.get<double>();
            else if (k == "r_resolution") c.r_resolution = v.get<double>();
            else if (k == "r_max_iter") c.r_max_iter = v.get<int>();
            else if (k == "sector_r_lo") c.sector_r_lo = v.get<double>();
            else if (k == "sector_r_hi") c.sector_r_hi = v.get<double>();
            else if (k == "sector_radii") c.sector_radii = v.get<int>();
            else if (k == "out_dir") c.out_dir = v.get<std::string>();
            else throw InvalidInput("config: unknown field '" + k + "'");
        } catch (const json::exception& e) {
            throw InvalidInput("config." + k + ": " + e.what());
        }
    }
    c.validate();
    return c;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return hex64(h);
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

std::filesystem::path output_dir(const RunConfig& cfg) {
    std::filesystem::path dir = cfg.out_dir;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) dir = env;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InvalidInput("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

json envelope(const RunConfig& cfg, std::string_view kind) {
    return json{{"schema", kSchema}, {"kind", kind}, {"config", cfg.to_json()}, {"config_hash", cfg.hash()}};
}

json to_json(const PropertyReport& r) {
    json stats = json::object();
    for (const auto& [k, v] : r.stats) stats[k] = number_json(v);
    return json{{"tag", r.tag},
                {"verdict", std::string(to_string(r.verdict))},
                {"witness", number_json(r.witness)},
                {"stats", stats},
                {"notes", r.notes},
                {"trace_length", r.trace.size()}};
}

json to_json(const IndexEstimate& e) {
    json trace = json::array();
    for (const auto& [r, v] : e.trace) trace.push_back({{"r", r}, {"verdict", std::string(to_string(v))}});
    return json{{"estimate", number_json(e.estimate)},
                {"bracket", {number_json(e.r_lo), number_json(e.r_hi)}},
                {"method", e.method},
                {"unbounded", e.unbounded},
                {"at_grid_minimum", e.at_grid_minimum},
                {"notes", e.notes},
                {"trace", trace}};
}

json to_json(const WeightSequence& s) {
    json q = json::array();
    for (double v : s.log_quotients()) q.push_back(number_json(v));
    return json{{"schema", kSchema}, {"label", s.label()}, {"horizon", s.horizon()}, {"log_quotients", q}};
}

WeightSequence sequence_from_json(const json& j) {
    const std::string where = "sequence";
    const json& q = field(j, "log_quotients", where);
    if (!q.is_array() || q.empty()) throw InvalidInput(where + ".log_quotients: expected a nonempty array");
    std::vector<double> lq;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!q[i].is_number())
            throw InvalidInput(where + ".log_quotients[" + std::to_string(i) + "]: expected a number");
        lq.push_back(q[i].get<double>());
    }
    if (j.contains("horizon")) {
        const auto P = field(j, "horizon", where).get<std::size_t>();
        if (lq.size() == P) lq.insert(lq.begin(), 0.0);
        if (lq.size() != P + 1)
            throw InvalidInput(where + ".horizon: " + std::to_string(P) + " does not match " +
                               std::to_string(q.size()) + " quotients");
    }
    return WeightSequence::from_log_quotients(std::move(lq), j.value("label", std::string("custom")));
}

WeightSequence sequence_from_descriptor(const json& j, const RunConfig& cfg) { return sequence_desc(j, cfg, "sequence"); }

WeightFunction weight_from_descriptor(const json& j, const RunConfig& cfg) { return weight_desc(j, cfg, "weight"); }

json read_json_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw InvalidInput("cannot open " + p.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput(p.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& p, const json& j) {
    std::ofstream out(p);
    if (!out) throw InvalidInput("cannot write " + p.string());
    out << j.dump(2) << '\n';
}

void write_csv(const std::filesystem::path& p, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(p);
    if (!out) throw InvalidInput("cannot write " + p.string());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    char buf[32];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
}

void write_trace_csv(const std::filesystem::path& p, const PropertyReport& r, const std::string& x_name) {
    std::vector<std::vector<double>> rows;
    for (const auto& t : r.trace) rows.push_back({t.x, t.value});
    write_csv(p, {x_name, "value"}, rows);
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& p, std::vector<std::string>* header) {
    std::ifstream in(p);
    if (!in) throw InvalidInput("cannot open " + p.string());
    std::string line;
    std::vector<std::vector<double>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            first = false;
            if (header)
                while (std::getline(ss, cell, ',')) header->push_back(cell);
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            row.push_back(std::strtod(cell.c_str(), &end));
            if (end == cell.c_str()) throw InvalidInput(p.string() + ": malformed number '" + cell + "'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ultra::io
