#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ultra/indices.hpp"
#include "ultra/quadrature.hpp"
#include "ultra/report.hpp"
#include "ultra/sequence.hpp"
#include "ultra/weight.hpp"

namespace ultra::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "v1";
inline constexpr const char* kOutDirEnv = "ULTRA_OUT_DIR";

// Everything that determines a run. The output directory is excluded from the hash.
struct RunConfig {
    std::size_t horizon = 1024;
    double rel_tol = 1e-11;
    unsigned max_depth = 12;
    int t_grid = 24;
    double t_max = 1e8;
    double r_min = 0.02;
    double r_max = 8.0;
    double r_resolution = 0.02;
    int r_max_iter = 12;
    double sector_r_lo = 1e-3;
    double sector_r_hi = 1e3;
    int sector_radii = 13;
    std::string out_dir = "ultra-out";

    void validate() const;
    json to_json() const;
    static RunConfig from_json(const json& j);
    std::string hash() const;

    QuadratureConfig quadrature() const { return {rel_tol, max_depth}; }
    BisectionConfig bisection() const { return {r_min, r_max, r_resolution, r_max_iter}; }
    WeightGammaConfig weight_gamma() const { return {t_grid, t_max, bisection()}; }
};

std::string fnv1a_hex(std::string_view bytes);

// The environment variable wins over the configured directory; the directory is created.
std::filesystem::path output_dir(const RunConfig& cfg);

// {"schema", "kind", "config", "config_hash"} header shared by every report.
json envelope(const RunConfig& cfg, std::string_view kind);

json to_json(const PropertyReport& r);
json to_json(const IndexEstimate& e);
json to_json(const WeightSequence& s);
WeightSequence sequence_from_json(const json& j);

// Sequence descriptors: gevrey, inline (the sequence schema), file, langenbruch, factorial_blocks, transform.
WeightSequence sequence_from_descriptor(const json& j, const RunConfig& cfg);
// Weight descriptors: power, logpower, sequence, transform.
WeightFunction weight_from_descriptor(const json& j, const RunConfig& cfg);

json read_json_file(const std::filesystem::path& p);
void write_json(const std::filesystem::path& p, const json& j);
void write_csv(const std::filesystem::path& p, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_trace_csv(const std::filesystem::path& p, const PropertyReport& r, const std::string& x_name = "p");
std::vector<std::vector<double>> read_csv(const std::filesystem::path& p, std::vector<std::string>* header = nullptr);

}  // namespace ultra::io
