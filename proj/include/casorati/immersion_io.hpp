#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casorati/expr.hpp"
#include "casorati/geometry.hpp"

namespace casorati {

/// On-disk description of an immersion: a flat JSON document whose components stay
/// expression strings, so files are diffable and hand-writable.
struct ImmersionFile {
    std::string name;
    int n = 0;
    int ambient_dim = 0;
    std::vector<std::string> components;
    ParamMap params;
    std::string complex_pairing = "none";  // none | block | interleaved
    std::optional<Vec> sample_point;
    std::optional<std::vector<std::pair<double, double>>> sample_box;  // per-axis lo/hi
};

ImmersionFile load_immersion_file(const std::string& path);
ImmersionFile parse_immersion_json(const std::string& text);
std::string immersion_to_json(const ImmersionFile& file);
void save_immersion_file(const ImmersionFile& file, const std::string& path);

/// Parse all component expressions. An interleaved file is converted to block
/// ordering here by permuting components.
ImmersionSpec to_spec(const ImmersionFile& file);

/// Default evaluation point: the file's sample point, or the origin.
Vec default_point(const ImmersionFile& file);

ImmersionFile file_from_spec(const ImmersionSpec& spec, const ParamMap& params = {});

}  // namespace casorati
