#include "casorati/immersion_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "casorati/errors.hpp"

namespace casorati {

using ordered_json = nlohmann::ordered_json;

ImmersionFile parse_immersion_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FileFormatError(e.what());
    }

    ImmersionFile f;
    try {
        f.name = j.value("name", "unnamed");
        f.n = j.at("n").get<int>();
        f.ambient_dim = j.at("ambient_dim").get<int>();
        f.components = j.at("components").get<std::vector<std::string>>();
        if (j.contains("params"))
            for (const auto& [k, v] : j.at("params").items()) f.params[k] = v.get<double>();
        f.complex_pairing = j.value("complex_pairing", "none");
        if (j.contains("sample")) {
            const auto& s = j.at("sample");
            if (s.contains("point")) f.sample_point = s.at("point").get<Vec>();
            if (s.contains("box")) {
                std::vector<std::pair<double, double>> box;
                for (const auto& axis : s.at("box"))
                    box.emplace_back(axis.at(0).get<double>(), axis.at(1).get<double>());
                f.sample_box = std::move(box);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw FileFormatError(e.what());
    }

    if (f.n < 1) throw FileFormatError("n must be >= 1");
    if (f.ambient_dim <= f.n)
        throw FileFormatError("ambient_dim must exceed n");
    if (static_cast<int>(f.components.size()) != f.ambient_dim)
        throw FileFormatError("need ambient_dim component expressions");
    if (f.complex_pairing != "none" && f.complex_pairing != "block" &&
        f.complex_pairing != "interleaved")
        throw FileFormatError("complex_pairing must be none|block|interleaved");
    if (f.sample_point && static_cast<int>(f.sample_point->size()) != f.n)
        throw FileFormatError("sample point has wrong dimension");
    return f;
}

ImmersionFile load_immersion_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_immersion_json(ss.str());
}

std::string immersion_to_json(const ImmersionFile& file) {
    ordered_json j;
    j["name"] = file.name;
    j["n"] = file.n;
    j["ambient_dim"] = file.ambient_dim;
    j["components"] = file.components;
    if (!file.params.empty()) {
        ordered_json p;
        for (const auto& [k, v] : file.params) p[k] = v;
        j["params"] = p;
    }
    j["complex_pairing"] = file.complex_pairing;
    if (file.sample_point || file.sample_box) {
        ordered_json s;
        if (file.sample_point) s["point"] = *file.sample_point;
        if (file.sample_box) {
            ordered_json box = ordered_json::array();
            for (const auto& [lo, hi] : *file.sample_box) box.push_back({lo, hi});
            s["box"] = box;
        }
        j["sample"] = s;
    }
    return j.dump(2) + "\n";
}

void save_immersion_file(const ImmersionFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << immersion_to_json(file);
}

ImmersionSpec to_spec(const ImmersionFile& file) {
    ImmersionSpec spec;
    spec.name = file.name;
    spec.n = file.n;
    spec.ambient_dim = file.ambient_dim;

    std::vector<std::string> ordered = file.components;
    if (file.complex_pairing == "interleaved") {
        // (x1, y1, x2, y2, ...) -> (x1..xn, y1..yn)
        if (file.ambient_dim != 2 * file.n)
            throw FileFormatError("interleaved pairing needs ambient_dim == 2n");
        std::vector<std::string> block(file.components.size());
        for (int i = 0; i < file.n; ++i) {
            block[i] = file.components[2 * i];
            block[file.n + i] = file.components[2 * i + 1];
        }
        ordered = std::move(block);
        spec.pairing = ComplexPairing::Block;
    } else if (file.complex_pairing == "block") {
        if (file.ambient_dim != 2 * file.n)
            throw FileFormatError("block pairing needs ambient_dim == 2n");
        spec.pairing = ComplexPairing::Block;
    }

    for (const std::string& src : ordered)
        spec.components.push_back(Expression::parse(src, file.n, file.params));
    return spec;
}

Vec default_point(const ImmersionFile& file) {
    if (file.sample_point) return *file.sample_point;
    return Vec(file.n, 0.0);
}

ImmersionFile file_from_spec(const ImmersionSpec& spec, const ParamMap& params) {
    ImmersionFile f;
    f.name = spec.name;
    f.n = spec.n;
    f.ambient_dim = spec.ambient_dim;
    for (const Expression& e : spec.components) f.components.push_back(e.render());
    f.params = params;
    f.complex_pairing = spec.pairing == ComplexPairing::Block ? "block" : "none";
    return f;
}

}  // namespace casorati
