#include "casorati/report_io.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include <json.hpp>

namespace casorati {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json matrix_columns(const Mat& M) {
    ordered_json cols = ordered_json::array();
    for (int j = 0; j < M.cols; ++j) cols.push_back(M.col(j));
    return cols;
}

ordered_json eigen_vectors(const std::vector<Eigenpair>& pairs) {
    ordered_json out = ordered_json::array();
    for (const auto& p : pairs) out.push_back(p.vector);
    return out;
}

}  // namespace

std::string report_to_json(const std::string& name, const Vec& point,
                           const PointGeometry& pg, const CurvatureReport& rep,
                           const ReportOptions& opts) {
    ordered_json j;
    j["schema"] = 1;
    j["name"] = name;
    j["point"] = point;
    j["n"] = pg.n();
    j["m"] = pg.m();
    j["C"] = rep.C;
    Vec ct(rep.tangential.size());
    for (std::size_t i = 0; i < ct.size(); ++i) ct[i] = rep.tangential[i].value;
    j["cT"] = ct;
    Vec cp(rep.normal.size());
    for (std::size_t i = 0; i < cp.size(); ++i) cp[i] = rep.normal[i].value;
    j["cPerp_raw"] = cp;
    j["cPerp_mean"] = rep.normal_means();
    j["m1"] = rep.m1;
    j["chen_residual"] = rep.chen_residual;
    j["chen"] = rep.chen;
    j["tangential_directions"] = eigen_vectors(rep.tangential);
    j["normal_directions"] = eigen_vectors(rep.normal);
    j["N1_basis"] = matrix_columns(rep.n1_basis);
    j["mean_curvature"] = rep.mean_curvature;
    j["tangent_frame"] = matrix_columns(pg.tangent_frame);
    j["normal_frame"] = matrix_columns(pg.normal_frame);
    j["tolerances"] = {{"m1", opts.m1_tol}, {"block", opts.block_tol}, {"chen", opts.chen_tol}};
    return j.dump(2) + "\n";
}

std::string report_to_text(const std::string& name, const Vec& point,
                           const PointGeometry& pg, const CurvatureReport& rep) {
    std::ostringstream out;
    out.precision(12);
    out << name << " at (";
    for (std::size_t i = 0; i < point.size(); ++i) out << (i ? ", " : "") << point[i];
    out << ")  n=" << pg.n() << " m=" << pg.m() << "\n";
    out << "  C            = " << rep.C << "\n";
    out << "  cT           =";
    for (const auto& p : rep.tangential) out << " " << p.value;
    out << "\n  cPerp (raw)  =";
    for (const auto& p : rep.normal) out << " " << p.value;
    out << "\n  cPerp (mean) =";
    for (double v : rep.normal_means()) out << " " << v;
    out << "\n  m1           = " << rep.m1 << "\n";
    out << "  chen residual= " << rep.chen_residual << (rep.chen ? "  (Chen)" : "") << "\n";
    return out.str();
}

std::string csv_number(double v) {
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

}  // namespace casorati
