#include "casorati/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "casorati/curvature.hpp"
#include "casorati/errors.hpp"
#include "casorati/geometry.hpp"
#include "casorati/immersion_io.hpp"
#include "casorati/jordan.hpp"
#include "casorati/lagrangian.hpp"
#include "casorati/parallel.hpp"
#include "casorati/report_io.hpp"
#include "casorati/surface_limit.hpp"

namespace casorati::cli {

namespace {

Vec parse_point(const std::string& text, int n) {
    Vec out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error("cannot parse point coordinate '" + item + "'");
        }
    }
    if (static_cast<int>(out.size()) != n)
        throw Error("point needs " + std::to_string(n) + " coordinates");
    return out;
}

std::vector<std::pair<double, double>> parse_box(const std::string& text, int n) {
    std::vector<std::pair<double, double>> box;
    std::stringstream ss(text);
    std::string axis;
    while (std::getline(ss, axis, ',')) {
        const auto colon = axis.find(':');
        if (colon == std::string::npos) throw Error("box axis must look like lo:hi");
        try {
            box.emplace_back(std::stod(axis.substr(0, colon)), std::stod(axis.substr(colon + 1)));
        } catch (const std::exception&) {
            throw Error("cannot parse box axis '" + axis + "'");
        }
    }
    if (static_cast<int>(box.size()) != n)
        throw Error("box needs " + std::to_string(n) + " axes");
    return box;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    return out + "\"";
}

/// Grid points in row-major order, last axis fastest.
std::vector<Vec> grid_points(const std::vector<std::pair<double, double>>& box, int res) {
    const int n = static_cast<int>(box.size());
    int total = 1;
    for (int i = 0; i < n; ++i) total *= res;
    std::vector<Vec> pts(total, Vec(n, 0.0));
    for (int idx = 0; idx < total; ++idx) {
        int rem = idx;
        for (int axis = n - 1; axis >= 0; --axis) {
            const int k = rem % res;
            rem /= res;
            const auto [lo, hi] = box[axis];
            pts[idx][axis] = res == 1 ? lo : lo + (hi - lo) * k / (res - 1);
        }
    }
    return pts;
}

Vec random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(dim);
    double nrm = 0.0;
    do {
        for (double& c : v) c = gauss(rng);
        nrm = norm(v);
    } while (nrm < 1e-8);
    for (double& c : v) c /= nrm;
    return v;
}

// ---------------------------------------------------------------------------
// verify checks
// ---------------------------------------------------------------------------

struct CheckContext {
    const ImmersionSpec& spec;
    const std::vector<Vec>& points;
    std::ostream* limit_profile = nullptr;
};

struct PointOutcome {
    double residual = 0.0;
    bool applicable = true;
};

double frames_check_at(const ImmersionSpec& spec, const Vec& u, unsigned seed) {
    const PointGeometry pg = point_geometry(spec, u);
    const int n = pg.n(), m = pg.m(), N = pg.N();
    double res = max_abs(transpose(pg.tangent_frame) * pg.tangent_frame - Mat::identity(n));
    res = std::max(res, max_abs(transpose(pg.normal_frame) * pg.normal_frame - Mat::identity(m)));
    res = std::max(res, max_abs(transpose(pg.tangent_frame) * pg.normal_frame));

    // Gauss reconstruction along random frame directions
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 4; ++trial) {
        const Vec x = random_unit(rng, n), y = random_unit(rng, n);
        Vec d2(N, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Vec& s = pg.second_derivative(i, j);
                for (int c = 0; c < N; ++c) d2[c] += x[i] * y[j] * s[c];
            }
        // normal part vs sum_a h^a(x,y) xi_a
        Vec recon(N, 0.0);
        for (int a = 0; a < m; ++a) {
            double haxy = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) haxy += x[i] * pg.h[a](i, j) * y[j];
            for (int c = 0; c < N; ++c) recon[c] += haxy * pg.normal_frame(c, a);
        }
        Vec normal_part = d2;
        for (int i = 0; i < n; ++i) {
            const Vec e = pg.tangent_frame.col(i);
            const double proj = dot(d2, e);
            for (int c = 0; c < N; ++c) normal_part[c] -= proj * e[c];
        }
        res = std::max(res, norm(normal_part - recon));
    }
    return res;
}

double identities_check_at(const ImmersionSpec& spec, const Vec& u) {
    const PointGeometry pg = point_geometry(spec, u);
    const CurvatureReport rep = make_report(pg);
    const double scale = std::max(1.0, std::fabs(trace(rep.AC)));

    double res = std::fabs(trace(rep.AC) - trace(rep.a_matrix)) / scale;

    double sum_ct = 0.0;
    for (const auto& p : rep.tangential) sum_ct += p.value;
    res = std::max(res, std::fabs(rep.C - sum_ct / pg.n()) / std::max(1.0, rep.C));
    res = std::max(res, std::fabs(rep.C - trace(rep.AC) / pg.n()) / std::max(1.0, rep.C));

    for (const auto& p : rep.tangential) res = std::max(res, std::max(0.0, -p.value) / scale);
    for (const auto& p : rep.normal) res = std::max(res, std::max(0.0, -p.value) / scale);

    // independent rank oracle for m1: singular values of the m x n(n+1)/2 matrix of
    // h coefficients
    const int n = pg.n(), m = pg.m();
    Mat hmat(m, n * (n + 1) / 2);
    for (int a = 0; a < m; ++a) {
        int col = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) hmat(a, col++) = pg.h[a](i, j);
    }
    if (numerical_rank(hmat, 1e-9) != rep.m1) res = std::max(res, 1.0);
    return res;
}

double projection_check_at(const ImmersionSpec& spec, const Vec& u, unsigned seed) {
    std::mt19937_64 rng(seed);
    const int m = spec.m();
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const Vec xi = random_unit(rng, m);
        worst = std::max(worst, projection_hypersurface_residual(spec, u, xi));
    }
    return worst;
}

double jordan_check_at(const ImmersionSpec& spec, const Vec& u, unsigned seed) {
    const PointGeometry pg = point_geometry(spec, u);
    const Mat AC = casorati_operator(pg);
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Vec v = random_unit(rng, pg.n());
        const double quad = dot(v, matvec(AC, v));
        const AngleCurve curve = sample_angle_curve(spec, u, v);
        const double denom = std::max(1.0, quad);
        worst = std::max(worst, std::fabs(curve.tangent_slope_sq - quad) / denom);
        worst = std::max(worst,
                         std::fabs(curve.tangent_slope_sq - curve.normal_slope_sq) / denom);
    }
    return worst;
}

}  // namespace

namespace {

int cmd_validate(const std::string& path, std::ostream& out) {
    const ImmersionFile file = load_immersion_file(path);
    const ImmersionSpec spec = to_spec(file);
    const Vec u = default_point(file);
    point_geometry(spec, u);  // throws RankDeficient at degenerate sample points
    out << "OK, n=" << spec.n << ", m=" << spec.m() << ", rank " << spec.n << "\n";
    return 0;
}

int cmd_report(const std::string& path, const std::optional<std::string>& point_text,
               const std::string& format, std::ostream& out) {
    const ImmersionFile file = load_immersion_file(path);
    const ImmersionSpec spec = to_spec(file);
    const Vec u = point_text ? parse_point(*point_text, spec.n) : default_point(file);
    const PointGeometry pg = point_geometry(spec, u);
    const ReportOptions opts;
    const CurvatureReport rep = make_report(pg, opts);
    if (format == "text")
        out << report_to_text(spec.name, u, pg, rep);
    else
        out << report_to_json(spec.name, u, pg, rep, opts);
    return 0;
}

struct CheckDef {
    std::string name;
    double default_tol;
    bool needs_surface;     // n == 2, m == 1
    bool needs_lagrangian;  // N == 2n with block pairing
};

const std::vector<CheckDef>& check_defs() {
    static const std::vector<CheckDef> defs = {
        {"frames", 1e-10, false, false},     {"identities", 1e-12, false, false},
        {"projection", 1e-8, false, false},  {"jordan", 1e-3, false, false},
        {"lagrangian", 1e-9, false, true},   {"cubic", 1e-9, false, true},
        {"theorem1", 1e-9, false, true},     {"theorem2", 1e-9, false, true},
        {"limit", 0.02, true, false},
    };
    return defs;
}

int cmd_verify(const std::string& path, const std::optional<std::string>& point_text,
               bool use_grid, const std::optional<std::string>& box_text, int resolution,
               const std::vector<std::string>& requested,
               const std::vector<std::string>& tol_overrides,
               const std::optional<std::string>& limit_profile_path, std::ostream& out) {
    const ImmersionFile file = load_immersion_file(path);
    const ImmersionSpec spec = to_spec(file);

    const bool is_surface = spec.n == 2 && spec.m() == 1;
    const bool is_lagrangian_candidate =
        spec.ambient_dim == 2 * spec.n && spec.pairing == ComplexPairing::Block;

    std::map<std::string, double> tols;
    for (const auto& d : check_defs()) tols[d.name] = d.default_tol;
    for (const std::string& ov : tol_overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos) throw Error("--tol expects name=value");
        const std::string name = ov.substr(0, eq);
        if (!tols.count(name)) throw Error("unknown check in --tol: " + name);
        try {
            tols[name] = std::stod(ov.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error("cannot parse tolerance value in '" + ov + "'");
        }
    }

    std::vector<CheckDef> selected;
    if (requested.empty()) {
        for (const auto& d : check_defs()) {
            if (d.needs_surface && !is_surface) continue;
            if (d.needs_lagrangian && !is_lagrangian_candidate) continue;
            selected.push_back(d);
        }
    } else {
        for (const std::string& name : requested) {
            const auto it = std::find_if(check_defs().begin(), check_defs().end(),
                                         [&](const CheckDef& d) { return d.name == name; });
            if (it == check_defs().end()) throw Error("unknown check: " + name);
            if ((it->needs_surface && !is_surface) ||
                (it->needs_lagrangian && !is_lagrangian_candidate)) {
                out << "check '" << name << "' not applicable to this immersion\n";
                return 4;
            }
            selected.push_back(*it);
        }
    }

    std::vector<Vec> points;
    if (use_grid) {
        std::vector<std::pair<double, double>> box;
        if (box_text)
            box = parse_box(*box_text, spec.n);
        else if (file.sample_box)
            box = *file.sample_box;
        else
            throw Error("grid verification needs --box or a sample box in the file");
        points = grid_points(box, resolution);
    } else {
        points.push_back(point_text ? parse_point(*point_text, spec.n) : default_point(file));
    }

    std::ofstream profile_stream;
    if (limit_profile_path) {
        profile_stream.open(*limit_profile_path);
        if (!profile_stream) throw Error("cannot write " + *limit_profile_path);
    }

    VerifySummary summary;
    summary.points = static_cast<int>(points.size());

    for (const auto& def : selected) {
        const double tol = tols[def.name];
        std::vector<PointOutcome> outcomes(points.size());

        const auto at_points = [&](const std::function<PointOutcome(const Vec&, int)>& fn) {
            parallel_for(static_cast<int>(points.size()),
                         [&](int i) { outcomes[i] = fn(points[i], i); });
        };

        if (def.name == "frames") {
            at_points([&](const Vec& u, int i) {
                return PointOutcome{frames_check_at(spec, u, 1234u + i), true};
            });
        } else if (def.name == "identities") {
            at_points([&](const Vec& u, int) {
                return PointOutcome{identities_check_at(spec, u), true};
            });
        } else if (def.name == "projection") {
            at_points([&](const Vec& u, int i) {
                return PointOutcome{projection_check_at(spec, u, 777u + i), true};
            });
        } else if (def.name == "jordan") {
            at_points([&](const Vec& u, int i) {
                return PointOutcome{jordan_check_at(spec, u, 4242u + i), true};
            });
        } else if (def.name == "lagrangian") {
            at_points([&](const Vec& u, int) {
                return PointOutcome{lagrangian_residual(spec, u), true};
            });
        } else if (def.name == "cubic" || def.name == "theorem1" || def.name == "theorem2") {
            LagrangianTolerances lt;
            lt.lagrangian = tols["lagrangian"];
            lt.cubic = tols["cubic"];
            lt.pairing = tols["theorem1"];
            lt.spectrum = tols["theorem2"];
            at_points([&](const Vec& u, int) -> PointOutcome {
                const LagrangianReport rep = make_lagrangian_report(spec, u, lt);
                if (!rep.adapted_frame_valid)
                    return {rep.lagrangian_residual + 1.0, true};  // not Lagrangian here
                if (def.name == "cubic") return {rep.cubic_residual, true};
                if (def.name == "theorem1") {
                    double worst = rep.pairing_spectrum_residual;
                    for (const auto& p : rep.pairing)
                        worst = std::max(worst, p.subspace_residual);
                    return {worst, true};
                }
                if (!rep.maximal_rank.applicable) return {0.0, false};
                return {std::max(rep.maximal_rank.spectrum_residual,
                                 rep.maximal_rank.frame_residual),
                        true};
            });
        } else if (def.name == "limit") {
            LimitOptions lo;
            lo.profile_csv = profile_stream.is_open() ? &profile_stream : nullptr;
            at_points([&](const Vec& u, int) {
                const PointGeometry pg = point_geometry(spec, u);
                const double target = 0.5 * trace(pg.A[0] * pg.A[0]);
                const LimitEstimate est =
                    casorati_area_ratio_limit(spec, u, {0.05, 0.025, 0.0125}, 256, lo);
                const double rel =
                    std::fabs(est.extrapolated - target) / std::max(1e-12, std::fabs(target));
                return PointOutcome{target == 0.0 ? std::fabs(est.extrapolated) : rel, true};
            });
        }

        double worst = 0.0;
        bool any_applicable = false;
        for (const auto& o : outcomes) {
            if (!o.applicable) continue;
            any_applicable = true;
            worst = std::max(worst, o.residual);
        }
        CheckRow row;
        row.name = def.name;
        row.residual = worst;
        row.tolerance = tol;
        if (!any_applicable)
            row.status = CheckStatus::NotApplicable;
        else
            row.status = worst <= tol ? CheckStatus::Pass : CheckStatus::Fail;
        summary.rows.push_back(row);
    }

    out << "verify " << spec.name << " at " << summary.points << " point"
        << (summary.points == 1 ? "" : "s") << "\n";
    out << std::left << std::setw(12) << "check" << std::setw(8) << "status"
        << std::setw(14) << "residual" << "tolerance\n";
    for (const auto& row : summary.rows) {
        const char* status = row.status == CheckStatus::Pass   ? "pass"
                             : row.status == CheckStatus::Fail ? "FAIL"
                                                               : "n/a";
        out << std::left << std::setw(12) << row.name << std::setw(8) << status
            << std::setw(14) << std::setprecision(4) << std::scientific << row.residual
            << std::setprecision(4) << std::scientific << row.tolerance << "\n";
    }
    out.copyfmt(std::ios(nullptr));
    return summary.failed() ? 1 : 0;
}

int cmd_grid(const std::string& path, const std::optional<std::string>& box_text,
             int resolution, const std::optional<std::string>& out_path, std::ostream& out,
             std::ostream& err) {
    const ImmersionFile file = load_immersion_file(path);
    const ImmersionSpec spec = to_spec(file);

    std::vector<std::pair<double, double>> box;
    if (box_text)
        box = parse_box(*box_text, spec.n);
    else if (file.sample_box)
        box = *file.sample_box;
    else
        throw Error("grid needs --box or a sample box in the file");

    const std::vector<Vec> points = grid_points(box, resolution);
    const int n = spec.n, m = spec.m();

    std::string header;
    for (int i = 0; i < n; ++i) header += "u" + std::to_string(i + 1) + ",";
    header += "C,";
    for (int i = 0; i < n; ++i) header += "cT" + std::to_string(i + 1) + ",";
    for (int a = 0; a < m; ++a) header += "cPerp" + std::to_string(a + 1) + ",";
    header += "m1,error";

    std::vector<std::string> rows(points.size());
    std::vector<char> ok(points.size(), 0);
    parallel_for(static_cast<int>(points.size()), [&](int i) {
        const Vec& u = points[i];
        std::string row;
        for (int k = 0; k < n; ++k) row += csv_number(u[k]) + ",";
        try {
            const PointGeometry pg = point_geometry(spec, u);
            const CurvatureReport rep = make_report(pg);
            row += csv_number(rep.C) + ",";
            for (const auto& p : rep.tangential) row += csv_number(p.value) + ",";
            for (const auto& p : rep.normal) row += csv_number(p.value) + ",";
            row += std::to_string(rep.m1) + ",";
            ok[i] = 1;
        } catch (const Error& e) {
            for (int k = 0; k < n + m + 1; ++k) row += ",";
            row += ",";
            row += csv_quote(e.what());
        }
        rows[i] = row;
    });

    std::ofstream file_out;
    std::ostream* sink = &out;
    if (out_path) {
        file_out.open(*out_path);
        if (!file_out) throw Error("cannot write " + *out_path);
        sink = &file_out;
    }
    *sink << header << "\n";
    for (const std::string& r : rows) *sink << r << "\n";

    int succeeded = 0;
    for (char c : ok) succeeded += c;
    const double fraction = points.empty() ? 1.0 : double(succeeded) / points.size();
    if (fraction < 0.9) {
        err << "grid: only " << succeeded << "/" << points.size() << " rows succeeded\n";
        return 1;
    }
    return 0;
}

int cmd_generate(const std::string& potential, int n, const std::string& name,
                 const std::vector<std::string>& param_args,
                 const std::optional<std::string>& sample_text,
                 const std::optional<std::string>& out_path, std::ostream& out) {
    ParamMap params;
    for (const std::string& pa : param_args) {
        const auto eq = pa.find('=');
        if (eq == std::string::npos) throw Error("--param expects name=value");
        try {
            params[pa.substr(0, eq)] = std::stod(pa.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error("cannot parse parameter value in '" + pa + "'");
        }
    }
    const Expression phi = Expression::parse(potential, n, params);
    ImmersionSpec spec = gradient_graph_immersion(phi, name);
    ImmersionFile file = file_from_spec(spec, params);
    if (sample_text) file.sample_point = parse_point(*sample_text, n);

    const std::string text = immersion_to_json(file);
    if (out_path) {
        std::ofstream f(*out_path);
        if (!f) throw Error("cannot write " + *out_path);
        f << text;
    } else {
        out << text;
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"extrinsic Casorati geometry of parametrized submanifolds"};
    app.require_subcommand(1);

    std::string file_path;
    std::optional<std::string> point_text, box_text, out_path, limit_profile, sample_text;
    std::string format = "json";
    bool use_grid = false;
    int resolution = 10;
    std::vector<std::string> checks, tol_overrides, param_args;
    std::string potential, gen_name = "gradient_graph";
    int gen_n = 2;

    auto* validate = app.add_subcommand("validate", "parse an immersion file and check rank");
    validate->add_option("file", file_path)->required();

    auto* report = app.add_subcommand("report", "curvature report at a point");
    report->add_option("file", file_path)->required();
    report->add_option("--point", point_text, "comma-separated coordinates");
    report->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    auto* verify = app.add_subcommand("verify", "run verification checks");
    verify->add_option("file", file_path)->required();
    verify->add_option("--point", point_text, "comma-separated coordinates");
    verify->add_flag("--grid", use_grid, "verify on a grid instead of one point");
    verify->add_option("--box", box_text, "per-axis lo:hi ranges, comma separated");
    verify->add_option("--resolution", resolution, "grid points per axis");
    verify->add_option("--checks", checks, "subset of checks to run")->delimiter(',');
    verify->add_option("--tol", tol_overrides, "override tolerances, name=value");
    verify->add_option("--limit-profile", limit_profile, "write limit profiles as CSV");

    auto* grid = app.add_subcommand("grid", "sample curvature fields over a box");
    grid->add_option("file", file_path)->required();
    grid->add_option("--box", box_text, "per-axis lo:hi ranges, comma separated");
    grid->add_option("--resolution", resolution, "grid points per axis");
    grid->add_option("--out", out_path, "CSV output path (default stdout)");

    auto* generate = app.add_subcommand("generate", "emit a gradient-graph immersion file");
    generate->add_option("--potential", potential, "expression in u1..un")->required();
    generate->add_option("--n", gen_n, "chart dimension");
    generate->add_option("--name", gen_name);
    generate->add_option("--param", param_args, "name=value, repeatable");
    generate->add_option("--sample", sample_text, "default sample point");
    generate->add_option("--out", out_path, "output path (default stdout)");

    try {
        std::vector<std::string> argv_rev(args.rbegin(), args.rend());
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 1;
    }

    try {
        if (validate->parsed()) return cmd_validate(file_path, out);
        if (report->parsed()) return cmd_report(file_path, point_text, format, out);
        if (verify->parsed())
            return cmd_verify(file_path, point_text, use_grid, box_text, resolution, checks,
                              tol_overrides, limit_profile, out);
        if (grid->parsed()) return cmd_grid(file_path, box_text, resolution, out_path, out, err);
        if (generate->parsed())
            return cmd_generate(potential, gen_n, gen_name, param_args, sample_text, out_path,
                                out);
    } catch (const SyntaxError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownIdentifier& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const FileFormatError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const RankDeficient& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace casorati::cli
