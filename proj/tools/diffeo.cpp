// Command-line front end: builds spaces from JSON descriptions, runs metric
// checks and distance computations, and reproduces the library's worked
// examples. Exit codes: 0 success, 1 check failure, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "riemdiff/examples.hpp"
#include "riemdiff/riemdiff.hpp"

using namespace riemdiff;

namespace {

std::vector<double> parse_csv_numbers(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string tok = text.substr(pos, next - pos);
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw UsageError("cannot parse number '" + tok + "'");
        }
        pos = next + 1;
    }
    return out;
}

// "branch:coords" with 1-based branch (matching the x_k notation), or bare
// coords on the first chart
Point parse_point(const DiffeoSpace& space, const std::string& text) {
    int plot = 0;
    std::string coords_text = text;
    const std::size_t colon = text.find(':');
    if (colon != std::string::npos) {
        try {
            plot = std::stoi(text.substr(0, colon)) - 1;
        } catch (const std::exception&) {
            throw UsageError("cannot parse branch in point '" + text + "'");
        }
        coords_text = text.substr(colon + 1);
    }
    const Vec coords = parse_csv_numbers(coords_text);
    if (plot < 0 || static_cast<std::size_t>(plot) >= space.family.size())
        throw UsageError("point '" + text + "': branch out of range");
    if (coords.size() != space.plot(plot).domain.dim)
        throw UsageError("point '" + text + "': expected " +
                         std::to_string(space.plot(plot).domain.dim) + " coordinates");
    return space.eval(plot, coords);
}

LoopPoint parse_loop(const DiffeoSpace& N, const std::string& text) {
    const std::size_t colon = text.find(':');
    const std::string name = colon == std::string::npos ? text : text.substr(0, colon);
    const Vec params =
        colon == std::string::npos ? Vec{} : parse_csv_numbers(text.substr(colon + 1));
    const std::size_t dim = N.plot(0).domain.dim;
    const SpaceId sid = N.id;
    if (name == "constant") {
        if (params.size() != dim) throw UsageError("constant loop needs " + std::to_string(dim) + " coordinates");
        return constant_loop(Point{sid, 0, params, {}});
    }
    if (name == "circle_scale") {
        if (dim != 2) throw UsageError("circle_scale loops need a 2-dimensional target");
        const double s = params.empty() ? 1.0 : params[0];
        LoopPoint l;
        l.value = [sid, s](double th) {
            return Point{sid, 0, {s * std::cos(th), s * std::sin(th)}, {}};
        };
        return l;
    }
    if (name == "figure") {
        if (dim != 2) throw UsageError("figure loops need a 2-dimensional target");
        const double s = params.empty() ? 1.0 : params[0];
        LoopPoint l;
        l.value = [sid, s](double th) {
            return Point{sid, 0, {0.5 * s * std::sin(2.0 * th), s * std::sin(th)}, {}};
        };
        return l;
    }
    throw UsageError("unknown loop '" + text + "' (names: constant, circle_scale, figure)");
}

int env_threads() {
    const char* env = std::getenv("DIFFEO_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (hw > 0 && n > hw) n = hw;
    return n;
}

SmoothMap build_named_map(const MetricSpace& ms, const std::string& text) {
    const DiffeoSpace& s = ms.space();
    const std::size_t colon = text.find(':');
    const std::string name = colon == std::string::npos ? text : text.substr(0, colon);
    const Vec params =
        colon == std::string::npos ? Vec{} : parse_csv_numbers(text.substr(colon + 1));
    if (name == "identity") return identity_map(s);
    if (s.family.size() != 1)
        throw UsageError("map '" + name + "' is only available on single-chart spaces");
    const ChartDomain dom = s.plot(0).domain;
    const std::size_t n = dom.dim;
    SmoothMap m;
    m.source = s.id;
    m.target = s.id;
    m.name = text;
    ChartMap h;
    h.source = dom;
    h.target = dom;
    if (name == "translate") {
        if (params.size() != n) throw UsageError("translate needs " + std::to_string(n) + " offsets");
        h.value = [params](const Vec& r) { return add(r, params); };
        h.jacobian_fn = [n](const Vec&) { return Mat::identity(n); };
    } else if (name == "scale") {
        const double c = params.empty() ? 2.0 : params[0];
        h.value = [c](const Vec& r) { return scale(c, r); };
        h.jacobian_fn = [c, n](const Vec&) {
            Mat j = Mat::identity(n);
            for (std::size_t i = 0; i < n; ++i) j(i, i) = c;
            return j;
        };
    } else if (name == "rotate") {
        if (n != 2) throw UsageError("rotate needs a 2-dimensional space");
        const double a = params.empty() ? M_PI / 4.0 : params[0];
        const double c = std::cos(a), sn = std::sin(a);
        h.value = [c, sn](const Vec& r) { return Vec{c * r[0] - sn * r[1], sn * r[0] + c * r[1]}; };
        h.jacobian_fn = [c, sn](const Vec&) {
            Mat j(2, 2);
            j(0, 0) = c;
            j(0, 1) = -sn;
            j(1, 0) = sn;
            j(1, 1) = c;
            return j;
        };
    } else {
        throw UsageError("unknown map '" + name + "' (names: identity, translate, scale, rotate)");
    }
    m.factorize = [h](int, const Vec&) -> std::optional<Factorization> {
        return Factorization{kInf, 0, h};
    };
    return m;
}

struct ReproduceOutput {
    Json record;
    std::string csv;  // empty when the target has no trace
    bool passed = false;
};

ReproduceOutput run_reproduce(const std::string& target, int levels, double tol,
                              std::uint64_t seed, const SearchConfig& base_cfg) {
    ReproduceOutput out;
    SearchConfig cfg = base_cfg;
    cfg.seed = seed;
    if (target == "euclidean") {
        auto r = examples::euclidean_distance_3_4(cfg);
        out.record = op_record("pseudodistance_upper",
                               Json{{"space", "euclidean2"}, {"from", "0,0"}, {"to", "3,4"}},
                               r.result.bound, 1e-6);
        out.record["witness_length"] = r.witness_length;
        out.csv = distance_trace_csv(r.result.trace, "euclidean-straight");
        out.passed = r.passed;
        return out;
    }
    if (target == "y-space") {
        auto r = examples::y_space_schedule(levels > 0 ? levels : 6, cfg);
        out.record =
            op_record("pseudodistance_upper",
                      Json{{"space", "y-space"}, {"from", "1:1.0"}, {"to", "2:1.0"}},
                      r.final_bound, 0.04);
        out.csv = distance_trace_csv(r.trace, "y-detour");
        out.passed = r.passed && r.final_bound <= 0.04;
        return out;
    }
    if (target == "plus-space") {
        auto r = examples::plus_space_checks(cfg);
        out.record = op_record("pseudodistance_upper",
                               Json{{"space", "plus-space"}, {"from", "1:-2.0"}, {"to", "2:3.0"}},
                               r.bound, 1e-4);
        out.record["min_positive_bound"] = r.min_positive_bound;
        out.csv = distance_trace_csv({r.bound}, "plus-through-origin");
        out.passed = r.passed;
        return out;
    }
    if (target == "m-space") {
        auto r = examples::m_space_checks(cfg);
        out.record = op_record("m_space_checks", Json{{"space", "m-space"}}, r.cross_bound, 1e-3);
        out.record["definite"] = r.definite;
        out.record["glued_point_bound"] = r.glued_point_bound;
        out.passed = r.passed;
        return out;
    }
    if (target == "loop-section") {
        auto r = examples::section_pullback(100, tol > 0 ? tol : 1e-6, seed);
        out.record = op_record("section_pullback", Json{{"target", "euclidean2"}, {"samples", 100}},
                               r.max_dev, tol > 0 ? tol : 1e-6);
        out.passed = r.passed;
        return out;
    }
    if (target == "concatenation") {
        auto r = examples::concatenation_isometry(50, tol > 0 ? tol : 1e-6, seed);
        out.record = op_record("concatenation_vs_wedge",
                               Json{{"target", "euclidean2"}, {"families", r.families}},
                               r.max_rel_dev, tol > 0 ? tol : 1e-6);
        out.passed = r.passed;
        return out;
    }
    if (target == "warped") {
        auto r = examples::warped_product_checks(seed);
        out.record = op_record("warped_product_checks", Json{{"f", "exp2x"}},
                               r.report.min_eigenvalue, r.eig_floor);
        out.record["definiteness"] = to_json(r.report);
        out.record["product_dev"] = r.product_dev;
        out.passed = r.passed;
        return out;
    }
    if (target == "wedge-sum-of-mapping-spaces") {
        auto r = examples::wedge_sum_checks(100, tol > 0 ? tol : 1e-6, seed);
        out.record = op_record("wedge_sum_of_mapping_spaces", Json{{"target", "euclidean2"}},
                               r.iota_dev, tol > 0 ? tol : 1e-6);
        out.record["compat_dev"] = r.compat_dev;
        out.passed = r.passed;
        return out;
    }
    throw UsageError(
        "unknown reproduce target '" + target +
        "' (targets: euclidean, y-space, plus-space, m-space, loop-section, concatenation, "
        "warped, wedge-sum-of-mapping-spaces)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weak Riemannian metrics on diffeological spaces"};
    app.require_subcommand(1);

    std::string space_file, from_text, to_text, out_file, json_file, map_text, target;
    std::string family_name = "identity", recognizer_name = "identity";
    int levels = 0, samples = 64, grid_points = 9, dim = 2;
    double tol = -1.0, window = 2.0;
    std::uint64_t seed = 0;

    auto* dist_cmd = app.add_subcommand("distance", "certified upper bounds on the pseudodistance");
    dist_cmd->add_option("--space", space_file, "space description (JSON)")->required();
    dist_cmd->add_option("--from", from_text, "start point / loop")->required();
    dist_cmd->add_option("--to", to_text, "end point / loop")->required();
    dist_cmd->add_option("--levels", levels, "refinement levels");
    dist_cmd->add_option("--seed", seed, "optimizer seed");
    dist_cmd->add_option("--tol", tol, "unused for distance; kept for symmetry");
    dist_cmd->add_option("--out", out_file, "CSV output path");
    dist_cmd->add_option("--json", json_file, "witness path JSON output");

    auto* chk_def = app.add_subcommand("check-definiteness", "grid definiteness check");
    chk_def->add_option("--space", space_file)->required();
    chk_def->add_option("--window", window, "grid window half-width");
    chk_def->add_option("--points", grid_points, "grid points per axis");
    chk_def->add_option("--tol", tol, "eigenvalue threshold");
    chk_def->add_option("--out", out_file, "report JSON path");

    auto* chk_iso = app.add_subcommand("check-isometry", "pullback-vs-metric comparison");
    chk_iso->add_option("--space", space_file)->required();
    chk_iso->add_option("--map", map_text, "identity | translate:dx,.. | scale:c | rotate:a")
        ->required();
    chk_iso->add_option("--samples", samples);
    chk_iso->add_option("--tol", tol);
    chk_iso->add_option("--seed", seed);
    chk_iso->add_option("--out", out_file);

    auto* chk_nat = app.add_subcommand("check-naturality", "tensor naturality under transitions");
    chk_nat->add_option("--space", space_file)->required();
    chk_nat->add_option("--samples", samples);
    chk_nat->add_option("--tol", tol);
    chk_nat->add_option("--seed", seed);
    chk_nat->add_option("--out", out_file);

    auto* chk_e = app.add_subcommand("check-condition-e", "condition (E) certification");
    chk_e->add_option("--family", family_name, "identity | constant_shift | circle_scale");
    chk_e->add_option("--recognizer", recognizer_name, "identity | any");
    chk_e->add_option("--dim", dim, "dimension of the target chart");
    chk_e->add_option("--out", out_file);

    auto* repr = app.add_subcommand("reproduce", "run a named worked example");
    repr->add_option("target", target, "example name")->required();
    repr->add_option("--levels", levels);
    repr->add_option("--tol", tol);
    repr->add_option("--seed", seed);
    repr->add_option("--out", out_file, "output basename (default: target name)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    SearchConfig cfg;
    cfg.threads = env_threads();

    try {
        if (dist_cmd->parsed()) {
            const LoadedSpace ls = load_space_file(space_file);
            if (levels > 0) cfg.refinement_levels = levels;
            cfg.seed = seed;
            if (ls.kind == LoadedSpace::Kind::finite) {
                const Point x = parse_point(ls.ms.space(), from_text);
                const Point y = parse_point(ls.ms.space(), to_text);
                const DistanceResult r = pseudodistance_upper(ls.ms.space(), ls.ms.metric, x, y, cfg);
                const std::string csv = distance_trace_csv(r.trace, from_text + "->" + to_text);
                write_text_file(out_file.empty() ? "results.csv" : out_file, csv);
                if (!json_file.empty() && r.best_path)
                    write_text_file(json_file, to_json(*r.best_path).dump(2) + "\n");
                std::cout << "bound = " << format_real(r.bound) << "\n";
                return 0;
            }
            // mapping space: Cauchy-Schwarz lower bound + homotopy upper bound
            const MetricSpace& N = *ls.loop_target;
            const LoopPoint f0 = parse_loop(N.space(), from_text);
            const LoopPoint f1 = parse_loop(N.space(), to_text);
            check_loop(N.space(), f0);
            check_loop(N.space(), f1);
            const double lower =
                mapping_distance_lower_bound(euclidean_point_distance(), f0, f1);
            const double upper =
                mapping_distance_upper_linear(N.space(), N.metric, f0, f1) + 1e-10;
            Json rec = op_record("mapping_distance",
                                 Json{{"from", from_text}, {"to", to_text}}, upper, 1e-3);
            rec["lower_bound"] = lower;
            rec["upper_bound"] = upper;
            std::string csv = "level,bound,path_id\n";
            csv += "0," + format_real(lower) + ",cauchy-schwarz-lower\n";
            csv += "1," + format_real(upper) + ",linear-homotopy\n";
            write_text_file(out_file.empty() ? "results.csv" : out_file, csv);
            if (!json_file.empty()) write_text_file(json_file, rec.dump(2) + "\n");
            std::cout << rec.dump(2) << "\n";
            return 0;
        }

        if (chk_def->parsed()) {
            const LoadedSpace ls = load_space_file(space_file);
            if (ls.kind != LoadedSpace::Kind::finite)
                throw UsageError("check-definiteness works on finite-dimensional spaces");
            GridSpec grid{grid_points, window};
            const DefinitenessReport rep =
                definiteness_check(ls.ms.space(), ls.ms.metric, grid, tol > 0 ? tol : 1e-8);
            const std::string text = to_json(rep).dump(2) + "\n";
            if (!out_file.empty()) write_text_file(out_file, text);
            std::cout << text;
            return rep.verdict == Verdict::definite ? 0 : 1;
        }

        if (chk_iso->parsed()) {
            const LoadedSpace ls = load_space_file(space_file);
            if (ls.kind != LoadedSpace::Kind::finite)
                throw UsageError("check-isometry works on finite-dimensional spaces");
            const SmoothMap phi = build_named_map(ls.ms, map_text);
            const DeviationReport rep =
                isometry_check(phi, ls.ms.space(), ls.ms.metric, ls.ms.space(), ls.ms.metric,
                               samples, tol > 0 ? tol : 1e-8, seed);
            Json rec = op_record("isometry_check", Json{{"map", map_text}}, rep.max_deviation,
                                 tol > 0 ? tol : 1e-8);
            rec["passed"] = rep.passed;
            if (!rep.worst.empty()) rec["worst"] = rep.worst;
            const std::string text = rec.dump(2) + "\n";
            if (!out_file.empty()) write_text_file(out_file, text);
            std::cout << text;
            return rep.passed ? 0 : 1;
        }

        if (chk_nat->parsed()) {
            const LoadedSpace ls = load_space_file(space_file);
            if (ls.kind != LoadedSpace::Kind::finite)
                throw UsageError("check-naturality works on finite-dimensional spaces");
            const DiffeoSpace& s = ls.ms.space();
            std::vector<NaturalityCase> cases;
            for (const auto& rule : s.glue)
                cases.push_back(naturality_case_from_glue(s, rule));
            for (std::size_t p = 0; p < s.family.size(); ++p) {
                NaturalityCase c;  // identity transition, a smoke case
                c.plot_p = static_cast<int>(p);
                c.domain_p = s.plot(static_cast<int>(p)).domain;
                c.f = identity_chart_map(c.domain_p);
                c.plot_q = static_cast<int>(p);
                cases.push_back(std::move(c));
            }
            if (s.family.size() == 1) {
                // translations are naturality probes for the constant tensors
                // the JSON descriptions can express
                Rng rng(seed + 13);
                for (int i = 0; i < 3; ++i) {
                    const std::size_t n = s.plot(0).domain.dim;
                    const Vec shift = rng.vec_uniform(n, -1.0, 1.0);
                    NaturalityCase c;
                    c.plot_p = -1;
                    c.tensor_p = ls.ms.metric.tensor[0];
                    c.domain_p = s.plot(0).domain;
                    c.f.source = c.domain_p;
                    c.f.target = c.domain_p;
                    c.f.value = [shift](const Vec& r) { return add(r, shift); };
                    c.f.jacobian_fn = [n](const Vec&) { return Mat::identity(n); };
                    c.plot_q = 0;
                    cases.push_back(std::move(c));
                }
            }
            const DeviationReport rep = check_naturality(ls.ms.metric, s, cases, samples,
                                                         tol > 0 ? tol : 1e-8, seed);
            Json rec = op_record("check_naturality", Json{{"cases", cases.size()}},
                                 rep.max_deviation, tol > 0 ? tol : 1e-8);
            rec["passed"] = rep.passed;
            const std::string text = rec.dump(2) + "\n";
            if (!out_file.empty()) write_text_file(out_file, text);
            std::cout << text;
            return rep.passed ? 0 : 1;
        }

        if (chk_e->parsed()) {
            MetricSpace eN = euclidean(static_cast<std::size_t>(dim));
            const DiffeoSpace& N = eN.space();
            const SpaceId sid = N.id;
            MappingPlot P;
            P.domain = ChartDomain::full(static_cast<std::size_t>(dim));
            if (family_name == "identity") {
                P.adjoint = [sid](const Vec& r, double) { return Point{sid, 0, r, {}}; };
            } else if (family_name == "constant_shift") {
                P.adjoint = [sid](const Vec& r, double) {
                    Vec c = r;
                    c[0] += 1.0;
                    return Point{sid, 0, c, {}};
                };
            } else if (family_name == "circle_scale") {
                if (dim != 2) throw UsageError("circle_scale needs --dim 2");
                P.adjoint = [sid](const Vec& r, double th) {
                    return Point{sid, 0, {r[0] * std::cos(th), r[0] * std::sin(th)}, {}};
                };
                P.domain = ChartDomain::full(1);
            } else {
                throw UsageError("unknown family '" + family_name + "'");
            }
            std::function<bool(const RestrictedPlot&)> member;
            if (recognizer_name == "identity") {
                member = [](const RestrictedPlot& rp) {
                    Rng rng(3);
                    for (int s = 0; s < 9; ++s) {
                        Vec x = rp.center;
                        for (auto& c : x) c += rp.radius * rng.uniform(-1.0, 1.0);
                        const Point p = rp.value(x);
                        if (p.plot != 0 || p.coords.size() != x.size() || dist(p.coords, x) > 1e-9)
                            return false;
                    }
                    return true;
                };
            } else if (recognizer_name == "any") {
                member = [](const RestrictedPlot&) { return true; };
            } else {
                throw UsageError("unknown recognizer '" + recognizer_name + "'");
            }
            std::vector<double> theta_grid;
            for (int i = 0; i < 8; ++i) theta_grid.push_back(kTwoPi * i / 8);
            const std::vector<Vec> r_grid = P.domain.grid(3, 1.0);
            const ConditionEReport rep = condition_E_check(P, member, theta_grid, r_grid);
            Json rec = op_record("condition_E_check",
                                 Json{{"family", family_name}, {"recognizer", recognizer_name}},
                                 rep.passed ? 1.0 : 0.0, 1.0);
            rec["passed"] = rep.passed;
            rec["failures"] = rep.failures.size();
            if (std::isfinite(rep.min_certified_radius))
                rec["min_certified_radius"] = rep.min_certified_radius;
            const std::string text = rec.dump(2) + "\n";
            if (!out_file.empty()) write_text_file(out_file, text);
            std::cout << text;
            return rep.passed ? 0 : 1;
        }

        if (repr->parsed()) {
            const ReproduceOutput out = run_reproduce(target, levels, tol, seed, cfg);
            const std::string base = out_file.empty() ? target : out_file;
            write_text_file(base + ".json", out.record.dump(2) + "\n");
            if (!out.csv.empty()) write_text_file(base + ".csv", out.csv);
            std::cout << (out.passed ? "PASS " : "FAIL ") << target << ": "
                      << out.record.dump() << "\n";
            return out.passed ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConstructionError& e) {
        std::cerr << "construction error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
