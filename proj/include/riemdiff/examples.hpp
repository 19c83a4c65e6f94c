#pragma once

#include <chrono>

#include "riemdiff/constructions.hpp"
#include "riemdiff/distance.hpp"
#include "riemdiff/mapping.hpp"

// Worked scenarios shared by the CLI `reproduce` targets and the acceptance
// suite. Each returns measured values plus a pass flag at pinned tolerances.
namespace riemdiff::examples {

namespace detail {

inline double now_seconds() {
    using Clock = std::chrono::steady_clock;
    static const Clock::time_point start = Clock::now();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Stopwatch {
    double t0 = now_seconds();
    double elapsed() const { return now_seconds() - t0; }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Euclidean plane, (0,0) -> (3,4); the straight line is optimal with length 5.

struct EuclideanDistance {
    DistanceResult result;
    double witness_length = 0.0;
    double seconds = 0.0;
    bool passed = false;
};

inline EuclideanDistance euclidean_distance_3_4(SearchConfig cfg = {}) {
    detail::Stopwatch watch;
    EuclideanDistance out;
    MetricSpace e2 = euclidean(2);
    const Point x = e2.space().eval(0, {0.0, 0.0});
    const Point y = e2.space().eval(0, {3.0, 4.0});
    out.result = pseudodistance_upper(e2.space(), e2.metric, x, y, cfg);
    if (out.result.best_path)
        out.witness_length = path_length(e2.metric, *out.result.best_path, cfg.quad,
                                         2 * cfg.closure_panels);
    out.seconds = watch.elapsed();
    out.passed = out.result.bound >= 5.0 && out.result.bound <= 5.0 + 1e-6 &&
                 std::fabs(out.witness_length - 5.0) <= 1e-8 && out.seconds <= 10.0;
    return out;
}

// ---------------------------------------------------------------------------
// Y-space detour schedule toward d([1_1], [1_2]) = 0.

struct YSchedule {
    std::vector<double> trace;
    bool monotone = false;
    bool within_schedule = false;
    double final_bound = kInf;
    double seconds = 0.0;
    bool passed = false;
};

inline YSchedule y_space_schedule(int levels = 6, SearchConfig cfg = {}) {
    detail::Stopwatch watch;
    cfg.refinement_levels = levels;
    YSchedule out;
    AdjunctionResult y = y_space();
    const DiffeoSpace& ys = y.glued.space();
    const DistanceResult d =
        pseudodistance_upper(ys, y.glued.metric, ys.eval(0, {1.0}), ys.eval(1, {1.0}), cfg);
    out.trace = d.trace;
    out.final_bound = d.bound;
    out.monotone = true;
    out.within_schedule = true;
    for (std::size_t i = 0; i < out.trace.size(); ++i) {
        if (i > 0 && out.trace[i] > out.trace[i - 1] + 1e-12) out.monotone = false;
        const double limit = std::pow(2.0, 2.0 - static_cast<double>(i + 1)) + 1e-6;
        if (out.trace[i] > limit) out.within_schedule = false;
    }
    out.seconds = watch.elapsed();
    out.passed = out.monotone && out.within_schedule && out.final_bound <= 0.07 &&
                 out.seconds <= 30.0;
    return out;
}

// ---------------------------------------------------------------------------
// +-space: (-2 in R_1) -> (3 in R_2) through the glue point.

struct PlusDistance {
    double bound = kInf;
    bool in_window = false;
    double min_positive_bound = kInf;
    bool positivity_ok = false;
    double seconds = 0.0;
    bool passed = false;
};

inline PlusDistance plus_space_checks(SearchConfig cfg = {}) {
    detail::Stopwatch watch;
    PlusDistance out;
    AdjunctionResult plus = plus_space();
    const DiffeoSpace& ps = plus.glued.space();
    out.bound = pseudodistance_upper(ps, plus.glued.metric, ps.eval(0, {-2.0}),
                                     ps.eval(1, {3.0}), cfg)
                    .bound;
    out.in_window = out.bound >= 5.0 && out.bound <= 5.0 + 1e-4;
    // positivity sanity: pairs whose true distance exceeds 1e-3 by closed form
    const std::vector<std::pair<Point, Point>> pairs = {
        {ps.eval(0, {-1.0}), ps.eval(1, {2.0})},   // 3
        {ps.eval(0, {0.5}), ps.eval(1, {0.5})},    // 1
        {ps.eval(0, {1.0}), ps.eval(0, {2.0})},    // 1
        {ps.eval(1, {-0.25}), ps.eval(1, {0.25})}  // 0.5
    };
    out.positivity_ok = true;
    for (const auto& [a, b] : pairs) {
        const double bound = pseudodistance_upper(ps, plus.glued.metric, a, b, cfg).bound;
        out.min_positive_bound = std::min(out.min_positive_bound, bound);
        if (!(bound > 1e-3)) out.positivity_ok = false;
    }
    out.seconds = watch.elapsed();
    out.passed = out.in_window && out.positivity_ok;
    return out;
}

// ---------------------------------------------------------------------------
// Section pullback s*g = 2*pi*g_N on N = R^2.

struct SectionPullback {
    double max_dev = 0.0;
    double seconds = 0.0;
    bool passed = false;
};

inline SectionPullback section_pullback(int samples = 100, double tol = 1e-6,
                                        std::uint64_t seed = 31) {
    detail::Stopwatch watch;
    SectionPullback out;
    MetricSpace e2 = euclidean(2);
    const MappingPlot s_plot = section_compose(e2.space(), 0);
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const Vec r = rng.vec_uniform(2, -2.0, 2.0);
        const Vec v = rng.vec_uniform(2, -2.0, 2.0);
        const Vec w = rng.vec_uniform(2, -2.0, 2.0);
        const double lhs = mapping_metric_eval(e2.space(), e2.metric, s_plot, r, v, w);
        const double rhs = kTwoPi * e2.metric.eval({0, r, v, w});
        out.max_dev = std::max(out.max_dev, std::fabs(lhs - rhs));
    }
    out.seconds = watch.elapsed();
    out.passed = out.max_dev <= tol && out.seconds <= 5.0;
    return out;
}

// ---------------------------------------------------------------------------
// Concatenation comparison g(c∘P) vs g_vee(P) over random polynomial loop
// families into R^2.

struct ConcatenationCheck {
    double max_rel_dev = 0.0;
    int families = 0;
    double seconds = 0.0;
    bool passed = false;
};

// left/right loop families polynomial in r (degree 2) and trigonometric in
// theta (order 2), basepoint-coherent by construction
inline WedgePlot random_polynomial_wedge(const DiffeoSpace& N, Rng& rng) {
    struct Coeffs {
        double c[2][5][3];  // coordinate, harmonic {1,cos,sin,cos2,sin2}, power of r
    };
    auto random_coeffs = [&rng]() {
        Coeffs c;
        for (auto& plane : c.c)
            for (auto& harm : plane)
                for (double& v : harm) v = rng.uniform(-1.0, 1.0);
        return c;
    };
    auto family_value = [](const Coeffs& c, double r, double th, int coord) {
        const double basis[5] = {1.0, std::cos(th), std::sin(th), std::cos(2 * th),
                                 std::sin(2 * th)};
        double s = 0.0;
        for (int h = 0; h < 5; ++h)
            s += (c.c[coord][h][0] + c.c[coord][h][1] * r + c.c[coord][h][2] * r * r) * basis[h];
        return s;
    };
    auto family_dr = [](const Coeffs& c, double r, double th, int coord) {
        const double basis[5] = {1.0, std::cos(th), std::sin(th), std::cos(2 * th),
                                 std::sin(2 * th)};
        double s = 0.0;
        for (int h = 0; h < 5; ++h) s += (c.c[coord][h][1] + 2.0 * c.c[coord][h][2] * r) * basis[h];
        return s;
    };
    const Coeffs cl = random_coeffs();
    const Coeffs cr = random_coeffs();
    const SpaceId sid = N.id;
    MappingPlot left;
    left.domain = ChartDomain::full(1);
    left.adjoint = [cl, family_value, sid](const Vec& r, double th) {
        return Point{sid, 0, {family_value(cl, r[0], th, 0), family_value(cl, r[0], th, 1)}, {}};
    };
    left.coord_jacobian = [cl, family_dr](const Vec& r, double th) {
        Mat j(2, 1);
        j(0, 0) = family_dr(cl, r[0], th, 0);
        j(1, 0) = family_dr(cl, r[0], th, 1);
        return j;
    };
    // right(r)(th) = q(r,th) - q(r,0) + left(r)(0) keeps the basepoints coherent
    MappingPlot right;
    right.domain = ChartDomain::full(1);
    right.adjoint = [cl, cr, family_value, sid](const Vec& r, double th) {
        Vec coords(2);
        for (int k = 0; k < 2; ++k)
            coords[static_cast<std::size_t>(k)] = family_value(cr, r[0], th, k) -
                                                  family_value(cr, r[0], 0.0, k) +
                                                  family_value(cl, r[0], 0.0, k);
        return Point{sid, 0, coords, {}};
    };
    right.coord_jacobian = [cl, cr, family_dr](const Vec& r, double th) {
        Mat j(2, 1);
        for (int k = 0; k < 2; ++k)
            j(static_cast<std::size_t>(k), 0) = family_dr(cr, r[0], th, k) -
                                                family_dr(cr, r[0], 0.0, k) +
                                                family_dr(cl, r[0], 0.0, k);
        return j;
    };
    return WedgePlot{left, right};
}

inline ConcatenationCheck concatenation_isometry(int families = 50, double tol = 1e-6,
                                                 std::uint64_t seed = 47) {
    detail::Stopwatch watch;
    ConcatenationCheck out;
    out.families = families;
    MetricSpace e2 = euclidean(2);
    const DiffeoSpace& N = e2.space();
    Rng rng(seed);
    for (int i = 0; i < families; ++i) {
        const WedgePlot wedge = random_polynomial_wedge(N, rng);
        const MappingPlot cat = concatenate(N, wedge);
        const Vec r = {rng.uniform(-1.0, 1.0)};
        const double lhs = mapping_metric_eval(N, e2.metric, cat, r, {1.0}, {1.0});
        const double rhs = wedge_metric_eval(N, e2.metric, wedge, r, {1.0}, {1.0});
        out.max_rel_dev =
            std::max(out.max_rel_dev, std::fabs(lhs - rhs) / std::max(1e-12, std::fabs(rhs)));
    }
    out.seconds = watch.elapsed();
    out.passed = out.max_rel_dev <= tol && out.seconds <= 20.0;
    return out;
}

// ---------------------------------------------------------------------------
// Mapping-space distance between constant loops: both bounds pin sqrt(2*pi).

struct MappingDistance {
    double lower = 0.0;
    double upper = kInf;
    double target = std::sqrt(kTwoPi);
    bool passed = false;
};

inline MappingDistance mapping_distance_certificate() {
    MappingDistance out;
    MetricSpace e2 = euclidean(2);
    const DiffeoSpace& N = e2.space();
    const LoopPoint f0 = constant_loop(N.eval(0, {0.0, 0.0}));
    const LoopPoint f1 = constant_loop(N.eval(0, {1.0, 0.0}));
    out.lower = mapping_distance_lower_bound(euclidean_point_distance(), f0, f1);
    out.upper = mapping_distance_upper_linear(N, e2.metric, f0, f1) + 1e-10;
    out.passed = std::fabs(out.lower - out.target) <= 1e-9 && out.upper <= out.target + 1e-3 &&
                 out.lower <= out.upper;
    return out;
}

// ---------------------------------------------------------------------------
// Warped product R x_f R with f = e^{2x}.

struct WarpedChecks {
    DefinitenessReport report;
    double eig_floor = 0.0;     // min(1, e^{2 x_min}) - 1e-9 on the window
    double product_dev = 0.0;   // f == 1 warped vs product metric
    bool passed = false;
};

inline WarpedChecks warped_product_checks(std::uint64_t seed = 59) {
    WarpedChecks out;
    MetricSpace X = euclidean(1), Y = euclidean(1);
    WarpSpec warp;
    warp.f_per_plot.push_back([](const Vec& r) { return std::exp(2.0 * r[0]); });
    MetricSpace warped = warped_product(X, Y, warp);
    GridSpec grid;
    grid.points_per_axis = 9;
    grid.window = 1.0;
    out.report = definiteness_check(warped.space(), warped.metric, grid, 1e-8);
    out.eig_floor = std::min(1.0, std::exp(2.0 * -1.0)) - 1e-9;

    MetricSpace unwarped = warped_product(X, Y, WarpSpec::constant(1.0, 1));
    Rng rng(seed);
    for (int i = 0; i < 1000; ++i) {
        const Vec r = rng.vec_uniform(2, -2.0, 2.0);
        const Vec v = rng.vec_uniform(2, -1.0, 1.0);
        const Vec w = rng.vec_uniform(2, -1.0, 1.0);
        const double lhs = unwarped.metric.eval({0, r, v, w});
        const double rhs = X.metric.eval({0, {r[0]}, {v[0]}, {w[0]}}) +
                           Y.metric.eval({0, {r[1]}, {v[1]}, {w[1]}});
        out.product_dev = std::max(out.product_dev, std::fabs(lhs - rhs));
    }
    out.passed = out.report.verdict == Verdict::definite &&
                 out.report.min_eigenvalue >= out.eig_floor && out.product_dev == 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Property suites (acceptance criterion on invariants)

struct NaturalitySuite {
    double max_dev = 0.0;
    bool passed = false;
};

// random smooth precompositions f with finite-difference Jacobians against
// tensors transported with the hand-computed analytic Jacobian
inline NaturalitySuite naturality_suite(int pairs = 100, double tol = 1e-4,
                                        std::uint64_t seed = 67) {
    NaturalitySuite out;
    MetricSpace e2 = euclidean(2);
    Rng rng(seed);
    std::vector<NaturalityCase> cases;
    for (int i = 0; i < pairs; ++i) {
        const double a11 = rng.uniform(-1.5, 1.5), a12 = rng.uniform(-1.5, 1.5);
        const double a21 = rng.uniform(-1.5, 1.5), a22 = rng.uniform(-1.5, 1.5);
        const double b1 = rng.uniform(-1.0, 1.0), b2 = rng.uniform(-1.0, 1.0);
        const double amp = rng.uniform(-0.5, 0.5), freq = rng.uniform(0.5, 1.5);
        auto value = [=](const Vec& r) {
            return Vec{a11 * r[0] + a12 * r[1] + b1 + amp * std::sin(freq * r[1]),
                       a21 * r[0] + a22 * r[1] + b2 + amp * std::cos(freq * r[0])};
        };
        auto analytic_j = [=](const Vec& r) {
            Mat j(2, 2);
            j(0, 0) = a11;
            j(0, 1) = a12 + amp * freq * std::cos(freq * r[1]);
            j(1, 0) = a21 - amp * freq * std::sin(freq * r[0]);
            j(1, 1) = a22;
            return j;
        };
        NaturalityCase c;
        c.plot_p = -1;
        c.domain_p = ChartDomain::full(2);
        c.f.source = ChartDomain::full(2);
        c.f.target = ChartDomain::full(2);
        c.f.value = value;  // finite-difference Jacobian on purpose
        c.plot_q = 0;
        c.tensor_p = [value, analytic_j](const Vec& r, const Vec& v, const Vec& w) {
            const Mat j = analytic_j(r);
            return dot(j.apply(v), j.apply(w));
        };
        cases.push_back(std::move(c));
    }
    const DeviationReport rep = check_naturality(e2.metric, e2.space(), cases, 2, tol, seed);
    out.max_dev = rep.max_deviation;
    out.passed = rep.passed;
    return out;
}

struct BilinearitySuite {
    double max_rel_dev = 0.0;
    double max_symmetry_gap = 0.0;
    bool passed = false;
};

inline BilinearitySuite bilinearity_suite(int samples = 200, std::uint64_t seed = 71) {
    BilinearitySuite out;
    std::vector<MetricSpace> spaces;
    spaces.push_back(euclidean(2));
    {
        WarpSpec warp;
        warp.f_per_plot.push_back([](const Vec& r) { return std::exp(2.0 * r[0]); });
        spaces.push_back(warped_product(euclidean(1), euclidean(1), warp));
    }
    spaces.push_back(y_space().glued);
    Rng rng(seed);
    for (const auto& ms : spaces) {
        for (int i = 0; i < samples; ++i) {
            const int plot = rng.integer(0, static_cast<int>(ms.space().family.size()) - 1);
            const std::size_t n = ms.space().plot(plot).domain.dim;
            Vec r;
            try {
                r = ms.space().plot(plot).domain.sample(rng, 2.0);
            } catch (const DomainBoundsError&) {
                continue;
            }
            const Vec v = rng.vec_uniform(n, -2.0, 2.0);
            const Vec u = rng.vec_uniform(n, -2.0, 2.0);
            const Vec w = rng.vec_uniform(n, -2.0, 2.0);
            const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
            const double lhs = ms.metric.eval({plot, r, add(scale(a, v), scale(b, u)), w});
            const double rhs =
                a * ms.metric.eval({plot, r, v, w}) + b * ms.metric.eval({plot, r, u, w});
            out.max_rel_dev = std::max(out.max_rel_dev,
                                       std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
            out.max_symmetry_gap =
                std::max(out.max_symmetry_gap, std::fabs(ms.metric.eval({plot, r, v, w}) -
                                                         ms.metric.eval({plot, r, w, v})));
        }
    }
    out.passed = out.max_rel_dev <= 1e-10 && out.max_symmetry_gap <= 1e-10;
    return out;
}

struct BoundConsistency {
    double symmetry_gap = 0.0;
    double triangle_gap = -kInf;  // bound(x,z) - bound(x,y) - bound(y,z)
    bool passed = false;
};

inline BoundConsistency bound_consistency(SearchConfig cfg = {}) {
    BoundConsistency out;
    {
        MetricSpace e2 = euclidean(2);
        const DiffeoSpace& s = e2.space();
        const Point x = s.eval(0, {0.0, 0.0}), y = s.eval(0, {1.0, 1.0}), z = s.eval(0, {3.0, 4.0});
        const DistanceResult dxy = pseudodistance_upper(s, e2.metric, x, y, cfg);
        const DistanceResult dyx = pseudodistance_upper(s, e2.metric, y, x, cfg);
        out.symmetry_gap = std::max(out.symmetry_gap, std::fabs(dxy.bound - dyx.bound));
        const DistanceResult dyz = pseudodistance_upper(s, e2.metric, y, z, cfg);
        SearchConfig seeded = cfg;
        if (dxy.best_path && dyz.best_path)
            seeded.seed_paths.push_back(concatenated(*dxy.best_path, *dyz.best_path));
        const DistanceResult dxz = pseudodistance_upper(s, e2.metric, x, z, seeded);
        out.triangle_gap =
            std::max(out.triangle_gap, dxz.bound - dxy.bound - dyz.bound);
    }
    {
        AdjunctionResult plus = plus_space();
        const DiffeoSpace& s = plus.glued.space();
        const Point x = s.eval(0, {-2.0}), y = s.eval(0, {-1.0}), z = s.eval(1, {3.0});
        const DistanceResult dxz = pseudodistance_upper(s, plus.glued.metric, x, z, cfg);
        const DistanceResult dzx = pseudodistance_upper(s, plus.glued.metric, z, x, cfg);
        out.symmetry_gap = std::max(out.symmetry_gap, std::fabs(dxz.bound - dzx.bound));
        const DistanceResult dxy = pseudodistance_upper(s, plus.glued.metric, x, y, cfg);
        const DistanceResult dyz = pseudodistance_upper(s, plus.glued.metric, y, z, cfg);
        SearchConfig seeded = cfg;
        if (dxy.best_path && dyz.best_path)
            seeded.seed_paths.push_back(concatenated(*dxy.best_path, *dyz.best_path));
        const DistanceResult dxz2 = pseudodistance_upper(s, plus.glued.metric, x, z, seeded);
        out.triangle_gap =
            std::max(out.triangle_gap, dxz2.bound - dxy.bound - dyz.bound);
    }
    out.passed = out.symmetry_gap <= 1e-6 && out.triangle_gap <= 1e-6;
    return out;
}

struct LipschitzSuite {
    double worst_gap = -kInf;  // chord length minus k_hat * |dr|, maximized
    double k_euclidean = 0.0;  // expect 1
    double k_scaled = 0.0;     // expect 2 for 4*standard on R
    double k_warped = 0.0;     // expect e on x in [0,1]
    bool passed = false;
};

inline LipschitzSuite lipschitz_suite(int pairs_per_space = 200, std::uint64_t seed = 83) {
    LipschitzSuite out;
    {
        MetricSpace e2 = euclidean(2);
        const std::vector<Interval> region = {{-1.0, 1.0}, {-1.0, 1.0}};
        out.k_euclidean = lipschitz_probe(e2.space(), e2.metric, 0, region);
        out.worst_gap = std::max(out.worst_gap,
                                 lipschitz_chord_gap(e2.space(), e2.metric, 0, region,
                                                     out.k_euclidean, pairs_per_space, seed));
    }
    {
        Mat four(1, 1);
        four(0, 0) = 4.0;
        MetricSpace scaled = euclidean(1, four);
        const std::vector<Interval> region = {{-1.0, 1.0}};
        out.k_scaled = lipschitz_probe(scaled.space(), scaled.metric, 0, region);
        out.worst_gap = std::max(out.worst_gap,
                                 lipschitz_chord_gap(scaled.space(), scaled.metric, 0, region,
                                                     out.k_scaled, pairs_per_space, seed + 1));
    }
    {
        WarpSpec warp;
        warp.f_per_plot.push_back([](const Vec& r) { return std::exp(2.0 * r[0]); });
        MetricSpace warped = warped_product(euclidean(1), euclidean(1), warp);
        const std::vector<Interval> region = {{0.0, 1.0}, {-1.0, 1.0}};
        out.k_warped = lipschitz_probe(warped.space(), warped.metric, 0, region);
        out.worst_gap = std::max(out.worst_gap,
                                 lipschitz_chord_gap(warped.space(), warped.metric, 0, region,
                                                     out.k_warped, pairs_per_space, seed + 2));
    }
    {
        AdjunctionResult y = y_space();
        const std::vector<Interval> region = {{2.0, 3.0}};
        const double k = lipschitz_probe(y.glued.space(), y.glued.metric, 0, region);
        out.worst_gap = std::max(out.worst_gap,
                                 lipschitz_chord_gap(y.glued.space(), y.glued.metric, 0, region,
                                                     k, pairs_per_space, seed + 3));
    }
    out.passed = out.worst_gap <= 1e-6 && std::fabs(out.k_euclidean - 1.0) <= 1e-9 &&
                 std::fabs(out.k_scaled - 2.0) <= 1e-9 &&
                 std::fabs(out.k_warped - std::exp(1.0)) <= 1e-9;
    return out;
}

// ---------------------------------------------------------------------------
// M-space = R glued to R^2 along (1, inf)

struct MSpaceChecks {
    bool definite = false;
    double glued_point_bound = kInf;  // d of a glued representative pair, ~0
    double cross_bound = kInf;        // d(0 in R, (0,0) in R^2) -> 2
    bool passed = false;
};

inline MSpaceChecks m_space_checks(SearchConfig cfg = {}) {
    MSpaceChecks out;
    AdjunctionResult m = m_space();
    const DiffeoSpace& s = m.glued.space();
    out.definite =
        definiteness_check(s, m.glued.metric, GridSpec{9, 2.0}, 1e-8).verdict == Verdict::definite;
    out.glued_point_bound =
        pseudodistance_upper(s, m.glued.metric, s.eval(0, {2.0}), s.eval(1, {2.0, 0.0}), cfg)
            .bound;
    out.cross_bound =
        pseudodistance_upper(s, m.glued.metric, s.eval(0, {0.0}), s.eval(1, {0.0, 0.0}), cfg)
            .bound;
    out.passed = out.definite && out.glued_point_bound <= 1e-6 && out.cross_bound >= 2.0 &&
                 out.cross_bound <= 2.0 + 1e-3;
    return out;
}

// ---------------------------------------------------------------------------
// Wedge sum of mapping spaces C(S^1,N) ⊔_N C(S^1,N) glued along the section:
// compatibility of the two pullbacks and iota* of the glued metric.

struct WedgeSumChecks {
    double compat_dev = kInf;  // |s*g_left - s*g_right| over samples
    double iota_dev = kInf;    // |iota* glued - 2 pi g_N|
    bool passed = false;
};

inline WedgeSumChecks wedge_sum_checks(int samples = 100, double tol = 1e-6,
                                       std::uint64_t seed = 97) {
    WedgeSumChecks out;
    out.compat_dev = 0.0;
    out.iota_dev = 0.0;
    MetricSpace e2 = euclidean(2);
    const DiffeoSpace& N = e2.space();
    const MappingPlot s_left = section_compose(N, 0);
    const MappingPlot s_right = section_compose(N, 0);
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const Vec r = rng.vec_uniform(2, -2.0, 2.0);
        const Vec v = rng.vec_uniform(2, -2.0, 2.0);
        const Vec w = rng.vec_uniform(2, -2.0, 2.0);
        const double left = mapping_metric_eval(N, e2.metric, s_left, r, v, w);
        const double right = mapping_metric_eval(N, e2.metric, s_right, r, v, w);
        out.compat_dev = std::max(out.compat_dev, std::fabs(left - right));
        // on the glued space the canonical injection factors through either
        // copy, so iota* of the glued metric is s*g
        out.iota_dev =
            std::max(out.iota_dev, std::fabs(left - kTwoPi * e2.metric.eval({0, r, v, w})));
    }
    out.passed = out.compat_dev <= tol && out.iota_dev <= tol;
    return out;
}

}  // namespace riemdiff::examples
