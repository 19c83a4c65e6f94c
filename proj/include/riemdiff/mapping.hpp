#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "riemdiff/metric.hpp"
#include "riemdiff/quadrature.hpp"

namespace riemdiff {

constexpr double kTwoPi = 2.0 * M_PI;

// exp-based smoothstep: 0 for t <= 0, 1 for t >= 1, smooth everywhere
inline double smooth_phi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

inline double smoothstep01(double t) {
    const double a = smooth_phi(t), b = smooth_phi(1.0 - t);
    return a / (a + b);
}

inline double smoothstep01_deriv(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double a = smooth_phi(t), b = smooth_phi(1.0 - t);
    const double da = a / (t * t);
    const double db = -b / ((1.0 - t) * (1.0 - t));
    const double denom = a + b;
    return (da * denom - a * (da + db)) / (denom * denom);
}

// Monotone bump b: R -> [0, 2pi] with b = 0 on (-inf, pi/4] and b = 2pi on
// [3pi/4, inf).
inline double bump_b(double s) { return kTwoPi * smoothstep01((s - M_PI / 4.0) / (M_PI / 2.0)); }

// ---------------------------------------------------------------------------
// Loops and plots of the mapping space C^inf(S^1, N)

struct LoopPoint {
    std::function<Point(double)> value;  // theta in [0, 2pi), periodic

    Point operator()(double theta) const { return value(theta); }
};

inline LoopPoint constant_loop(const Point& y) {
    LoopPoint l;
    l.value = [y](double) { return y; };
    return l;
}

// periodicity / continuity probe at construction samples
inline void check_loop(const DiffeoSpace& N, const LoopPoint& loop, int samples = 16,
                       double delta = 1e-7) {
    for (int k = 0; k < samples; ++k) {
        const double theta = kTwoPi * k / samples;
        const Point a = loop(theta);
        const Point b = loop(theta + delta);
        if (a.space != N.id) throw ConstructionError("check_loop: loop leaves the target space");
        if (a.plot == b.plot && dist(a.coords, b.coords) > 1e-3)
            throw ConstructionError("check_loop: loop jumps at a sampled angle");
    }
    const Point head = loop(0.0), tail = loop(kTwoPi - delta);
    if (!N.equal(N.eval(head.plot, head.coords), N.eval(tail.plot, tail.coords))) {
        const double gap = head.plot == tail.plot ? dist(head.coords, tail.coords) : kInf;
        if (gap > 1e-3) throw ConstructionError("check_loop: loop is not periodic");
    }
}

// Plot of the functional diffeology on C^inf(S^1, N), given by its adjoint.
struct MappingPlot {
    ChartDomain domain;  // parameter domain in r
    std::function<Point(const Vec& r, double theta)> adjoint;
    // optional analytic d(chart coords)/dr at fixed theta
    std::function<Mat(const Vec& r, double theta)> coord_jacobian;
    double fd_step = 1e-6;

    LoopPoint at(const Vec& r) const {
        auto adj = adjoint;
        Vec rr = r;
        LoopPoint l;
        l.value = [adj, rr](double theta) { return adj(rr, theta); };
        return l;
    }
};

// g_N(ev_theta o P)_r(v, w): the plot ev_theta o P of N is differentiated in r
// through the chart its value sits in.
inline double evaluation_tensor(const DiffeoSpace& N, const WeakMetric& g_N,
                                const MappingPlot& P, const Vec& r, double theta, const Vec& v,
                                const Vec& w) {
    const Point base = P.adjoint(r, theta);
    Mat j;
    if (P.coord_jacobian) {
        j = P.coord_jacobian(r, theta);
    } else {
        const std::size_t out_dim = base.coords.size();
        j = Mat(out_dim, r.size());
        for (std::size_t k = 0; k < r.size(); ++k) {
            Vec rp = r, rm = r;
            rp[k] += P.fd_step;
            rm[k] -= P.fd_step;
            Point pp = P.adjoint(rp, theta);
            Point pm = P.adjoint(rm, theta);
            auto into_chart = [&](Point& q) {
                if (q.plot == base.plot) return true;
                auto c = N.coords_in_chart(q, base.plot);
                if (!c) return false;
                q.plot = base.plot;
                q.coords = *c;
                return true;
            };
            if (!into_chart(pp) || !into_chart(pm)) {
                std::ostringstream os;
                os << "evaluation_tensor: ev_theta o P does not factorize through chart "
                   << base.plot << " at theta=" << theta;
                throw EvaluationError(os.str());
            }
            for (std::size_t i = 0; i < out_dim; ++i)
                j(i, k) = (pp.coords[i] - pm.coords[i]) / (2.0 * P.fd_step);
        }
    }
    return g_N.eval({base.plot, base.coords, j.apply(v), j.apply(w)});
}

// g(P)_r(v, w) = \int_0^{2pi} g_N(ev_theta o P)_r(v, w) dtheta by composite
// Gauss-Legendre quadrature.
inline double mapping_metric_eval(const DiffeoSpace& N, const WeakMetric& g_N,
                                  const MappingPlot& P, const Vec& r, const Vec& v, const Vec& w,
                                  const QuadratureSpec& quad = {8, 32}) {
    P.domain.require(r, "mapping_metric_eval");
    return integrate(
        [&](double theta) { return evaluation_tensor(N, g_N, P, r, theta, v, w); }, 0.0, kTwoPi,
        quad);
}

// ---------------------------------------------------------------------------
// The section s: N -> C^inf(S^1, N), s(y)(theta) = y

inline LoopPoint section_loop(const Point& y) { return constant_loop(y); }

// s composed with the generating plot `plot_index` of N, as a mapping plot
// whose adjoint is constant in theta.
inline MappingPlot section_compose(const DiffeoSpace& N, int plot_index) {
    MappingPlot mp;
    mp.domain = N.plot(plot_index).domain;
    const SpaceId sid = N.id;
    mp.adjoint = [sid, plot_index](const Vec& r, double) {
        return Point{sid, plot_index, r, {}};
    };
    const std::size_t n = mp.domain.dim;
    mp.coord_jacobian = [n](const Vec&, double) { return Mat::identity(n); };
    return mp;
}

// ---------------------------------------------------------------------------
// Wedge C^inf(S^1 v S^1, N): pairs of loop families with a common basepoint

struct WedgePlot {
    MappingPlot left;
    MappingPlot right;
};

inline void check_wedge_coherence(const DiffeoSpace& N, const WedgePlot& P, int samples = 9) {
    Rng rng(5);
    for (int s = 0; s < samples; ++s) {
        Vec r;
        try {
            r = P.left.domain.sample(rng, 1.5);
        } catch (const DomainBoundsError&) {
            return;
        }
        const Point a = P.left.adjoint(r, 0.0);
        const Point b = P.right.adjoint(r, 0.0);
        if (!N.equal(N.eval(a.plot, a.coords), N.eval(b.plot, b.coords)))
            throw ConstructionError("wedge plot: basepoints of the two loop families disagree at " +
                                    a.describe());
    }
}

// Concatenation c = p^*: traverse the left circle on [0, pi] and the right one
// on [pi, 2pi], driven by the bump b.
inline MappingPlot concatenate(const DiffeoSpace& N, const WedgePlot& P, bool check = true) {
    if (check) check_wedge_coherence(N, P);
    MappingPlot out;
    out.domain = P.left.domain;
    auto left = P.left.adjoint;
    auto right = P.right.adjoint;
    out.adjoint = [left, right](const Vec& r, double theta) {
        double t = std::fmod(theta, kTwoPi);
        if (t < 0) t += kTwoPi;
        if (t <= M_PI) return left(r, bump_b(t));
        return right(r, bump_b(t - M_PI));
    };
    if (P.left.coord_jacobian && P.right.coord_jacobian) {
        auto jl = P.left.coord_jacobian;
        auto jr = P.right.coord_jacobian;
        out.coord_jacobian = [jl, jr](const Vec& r, double theta) {
            double t = std::fmod(theta, kTwoPi);
            if (t < 0) t += kTwoPi;
            if (t <= M_PI) return jl(r, bump_b(t));
            return jr(r, bump_b(t - M_PI));
        };
    }
    out.fd_step = P.left.fd_step;
    return out;
}

// g_vee(P) = g(P_left) + g(P_right). With `count_basepoint_twice` the
// alternative convention g_N ⊕ (g ⊕ g) is used, which also adds the tensor of
// the basepoint family.
inline double wedge_metric_eval(const DiffeoSpace& N, const WeakMetric& g_N, const WedgePlot& P,
                                const Vec& r, const Vec& v, const Vec& w,
                                const QuadratureSpec& quad = {8, 32},
                                bool count_basepoint_twice = false) {
    double value = mapping_metric_eval(N, g_N, P.left, r, v, w, quad) +
                   mapping_metric_eval(N, g_N, P.right, r, v, w, quad);
    if (count_basepoint_twice) value += evaluation_tensor(N, g_N, P.left, r, 0.0, v, w);
    return value;
}

// ---------------------------------------------------------------------------
// Condition (E)

// ev_theta o P restricted to a ball; what a recognizer for membership in the
// target's generating family gets to inspect.
struct RestrictedPlot {
    Vec center;
    double radius = 0.0;
    std::function<Point(const Vec&)> value;
};

struct ConditionEFailure {
    Vec r;
    double theta = 0.0;
};

struct ConditionEReport {
    bool passed = true;
    std::vector<ConditionEFailure> failures;
    double min_certified_radius = kInf;
};

inline ConditionEReport condition_E_check(const MappingPlot& P,
                                          const std::function<bool(const RestrictedPlot&)>& member,
                                          const std::vector<double>& theta_grid,
                                          const std::vector<Vec>& r_grid, double radius0 = 1.0,
                                          int halvings = 10) {
    ConditionEReport report;
    for (const Vec& r : r_grid) {
        for (double theta : theta_grid) {
            bool certified = false;
            double radius = radius0;
            for (int k = 0; k <= halvings; ++k, radius *= 0.5) {
                RestrictedPlot rp;
                rp.center = r;
                rp.radius = radius;
                auto adj = P.adjoint;
                rp.value = [adj, theta](const Vec& x) { return adj(x, theta); };
                bool inside = true;
                for (std::size_t i = 0; i < r.size() && inside; ++i) {
                    Vec probe = r;
                    probe[i] += radius;
                    inside = P.domain.contains(probe);
                    probe[i] -= 2.0 * radius;
                    inside = inside && P.domain.contains(probe);
                }
                if (!inside) continue;
                if (member(rp)) {
                    certified = true;
                    report.min_certified_radius = std::min(report.min_certified_radius, radius);
                    break;
                }
            }
            if (!certified) {
                report.passed = false;
                if (report.failures.size() < 16) report.failures.push_back({r, theta});
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Conversions of Lemma l: maps on S^1 v S^1 <-> coherent loop pairs

using WedgeMap = std::function<Point(int branch, double theta)>;  // branch 0 left, 1 right

struct WedgePoint {
    LoopPoint left;
    LoopPoint right;
};

inline WedgePoint l_convert(const DiffeoSpace& N, const WedgeMap& gamma) {
    WedgePoint z;
    z.left.value = [gamma](double theta) { return gamma(0, theta); };
    z.right.value = [gamma](double theta) { return gamma(1, theta); };
    const Point a = z.left(0.0), b = z.right(0.0);
    if (!N.equal(N.eval(a.plot, a.coords), N.eval(b.plot, b.coords)))
        throw ConstructionError("l_convert: map is not basepoint coherent");
    return z;
}

inline WedgeMap nu_convert(const DiffeoSpace& N, const WedgePoint& z) {
    const Point a = z.left(0.0), b = z.right(0.0);
    if (!N.equal(N.eval(a.plot, a.coords), N.eval(b.plot, b.coords)))
        throw ConstructionError("nu_convert: loops do not share a basepoint");
    auto left = z.left.value;
    auto right = z.right.value;
    return [left, right](int branch, double theta) {
        return branch == 0 ? left(theta) : right(theta);
    };
}

// ---------------------------------------------------------------------------
// Distance bounds on the mapping space

// Cauchy-Schwarz lower bound: vol(S^1)^{-1/2} \int d_N(f0(theta), f1(theta)) dtheta.
inline double mapping_distance_lower_bound(
    const std::function<double(const Point&, const Point&)>& d_N, const LoopPoint& f0,
    const LoopPoint& f1, const QuadratureSpec& quad = {8, 32}) {
    const double integral =
        integrate([&](double theta) { return d_N(f0(theta), f1(theta)); }, 0.0, kTwoPi, quad);
    return integral / std::sqrt(kTwoPi);
}

// closed-form chart distance for single-chart Euclidean targets
inline std::function<double(const Point&, const Point&)> euclidean_point_distance() {
    return [](const Point& p, const Point& q) { return dist(p.coords, q.coords); };
}

// Length of a path in the mapping space, the path given as a mapping plot with
// a 1-dimensional parameter domain containing [t0, t1].
inline double loop_path_length(const DiffeoSpace& N, const WeakMetric& g_N, const MappingPlot& H,
                               double t0 = 0.0, double t1 = 1.0,
                               const QuadratureSpec& quad_t = {8, 16},
                               const QuadratureSpec& quad_theta = {8, 32}) {
    if (H.domain.dim != 1) throw UsageError("loop_path_length: path needs a 1-dimensional domain");
    return integrate(
        [&](double t) {
            const double e = mapping_metric_eval(N, g_N, H, {t}, {1.0}, {1.0}, quad_theta);
            return std::sqrt(std::max(0.0, e));
        },
        t0, t1, quad_t);
}

// Straight-line homotopy between two loops of a single-chart Euclidean target.
inline MappingPlot linear_homotopy(const DiffeoSpace& N, const LoopPoint& f0,
                                   const LoopPoint& f1) {
    MappingPlot H;
    H.domain = ChartDomain::full(1);
    const SpaceId sid = N.id;
    auto a = f0.value;
    auto b = f1.value;
    H.adjoint = [a, b, sid](const Vec& t, double theta) {
        const Point pa = a(theta), pb = b(theta);
        if (pa.plot != pb.plot)
            throw EvaluationError("linear_homotopy: loops live in different charts");
        Point p;
        p.space = sid;
        p.plot = pa.plot;
        p.coords = lerp(pa.coords, pb.coords, t[0]);
        return p;
    };
    H.coord_jacobian = [a, b](const Vec&, double theta) {
        const Vec d = sub(b(theta).coords, a(theta).coords);
        Mat j(d.size(), 1);
        for (std::size_t i = 0; i < d.size(); ++i) j(i, 0) = d[i];
        return j;
    };
    return H;
}

// Upper bound for the mapping-space pseudodistance through the straight-line
// homotopy; valid for single-chart Euclidean-type targets.
inline double mapping_distance_upper_linear(const DiffeoSpace& N, const WeakMetric& g_N,
                                            const LoopPoint& f0, const LoopPoint& f1,
                                            const QuadratureSpec& quad_t = {8, 16},
                                            const QuadratureSpec& quad_theta = {8, 32}) {
    return loop_path_length(N, g_N, linear_homotopy(N, f0, f1), 0.0, 1.0, quad_t, quad_theta);
}

// ---------------------------------------------------------------------------
// Named loop families into Euclidean targets (used by the CLI and tests)

inline MappingPlot coords_loop_family(const DiffeoSpace& N, std::size_t param_dim,
                                      std::function<Vec(const Vec& r, double theta)> coords,
                                      std::function<Mat(const Vec& r, double theta)> jac = {}) {
    MappingPlot mp;
    mp.domain = ChartDomain::full(param_dim);
    const SpaceId sid = N.id;
    mp.adjoint = [coords, sid](const Vec& r, double theta) {
        return Point{sid, 0, coords(r, theta), {}};
    };
    mp.coord_jacobian = std::move(jac);
    return mp;
}

}  // namespace riemdiff
