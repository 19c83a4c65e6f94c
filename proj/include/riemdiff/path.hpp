#pragma once

#include <functional>
#include <sstream>
#include <vector>

#include "riemdiff/mapping.hpp"  // smoothstep helpers
#include "riemdiff/metric.hpp"
#include "riemdiff/quadrature.hpp"

namespace riemdiff {

// Clamped B-spline of degree min(3, n-1) on uniform interior knots over
// [0, 1]. Evaluation is allocation-free up to the returned vector; path
// quadrature hits these in its innermost loop.
namespace bspline {

constexpr std::size_t kMaxDim = 8;

inline int degree(std::size_t n_ctrl) { return static_cast<int>(std::min<std::size_t>(3, n_ctrl - 1)); }

inline int spans(std::size_t n_ctrl) { return static_cast<int>(n_ctrl) - degree(n_ctrl); }

inline double knot(int n_ctrl, int p, int i) {
    if (i <= p) return 0.0;
    if (i >= n_ctrl) return 1.0;
    return static_cast<double>(i - p) / (n_ctrl - p);
}

inline int find_span(int n_ctrl, int p, double t) {
    int k = p + static_cast<int>(t * (n_ctrl - p));
    if (k > n_ctrl - 1) k = n_ctrl - 1;
    while (k < n_ctrl - 1 && t >= knot(n_ctrl, p, k + 1)) ++k;
    while (k > p && t < knot(n_ctrl, p, k)) --k;
    return k;
}

inline Vec eval(const std::vector<Vec>& ctrl, double t) {
    const int n = static_cast<int>(ctrl.size());
    const int p = degree(ctrl.size());
    const std::size_t dim = ctrl.front().size();
    if (t <= 0.0) return ctrl.front();
    if (t >= 1.0) return ctrl.back();
    const int k = find_span(n, p, t);
    double d[4][kMaxDim];
    for (int j = 0; j <= p; ++j)
        for (std::size_t c = 0; c < dim; ++c)
            d[j][c] = ctrl[static_cast<std::size_t>(j + k - p)][c];
    for (int r = 1; r <= p; ++r)
        for (int j = p; j >= r; --j) {
            const int i = j + k - p;
            const double den = knot(n, p, i + p - r + 1) - knot(n, p, i);
            const double alpha = den > 0.0 ? (t - knot(n, p, i)) / den : 0.0;
            for (std::size_t c = 0; c < dim; ++c)
                d[j][c] = (1.0 - alpha) * d[j - 1][c] + alpha * d[j][c];
        }
    return Vec(d[p], d[p] + dim);
}

inline Vec deriv(const std::vector<Vec>& ctrl, double t) {
    const int n = static_cast<int>(ctrl.size());
    const int p = degree(ctrl.size());
    const std::size_t dim = ctrl.front().size();
    if (p == 0) return Vec(dim, 0.0);
    if (t < 0.0) t = 0.0;
    if (t >= 1.0) t = 1.0 - 1e-12;
    // derivative spline: degree p-1, control q_i = p (c_{i+1}-c_i)/(u_{i+p+1}-u_{i+1}),
    // knots with the outermost pair dropped: du_i = u_{i+1}
    const int nd = n - 1, pd = p - 1;
    auto dknot = [&](int i) { return knot(n, p, i + 1); };
    int k = pd;
    while (k < nd - 1 && t >= dknot(k + 1)) ++k;
    while (k > pd && t < dknot(k)) --k;
    double d[4][kMaxDim];
    for (int j = 0; j <= pd; ++j) {
        const int i = j + k - pd;
        const double den = knot(n, p, i + p + 1) - knot(n, p, i + 1);
        const double f = den > 0.0 ? p / den : 0.0;
        for (std::size_t c = 0; c < dim; ++c)
            d[j][c] = f * (ctrl[static_cast<std::size_t>(i + 1)][c] -
                           ctrl[static_cast<std::size_t>(i)][c]);
    }
    for (int r = 1; r <= pd; ++r)
        for (int j = pd; j >= r; --j) {
            const int i = j + k - pd;
            const double den = dknot(i + pd - r + 1) - dknot(i);
            const double alpha = den > 0.0 ? (t - dknot(i)) / den : 0.0;
            for (std::size_t c = 0; c < dim; ++c)
                d[j][c] = (1.0 - alpha) * d[j - 1][c] + alpha * d[j][c];
        }
    return Vec(d[pd], d[pd] + dim);
}

}  // namespace bspline

// A chart-level curve piece of a path: either a control polygon (B-spline) or
// an arbitrary closure with derivative access.
struct PathSegment {
    int plot = 0;
    std::vector<Vec> control;                  // B-spline control points, >= 2
    std::function<Vec(double)> curve_fn;       // overrides control when set
    std::function<Vec(double)> derivative_fn;  // analytic derivative for closures
    double fd_step = 1e-6;

    Vec at(double t) const {
        if (curve_fn) return curve_fn(t);
        return bspline::eval(control, t);
    }

    Vec deriv(double t) const {
        if (curve_fn) {
            if (derivative_fn) return derivative_fn(t);
            const double h = fd_step;
            double a = t - h, b = t + h;
            if (a < 0.0) a = 0.0;
            if (b > 1.0) b = 1.0;
            return scale(1.0 / (b - a), sub(curve_fn(b), curve_fn(a)));
        }
        return bspline::deriv(control, t);
    }

    int quad_spans() const { return curve_fn ? 0 : bspline::spans(control.size()); }

    Vec start() const { return at(0.0); }
    Vec end() const { return at(1.0); }
};

inline PathSegment chord_segment(int plot, const Vec& from, const Vec& to, int interior_points) {
    PathSegment s;
    s.plot = plot;
    const int n = interior_points + 2;
    for (int i = 0; i < n; ++i) s.control.push_back(lerp(from, to, static_cast<double>(i) / (n - 1)));
    return s;
}

struct PiecewisePath {
    std::vector<PathSegment> segments;
};

inline PiecewisePath reversed(const PiecewisePath& path) {
    PiecewisePath out;
    for (auto it = path.segments.rbegin(); it != path.segments.rend(); ++it) {
        PathSegment s = *it;
        if (s.curve_fn) {
            auto f = s.curve_fn;
            s.curve_fn = [f](double t) { return f(1.0 - t); };
            if (s.derivative_fn) {
                auto df = s.derivative_fn;
                s.derivative_fn = [df](double t) { return scale(-1.0, df(1.0 - t)); };
            }
        } else {
            std::reverse(s.control.begin(), s.control.end());
        }
        out.segments.push_back(std::move(s));
    }
    return out;
}

inline PiecewisePath concatenated(const PiecewisePath& a, const PiecewisePath& b) {
    PiecewisePath out = a;
    out.segments.insert(out.segments.end(), b.segments.begin(), b.segments.end());
    return out;
}

// Joint matching, domain membership at sampled parameters, and declared
// endpoints.
inline void validate_path(const DiffeoSpace& space, const PiecewisePath& path, const Point& from,
                          const Point& to, int samples_per_segment = 17) {
    if (path.segments.empty()) throw ValidationError("path has no segments");
    for (std::size_t k = 0; k < path.segments.size(); ++k) {
        const PathSegment& seg = path.segments[k];
        const ChartDomain& dom = space.plot(seg.plot).domain;
        for (int s = 0; s < samples_per_segment; ++s) {
            const double t = static_cast<double>(s) / (samples_per_segment - 1);
            if (!dom.contains(seg.at(t))) {
                std::ostringstream os;
                os << "path segment " << k << " leaves chart " << seg.plot << " at t=" << t;
                throw ValidationError(os.str());
            }
        }
        if (k + 1 < path.segments.size()) {
            const Point a = space.eval(seg.plot, seg.end());
            const Point b =
                space.eval(path.segments[k + 1].plot, path.segments[k + 1].start());
            if (!space.equal(a, b)) {
                std::ostringstream os;
                os << "path joint " << k << " broken: " << a.describe() << " vs " << b.describe();
                throw ValidationError(os.str());
            }
        }
    }
    if (!space.equal(space.eval(path.segments.front().plot, path.segments.front().start()), from))
        throw ValidationError("path does not start at the declared point");
    if (!space.equal(space.eval(path.segments.back().plot, path.segments.back().end()), to))
        throw ValidationError("path does not end at the declared point");
}

// l(gamma) = sum_k \int sqrt(g(P_k)_{c(t)}(c', c')) dt, Gauss-Legendre per
// knot span (closures use `closure_panels` panels over [0, 1]).
inline double path_length(const WeakMetric& g, const PiecewisePath& path,
                          const QuadratureSpec& per_span = {8, 2}, int closure_panels = 32) {
    double total = 0.0;
    for (const PathSegment& seg : path.segments) {
        auto integrand = [&](double t) {
            const Vec c = seg.at(t);
            const Vec d = seg.deriv(t);
            return std::sqrt(std::max(0.0, g.eval({seg.plot, c, d, d})));
        };
        const int spans = seg.quad_spans();
        if (spans <= 0) {
            total += integrate(integrand, 0.0, 1.0, {per_span.order, closure_panels});
        } else {
            for (int s = 0; s < spans; ++s)
                total += integrate(integrand, static_cast<double>(s) / spans,
                                   static_cast<double>(s + 1) / spans, per_span);
        }
    }
    return total;
}

inline double segment_length(const WeakMetric& g, const PathSegment& seg,
                             const QuadratureSpec& per_span = {8, 2}, int closure_panels = 32) {
    PiecewisePath p;
    p.segments.push_back(seg);
    return path_length(g, p, per_span, closure_panels);
}

// Smooth time reparametrization with vanishing derivatives at segment ends, so
// chart joints carry no corner. Length is unchanged up to quadrature noise.
inline PiecewisePath smooth_reparametrized(const PiecewisePath& path) {
    PiecewisePath out;
    for (const PathSegment& seg : path.segments) {
        PathSegment s;
        s.plot = seg.plot;
        PathSegment base = seg;
        s.curve_fn = [base](double t) { return base.at(smoothstep01(t)); };
        s.derivative_fn = [base](double t) {
            return scale(smoothstep01_deriv(t), base.deriv(smoothstep01(t)));
        };
        out.segments.push_back(std::move(s));
    }
    return out;
}

}  // namespace riemdiff
