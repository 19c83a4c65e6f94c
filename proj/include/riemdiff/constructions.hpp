#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "riemdiff/metric.hpp"

namespace riemdiff {

// A space together with its weak Riemannian metric. The space sits behind a
// shared_ptr so metric closures built by the constructors can capture it.
struct MetricSpace {
    std::shared_ptr<const DiffeoSpace> space_ptr;
    WeakMetric metric;

    const DiffeoSpace& space() const { return *space_ptr; }
};

namespace detail {

inline Plot tagged_plot(SpaceId sid, int index, ChartDomain dom) {
    Plot p;
    p.domain = std::move(dom);
    p.value = [sid, index](const Vec& r) { return Point{sid, index, r, {}}; };
    const std::size_t n = p.domain.dim;
    p.coord_jacobian = [n](const Vec&) { return Mat::identity(n); };
    return p;
}

// deterministic anchors in a chart domain; for finite box edges the samples
// press within `scale` of the boundary, which is what the distance solver's
// refinement levels shrink
inline std::vector<Vec> domain_anchor_coords(const ChartDomain& dom, double scale, int count) {
    if (dom.dim == 0) return {Vec{}};
    std::vector<std::vector<double>> axes(dom.dim);
    for (std::size_t i = 0; i < dom.dim; ++i) {
        const Interval& iv = dom.box[i];
        auto [a, b] = iv.window(4.0);
        std::vector<double>& xs = axes[i];
        if (std::isfinite(iv.lo)) {
            xs.push_back(iv.lo + scale);
            xs.push_back(iv.lo + 2.0 * scale);
        }
        if (std::isfinite(iv.hi)) {
            xs.push_back(iv.hi - scale);
            xs.push_back(iv.hi - 2.0 * scale);
        }
        xs.push_back(0.5 * (a + b));
        xs.push_back(a + 0.25 * (b - a));
        xs.push_back(a + 0.75 * (b - a));
        std::vector<double> kept;
        for (double x : xs) {
            if (!iv.contains(x)) continue;
            bool dup = false;
            for (double y : kept) dup = dup || std::fabs(x - y) < 1e-12;
            if (!dup) kept.push_back(x);
        }
        axes[i] = kept;
    }
    std::vector<Vec> out;
    Vec cur(dom.dim);
    std::function<void(std::size_t)> rec = [&](std::size_t axis) {
        if (static_cast<int>(out.size()) >= count) return;
        if (axis == dom.dim) {
            if (dom.contains(cur)) out.push_back(cur);
            return;
        }
        for (double x : axes[axis]) {
            cur[axis] = x;
            rec(axis + 1);
        }
    };
    rec(0);
    return out;
}

inline Vec domain_center(const ChartDomain& dom) {
    Vec c(dom.dim);
    for (std::size_t i = 0; i < dom.dim; ++i) {
        auto [a, b] = dom.box[i].window(1.0);
        c[i] = 0.5 * (a + b);
    }
    return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Euclidean spaces

inline MetricSpace euclidean(std::size_t n) {
    auto sp = std::make_shared<DiffeoSpace>();
    sp->id = next_space_id();
    sp->name = "R^" + std::to_string(n);
    sp->family.push_back(detail::tagged_plot(sp->id, 0, ChartDomain::full(n)));
    MetricSpace ms;
    ms.space_ptr = sp;
    ms.metric.space = sp->id;
    ms.metric.tensor.push_back(euclidean_tensor());
    return ms;
}

inline MetricSpace euclidean(std::size_t n, std::function<Mat(const Vec&)> tensor_field) {
    MetricSpace ms = euclidean(n);
    Rng rng(7);
    for (int s = 0; s < 32; ++s) {
        const Vec r = rng.vec_uniform(n, -2.0, 2.0);
        const Mat a = tensor_field(r);
        if (a.rows != n || a.cols != n)
            throw ConstructionError("euclidean: tensor field has wrong shape");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (std::fabs(a(i, j) - a(j, i)) > 1e-12 * std::max(1.0, a.max_abs()))
                    throw ConstructionError("euclidean: tensor field not symmetric at a sample");
    }
    ms.metric.tensor[0] = matrix_field_tensor(std::move(tensor_field));
    return ms;
}

inline MetricSpace euclidean(std::size_t n, const Mat& tensor) {
    return euclidean(n, [tensor](const Vec&) { return tensor; });
}

inline MetricSpace interval_space(double lo, double hi) {
    auto sp = std::make_shared<DiffeoSpace>();
    sp->id = next_space_id();
    std::ostringstream os;
    os << "(" << lo << "," << hi << ")";
    sp->name = os.str();
    sp->family.push_back(detail::tagged_plot(sp->id, 0, interval_domain(lo, hi)));
    MetricSpace ms;
    ms.space_ptr = sp;
    ms.metric.space = sp->id;
    ms.metric.tensor.push_back(euclidean_tensor());
    return ms;
}

inline MetricSpace point_space() {
    auto sp = std::make_shared<DiffeoSpace>();
    sp->id = next_space_id();
    sp->name = "pt";
    sp->family.push_back(detail::tagged_plot(sp->id, 0, point_domain()));
    MetricSpace ms;
    ms.space_ptr = sp;
    ms.metric.space = sp->id;
    ms.metric.tensor.push_back([](const Vec&, const Vec&, const Vec&) { return 0.0; });
    return ms;
}

// ---------------------------------------------------------------------------
// Warped products

// Positive smooth function on X given plot-wise.
struct WarpSpec {
    std::vector<std::function<double(const Vec&)>> f_per_plot;

    static WarpSpec constant(double c, std::size_t n_plots) {
        WarpSpec w;
        for (std::size_t i = 0; i < n_plots; ++i)
            w.f_per_plot.push_back([c](const Vec&) { return c; });
        return w;
    }
};

inline MetricSpace warped_product(const MetricSpace& X, const MetricSpace& Y, const WarpSpec& f,
                                  const std::string& name = "") {
    const DiffeoSpace &sx = X.space(), &sy = Y.space();
    if (f.f_per_plot.size() != sx.family.size())
        throw ConstructionError("warped_product: warp function must cover every plot of X");
    // positivity on a sample grid
    for (std::size_t i = 0; i < sx.family.size(); ++i)
        for (const Vec& r : sx.family[i].domain.grid(9, 2.0))
            if (!(f.f_per_plot[i](r) > 0.0)) {
                std::ostringstream os;
                os << "warped_product: warp function not positive at plot " << i << " point "
                   << Point{sx.id, static_cast<int>(i), r, {}}.describe();
                throw ConstructionError(os.str());
            }
    // plot-wise values must agree across registered chart transitions
    for (const auto& rule : sx.glue) {
        for (const Vec& a : (rule.anchors ? rule.anchors(0.125, 8)
                                          : std::vector<Vec>{})) {
            if (!rule.region_a(a)) continue;
            const Vec b = rule.transfer.value(a);
            const double fa = f.f_per_plot[static_cast<std::size_t>(rule.plot_a)](a);
            const double fb = f.f_per_plot[static_cast<std::size_t>(rule.plot_b)](b);
            if (std::fabs(fa - fb) > 1e-9 * std::max(1.0, std::fabs(fa)))
                throw ConstructionError("warped_product: warp function disagrees on a glued overlap");
        }
    }

    auto sp = std::make_shared<DiffeoSpace>();
    sp->id = next_space_id();
    sp->name = name.empty() ? sx.name + "x_f" + sy.name : name;
    sp->eps_eq = std::min(sx.eps_eq, sy.eps_eq);
    const std::size_t nx = sx.family.size(), ny = sy.family.size();
    auto pair_index = [ny](std::size_t i, std::size_t j) { return static_cast<int>(i * ny + j); };

    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            ChartDomain dom;
            dom.dim = sx.family[i].domain.dim + sy.family[j].domain.dim;
            dom.box = sx.family[i].domain.box;
            dom.box.insert(dom.box.end(), sy.family[j].domain.box.begin(),
                           sy.family[j].domain.box.end());
            const auto mx = sx.family[i].domain.membership;
            const auto my = sy.family[j].domain.membership;
            const std::size_t dx = sx.family[i].domain.dim;
            if (mx || my) {
                dom.membership = [mx, my, dx](const Vec& r) {
                    const Vec rx(r.begin(), r.begin() + dx);
                    const Vec ry(r.begin() + dx, r.end());
                    return (!mx || mx(rx)) && (!my || my(ry));
                };
            }
            sp->family.push_back(detail::tagged_plot(sp->id, pair_index(i, j), std::move(dom)));
        }

    // product glue: X transitions act on the first block, Y transitions on the second
    auto lift_rule = [&](const GlueRule& rule, bool on_x, std::size_t other) {
        GlueRule out;
        const std::size_t da = on_x ? sx.family[static_cast<std::size_t>(rule.plot_a)].domain.dim
                                    : sy.family[static_cast<std::size_t>(rule.plot_a)].domain.dim;
        const ChartDomain other_dom =
            on_x ? sy.family[other].domain : sx.family[other].domain;
        out.plot_a = on_x ? pair_index(static_cast<std::size_t>(rule.plot_a), other)
                          : pair_index(other, static_cast<std::size_t>(rule.plot_a));
        out.plot_b = on_x ? pair_index(static_cast<std::size_t>(rule.plot_b), other)
                          : pair_index(other, static_cast<std::size_t>(rule.plot_b));
        const std::size_t dx_off = on_x ? 0 : sx.family[other].domain.dim;
        auto region = rule.region_a;
        out.region_a = [region, dx_off, da](const Vec& r) {
            const Vec block(r.begin() + dx_off, r.begin() + dx_off + da);
            return region(block);
        };
        ChartMap t;
        t.source = sp->family[static_cast<std::size_t>(out.plot_a)].domain;
        t.target = sp->family[static_cast<std::size_t>(out.plot_b)].domain;
        const ChartMap base = rule.transfer;
        t.value = [base, dx_off, da](const Vec& r) {
            const Vec block(r.begin() + dx_off, r.begin() + dx_off + da);
            const Vec mapped = base.value(block);
            Vec out_r(r.begin(), r.begin() + dx_off);
            out_r.insert(out_r.end(), mapped.begin(), mapped.end());
            out_r.insert(out_r.end(), r.begin() + dx_off + da, r.end());
            return out_r;
        };
        if (base.jacobian_fn) {
            const std::size_t total = t.source.dim;
            t.jacobian_fn = [base, dx_off, da, total](const Vec& r) {
                const Vec block(r.begin() + dx_off, r.begin() + dx_off + da);
                const Mat jb = base.jacobian_fn(block);
                Mat j(total - da + jb.rows, total);
                for (std::size_t i = 0; i < dx_off; ++i) j(i, i) = 1.0;
                for (std::size_t i = 0; i < jb.rows; ++i)
                    for (std::size_t k = 0; k < da; ++k) j(dx_off + i, dx_off + k) = jb(i, k);
                for (std::size_t i = dx_off + da; i < total; ++i)
                    j(i - da + jb.rows, i) = 1.0;
                return j;
            };
        }
        auto base_anchors = rule.anchors;
        const Vec other_center = detail::domain_center(other_dom);
        out.anchors = [base_anchors, other_center, dx_off](double scale, int count) {
            std::vector<Vec> out_a;
            if (!base_anchors) return out_a;
            for (const Vec& a : base_anchors(scale, count)) {
                Vec full;
                if (dx_off == 0) {
                    full = a;
                    full.insert(full.end(), other_center.begin(), other_center.end());
                } else {
                    full = other_center;
                    full.insert(full.end(), a.begin(), a.end());
                }
                out_a.push_back(std::move(full));
            }
            return out_a;
        };
        out.transfer = std::move(t);
        return out;
    };
    for (const auto& rule : sx.glue)
        for (std::size_t j = 0; j < ny; ++j) sp->glue.push_back(lift_rule(rule, true, j));
    for (const auto& rule : sy.glue)
        for (std::size_t i = 0; i < nx; ++i) sp->glue.push_back(lift_rule(rule, false, i));

    MetricSpace ms;
    ms.space_ptr = sp;
    ms.metric.space = sp->id;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t dx = sx.family[i].domain.dim;
            auto gx = X.metric.tensor[i];
            auto gy = Y.metric.tensor[j];
            auto fi = f.f_per_plot[i];
            ms.metric.tensor.push_back(
                [gx, gy, fi, dx](const Vec& r, const Vec& v, const Vec& w) {
                    const Vec rx(r.begin(), r.begin() + dx), ry(r.begin() + dx, r.end());
                    const Vec vx(v.begin(), v.begin() + dx), vy(v.begin() + dx, v.end());
                    const Vec wx(w.begin(), w.begin() + dx), wy(w.begin() + dx, w.end());
                    return gx(rx, vx, wx) + fi(rx) * gy(ry, vy, wy);
                });
        }
    return ms;
}

inline MetricSpace product(const MetricSpace& X, const MetricSpace& Y,
                           const std::string& name = "") {
    return warped_product(X, Y, WarpSpec::constant(1.0, X.space().family.size()),
                          name.empty() ? X.space().name + "x" + Y.space().name : name);
}

// ---------------------------------------------------------------------------
// Adjunction (gluing) along two inductions

struct GlueSpec {
    std::shared_ptr<const DiffeoSpace> A;
    SmoothMap into_x;  // induction A -> X
    SmoothMap into_y;  // induction A -> Y
    double tol_compat = 1e-9;
    int compat_samples = 64;
};

struct AdjunctionResult {
    MetricSpace glued;
    int x_plot_offset = 0;  // X's plots keep their indices
    int y_plot_offset = 0;  // Y's plot k becomes k + y_plot_offset
};

inline AdjunctionResult adjunction(const MetricSpace& X, const MetricSpace& Y,
                                   const GlueSpec& spec, const std::string& name = "") {
    const DiffeoSpace &sx = X.space(), &sy = Y.space(), &sa = *spec.A;

    // assumption (I): i*g_X = j*g_Y on a sample grid of tangent doubles of A
    {
        const WeakMetric pulled_x = pullback(spec.into_x, sa, sx, X.metric);
        const WeakMetric pulled_y = pullback(spec.into_y, sa, sy, Y.metric);
        Rng rng(11);
        double worst = 0.0;
        std::string worst_where;
        for (std::size_t p = 0; p < sa.family.size(); ++p) {
            const std::size_t n = sa.family[p].domain.dim;
            auto probe = [&](const TangentDouble& t) {
                const double dev = std::fabs(pulled_x.eval(t) - pulled_y.eval(t));
                if (dev > worst) {
                    worst = dev;
                    std::ostringstream os;
                    os << "plot " << p << " at " << Point{sa.id, t.plot, t.r, {}}.describe();
                    worst_where = os.str();
                }
            };
            // deterministic axis probes first, then random tangent doubles
            for (const Vec& r : sa.family[p].domain.grid(3, 2.0))
                for (std::size_t k = 0; k < n; ++k)
                    probe({static_cast<int>(p), r, unit_axis(n, k), unit_axis(n, k)});
            for (int s = 0; s < spec.compat_samples; ++s) {
                Vec r;
                try {
                    r = sa.family[p].domain.sample(rng, 2.0);
                } catch (const DomainBoundsError&) {
                    continue;
                }
                probe({static_cast<int>(p), r, rng.vec_uniform(n, -1.0, 1.0),
                       rng.vec_uniform(n, -1.0, 1.0)});
            }
        }
        if (worst > spec.tol_compat) {
            std::ostringstream os;
            os << "adjunction: metric compatibility i*g_X = j*g_Y fails, deviation " << worst
               << " at " << worst_where;
            throw ConstructionError(os.str());
        }
    }

    auto sp = std::make_shared<DiffeoSpace>();
    sp->id = next_space_id();
    sp->name = name.empty() ? sx.name + "+_A" + sy.name : name;
    sp->eps_eq = std::min(sx.eps_eq, sy.eps_eq);
    const int nx = static_cast<int>(sx.family.size());
    for (std::size_t k = 0; k < sx.family.size(); ++k)
        sp->family.push_back(detail::tagged_plot(sp->id, static_cast<int>(k), sx.family[k].domain));
    for (std::size_t k = 0; k < sy.family.size(); ++k)
        sp->family.push_back(
            detail::tagged_plot(sp->id, nx + static_cast<int>(k), sy.family[k].domain));

    for (const auto& rule : sx.glue) sp->glue.push_back(rule);
    for (const auto& rule : sy.glue) {
        GlueRule shifted = rule;
        shifted.plot_a += nx;
        shifted.plot_b += nx;
        sp->glue.push_back(shifted);
    }

    // cross identifications derived from the inductions, one pair of directed
    // rules per generating plot of A
    const double tol = sp->eps_eq;
    for (std::size_t p = 0; p < sa.family.size(); ++p) {
        const ChartDomain a_dom = sa.family[p].domain;
        const Vec base = a_dom.dim == 0 ? Vec{} : detail::domain_center(a_dom);
        const Factorization fx =
            factorize_map(spec.into_x, sa, sx, static_cast<int>(p), base);
        const Factorization fy =
            factorize_map(spec.into_y, sa, sy, static_cast<int>(p), base);
        // induction spot-check: the chart embeddings invert on samples
        {
            Rng rng(23);
            for (int s = 0; s < 8; ++s) {
                Vec r;
                try {
                    r = a_dom.sample(rng, 2.0);
                } catch (const DomainBoundsError&) {
                    break;
                }
                auto back = invert_chart_map(fx.h, fx.h.value(r), tol * 10.0);
                if (!back || dist(*back, r) > 1e-6)
                    throw ConstructionError("adjunction: i does not behave as an induction on plot " +
                                            std::to_string(p));
            }
        }
        auto make_cross = [&](const Factorization& from, const Factorization& to, int plot_from,
                              int plot_to) {
            GlueRule rule;
            rule.plot_a = plot_from;
            rule.plot_b = plot_to;
            const ChartMap h_from = from.h;
            const ChartMap h_to = to.h;
            rule.region_a = [h_from, a_dom, tol](const Vec& x) {
                auto s = invert_chart_map(h_from, x, tol);
                return s.has_value() && a_dom.contains(*s);
            };
            ChartMap t;
            t.source = h_from.target;
            t.target = h_to.target;
            t.value = [h_from, h_to, tol](const Vec& x) {
                auto s = invert_chart_map(h_from, x, tol);
                if (!s) throw EvaluationError("adjunction transfer applied outside glue region");
                return h_to.value(*s);
            };
            if (h_from.jacobian_fn && h_to.jacobian_fn) {
                t.jacobian_fn = [h_from, h_to, tol](const Vec& x) {
                    auto s = invert_chart_map(h_from, x, tol);
                    if (!s) throw EvaluationError("adjunction transfer applied outside glue region");
                    const Mat jf = h_from.jacobian_fn(*s);  // chart dim x dim A
                    const Mat jt = h_to.jacobian_fn(*s);
                    // d(transfer)/dx = J_to * pinv(J_from)
                    Mat jtj = jf.transposed().mul(jf);
                    for (std::size_t i = 0; i < jtj.rows; ++i) jtj(i, i) += 1e-14;
                    Mat pinv(jf.cols, jf.rows);
                    for (std::size_t c = 0; c < jf.rows; ++c) {
                        Vec col(jf.rows, 0.0);
                        col[c] = 1.0;
                        const Vec sol = solve_linear(jtj, jf.transposed().apply(col));
                        for (std::size_t i = 0; i < jf.cols; ++i) pinv(i, c) = sol[i];
                    }
                    return jt.mul(pinv);
                };
            }
            rule.transfer = std::move(t);
            rule.anchors = [h_from, a_dom](double scale, int count) {
                std::vector<Vec> out;
                for (const Vec& r : detail::domain_anchor_coords(a_dom, scale, count))
                    out.push_back(h_from.value(r));
                return out;
            };
            return rule;
        };
        sp->glue.push_back(make_cross(fx, fy, fx.target_plot, nx + fy.target_plot));
        sp->glue.push_back(make_cross(fy, fx, nx + fy.target_plot, fx.target_plot));
    }

    AdjunctionResult result;
    result.glued.space_ptr = sp;
    result.glued.metric.space = sp->id;
    result.y_plot_offset = nx;
    for (const auto& t : X.metric.tensor) result.glued.metric.tensor.push_back(t);
    for (const auto& t : Y.metric.tensor) result.glued.metric.tensor.push_back(t);
    return result;
}

// ---------------------------------------------------------------------------
// Subspaces along declared inductions

// A generating plot of the subspace, described through its embedding into one
// chart of the ambient space.
struct SubPlotSpec {
    ChartDomain domain;
    int ambient_plot = 0;
    ChartMap embed;  // domain -> ambient chart coordinates
};

struct SubspaceResult {
    MetricSpace sub;
    SmoothMap inclusion;
};

inline SubspaceResult subspace(const MetricSpace& X, const std::vector<SubPlotSpec>& plots,
                               const std::string& name = "") {
    auto sp = std::make_shared<DiffeoSpace>();
    sp->id = next_space_id();
    sp->name = name.empty() ? "sub(" + X.space().name + ")" : name;
    sp->eps_eq = X.space().eps_eq;
    for (std::size_t k = 0; k < plots.size(); ++k)
        sp->family.push_back(detail::tagged_plot(sp->id, static_cast<int>(k), plots[k].domain));

    SmoothMap inclusion;
    inclusion.source = sp->id;
    inclusion.target = X.space().id;
    inclusion.name = "inclusion:" + sp->name;
    std::vector<SubPlotSpec> specs = plots;
    inclusion.factorize = [specs](int plot_index, const Vec&) -> std::optional<Factorization> {
        if (plot_index < 0 || static_cast<std::size_t>(plot_index) >= specs.size())
            return std::nullopt;
        Factorization f;
        f.radius = kInf;
        f.target_plot = specs[static_cast<std::size_t>(plot_index)].ambient_plot;
        f.h = specs[static_cast<std::size_t>(plot_index)].embed;
        return f;
    };

    SubspaceResult res;
    res.sub.space_ptr = sp;
    res.sub.metric = pullback_owned(inclusion, sp, X.space_ptr, X.metric);
    res.inclusion = inclusion;
    return res;
}

// ---------------------------------------------------------------------------
// Sums (disjoint unions)

inline MetricSpace sum(const std::vector<MetricSpace>& parts, const std::string& name = "") {
    auto sp = std::make_shared<DiffeoSpace>();
    sp->id = next_space_id();
    sp->name = name.empty() ? "sum" : name;
    MetricSpace ms;
    ms.metric.space = 0;  // set below
    int offset = 0;
    for (const auto& part : parts) {
        const DiffeoSpace& s = part.space();
        sp->eps_eq = std::min(sp->eps_eq, s.eps_eq);
        for (std::size_t k = 0; k < s.family.size(); ++k)
            sp->family.push_back(
                detail::tagged_plot(sp->id, offset + static_cast<int>(k), s.family[k].domain));
        for (const auto& rule : s.glue) {
            GlueRule shifted = rule;
            shifted.plot_a += offset;
            shifted.plot_b += offset;
            sp->glue.push_back(shifted);
        }
        for (const auto& t : part.metric.tensor) ms.metric.tensor.push_back(t);
        offset += static_cast<int>(s.family.size());
    }
    ms.space_ptr = sp;
    ms.metric.space = sp->id;
    return ms;
}

// ---------------------------------------------------------------------------
// Named glued-line examples (two charts glued along an interval or a point)

// Builds left ⨿_A right where A is the open interval (a, b) of the first
// coordinate (a == b glues at the single point a). The right factor may have
// higher dimension; the interval then embeds as x -> (x, 0, ...).
inline AdjunctionResult glued_lines(double a, double b, std::size_t right_dim = 1,
                                    const std::string& name = "") {
    MetricSpace left = euclidean(1);
    MetricSpace right = euclidean(right_dim);
    const bool is_point = (a == b);
    MetricSpace A = is_point ? point_space() : interval_space(a, b);

    GlueSpec spec;
    spec.A = A.space_ptr;

    const ChartDomain a_dom = A.space().plot(0).domain;
    const ChartDomain left_dom = left.space().plot(0).domain;
    const ChartDomain right_dom = right.space().plot(0).domain;

    ChartMap hx, hy;
    if (is_point) {
        hx = constant_chart_map(a_dom, left_dom, {a});
        Vec padded(right_dim, 0.0);
        padded[0] = a;
        hy = constant_chart_map(a_dom, right_dom, padded);
    } else {
        hx.source = a_dom;
        hx.target = left_dom;
        hx.value = [](const Vec& r) { return r; };
        hx.jacobian_fn = [](const Vec&) { return Mat::identity(1); };
        hx.inverse = [a, b](const Vec& x) -> std::optional<Vec> {
            if (x[0] > a && x[0] < b) return Vec{x[0]};
            return std::nullopt;
        };
        hy.source = a_dom;
        hy.target = right_dom;
        hy.value = [right_dim](const Vec& r) {
            Vec out(right_dim, 0.0);
            out[0] = r[0];
            return out;
        };
        hy.jacobian_fn = [right_dim](const Vec&) {
            Mat j(right_dim, 1);
            j(0, 0) = 1.0;
            return j;
        };
        hy.inverse = [a, b, right_dim](const Vec& x) -> std::optional<Vec> {
            for (std::size_t i = 1; i < right_dim; ++i)
                if (std::fabs(x[i]) > 1e-9) return std::nullopt;
            if (x[0] > a && x[0] < b) return Vec{x[0]};
            return std::nullopt;
        };
    }

    spec.into_x.source = A.space().id;
    spec.into_x.target = left.space().id;
    spec.into_x.name = "i";
    spec.into_x.factorize = [hx](int, const Vec&) -> std::optional<Factorization> {
        return Factorization{kInf, 0, hx};
    };
    spec.into_y.source = A.space().id;
    spec.into_y.target = right.space().id;
    spec.into_y.name = "j";
    spec.into_y.factorize = [hy](int, const Vec&) -> std::optional<Factorization> {
        return Factorization{kInf, 0, hy};
    };
    return adjunction(left, right, spec, name);
}

inline AdjunctionResult y_space() { return glued_lines(1.0, kInf, 1, "Y"); }
inline AdjunctionResult plus_space() { return glued_lines(0.0, 0.0, 1, "+"); }
inline AdjunctionResult m_space() { return glued_lines(1.0, kInf, 2, "M"); }

}  // namespace riemdiff
