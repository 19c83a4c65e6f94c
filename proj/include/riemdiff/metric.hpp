#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <vector>

#include "riemdiff/space.hpp"

namespace riemdiff {

using TensorField = std::function<double(const Vec& r, const Vec& v, const Vec& w)>;

// Weak Riemannian metric: a symmetric positive 2-tensor field per generating
// plot, natural under chart precomposition. Evaluation symmetrizes so the
// returned form is symmetric bit-for-bit.
struct WeakMetric {
    SpaceId space = 0;
    std::vector<TensorField> tensor;

    double eval(const TangentDouble& t) const {
        if (t.plot < 0 || static_cast<std::size_t>(t.plot) >= tensor.size())
            throw UsageError("metric_eval: unknown plot index " + std::to_string(t.plot));
        const TensorField& g = tensor[static_cast<std::size_t>(t.plot)];
        return 0.5 * (g(t.r, t.v, t.w) + g(t.r, t.w, t.v));
    }
};

inline double metric_eval(const WeakMetric& g, const TangentDouble& t) { return g.eval(t); }

inline TensorField constant_tensor(Mat a) {
    return [a](const Vec&, const Vec& v, const Vec& w) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < a.cols; ++j) s += v[i] * a(i, j) * w[j];
        return s;
    };
}

inline TensorField euclidean_tensor() {
    return [](const Vec&, const Vec& v, const Vec& w) { return dot(v, w); };
}

inline TensorField matrix_field_tensor(std::function<Mat(const Vec&)> field) {
    return [field](const Vec& r, const Vec& v, const Vec& w) {
        const Mat a = field(r);
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < a.cols; ++j) s += v[i] * a(i, j) * w[j];
        return s;
    };
}

// Gram matrix of g over plot `plot_index` at r, on the standard basis,
// symmetrized as (A + A^t)/2 before any eigenvalue work.
inline Mat gram_matrix(const WeakMetric& g, const DiffeoSpace& space, int plot_index,
                       const Vec& r) {
    const std::size_t n = space.plot(plot_index).domain.dim;
    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = g.eval({plot_index, r, unit_axis(n, i), unit_axis(n, j)});
    return symmetrized(a);
}

// ---------------------------------------------------------------------------
// Pullback

namespace detail {

struct FactorizationCache {
    struct Entry {
        Vec center;
        double radius;
        Factorization fact;
    };
    std::mutex mtx;
    std::vector<std::vector<Entry>> per_plot;

    std::optional<Factorization> lookup(int plot, const Vec& r) {
        std::lock_guard<std::mutex> lock(mtx);
        if (static_cast<std::size_t>(plot) >= per_plot.size()) return std::nullopt;
        for (const auto& e : per_plot[static_cast<std::size_t>(plot)]) {
            if (!std::isfinite(e.radius)) return e.fact;
            if (dist(e.center, r) < 0.9 * e.radius) return e.fact;
        }
        return std::nullopt;
    }

    void insert(int plot, const Vec& r, const Factorization& f) {
        std::lock_guard<std::mutex> lock(mtx);
        if (static_cast<std::size_t>(plot) >= per_plot.size())
            per_plot.resize(static_cast<std::size_t>(plot) + 1);
        auto& entries = per_plot[static_cast<std::size_t>(plot)];
        if (entries.size() < 512) entries.push_back({r, f.radius, f});
    }
};

}  // namespace detail

// (phi^* g)(P)_r(v, w) = g(Q)_{h(r)}(Jh v, Jh w) through the local
// factorization phi o P = Q o h. Factorizations are cached per (plot, ball).
inline WeakMetric pullback(const SmoothMap& phi, const DiffeoSpace& source,
                           const DiffeoSpace& target, const WeakMetric& g_target) {
    if (g_target.space != target.id) throw UsageError("pullback: metric does not live on target");
    if (phi.source != source.id || phi.target != target.id)
        throw UsageError("pullback: map does not connect the given spaces");
    auto cache = std::make_shared<detail::FactorizationCache>();
    WeakMetric out;
    out.space = source.id;
    for (std::size_t p = 0; p < source.family.size(); ++p) {
        const int plot_index = static_cast<int>(p);
        out.tensor.push_back([phi, &source, &target, g_target, cache, plot_index](
                                 const Vec& r, const Vec& v, const Vec& w) -> double {
            auto fact = cache->lookup(plot_index, r);
            if (!fact) {
                fact = factorize_map(phi, source, target, plot_index, r);
                cache->insert(plot_index, r, *fact);
            }
            const Mat j = fact->h.jacobian(r);
            return g_target.eval({fact->target_plot, fact->h.value(r), j.apply(v), j.apply(w)});
        });
    }
    return out;
}

// Same, but with the spaces captured by value so the metric can outlive the
// construction scope (used by the builders).
inline WeakMetric pullback_owned(const SmoothMap& phi, std::shared_ptr<const DiffeoSpace> source,
                                 std::shared_ptr<const DiffeoSpace> target,
                                 const WeakMetric& g_target) {
    if (g_target.space != target->id) throw UsageError("pullback: metric does not live on target");
    auto cache = std::make_shared<detail::FactorizationCache>();
    WeakMetric out;
    out.space = source->id;
    for (std::size_t p = 0; p < source->family.size(); ++p) {
        const int plot_index = static_cast<int>(p);
        out.tensor.push_back([phi, source, target, g_target, cache, plot_index](
                                 const Vec& r, const Vec& v, const Vec& w) -> double {
            auto fact = cache->lookup(plot_index, r);
            if (!fact) {
                fact = factorize_map(phi, *source, *target, plot_index, r);
                cache->insert(plot_index, r, *fact);
            }
            const Mat j = fact->h.jacobian(r);
            return g_target.eval({fact->target_plot, fact->h.value(r), j.apply(v), j.apply(w)});
        });
    }
    return out;
}

// ---------------------------------------------------------------------------
// Naturality and isometry checking

// One naturality probe: a tensor assignment on a chart P together with a
// chart map f into generating plot Q such that Q o f = P pointwise.
struct NaturalityCase {
    int plot_p = -1;        // >= 0 when P is itself a generating plot
    TensorField tensor_p;   // defaults to the metric's tensor of plot_p
    ChartDomain domain_p;
    ChartMap f;
    int plot_q = 0;
};

struct DeviationReport {
    double max_deviation = 0.0;
    bool passed = true;
    std::string worst;

    void record(double dev, const std::string& where) {
        if (dev > max_deviation) {
            max_deviation = dev;
            worst = where;
        }
    }
};

inline NaturalityCase naturality_case_from_glue(const DiffeoSpace& space, const GlueRule& rule) {
    NaturalityCase c;
    c.plot_p = rule.plot_a;
    c.domain_p = space.plot(rule.plot_a).domain;
    if (rule.region_a) {
        ChartDomain restricted = c.domain_p;
        auto region = rule.region_a;
        auto prev = restricted.membership;
        restricted.membership = [region, prev](const Vec& r) {
            return region(r) && (!prev || prev(r));
        };
        c.domain_p = restricted;
    }
    c.f = rule.transfer;
    c.plot_q = rule.plot_b;
    return c;
}

inline DeviationReport check_naturality(const WeakMetric& g, const DiffeoSpace& space,
                                        const std::vector<NaturalityCase>& cases, int samples,
                                        double tol, std::uint64_t seed = 0) {
    if (g.space != space.id) throw UsageError("check_naturality: metric/space mismatch");
    DeviationReport report;
    Rng rng(seed);
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto& c = cases[ci];
        TensorField tp = c.tensor_p;
        if (!tp) {
            if (c.plot_p < 0)
                throw UsageError("check_naturality: case needs tensor_p or a plot index");
            tp = g.tensor[static_cast<std::size_t>(c.plot_p)];
        }
        for (int s = 0; s < samples; ++s) {
            Vec r;
            try {
                r = c.domain_p.sample(rng, 2.0);
            } catch (const DomainBoundsError&) {
                continue;
            }
            if (!c.f.source.contains(r)) continue;
            const Vec fr = c.f.value(r);
            if (!space.plot(c.plot_q).domain.contains(fr)) continue;
            if (c.plot_p >= 0) {
                const Point lhs = space.eval(c.plot_p, r);
                const Point rhs = space.eval(c.plot_q, fr);
                if (!space.equal(lhs, rhs))
                    throw UsageError("check_naturality: precondition Q∘f = P fails at sample " +
                                     lhs.describe());
            }
            Mat jf;
            try {
                jf = c.f.jacobian(r);
            } catch (const BoundaryError&) {
                continue;
            }
            const std::size_t n = c.domain_p.dim;
            const Vec v = rng.vec_uniform(n, -1.0, 1.0);
            const Vec w = rng.vec_uniform(n, -1.0, 1.0);
            const double lhs = 0.5 * (tp(r, v, w) + tp(r, w, v));
            const double rhs = g.eval({c.plot_q, fr, jf.apply(v), jf.apply(w)});
            std::ostringstream os;
            os << "case " << ci << " at r=" << Point{space.id, c.plot_p, r, {}}.describe();
            report.record(std::fabs(lhs - rhs), os.str());
        }
    }
    report.passed = report.max_deviation <= tol;
    return report;
}

inline DeviationReport isometry_check(const SmoothMap& phi, const DiffeoSpace& source,
                                      const WeakMetric& g_source, const DiffeoSpace& target,
                                      const WeakMetric& g_target, int samples, double tol,
                                      std::uint64_t seed = 0) {
    const WeakMetric pulled = pullback(phi, source, target, g_target);
    DeviationReport report;
    Rng rng(seed);
    for (std::size_t p = 0; p < source.family.size(); ++p) {
        const std::size_t n = source.plot(static_cast<int>(p)).domain.dim;
        for (int s = 0; s < samples; ++s) {
            Vec r;
            try {
                r = source.plot(static_cast<int>(p)).domain.sample(rng, 2.0);
            } catch (const DomainBoundsError&) {
                continue;
            }
            const Vec v = rng.vec_uniform(n, -1.0, 1.0);
            const Vec w = rng.vec_uniform(n, -1.0, 1.0);
            const TangentDouble t{static_cast<int>(p), r, v, w};
            std::ostringstream os;
            os << "plot " << p << " at " << Point{source.id, static_cast<int>(p), r, {}}.describe();
            report.record(std::fabs(pulled.eval(t) - g_source.eval(t)), os.str());
        }
    }
    report.passed = report.max_deviation <= tol;
    return report;
}

}  // namespace riemdiff
