#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "riemdiff/plots.hpp"

namespace riemdiff {

// One directed identification between chart regions. Builders register both
// directions so closure search only ever walks rules forward.
struct GlueRule {
    int plot_a = 0;
    std::function<bool(const Vec&)> region_a;
    int plot_b = 0;
    ChartMap transfer;  // chart_a coords -> chart_b coords, valid on region_a
    // representative coordinates inside region_a; scale controls how close to
    // the region boundary the samples press (distance solvers refine it)
    std::function<std::vector<Vec>(double scale, int count)> anchors;
};

struct DiffeoSpace {
    SpaceId id = 0;
    std::string name;
    double eps_eq = 1e-9;
    std::vector<Plot> family;
    std::vector<GlueRule> glue;
    int glue_depth = 6;

    const Plot& plot(int index) const {
        if (index < 0 || static_cast<std::size_t>(index) >= family.size())
            throw UsageError("DiffeoSpace: plot index out of range for space '" + name + "'");
        return family[static_cast<std::size_t>(index)];
    }

    // All chart representatives reachable from (plot, r) through the glue
    // closure, the starting pair included.
    std::vector<std::pair<int, Vec>> representatives(int plot_index, const Vec& r) const {
        plot(plot_index).domain.require(r, "DiffeoSpace::representatives");
        std::vector<std::pair<int, Vec>> seen{{plot_index, r}};
        std::deque<std::pair<std::pair<int, Vec>, int>> queue{{{plot_index, r}, 0}};
        auto known = [&](int p, const Vec& c) {
            for (const auto& [sp, sc] : seen)
                if (sp == p && sc.size() == c.size() && dist(sc, c) <= eps_eq) return true;
            return false;
        };
        while (!queue.empty()) {
            auto [cur, depth] = queue.front();
            queue.pop_front();
            if (depth >= glue_depth) continue;
            for (const auto& rule : glue) {
                if (rule.plot_a != cur.first) continue;
                if (!rule.region_a || !rule.region_a(cur.second)) continue;
                if (!rule.transfer.source.contains(cur.second)) continue;
                Vec mapped = rule.transfer.value(cur.second);
                if (!plot(rule.plot_b).domain.contains(mapped)) continue;
                if (known(rule.plot_b, mapped)) continue;
                seen.push_back({rule.plot_b, mapped});
                queue.push_back({{rule.plot_b, mapped}, depth + 1});
            }
        }
        return seen;
    }

    // Lowest plot index (ties broken lexicographically on coordinates) is the
    // normal form.
    std::pair<int, Vec> canonical(int plot_index, const Vec& r) const {
        auto reps = representatives(plot_index, r);
        std::pair<int, Vec> best = reps.front();
        for (const auto& rep : reps) {
            if (rep.first < best.first) {
                best = rep;
            } else if (rep.first == best.first && rep.second.size() == best.second.size()) {
                for (std::size_t i = 0; i < rep.second.size(); ++i) {
                    if (rep.second[i] < best.second[i] - eps_eq) {
                        best = rep;
                        break;
                    }
                    if (rep.second[i] > best.second[i] + eps_eq) break;
                }
            }
        }
        return best;
    }

    Point eval(int plot_index, const Vec& r) const {
        plot(plot_index).domain.require(r, "eval_plot");
        auto [p, c] = canonical(plot_index, r);
        Point pt;
        pt.space = id;
        pt.plot = p;
        pt.coords = std::move(c);
        return pt;
    }

    bool equal(const Point& p, const Point& q) const {
        if (p.space != id || q.space != id)
            throw UsageError("points_equal: point not owned by space '" + name + "'");
        if (p.plot < 0 || q.plot < 0) return p.plot < 0 && q.plot < 0 && p.label == q.label;
        // walk the closure from p and look for q on the way
        auto reps = representatives(p.plot, p.coords);
        for (const auto& [rp, rc] : reps)
            if (rp == q.plot && rc.size() == q.coords.size() && dist(rc, q.coords) <= eps_eq)
                return true;
        return false;
    }

    // coordinates of `pt` in chart `plot_index`, when the glue closure reaches it
    std::optional<Vec> coords_in_chart(const Point& pt, int plot_index) const {
        if (pt.plot < 0) return std::nullopt;
        for (const auto& [rp, rc] : representatives(pt.plot, pt.coords))
            if (rp == plot_index) return rc;
        return std::nullopt;
    }
};

inline Point eval_plot(const DiffeoSpace& space, int plot_index, const Vec& r) {
    return space.eval(plot_index, r);
}

inline bool points_equal(const DiffeoSpace& space, const Point& p, const Point& q) {
    return space.equal(p, q);
}

inline Mat plot_coord_jacobian(const Plot& p, const Vec& r) {
    if (p.coord_jacobian) return p.coord_jacobian(r);
    const Point base = p.value(r);
    const std::size_t out_dim = base.coords.size();
    Mat j(out_dim, p.domain.dim);
    for (std::size_t k = 0; k < p.domain.dim; ++k) {
        Vec rp = r, rm = r;
        rp[k] += p.fd_step;
        rm[k] -= p.fd_step;
        const Point pp = p.value(rp), pm = p.value(rm);
        if (pp.plot != base.plot || pm.plot != base.plot)
            throw EvaluationError("plot_coord_jacobian: chart changed under finite differences");
        for (std::size_t i = 0; i < out_dim; ++i)
            j(i, k) = (pp.coords[i] - pm.coords[i]) / (2.0 * p.fd_step);
    }
    return j;
}

// Local factorization of a smooth map through the target's generating family:
// phi(P(r')) = Q(h(r')) for r' in a ball around the base point.
struct Factorization {
    double radius = 0.0;
    int target_plot = 0;
    ChartMap h;
};

struct SmoothMap {
    SpaceId source = 0;
    SpaceId target = 0;
    std::string name;
    std::function<std::optional<Factorization>(int plot_index, const Vec& r)> factorize;
};

// Validated factorization: checks that factorizations at sampled points of the
// certified ball agree with the ball-level chart map under target equality.
inline Factorization factorize_map(const SmoothMap& phi, const DiffeoSpace& source,
                                   const DiffeoSpace& target, int plot_index, const Vec& r,
                                   int samples = 25) {
    if (phi.source != source.id || phi.target != target.id)
        throw UsageError("factorize_map: map does not connect the given spaces");
    source.plot(plot_index).domain.require(r, "factorize_map");
    auto fact = phi.factorize(plot_index, r);
    if (!fact)
        throw FactorizationError("factorize_map: no factorization for map '" + phi.name +
                                 "' at plot " + std::to_string(plot_index) + ", point " +
                                 Point{source.id, plot_index, r, {}}.describe());
    const double rad = std::isfinite(fact->radius) ? fact->radius : 1.0;
    Rng rng(0x9e3779b97f4a7c15ull ^ (static_cast<std::uint64_t>(plot_index) << 32) ^
            static_cast<std::uint64_t>(samples));
    const std::size_t n = r.size();
    for (int s = 0; s < samples; ++s) {
        Vec rp = r;
        if (n > 0) {
            Vec d = rng.unit_vec(n);
            const double t = rad * rng.uniform(0.0, 1.0);
            for (std::size_t i = 0; i < n; ++i) rp[i] += t * d[i];
        }
        if (!source.plot(plot_index).domain.contains(rp) || !fact->h.source.contains(rp)) continue;
        auto local = phi.factorize(plot_index, rp);
        if (!local) continue;
        const Point through_ball = target.eval(fact->target_plot, fact->h.value(rp));
        const Point through_local = target.eval(local->target_plot, local->h.value(rp));
        if (!target.equal(through_ball, through_local))
            throw FactorizationError("factorize_map: inconsistent factorization of '" + phi.name +
                                     "' inside the certified ball at plot " +
                                     std::to_string(plot_index));
    }
    return *fact;
}

inline SmoothMap identity_map(const DiffeoSpace& space) {
    SmoothMap m;
    m.source = space.id;
    m.target = space.id;
    m.name = "identity";
    std::vector<ChartDomain> domains;
    for (const auto& p : space.family) domains.push_back(p.domain);
    m.factorize = [domains](int plot_index, const Vec&) -> std::optional<Factorization> {
        Factorization f;
        f.radius = kInf;
        f.target_plot = plot_index;
        f.h = identity_chart_map(domains[static_cast<std::size_t>(plot_index)]);
        return f;
    };
    return m;
}

inline SmoothMap constant_map(const DiffeoSpace& source, const DiffeoSpace& target,
                              int target_plot, const Vec& target_coords) {
    SmoothMap m;
    m.source = source.id;
    m.target = target.id;
    m.name = "constant";
    std::vector<ChartDomain> domains;
    for (const auto& p : source.family) domains.push_back(p.domain);
    const ChartDomain tgt_dom = target.plot(target_plot).domain;
    m.factorize = [domains, tgt_dom, target_plot, target_coords](
                      int plot_index, const Vec&) -> std::optional<Factorization> {
        Factorization f;
        f.radius = kInf;
        f.target_plot = target_plot;
        f.h = constant_chart_map(domains[static_cast<std::size_t>(plot_index)], tgt_dom,
                                 target_coords);
        return f;
    };
    return m;
}

inline SmoothMap compose(const SmoothMap& psi, const SmoothMap& phi) {
    if (phi.target != psi.source) throw UsageError("compose(SmoothMap): target/source mismatch");
    SmoothMap c;
    c.source = phi.source;
    c.target = psi.target;
    c.name = psi.name + " after " + phi.name;
    auto phi_f = phi.factorize;
    auto psi_f = psi.factorize;
    c.factorize = [phi_f, psi_f](int plot_index, const Vec& r) -> std::optional<Factorization> {
        auto f1 = phi_f(plot_index, r);
        if (!f1) return std::nullopt;
        auto f2 = psi_f(f1->target_plot, f1->h.value(r));
        if (!f2) return std::nullopt;
        Factorization f;
        f.radius = std::min(f1->radius, f2->radius);
        f.target_plot = f2->target_plot;
        f.h = compose(f2->h, f1->h);
        return f;
    };
    return c;
}

// Numerically invert a chart map (Gauss-Newton with multistart seeding); used
// to turn declared inductions into glue-table regions and transfers.
inline std::optional<Vec> invert_chart_map(const ChartMap& h, const Vec& x, double tol = 1e-9,
                                           double window = 8.0, int grid_per_axis = 9) {
    if (h.inverse) {
        auto s = h.inverse(x);
        if (s && h.source.contains(*s) && dist(h.value(*s), x) <= tol) return s;
        return std::nullopt;
    }
    if (h.source.dim == 0) {
        Vec empty;
        if (dist(h.value(empty), x) <= tol) return empty;
        return std::nullopt;
    }
    auto refine = [&](Vec s) -> std::optional<Vec> {
        for (int it = 0; it < 60; ++it) {
            if (!h.source.contains(s)) return std::nullopt;
            const Vec res = sub(x, h.value(s));
            if (norm(res) <= tol) return s;
            Mat j = h.jacobian(s);
            Mat jt = j.transposed();
            Mat jtj = jt.mul(j);
            for (std::size_t i = 0; i < jtj.rows; ++i) jtj(i, i) += 1e-12;
            Vec step;
            try {
                step = solve_linear(jtj, jt.apply(res));
            } catch (const std::exception&) {
                return std::nullopt;
            }
            double lambda = 1.0;
            while (lambda > 1e-6 && !h.source.contains(add(s, scale(lambda, step)))) lambda *= 0.5;
            Vec next = add(s, scale(lambda, step));
            if (!h.source.contains(next)) return std::nullopt;
            if (dist(next, s) < 1e-15 && norm(res) > tol) return std::nullopt;
            s = std::move(next);
        }
        return std::nullopt;
    };
    double best_gap = kInf;
    Vec best_seed;
    for (const Vec& seed : h.source.grid(grid_per_axis, window)) {
        const double gap = dist(h.value(seed), x);
        if (gap < best_gap) {
            best_gap = gap;
            best_seed = seed;
        }
    }
    if (best_seed.empty() && h.source.dim > 0) return std::nullopt;
    return refine(best_seed);
}

}  // namespace riemdiff
