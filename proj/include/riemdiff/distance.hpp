#pragma once

#include <algorithm>
#include <future>
#include <optional>
#include <set>
#include <vector>

#include "riemdiff/definiteness.hpp"
#include "riemdiff/path.hpp"

namespace riemdiff {

struct SearchConfig {
    int control_points_per_segment = 8;  // interior control points per chart segment
    int refinement_levels = 5;
    int anchor_samples_per_glue_region = 16;
    int max_chart_sequence = 4;
    int optimized_candidates_per_level = 6;
    int candidate_cap_per_walk = 64;
    // optimizer: derivative-free coordinate descent with geometric step decay
    int descent_sweeps = 2;
    int step_decays = 12;
    double step_decay = 0.5;
    double initial_step = 0.5;
    QuadratureSpec quad{8, 2};  // per knot span
    int closure_panels = 32;
    std::uint64_t seed = 0;
    bool include_reversal = true;
    std::vector<PiecewisePath> seed_paths;
    int threads = 1;
    double guard = 1e-10;  // certification padding so reported values stay upper bounds
};

struct TransitionGraph {
    int nodes = 0;
    struct Edge {
        int rule = 0;  // index into space.glue
        int from = 0, to = 0;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<int>> adjacency;  // edge indices by source node

    int undirected_edge_count() const {
        std::set<std::pair<int, int>> seen;
        for (const auto& e : edges)
            seen.insert({std::min(e.from, e.to), std::max(e.from, e.to)});
        return static_cast<int>(seen.size());
    }
};

inline TransitionGraph transition_graph(const DiffeoSpace& space) {
    TransitionGraph g;
    g.nodes = static_cast<int>(space.family.size());
    g.adjacency.resize(static_cast<std::size_t>(g.nodes));
    for (std::size_t r = 0; r < space.glue.size(); ++r) {
        const auto& rule = space.glue[r];
        TransitionGraph::Edge e{static_cast<int>(r), rule.plot_a, rule.plot_b};
        g.adjacency[static_cast<std::size_t>(e.from)].push_back(static_cast<int>(g.edges.size()));
        g.edges.push_back(e);
    }
    return g;
}

inline std::vector<Vec> rule_anchors(const DiffeoSpace& space, int rule_index, double scale,
                                     int count) {
    const GlueRule& rule = space.glue[static_cast<std::size_t>(rule_index)];
    if (rule.anchors) return rule.anchors(scale, count);
    // fallback: filter a chart grid through the region predicate
    std::vector<Vec> out;
    for (const Vec& r : space.plot(rule.plot_a).domain.grid(9, 4.0)) {
        if (rule.region_a && rule.region_a(r)) out.push_back(r);
        if (static_cast<int>(out.size()) >= count) break;
    }
    return out;
}

struct DistanceResult {
    double bound = kInf;
    std::optional<PiecewisePath> best_path;
    std::vector<double> trace;  // one certified bound per refinement level
};

namespace detail {

enum class JointKind { fixed, same_chart, cross };

struct Joint {
    JointKind kind = JointKind::fixed;
    int rule = -1;
};

inline std::vector<Joint> classify_joints(const DiffeoSpace& space, const PiecewisePath& path) {
    std::vector<Joint> joints;
    for (std::size_t k = 0; k + 1 < path.segments.size(); ++k) {
        const PathSegment& a = path.segments[k];
        const PathSegment& b = path.segments[k + 1];
        Joint j;
        const Vec e = a.end(), s = b.start();
        if (!a.curve_fn && !b.curve_fn) {
            if (a.plot == b.plot && dist(e, s) <= space.eps_eq) {
                j.kind = JointKind::same_chart;
            } else {
                for (std::size_t r = 0; r < space.glue.size(); ++r) {
                    const GlueRule& rule = space.glue[r];
                    if (rule.plot_a != a.plot || rule.plot_b != b.plot) continue;
                    if (!rule.region_a || !rule.region_a(e)) continue;
                    if (dist(rule.transfer.value(e), s) <= 10.0 * space.eps_eq) {
                        j.kind = JointKind::cross;
                        j.rule = static_cast<int>(r);
                        break;
                    }
                }
            }
        }
        joints.push_back(j);
    }
    return joints;
}

inline bool control_point_ok(const DiffeoSpace& space, const PathSegment& seg, const Vec& p) {
    return space.plot(seg.plot).domain.contains(p);
}

inline bool segment_ok(const DiffeoSpace& space, const PathSegment& seg) {
    const ChartDomain& dom = space.plot(seg.plot).domain;
    for (const Vec& c : seg.control)
        if (!dom.contains(c)) return false;
    if (dom.membership) {
        for (int s = 0; s <= 8; ++s)
            if (!dom.contains(seg.at(s / 8.0))) return false;
    }
    return true;
}

}  // namespace detail

// Coordinate descent on interior control points; joints slide inside their
// glue regions. Never returns a longer path.
inline PiecewisePath refine_path(const DiffeoSpace& space, const WeakMetric& g,
                                 PiecewisePath path, const SearchConfig& cfg = {}) {
    const auto joints = detail::classify_joints(space, path);
    std::vector<double> seg_len(path.segments.size());
    for (std::size_t k = 0; k < path.segments.size(); ++k)
        seg_len[k] = segment_length(g, path.segments[k], cfg.quad, cfg.closure_panels);

    // per-segment step scale from the chord extent
    std::vector<double> seg_scale(path.segments.size(), 1.0);
    for (std::size_t k = 0; k < path.segments.size(); ++k) {
        if (path.segments[k].curve_fn) continue;
        seg_scale[k] =
            std::max(0.05, dist(path.segments[k].control.front(), path.segments[k].control.back()));
    }

    auto try_control_move = [&](std::size_t k, std::size_t ci, std::size_t axis,
                                double step) -> bool {
        PathSegment& seg = path.segments[k];
        const double old = seg.control[ci][axis];
        seg.control[ci][axis] = old + step;
        if (!detail::control_point_ok(space, seg, seg.control[ci]) ||
            !detail::segment_ok(space, seg)) {
            seg.control[ci][axis] = old;
            return false;
        }
        const double len = segment_length(g, seg, cfg.quad, cfg.closure_panels);
        if (len < seg_len[k]) {
            seg_len[k] = len;
            return true;
        }
        seg.control[ci][axis] = old;
        return false;
    };

    // joint slide: interior control points follow affinely so the whole tail of
    // one segment and head of the next track the moved joint
    auto try_joint_move = [&](std::size_t k, std::size_t axis, double step) -> bool {
        PathSegment& a = path.segments[k];
        PathSegment& b = path.segments[k + 1];
        const Vec old_e = a.control.back();
        const Vec old_s = b.control.front();
        Vec e = old_e;
        e[axis] += step;
        Vec s;
        if (joints[k].kind == detail::JointKind::same_chart) {
            s = e;
        } else {
            const GlueRule& rule = space.glue[static_cast<std::size_t>(joints[k].rule)];
            if (!rule.region_a(e) || !rule.transfer.source.contains(e)) return false;
            s = rule.transfer.value(e);
        }
        if (!detail::control_point_ok(space, a, e) || !detail::control_point_ok(space, b, s))
            return false;
        const std::vector<Vec> backup_a = a.control;
        const std::vector<Vec> backup_b = b.control;
        const Vec de = sub(e, old_e);
        const Vec ds = sub(s, old_s);
        const std::size_t na = a.control.size(), nb = b.control.size();
        for (std::size_t i = 0; i < na; ++i) {
            const double w = static_cast<double>(i) / (na - 1);
            a.control[i] = add(a.control[i], scale(w, de));
        }
        for (std::size_t i = 0; i < nb; ++i) {
            const double w = 1.0 - static_cast<double>(i) / (nb - 1);
            b.control[i] = add(b.control[i], scale(w, ds));
        }
        if (!detail::segment_ok(space, a) || !detail::segment_ok(space, b)) {
            a.control = backup_a;
            b.control = backup_b;
            return false;
        }
        const double la = segment_length(g, a, cfg.quad, cfg.closure_panels);
        const double lb = segment_length(g, b, cfg.quad, cfg.closure_panels);
        if (la + lb < seg_len[k] + seg_len[k + 1]) {
            seg_len[k] = la;
            seg_len[k + 1] = lb;
            return true;
        }
        a.control = backup_a;
        b.control = backup_b;
        return false;
    };

    double step_factor = cfg.initial_step;
    for (int decay = 0; decay < cfg.step_decays; ++decay, step_factor *= cfg.step_decay) {
        for (int sweep = 0; sweep < cfg.descent_sweeps; ++sweep) {
            for (std::size_t k = 0; k < path.segments.size(); ++k) {
                if (path.segments[k].curve_fn) continue;
                const double step = step_factor * seg_scale[k];
                for (std::size_t ci = 1; ci + 1 < path.segments[k].control.size(); ++ci)
                    for (std::size_t axis = 0; axis < path.segments[k].control[ci].size(); ++axis) {
                        if (!try_control_move(k, ci, axis, step))
                            try_control_move(k, ci, axis, -step);
                    }
            }
            for (std::size_t k = 0; k + 1 < path.segments.size(); ++k) {
                if (joints[k].kind == detail::JointKind::fixed) continue;
                if (path.segments[k].curve_fn || path.segments[k + 1].curve_fn) continue;
                const double step =
                    step_factor * std::max(seg_scale[k], seg_scale[k + 1]);
                for (std::size_t axis = 0; axis < path.segments[k].control.back().size(); ++axis) {
                    if (!try_joint_move(k, axis, step)) try_joint_move(k, axis, -step);
                }
            }
        }
    }
    return path;
}

namespace detail {

struct CandidateSeed {
    std::vector<int> plots;                      // chart sequence
    std::vector<std::pair<int, Vec>> crossings;  // (rule index, anchor in from-chart)
    Vec start;
    Vec end;
};

inline std::optional<PiecewisePath> build_candidate(const DiffeoSpace& space,
                                                    const CandidateSeed& seed,
                                                    int interior_points) {
    PiecewisePath path;
    Vec entry = seed.start;
    for (std::size_t k = 0; k < seed.plots.size(); ++k) {
        Vec exit;
        if (k + 1 < seed.plots.size()) {
            const auto& [rule_index, anchor] = seed.crossings[k];
            const GlueRule& rule = space.glue[static_cast<std::size_t>(rule_index)];
            if (!rule.region_a || !rule.region_a(anchor)) return std::nullopt;
            if (!rule.transfer.source.contains(anchor)) return std::nullopt;
            exit = anchor;
            path.segments.push_back(
                chord_segment(seed.plots[k], entry, exit, interior_points));
            entry = rule.transfer.value(anchor);
            if (!space.plot(seed.plots[k + 1]).domain.contains(entry)) return std::nullopt;
        } else {
            exit = seed.end;
            path.segments.push_back(
                chord_segment(seed.plots[k], entry, exit, interior_points));
        }
        if (!segment_ok(space, path.segments.back())) return std::nullopt;
    }
    return path;
}

// all walks through the transition graph from a start chart to an end chart,
// up to cfg.max_chart_sequence charts; edges may repeat but not back-to-back
inline void enumerate_walks(const TransitionGraph& graph, int start, int end, int max_charts,
                            std::vector<std::vector<int>>& walks_out) {
    std::vector<int> edge_stack;
    std::function<void(int, int)> dfs = [&](int node, int last_edge) {
        if (node == end) walks_out.push_back(edge_stack);
        if (static_cast<int>(edge_stack.size()) + 1 >= max_charts) return;
        for (int e : graph.adjacency[static_cast<std::size_t>(node)]) {
            if (e == last_edge) continue;  // no immediate backtrack over the same rule
            edge_stack.push_back(e);
            dfs(graph.edges[static_cast<std::size_t>(e)].to, e);
            edge_stack.pop_back();
        }
    };
    dfs(start, -1);
}

}  // namespace detail

// Certified upper bounds on the path-length infimum. The trace is
// nonincreasing; infinity means the transition graph disconnects x from y.
inline DistanceResult pseudodistance_upper(const DiffeoSpace& space, const WeakMetric& g,
                                           const Point& x, const Point& y,
                                           const SearchConfig& cfg = {}) {
    if (x.space != space.id || y.space != space.id)
        throw UsageError("pseudodistance_upper: points not owned by the space");
    DistanceResult result;
    result.trace.assign(static_cast<std::size_t>(std::max(1, cfg.refinement_levels)), kInf);

    if (x.plot < 0 || y.plot < 0) {
        if (space.equal(x, y)) {
            result.bound = cfg.guard;
            std::fill(result.trace.begin(), result.trace.end(), cfg.guard);
        }
        return result;
    }

    const auto reps_x = space.representatives(x.plot, x.coords);
    const auto reps_y = space.representatives(y.plot, y.coords);
    const TransitionGraph graph = transition_graph(space);

    double best_len = kInf;
    std::optional<PiecewisePath> best;

    auto consider = [&](const PiecewisePath& path, double len) {
        if (len < best_len) {
            best_len = len;
            best = path;
        }
    };

    // identical points: the constant path certifies zero
    if (space.equal(x, y)) {
        PiecewisePath constant;
        constant.segments.push_back(chord_segment(x.plot, x.coords, x.coords, 1));
        consider(constant, 0.0);
    }

    // walks per (start rep, end rep) pair
    struct Walk {
        std::vector<int> edges;
        Vec start, end;
        int start_plot;
    };
    std::vector<Walk> walks;
    for (const auto& [sp, sc] : reps_x)
        for (const auto& [ep, ec] : reps_y) {
            std::vector<std::vector<int>> edge_walks;
            detail::enumerate_walks(graph, sp, ep, cfg.max_chart_sequence, edge_walks);
            for (auto& ew : edge_walks) walks.push_back({std::move(ew), sc, ec, sp});
        }

    for (int level = 1; level <= std::max(1, cfg.refinement_levels); ++level) {
        const double anchor_scale = std::pow(0.5, level - 1);
        // assemble candidate seeds
        std::vector<PiecewisePath> candidates;
        std::vector<double> initial_len;
        auto push_candidate = [&](PiecewisePath p) {
            initial_len.push_back(path_length(g, p, cfg.quad, cfg.closure_panels));
            candidates.push_back(std::move(p));
        };
        for (const Walk& walk : walks) {
            detail::CandidateSeed seed;
            seed.start = walk.start;
            seed.end = walk.end;
            seed.plots.push_back(walk.start_plot);
            for (int e : walk.edges)
                seed.plots.push_back(graph.edges[static_cast<std::size_t>(e)].to);
            if (walk.edges.empty()) {
                if (auto p = detail::build_candidate(space, seed, cfg.control_points_per_segment))
                    push_candidate(std::move(*p));
                continue;
            }
            std::vector<std::vector<Vec>> anchor_sets;
            for (int e : walk.edges)
                anchor_sets.push_back(rule_anchors(space,
                                                   graph.edges[static_cast<std::size_t>(e)].rule,
                                                   anchor_scale,
                                                   cfg.anchor_samples_per_glue_region));
            // deterministic tuple enumeration, capped per walk
            std::vector<std::size_t> idx(walk.edges.size(), 0);
            int emitted = 0;
            bool done = false;
            while (!done && emitted < cfg.candidate_cap_per_walk) {
                seed.crossings.clear();
                bool valid = true;
                for (std::size_t k = 0; k < walk.edges.size(); ++k) {
                    if (anchor_sets[k].empty()) {
                        valid = false;
                        break;
                    }
                    seed.crossings.push_back(
                        {graph.edges[static_cast<std::size_t>(walk.edges[k])].rule,
                         anchor_sets[k][idx[k]]});
                }
                if (!valid) break;
                if (auto p = detail::build_candidate(space, seed, cfg.control_points_per_segment))
                    push_candidate(std::move(*p));
                ++emitted;
                // advance the tuple
                std::size_t k = 0;
                for (; k < idx.size(); ++k) {
                    if (++idx[k] < anchor_sets[k].size()) break;
                    idx[k] = 0;
                }
                done = (k == idx.size());
            }
        }
        if (level == 1)
            for (const auto& p : cfg.seed_paths) push_candidate(p);
        if (best) push_candidate(*best);

        // keep the most promising candidates
        std::vector<std::size_t> order(candidates.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return initial_len[a] < initial_len[b]; });
        const std::size_t keep =
            std::min<std::size_t>(order.size(),
                                  static_cast<std::size_t>(std::max(1, cfg.optimized_candidates_per_level)));

        std::vector<std::pair<double, PiecewisePath>> refined(keep);
        auto optimize_one = [&](std::size_t slot) {
            PiecewisePath p = refine_path(space, g, candidates[order[slot]], cfg);
            refined[slot] = {path_length(g, p, cfg.quad, cfg.closure_panels), std::move(p)};
        };
        if (cfg.threads > 1 && keep > 1) {
            std::vector<std::future<void>> futs;
            for (std::size_t s = 0; s < keep; ++s)
                futs.push_back(std::async(std::launch::async, optimize_one, s));
            for (auto& f : futs) f.get();
        } else {
            for (std::size_t s = 0; s < keep; ++s) optimize_one(s);
        }
        for (auto& [len, p] : refined) consider(p, len);

        result.trace[static_cast<std::size_t>(level - 1)] =
            std::min(level > 1 ? result.trace[static_cast<std::size_t>(level - 2)] : kInf,
                     best_len + cfg.guard);
    }

    if (best && cfg.include_reversal) {
        PiecewisePath rev = refine_path(space, g, reversed(*best), cfg);
        consider(rev, path_length(g, rev, cfg.quad, cfg.closure_panels));
        result.trace.back() = std::min(result.trace.back(), best_len + cfg.guard);
    }

    if (!best) return result;  // disconnected: infinity is the answer

    // smooth the witness; keep it only if quadrature agrees with the bound
    PiecewisePath witness = *best;
    const PiecewisePath smoothed = smooth_reparametrized(witness);
    const double len_smoothed = path_length(g, smoothed, cfg.quad, 2 * cfg.closure_panels);
    if (std::fabs(len_smoothed - best_len) <= 1e-9) witness = smoothed;
    result.best_path = witness;
    result.bound = result.trace.back();
    return result;
}

// k_hat = max over sampled points and unit vectors of sqrt(g(P)_r(v, v)) on a
// closed coordinate box inside the chart.
inline double lipschitz_probe(const DiffeoSpace& space, const WeakMetric& g, int plot_index,
                              const std::vector<Interval>& region, int points_per_axis = 9,
                              int random_vecs = 8, std::uint64_t seed = 1) {
    const std::size_t n = space.plot(plot_index).domain.dim;
    if (region.size() != n) throw UsageError("lipschitz_probe: region/chart dimension mismatch");
    std::vector<std::vector<double>> axes(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < points_per_axis; ++k)
            axes[i].push_back(region[i].lo +
                              (region[i].hi - region[i].lo) * k / std::max(1, points_per_axis - 1));
    }
    std::vector<Vec> pts;
    Vec cur(n);
    std::function<void(std::size_t)> rec = [&](std::size_t axis) {
        if (axis == n) {
            pts.push_back(cur);
            return;
        }
        for (double v : axes[axis]) {
            cur[axis] = v;
            rec(axis + 1);
        }
    };
    rec(0);
    Rng rng(seed);
    double k_hat = 0.0;
    for (const Vec& r : pts) {
        for (std::size_t i = 0; i < n; ++i) {
            const Vec e = unit_axis(n, i);
            k_hat = std::max(k_hat, std::sqrt(std::max(0.0, g.eval({plot_index, r, e, e}))));
        }
        const Mat gram = gram_matrix(g, space, plot_index, r);
        const EigenSym eig = jacobi_eigensym(gram);
        Vec top(n);
        for (std::size_t i = 0; i < n; ++i) top[i] = eig.vectors(i, n - 1);
        k_hat = std::max(k_hat, std::sqrt(std::max(0.0, g.eval({plot_index, r, top, top}))));
        for (int s = 0; s < random_vecs; ++s) {
            const Vec v = rng.unit_vec(n);
            k_hat = std::max(k_hat, std::sqrt(std::max(0.0, g.eval({plot_index, r, v, v}))));
        }
    }
    return k_hat;
}

// Straight-chord certificates d(P(r), P(r')) <= k_hat |r - r'|; returns the
// worst violation of chord_length - k_hat |r - r'| over sampled pairs.
inline double lipschitz_chord_gap(const DiffeoSpace& space, const WeakMetric& g, int plot_index,
                                  const std::vector<Interval>& region, double k_hat, int pairs,
                                  std::uint64_t seed = 2) {
    const std::size_t n = space.plot(plot_index).domain.dim;
    Rng rng(seed);
    auto sample_in_region = [&]() {
        Vec r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = rng.uniform(region[i].lo, region[i].hi);
        return r;
    };
    double worst = -kInf;
    for (int s = 0; s < pairs; ++s) {
        const Vec a = sample_in_region(), b = sample_in_region();
        PiecewisePath chord;
        chord.segments.push_back(chord_segment(plot_index, a, b, 6));
        const double len = path_length(g, chord);
        worst = std::max(worst, len - k_hat * dist(a, b));
    }
    return worst;
}

}  // namespace riemdiff
