#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "riemdiff/errors.hpp"
#include "riemdiff/linalg.hpp"

namespace riemdiff {

// Open interval; either bound may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double x) const { return x > lo && x < hi; }

    // closed window [a, b] inside the interval, used by samplers and grids
    std::pair<double, double> window(double half_width) const {
        double a = std::max(lo, -half_width);
        double b = std::min(hi, half_width);
        if (std::isfinite(lo) && a <= lo) a = lo + 1e-9 * std::max(1.0, std::fabs(lo));
        if (std::isfinite(hi) && b >= hi) b = hi - 1e-9 * std::max(1.0, std::fabs(hi));
        if (std::isfinite(lo) && !std::isfinite(hi)) b = std::max(b, a + 2.0 * half_width);
        if (!std::isfinite(lo) && std::isfinite(hi)) a = std::min(a, b - 2.0 * half_width);
        if (a > b) a = b = 0.5 * (std::max(lo, -1e308) + std::min(hi, 1e308));
        return {a, b};
    }
};

// Domain of a plot: an open box, optionally refined by a membership predicate.
struct ChartDomain {
    std::size_t dim = 0;
    std::vector<Interval> box;
    std::function<bool(const Vec&)> membership;  // optional refinement of the box

    ChartDomain() = default;
    explicit ChartDomain(std::vector<Interval> b) : dim(b.size()), box(std::move(b)) {}

    static ChartDomain full(std::size_t n) {
        ChartDomain d;
        d.dim = n;
        d.box.assign(n, Interval{});
        return d;
    }

    bool contains(const Vec& r) const {
        if (r.size() != dim) return false;
        for (std::size_t i = 0; i < dim; ++i)
            if (!box[i].contains(r[i])) return false;
        return !membership || membership(r);
    }

    void require(const Vec& r, const char* who) const {
        if (!contains(r)) {
            std::ostringstream os;
            os << who << ": point outside chart domain (dim " << dim << "):";
            for (double x : r) os << ' ' << x;
            throw DomainBoundsError(os.str());
        }
    }

    // distance from r to the box boundary along every axis (inf when unbounded)
    double boundary_gap(const Vec& r) const {
        double g = kInf;
        for (std::size_t i = 0; i < dim; ++i) {
            if (std::isfinite(box[i].lo)) g = std::min(g, r[i] - box[i].lo);
            if (std::isfinite(box[i].hi)) g = std::min(g, box[i].hi - r[i]);
        }
        return g;
    }

    Vec sample(Rng& rng, double half_width = 1.0, int max_tries = 256) const {
        for (int t = 0; t < max_tries; ++t) {
            Vec r(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                auto [a, b] = box[i].window(half_width);
                r[i] = rng.uniform(a, b);
            }
            if (contains(r)) return r;
        }
        throw DomainBoundsError("ChartDomain::sample: no point found (membership too tight?)");
    }

    // cartesian grid over the boxed window; includes window endpoints
    std::vector<Vec> grid(int points_per_axis, double half_width = 1.0) const {
        std::vector<std::vector<double>> axes(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            auto [a, b] = box[i].window(half_width);
            if (points_per_axis <= 1 || a == b) {
                axes[i] = {0.5 * (a + b)};
            } else {
                for (int k = 0; k < points_per_axis; ++k)
                    axes[i].push_back(a + (b - a) * k / (points_per_axis - 1));
            }
        }
        std::vector<Vec> out;
        Vec cur(dim);
        std::function<void(std::size_t)> rec = [&](std::size_t axis) {
            if (axis == dim) {
                if (contains(cur)) out.push_back(cur);
                return;
            }
            for (double x : axes[axis]) {
                cur[axis] = x;
                rec(axis + 1);
            }
        };
        if (dim == 0)
            out.push_back({});
        else
            rec(0);
        return out;
    }

    std::string describe() const {
        std::ostringstream os;
        os << "dim=" << dim << " box=";
        for (std::size_t i = 0; i < dim; ++i) {
            os << (i ? "x" : "") << "(" << box[i].lo << "," << box[i].hi << ")";
        }
        if (dim == 0) os << "(point)";
        return os.str();
    }
};

inline ChartDomain interval_domain(double lo, double hi) {
    return ChartDomain({Interval{lo, hi}});
}

inline ChartDomain point_domain() { return ChartDomain::full(0); }

}  // namespace riemdiff
