#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "riemdiff/domain.hpp"
#include "riemdiff/errors.hpp"
#include "riemdiff/linalg.hpp"

namespace riemdiff {

using SpaceId = std::uint64_t;

inline SpaceId next_space_id() {
    static std::atomic<SpaceId> counter{1};
    return counter.fetch_add(1);
}

// A point of a diffeological space, represented through a generating plot
// (plot index + chart coordinates) or as an opaque label.
struct Point {
    SpaceId space = 0;
    int plot = -1;  // -1 means labeled point
    Vec coords;
    std::string label;

    static Point labeled(SpaceId s, std::string l) {
        Point p;
        p.space = s;
        p.label = std::move(l);
        return p;
    }

    std::string describe() const {
        std::ostringstream os;
        if (plot < 0) {
            os << "<" << label << ">";
        } else {
            os << plot << ":(";
            for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? "," : "") << coords[i];
            os << ")";
        }
        return os.str();
    }
};

// Smooth map between chart domains with analytic or central finite-difference
// Jacobian. Target dim x source dim.
struct ChartMap {
    ChartDomain source;
    ChartDomain target;
    std::function<Vec(const Vec&)> value;
    std::function<Mat(const Vec&)> jacobian_fn;           // optional analytic Jacobian
    std::function<std::optional<Vec>(const Vec&)> inverse;  // optional local inverse
    double fd_step = 1e-5;

    Vec operator()(const Vec& r) const {
        source.require(r, "ChartMap");
        return value(r);
    }

    Mat jacobian(const Vec& r) const {
        source.require(r, "ChartMap::jacobian");
        if (jacobian_fn) {
            Mat j = jacobian_fn(r);
            if (j.rows != target.dim || j.cols != source.dim)
                throw UsageError("ChartMap::jacobian: analytic Jacobian has wrong shape");
            return j;
        }
        if (source.boundary_gap(r) <= fd_step)
            throw BoundaryError("ChartMap::jacobian: point too close to domain boundary for finite differences");
        Mat j(target.dim, source.dim);
        for (std::size_t k = 0; k < source.dim; ++k) {
            Vec rp = r, rm = r;
            rp[k] += fd_step;
            rm[k] -= fd_step;
            const Vec fp = value(rp), fm = value(rm);
            for (std::size_t i = 0; i < target.dim; ++i)
                j(i, k) = (fp[i] - fm[i]) / (2.0 * fd_step);
        }
        return j;
    }
};

inline ChartMap identity_chart_map(const ChartDomain& d) {
    ChartMap m;
    m.source = d;
    m.target = d;
    m.value = [](const Vec& r) { return r; };
    const std::size_t n = d.dim;
    m.jacobian_fn = [n](const Vec&) { return Mat::identity(n); };
    m.inverse = [d](const Vec& x) -> std::optional<Vec> {
        if (!d.contains(x)) return std::nullopt;
        return x;
    };
    return m;
}

inline ChartMap compose(const ChartMap& g, const ChartMap& f) {
    ChartMap c;
    c.source = f.source;
    c.target = g.target;
    c.value = [g, f](const Vec& r) { return g.value(f.value(r)); };
    c.jacobian_fn = [g, f](const Vec& r) {
        const Vec mid = f.value(r);
        return g.jacobian(mid).mul(f.jacobian(r));
    };
    if (f.inverse && g.inverse) {
        auto fi = f.inverse, gi = g.inverse;
        c.inverse = [fi, gi](const Vec& x) -> std::optional<Vec> {
            auto mid = gi(x);
            if (!mid) return std::nullopt;
            return fi(*mid);
        };
    }
    return c;
}

inline ChartMap constant_chart_map(const ChartDomain& src, const ChartDomain& tgt, Vec target_value) {
    ChartMap m;
    m.source = src;
    m.target = tgt;
    Vec tv = std::move(target_value);
    m.value = [tv](const Vec&) { return tv; };
    const std::size_t tr = tgt.dim, sc = src.dim;
    m.jacobian_fn = [tr, sc](const Vec&) { return Mat(tr, sc); };
    return m;
}

// A parametrization of a space from a chart domain. For generating plots of
// the spaces built here, value tags coordinates with the plot index; derived
// plots may wrap arbitrary closures.
struct Plot {
    ChartDomain domain;
    std::function<Point(const Vec&)> value;
    // d(chart coords of value)/dr, meaningful where the image stays in one chart
    std::function<Mat(const Vec&)> coord_jacobian;
    double fd_step = 1e-5;

    Point operator()(const Vec& r) const {
        domain.require(r, "Plot");
        return value(r);
    }
};

// Representative [r, v, w]_P of a tangent pair over plot P.
struct TangentDouble {
    int plot = 0;
    Vec r;
    Vec v;
    Vec w;
};

}  // namespace riemdiff
