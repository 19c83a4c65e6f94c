#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "riemdiff/metric.hpp"

namespace riemdiff {

struct GridSpec {
    int points_per_axis = 9;
    double window = 1.0;  // boxes are clipped to [-window, window] per axis

    std::string describe() const {
        std::ostringstream os;
        os << points_per_axis << " points/axis on window [" << -window << "," << window << "]";
        return os.str();
    }
};

struct DefinitenessWitness {
    int plot = 0;
    Vec r;
    Vec v;  // unit eigenvector of the smallest eigenvalue
    double min_eigenvalue = 0.0;
};

enum class Verdict { definite, indefinite, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::definite: return "definite";
        case Verdict::indefinite: return "indefinite";
        default: return "inconclusive";
    }
}

struct DefinitenessReport {
    Verdict verdict = Verdict::inconclusive;
    std::vector<DefinitenessWitness> witnesses;
    std::string grid;
    double tol = 0.0;
    double min_eigenvalue = kInf;  // over the whole grid
    std::string failure;           // set when inconclusive
};

// Verdict "definite" means definite on the sampled grid: the smallest Gram
// eigenvalue exceeds tol at every grid point of every generating plot.
inline DefinitenessReport definiteness_check(const DiffeoSpace& space, const WeakMetric& g,
                                             const GridSpec& grid = {}, double tol = 1e-8,
                                             std::size_t max_witnesses = 16) {
    if (g.space != space.id) throw UsageError("definiteness_check: metric/space mismatch");
    DefinitenessReport report;
    report.grid = grid.describe();
    report.tol = tol;
    bool failed = false;
    try {
        for (std::size_t p = 0; p < space.family.size(); ++p) {
            const int plot_index = static_cast<int>(p);
            const auto& dom = space.plot(plot_index).domain;
            if (dom.dim == 0) continue;  // nothing to be indefinite about
            for (const Vec& r : dom.grid(grid.points_per_axis, grid.window)) {
                const Mat a = gram_matrix(g, space, plot_index, r);
                const EigenSym eig = jacobi_eigensym(a);
                const double lam = eig.values.front();
                report.min_eigenvalue = std::min(report.min_eigenvalue, lam);
                if (lam <= tol) {
                    failed = true;
                    if (report.witnesses.size() < max_witnesses) {
                        DefinitenessWitness w;
                        w.plot = plot_index;
                        w.r = r;
                        w.v.resize(a.rows);
                        for (std::size_t i = 0; i < a.rows; ++i) w.v[i] = eig.vectors(i, 0);
                        w.min_eigenvalue = lam;
                        report.witnesses.push_back(std::move(w));
                    }
                }
            }
        }
    } catch (const std::exception& e) {
        report.verdict = Verdict::inconclusive;
        report.failure = e.what();
        return report;
    }
    report.verdict = failed ? Verdict::indefinite : Verdict::definite;
    return report;
}

}  // namespace riemdiff
