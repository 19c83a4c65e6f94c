#pragma once

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace riemdiff {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    static const GaussLegendre& of(int order) {
        static std::mutex mtx;
        static std::unordered_map<int, GaussLegendre> cache;
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(order);
        if (it != cache.end()) return it->second;
        return cache.emplace(order, compute(order)).first->second;
    }

  private:
    static GaussLegendre compute(int n) {
        if (n < 1) throw std::invalid_argument("GaussLegendre: order must be positive");
        GaussLegendre g;
        g.nodes.resize(n);
        g.weights.resize(n);
        const int m = (n + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (x * p0 - p1) / (x * x - 1.0);
                const double dx = p0 / pp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) break;
            }
            g.nodes[i] = -x;
            g.nodes[n - 1 - i] = x;
            g.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
            g.weights[n - 1 - i] = g.weights[i];
        }
        return g;
    }
};

struct QuadratureSpec {
    int order = 8;
    int panels = 32;
};

// Composite Gauss-Legendre over [a, b].
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& q = {}) {
    const GaussLegendre& gl = GaussLegendre::of(q.order);
    const double h = (b - a) / q.panels;
    double sum = 0.0;
    for (int p = 0; p < q.panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (int i = 0; i < q.order; ++i) s += gl.weights[i] * f(mid + 0.5 * h * gl.nodes[i]);
        sum += 0.5 * h * s;
    }
    return sum;
}

}  // namespace riemdiff
