#include <catch2/catch_amalgamated.hpp>

#include "riemdiff/constructions.hpp"
#include "riemdiff/definiteness.hpp"

using namespace riemdiff;

TEST_CASE("euclidean constructions") {
    SECTION("default tensor is the standard inner product") {
        MetricSpace e2 = euclidean(2);
        REQUIRE(e2.metric.eval({0, {5.0, -3.0}, {1.0, 0.0}, {1.0, 0.0}}) == 1.0);
    }
    SECTION("constant tensor [[4]]") {
        Mat four(1, 1);
        four(0, 0) = 4.0;
        MetricSpace e1 = euclidean(1, four);
        REQUIRE(e1.metric.eval({0, {0.7}, {1.0}, {1.0}}) == 4.0);
    }
    SECTION("diag(1, e^{2x}) evaluates pointwise") {
        MetricSpace e2 = euclidean(2, [](const Vec& r) {
            Mat a(2, 2);
            a(0, 0) = 1.0;
            a(1, 1) = std::exp(2.0 * r[0]);
            return a;
        });
        REQUIRE(e2.metric.eval({0, {1.0, 17.0}, {0.0, 1.0}, {0.0, 1.0}}) ==
                Catch::Approx(std::exp(2.0)));
    }
    SECTION("non-symmetric tensors are rejected") {
        REQUIRE_THROWS_AS(euclidean(2,
                                    [](const Vec&) {
                                        Mat a(2, 2);
                                        a(0, 1) = 1.0;
                                        a(1, 0) = 2.0;
                                        return a;
                                    }),
                          ConstructionError);
    }
}

TEST_CASE("warped products") {
    MetricSpace X = euclidean(1), Y = euclidean(1);
    SECTION("f == 1 is the product metric") {
        MetricSpace p = warped_product(X, Y, WarpSpec::constant(1.0, 1));
        REQUIRE(p.metric.eval({0, {0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}}) == 1.0);
    }
    SECTION("f = e^{2x} on the fiber direction") {
        WarpSpec w;
        w.f_per_plot.push_back([](const Vec& r) { return std::exp(2.0 * r[0]); });
        MetricSpace p = warped_product(X, Y, w);
        REQUIRE(p.metric.eval({0, {1.0, 5.0}, {0.0, 1.0}, {0.0, 1.0}}) ==
                Catch::Approx(std::exp(2.0)));
        REQUIRE(p.metric.eval({0, {1.0, 5.0}, {1.0, 0.0}, {1.0, 0.0}}) == 1.0);
    }
    SECTION("non-positive warp functions are rejected") {
        WarpSpec w;
        w.f_per_plot.push_back([](const Vec& r) { return r[0]; });
        REQUIRE_THROWS_AS(warped_product(X, Y, w), ConstructionError);
    }
    SECTION("definiteness is inherited from definite factors") {
        WarpSpec w;
        w.f_per_plot.push_back([](const Vec& r) { return std::exp(2.0 * r[0]); });
        MetricSpace p = warped_product(X, Y, w);
        const DefinitenessReport rep = definiteness_check(p.space(), p.metric, {9, 1.0}, 1e-8);
        REQUIRE(rep.verdict == Verdict::definite);
        REQUIRE(rep.min_eigenvalue >= std::min(1.0, std::exp(-2.0)) - 1e-9);
    }
}

TEST_CASE("adjunction spaces") {
    SECTION("Y-space construction succeeds and glues the overlap") {
        AdjunctionResult y = y_space();
        const DiffeoSpace& s = y.glued.space();
        REQUIRE(s.family.size() == 2);
        Rng rng(5);
        for (int i = 0; i < 100; ++i) {
            const double a = rng.uniform(1.0 + 1e-6, 8.0);
            REQUIRE(points_equal(s, s.eval(0, {a}), s.eval(1, {a})));
        }
        // pushforward plots keep the standard tensors
        REQUIRE(y.glued.metric.eval({0, {0.3}, {1.0}, {1.0}}) == 1.0);
        REQUIRE(y.glued.metric.eval({1, {0.3}, {1.0}, {1.0}}) == 1.0);
    }
    SECTION("plus-space glues a single point; tangent compatibility is vacuous") {
        AdjunctionResult plus = plus_space();
        REQUIRE(points_equal(plus.glued.space(), plus.glued.space().eval(0, {0.0}),
                             plus.glued.space().eval(1, {0.0})));
    }
    SECTION("incompatible metrics on the overlap are rejected with the deviation") {
        MetricSpace left = euclidean(1);
        Mat four(1, 1);
        four(0, 0) = 4.0;
        MetricSpace right = euclidean(1, four);
        MetricSpace A = interval_space(1.0, kInf);
        GlueSpec spec;
        spec.A = A.space_ptr;
        ChartMap h = identity_chart_map(A.space().plot(0).domain);
        h.target = ChartDomain::full(1);
        spec.into_x.source = A.space().id;
        spec.into_x.target = left.space().id;
        spec.into_x.factorize = [h](int, const Vec&) -> std::optional<Factorization> {
            return Factorization{kInf, 0, h};
        };
        spec.into_y.source = A.space().id;
        spec.into_y.target = right.space().id;
        spec.into_y.factorize = [h](int, const Vec&) -> std::optional<Factorization> {
            return Factorization{kInf, 0, h};
        };
        try {
            adjunction(left, right, spec);
            FAIL("construction should have rejected the incompatible metrics");
        } catch (const ConstructionError& e) {
            const std::string msg = e.what();
            REQUIRE(msg.find("deviation 3") != std::string::npos);
        }
    }
    SECTION("M-space mixes chart dimensions") {
        AdjunctionResult m = m_space();
        const DiffeoSpace& s = m.glued.space();
        REQUIRE(s.plot(0).domain.dim == 1);
        REQUIRE(s.plot(1).domain.dim == 2);
        REQUIRE(points_equal(s, s.eval(0, {3.0}), s.eval(1, {3.0, 0.0})));
        REQUIRE_FALSE(points_equal(s, s.eval(0, {3.0}), s.eval(1, {3.0, 0.5})));
        REQUIRE(definiteness_check(s, m.glued.metric, {7, 2.0}).verdict == Verdict::definite);
    }
}

TEST_CASE("subspaces along inductions") {
    MetricSpace plane = euclidean(2);
    SECTION("open interval of the line keeps the standard metric") {
        MetricSpace line = euclidean(1);
        std::vector<SubPlotSpec> plots(1);
        plots[0].domain = interval_domain(0.0, 1.0);
        plots[0].ambient_plot = 0;
        plots[0].embed = identity_chart_map(interval_domain(0.0, 1.0));
        plots[0].embed.target = ChartDomain::full(1);
        const SubspaceResult sub = subspace(line, plots, "(0,1)");
        REQUIRE(sub.sub.metric.eval({0, {0.5}, {1.0}, {1.0}}) == 1.0);
    }
    SECTION("diagonal into the product doubles the form") {
        MetricSpace prod = product(euclidean(1), euclidean(1));
        std::vector<SubPlotSpec> plots(1);
        plots[0].domain = ChartDomain::full(1);
        plots[0].ambient_plot = 0;
        plots[0].embed.source = ChartDomain::full(1);
        plots[0].embed.target = ChartDomain::full(2);
        plots[0].embed.value = [](const Vec& r) { return Vec{r[0], r[0]}; };
        plots[0].embed.jacobian_fn = [](const Vec&) {
            Mat j(2, 1);
            j(0, 0) = j(1, 0) = 1.0;
            return j;
        };
        const SubspaceResult diag = subspace(prod, plots, "diagonal");
        REQUIRE(diag.sub.metric.eval({0, {0.7}, {1.0}, {1.0}}) == Catch::Approx(2.0));
    }
}

TEST_CASE("sums") {
    MetricSpace a = euclidean(1), b = euclidean(1);
    SECTION("points in different copies are distinct") {
        MetricSpace s = sum({a, b});
        REQUIRE_FALSE(points_equal(s.space(), s.space().eval(0, {0.5}), s.space().eval(1, {0.5})));
        REQUIRE(s.space().family.size() == 2);
    }
    SECTION("a single summand keeps its metric values") {
        MetricSpace s = sum({a});
        REQUIRE(s.space().family.size() == 1);
        Rng rng(9);
        for (int i = 0; i < 20; ++i) {
            const Vec r = rng.vec_uniform(1, -3.0, 3.0);
            const Vec v = rng.vec_uniform(1, -2.0, 2.0);
            REQUIRE(s.metric.eval({0, r, v, v}) == a.metric.eval({0, r, v, v}));
        }
    }
    SECTION("glue tables of summands are carried over with shifted indices") {
        AdjunctionResult y = y_space();
        MetricSpace s = sum({euclidean(1), y.glued});
        REQUIRE(points_equal(s.space(), s.space().eval(1, {2.0}), s.space().eval(2, {2.0})));
        REQUIRE_FALSE(points_equal(s.space(), s.space().eval(0, {2.0}), s.space().eval(1, {2.0})));
    }
}

TEST_CASE("warped product of glued factors keeps transition consistency") {
    AdjunctionResult y = y_space();
    MetricSpace p = product(y.glued, euclidean(1));
    const DiffeoSpace& s = p.space();
    REQUIRE(s.family.size() == 2);
    // glued in the first factor: (x, t) with x > 1 matches across charts
    REQUIRE(points_equal(s, s.eval(0, {2.0, 0.5}), s.eval(1, {2.0, 0.5})));
    REQUIRE_FALSE(points_equal(s, s.eval(0, {0.5, 0.5}), s.eval(1, {0.5, 0.5})));
    REQUIRE(p.metric.eval({0, {2.0, 0.5}, {1.0, 1.0}, {1.0, 1.0}}) == Catch::Approx(2.0));
}
