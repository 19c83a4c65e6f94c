#include <catch2/catch_amalgamated.hpp>

#include "riemdiff/constructions.hpp"
#include "riemdiff/examples.hpp"
#include "riemdiff/mapping.hpp"

#include "oracles.hpp"

using namespace riemdiff;

namespace {

MetricSpace plane() { return euclidean(2); }

MappingPlot circle_family(const DiffeoSpace& N) {
    return coords_loop_family(
        N, 1, [](const Vec& r, double th) { return Vec{r[0] * std::cos(th), r[0] * std::sin(th)}; },
        [](const Vec&, double th) {
            Mat j(2, 1);
            j(0, 0) = std::cos(th);
            j(1, 0) = std::sin(th);
            return j;
        });
}

}  // namespace

TEST_CASE("bump function pins the paper's constraints") {
    REQUIRE(bump_b(0.0) == 0.0);
    REQUIRE(bump_b(M_PI / 4.0) == 0.0);
    REQUIRE(bump_b(3.0 * M_PI / 4.0) == Catch::Approx(kTwoPi));
    REQUIRE(bump_b(M_PI) == Catch::Approx(kTwoPi));
    REQUIRE(bump_b(M_PI / 2.0) == Catch::Approx(M_PI));
    // weakly increasing
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
        const double b = bump_b(-1.0 + i * (M_PI + 2.0) / 200.0);
        REQUIRE(b >= prev - 1e-15);
        prev = b;
    }
}

TEST_CASE("mapping metric by quadrature") {
    MetricSpace e2 = plane();
    const DiffeoSpace& N = e2.space();
    SECTION("scaling circle family integrates to 2 pi") {
        const MappingPlot P = circle_family(N);
        for (double r : {0.5, 1.0, 2.5})
            REQUIRE(mapping_metric_eval(N, e2.metric, P, {r}, {1.0}, {1.0}) ==
                    Catch::Approx(kTwoPi).margin(1e-10));
    }
    SECTION("constant-in-r families have zero energy") {
        const MappingPlot P = coords_loop_family(
            N, 1, [](const Vec&, double th) { return Vec{std::cos(th), std::sin(th)}; });
        REQUIRE(mapping_metric_eval(N, e2.metric, P, {0.3}, {1.0}, {1.0}) ==
                Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("agrees with an adaptive-Simpson oracle on a lumpy integrand") {
        const MappingPlot P = coords_loop_family(
            N, 1,
            [](const Vec& r, double th) {
                return Vec{r[0] * std::cos(th) + 0.3 * std::sin(2 * th) * r[0] * r[0],
                           r[0] * std::sin(th)};
            },
            [](const Vec& r, double th) {
                Mat j(2, 1);
                j(0, 0) = std::cos(th) + 0.6 * std::sin(2 * th) * r[0];
                j(1, 0) = std::sin(th);
                return j;
            });
        const Vec r = {1.2};
        const double got = mapping_metric_eval(N, e2.metric, P, r, {1.0}, {1.0});
        auto integrand = [&](double th) {
            const double dx = std::cos(th) + 0.6 * std::sin(2 * th) * 1.2;
            const double dy = std::sin(th);
            return dx * dx + dy * dy;
        };
        // asymmetric split so the oracle's probe points miss the symmetry axes
        const double want = oracles::integrate_simpson(integrand, 0.0, 2.5) +
                            oracles::integrate_simpson(integrand, 2.5, kTwoPi);
        // closed form: 2 pi + (0.72)^2 pi
        REQUIRE(want == Catch::Approx(kTwoPi + 0.72 * 0.72 * M_PI).margin(1e-9));
        REQUIRE(got == Catch::Approx(want).margin(1e-9));
    }
    SECTION("symmetric and positive as a form") {
        const MappingPlot P = circle_family(N);
        Rng rng(3);
        for (int i = 0; i < 20; ++i) {
            const Vec r = {rng.uniform(0.5, 2.0)};
            const Vec v = {rng.uniform(-2.0, 2.0)}, w = {rng.uniform(-2.0, 2.0)};
            REQUIRE(mapping_metric_eval(N, e2.metric, P, r, v, w) ==
                    mapping_metric_eval(N, e2.metric, P, r, w, v));
            REQUIRE(mapping_metric_eval(N, e2.metric, P, r, v, v) >= 0.0);
        }
    }
}

TEST_CASE("section of the evaluation map") {
    MetricSpace e2 = plane();
    const DiffeoSpace& N = e2.space();
    SECTION("constant loops evaluate to their point at every angle") {
        const Point y = N.eval(0, {1.0, 2.0});
        const LoopPoint s = section_loop(y);
        for (double th : {0.0, 1.0, 3.5, 6.2}) REQUIRE(points_equal(N, s(th), y));
    }
    SECTION("s* g = 2 pi g_N on random tangent doubles") {
        const MappingPlot s = section_compose(N, 0);
        Rng rng(7);
        for (int i = 0; i < 100; ++i) {
            const Vec r = rng.vec_uniform(2, -2.0, 2.0);
            const Vec v = rng.vec_uniform(2, -2.0, 2.0);
            const Vec w = rng.vec_uniform(2, -2.0, 2.0);
            REQUIRE(mapping_metric_eval(N, e2.metric, s, r, v, w) ==
                    Catch::Approx(kTwoPi * dot(v, w)).margin(1e-6));
        }
    }
    SECTION("ev_theta after the section is the identity") {
        const MappingPlot s = section_compose(N, 0);
        Rng rng(9);
        for (int i = 0; i < 30; ++i) {
            const Vec r = rng.vec_uniform(2, -3.0, 3.0);
            const double th = rng.uniform(0.0, kTwoPi);
            REQUIRE(points_equal(N, N.eval(s.adjoint(r, th).plot, s.adjoint(r, th).coords),
                                 N.eval(0, r)));
        }
    }
}

TEST_CASE("concatenation") {
    MetricSpace e2 = plane();
    const DiffeoSpace& N = e2.space();
    SECTION("constant pairs concatenate to the constant loop") {
        const MappingPlot c = coords_loop_family(
            N, 2, [](const Vec& r, double) { return Vec{r[0], r[1]}; },
            [](const Vec&, double) { return Mat::identity(2); });
        const MappingPlot cat = concatenate(N, WedgePlot{c, c});
        Rng rng(11);
        for (int i = 0; i < 20; ++i) {
            const Vec r = rng.vec_uniform(2, -2.0, 2.0);
            const double th = rng.uniform(0.0, kTwoPi);
            REQUIRE(dist(cat.adjoint(r, th).coords, r) == 0.0);
        }
    }
    SECTION("circle + constant traverses on [0, pi] and rests afterwards") {
        const MappingPlot left = circle_family(N);
        const MappingPlot rest = coords_loop_family(
            N, 1, [](const Vec& r, double) { return Vec{r[0], 0.0}; },
            [](const Vec&, double) {
                Mat j(2, 1);
                j(0, 0) = 1.0;
                return j;
            });
        const MappingPlot cat = concatenate(N, WedgePlot{left, rest});
        const Vec r = {1.0};
        // during the second half the loop sits at the basepoint (r, 0)
        for (double th : {M_PI + 0.1, 4.0, kTwoPi - 0.1})
            REQUIRE(dist(cat.adjoint(r, th).coords, {1.0, 0.0}) < 1e-12);
        // during the first half it walks the circle via b
        REQUIRE(dist(cat.adjoint(r, M_PI / 2).coords, {std::cos(M_PI), std::sin(M_PI)}) < 1e-12);
    }
    SECTION("incoherent basepoints are rejected") {
        const MappingPlot left = circle_family(N);  // starts at (r, 0)
        const MappingPlot off = coords_loop_family(
            N, 1, [](const Vec& r, double) { return Vec{r[0] + 1.0, 0.0}; });
        REQUIRE_THROWS_AS(concatenate(N, WedgePlot{left, off}), ConstructionError);
    }
    SECTION("quadrature of the concatenated family matches the substitution oracle") {
        // independent oracle: g(c P)_r(1,1) = int_0^pi GL(b(t)) dt + int_0^pi GR(b(t)) dt
        Rng rng(13);
        const WedgePlot wedge = examples::random_polynomial_wedge(N, rng);
        const MappingPlot cat = concatenate(N, wedge);
        const Vec r = {0.4};
        const double got = mapping_metric_eval(N, e2.metric, cat, r, {1.0}, {1.0});
        auto tensor_at = [&](const MappingPlot& P, double u) {
            return evaluation_tensor(N, e2.metric, P, r, u, {1.0}, {1.0});
        };
        const double want =
            oracles::integrate_simpson([&](double t) { return tensor_at(wedge.left, bump_b(t)); },
                                       0.0, M_PI, 1e-10) +
            oracles::integrate_simpson([&](double t) { return tensor_at(wedge.right, bump_b(t)); },
                                       0.0, M_PI, 1e-10);
        REQUIRE(got == Catch::Approx(want).margin(1e-8));
    }
    SECTION("corrected change of variables: weighting by b' recovers the wedge metric") {
        Rng rng(17);
        const WedgePlot wedge = examples::random_polynomial_wedge(N, rng);
        const Vec r = {-0.3};
        auto tensor_at = [&](const MappingPlot& P, double u) {
            return evaluation_tensor(N, e2.metric, P, r, u, {1.0}, {1.0});
        };
        const double bprime_h = 1e-6;
        auto weighted = [&](const MappingPlot& P) {
            return oracles::integrate_simpson(
                [&](double t) {
                    const double db = (bump_b(t + bprime_h) - bump_b(t - bprime_h)) / (2 * bprime_h);
                    return tensor_at(P, bump_b(t)) * db;
                },
                0.0, M_PI, 1e-10);
        };
        const double wedge_value =
            wedge_metric_eval(N, e2.metric, wedge, r, {1.0}, {1.0});
        REQUIRE(weighted(wedge.left) + weighted(wedge.right) ==
                Catch::Approx(wedge_value).margin(1e-6));
    }
}

TEST_CASE("wedge metric evaluation") {
    MetricSpace e2 = plane();
    const DiffeoSpace& N = e2.space();
    const MappingPlot constant = coords_loop_family(
        N, 1, [](const Vec& r, double) { return Vec{r[0], 0.0}; },
        [](const Vec&, double) {
            Mat j(2, 1);
            j(0, 0) = 1.0;
            return j;
        });
    SECTION("families constant in the parameter have zero energy") {
        const MappingPlot frozen = coords_loop_family(
            N, 1, [](const Vec&, double th) { return Vec{std::cos(th), std::sin(th)}; },
            [](const Vec&, double) { return Mat(2, 1); });
        REQUIRE(wedge_metric_eval(N, e2.metric, WedgePlot{frozen, frozen}, {0.2}, {1.0}, {1.0}) ==
                0.0);
    }
    SECTION("two copies of a family double the value") {
        const MappingPlot circle = circle_family(N);
        const double one = mapping_metric_eval(N, e2.metric, circle, {1.0}, {1.0}, {1.0});
        const double two = wedge_metric_eval(N, e2.metric, WedgePlot{circle, circle}, {1.0},
                                             {1.0}, {1.0});
        REQUIRE(two == Catch::Approx(2.0 * one).margin(1e-10));
    }
    SECTION("circle plus constant gives 2 pi + 2 pi of basepoint motion") {
        const MappingPlot circle = circle_family(N);
        const double v = wedge_metric_eval(N, e2.metric, WedgePlot{circle, constant}, {1.0},
                                           {1.0}, {1.0});
        // the coherent 'constant' family still moves with r at unit speed
        REQUIRE(v == Catch::Approx(2.0 * kTwoPi).margin(1e-10));
    }
    SECTION("fixed-basepoint circle family plus frozen loop gives exactly 2 pi") {
        // left(r)(th) = (cos th + r sin th, sin th + r sin th): basepoint (1, 0)
        // for every r, and the r-derivative integrates to 2 pi
        const MappingPlot left = coords_loop_family(
            N, 1,
            [](const Vec& r, double th) {
                return Vec{std::cos(th) + r[0] * std::sin(th),
                           std::sin(th) + r[0] * std::sin(th)};
            },
            [](const Vec&, double th) {
                Mat j(2, 1);
                j(0, 0) = std::sin(th);
                j(1, 0) = std::sin(th);
                return j;
            });
        const MappingPlot frozen = coords_loop_family(
            N, 1, [](const Vec&, double) { return Vec{1.0, 0.0}; },
            [](const Vec&, double) { return Mat(2, 1); });
        const double v =
            wedge_metric_eval(N, e2.metric, WedgePlot{left, frozen}, {0.3}, {1.0}, {1.0});
        REQUIRE(v == Catch::Approx(kTwoPi).margin(1e-10));
    }
    SECTION("alternative convention adds the basepoint tensor") {
        const MappingPlot circle = circle_family(N);
        const double plain =
            wedge_metric_eval(N, e2.metric, WedgePlot{circle, circle}, {1.0}, {1.0}, {1.0});
        const double doubled = wedge_metric_eval(N, e2.metric, WedgePlot{circle, circle}, {1.0},
                                                 {1.0}, {1.0}, {8, 32}, true);
        REQUIRE(doubled == Catch::Approx(plain + 1.0).margin(1e-10));
    }
}

TEST_CASE("condition (E)") {
    MetricSpace e2 = plane();
    const DiffeoSpace& N = e2.space();
    const SpaceId sid = N.id;
    auto identity_recognizer = [](const RestrictedPlot& rp) {
        Rng rng(3);
        for (int s = 0; s < 9; ++s) {
            Vec x = rp.center;
            for (auto& c : x) c += rp.radius * rng.uniform(-1.0, 1.0);
            const Point p = rp.value(x);
            if (p.plot != 0 || dist(p.coords, x) > 1e-9) return false;
        }
        return true;
    };
    std::vector<double> thetas;
    for (int i = 0; i < 6; ++i) thetas.push_back(kTwoPi * i / 6);
    SECTION("the tautological family P(x)(m) = x passes for G = {id}") {
        MappingPlot P;
        P.domain = ChartDomain::full(2);
        P.adjoint = [sid](const Vec& r, double) { return Point{sid, 0, r, {}}; };
        const ConditionEReport rep =
            condition_E_check(P, identity_recognizer, thetas, P.domain.grid(3, 1.0));
        REQUIRE(rep.passed);
        REQUIRE(std::isfinite(rep.min_certified_radius));
    }
    SECTION("a shifted family fails for G = {id}") {
        MappingPlot P;
        P.domain = ChartDomain::full(2);
        P.adjoint = [sid](const Vec& r, double) {
            Vec c = r;
            c[0] += 1.0;
            return Point{sid, 0, c, {}};
        };
        const ConditionEReport rep =
            condition_E_check(P, identity_recognizer, thetas, P.domain.grid(3, 1.0));
        REQUIRE_FALSE(rep.passed);
        REQUIRE_FALSE(rep.failures.empty());
    }
    SECTION("the always-true recognizer accepts anything") {
        MappingPlot P = circle_family(N);
        const ConditionEReport rep = condition_E_check(
            P, [](const RestrictedPlot&) { return true; }, thetas, P.domain.grid(3, 1.0));
        REQUIRE(rep.passed);
    }
}

TEST_CASE("wedge-map conversions are mutually inverse") {
    MetricSpace e2 = plane();
    const DiffeoSpace& N = e2.space();
    const SpaceId sid = N.id;
    const WedgeMap gamma = [sid](int branch, double th) {
        // both branches leave the shared basepoint (1, 0)
        if (branch == 0) return Point{sid, 0, {std::cos(th), std::sin(th)}, {}};
        return Point{sid, 0, {1.0, std::sin(th) * 0.5}, {}};
    };
    const WedgePoint z = l_convert(N, gamma);
    REQUIRE(points_equal(N, N.eval(0, z.left(1.3).coords), N.eval(0, gamma(0, 1.3).coords)));
    const WedgeMap back = nu_convert(N, z);
    Rng rng(19);
    for (int i = 0; i < 40; ++i) {
        const int branch = rng.integer(0, 1);
        const double th = rng.uniform(0.0, kTwoPi);
        REQUIRE(dist(back(branch, th).coords, gamma(branch, th).coords) <= 1e-12);
    }
    SECTION("incoherent pairs are rejected") {
        WedgePoint bad;
        bad.left = constant_loop(N.eval(0, {0.0, 0.0}));
        bad.right = constant_loop(N.eval(0, {1.0, 0.0}));
        REQUIRE_THROWS_AS(nu_convert(N, bad), ConstructionError);
    }
}

TEST_CASE("mapping-space distance bounds") {
    MetricSpace e2 = plane();
    const DiffeoSpace& N = e2.space();
    const auto d_N = euclidean_point_distance();
    SECTION("constant loops: sqrt(2 pi) |p - q|") {
        const LoopPoint f0 = constant_loop(N.eval(0, {0.0, 0.0}));
        const LoopPoint f1 = constant_loop(N.eval(0, {3.0, 4.0}));
        REQUIRE(mapping_distance_lower_bound(d_N, f0, f1) ==
                Catch::Approx(std::sqrt(kTwoPi) * 5.0).margin(1e-9));
    }
    SECTION("coincident loops give zero") {
        const LoopPoint f = constant_loop(N.eval(0, {0.4, -0.2}));
        REQUIRE(mapping_distance_lower_bound(d_N, f, f) == 0.0);
    }
    SECTION("constant against the unit circle") {
        const LoopPoint f0 = constant_loop(N.eval(0, {0.0, 0.0}));
        LoopPoint f1;
        const SpaceId sid = N.id;
        f1.value = [sid](double th) { return Point{sid, 0, {std::cos(th), std::sin(th)}, {}}; };
        REQUIRE(mapping_distance_lower_bound(d_N, f0, f1) ==
                Catch::Approx(std::sqrt(kTwoPi)).margin(1e-9));
    }
    SECTION("sandwich: the lower bound never exceeds a homotopy length") {
        Rng rng(23);
        for (int i = 0; i < 5; ++i) {
            const Vec p = rng.vec_uniform(2, -1.0, 1.0), q = rng.vec_uniform(2, -1.0, 1.0);
            const LoopPoint f0 = constant_loop(N.eval(0, p));
            const LoopPoint f1 = constant_loop(N.eval(0, q));
            const double lower = mapping_distance_lower_bound(d_N, f0, f1);
            const double upper = mapping_distance_upper_linear(N, e2.metric, f0, f1);
            REQUIRE(lower <= upper + 1e-9);
        }
    }
}

TEST_CASE("loop construction probes") {
    MetricSpace e2 = plane();
    const DiffeoSpace& N = e2.space();
    const SpaceId sid = N.id;
    LoopPoint good;
    good.value = [sid](double th) { return Point{sid, 0, {std::cos(th), std::sin(th)}, {}}; };
    REQUIRE_NOTHROW(check_loop(N, good));
    LoopPoint torn;
    torn.value = [sid](double th) { return Point{sid, 0, {th, 0.0}, {}}; };  // not periodic
    REQUIRE_THROWS_AS(check_loop(N, torn), ConstructionError);
}
