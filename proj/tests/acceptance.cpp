// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <cstdarg>
#include <cstdio>

#include "riemdiff/examples.hpp"

using namespace riemdiff;

namespace {

int failures = 0;

void report(int criterion, bool passed, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", criterion, passed ? "PASS" : "FAIL", detail.c_str());
    if (!passed) ++failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

}  // namespace

int main() {
    // 1. Euclidean oracle: bound in [5, 5+1e-6] within 10 s, witness length 5 +- 1e-8
    {
        auto r = examples::euclidean_distance_3_4();
        report(1, r.passed,
               fmt("bound=%.12g witness_length=%.12g time=%.2fs", r.result.bound,
                   r.witness_length, r.seconds));
    }

    // 2. Y-space: nonincreasing trace, level-L bound <= 2^{2-L} + 1e-6, final <= 0.07, <= 30 s
    {
        auto r = examples::y_space_schedule(6);
        std::string trace;
        for (double b : r.trace) trace += fmt("%.3g ", b);
        report(2, r.passed,
               fmt("trace=[ %s] monotone=%d schedule=%d final=%.3g time=%.2fs", trace.c_str(),
                   r.monotone, r.within_schedule, r.final_bound, r.seconds));
    }

    // 3. +-space: bound in [5, 5+1e-4]; positivity sanity for distinct points
    {
        auto r = examples::plus_space_checks();
        report(3, r.passed,
               fmt("bound=%.12g min_positive_bound=%.4g time=%.2fs", r.bound,
                   r.min_positive_bound, r.seconds));
    }

    // 4. Section pullback: max |s*g - 2 pi g_N| <= 1e-6 over 100 tangent doubles, <= 5 s
    {
        auto r = examples::section_pullback(100, 1e-6);
        report(4, r.passed, fmt("max_dev=%.3g time=%.2fs", r.max_dev, r.seconds));
    }

    // 5. Concatenation isometry: relative deviation <= 1e-6 over 50 polynomial families, <= 20 s
    {
        auto r = examples::concatenation_isometry(50, 1e-6);
        report(5, r.passed,
               fmt("max_rel_dev=%.6g families=%d time=%.2fs", r.max_rel_dev, r.families,
                   r.seconds));
    }

    // 6. Mapping-space distance: lower = sqrt(2 pi) within 1e-9, upper <= sqrt(2 pi) + 1e-3
    {
        auto r = examples::mapping_distance_certificate();
        report(6, r.passed,
               fmt("lower=%.12g upper=%.12g target=%.12g", r.lower, r.upper, r.target));
    }

    // 7. Warped product: definite with the eigenvalue floor; f == 1 equals the product metric
    {
        auto r = examples::warped_product_checks();
        report(7, r.passed,
               fmt("verdict=%s min_eig=%.9g floor=%.9g product_dev=%.3g",
                   to_string(r.report.verdict), r.report.min_eigenvalue, r.eig_floor,
                   r.product_dev));
    }

    // 8. Property suites: naturality 1e-4, bilinearity/symmetry 1e-10, bound symmetry and
    //    triangle inequality 1e-6, Lipschitz consistency 1e-6
    {
        auto nat = examples::naturality_suite(100, 1e-4);
        auto bil = examples::bilinearity_suite();
        auto bc = examples::bound_consistency();
        auto lip = examples::lipschitz_suite(200);
        const bool passed = nat.passed && bil.passed && bc.passed && lip.passed;
        report(8, passed,
               fmt("naturality=%.3g bilinearity=%.3g symmetry_gap=%.3g sym=%.3g tri=%.3g "
                   "lipschitz_gap=%.3g k=(%.6g,%.6g,%.6g)",
                   nat.max_dev, bil.max_rel_dev, bil.max_symmetry_gap, bc.symmetry_gap,
                   bc.triangle_gap, lip.worst_gap, lip.k_euclidean, lip.k_scaled, lip.k_warped));
    }

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria failed\n", failures);
    }
    return failures;
}
