#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fiberlab/fibermodel.hpp"
#include "fiberlab/parser.hpp"
#include "fiberlab/scenarios.hpp"

using namespace fiberlab;

namespace {

RealScenarioParams params(double b, double lambda) { return {b, lambda, particular_f()}; }

// Bisection oracle for the unique positive root of
// (u^2 + v^2 f(a,lambda)) xi^2 - v xi - b = 0, independent of the closed form.
double alpha_bisect(const ModelPointK& m, const RealScenarioParams& p) {
    double A = m.u * m.u + m.v * m.v * p.f_at(m.a);
    auto eq = [&](double xi) { return A * xi * xi - m.v * xi - p.b; };
    double hi = 1.0;
    while (eq(hi) < 0) hi *= 2;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (eq(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double residual_F(const FiberPoint4& q, const RealScenarioParams& p) {
    const double zl[2] = {q.z, q.lambda};
    double f = p.f.evaluate_real(std::span<const double>(zl, 2));
    return std::abs(q.x * q.x - q.y + q.y * q.y * f - p.b);
}

}  // namespace

TEST_CASE("particular f and its punctures") {
    ExactPoly f = particular_f();
    CHECK(f == parse_expression({"(z^2+lambda^2)*(lambda*z-1)^2",
                                 {"z", "lambda"},
                                 Field::Real}));
    auto p1 = puncture_heights(0.5, f);
    REQUIRE(p1.heights.size() == 1);
    CHECK(p1.heights[0] == doctest::Approx(2.0).epsilon(1e-9));
    auto p0 = puncture_heights(0.0, f);
    REQUIRE(p0.heights.size() == 1);
    CHECK(std::abs(p0.heights[0]) < 1e-9);
    auto pm = puncture_heights(-0.25, f);
    REQUIRE(pm.heights.size() == 1);
    CHECK(pm.heights[0] == doctest::Approx(-4.0).epsilon(1e-9));
}

TEST_CASE("alpha at the degenerate point and trivial cases") {
    // (0,-1,a0) with f(a0,lambda)=0: the equation collapses to -v*xi = b, xi = b
    RealScenarioParams p = params(1.7, 0.5);
    CHECK(std::abs(alpha_positive_root({0, -1, 2.0}, p) - 1.7) < 1e-12);
    // u=1, v=0, b=1: xi^2 = 1
    RealScenarioParams q = params(1.0, 0.3);
    CHECK(alpha_positive_root({1, 0, 0.7}, q) == doctest::Approx(1.0).epsilon(1e-12));
    // generic point vs bisection oracle
    RealScenarioParams r = params(1.0, 0.3);
    ModelPointK m{std::cos(1.0), std::sin(1.0), 1.0};
    CHECK(std::abs(alpha_positive_root(m, r) - alpha_bisect(m, r)) < 1e-12);
}

TEST_CASE("alpha matches the one-variable quadratic oracle on the unit loop") {
    // m = (cos t, sin t, 1), b = 1: the equation specializes to
    // xi^2 (cos^2 t + sin^2 t (1+l^2)(1-l)^2) - xi sin t - 1 = 0.
    RealScenarioParams p = params(1.0, 0.3);
    for (int k = 0; k < 1024; ++k) {
        double th = 2 * M_PI * k / 1024.0;
        ModelPointK m{std::cos(th), std::sin(th), 1.0};
        double coeff = std::cos(th) * std::cos(th) +
                       std::sin(th) * std::sin(th) * (1 + 0.3 * 0.3) * (0.3 - 1) * (0.3 - 1);
        auto eq = [&](double xi) { return coeff * xi * xi - std::sin(th) * xi - 1.0; };
        double hi = 1.0;
        while (eq(hi) < 0) hi *= 2;
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (eq(mid) < 0 ? lo : hi) = mid;
        }
        CHECK(std::abs(alpha_positive_root(m, p) - 0.5 * (lo + hi)) < 1e-10);
    }
}

TEST_CASE("both alpha branches agree where both are defined") {
    RealScenarioParams p = params(1.3, 0.2);
    for (std::size_t i = 0; i < 5000; ++i) {
        double th = 2 * M_PI * lattice_coord(i, 0);
        double a = 0.25 + 1.5 * lattice_coord(i, 1);
        double u = std::cos(th), v = std::sin(th);
        double A = u * u + v * v * p.f_at(a);
        double disc = std::sqrt(v * v + 4 * p.b * A);
        if (std::abs(2 * A) < 1e-6 || std::abs(disc - v) < 1e-6) continue;
        double direct = (v + disc) / (2 * A);
        double rationalized = 2 * p.b / (disc - v);
        CHECK(std::abs(direct - rationalized) <= 1e-9 * (1 + std::abs(direct)));
        CHECK(std::abs(alpha_positive_root({u, v, a}, p) - direct) <=
              1e-9 * (1 + std::abs(direct)));
    }
}

TEST_CASE("alpha is continuous across the branch switch") {
    // Path through the degenerate point (0,-1,a0), f(a0, lambda) = 0, a0 = 1/lambda = 2
    RealScenarioParams p = params(1.0, 0.5);
    double prev = 0;
    bool first = true;
    for (int k = -500; k <= 500; ++k) {
        double th = -M_PI / 2 + 1e-4 * k;  // crosses v = -1 at th = -pi/2
        ModelPointK m{std::cos(th), std::sin(th), 2.0};
        double a = alpha_positive_root(m, p);
        if (!first) CHECK(std::abs(a - prev) < 1e-5);
        prev = a;
        first = false;
    }
    // and across v = 0 where the branch rule switches formulas
    prev = 0;
    first = true;
    for (int k = -500; k <= 500; ++k) {
        double th = 1e-7 * k;
        ModelPointK m{std::cos(th), std::sin(th), 1.0};
        double a = alpha_positive_root(m, p);
        if (!first) CHECK(std::abs(a - prev) < 1e-6);
        prev = a;
        first = false;
    }
}

TEST_CASE("model/fiber round trips and residuals over the lattice cloud") {
    double max_res = 0, max_rt = 0, min_puncture_gap = 1e300;
    for (std::size_t i = 0; i < 10000; ++i) {
        double th = 2 * M_PI * lattice_coord(i, 0);
        double a = 0.25 + 1.5 * lattice_coord(i, 1);
        double b = 0.5 + 1.5 * lattice_coord(i, 2);
        double lam = -0.5 + lattice_coord(i, 3);
        RealScenarioParams p{b, lam, particular_f()};
        ModelPointK m{std::cos(th), std::sin(th), a};
        FiberPoint4 q = model_to_fiber_real(m, p);
        max_res = std::max(max_res, residual_F(q, p));
        ModelPointK back = fiber_to_model_real(q);
        double rt = std::hypot(std::hypot(back.u - m.u, back.v - m.v), back.a - m.a);
        max_rt = std::max(max_rt, rt);
        // the model image never approaches a puncture (0,1,a0)
        if (std::abs(lam) > 1e-3) {
            double a0 = 1.0 / lam;
            double gap = std::sqrt(back.u * back.u + (back.v - 1) * (back.v - 1) +
                                   (back.a - a0) * (back.a - a0));
            min_puncture_gap = std::min(min_puncture_gap, gap);
        }
    }
    CHECK(max_res <= 1e-9);
    CHECK(max_rt <= 1e-9);
    CHECK(min_puncture_gap > 1e-6);
}

TEST_CASE("degenerate-point image and the simple fiber projection") {
    RealScenarioParams p = params(1.0, 0.5);
    FiberPoint4 q = model_to_fiber_real({0, -1, 2.0}, p);
    CHECK(q.x == doctest::Approx(0.0));
    CHECK(q.y == doctest::Approx(-1.0));
    CHECK(q.z == doctest::Approx(2.0));
    ModelPointK m = fiber_to_model_real({3, 4, 2, 0.5});
    CHECK(m.u == doctest::Approx(0.6));
    CHECK(m.v == doctest::Approx(0.8));
    CHECK(m.a == doctest::Approx(2.0));
}

TEST_CASE("errors: punctures and invalid parameters") {
    RealScenarioParams p = params(1.0, 0.5);
    CHECK_THROWS_AS(alpha_positive_root({0, 1, 2.0}, p), ModelError);  // the puncture
    RealScenarioParams bad{-1.0, 0.5, particular_f()};
    CHECK_THROWS_AS(alpha_positive_root({1, 0, 0}, bad), ModelError);
    CHECK_THROWS_AS(alpha_positive_root({0.5, 0.5, 0}, p), ModelError);  // off-cylinder
    CHECK_THROWS_AS(fiber_to_model_real({0, 0, 1, 0}), ModelError);
}

TEST_CASE("complex model maps: round trip and hand-checked values") {
    C lambda(0.2, 0.05), b(1.0, 0.0);
    double max_rt = 0, max_res = 0;
    for (std::size_t i = 0; i < 10000; ++i) {
        C u(-1 + 2 * lattice_coord(i, 0), -1 + 2 * lattice_coord(i, 1));
        C v = std::polar(0.5 + lattice_coord(i, 2), 2 * M_PI * lattice_coord(i, 3));
        auto q = h_complex(u, v, lambda, b);
        auto g = g_complex(q[0], q[1], q[2], q[3]);
        max_rt = std::max(max_rt, std::max(std::abs(g[0] - u), std::abs(g[1] - v)));
        C f = q[0] * (q[1] * q[1] + lambda * q[2] - 1.0) *
              (lambda * q[1] * q[1] + lambda * lambda * q[2] - lambda + 1.0);
        max_res = std::max(max_res, std::abs(f - b));
    }
    CHECK(max_rt <= 1e-9);
    CHECK(max_res <= 1e-9);

    // u=0, v=1, lambda=1, b=2 -> (1, 0, 2, 1); F = (1*(0+2-1)*(0+2-1+1), 1) = (2, 1)
    auto q = h_complex(C(0), C(1), C(1), C(2));
    CHECK(std::abs(q[0] - C(1)) < 1e-15);
    CHECK(std::abs(q[1]) < 1e-15);
    CHECK(std::abs(q[2] - C(2)) < 1e-15);
    CHECK_THROWS_AS(h_complex(C(0), C(0), C(1), C(2)), ModelError);  // v = 0 puncture
    CHECK_THROWS_AS(h_complex(C(0), C(-1), C(1), C(2)), ModelError);  // v = -1/lambda

    // g lands on the puncture value v=0 when y=0, z=1/lambda
    auto gz = g_complex(C(5), C(0), C(1) / C(0.5), C(0.5));
    CHECK(std::abs(gz[0]) < 1e-15);
    CHECK(std::abs(gz[1]) < 1e-15);
}

TEST_CASE("exact round trip of the complex construction via substitution") {
    // g2(h(u,v)) = v as an identity of rational functions over (u, v, l, b)
    const std::vector<std::string> S{"y", "z", "l"};
    const std::vector<std::string> T{"u", "v", "l", "b"};
    ExactPoly g2 = parse_expression({"y^2 + l*z - 1", S, Field::Complex});
    RatFunc zsub(parse_expression({"v - u^2 + 1", T, Field::Complex}),
                 ExactPoly::variable(T, "l"));
    RatFunc ru(ExactPoly::variable(T, "u"));
    RatFunc got = g2.substitute({{"y", ru}, {"z", zsub}}, T);
    CHECK(got == RatFunc(ExactPoly::variable(T, "v")));

    // F1(h(u,v)) = b exactly
    const std::vector<std::string> S4{"x", "y", "z", "l"};
    ExactPoly f =
        parse_expression({"x*(y^2+l*z-1)*(l*y^2+l^2*z-l+1)", S4, Field::Complex});
    RatFunc xsub(ExactPoly::variable(T, "b"),
                 parse_expression({"v*(l*v+1)", T, Field::Complex}));
    RatFunc res = f.substitute({{"x", xsub}, {"y", ru}, {"z", zsub}}, T);
    CHECK(res == RatFunc(ExactPoly::variable(T, "b")));
}

TEST_CASE("the lambda = 0 fiber parametrization") {
    auto q = case1_fiber_param(C(0), C(0), C(1));
    CHECK(std::abs(q[0] - C(-1)) < 1e-15);
    auto r = case1_fiber_param(C(2), C(5), C(3));
    CHECK(std::abs(r[0] - C(1)) < 1e-15);  // 3/(4-1) = 1; x(y^2-1) = 3
    CHECK(std::abs(r[0] * (r[1] * r[1] - 1.0) - C(3)) < 1e-12);
    CHECK_THROWS_AS(case1_fiber_param(C(1), C(0), C(1)), ModelError);
}

TEST_CASE("two-sheet fibers near the origin") {
    PolyMap F = gurjar_map();
    int checked = 0;
    for (std::size_t i = 0; i < 20; ++i) {
        C x0 = std::polar(0.05 + 0.25 * lattice_coord(i, 0), 2 * M_PI * lattice_coord(i, 1));
        C t = 0.3 * C(-1 + 2 * lattice_coord(i, 2), -1 + 2 * lattice_coord(i, 3));
        GurjarSheets sh = gurjar_fiber_sheets(x0, t);
        REQUIRE(!sh.degenerate);
        CHECK(std::abs(sh.w1 - sh.w2) > 1e-6);  // two distinct sheets
        // quadratic roots agree with a brute-force polynomial-root oracle
        C a = x0 * (x0 - 1.0);
        for (C w : {sh.w1, sh.w2})
            CHECK(std::abs(a * w * w + w - (1.0 + t)) < 1e-9);
        for (int k = 0; k < 100; ++k) {
            C y(-1 + 2 * lattice_coord(k, 4), -1 + 2 * lattice_coord(k, 5));
            for (int s = 0; s < 2; ++s) {
                auto pt = sh.sheet_point(s, y);
                std::complex<double> arr[3] = {pt[0], pt[1], pt[2]};
                std::span<const std::complex<double>> sp(arr, 3);
                CHECK(std::abs(F.components[0].evaluate_complex(sp) - x0) < 1e-9);
                CHECK(std::abs(F.components[1].evaluate_complex(sp) - t) < 1e-9);
                ++checked;
            }
        }
    }
    CHECK(checked >= 100);
    CHECK(gurjar_fiber_sheets(C(0), C(0.1)).degenerate);
    // x0 = 2: discriminant 1 + 8(1+t) vanishes at t = -9/8, a double root
    CHECK(gurjar_fiber_sheets(C(2), C(-9.0 / 8.0)).degenerate);
}

TEST_CASE("submersion sampling") {
    // real construction over the criterion cloud
    PolyMap Freal = real_theorem_map(particular_f());
    std::vector<std::array<double, 4>> cloud;
    for (std::size_t i = 0; i < 10000; ++i) {
        double th = 2 * M_PI * lattice_coord(i, 0);
        double a = 0.25 + 1.5 * lattice_coord(i, 1);
        double b = 0.5 + 1.5 * lattice_coord(i, 2);
        double lam = -0.5 + lattice_coord(i, 3);
        RealScenarioParams p{b, lam, particular_f()};
        FiberPoint4 q = model_to_fiber_real({std::cos(th), std::sin(th), a}, p);
        cloud.push_back({q.x, q.y, q.z, q.lambda});
    }
    SubmersionReport rep = submersion_sample_report(Freal, cloud);
    CHECK(rep.full_rank);
    CHECK(rep.min_singular_value > 1e-6);

    // complex construction on h images
    PolyMap Fc = complex_theorem_map();
    std::vector<std::array<C, 4>> ccloud;
    for (std::size_t i = 0; i < 10000; ++i) {
        C u(-1 + 2 * lattice_coord(i, 0), -1 + 2 * lattice_coord(i, 1));
        C v = std::polar(0.5 + lattice_coord(i, 2), 2 * M_PI * lattice_coord(i, 3));
        C lambda = std::polar(0.05 + 0.25 * lattice_coord(i, 4), 2 * M_PI * lattice_coord(i, 5));
        auto q = h_complex(u, v, lambda, C(1.0));
        ccloud.push_back({q[0], q[1], q[2], q[3]});
    }
    SubmersionReport repc = submersion_sample_report_complex(Fc, ccloud);
    CHECK(repc.full_rank);

    // constant map: zero Jacobian
    const std::vector<std::string> V{"x", "y", "z", "lambda"};
    PolyMap constmap({ExactPoly::constant(V, GaussQ(3)), ExactPoly::constant(V, GaussQ(1))});
    std::vector<std::array<double, 4>> one{{0.1, 0.2, 0.3, 0.4}};
    CHECK(submersion_sample_report(constmap, one).min_singular_value == 0.0);
    CHECK_THROWS_AS(submersion_sample_report(Freal, {}), ModelError);
}
