#include "fiberlab/fibermodel.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace fiberlab {

namespace {

const std::vector<std::string> kZL{"z", "lambda"};
const std::vector<std::string> kXYZL{"x", "y", "z", "lambda"};

ExactPoly zl_var(const std::string& n) { return ExactPoly::variable(kZL, n); }
ExactPoly xyzl_var(const std::string& n) { return ExactPoly::variable(kXYZL, n); }
ExactPoly xyzl_const(long c) { return ExactPoly::constant(kXYZL, GaussQ(c)); }

}  // namespace

double RealScenarioParams::f_at(double a) const {
    const double pt[2] = {a, lambda};
    return f.evaluate_real(std::span<const double>(pt, 2));
}

ExactPoly particular_f() {
    ExactPoly z = zl_var("z"), l = zl_var("lambda");
    ExactPoly one = ExactPoly::constant(kZL, GaussQ(1));
    return (z * z + l * l) * (l * z - one) * (l * z - one);
}

PolyMap real_theorem_map(const ExactPoly& f) {
    ExactPoly x = xyzl_var("x"), y = xyzl_var("y"), l = xyzl_var("lambda");
    RatFunc f4 = f.substitute({}, kXYZL);
    if (!f4.is_polynomial()) throw ModelError("f must be polynomial");
    ExactPoly F1 = x * x - y + y * y * f4.num();
    return PolyMap({F1, l});
}

PolyMap complex_theorem_map() {
    ExactPoly x = xyzl_var("x"), y = xyzl_var("y"), z = xyzl_var("z"), l = xyzl_var("lambda");
    ExactPoly one = xyzl_const(1);
    ExactPoly fac1 = y * y + l * z - one;
    ExactPoly fac2 = l * y * y + l * l * z - l + one;
    return PolyMap({x * fac1 * fac2, l});
}

PolyMap gurjar_map() {
    const std::vector<std::string> vars{"x", "y", "z"};
    ExactPoly x = ExactPoly::variable(vars, "x");
    ExactPoly y = ExactPoly::variable(vars, "y");
    ExactPoly z = ExactPoly::variable(vars, "z");
    ExactPoly one = ExactPoly::constant(vars, GaussQ(1));
    ExactPoly w = x * z + y * y;
    return PolyMap({x, ((x - one) * w + one) * (x * w - one)});
}

namespace {

// Bisection for a sign change of fn on [lo, hi]; fn(lo), fn(hi) have opposite
// signs on entry.
template <typename Fn>
double bisect(Fn&& fn, double lo, double hi) {
    double flo = fn(lo);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0) != (fm < 0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PunctureSet puncture_heights(double lambda, const ExactPoly& f, double lo, double hi) {
    auto eval = [&](const ExactPoly& p, double a) {
        const double pt[2] = {a, lambda};
        return p.evaluate_real(std::span<const double>(pt, 2));
    };
    ExactPoly df = f.partial_derivative("z");
    std::vector<double> roots;
    const int n = 8192;
    double prev_f = eval(f, lo), prev_df = eval(df, lo), prev_a = lo;
    for (int k = 1; k <= n; ++k) {
        double a = lo + (hi - lo) * k / n;
        double fv = eval(f, a), dfv = eval(df, a);
        if ((prev_f < 0) != (fv < 0))
            roots.push_back(bisect([&](double t) { return eval(f, t); }, prev_a, a));
        else if ((prev_df < 0) != (dfv < 0)) {
            // Even-multiplicity roots of a nonnegative f sit at critical points.
            double c = bisect([&](double t) { return eval(df, t); }, prev_a, a);
            if (std::abs(eval(f, c)) < 1e-9) roots.push_back(c);
        }
        prev_f = fv;
        prev_df = dfv;
        prev_a = a;
    }
    std::sort(roots.begin(), roots.end());
    PunctureSet out;
    for (double r : roots)
        if (out.heights.empty() || r - out.heights.back() > 1e-6) out.heights.push_back(r);
    return out;
}

double alpha_positive_root(const ModelPointK& m, const RealScenarioParams& p) {
    if (p.b <= 0) throw ModelError("alpha requires b > 0");
    if (std::abs(m.u * m.u + m.v * m.v - 1.0) > tol::kCylinder)
        throw ModelError("model point off the unit cylinder");
    double fa = p.f_at(m.a);
    double A = m.u * m.u + m.v * m.v * fa;
    double disc = std::sqrt(m.v * m.v + 4.0 * p.b * A);
    if (m.v > 0) {
        if (A <= tol::kPunctureHard * tol::kPunctureHard && std::abs(m.v - 1.0) < tol::kPunctureWarn)
            throw ModelError("model point is the excluded puncture (0,1,a0)");
        return (m.v + disc) / (2.0 * A);
    }
    // v <= 0: the rationalized branch; its denominator is >= |v| > 0 here
    // (and equals 1 at the degenerate point (0,-1,a0) where A = 0).
    return 2.0 * p.b / (disc - m.v);
}

FiberPoint4 model_to_fiber_real(const ModelPointK& m, const RealScenarioParams& p) {
    double a = alpha_positive_root(m, p);
    return {m.u * a, m.v * a, m.a, p.lambda};
}

ModelPointK fiber_to_model_real(const FiberPoint4& pt) {
    double r = std::hypot(pt.x, pt.y);
    if (r < tol::kPunctureHard)
        throw ModelError("(x, y) at the origin: input is off every fiber over b > 0");
    return {pt.x / r, pt.y / r, pt.z};
}

std::array<C, 4> h_complex(C u, C v, C lambda, C b) {
    if (std::abs(lambda) < tol::kPunctureHard) throw ModelError("h requires lambda != 0");
    if (std::abs(b) < tol::kPunctureHard) throw ModelError("h requires b != 0");
    if (std::abs(v) < tol::kPunctureHard || std::abs(v + 1.0 / lambda) < tol::kPunctureHard)
        throw ModelError("v at a puncture of the model space");
    return {b / (v * (lambda * v + 1.0)), u, (v - u * u + 1.0) / lambda, lambda};
}

std::array<C, 2> g_complex(C /*x*/, C y, C z, C lambda) {
    return {y, y * y + lambda * z - 1.0};
}

std::array<C, 4> case1_fiber_param(C y, C z, C b) {
    if (std::abs(y - 1.0) < tol::kPunctureHard || std::abs(y + 1.0) < tol::kPunctureHard)
        throw ModelError("y at a puncture (+-1)");
    return {b / (y * y - 1.0), y, z, C(0.0)};
}

std::array<C, 3> GurjarSheets::sheet_point(int i, C y) const {
    if (degenerate) throw ModelError("degenerate sheet configuration: " + reason);
    C w = (i == 0) ? w1 : w2;
    return {x0, y, (w - y * y) / x0};
}

GurjarSheets gurjar_fiber_sheets(C x0, C t) {
    GurjarSheets out;
    out.x0 = x0;
    out.t = t;
    if (std::abs(x0) < tol::kPunctureHard) {
        out.degenerate = true;
        out.reason = "x0 = 0: sheets are not graphs over y";
        return out;
    }
    // x0(x0-1) w^2 + w - (1+t) = 0
    C a = x0 * (x0 - 1.0);
    if (std::abs(a) < tol::kPunctureHard) {
        out.degenerate = true;
        out.reason = "leading coefficient vanishes (x0 = 1): single sheet";
        return out;
    }
    C disc = 1.0 + 4.0 * a * (1.0 + t);
    if (std::abs(disc) < tol::kPunctureHard) {
        out.degenerate = true;
        out.reason = "double root of the w-quadratic";
        return out;
    }
    C s = std::sqrt(disc);
    out.w1 = (-1.0 + s) / (2.0 * a);
    out.w2 = (-1.0 - s) / (2.0 * a);
    return out;
}

namespace {

template <typename Scalar, typename Point>
SubmersionReport submersion_impl(const PolyMap& F, std::span<const Point> points) {
    if (points.empty()) throw ModelError("empty point cloud");
    const auto& vars = F.vars();
    std::vector<std::vector<ExactPoly>> jac(F.components.size());
    for (std::size_t i = 0; i < F.components.size(); ++i)
        for (const auto& v : vars) jac[i].push_back(F.components[i].partial_derivative(v));

    SubmersionReport rep;
    rep.min_singular_value = std::numeric_limits<double>::infinity();
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    for (std::size_t k = 0; k < points.size(); ++k) {
        Mat J(jac.size(), vars.size());
        for (std::size_t i = 0; i < jac.size(); ++i)
            for (std::size_t j = 0; j < vars.size(); ++j) {
                std::span<const Scalar> pt(points[k].data(), vars.size());
                if constexpr (std::is_same_v<Scalar, double>)
                    J(i, j) = jac[i][j].evaluate_real(pt);
                else
                    J(i, j) = jac[i][j].evaluate_complex(pt);
            }
        Eigen::JacobiSVD<Mat> svd(J);
        double s = svd.singularValues().minCoeff();
        if (s < rep.min_singular_value) {  // strict: lowest index wins ties
            rep.min_singular_value = s;
            rep.argmin_index = k;
        }
    }
    rep.full_rank = rep.min_singular_value > tol::kRank;
    return rep;
}

}  // namespace

SubmersionReport submersion_sample_report(const PolyMap& F,
                                          std::span<const std::array<double, 4>> points) {
    return submersion_impl<double>(F, points);
}

SubmersionReport submersion_sample_report_complex(const PolyMap& F,
                                                  std::span<const std::array<C, 4>> points) {
    return submersion_impl<C>(F, points);
}

}  // namespace fiberlab
