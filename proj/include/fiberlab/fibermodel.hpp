#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "fiberlab/exactpoly.hpp"

namespace fiberlab {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tolerance table shared by the model maps and diagnostics.
namespace tol {
inline constexpr double kResidual = 1e-9;        // fiber membership
inline constexpr double kRank = 1e-6;            // Jacobian full-rank threshold
inline constexpr double kPunctureHard = 1e-12;   // hard error near punctures
inline constexpr double kPunctureWarn = 1e-6;    // warning zone near punctures
inline constexpr double kCylinder = 1e-9;        // |u^2+v^2-1| tolerance
}  // namespace tol

/// (u, v, a) on the unit cylinder {u^2+v^2 = 1} x R.
struct ModelPointK {
    double u, v, a;
};

struct FiberPoint4 {
    double x, y, z, lambda;
};

/// Parameters of the real construction: the target (b, lambda) with b > 0
/// and the auxiliary nonnegative polynomial f over the context (z, lambda).
struct RealScenarioParams {
    double b;
    double lambda;
    ExactPoly f;

    /// f(a, lambda) as a double.
    double f_at(double a) const;
};

/// (z^2 + lambda^2) * (lambda*z - 1)^2 over the context (z, lambda).
ExactPoly particular_f();

/// The map F(x,y,z,lambda) = (x^2 - y + y^2 f(z,lambda), lambda) over the
/// context (x, y, z, lambda), with f substituted in symbolically.
PolyMap real_theorem_map(const ExactPoly& f);

/// The map F(x,y,z,lambda) = (x(y^2+lambda z-1)(lambda y^2+lambda^2 z-lambda+1), lambda).
PolyMap complex_theorem_map();

/// Heights a0 excluded from the model cylinder: real roots of a -> f(a, lambda).
struct PunctureSet {
    std::vector<double> heights;
};

/// Root finding for a -> f(a, lambda) on [lo, hi]: sign-change bisection plus
/// critical-point probing (bisection on the z-derivative) for even-multiplicity
/// roots of a nonnegative f. Throws ModelError if bisection fails to converge.
PunctureSet puncture_heights(double lambda, const ExactPoly& f,
                             double lo = -64.0, double hi = 64.0);

/// The unique positive root xi of (u^2 + v^2 f(a,l)) xi^2 - v xi - b = 0.
/// Branch rule: the direct quadratic form for v > 0, the rationalized form
/// 2b / (sqrt(v^2 + 4b(u^2+v^2 f)) - v) for v <= 0; each has a denominator
/// bounded away from zero on its half.
double alpha_positive_root(const ModelPointK& m, const RealScenarioParams& p);

/// h: (u,v,a) -> (u*alpha, v*alpha, a, lambda); lands on the fiber of (b, lambda).
FiberPoint4 model_to_fiber_real(const ModelPointK& m, const RealScenarioParams& p);

/// g: (x,y,z,.) -> (x,y)/|(x,y)| with height z. Errors if (x,y) is numerically
/// at the origin (off-fiber input).
ModelPointK fiber_to_model_real(const FiberPoint4& pt);

using C = std::complex<double>;

/// h_lambda(u,v) = (b/(v(lambda v+1)), u, (v-u^2+1)/lambda, lambda); requires
/// lambda != 0 and v away from the punctures {0, -1/lambda}.
std::array<C, 4> h_complex(C u, C v, C lambda, C b);

/// g_lambda(x,y,z,lambda) = (y, y^2 + lambda z - 1).
std::array<C, 2> g_complex(C x, C y, C z, C lambda);

/// Case lambda = 0: (b/(y^2-1), y, z, 0); requires y away from +-1.
std::array<C, 4> case1_fiber_param(C y, C z, C b);

/// Fiber sheets of F = (x, [(x-1)w+1][x w-1]), w = xz + y^2, over (x0, t):
/// the quadratic x0(x0-1) w^2 + w - (1+t) = 0 in w has two roots w1, w2, and
/// each sheet is y -> (x0, y, (wi - y^2)/x0, .). Degenerate configurations
/// (x0 = 0 or a double root) yield a report, not an exception.
struct GurjarSheets {
    bool degenerate = false;
    std::string reason;         // set when degenerate
    C w1, w2;                   // the two roots when nondegenerate
    C x0, t;

    /// Point on sheet i (0 or 1) at parameter y: (x0, y, (wi - y^2)/x0).
    std::array<C, 3> sheet_point(int i, C y) const;
};

GurjarSheets gurjar_fiber_sheets(C x0, C t);

/// F = (x, [(x-1)(xz+y^2)+1][x(xz+y^2)-1]) over (x, y, z).
PolyMap gurjar_map();

struct SubmersionReport {
    double min_singular_value = 0.0;
    std::size_t argmin_index = 0;
    bool full_rank = false;  // min singular value > tol::kRank
};

/// Smallest Jacobian singular value over the cloud; the Jacobian is formed by
/// exact symbolic differentiation of F and evaluated in floating point.
/// Ties in the argmin resolve to the lowest index. Throws on an empty cloud.
SubmersionReport submersion_sample_report(const PolyMap& F,
                                          std::span<const std::array<double, 4>> points);
SubmersionReport submersion_sample_report_complex(const PolyMap& F,
                                                  std::span<const std::array<C, 4>> points);

}  // namespace fiberlab
