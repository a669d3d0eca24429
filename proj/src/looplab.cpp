#include "fiberlab/looplab.hpp"

#include <cmath>
#include <numbers>

namespace fiberlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seg_point_dist(C a, C b, C p) {
    C ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2,
                          0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

}  // namespace

DiscreteLoop::DiscreteLoop(std::size_t dim, std::vector<double> flat)
    : dim_(dim), flat_(std::move(flat)) {
    if (dim_ == 0 || flat_.size() % dim_ != 0) throw LoopError("malformed sample buffer");
    if (size() < kMinSamples) throw LoopError("loop needs at least 16 samples");
}

DiscreteLoop DiscreteLoop::sample(std::size_t dim, std::size_t n,
                                  const std::function<std::vector<double>(double)>& f) {
    if (n < kMinSamples) throw LoopError("loop needs at least 16 samples");
    std::vector<double> flat;
    flat.reserve(n * dim);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> p = f(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
        if (p.size() != dim) throw LoopError("sampler returned wrong dimension");
        flat.insert(flat.end(), p.begin(), p.end());
    }
    return DiscreteLoop(dim, std::move(flat));
}

C DiscreteLoop::as_complex(std::size_t k) const {
    if (dim_ != 2) throw LoopError("as_complex requires a planar loop");
    auto p = point(k);
    return {p[0], p[1]};
}

DiscreteLoop sample_model_loop(ModelLoopKind kind, std::size_t n) {
    double h = (kind == ModelLoopKind::Gamma) ? 1.0 : -1.0;
    return DiscreteLoop::sample(3, n, [h](double t) {
        return std::vector<double>{std::cos(t), std::sin(t), h};
    });
}

DiscreteLoop pushforward_loop_real(const DiscreteLoop& model_loop, const RealScenarioParams& p) {
    if (model_loop.dim() != 3) throw LoopError("model loop must live in R^3");
    std::vector<double> flat;
    flat.reserve(model_loop.size() * 4);
    for (std::size_t k = 0; k < model_loop.size(); ++k) {
        auto q = model_loop.point(k);
        FiberPoint4 fp = model_to_fiber_real({q[0], q[1], q[2]}, p);
        const double pt[2] = {fp.z, fp.lambda};
        double residual =
            std::abs(fp.x * fp.x - fp.y +
                     fp.y * fp.y * p.f.evaluate_real(std::span<const double>(pt, 2)) - p.b);
        if (residual > tol::kResidual) throw LoopError("pushforward sample off the fiber");
        flat.insert(flat.end(), {fp.x, fp.y, fp.z, fp.lambda});
    }
    return DiscreteLoop(4, std::move(flat));
}

DiscreteLoop complex_model_loop(int index, std::size_t n) {
    if (index != 1 && index != 2) throw LoopError("loop index must be 1 or 2");
    double s = (index == 1) ? 1.0 : -1.0;
    return DiscreteLoop::sample(4, n, [s](double t) {
        C u = s + std::polar(1.0, t);
        C v = u * u - 1.0;
        return std::vector<double>{u.real(), u.imag(), v.real(), v.imag()};
    });
}

DiscreteLoop pushforward_loop_complex(const DiscreteLoop& loop, C lambda, C b) {
    if (loop.dim() != 4) throw LoopError("expected a loop in C^2");
    std::vector<double> flat;
    flat.reserve(loop.size() * 8);
    for (std::size_t k = 0; k < loop.size(); ++k) {
        auto q = loop.point(k);
        auto fp = h_complex({q[0], q[1]}, {q[2], q[3]}, lambda, b);
        C f = fp[0] * (fp[1] * fp[1] + lambda * fp[2] - 1.0) *
              (lambda * fp[1] * fp[1] + lambda * lambda * fp[2] - lambda + 1.0);
        if (std::abs(f - b) > tol::kResidual) throw LoopError("pushforward sample off the fiber");
        for (const C& c : fp) flat.insert(flat.end(), {c.real(), c.imag()});
    }
    return DiscreteLoop(8, std::move(flat));
}

DiscreteLoop complex_limit_loop(int index, C b, std::size_t n) {
    if (index != 1 && index != 2) throw LoopError("loop index must be 1 or 2");
    double s = (index == 1) ? 1.0 : -1.0;
    return DiscreteLoop::sample(8, n, [s, b](double t) {
        C e = std::polar(1.0, t);
        C x = b / (e * (e + 2.0 * s));
        C y = s + e;
        return std::vector<double>{x.real(), x.imag(), y.real(), y.imag(), 0.0, 0.0, 0.0, 0.0};
    });
}

long winding_number(const DiscreteLoop& loop, C center) {
    if (loop.dim() != 2) throw LoopError("winding number needs a planar loop");
    const std::size_t n = loop.size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        C a = loop.as_complex(k) - center;
        C b = loop.as_complex((k + 1) % n) - center;
        if (seg_point_dist(a + center, b + center, center) <= 1e-6)
            throw LoopError("loop too close to the winding center");
        total += std::atan2(a.real() * b.imag() - a.imag() * b.real(),
                            a.real() * b.real() + a.imag() * b.imag());
    }
    double w = total / kTwoPi;
    long rounded = std::lround(w);
    if (std::abs(w - static_cast<double>(rounded)) >= 0.1)
        throw LoopError("winding rounding residual >= 0.1: loop under-sampled");
    return rounded;
}

double sup_distance(const DiscreteLoop& a, const DiscreteLoop& b) {
    if (a.dim() != b.dim() || a.size() != b.size()) throw LoopError("loop shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        auto pa = a.point(k), pb = b.point(k);
        double d2 = 0.0;
        for (std::size_t j = 0; j < a.dim(); ++j) d2 += (pa[j] - pb[j]) * (pa[j] - pb[j]);
        m = std::max(m, std::sqrt(d2));
    }
    return m;
}

C cylinder_to_plane(const ModelPointK& m) {
    if (std::abs(m.u * m.u + m.v * m.v - 1.0) > tol::kCylinder)
        throw LoopError("point off the unit cylinder");
    return std::exp(m.a) * C(m.u, m.v);
}

DiscreteLoop cylinder_to_plane(const DiscreteLoop& loop) {
    if (loop.dim() != 3) throw LoopError("expected a cylinder loop");
    std::vector<double> flat;
    flat.reserve(loop.size() * 2);
    for (std::size_t k = 0; k < loop.size(); ++k) {
        auto p = loop.point(k);
        C z = cylinder_to_plane(ModelPointK{p[0], p[1], p[2]});
        flat.insert(flat.end(), {z.real(), z.imag()});
    }
    return DiscreteLoop(2, std::move(flat));
}

namespace {

// Interpolated loop at time t in [0, 1]; cylinder loops are renormalized and
// projected to the plane, planar loops interpolate directly. Returns false
// (instead of a loop) when renormalization degenerates.
bool interp_to_plane(const DiscreteLoop& a, const DiscreteLoop& b, double t,
                     std::vector<C>& out) {
    out.clear();
    for (std::size_t k = 0; k < a.size(); ++k) {
        auto pa = a.point(k), pb = b.point(k);
        if (a.dim() == 2) {
            out.emplace_back((1 - t) * pa[0] + t * pb[0], (1 - t) * pa[1] + t * pb[1]);
        } else {
            double u = (1 - t) * pa[0] + t * pb[0];
            double v = (1 - t) * pa[1] + t * pb[1];
            double h = (1 - t) * pa[2] + t * pb[2];
            double r = std::hypot(u, v);
            if (r < 1e-9) return false;
            out.push_back(std::exp(h) * C(u / r, v / r));
        }
    }
    return true;
}

}  // namespace

HomotopyVerdict straight_line_homotopy_certify(const DiscreteLoop& a, const DiscreteLoop& b,
                                               std::span<const C> punctures, double margin) {
    if (a.dim() != b.dim() || a.size() != b.size()) throw LoopError("loop shape mismatch");
    if (a.dim() != 2 && a.dim() != 3) throw LoopError("certifier handles planar or cylinder loops");
    if (margin <= 0) throw LoopError("margin must be positive");

    constexpr int kSteps = 64;
    double clearance = std::numeric_limits<double>::infinity();
    std::vector<C> snap;
    for (int j = 0; j <= kSteps; ++j) {
        double t = static_cast<double>(j) / kSteps;
        if (!interp_to_plane(a, b, t, snap))
            return {HomotopyVerdict::Kind::Inconclusive, "", 0, 0, 0.0,
                    "interpolation collapses onto the cylinder axis"};
        const std::size_t n = snap.size();
        for (std::size_t k = 0; k < n; ++k)
            for (const C& p : punctures)
                clearance = std::min(clearance, seg_point_dist(snap[k], snap[(k + 1) % n], p));
        if (clearance < margin)
            return {HomotopyVerdict::Kind::Inconclusive, "", 0, 0, clearance,
                    "interpolated loop enters the margin zone of a puncture"};
    }
    return {HomotopyVerdict::Kind::Equivalent, "", 0, 0, clearance, ""};
}

HomotopyVerdict homotopy_verdict(std::span<const C> punctures, const DiscreteLoop& a,
                                 const DiscreteLoop& b, double margin) {
    DiscreteLoop pa = (a.dim() == 3) ? cylinder_to_plane(a) : a;
    DiscreteLoop pb = (b.dim() == 3) ? cylinder_to_plane(b) : b;
    for (const C& p : punctures) {
        long wa = winding_number(pa, p);
        long wb = winding_number(pb, p);
        if (wa != wb) {
            std::string inv = "winding around (" + std::to_string(p.real()) + ", " +
                              std::to_string(p.imag()) + ")";
            return {HomotopyVerdict::Kind::Distinct, inv, wa, wb, 0.0, ""};
        }
    }
    return straight_line_homotopy_certify(a, b, punctures, margin);
}

}  // namespace fiberlab
