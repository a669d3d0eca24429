#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fiberlab/fibermodel.hpp"

namespace fiberlab {

struct LoopError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed sampled loop: n points (theta_k = 2*pi*k/n) in a flat real ambient
/// space. Complex ambient spaces are stored as interleaved (re, im) pairs, so
/// a loop in C has dim 2, in C^2 dim 4, in C^4 dim 8. Closure is implicit:
/// the segment from sample n-1 back to sample 0 belongs to the loop.
class DiscreteLoop {
public:
    static constexpr std::size_t kMinSamples = 16;
    static constexpr std::size_t kDefaultSamples = 1024;

    DiscreteLoop(std::size_t dim, std::vector<double> flat);

    /// Samples f at theta_k = 2*pi*k/n; f returns a point of size dim.
    static DiscreteLoop sample(std::size_t dim, std::size_t n,
                               const std::function<std::vector<double>(double)>& f);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return flat_.size() / dim_; }
    std::span<const double> point(std::size_t k) const {
        return {flat_.data() + k * dim_, dim_};
    }
    C as_complex(std::size_t k) const;  // requires dim == 2

private:
    std::size_t dim_;
    std::vector<double> flat_;
};

enum class ModelLoopKind { Gamma, GammaTilde };

/// (cos t, sin t, +1) for Gamma, (cos t, sin t, -1) for GammaTilde.
DiscreteLoop sample_model_loop(ModelLoopKind kind, std::size_t n = DiscreteLoop::kDefaultSamples);

/// Samplewise image under h_{b,lambda}; every output sample is checked to lie
/// on the fiber of (b, lambda) to the residual tolerance.
DiscreteLoop pushforward_loop_real(const DiscreteLoop& model_loop, const RealScenarioParams& p);

/// The model loops of the complex construction, in C^2 (dim 4):
/// (s + e^{it}, (s + e^{it})^2 - 1) with s = +1 (index 1) or s = -1 (index 2).
DiscreteLoop complex_model_loop(int index, std::size_t n = DiscreteLoop::kDefaultSamples);

/// Samplewise image of a C^2 loop (u, v) under h_lambda, in C^4 (dim 8).
DiscreteLoop pushforward_loop_complex(const DiscreteLoop& loop, C lambda, C b);

/// Closed-form lambda -> 0 limits of the pushed-forward complex loops, in C^4:
/// (b/(e^{it}(e^{it}+2s)) ... , s + e^{it}, 0, 0) with s = +-1 by index.
DiscreteLoop complex_limit_loop(int index, C b, std::size_t n = DiscreteLoop::kDefaultSamples);

/// Total atan2 angle swept around center, divided by 2*pi and rounded.
/// Throws if the loop comes within 1e-6 of the center (samples or segments)
/// or if the rounding residual reaches 0.1 (under-sampled loop).
long winding_number(const DiscreteLoop& loop, C center);

/// Max over k of the Euclidean distance between matched samples.
double sup_distance(const DiscreteLoop& a, const DiscreteLoop& b);

/// (u, v, a) -> e^a * (u + i v); maps the unit cylinder onto C minus 0 and
/// the punctures (0, 1, a0) to e^{a0} * i.
C cylinder_to_plane(const ModelPointK& m);
DiscreteLoop cylinder_to_plane(const DiscreteLoop& loop);  // dim 3 -> dim 2

struct HomotopyVerdict {
    enum class Kind { Distinct, Equivalent, Inconclusive };
    Kind kind;
    std::string invariant;        // Distinct: name of the discriminating invariant
    long value_a = 0, value_b = 0;  // Distinct: the two invariant values
    double margin = 0.0;          // Equivalent: certified puncture clearance
    std::string reason;           // Inconclusive
};

/// Straight-line homotopy certificate between matched loops in the plane
/// punctured at `punctures`: Equivalent when every interpolated sample and
/// segment at 64 time steps keeps distance >= margin from every puncture;
/// Inconclusive otherwise. Never returns Distinct. For dim-3 loops the
/// interpolation is linear in (u, v, a) with (u, v) renormalized to the
/// cylinder, and clearance is measured in the plane via cylinder_to_plane.
HomotopyVerdict straight_line_homotopy_certify(const DiscreteLoop& a, const DiscreteLoop& b,
                                               std::span<const C> punctures, double margin);

/// Distinct iff winding numbers differ around some puncture; otherwise
/// Equivalent iff the straight-line certificate succeeds; else Inconclusive.
HomotopyVerdict homotopy_verdict(std::span<const C> punctures, const DiscreteLoop& a,
                                 const DiscreteLoop& b, double margin = 1e-6);

}  // namespace fiberlab
