#pragma once

#include <memory>
#include <vector>

#include "fiberlab/exactpoly.hpp"

namespace fiberlab {

/// Structural evidence that a real polynomial is nonnegative on all of real
/// space. A certificate is a tree: squares, polynomials whose every monomial
/// has even exponents and a nonnegative coefficient, and sums/products of
/// certified pieces. Verification has two stages: the structural check and an
/// exact comparison of the certified expression against the target.
struct NonnegCertificate {
    enum class Kind { SquareOf, EvenPowersNonnegCoeffs, SumOf, ProductOf };

    Kind kind;
    ExactPoly payload;  // SquareOf: the base; EvenPowersNonnegCoeffs: the poly itself
    std::vector<NonnegCertificate> children;  // SumOf / ProductOf

    static NonnegCertificate square_of(ExactPoly base);
    static NonnegCertificate even_powers(ExactPoly p);
    static NonnegCertificate sum_of(std::vector<NonnegCertificate> parts);
    static NonnegCertificate product_of(std::vector<NonnegCertificate> parts);
};

enum class CertOutcome {
    Accepted,
    StructureRejected,   // tree does not prove nonnegativity
    ExpansionMismatch,   // tree is sound but does not expand to the target
};

/// Target must have real coefficients (throws PolyError otherwise). The two
/// failure modes are reported distinctly.
CertOutcome verify_nonneg_certificate(const ExactPoly& target, const NonnegCertificate& cert);

}  // namespace fiberlab
