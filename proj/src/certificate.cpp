#include "fiberlab/certificate.hpp"

namespace fiberlab {

NonnegCertificate NonnegCertificate::square_of(ExactPoly base) {
    return {Kind::SquareOf, std::move(base), {}};
}

NonnegCertificate NonnegCertificate::even_powers(ExactPoly p) {
    return {Kind::EvenPowersNonnegCoeffs, std::move(p), {}};
}

NonnegCertificate NonnegCertificate::sum_of(std::vector<NonnegCertificate> parts) {
    return {Kind::SumOf, ExactPoly(), std::move(parts)};
}

NonnegCertificate NonnegCertificate::product_of(std::vector<NonnegCertificate> parts) {
    return {Kind::ProductOf, ExactPoly(), std::move(parts)};
}

namespace {

// Structural soundness and, on success, the expansion of the certified
// expression. Returns nullopt when the structure fails to prove p >= 0.
std::optional<ExactPoly> expand_if_sound(const NonnegCertificate& cert,
                                         const std::vector<std::string>& vars) {
    using Kind = NonnegCertificate::Kind;
    switch (cert.kind) {
        case Kind::SquareOf: {
            if (cert.payload.vars() != vars) return std::nullopt;
            if (!cert.payload.is_real()) return std::nullopt;
            return cert.payload * cert.payload;
        }
        case Kind::EvenPowersNonnegCoeffs: {
            if (cert.payload.vars() != vars) return std::nullopt;
            for (const auto& t : cert.payload.terms()) {
                if (!t.coeff.is_real() || t.coeff.re < 0) return std::nullopt;
                for (uint32_t e : t.exps)
                    if (e % 2 != 0) return std::nullopt;
            }
            return cert.payload;
        }
        case Kind::SumOf: {
            ExactPoly acc(vars);
            for (const auto& c : cert.children) {
                auto e = expand_if_sound(c, vars);
                if (!e) return std::nullopt;
                acc = acc + *e;
            }
            return acc;
        }
        case Kind::ProductOf: {
            ExactPoly acc = ExactPoly::constant(vars, GaussQ(1));
            for (const auto& c : cert.children) {
                auto e = expand_if_sound(c, vars);
                if (!e) return std::nullopt;
                acc = acc * *e;
            }
            return acc;
        }
    }
    return std::nullopt;
}

}  // namespace

CertOutcome verify_nonneg_certificate(const ExactPoly& target, const NonnegCertificate& cert) {
    if (!target.is_real())
        throw PolyError("nonnegativity certificates apply to real coefficients only");
    auto expansion = expand_if_sound(cert, target.vars());
    if (!expansion) return CertOutcome::StructureRejected;
    return (*expansion == target) ? CertOutcome::Accepted : CertOutcome::ExpansionMismatch;
}

}  // namespace fiberlab
