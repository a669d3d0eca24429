#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fiberlab/rational.hpp"

namespace fiberlab {

class RatFunc;

struct PolyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Multivariate polynomial with exact Gaussian-rational coefficients over a
/// named, ordered variable list. Canonical form is maintained after every
/// operation: terms sorted in graded lexicographic order (descending), no
/// zero coefficients, no duplicate exponent vectors. Equality is structural.
class ExactPoly {
public:
    struct Term {
        GaussQ coeff;
        std::vector<uint32_t> exps;  // aligned with the variable list
    };

    ExactPoly() = default;
    explicit ExactPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static ExactPoly constant(std::vector<std::string> vars, GaussQ c);
    static ExactPoly variable(std::vector<std::string> vars, const std::string& name);

    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_real() const;  // all coefficients have zero imaginary part
    GaussQ constant_value() const;  // requires is_constant()
    uint32_t total_degree() const;
    uint32_t degree_in(const std::string& var) const;
    std::size_t var_index(const std::string& name) const;  // throws if unknown

    ExactPoly operator-() const;
    friend ExactPoly operator+(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator-(const ExactPoly& a, const ExactPoly& b);
    friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
    friend bool operator==(const ExactPoly& a, const ExactPoly& b);
    friend bool operator!=(const ExactPoly& a, const ExactPoly& b) { return !(a == b); }

    ExactPoly pow(uint32_t n) const;
    ExactPoly scaled(const GaussQ& c) const;

    ExactPoly partial_derivative(const std::string& var) const;

    GaussQ evaluate_exact(std::span<const GaussQ> point) const;
    /// Compensated (Kahan) term summation; if err is non-null it receives an
    /// accumulated rounding-error estimate for the returned value.
    double evaluate_real(std::span<const double> point, double* err = nullptr) const;
    std::complex<double> evaluate_complex(std::span<const std::complex<double>> point,
                                          double* err = nullptr) const;

    /// Substitute a subset of variables by rational functions over a target
    /// context. Unbound variables must exist (by name) in the target context.
    RatFunc substitute(const std::map<std::string, RatFunc>& bindings,
                       const std::vector<std::string>& target_vars) const;

    std::string to_string() const;

    /// Used by the builders; normalizes into canonical form.
    static ExactPoly from_terms(std::vector<std::string> vars, std::vector<Term> terms);

private:
    void normalize();
    std::vector<std::string> vars_;
    std::vector<Term> terms_;
};

enum class ArithOp { Add, Sub, Mul };
ExactPoly poly_arith(const ExactPoly& a, const ExactPoly& b, ArithOp op);

/// target - sum_i cofactor_i * generator_i == 0, checked exactly.
bool identity_witness_check(const ExactPoly& target,
                            const std::vector<ExactPoly>& generators,
                            const std::vector<ExactPoly>& cofactors);

/// Exact multivariate division attempt in graded-lex order. Returns the
/// quotient when den divides num exactly, nullopt otherwise.
std::optional<ExactPoly> try_divide(const ExactPoly& num, const ExactPoly& den);

/// Ratio of polynomials over a shared context. Reduction cancels only exact
/// content found by trial division of the numerator by the denominator; when
/// it succeeds the denominator becomes 1. Denominators are normalized to a
/// unit leading coefficient so equal functions compare equal after reduction.
class RatFunc {
public:
    RatFunc() = default;
    RatFunc(ExactPoly num, ExactPoly den);
    explicit RatFunc(ExactPoly num);

    const ExactPoly& num() const { return num_; }
    const ExactPoly& den() const { return den_; }
    bool is_polynomial() const;

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    friend bool operator==(const RatFunc& a, const RatFunc& b);
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    RatFunc pow(uint32_t n) const;
    std::string to_string() const;

private:
    void reduce();
    ExactPoly num_;
    ExactPoly den_;
};

/// Ordered list of polynomials over one shared variable context.
struct PolyMap {
    std::vector<ExactPoly> components;

    explicit PolyMap(std::vector<ExactPoly> comps);
    const std::vector<std::string>& vars() const { return components.front().vars(); }
};

}  // namespace fiberlab
