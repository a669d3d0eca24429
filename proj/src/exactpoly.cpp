#include "fiberlab/exactpoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fiberlab {

std::string to_string(const Rational& q) {
    return q.get_str();
}

std::string to_string(const GaussQ& c) {
    if (c.is_real()) return to_string(c.re);
    std::ostringstream os;
    os << "(" << to_string(c.re);
    if (c.im > 0)
        os << "+" << to_string(c.im) << "*i";
    else
        os << "-" << to_string(-c.im) << "*i";
    os << ")";
    return os.str();
}

namespace {

uint32_t exp_total(const std::vector<uint32_t>& e) {
    uint32_t s = 0;
    for (uint32_t x : e) s += x;
    return s;
}

// Graded lexicographic, descending: higher total degree first, ties broken
// lexicographically on the exponent vector.
bool grlex_before(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    uint32_t da = exp_total(a), db = exp_total(b);
    if (da != db) return da > db;
    return a > b;
}

void require_same_context(const ExactPoly& a, const ExactPoly& b) {
    if (a.vars() != b.vars()) throw PolyError("variable-context mismatch");
}

}  // namespace

ExactPoly ExactPoly::constant(std::vector<std::string> vars, GaussQ c) {
    ExactPoly p(std::move(vars));
    if (!c.is_zero()) p.terms_.push_back({std::move(c), std::vector<uint32_t>(p.vars_.size(), 0)});
    return p;
}

ExactPoly ExactPoly::variable(std::vector<std::string> vars, const std::string& name) {
    ExactPoly p(std::move(vars));
    std::vector<uint32_t> e(p.vars_.size(), 0);
    e[p.var_index(name)] = 1;
    p.terms_.push_back({GaussQ(1), std::move(e)});
    return p;
}

std::size_t ExactPoly::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return i;
    throw PolyError("unknown variable: " + name);
}

bool ExactPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && exp_total(terms_[0].exps) == 0);
}

bool ExactPoly::is_real() const {
    for (const auto& t : terms_)
        if (!t.coeff.is_real()) return false;
    return true;
}

GaussQ ExactPoly::constant_value() const {
    if (!is_constant()) throw PolyError("not a constant polynomial");
    return terms_.empty() ? GaussQ() : terms_[0].coeff;
}

uint32_t ExactPoly::total_degree() const {
    uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, exp_total(t.exps));
    return d;
}

uint32_t ExactPoly::degree_in(const std::string& var) const {
    std::size_t i = var_index(var);
    uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exps[i]);
    return d;
}

void ExactPoly::normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return grlex_before(a.exps, b.exps); });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && out.back().exps == t.exps)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.coeff.is_zero(); });
    terms_ = std::move(out);
}

ExactPoly ExactPoly::from_terms(std::vector<std::string> vars, std::vector<Term> terms) {
    ExactPoly p(std::move(vars));
    for (const auto& t : terms)
        if (t.exps.size() != p.vars_.size())
            throw PolyError("exponent vector length does not match variable count");
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
}

ExactPoly ExactPoly::operator-() const {
    ExactPoly r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

ExactPoly operator+(const ExactPoly& a, const ExactPoly& b) {
    require_same_context(a, b);
    std::vector<ExactPoly::Term> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return ExactPoly::from_terms(a.vars_, std::move(terms));
}

ExactPoly operator-(const ExactPoly& a, const ExactPoly& b) { return a + (-b); }

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
    require_same_context(a, b);
    std::vector<ExactPoly::Term> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_) {
            ExactPoly::Term t;
            t.coeff = ta.coeff * tb.coeff;
            t.exps.resize(ta.exps.size());
            for (std::size_t i = 0; i < t.exps.size(); ++i) t.exps[i] = ta.exps[i] + tb.exps[i];
            terms.push_back(std::move(t));
        }
    return ExactPoly::from_terms(a.vars_, std::move(terms));
}

bool operator==(const ExactPoly& a, const ExactPoly& b) {
    if (a.vars_ != b.vars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff)
            return false;
    return true;
}

ExactPoly ExactPoly::pow(uint32_t n) const {
    ExactPoly result = constant(vars_, GaussQ(1));
    ExactPoly base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

ExactPoly ExactPoly::scaled(const GaussQ& c) const {
    if (c.is_zero()) return ExactPoly(vars_);
    ExactPoly r(*this);
    for (auto& t : r.terms_) t.coeff = t.coeff * c;
    return r;
}

ExactPoly ExactPoly::partial_derivative(const std::string& var) const {
    std::size_t i = var_index(var);
    std::vector<Term> terms;
    for (const auto& t : terms_) {
        if (t.exps[i] == 0) continue;
        Term d = t;
        d.coeff = d.coeff * GaussQ(Rational(static_cast<long>(t.exps[i])));
        d.exps[i] -= 1;
        terms.push_back(std::move(d));
    }
    return from_terms(vars_, std::move(terms));
}

GaussQ ExactPoly::evaluate_exact(std::span<const GaussQ> point) const {
    if (point.size() != vars_.size()) throw PolyError("evaluation arity mismatch");
    GaussQ sum;
    for (const auto& t : terms_) {
        GaussQ v = t.coeff;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            GaussQ base = point[i];
            uint32_t e = t.exps[i];
            while (e > 0) {
                if (e & 1) v = v * base;
                e >>= 1;
                if (e) base = base * base;
            }
        }
        sum += v;
    }
    return sum;
}

namespace {

template <typename T>
T pow_sq(T base, uint32_t e) {
    T r(1);
    while (e > 0) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

}  // namespace

double ExactPoly::evaluate_real(std::span<const double> point, double* err) const {
    if (point.size() != vars_.size()) throw PolyError("evaluation arity mismatch");
    if (!is_real()) throw PolyError("real evaluation of a complex-coefficient polynomial");
    double sum = 0.0, comp = 0.0, abs_sum = 0.0;
    for (const auto& t : terms_) {
        double v = to_double(t.coeff.re);
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (t.exps[i]) v *= pow_sq(point[i], t.exps[i]);
        abs_sum += std::abs(v);
        double y = v - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    if (err) {
        uint32_t d = total_degree();
        *err = abs_sum * (d + 2) * std::numeric_limits<double>::epsilon();
    }
    return sum;
}

std::complex<double> ExactPoly::evaluate_complex(std::span<const std::complex<double>> point,
                                                 double* err) const {
    if (point.size() != vars_.size()) throw PolyError("evaluation arity mismatch");
    std::complex<double> sum = 0.0, comp = 0.0;
    double abs_sum = 0.0;
    for (const auto& t : terms_) {
        std::complex<double> v(to_double(t.coeff.re), to_double(t.coeff.im));
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (t.exps[i]) v *= pow_sq(point[i], t.exps[i]);
        abs_sum += std::abs(v);
        std::complex<double> y = v - comp;
        std::complex<double> s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    if (err) {
        uint32_t d = total_degree();
        *err = abs_sum * (d + 2) * std::numeric_limits<double>::epsilon();
    }
    return sum;
}

RatFunc ExactPoly::substitute(const std::map<std::string, RatFunc>& bindings,
                              const std::vector<std::string>& target_vars) const {
    for (const auto& [name, rf] : bindings) {
        var_index(name);  // must exist in the source context
        if (rf.num().vars() != target_vars)
            throw PolyError("binding for " + name + " is not over the target context");
    }
    RatFunc acc{ExactPoly(target_vars)};
    for (const auto& t : terms_) {
        RatFunc term{ExactPoly::constant(target_vars, t.coeff)};
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (t.exps[i] == 0) continue;
            auto it = bindings.find(vars_[i]);
            RatFunc base = (it != bindings.end())
                               ? it->second
                               : RatFunc{ExactPoly::variable(target_vars, vars_[i])};
            term = term * base.pow(t.exps[i]);
        }
        acc = acc + term;
    }
    return acc;
}

std::string ExactPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        GaussQ c = t.coeff;
        std::string sign;
        if (c.is_real() && c.re < 0) {
            sign = first ? "-" : " - ";
            c = -c;
        } else {
            sign = first ? "" : " + ";
        }
        os << sign;
        std::vector<std::string> factors;
        bool all_zero = exp_total(t.exps) == 0;
        if (!(c == GaussQ(1)) || all_zero) factors.push_back(fiberlab::to_string(c));
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (t.exps[i] == 0) continue;
            if (t.exps[i] == 1)
                factors.push_back(vars_[i]);
            else
                factors.push_back(vars_[i] + "^" + std::to_string(t.exps[i]));
        }
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) os << "*";
            os << factors[i];
        }
        first = false;
    }
    return os.str();
}

ExactPoly poly_arith(const ExactPoly& a, const ExactPoly& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return a * b;
    }
    throw PolyError("unreachable");
}

bool identity_witness_check(const ExactPoly& target,
                            const std::vector<ExactPoly>& generators,
                            const std::vector<ExactPoly>& cofactors) {
    if (generators.size() != cofactors.size())
        throw PolyError("generator/cofactor length mismatch");
    ExactPoly acc = target;
    for (std::size_t i = 0; i < generators.size(); ++i)
        acc = acc - cofactors[i] * generators[i];
    return acc.is_zero();
}

std::optional<ExactPoly> try_divide(const ExactPoly& num, const ExactPoly& den) {
    if (num.vars() != den.vars()) throw PolyError("variable-context mismatch");
    if (den.is_zero()) throw PolyError("division by the zero polynomial");
    ExactPoly rem = num;
    std::vector<ExactPoly::Term> quot;
    const auto& lt_den = den.terms().front();
    while (!rem.is_zero()) {
        const auto& lt_rem = rem.terms().front();
        ExactPoly::Term q;
        q.exps.resize(lt_rem.exps.size());
        for (std::size_t i = 0; i < q.exps.size(); ++i) {
            if (lt_rem.exps[i] < lt_den.exps[i]) return std::nullopt;
            q.exps[i] = lt_rem.exps[i] - lt_den.exps[i];
        }
        q.coeff = lt_rem.coeff / lt_den.coeff;
        ExactPoly qm = ExactPoly::from_terms(num.vars(), {q});
        rem = rem - qm * den;
        quot.push_back(std::move(q));
    }
    return ExactPoly::from_terms(num.vars(), std::move(quot));
}

RatFunc::RatFunc(ExactPoly num, ExactPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.vars() != den_.vars()) throw PolyError("variable-context mismatch");
    if (den_.is_zero()) throw PolyError("identically-zero denominator");
    reduce();
}

RatFunc::RatFunc(ExactPoly num)
    : num_(std::move(num)), den_(ExactPoly::constant(num_.vars(), GaussQ(1))) {}

bool RatFunc::is_polynomial() const {
    return den_ == ExactPoly::constant(den_.vars(), GaussQ(1));
}

void RatFunc::reduce() {
    if (den_.is_constant()) {
        GaussQ c = den_.constant_value();
        num_ = num_.scaled(c.inverse());
        den_ = ExactPoly::constant(num_.vars(), GaussQ(1));
        return;
    }
    if (auto q = try_divide(num_, den_)) {
        num_ = std::move(*q);
        den_ = ExactPoly::constant(num_.vars(), GaussQ(1));
        return;
    }
    // Normalize the leading coefficient of the denominator to 1 so that
    // equal functions reduce to equal representations.
    GaussQ lc = den_.terms().front().coeff;
    num_ = num_.scaled(lc.inverse());
    den_ = den_.scaled(lc.inverse());
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.num_.is_zero()) throw PolyError("division by the zero rational function");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

bool operator==(const RatFunc& a, const RatFunc& b) {
    // Cross-multiplied equality; exact.
    return (a.num_ * b.den_) == (b.num_ * a.den_);
}

RatFunc RatFunc::pow(uint32_t n) const {
    RatFunc r{ExactPoly::constant(num_.vars(), GaussQ(1))};
    RatFunc base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return r;
}

std::string RatFunc::to_string() const {
    if (is_polynomial()) return num_.to_string();
    return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

PolyMap::PolyMap(std::vector<ExactPoly> comps) : components(std::move(comps)) {
    if (components.empty()) throw PolyError("empty polynomial map");
    for (const auto& c : components)
        if (c.vars() != components.front().vars())
            throw PolyError("map components must share one variable context");
}

}  // namespace fiberlab
