#include "catenoid/operator_algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace catenoid::ops {

namespace {

auto term_key(const OpTerm& t) { return std::make_tuple(t.r_exp, t.d_r, t.d_tau, t.lap_s); }

std::vector<OpTerm> normalize(std::vector<OpTerm> terms) {
    std::sort(terms.begin(), terms.end(), term_key_less);
    std::vector<OpTerm> out;
    for (auto& t : terms) {
        if (!out.empty() && term_key(out.back()) == term_key(t)) {
            out.back().coeff += t.coeff;
            if (out.back().coeff.is_zero()) out.pop_back();
        } else if (!t.coeff.is_zero()) {
            out.push_back(t);
        }
    }
    return out;
}

void check_exponent(Rational a, const AlgebraConfig& cfg) {
    if (a.den() > cfg.max_exp_denominator)
        throw std::domain_error("operator_algebra: r-exponent denominator " +
                                std::to_string(a.den()) + " exceeds configured bound " +
                                std::to_string(cfg.max_exp_denominator));
}

// binomial coefficient as a rational (arguments stay tiny)
Rational binom(int n, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
    return r;
}

// falling factorial a(a-1)...(a-m+1)
Rational falling(Rational a, int m) {
    Rational r = 1;
    for (int i = 0; i < m; ++i) r = r * (a - Rational(i));
    return r;
}

}  // namespace

bool term_key_less(const OpTerm& a, const OpTerm& b) { return term_key(a) < term_key(b); }

std::string OpTerm::str() const {
    std::ostringstream os;
    os << coeff.str();
    if (!r_exp.is_zero()) os << "*r^" << r_exp.str();
    for (int i = 0; i < d_r; ++i) os << "*d_r";
    for (int i = 0; i < d_tau; ++i) os << "*d_tau";
    for (int i = 0; i < lap_s; ++i) os << "*Lap_S";
    return os.str();
}

OperatorSum::OperatorSum(std::vector<OpTerm> terms) : terms_(normalize(std::move(terms))) {}

OperatorSum OperatorSum::monomial(Rational coeff, Rational r_exp, int d_r, int d_tau, int lap_s) {
    return OperatorSum({OpTerm{coeff, r_exp, d_r, d_tau, lap_s}});
}

OperatorSum operator+(const OperatorSum& a, const OperatorSum& b) {
    std::vector<OpTerm> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return OperatorSum(std::move(t));
}

OperatorSum operator-(const OperatorSum& a, const OperatorSum& b) {
    return a + (Rational(-1) * b);
}

OperatorSum operator*(Rational c, const OperatorSum& a) {
    std::vector<OpTerm> t = a.terms_;
    for (auto& x : t) x.coeff *= c;
    return OperatorSum(std::move(t));
}

bool operator==(const OperatorSum& a, const OperatorSum& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        const auto &s = a.terms_[i], &t = b.terms_[i];
        if (s.coeff != t.coeff || term_key(s) != term_key(t)) return false;
    }
    return true;
}

std::string OperatorSum::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) s += " + ";
        s += terms_[i].str();
    }
    return s;
}

OperatorSum compose(const OperatorSum& a, const OperatorSum& b, const AlgebraConfig& cfg) {
    std::vector<OpTerm> out;
    for (const auto& s : a.terms()) {
        for (const auto& t : b.terms()) {
            // d_r^i ∘ r^a = sum_m C(i,m) (a)_m r^{a-m} d_r^{i-m}
            for (int m = 0; m <= s.d_r; ++m) {
                Rational c = s.coeff * t.coeff * binom(s.d_r, m) * falling(t.r_exp, m);
                if (c.is_zero()) continue;
                OpTerm u;
                u.coeff = c;
                u.r_exp = s.r_exp + t.r_exp - Rational(m);
                u.d_r = s.d_r - m + t.d_r;
                u.d_tau = s.d_tau + t.d_tau;
                u.lap_s = s.lap_s + t.lap_s;
                check_exponent(u.r_exp, cfg);
                out.push_back(u);
            }
        }
    }
    return OperatorSum(std::move(out));
}

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b, const AlgebraConfig& cfg) {
    return compose(a, b, cfg) - compose(b, a, cfg);
}

OperatorSum conjugate(const OperatorSum& a, Rational s, const AlgebraConfig& cfg) {
    return compose(OperatorSum::r_power(s), compose(a, OperatorSum::r_power(-s), cfg), cfg);
}

OperatorSum op_K() { return OperatorSum::monomial(1, Rational(3, 2), 1); }

OperatorSum op_Q0() {
    return OperatorSum::monomial(Rational(-3, 4), -2) + OperatorSum::monomial(-2, 0, 1, 1) +
           OperatorSum::monomial(1, 0, 2) + OperatorSum::monomial(1, -2, 0, 0, 1);
}

OperatorSum op_Q1() {
    return op_Q0() + OperatorSum::monomial(-1, -1, 0, 1) + OperatorSum::monomial(-1, -1, 1) +
           OperatorSum::monomial(Rational(3, 4), -2);
}

std::vector<IdentityCheck> verify_identity_suite(bool corrupt_q1) {
    using Sum = OperatorSum;
    const Sum K = op_K();
    const Sum Q0 = op_Q0();
    Sum Q1 = op_Q1();
    if (corrupt_q1) {
        // potential 1*r^{-2} instead of 3/4*r^{-2}
        Q1 = Q1 + Sum::monomial(Rational(1, 4), -2);
    }
    const Sum dr = Sum::d_r();
    const Sum dtau = Sum::d_tau();
    const Sum lap = Sum::lap_s();
    const auto rp = [](Rational a) { return Sum::r_power(a); };

    std::vector<IdentityCheck> checks;
    auto add = [&](std::string name, const Sum& lhs, const Sum& rhs) {
        Sum res = lhs - rhs;
        checks.push_back({std::move(name), res.empty(), std::move(res)});
    };

    // the five basic commutator identities
    add("[K, r^-2] = -2 r^-3/2", commutator(K, rp({-2, 1})),
        Sum::monomial(-2, Rational(-3, 2)));
    add("[K, d_r] = -3/2 r^-1 K", commutator(K, dr),
        compose(Rational(-3, 2) * rp(-1), K));
    add("[K, -2 d_r d_tau] = 3 r^-1 d_tau K",
        commutator(K, Rational(-2) * compose(dr, dtau)),
        compose(Rational(3) * compose(rp(-1), dtau), K));
    add("d_r K = 3/2 r^-1 K + r^3/2 d_r^2", compose(dr, K),
        compose(Rational(3, 2) * rp(-1), K) + compose(rp({3, 2}), compose(dr, dr)));
    add("[K, d_r^2] = -3 r^-1 d_r K + 15/4 r^-2 K", commutator(K, compose(dr, dr)),
        compose(Rational(-3) * compose(rp(-1), dr), K) +
            compose(Rational(15, 4) * rp(-2), K));

    // cancellation rule [K, V] = -2 r^{1/2} V for the r^{-2} families
    const Sum half = rp({1, 2});
    const std::pair<const char*, Sum> vs[] = {
        {"[K, r^-2] = -2 r^1/2 V", rp(-2)},
        {"[K, r^-2 d_tau] = -2 r^1/2 V", compose(rp(-2), dtau)},
        {"[K, r^-2 Lap_S] = -2 r^1/2 V", compose(rp(-2), lap)},
    };
    for (const auto& [name, v] : vs)
        add(name, commutator(K, v), compose(Rational(-2) * half, v));
    // for V = r^-1 d_r the cancellation is not exact: the commutator picks up
    // an extra first-order term -1/2 r^-1/2 d_r
    {
        Sum v = compose(rp(-1), dr);
        add("[K, r^-1 d_r] = -2 r^1/2 V - 1/2 r^-1/2 d_r", commutator(K, v),
            compose(Rational(-2) * half, v) +
                compose(Rational(-1, 2) * rp({-1, 2}), dr));
    }

    add("(K + 2 r^1/2) Q0 = Q1 K", compose(K + Rational(2) * half, Q0), compose(Q1, K));

    return checks;
}

}  // namespace catenoid::ops
