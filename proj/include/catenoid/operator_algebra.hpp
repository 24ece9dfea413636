#pragma once

#include <string>
#include <vector>

#include "catenoid/rational.hpp"

// Exact calculus on one-radial-variable differential operators: finite sums of
// monomials  c * r^a * d_r^i * d_tau^j * Lap_S^k  with rational c and rational
// (half-integer by default) a. d_tau and Lap_S are formal commuting symbols;
// only d_r interacts with powers of r, through the Leibniz rule.
namespace catenoid::ops {

struct OpTerm {
    Rational coeff;
    Rational r_exp;
    int d_r = 0;
    int d_tau = 0;
    int lap_s = 0;

    std::string str() const;
};

// Key order is lexicographic in (r_exp, d_r, d_tau, lap_s); normalized sums
// keep terms sorted by it so golden-file diffs stay stable.
bool term_key_less(const OpTerm& a, const OpTerm& b);

class OperatorSum {
  public:
    OperatorSum() = default;
    explicit OperatorSum(std::vector<OpTerm> terms);

    static OperatorSum monomial(Rational coeff, Rational r_exp, int d_r = 0, int d_tau = 0,
                                int lap_s = 0);
    static OperatorSum identity() { return monomial(1, 0); }
    static OperatorSum r_power(Rational a) { return monomial(1, a); }
    static OperatorSum d_r() { return monomial(1, 0, 1); }
    static OperatorSum d_tau() { return monomial(1, 0, 0, 1); }
    static OperatorSum lap_s() { return monomial(1, 0, 0, 0, 1); }

    const std::vector<OpTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    friend OperatorSum operator+(const OperatorSum& a, const OperatorSum& b);
    friend OperatorSum operator-(const OperatorSum& a, const OperatorSum& b);
    friend OperatorSum operator*(Rational c, const OperatorSum& a);
    friend bool operator==(const OperatorSum& a, const OperatorSum& b);

    std::string str() const;

  private:
    std::vector<OpTerm> terms_;  // normalized: sorted, keys unique, coeffs nonzero
};

// Maximum allowed denominator of r-exponents. All identities used here live in
// half-integer powers; a larger bound has to be requested explicitly.
struct AlgebraConfig {
    std::int64_t max_exp_denominator = 2;
};

// Operator product A∘B, applying d_r ∘ r^a = r^a d_r + a r^{a-1} recursively.
OperatorSum compose(const OperatorSum& a, const OperatorSum& b,
                    const AlgebraConfig& cfg = {});

// compose(A,B) - compose(B,A)
OperatorSum commutator(const OperatorSum& a, const OperatorSum& b,
                       const AlgebraConfig& cfg = {});

// r^s ∘ A ∘ r^{-s}
OperatorSum conjugate(const OperatorSum& a, Rational s, const AlgebraConfig& cfg = {});

// The radial wave operators in (tau, r, theta) coordinates, n = 4.
OperatorSum op_K();    // r^{3/2} d_r
OperatorSum op_Q0();   // -3/(4r^2) - 2 d_r d_tau + d_r^2 + r^{-2} Lap_S
OperatorSum op_Q1();   // Q0 - r^{-1} d_tau - r^{-1} d_r + 3/4 r^{-2}

struct IdentityCheck {
    std::string name;
    bool pass = false;
    OperatorSum residual;
};

// Exact checks of the basic commutator identities, the [K,V] = -2 r^{1/2} V
// cancellation rule, and (K + 2 r^{1/2}) Q0 = Q1 K. Each passes iff the
// residual normalizes to the empty sum. With corrupt_q1 set, Q1's potential
// is replaced by 1*r^{-2} so the suite demonstrably detects a broken identity.
std::vector<IdentityCheck> verify_identity_suite(bool corrupt_q1 = false);

}  // namespace catenoid::ops
