#ifndef ORBITREE_SCALAR_HPP
#define ORBITREE_SCALAR_HPP

#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

namespace orbitree {

using Rat = mpq_class;

/* Dense univariate polynomial over Q, coefficients low to high.
 * Invariant: no trailing zero coefficients (zero polynomial = empty). */
class Poly {
public:
    Poly() = default;
    explicit Poly(const Rat& c);
    explicit Poly(std::vector<Rat> coeffs);

    static Poly t();  // the formal variable

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Rat& coeff(size_t i) const;
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat leading() const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    bool operator==(const Poly& o) const { return c_ == o.c_; }

    // division with remainder; divisor must be nonzero
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
    static Poly gcd(Poly a, Poly b);  // monic gcd

    Poly monic() const;
    Rat eval(const Rat& x) const;
    // rational roots of the polynomial (exact, via rational root theorem)
    std::vector<Rat> rational_roots() const;

    std::string str() const;

private:
    std::vector<Rat> c_;
    void trim();
};

/* A scalar in Q or Q(t). Rational values keep the fast path; a value only
 * carries a Poly pair when it genuinely depends on t. Representation
 * invariant: num/den coprime, den monic and nonzero; den == 1 when the
 * value is a polynomial. */
class Scalar {
public:
    Scalar() : r_(0) {}
    Scalar(int v) : r_(v) {}
    Scalar(long v) : r_((long)v) {}
    Scalar(const Rat& v) : r_(v) {}
    Scalar(const Poly& num, const Poly& den);

    static Scalar t();
    static Scalar of_poly(const Poly& p);

    bool is_rational() const { return !fun_; }
    bool depends_on_t() const { return fun_.has_value(); }
    const Rat& rational() const;  // requires is_rational()
    const Poly& num() const;
    const Poly& den() const;

    bool is_zero() const;
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;  // o nonzero (as an element of the field)
    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }

    // substitute t := v; fails (throws) if v is a pole
    Scalar substitute(const Rat& v) const;
    std::optional<Rat> as_rational() const;  // value if t-free

    // t-values where this scalar vanishes but is not identically zero
    std::vector<Rat> vanishing_t_values() const;

    // "p/q" or polynomial-fraction string in t
    std::string str() const;
    static Scalar parse(const std::string& s);

    // measure of representation size, used to pick pivots
    size_t complexity() const;

private:
    Rat r_;
    // engaged only when the value depends on t
    std::optional<std::pair<Poly, Poly>> fun_;
    void normalize();
};

}  // namespace orbitree

#endif
