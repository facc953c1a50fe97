#include "orbitree/scalar.hpp"

#include <sstream>
#include <stdexcept>

namespace orbitree {

Poly::Poly(const Rat& c) {
    if (c != 0) c_.push_back(c);
}

Poly::Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::t() { return Poly(std::vector<Rat>{Rat(0), Rat(1)}); }

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rat& Poly::coeff(size_t i) const {
    static const Rat zero(0);
    return i < c_.size() ? c_[i] : zero;
}

Rat Poly::leading() const {
    if (c_.empty()) throw std::logic_error("leading of zero polynomial");
    return c_.back();
}

Poly Poly::operator-() const {
    Poly r;
    r.c_.reserve(c_.size());
    for (auto& x : c_) r.c_.push_back(-x);
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
    for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (c_.empty() || o.c_.empty()) return Poly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw std::logic_error("polynomial division by zero");
    std::vector<Rat> rc = a.c_;
    std::vector<Rat> qc;
    int db = b.degree();
    if ((int)rc.size() - 1 >= db) qc.assign(rc.size() - db, Rat(0));
    for (int i = (int)rc.size() - 1; i >= db; --i) {
        if (rc[i] == 0) continue;
        Rat f = rc[i] / b.c_.back();
        qc[i - db] = f;
        for (int j = 0; j <= db; ++j) rc[i - db + j] -= f * b.c_[j];
    }
    q = Poly(std::move(qc));
    r = Poly(std::move(rc));
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return a.monic();
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    Poly r = *this;
    Rat l = c_.back();
    for (auto& x : r.c_) x /= l;
    return r;
}

Rat Poly::eval(const Rat& x) const {
    Rat acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

std::vector<Rat> Poly::rational_roots() const {
    std::vector<Rat> roots;
    if (is_zero() || is_constant()) return roots;
    // clear denominators, factor out t^k
    mpz_class lcm(1);
    for (auto& c : c_) lcm = lcm * c.get_den() / ::gcd(lcm, mpz_class(c.get_den()));
    std::vector<mpz_class> z;
    for (auto& c : c_) z.push_back(mpz_class(c.get_num() * (lcm / c.get_den())));
    size_t lo = 0;
    while (lo < z.size() && z[lo] == 0) ++lo;
    if (lo > 0) roots.push_back(Rat(0));
    if (lo >= z.size() - 1) return roots;
    mpz_class a0 = abs(z[lo]), an = abs(z.back());
    auto divisors = [](const mpz_class& v) {
        std::vector<mpz_class> d;
        for (mpz_class i = 1; i * i <= v; ++i)
            if (v % i == 0) {
                d.push_back(i);
                if (i * i != v) d.push_back(v / i);
            }
        return d;
    };
    for (auto& p : divisors(a0))
        for (auto& q : divisors(an)) {
            for (int s : {1, -1}) {
                Rat cand(s * p, q);
                cand.canonicalize();
                if (eval(cand) == 0) {
                    bool seen = false;
                    for (auto& r : roots) seen |= (r == cand);
                    if (!seen) roots.push_back(cand);
                }
            }
        }
    return roots;
}

std::string Poly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        if (!first) os << (c_[i] > 0 ? "+" : "");
        first = false;
        if (i == 0 || c_[i] != 1) {
            if (i > 0 && c_[i] == -1)
                os << "-";
            else
                os << c_[i].get_str();
            if (i > 0 && c_[i] != 1 && c_[i] != -1) os << "*";
        }
        if (i >= 1) os << "t";
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

Scalar::Scalar(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw std::logic_error("scalar with zero denominator");
    fun_ = {num, den};
    normalize();
}

Scalar Scalar::t() { return Scalar(Poly::t(), Poly(Rat(1))); }

Scalar Scalar::of_poly(const Poly& p) { return Scalar(p, Poly(Rat(1))); }

void Scalar::normalize() {
    if (!fun_) {
        r_.canonicalize();
        return;
    }
    Poly g = Poly::gcd(fun_->first, fun_->second);
    if (!g.is_zero() && g.degree() > 0) {
        Poly q, r;
        Poly::divmod(fun_->first, g, q, r);
        fun_->first = q;
        Poly::divmod(fun_->second, g, q, r);
        fun_->second = q;
    }
    if (!fun_->second.is_zero() && fun_->second.leading() != 1) {
        Rat l = fun_->second.leading();
        std::vector<Rat> n = fun_->first.coeffs(), d = fun_->second.coeffs();
        for (auto& x : n) x /= l;
        for (auto& x : d) x /= l;
        fun_->first = Poly(n);
        fun_->second = Poly(d);
    }
    // collapse to the rational fast path when t-free
    if (fun_->first.is_constant() && fun_->second.is_constant()) {
        Rat v = fun_->first.is_zero() ? Rat(0) : fun_->first.coeff(0);
        r_ = v;  // den is monic constant 1
        fun_.reset();
    }
}

const Rat& Scalar::rational() const {
    if (fun_) throw std::logic_error("scalar depends on t");
    return r_;
}

const Poly& Scalar::num() const {
    static thread_local Poly tmp;
    if (fun_) return fun_->first;
    tmp = Poly(r_);
    return tmp;
}

const Poly& Scalar::den() const {
    static const Poly one{Rat(1)};
    if (fun_) return fun_->second;
    return one;
}

bool Scalar::is_zero() const { return fun_ ? fun_->first.is_zero() : r_ == 0; }

bool Scalar::operator==(const Scalar& o) const {
    if (!fun_ && !o.fun_) return r_ == o.r_;
    // cross-multiplied comparison, both normalized
    return (num() * o.den()) == (o.num() * den());
}

Scalar Scalar::operator-() const {
    if (!fun_) return Scalar(Rat(-r_));
    return Scalar(-fun_->first, fun_->second);
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (!fun_ && !o.fun_) return Scalar(Rat(r_ + o.r_));
    return Scalar(num() * o.den() + o.num() * den(), den() * o.den());
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (!fun_ && !o.fun_) return Scalar(Rat(r_ * o.r_));
    return Scalar(num() * o.num(), den() * o.den());
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.is_zero()) throw std::logic_error("scalar division by zero");
    if (!fun_ && !o.fun_) return Scalar(Rat(r_ / o.r_));
    return Scalar(num() * o.den(), den() * o.num());
}

Scalar Scalar::substitute(const Rat& v) const {
    if (!fun_) return *this;
    Rat d = fun_->second.eval(v);
    if (d == 0) throw std::domain_error("substitution hits a pole");
    return Scalar(Rat(fun_->first.eval(v) / d));
}

std::optional<Rat> Scalar::as_rational() const {
    if (!fun_) return r_;
    return std::nullopt;
}

std::vector<Rat> Scalar::vanishing_t_values() const {
    if (!fun_ || fun_->first.is_zero()) return {};
    std::vector<Rat> out;
    for (auto& r : fun_->first.rational_roots())
        if (fun_->second.eval(r) != 0) out.push_back(r);
    return out;
}

std::string Scalar::str() const {
    if (!fun_) return r_.get_str();
    std::string n = fun_->first.str();
    if (fun_->second.is_constant()) return n;
    bool nsimple = fun_->first.is_constant() ||
                   (fun_->first.degree() >= 0 && n.find('+') == std::string::npos &&
                    n.rfind('-') == std::string::npos);
    std::string ns = nsimple ? n : "(" + n + ")";
    return ns + "/(" + fun_->second.str() + ")";
}

namespace {
// minimal recursive-descent parser for "p/q" rationals and polynomials in t
struct Parser {
    const std::string& s;
    size_t i = 0;
    explicit Parser(const std::string& str) : s(str) {}
    void skip() { while (i < s.size() && isspace((unsigned char)s[i])) ++i; }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }
    Scalar expr() {
        Scalar v = term();
        for (;;) {
            skip();
            if (eat('+')) v = v + term();
            else if (eat('-')) v = v - term();
            else return v;
        }
    }
    Scalar term() {
        Scalar v = factor();
        for (;;) {
            skip();
            if (eat('*')) v = v * factor();
            else if (eat('/')) v = v / factor();
            else return v;
        }
    }
    Scalar factor() {
        skip();
        if (eat('-')) return -factor();
        if (eat('(')) {
            Scalar v = expr();
            if (!eat(')')) throw std::invalid_argument("expected ')'");
            return power_suffix(v);
        }
        if (i < s.size() && (s[i] == 't')) {
            ++i;
            return power_suffix(Scalar::t());
        }
        size_t j = i;
        while (j < s.size() && isdigit((unsigned char)s[j])) ++j;
        if (j == i) throw std::invalid_argument("bad scalar: " + s);
        Rat v(s.substr(i, j - i));
        i = j;
        return power_suffix(Scalar(v));
    }
    Scalar power_suffix(Scalar v) {
        skip();
        if (eat('^')) {
            size_t j = i;
            while (j < s.size() && isdigit((unsigned char)s[j])) ++j;
            long e = std::stol(s.substr(i, j - i));
            i = j;
            Scalar r(1);
            for (long k = 0; k < e; ++k) r = r * v;
            return r;
        }
        return v;
    }
};
}  // namespace

Scalar Scalar::parse(const std::string& s) {
    Parser p(s);
    Scalar v = p.expr();
    p.skip();
    if (p.i != s.size()) throw std::invalid_argument("trailing input in scalar: " + s);
    return v;
}

size_t Scalar::complexity() const {
    if (!fun_) return mpz_sizeinbase(r_.get_num().get_mpz_t(), 2) +
                      mpz_sizeinbase(r_.get_den().get_mpz_t(), 2);
    return 16 * (fun_->first.coeffs().size() + fun_->second.coeffs().size());
}

}  // namespace orbitree
