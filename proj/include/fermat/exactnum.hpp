#ifndef FERMAT_EXACTNUM_HPP
#define FERMAT_EXACTNUM_HPP

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermat {

struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("division by zero") {}
};

// Rational: always normalized, zero is 0/1.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(long n, long d) {
        if (d == 0) throw DivisionByZero();
        v_ = mpq_class(n, d);
        v_.canonicalize();
    }
    explicit Rational(const mpz_class& n) : v_(n) {}
    Rational(const mpz_class& n, const mpz_class& d) {
        if (d == 0) throw DivisionByZero();
        v_ = mpq_class(n, d);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // "n/d" or "n"
    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(mpz_class(s));
            return Rational(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("bad rational: " + s);
        }
    }

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }
    bool is_integer() const { return v_.get_den() == 1; }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DivisionByZero();
        v_ /= o.v_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

    Rational inv() const {
        if (is_zero()) throw DivisionByZero();
        return Rational(mpq_class(1 / v_));
    }
    std::optional<Rational> try_inv() const {
        if (is_zero()) return std::nullopt;
        return inv();
    }
    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    // scalar-field interface shared with QuadExt and FqElem
    Rational from_int(long k) const { return Rational(k); }
    Rational mul_int(long k) const { return Rational(mpq_class(v_ * k)); }
    static int characteristic() { return 0; }
    static std::string field_tag() { return "QQ"; }
    std::string str() const { return v_.get_str(); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class v_;
};

// a + b*xi with xi^2 = -3
class QuadExt {
public:
    QuadExt() = default;
    QuadExt(long a) : a_(a) {}  // NOLINT(google-explicit-constructor)
    QuadExt(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
    QuadExt(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static QuadExt xi() { return {Rational(0), Rational(1)}; }
    // a_pm = (1 +- xi)/2
    static QuadExt a_plus() { return {Rational(1, 2), Rational(1, 2)}; }
    static QuadExt a_minus() { return {Rational(1, 2), Rational(-1, 2)}; }

    const Rational& re() const { return a_; }
    const Rational& im() const { return b_; }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_rational() const { return b_.is_zero(); }

    QuadExt conj() const { return {a_, -b_}; }
    Rational norm() const { return a_ * a_ + Rational(3) * b_ * b_; }

    QuadExt operator-() const { return {-a_, -b_}; }
    QuadExt& operator+=(const QuadExt& o) { a_ += o.a_; b_ += o.b_; return *this; }
    QuadExt& operator-=(const QuadExt& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
    QuadExt& operator*=(const QuadExt& o) {
        if (b_.is_zero() && o.b_.is_zero()) {
            a_ *= o.a_;
            return *this;
        }
        Rational a = a_ * o.a_ - Rational(3) * b_ * o.b_;
        Rational b = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(a);
        b_ = std::move(b);
        return *this;
    }
    QuadExt& operator/=(const QuadExt& o) { return *this *= o.inv(); }
    friend QuadExt operator+(QuadExt x, const QuadExt& y) { return x += y; }
    friend QuadExt operator-(QuadExt x, const QuadExt& y) { return x -= y; }
    friend QuadExt operator*(QuadExt x, const QuadExt& y) { return x *= y; }
    friend QuadExt operator/(QuadExt x, const QuadExt& y) { return x /= y; }
    friend bool operator==(const QuadExt& x, const QuadExt& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

    QuadExt inv() const {
        Rational n = norm();
        if (n.is_zero()) throw DivisionByZero();
        return {a_ / n, -b_ / n};
    }
    std::optional<QuadExt> try_inv() const {
        if (is_zero()) return std::nullopt;
        return inv();
    }

    QuadExt from_int(long k) const { return QuadExt(k); }
    QuadExt mul_int(long k) const { return {a_.mul_int(k), b_.mul_int(k)}; }
    static int characteristic() { return 0; }
    static std::string field_tag() { return "QQ(xi)"; }
    // "a+b*x"
    std::string str() const {
        if (b_.is_zero()) return a_.str();
        std::string s = a_.str();
        s += b_.sign() < 0 ? "" : "+";
        return s + b_.str() + "*x";
    }
    static QuadExt parse(const std::string& s) {
        auto x = s.find("*x");
        if (x == std::string::npos) return QuadExt(Rational::parse(s));
        std::size_t split = std::string::npos;
        for (std::size_t i = x; i-- > 1;) {
            if ((s[i] == '+' || s[i] == '-') && s[i - 1] != '/') {
                split = i;
                break;
            }
        }
        if (split == std::string::npos) return {Rational(0), Rational::parse(s.substr(0, x))};
        std::string bs = s.substr(split, x - split);
        if (bs[0] == '+') bs.erase(0, 1);
        return {Rational::parse(s.substr(0, split)), Rational::parse(bs)};
    }

    friend std::ostream& operator<<(std::ostream& os, const QuadExt& z) { return os << z.str(); }

private:
    Rational a_;
    Rational b_;
};

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace detail {

using Fp = std::vector<std::uint64_t>;  // coefficients, low degree first

inline void trim(Fp& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    unsigned __int128 r = 1, x = b % p;
    while (e) {
        if (e & 1) r = r * x % p;
        x = x * x % p;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw DivisionByZero();
    return pow_mod(a, p - 2, p);
}

inline Fp poly_mod(Fp a, const Fp& m, std::uint64_t p) {
    trim(a);
    std::uint64_t lead_inv = inv_mod(m.back(), p);
    while (a.size() >= m.size()) {
        std::uint64_t c = a.back() * lead_inv % p;
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i)
            a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
        trim(a);
    }
    return a;
}

inline Fp poly_mulmod(const Fp& a, const Fp& b, const Fp& m, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Fp r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return poly_mod(r, m, p);
}

inline Fp poly_gcd(Fp a, Fp b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Fp r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Rabin test: f of degree m is irreducible iff x^(p^m) = x mod f and
// gcd(x^(p^(m/r)) - x, f) = 1 for every prime r | m.
inline bool irreducible(const Fp& f, std::uint64_t p) {
    std::size_t m = f.size() - 1;
    if (m == 1) return true;
    auto frob_iter = [&](std::size_t k) {
        Fp x{0, 1};
        for (std::size_t i = 0; i < k; ++i) {
            Fp r{1};
            Fp base = x;
            std::uint64_t e = p;
            while (e) {
                if (e & 1) r = poly_mulmod(r, base, f, p);
                base = poly_mulmod(base, base, f, p);
                e >>= 1;
            }
            x = r;
        }
        return x;
    };
    auto minus_x = [&](Fp g) {
        if (g.size() < 2) g.resize(2, 0);
        g[1] = (g[1] + p - 1) % p;
        trim(g);
        return g;
    };
    if (!minus_x(frob_iter(m)).empty()) return false;
    for (std::size_t r = 2; r <= m; ++r) {
        if (m % r != 0 || !is_prime(r)) continue;
        Fp g = poly_gcd(f, minus_x(frob_iter(m / r)), p);
        if (g.size() != 1) return false;
    }
    return true;
}

}  // namespace detail

// F_{p^m}. modulus is monic of degree m, low degree first; empty when m = 1.
struct FieldDescriptor {
    std::uint64_t p = 2;
    unsigned m = 1;
    std::vector<std::uint64_t> modulus;
    std::uint64_t q = 2;

    std::string tag() const {
        return m == 1 ? "GF(" + std::to_string(p) + ")"
                      : "GF(" + std::to_string(p) + "^" + std::to_string(m) + ")";
    }
};

inline std::vector<std::uint64_t> choose_modulus(std::uint64_t p, unsigned m) {
    using detail::Fp;
    if (m == 2) {
        Fp f{3 % p, 0, 1};
        if (detail::irreducible(f, p)) return f;
    }
    // enumerate monic candidates with c_{m-1} the most significant digit
    std::uint64_t count = 1;
    for (unsigned i = 0; i < m; ++i) count *= p;
    for (std::uint64_t k = 0; k < count; ++k) {
        Fp f(m + 1, 0);
        f[m] = 1;
        std::uint64_t r = k;
        for (unsigned i = 0; i < m; ++i) {
            f[i] = r % p;
            r /= p;
        }
        if (f[0] == 0) continue;
        if (detail::irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

// Descriptors are interned, so references stay valid for the program lifetime.
inline const FieldDescriptor& fq_make(std::uint64_t p, unsigned m = 1) {
    if (!is_prime(p)) throw std::invalid_argument("fq_make: " + std::to_string(p) + " is not prime");
    if (m < 1) throw std::invalid_argument("fq_make: degree must be >= 1");
    long double qd = 1;
    std::uint64_t q = 1;
    for (unsigned i = 0; i < m; ++i) {
        qd *= static_cast<long double>(p);
        q *= p;
    }
    if (qd > 4.0e18L) throw std::invalid_argument("fq_make: field too large");

    static std::mutex mu;
    static std::map<std::pair<std::uint64_t, unsigned>, const FieldDescriptor*> index;
    static std::deque<FieldDescriptor> store;
    std::lock_guard<std::mutex> lock(mu);
    auto it = index.find({p, m});
    if (it != index.end()) return *it->second;
    FieldDescriptor d;
    d.p = p;
    d.m = m;
    d.q = q;
    if (m > 1) d.modulus = choose_modulus(p, m);
    store.push_back(std::move(d));
    index[{p, m}] = &store.back();
    return store.back();
}

inline bool has_sqrt_neg3(std::uint64_t p, unsigned m) {
    if (!is_prime(p) || m < 1) throw std::invalid_argument("has_sqrt_neg3: bad field");
    return m % 2 == 0 || p % 6 == 1 || p == 2 || p == 3;
}

// Element of F_q, stored as base-p digits of its coefficient vector (c_0 least significant).
class FqElem {
public:
    FqElem() = default;
    FqElem(const FieldDescriptor& f, std::uint64_t code) : f_(&f), code_(code) {
        if (code >= f.q) throw std::out_of_range("FqElem code");
    }
    static FqElem from_coeffs(const FieldDescriptor& f, const std::vector<std::uint64_t>& c) {
        std::uint64_t code = 0;
        for (std::size_t i = c.size(); i-- > 0;) code = code * f.p + c[i] % f.p;
        return {f, code};
    }
    static FqElem from_integer(const FieldDescriptor& f, const mpz_class& z) {
        mpz_class r = z % static_cast<unsigned long>(f.p);
        if (r < 0) r += static_cast<unsigned long>(f.p);
        return {f, r.get_ui()};
    }
    static FqElem from_rational(const FieldDescriptor& f, const Rational& x) {
        mpz_class pz = static_cast<unsigned long>(f.p);
        if (x.den() % pz == 0)
            throw std::domain_error("denominator divisible by " + std::to_string(f.p));
        return from_integer(f, x.num()) * from_integer(f, x.den()).inv();
    }
    // generator of F_q over F_p (the class of x)
    static FqElem gen(const FieldDescriptor& f) {
        if (f.m == 1) return {f, 0};
        return {f, f.p};
    }

    const FieldDescriptor& field() const { return *f_; }
    const FieldDescriptor* field_ptr() const { return f_; }
    std::uint64_t code() const { return code_; }
    std::vector<std::uint64_t> coeffs() const {
        std::vector<std::uint64_t> c(f_->m, 0);
        std::uint64_t r = code_;
        for (unsigned i = 0; i < f_->m; ++i) {
            c[i] = r % f_->p;
            r /= f_->p;
        }
        return c;
    }
    bool is_zero() const { return code_ == 0; }

    FqElem operator-() const {
        std::vector<std::uint64_t> c = coeffs();
        for (auto& x : c) x = (f_->p - x) % f_->p;
        return from_coeffs(*f_, c);
    }
    FqElem& operator+=(const FqElem& o) {
        check(o);
        if (f_->m == 1) {
            code_ = (code_ + o.code_) % f_->p;
            return *this;
        }
        auto a = coeffs();
        auto b = o.coeffs();
        for (unsigned i = 0; i < f_->m; ++i) a[i] = (a[i] + b[i]) % f_->p;
        *this = from_coeffs(*f_, a);
        return *this;
    }
    FqElem& operator-=(const FqElem& o) { return *this += -o; }
    FqElem& operator*=(const FqElem& o) {
        check(o);
        if (f_->m == 1) {
            code_ = static_cast<std::uint64_t>(static_cast<unsigned __int128>(code_) * o.code_ % f_->p);
            return *this;
        }
        auto r = detail::poly_mulmod(coeffs(), o.coeffs(), f_->modulus, f_->p);
        *this = from_coeffs(*f_, r);
        return *this;
    }
    FqElem& operator/=(const FqElem& o) { return *this *= o.inv(); }
    friend FqElem operator+(FqElem a, const FqElem& b) { return a += b; }
    friend FqElem operator-(FqElem a, const FqElem& b) { return a -= b; }
    friend FqElem operator*(FqElem a, const FqElem& b) { return a *= b; }
    friend FqElem operator/(FqElem a, const FqElem& b) { return a /= b; }
    friend bool operator==(const FqElem& a, const FqElem& b) { return a.f_ == b.f_ && a.code_ == b.code_; }
    friend bool operator!=(const FqElem& a, const FqElem& b) { return !(a == b); }

    FqElem pow(std::uint64_t e) const {
        FqElem r = from_int(1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }
    FqElem inv() const {
        if (is_zero()) throw DivisionByZero();
        return pow(f_->q - 2);
    }
    std::optional<FqElem> try_inv() const {
        if (is_zero()) return std::nullopt;
        return inv();
    }

    FqElem from_int(long k) const {
        long p = static_cast<long>(f_->p);
        long r = k % p;
        if (r < 0) r += p;
        return {*f_, static_cast<std::uint64_t>(r)};
    }
    FqElem mul_int(long k) const { return *this * from_int(k); }
    int characteristic() const { return static_cast<int>(f_->p); }
    std::string field_tag() const { return f_->tag(); }
    // "c0+c1*x+c2*x^2"
    std::string str() const {
        auto c = coeffs();
        std::string s = std::to_string(c[0]);
        for (unsigned i = 1; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            s += "+" + std::to_string(c[i]) + "*x";
            if (i > 1) s += "^" + std::to_string(i);
        }
        return s;
    }
    static FqElem parse(const FieldDescriptor& f, const std::string& s) {
        std::vector<std::uint64_t> c(f.m, 0);
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t end = s.find('+', pos);
            if (end == std::string::npos) end = s.size();
            std::string tok = s.substr(pos, end - pos);
            std::size_t star = tok.find("*x");
            unsigned deg = 0;
            if (star != std::string::npos) {
                deg = 1;
                auto caret = tok.find('^', star);
                if (caret != std::string::npos) deg = static_cast<unsigned>(std::stoul(tok.substr(caret + 1)));
                tok = tok.substr(0, star);
            }
            if (deg >= f.m) throw std::invalid_argument("FqElem::parse: degree too large");
            c[deg] = (c[deg] + std::stoull(tok)) % f.p;
            pos = end + 1;
        }
        return from_coeffs(f, c);
    }

    friend std::ostream& operator<<(std::ostream& os, const FqElem& a) { return os << a.str(); }

private:
    void check(const FqElem& o) const {
        if (f_ != o.f_) throw std::invalid_argument("FqElem: field mismatch");
    }
    const FieldDescriptor* f_ = nullptr;
    std::uint64_t code_ = 0;
};

inline std::vector<FqElem> all_elements(const FieldDescriptor& f) {
    std::vector<FqElem> v;
    v.reserve(f.q);
    for (std::uint64_t c = 0; c < f.q; ++c) v.emplace_back(f, c);
    return v;
}

// The square root of -3 with the smaller code, if any.
inline std::optional<FqElem> sqrt_neg3(const FieldDescriptor& f) {
    FqElem target = FqElem(f, 0).from_int(-3);
    for (std::uint64_t c = 0; c < f.q; ++c) {
        FqElem a(f, c);
        if (a * a == target) return a;
    }
    return std::nullopt;
}

// Specializes a + b*xi into F_q using the root chosen by sqrt_neg3.
inline FqElem specialize(const FieldDescriptor& f, const QuadExt& z) {
    FqElem a = FqElem::from_rational(f, z.re());
    if (z.im().is_zero()) return a;
    auto r = sqrt_neg3(f);
    if (!r) throw std::domain_error("-3 is not a square in " + f.tag());
    return a + FqElem::from_rational(f, z.im()) * *r;
}

}  // namespace fermat

#endif
