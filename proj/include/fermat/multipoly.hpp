#ifndef FERMAT_MULTIPOLY_HPP
#define FERMAT_MULTIPOLY_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fermat/exactnum.hpp"

namespace fermat {

inline constexpr std::size_t kMaxVars = 24;

struct Mono {
    std::array<std::uint8_t, kMaxVars> e{};
    std::uint16_t deg = 0;

    unsigned operator[](std::size_t i) const { return e[i]; }
    void set(std::size_t i, unsigned v) {
        if (v > 255) throw std::overflow_error("exponent exceeds 255");
        deg = static_cast<std::uint16_t>(deg - e[i] + v);
        e[i] = static_cast<std::uint8_t>(v);
    }
    Mono operator*(const Mono& o) const {
        Mono r;
        for (std::size_t i = 0; i < kMaxVars; ++i) {
            unsigned s = unsigned(e[i]) + o.e[i];
            if (s > 255) throw std::overflow_error("exponent exceeds 255");
            r.e[i] = static_cast<std::uint8_t>(s);
        }
        r.deg = static_cast<std::uint16_t>(deg + o.deg);
        return r;
    }
    bool divides(const Mono& o) const {
        for (std::size_t i = 0; i < kMaxVars; ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }
    Mono quotient(const Mono& d) const {
        Mono r;
        for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint8_t>(e[i] - d.e[i]);
        r.deg = static_cast<std::uint16_t>(deg - d.deg);
        return r;
    }
    friend bool operator==(const Mono& a, const Mono& b) { return a.e == b.e; }
};

// Canonical order: higher total degree first, then lexicographically larger exponents first.
struct GrlexGreater {
    bool operator()(const Mono& a, const Mono& b) const {
        if (a.deg != b.deg) return a.deg > b.deg;
        return std::memcmp(a.e.data(), b.e.data(), kMaxVars) > 0;
    }
};

struct MonoHash {
    std::size_t operator()(const Mono& m) const {
        std::uint64_t w[3];
        std::memcpy(w, m.e.data(), sizeof(w));
        std::uint64_t h = w[0] * 0x9E3779B97F4A7C15ULL;
        h ^= (w[1] + 0x632BE59BD9B4E019ULL) * 0xC2B2AE3D27D4EB4FULL;
        h ^= (w[2] + 0x165667B19E3779F9ULL) * 0x27D4EB2F165667C5ULL;
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

template <class K>
class MPoly {
public:
    struct Term {
        Mono m;
        K c;
    };

    MPoly() = default;
    MPoly(std::size_t nvars, K one) : n_(nvars), one_(std::move(one)) {
        if (nvars > kMaxVars) throw std::invalid_argument("too many variables");
    }

    static MPoly constant(std::size_t nvars, const K& c, const K& one) {
        MPoly p(nvars, one);
        if (!c.is_zero()) p.t_.push_back({Mono{}, c});
        return p;
    }
    static MPoly variable(std::size_t nvars, std::size_t i, const K& one) {
        if (i >= nvars) throw std::out_of_range("variable index");
        MPoly p(nvars, one);
        Mono m;
        m.set(i, 1);
        p.t_.push_back({m, one});
        return p;
    }
    // Takes arbitrary terms; merges duplicates and drops zeros.
    static MPoly from_terms(std::size_t nvars, const K& one, std::vector<Term> terms) {
        MPoly p(nvars, one);
        p.t_ = std::move(terms);
        p.canonicalize();
        return p;
    }

    std::size_t nvars() const { return n_; }
    const K& one() const { return one_; }
    const std::vector<Term>& terms() const { return t_; }
    std::size_t size() const { return t_.size(); }
    bool is_zero() const { return t_.empty(); }
    K zero_scalar() const { return one_.from_int(0); }

    int degree() const { return t_.empty() ? -1 : t_.front().m.deg; }
    bool is_homogeneous() const {
        for (const auto& t : t_)
            if (t.m.deg != t_.front().m.deg) return false;
        return true;
    }
    unsigned degree_in(std::size_t v) const {
        unsigned d = 0;
        for (const auto& t : t_) d = std::max(d, t.m[v]);
        return d;
    }
    const Term& leading() const {
        if (t_.empty()) throw std::logic_error("leading term of zero polynomial");
        return t_.front();
    }
    K coefficient(const Mono& m) const {
        for (const auto& t : t_)
            if (t.m == m) return t.c;
        return zero_scalar();
    }

    MPoly operator-() const {
        MPoly r = *this;
        for (auto& t : r.t_) t.c = -t.c;
        return r;
    }
    MPoly& operator+=(const MPoly& o) { return *this = merge(o, false); }
    MPoly& operator-=(const MPoly& o) { return *this = merge(o, true); }
    MPoly& operator*=(const MPoly& o) { return *this = mul(o); }
    friend MPoly operator+(const MPoly& a, const MPoly& b) { return a.merge(b, false); }
    friend MPoly operator-(const MPoly& a, const MPoly& b) { return a.merge(b, true); }
    friend MPoly operator*(const MPoly& a, const MPoly& b) { return a.mul(b); }
    friend bool operator==(const MPoly& a, const MPoly& b) {
        if (a.n_ != b.n_ || a.t_.size() != b.t_.size()) return false;
        for (std::size_t i = 0; i < a.t_.size(); ++i)
            if (!(a.t_[i].m == b.t_[i].m) || a.t_[i].c != b.t_[i].c) return false;
        return true;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    MPoly scale(const K& c) const {
        MPoly r(n_, one_);
        if (c.is_zero()) return r;
        r.t_.reserve(t_.size());
        for (const auto& t : t_) {
            K v = t.c * c;
            if (!v.is_zero()) r.t_.push_back({t.m, std::move(v)});
        }
        return r;
    }
    MPoly scale(long k) const { return scale(one_.from_int(k)); }
    MPoly mul_mono(const Mono& m) const {
        MPoly r = *this;
        for (auto& t : r.t_) t.m = t.m * m;
        return r;
    }

    MPoly pow(unsigned e) const {
        MPoly r = constant(n_, one_, one_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    template <class T = K>
    T eval(const std::vector<T>& pt) const {
        if (pt.size() != n_) throw std::invalid_argument("eval: point length mismatch");
        T zero = pt.empty() ? T(coerce<T>(one_)).from_int(0) : pt[0].from_int(0);
        if (t_.empty()) return zero;
        std::vector<std::vector<T>> pw(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            unsigned d = degree_in(v);
            pw[v].reserve(d + 1);
            pw[v].push_back(pt[v].from_int(1));
            for (unsigned k = 1; k <= d; ++k) pw[v].push_back(pw[v].back() * pt[v]);
        }
        T acc = zero;
        for (const auto& t : t_) {
            T term = coerce<T>(t.c);
            for (std::size_t v = 0; v < n_; ++v)
                if (t.m[v]) term *= pw[v][t.m[v]];
            acc += term;
        }
        return acc;
    }

    MPoly derivative(std::size_t v) const {
        if (v >= n_) throw std::out_of_range("derivative: variable index");
        std::vector<Term> out;
        for (const auto& t : t_) {
            unsigned e = t.m[v];
            if (!e) continue;
            K c = t.c.mul_int(static_cast<long>(e));
            if (c.is_zero()) continue;
            Mono m = t.m;
            m.set(v, e - 1);
            out.push_back({m, std::move(c)});
        }
        return from_terms(n_, one_, std::move(out));
    }

    // f(images[0], ..., images[n-1]); all images share one ring.
    MPoly compose(const std::vector<MPoly>& images) const {
        if (images.size() != n_) throw std::invalid_argument("compose: need one image per variable");
        std::size_t tn = images.empty() ? 0 : images[0].n_;
        for (const auto& g : images)
            if (g.n_ != tn) throw std::invalid_argument("compose: images have different arity");
        const K& one = images.empty() ? one_ : images[0].one_;
        std::vector<std::vector<MPoly>> pw(n_);
        auto power = [&](std::size_t v, unsigned e) -> const MPoly& {
            auto& cache = pw[v];
            if (cache.empty()) cache.push_back(constant(tn, one, one));
            while (cache.size() <= e) cache.push_back(cache.back() * images[v]);
            return cache[e];
        };
        std::unordered_map<Mono, K, MonoHash> acc;
        for (const auto& t : t_) {
            MPoly prod = constant(tn, t.c, one);
            for (std::size_t v = 0; v < n_ && !prod.is_zero(); ++v)
                if (t.m[v]) prod = prod * power(v, t.m[v]);
            for (auto& pt : prod.t_) {
                auto it = acc.find(pt.m);
                if (it == acc.end())
                    acc.emplace(pt.m, std::move(pt.c));
                else
                    it->second += pt.c;
            }
        }
        return from_map(tn, one, acc);
    }

    // Replace selected variables; the others stay as themselves.
    MPoly substitute(const std::map<std::size_t, MPoly>& assignments) const {
        std::vector<MPoly> images;
        images.reserve(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            auto it = assignments.find(v);
            if (it == assignments.end()) {
                images.push_back(variable(n_, v, one_));
            } else {
                if (it->second.n_ != n_) throw std::invalid_argument("substitute: arity mismatch");
                images.push_back(it->second);
            }
        }
        return compose(images);
    }

    MPoly homogenize(std::size_t v, unsigned d) const {
        if (v >= n_) throw std::out_of_range("homogenize: variable index");
        if (degree() > static_cast<int>(d)) throw std::invalid_argument("homogenize: degree exceeds target");
        std::vector<Term> out;
        out.reserve(t_.size());
        for (const auto& t : t_) {
            Mono m = t.m;
            m.set(v, m[v] + (d - t.m.deg));
            out.push_back({m, t.c});
        }
        return from_terms(n_, one_, std::move(out));
    }

    // Same polynomial viewed in a ring with more variables (new ones appended).
    MPoly extend(std::size_t nvars) const {
        if (nvars < n_) throw std::invalid_argument("extend: cannot shrink");
        MPoly r = *this;
        r.n_ = nvars;
        return r;
    }
    // Drops variable v, which must not occur.
    MPoly drop_variable(std::size_t v) const {
        std::vector<Term> out;
        for (const auto& t : t_) {
            if (t.m[v]) throw std::invalid_argument("drop_variable: variable occurs");
            Mono m;
            for (std::size_t i = 0, j = 0; i < n_; ++i)
                if (i != v) m.set(j++, t.m[i]);
            out.push_back({m, t.c});
        }
        return from_terms(n_ - 1, one_, std::move(out));
    }

    template <class K2, class Fn>
    MPoly<K2> map_coeffs(Fn&& fn, const K2& one2) const {
        std::vector<typename MPoly<K2>::Term> out;
        out.reserve(t_.size());
        for (const auto& t : t_) out.push_back({t.m, fn(t.c)});
        return MPoly<K2>::from_terms(n_, one2, std::move(out));
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (t_.empty()) return "0";
        std::string s;
        for (std::size_t k = 0; k < t_.size(); ++k) {
            const auto& t = t_[k];
            std::string c = t.c.str();
            bool neg = !c.empty() && c[0] == '-' && c.find_first_of("+*", 1) == std::string::npos;
            if (neg) c.erase(0, 1);
            if (c.find_first_of("+-", 1) != std::string::npos) c = "(" + c + ")";
            if (k) s += neg ? " - " : " + ";
            else if (neg) s += "-";
            std::string mono;
            for (std::size_t v = 0; v < n_; ++v) {
                if (!t.m[v]) continue;
                if (!mono.empty()) mono += "*";
                mono += v < names.size() ? names[v] : "x" + std::to_string(v);
                if (t.m[v] > 1) mono += "^" + std::to_string(t.m[v]);
            }
            if (mono.empty()) s += c;
            else if (c == "1") s += mono;
            else s += c + "*" + mono;
        }
        return s;
    }

private:
    template <class T>
    static T coerce(const K& c) {
        if constexpr (std::is_same_v<T, K>) return c;
        else return T(c);
    }

    void canonicalize() {
        std::sort(t_.begin(), t_.end(), [](const Term& a, const Term& b) { return GrlexGreater{}(a.m, b.m); });
        std::vector<Term> out;
        out.reserve(t_.size());
        for (auto& t : t_) {
            if (!out.empty() && out.back().m == t.m) out.back().c += t.c;
            else out.push_back(std::move(t));
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.c.is_zero(); }), out.end());
        t_ = std::move(out);
    }

    static MPoly from_map(std::size_t n, const K& one, std::unordered_map<Mono, K, MonoHash>& acc) {
        MPoly r(n, one);
        r.t_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (!c.is_zero()) r.t_.push_back({m, std::move(c)});
        std::sort(r.t_.begin(), r.t_.end(), [](const Term& a, const Term& b) { return GrlexGreater{}(a.m, b.m); });
        return r;
    }

    void check_ring(const MPoly& o) const {
        if (n_ != o.n_) throw std::invalid_argument("polynomial arity mismatch");
    }

    MPoly merge(const MPoly& o, bool subtract) const {
        check_ring(o);
        MPoly r(n_, one_);
        r.t_.reserve(t_.size() + o.t_.size());
        std::size_t i = 0, j = 0;
        GrlexGreater gt;
        while (i < t_.size() || j < o.t_.size()) {
            if (j == o.t_.size() || (i < t_.size() && gt(t_[i].m, o.t_[j].m))) {
                r.t_.push_back(t_[i++]);
            } else if (i == t_.size() || gt(o.t_[j].m, t_[i].m)) {
                r.t_.push_back({o.t_[j].m, subtract ? -o.t_[j].c : o.t_[j].c});
                ++j;
            } else {
                K c = subtract ? t_[i].c - o.t_[j].c : t_[i].c + o.t_[j].c;
                if (!c.is_zero()) r.t_.push_back({t_[i].m, std::move(c)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    MPoly mul(const MPoly& o) const {
        check_ring(o);
        if (t_.empty() || o.t_.empty()) return MPoly(n_, one_);
        if (t_.size() == 1 || o.t_.size() == 1) {
            const Term& s = t_.size() == 1 ? t_[0] : o.t_[0];
            const MPoly& big = t_.size() == 1 ? o : *this;
            MPoly r(n_, one_);
            r.t_.reserve(big.t_.size());
            for (const auto& t : big.t_) {
                K c = t.c * s.c;
                if (!c.is_zero()) r.t_.push_back({t.m * s.m, std::move(c)});
            }
            return r;
        }
        std::unordered_map<Mono, K, MonoHash> acc;
        acc.reserve(t_.size() * o.t_.size());
        for (const auto& a : t_) {
            for (const auto& b : o.t_) {
                Mono m = a.m * b.m;
                auto it = acc.find(m);
                if (it == acc.end()) acc.emplace(m, a.c * b.c);
                else it->second += a.c * b.c;
            }
        }
        return from_map(n_, one_, acc);
    }

    std::size_t n_ = 0;
    K one_{};
    std::vector<Term> t_;
};

template <class K>
struct PolyRing {
    std::size_t n;
    K one;

    MPoly<K> zero() const { return MPoly<K>(n, one); }
    MPoly<K> cst(long k) const { return MPoly<K>::constant(n, one.from_int(k), one); }
    MPoly<K> cst(const K& c) const { return MPoly<K>::constant(n, c, one); }
    MPoly<K> var(std::size_t i) const { return MPoly<K>::variable(n, i, one); }
    std::vector<MPoly<K>> vars() const {
        std::vector<MPoly<K>> v;
        for (std::size_t i = 0; i < n; ++i) v.push_back(var(i));
        return v;
    }
};

inline PolyRing<Rational> ring_q(std::size_t n) { return {n, Rational(1)}; }
inline PolyRing<QuadExt> ring_qxi(std::size_t n) { return {n, QuadExt(1)}; }
inline PolyRing<FqElem> ring_fq(std::size_t n, const FieldDescriptor& f) { return {n, FqElem(f, 1 % f.q)}; }

inline MPoly<QuadExt> to_qxi(const MPoly<Rational>& f) {
    return f.map_coeffs([](const Rational& c) { return QuadExt(c); }, QuadExt(1));
}
inline MPoly<FqElem> to_fq(const MPoly<Rational>& f, const FieldDescriptor& d) {
    return f.map_coeffs([&](const Rational& c) { return FqElem::from_rational(d, c); }, FqElem(d, 1));
}
inline MPoly<FqElem> to_fq(const MPoly<QuadExt>& f, const FieldDescriptor& d) {
    return f.map_coeffs([&](const QuadExt& c) { return specialize(d, c); }, FqElem(d, 1));
}
// Rational part; throws if some coefficient has a xi component.
inline MPoly<Rational> real_part_strict(const MPoly<QuadExt>& f) {
    return f.map_coeffs(
        [](const QuadExt& c) {
            if (!c.is_rational()) throw std::logic_error("residual xi coefficient");
            return c.re();
        },
        Rational(1));
}
inline std::pair<MPoly<Rational>, MPoly<Rational>> split_xi(const MPoly<QuadExt>& f) {
    return {f.map_coeffs([](const QuadExt& c) { return c.re(); }, Rational(1)),
            f.map_coeffs([](const QuadExt& c) { return c.im(); }, Rational(1))};
}

// Integer coefficients with content 1 and positive leading coefficient.
inline MPoly<Rational> integer_content_normalize(const MPoly<Rational>& f) {
    if (f.is_zero()) throw std::invalid_argument("integer_content_normalize: zero polynomial");
    mpz_class l = 1, g = 0;
    for (const auto& t : f.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.den().get_mpz_t());
    for (const auto& t : f.terms()) {
        mpz_class v = t.c.num() * (l / t.c.den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    Rational s(l, g);
    if (f.leading().c.sign() < 0) s = -s;
    return f.scale(s);
}

// Exact division by one divisor; nullopt when g does not divide f.
template <class K>
std::optional<MPoly<K>> trial_divide(const MPoly<K>& f, const MPoly<K>& g) {
    if (g.is_zero()) throw DivisionByZero();
    const auto& lg = g.leading();
    K inv = lg.c.inv();
    MPoly<K> r = f, q(f.nvars(), f.one());
    while (!r.is_zero()) {
        const auto& lr = r.leading();
        if (!lg.m.divides(lr.m)) return std::nullopt;
        typename MPoly<K>::Term qt{lr.m.quotient(lg.m), lr.c * inv};
        MPoly<K> step = MPoly<K>::from_terms(f.nvars(), f.one(), {qt});
        q += step;
        r -= g * step;
    }
    return q;
}

// Parser for polynomial text such as "3u0^2u1 - (1/3)t(x0x1 + x2^2)".
// Identifiers are letters followed by digits, so "z5z6" is z5*z6; juxtaposition multiplies.
template <class K>
class PolyParser {
public:
    PolyParser(const PolyRing<K>& ring, std::vector<std::string> names) : ring_(ring), names_(std::move(names)) {}

    MPoly<K> parse(const std::string& text) {
        s_ = text;
        i_ = 0;
        MPoly<K> r = expr();
        skip();
        if (i_ != s_.size()) fail("trailing input");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("parse error (" + why + ") at " + std::to_string(i_) + " in: " + s_);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool starts_factor() {
        skip();
        if (i_ >= s_.size()) return false;
        char c = s_[i_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '(';
    }
    long integer() {
        skip();
        std::size_t b = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (b == i_) fail("expected integer");
        return std::stol(s_.substr(b, i_ - b));
    }
    MPoly<K> primary() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            MPoly<K> r = expr();
            skip();
            if (i_ >= s_.size() || s_[i_] != ')') fail("expected )");
            ++i_;
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return ring_.cst(integer());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t b = i_;
            while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            std::string id = s_.substr(b, i_ - b);
            for (std::size_t k = 0; k < names_.size(); ++k)
                if (names_[k] == id) return ring_.var(k);
            fail("unknown variable " + id);
        }
        fail(std::string("unexpected character ") + c);
    }
    MPoly<K> factor() {
        MPoly<K> b = primary();
        skip();
        if (i_ < s_.size() && s_[i_] == '^') {
            ++i_;
            return b.pow(static_cast<unsigned>(integer()));
        }
        return b;
    }
    MPoly<K> term() {
        MPoly<K> r = factor();
        for (;;) {
            skip();
            if (i_ < s_.size() && s_[i_] == '*') {
                ++i_;
                r = r * factor();
            } else if (i_ < s_.size() && s_[i_] == '/') {
                ++i_;
                long d = integer();
                r = r.scale(ring_.one.from_int(d).inv());
            } else if (starts_factor()) {
                r = r * factor();
            } else {
                return r;
            }
        }
    }
    MPoly<K> expr() {
        skip();
        bool neg = false;
        if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) neg = s_[i_++] == '-';
        MPoly<K> r = term();
        if (neg) r = -r;
        for (;;) {
            skip();
            if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) {
                bool minus = s_[i_++] == '-';
                MPoly<K> t = term();
                r = minus ? r - t : r + t;
            } else {
                return r;
            }
        }
    }

    PolyRing<K> ring_;
    std::vector<std::string> names_;
    std::string s_;
    std::size_t i_ = 0;
};

inline std::vector<std::string> var_names(const std::string& prefix, std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
    return v;
}

template <class K>
MPoly<K> parse_poly(const PolyRing<K>& ring, const std::vector<std::string>& names, const std::string& text) {
    return PolyParser<K>(ring, names).parse(text);
}

inline MPoly<Rational> parse_q(const std::vector<std::string>& names, const std::string& text) {
    return parse_poly(ring_q(names.size()), names, text);
}

}  // namespace fermat

#endif
