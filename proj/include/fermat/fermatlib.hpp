#ifndef FERMAT_FERMATLIB_HPP
#define FERMAT_FERMATLIB_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "fermat/projgeo.hpp"

namespace fermat {

// Half-dimension n and coefficient field. Source P^{2n} has u0..u2n, ambient P^{2n+1} has x0..x{2n+1}.
template <class K>
struct FermatContext {
    unsigned n = 1;
    K one;

    int characteristic() const { return one.characteristic(); }
    PolyRing<K> ring(std::size_t nvars) const { return {nvars, one}; }
    std::size_t src_vars() const { return 2 * n + 1; }
    std::size_t amb_vars() const { return 2 * n + 2; }
};

inline FermatContext<Rational> ctx_q(unsigned n) { return {n, Rational(1)}; }
inline FermatContext<QuadExt> ctx_qxi(unsigned n) { return {n, QuadExt(1)}; }
inline FermatContext<FqElem> ctx_fq(unsigned n, const FieldDescriptor& f) { return {n, FqElem(f, 1)}; }

namespace detail {

template <class K>
void require_n(const FermatContext<K>& c, unsigned min_n = 1) {
    if (c.n < min_n || c.amb_vars() > kMaxVars) throw std::invalid_argument("n out of range: " + std::to_string(c.n));
}

template <class K>
void require_char_not(const FermatContext<K>& c, int p, const char* what) {
    if (c.characteristic() == p)
        throw std::domain_error(std::string(what) + ": not available in characteristic " + std::to_string(p));
}

template <class K>
void require_char(const FermatContext<K>& c, int p, const char* what) {
    if (c.characteristic() != p)
        throw std::domain_error(std::string(what) + ": requires characteristic " + std::to_string(p));
}

// A̅ and B̅ without characteristic checks (the counting kernel reduces them mod odd p).
template <class K>
std::pair<MPoly<K>, MPoly<K>> ab_forms(const PolyRing<K>& R, unsigned n) {
    auto u0 = R.var(0);
    MPoly<K> A = u0.pow(3), B = u0.pow(3);
    for (unsigned i = 0; i < n; ++i) {
        auto a = R.var(2 * i + 1), b = R.var(2 * i + 2);
        auto a2 = a * a, b2 = b * b;
        A += a2 * a + (a2 * b).scale(3) + (a * b2).scale(3) + (b2 * b).scale(9);
        B += a2 * a - a2 * b + (a * b2).scale(3) - (b2 * b).scale(3);
    }
    return {A, B};
}

template <class K>
std::pair<MPoly<K>, MPoly<K>> char2_pq_forms(const PolyRing<K>& R, unsigned n) {
    MPoly<K> P = R.zero(), Q = R.zero();
    for (std::size_t i = 0; i <= 2 * n; ++i) P += R.var(i).pow(3);
    for (unsigned i = 0; i < n; ++i) {
        auto a = R.var(2 * i), b = R.var(2 * i + 1);
        Q += a * a * b + a * b * b + b.pow(3);
    }
    return {P, Q};
}

inline std::size_t rank_rational(std::vector<std::vector<Rational>> m) {
    std::size_t rank = 0;
    if (m.empty()) return 0;
    std::size_t cols = m[0].size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c].is_zero()) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        Rational inv = m[rank][c].inv();
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c].is_zero()) continue;
            Rational f = m[r][c] * inv;
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace detail

template <class K>
MPoly<K> fermat_cubic(const FermatContext<K>& c) {
    detail::require_n(c);
    if (c.characteristic() == 3)
        throw std::domain_error("fermat_cubic: in characteristic 3 the form is the cube of a hyperplane");
    auto R = c.ring(c.amb_vars());
    MPoly<K> F = R.zero();
    for (std::size_t i = 0; i < c.amb_vars(); ++i) F += R.var(i).pow(3);
    return F;
}

template <class K>
struct FormPair {
    MPoly<K> first, second;
};

template <class K>
FormPair<K> build_AB(const FermatContext<K>& c) {
    detail::require_n(c);
    detail::require_char_not(c, 2, "build_AB");
    detail::require_char_not(c, 3, "build_AB");
    auto [A, B] = detail::ab_forms(c.ring(c.src_vars()), c.n);
    return {A, B};
}

// φ̄ with every component doubled so that all coefficients are integral.
template <class K>
RationalMap<K> build_phi(const FermatContext<K>& c) {
    auto [A, B] = build_AB(c);
    auto R = c.ring(c.src_vars());
    std::vector<MPoly<K>> comps(c.amb_vars(), R.zero());
    for (unsigned i = 0; i < c.n; ++i) {
        auto a = R.var(2 * i + 1), b = R.var(2 * i + 2);
        comps[2 * i] = (a - b.scale(3)) * A - (a + b).scale(3) * B;
        comps[2 * i + 1] = (a * A - b.scale(3) * B).scale(2);
    }
    auto u0 = R.var(0);
    comps[2 * c.n] = u0 * (A - B.scale(3));
    comps[2 * c.n + 1] = (u0 * A).scale(2);
    return normalize_map(RationalMap<K>(std::move(comps)));
}

template <class K>
RationalMap<K> build_qoppa(const FermatContext<K>& c) {
    detail::require_n(c);
    detail::require_char_not(c, 3, "build_qoppa");
    auto R = c.ring(c.amb_vars());
    auto xa = R.var(2 * c.n), xb = R.var(2 * c.n + 1);
    std::vector<MPoly<K>> q;
    for (unsigned i = 0; i < c.n; ++i) {
        auto e = R.var(2 * i), o = R.var(2 * i + 1);
        q.push_back(e * xa - e * xb + o * xb);
        q.push_back(o * xa - e * xb);
    }
    q.push_back(xa * xa - xa * xb + xb * xb);
    return RationalMap<K>(std::move(q));
}

// Linear automorphism of P^{2n} with h∘ϙ∘φ̄ = id.
template <class K>
RationalMap<K> build_h(const FermatContext<K>& c) {
    detail::require_n(c);
    detail::require_char_not(c, 2, "build_h");
    auto R = c.ring(c.src_vars());
    std::vector<MPoly<K>> out(c.src_vars(), R.zero());
    out[0] = R.var(2 * c.n).scale(2);
    for (unsigned i = 0; i < c.n; ++i) {
        out[2 * i + 1] = R.var(2 * i).scale(2) - R.var(2 * i + 1);
        out[2 * i + 2] = R.var(2 * i + 1);
    }
    return RationalMap<K>(std::move(out));
}

template <class K>
FormPair<K> build_char2_PQ(const FermatContext<K>& c) {
    detail::require_n(c);
    detail::require_char(c, 2, "build_char2_PQ");
    auto [P, Q] = detail::char2_pq_forms(c.ring(c.src_vars()), c.n);
    return {P, Q};
}

// Inverse of ϙ on X^{2n} in characteristic two.
template <class K>
RationalMap<K> build_char2_g(const FermatContext<K>& c) {
    auto [P, Q] = build_char2_PQ(c);
    auto R = c.ring(c.src_vars());
    std::vector<MPoly<K>> g;
    for (unsigned i = 0; i < c.n; ++i) {
        auto e = R.var(2 * i), o = R.var(2 * i + 1);
        g.push_back((e + o) * P + e * Q);
        g.push_back(e * P + o * Q);
    }
    auto last = R.var(2 * c.n);
    g.push_back(last * (P + Q));
    g.push_back(last * P);
    return RationalMap<K>(std::move(g));
}

// Base locus {A̅ = B̅ = 0} of φ̄.
template <class K>
Ideal<K> ideal_Y(const FermatContext<K>& c) {
    auto [A, B] = build_AB(c);
    return Ideal<K>(c.src_vars(), {A, B});
}

// Singular locus of Y: two conjugate (n-1)-planes.
template <class K>
Ideal<K> ideal_Z(const FermatContext<K>& c) {
    detail::require_n(c);
    auto R = c.ring(c.src_vars());
    std::vector<MPoly<K>> g{R.var(0)};
    for (unsigned i = 0; i < c.n; ++i) {
        auto a = R.var(2 * i + 1), b = R.var(2 * i + 2);
        g.push_back(a * a + (b * b).scale(3));
    }
    for (unsigned s = 0; s + 1 < c.n; ++s)
        for (unsigned t = s; t + 1 < c.n; ++t) {
            auto a = R.var(2 * s + 1), b = R.var(2 * s + 2), a2 = R.var(2 * t + 3), b2 = R.var(2 * t + 4);
            g.push_back(a * a2 + (b * b2).scale(3));
            g.push_back(b * a2 - a * b2);
        }
    return Ideal<K>(c.src_vars(), std::move(g));
}

template <class K>
Ideal<K> ideal_Y_char2(const FermatContext<K>& c) {
    auto [P, Q] = build_char2_PQ(c);
    return Ideal<K>(c.src_vars(), {P, Q});
}

template <class K>
Ideal<K> ideal_Z_char2(const FermatContext<K>& c) {
    detail::require_n(c);
    detail::require_char(c, 2, "ideal_Z_char2");
    auto R = c.ring(c.src_vars());
    auto u = R.vars();
    std::vector<MPoly<K>> g;
    for (unsigned i = 0; i < c.n; ++i) g.push_back(u[2 * i] * u[2 * i] + u[2 * i] * u[2 * i + 1] + u[2 * i + 1] * u[2 * i + 1]);
    for (unsigned i = 0; i < c.n; ++i)
        for (unsigned j = i + 1; j < c.n; ++j)
            g.push_back(u[2 * i] * u[2 * j] + u[2 * i] * u[2 * j + 1] + u[2 * i + 1] * u[2 * j + 1]);
    for (unsigned i = 0; i + 1 < c.n; ++i)
        for (unsigned j = i; j + 1 < c.n; ++j) g.push_back(u[2 * i + 1] * u[2 * j + 2] + u[2 * i] * u[2 * j + 3]);
    g.push_back(u[2 * c.n]);
    return Ideal<K>(c.src_vars(), std::move(g));
}

// H^n_+ ∪ H^n_-, the base locus of ϙ on X^{2n}.
template <class K>
Ideal<K> ideal_H_pm(const FermatContext<K>& c) {
    detail::require_n(c);
    auto R = c.ring(c.amb_vars());
    auto x = R.vars();
    std::vector<MPoly<K>> g;
    for (unsigned i = 0; i <= c.n; ++i) g.push_back(x[2 * i] * x[2 * i] - x[2 * i] * x[2 * i + 1] + x[2 * i + 1] * x[2 * i + 1]);
    for (unsigned i = 0; i < c.n; ++i)
        for (unsigned j = i; j < c.n; ++j)
            g.push_back(x[2 * i] * x[2 * j + 2] - x[2 * i] * x[2 * j + 3] + x[2 * i + 1] * x[2 * j + 3]);
    for (unsigned i = 1; i <= c.n; ++i)
        for (unsigned j = i; j <= c.n; ++j) g.push_back(x[2 * i - 1] * x[2 * j] - x[2 * i - 2] * x[2 * j + 1]);
    return Ideal<K>(c.amb_vars(), std::move(g));
}

// Hyperplane section W of Y used in the point count of Y: {u0 = 0} for odd p, {u2n = 0} in characteristic two.
template <class K>
Ideal<K> ideal_W(const FermatContext<K>& c) {
    auto R = c.ring(c.src_vars());
    if (c.characteristic() == 2) {
        auto I = ideal_Y_char2(c);
        I.gens.push_back(R.var(2 * c.n));
        return I;
    }
    auto I = ideal_Y(c);
    I.gens.push_back(R.var(0));
    return I;
}

// D = A̅P + B̅Q with P = A̅ and Q = 3B̅: the divisor that φ̄ contracts onto H±.
template <class K>
MPoly<K> D_divisor(const FermatContext<K>& c) {
    auto [A, B] = build_AB(c);
    return A * A + (B * B).scale(3);
}

template <class K>
struct FermatIdeals {
    std::optional<Ideal<K>> Y, Z, Y_char2, Z_char2, H_pm;
    std::optional<MPoly<K>> D_divisor;
};

template <class K>
FermatIdeals<K> build_ideals(const FermatContext<K>& c) {
    FermatIdeals<K> r;
    int p = c.characteristic();
    r.Z = ideal_Z(c);
    if (p != 3) r.H_pm = ideal_H_pm(c);
    if (p == 2) {
        r.Y_char2 = ideal_Y_char2(c);
        r.Z_char2 = ideal_Z_char2(c);
    } else if (p != 3) {
        r.Y = ideal_Y(c);
        r.D_divisor = D_divisor(c);
    }
    return r;
}

// Projection of Y from [0:...:0:1]: a hypersurface in v0..v{2n-1}, n >= 2.
template <class K>
MPoly<K> irr_hypersurface(const FermatContext<K>& c) {
    detail::require_n(c, 2);
    auto R = c.ring(2 * c.n);
    auto w = R.var(2 * c.n - 1);
    MPoly<K> P = R.var(0).pow(3) + w.pow(3), S = R.zero();
    for (unsigned i = 0; i + 1 < c.n; ++i) {
        auto a = R.var(2 * i + 1), b = R.var(2 * i + 2);
        P += a.pow(3) + (a * b * b).scale(3);
        S += a * a * b + b.pow(3).scale(3);
    }
    auto w3 = w.pow(3);
    return P.pow(3) - (w3 * P * P).scale(2) + w3 * w3 * P + (w3 * S * S).scale(3);
}

// Substitution u0 = 0, u_{2i+1} = -sign·ξ·u_{2i+2} cutting out Z_+ (sign = +1) or Z_- (sign = -1).
inline std::map<std::size_t, MPoly<QuadExt>> z_pm_substitution(unsigned n, int sign) {
    auto R = ring_qxi(2 * n + 1);
    std::map<std::size_t, MPoly<QuadExt>> s{{0, R.zero()}};
    QuadExt k = sign > 0 ? -QuadExt::xi() : QuadExt::xi();
    for (unsigned i = 0; i < n; ++i) s.emplace(2 * i + 1, R.var(2 * i + 2).scale(k));
    return s;
}

template <class K>
struct CremonaPair {
    RationalMap<K> alpha, beta;
};

// Cubic Cremona α and its quadratic inverse β; n = 1 gives the standard quadratic maps.
template <class K>
CremonaPair<K> build_cremona(const FermatContext<K>& c) {
    detail::require_n(c);
    auto R = c.ring(c.src_vars());
    auto t = R.vars();
    const auto& u = t;
    if (c.n == 1) {
        RationalMap<K> a({(t[0] * t[0] + t[0] * t[1] + t[1] * t[1]).scale(-2), (t[0] * t[2]).scale(2) + t[1] * t[2], t[1] * t[2]});
        RationalMap<K> b({u[0] * u[2] - u[0] * u[1], (u[0] * u[2]).scale(-2), u[1] * u[1] + (u[2] * u[2]).scale(3)});
        return {a, b};
    }
    std::vector<MPoly<K>> a(c.src_vars(), R.zero()), b(c.src_vars(), R.zero());
    auto t0 = t[0], t1 = t[1], t2 = t[2];
    a[0] = (t0.pow(3) + t0 * t0 * t1 + t0 * t1 * t1).scale(-2);
    a[1] = (t0 * t0 * t2).scale(2) + t0 * t1 * t2;
    for (unsigned i = 1; i <= c.n; ++i) a[2 * i] = t0 * t2 * t[2 * i - 1];
    for (unsigned j = 1; j < c.n; ++j)
        a[2 * j + 1] = -(t0 * t2 * t[2 * j + 1]) - (t1 * t2 * t[2 * j + 1]).scale(2) +
                       (t0 * t0 + t1 * t1 + t0 * t1).scale(2) * t[2 * j + 2];
    b[0] = u[0] * u[2] - u[0] * u[1];
    for (unsigned i = 0; i < c.n; ++i) b[2 * i + 1] = (u[0] * u[2 * i + 2]).scale(-2);
    b[2] = u[1] * u[1] + (u[2] * u[2]).scale(3);
    for (unsigned j = 0; j + 1 < c.n; ++j)
        b[2 * j + 4] = (u[1] - u[2]) * u[2 * j + 3] + (u[1] + u[2].scale(3)) * u[2 * j + 4];
    return {RationalMap<K>(std::move(a)), RationalMap<K>(std::move(b))};
}

struct DNM {
    MPoly<Rational> D, N, M;
};

// D_{2n}, N_{2n}, M_{2n} in t0..t2n (t0 unused), built from the n = 1, 2 bases and the primed increments.
inline DNM build_DNM(unsigned n) {
    if (n < 1 || 2 * n + 1 > kMaxVars) throw std::invalid_argument("build_DNM: n out of range");
    auto names = var_names("t", 2 * n + 1);
    if (n == 1) {
        return {parse_q(names, "2(t1^4 - 2t1t2^3 + 2t1^3 - t2^3 + 3t1^2 + 2t1 + 1)"),
                parse_q(names, "-t1^4 - 2t1^3 + t2^3 - 3t1^2 - 2t1 - 1"),
                parse_q(names, "t1^4 - 2t1t2^3 + 2t1^3 - t2^3 + 3t1^2 + 2t1 + 1")};
    }
    DNM r{parse_q(names, "2(t1^4t4^3 - 3t1^3t2t3t4^2 + 3t1^2t2^2t3^2t4 - t1t2^3t3^3 + 2t1^3t4^3 - 3t1^2t2t3t4^2"
                         " + t2^3t3^3 + 3t1^2t4^3 - 3t1t2t3t4^2 - t1^4 + 2t1t2^3 + 2t1t4^3 - 2t1^3 + t2^3 + t4^3"
                         " - 3t1^2 - 2t1 - 1)"),
          parse_q(names, "3t1^2 + t1^4 + 2t1 - t2^3 + 2t1^3 - t4^3 - 2t2^2t3^2t4 + 2t2t3t4^2 + t1t2^3t3^3"
                         " - 4t1t2^2t3^2t4 - 3t1^2t2^2t3^2t4 + 5t1^2t2t3t4^2 + 5t1t2t3t4^2 + 3t1^3t2t3t4^2 + t2^3t3^3"
                         " - t1^4t4^3 - 2t1^3t4^3 - 3t1^2t4^3 - 2t1t4^3 + 1"),
          parse_q(names, "-t1t2^3t3^3 - t1^4 + 2t1t2^3 - 2t1^3 + t2^3 - 3t1^2 - 2t1 + t1^4t4^3 + 2t1^3t4^3"
                         " + t2^3t3^3 + 3t1^2t4^3 + 2t1t4^3 - 3t1^3t2t3t4^2 + 3t1^2t2^2t3^2t4 - 3t1^2t2t3t4^2"
                         " - 3t1t2t3t4^2 + t4^3 - 1")};
    for (unsigned i = 3; i <= n; ++i) {
        auto nm = names;
        nm[2 * i - 1] = "a";
        nm[2 * i] = "b";
        r.D += parse_q(nm, "2(t1^4b^3 - 3t1^3a t2 b^2 + 3t1^2a^2t2^2b - t1a^3t2^3 + 2t1^3b^3 - 3t1^2a t2 b^2"
                           " + a^3t2^3 + 3t1^2b^3 - 3t1 a t2 b^2 + 2t1b^3 + b^3)");
        r.N += parse_q(nm, "t2^3a^3 - 2t1^3b^3 - t1^4b^3 - 2t1b^3 - 3t1^2b^3 - b^3 + t1t2^3a^3 + 2t2 a b^2"
                           " - 2t2^2a^2b + 3t1^3t2 a b^2 + 5t1^2t2 a b^2 + 5t1t2 a b^2 - 3t1^2t2^2a^2b - 4t1t2^2a^2b");
        r.M += parse_q(nm, "b^3 - 3t1^3t2 a b^2 + 3t1^2t2^2a^2b - t1t2^3a^3 - 3t1^2t2 a b^2 - 3t1t2 a b^2"
                           " + t1^4b^3 + 2t1^3b^3 + t2^3a^3 + 3t1^2b^3 + 2t1b^3");
    }
    return r;
}

// Φ : P^{2n} ⇢ X^{2n} sending t to the third point of X on the line through p^{a+}(t) ∈ H_+ and p^{a-}(t) ∈ H_-.
// The point with parameter λ3 = (Nξ+M)/D is scaled by 4·d+·d-·D, d± = ±ξ + 2t1 + 1 (up to sign),
// and d+·d- = -4(t1^2+t1+1) is then divided out exactly.
inline RationalMap<Rational> build_grassmann_param(unsigned n) {
    auto dnm = build_DNM(n);
    auto R = ring_qxi(2 * n + 1);
    QuadExt xi = QuadExt::xi(), one(1), ap = QuadExt::a_plus(), am = QuadExt::a_minus();
    auto t1 = R.var(1), t2 = R.var(2);
    auto dp = R.cst(xi) + t1.scale(QuadExt(2)) + R.cst(1);
    auto dm = R.cst(xi) - t1.scale(QuadExt(2)) - R.cst(1);
    std::size_t m = 2 * n + 2;
    std::vector<MPoly<QuadExt>> pp(m, R.zero()), pm(m, R.zero());
    pp[0] = t2.scale(-(xi + one) * (xi + one));
    pp[1] = t2.scale(QuadExt(-2) * (xi + one));
    pm[0] = t2.scale((xi - one) * (xi - one));
    pm[1] = t2.scale(QuadExt(-2) * (xi - one));
    for (unsigned i = 0; i + 1 < n; ++i) {
        auto a = R.var(2 * i + 3), b = R.var(2 * i + 4);
        pp[2 * i + 2] = (b.scale(xi) + (t1 * b).scale(QuadExt(2)) - (a * t2).scale(QuadExt(2)) + b).scale(-(xi + one));
        pp[2 * i + 3] = pp[2 * i + 2].scale(am);
        pm[2 * i + 2] = (b.scale(xi) - (t1 * b).scale(QuadExt(2)) + (a * t2).scale(QuadExt(2)) - b).scale(xi - one);
        pm[2 * i + 3] = pm[2 * i + 2].scale(ap);
    }
    pp[2 * n] = dp.scale(one + xi);
    pp[2 * n + 1] = dp.scale(QuadExt(2));
    pm[2 * n] = dm.scale(one - xi);
    pm[2 * n + 1] = dm.scale(QuadExt(2));

    auto D = to_qxi(dnm.D), lam = to_qxi(dnm.N).scale(xi) + to_qxi(dnm.M);
    auto two_dp = dp.scale(QuadExt(2)), two_dm = dm.scale(QuadExt(2));
    auto rq = ring_q(2 * n + 1);
    auto cyclo = rq.var(1) * rq.var(1) + rq.var(1) + rq.cst(1);
    std::vector<MPoly<Rational>> comps;
    int dmax = 0;
    for (std::size_t i = 0; i < m; ++i) {
        auto ci = two_dm * D * pp[i] + lam * (two_dp * pm[i] - two_dm * pp[i]);
        MPoly<Rational> re;
        try {
            re = real_part_strict(ci);
        } catch (const std::logic_error&) {
            throw std::logic_error("build_grassmann_param: component " + std::to_string(i) + " is not xi-free");
        }
        auto q = trial_divide(re, cyclo);
        if (!q) throw std::logic_error("build_grassmann_param: t1^2+t1+1 does not divide component " + std::to_string(i));
        dmax = std::max(dmax, q->degree());
        comps.push_back(std::move(*q));
    }
    int want = n == 1 ? 4 : 8;
    if (dmax != want)
        throw std::logic_error("build_grassmann_param: degree " + std::to_string(dmax) + ", expected " + std::to_string(want));
    for (auto& f : comps)
        if (!f.is_zero()) f = f.homogenize(0, static_cast<unsigned>(dmax));
    return normalize_map(RationalMap<Rational>(std::move(comps)));
}

// The linear system of quartics L_A·A̅ + L_B·B̅ singular along Z_±; its dimension is 2n+2.
inline std::size_t quartic_system_dimension(unsigned n) {
    auto c = ctx_qxi(n);
    detail::require_n(c);
    auto [A, B] = build_AB(c);
    auto R = c.ring(c.src_vars());
    std::size_t nv = c.src_vars(), unknowns = 2 * nv;
    std::map<std::tuple<int, std::size_t, std::vector<unsigned>, int>, std::size_t> row_of;
    std::vector<std::vector<Rational>> rows;
    for (int sign : {1, -1}) {
        auto sub = z_pm_substitution(n, sign);
        for (std::size_t j = 0; j < unknowns; ++j) {
            auto G = R.var(j % nv) * (j < nv ? A : B);
            for (std::size_t k = 0; k < nv; ++k) {
                auto S = G.derivative(k).substitute(sub);
                for (const auto& t : S.terms()) {
                    std::vector<unsigned> e(nv);
                    for (std::size_t v = 0; v < nv; ++v) e[v] = t.m[v];
                    for (int part = 0; part < 2; ++part) {
                        Rational val = part == 0 ? t.c.re() : t.c.im();
                        if (val.is_zero()) continue;
                        auto key = std::make_tuple(sign, k, e, part);
                        auto it = row_of.find(key);
                        if (it == row_of.end()) {
                            it = row_of.emplace(key, rows.size()).first;
                            rows.emplace_back(unknowns, Rational(0));
                        }
                        rows[it->second][j] += val;
                    }
                }
            }
        }
    }
    return unknowns - detail::rank_rational(std::move(rows));
}

struct MultiplicityReport {
    bool values_vanish = true;
    bool first_partials_vanish = true;
    bool some_second_partial_nonzero = false;
    bool ok() const { return values_vanish && first_partials_vanish && some_second_partial_nonzero; }
};

// φ̄ vanishes to order exactly two along Z_+ and Z_-.
inline MultiplicityReport singular_locus_multiplicity(unsigned n) {
    auto phi = build_phi(ctx_q(n));
    MultiplicityReport r;
    std::size_t nv = 2 * n + 1;
    bool second[2] = {false, false};
    for (int s = 0; s < 2; ++s) {
        auto sub = z_pm_substitution(n, s == 0 ? 1 : -1);
        for (const auto& f : phi.comps) {
            auto g = to_qxi(f);
            if (!g.substitute(sub).is_zero()) r.values_vanish = false;
            for (std::size_t k = 0; k < nv; ++k) {
                auto dk = g.derivative(k);
                if (!dk.substitute(sub).is_zero()) r.first_partials_vanish = false;
                for (std::size_t l = k; l < nv && !second[s]; ++l)
                    if (!dk.derivative(l).substitute(sub).is_zero()) second[s] = true;
            }
        }
    }
    r.some_second_partial_nonzero = second[0] && second[1];
    return r;
}

struct SurfaceMaps {
    RationalMap<Rational> phi, chi, cr, cr_inv, gamma, phi_inv, phi_inv_displayed, chi_inv, chi_inv_displayed;
};

inline SurfaceMaps build_surface_maps() {
    std::vector<std::string> u = var_names("u", 3), v = var_names("v", 3), x = var_names("x", 4), a = var_names("a", 2);
    auto P = [](const std::vector<std::string>& names, std::initializer_list<const char*> comps) {
        std::vector<MPoly<Rational>> c;
        for (const char* s : comps) c.push_back(parse_q(names, s));
        return RationalMap<Rational>(std::move(c));
    };
    SurfaceMaps s;
    s.phi = P(u, {"-u0^4 - 6u0^2u1^2 - 9u1^4 - u0u2^3 - 3u1u2^3", "u0^4 + 6u0^2u1^2 + 9u1^4 + u0u2^3 - 3u1u2^3",
                  "-u0^3u2 + 3u0^2u1u2 - 3u0u1^2u2 + 9u1^3u2 - u2^4", "u0^3u2 + 3u0^2u1u2 + 3u0u1^2u2 + 9u1^3u2 + u2^4"});
    s.chi = P(v, {"v0^3 + 2v0^2v1 + 2v0v1^2 + v1^3 + 3v1^2v2 + 6v0v2^2 + 3v1v2^2 + 9v2^3",
                  "-v0^3 - 2v0^2v1 - 2v0v1^2 - v1^3 + 3v1^2v2 - 6v0v2^2 - 3v1v2^2 + 9v2^3",
                  "v0^2v1 + v0v1^2 + v1^3 - 3v0^2v2 - 6v0v1v2 - 3v1^2v2 - 3v0v2^2 + 3v1v2^2 - 9v2^3",
                  "-v0^2v1 - v0v1^2 - v1^3 - 3v0^2v2 - 6v0v1v2 - 3v1^2v2 + 3v0v2^2 - 3v1v2^2 - 9v2^3"});
    s.cr = P(u, {"u0^2 + 3u1^2 - u2^2", "u0u2 + u2^2", "u1u2"});
    s.cr_inv = P(v, {"v0v1 + v1^2 - 3v2^2", "v0v2 + 2v1v2", "v1^2 + 3v2^2"});
    s.gamma = P(a, {"a0a1^2", "-3a0^2a1 + 2a0a1^2 - a1^3", "-3a0^3 + 3a0^2a1 - 2a0a1^2 + a1^3", "3a0^3 - 3a0^2a1 + 2a0a1^2"});
    s.phi_inv_displayed = P(x, {"2x0x2 - x1x2 - x0x3 + 2x1x3", "x2^2 - x2x3 + x3^2", "x1x2 - x0x3"});
    s.phi_inv = RationalMap<Rational>(
        {s.phi_inv_displayed.comps[0], s.phi_inv_displayed.comps[2], s.phi_inv_displayed.comps[1].scale(2)});
    s.chi_inv = map_compose(s.cr, s.phi_inv);
    s.chi_inv_displayed = P(x, {"x1x2 + x2^2 + x0x3 - x1x3 - x2x3 + x3^2",
                                "2x0x2 - x1x2 + 2x2^2 - x0x3 + 2x1x3 - 2x2x3 + 2x3^2", "x1x2 - x0x3"});
    return s;
}

struct NamedPoint {
    std::string label;
    std::vector<QuadExt> coords;
};

// Base points of φ (p), of χ (q), and of the quadrics of χ^{-1} (r).
inline std::vector<NamedPoint> surface_base_points() {
    QuadExt xi = QuadExt::xi(), o(1), z(0);
    std::vector<NamedPoint> pts;
    for (int s : {1, -1}) {
        QuadExt sx = xi * QuadExt(s);
        std::string tag = s > 0 ? "+" : "-";
        pts.push_back({"p1" + tag, {sx, o, z}});
        pts.push_back({"p2" + tag, {o + sx, z, QuadExt(2)}});
        pts.push_back({"q1" + tag, {sx * QuadExt(-2), sx, o}});
        pts.push_back({"q2" + tag, {QuadExt(-1) + sx, QuadExt(2), z}});
        pts.push_back({"q3" + tag, {z, sx, o}});
        pts.push_back({"r1" + tag, {o + sx, QuadExt(2), z, z}});
        pts.push_back({"r2" + tag, {z, z, o + sx, QuadExt(2)}});
    }
    pts.push_back({"p3", {o, z, QuadExt(-1)}});
    pts.push_back({"r3", {o, QuadExt(-1), z, z}});
    pts.push_back({"r4", {QuadExt(2), o, QuadExt(-2), QuadExt(-1)}});
    pts.push_back({"r5", {o, o, QuadExt(-1), QuadExt(-1)}});
    return pts;
}

template <class K>
struct Char2SurfaceMaps {
    RationalMap<K> alpha, beta, cr, cr_inv, alpha_inv;
};

// Alternate parametrization of X^2 over F_{2^m}.
inline Char2SurfaceMaps<FqElem> build_surface_maps_char2(const FieldDescriptor& f) {
    if (f.p != 2) throw std::domain_error("build_surface_maps_char2: requires characteristic 2");
    auto P = [&](std::size_t nv, const std::string& prefix, std::initializer_list<const char*> comps) {
        auto R = ring_fq(nv, f);
        std::vector<MPoly<FqElem>> c;
        for (const char* s : comps) c.push_back(parse_poly(R, var_names(prefix, nv), s));
        return RationalMap<FqElem>(std::move(c));
    };
    Char2SurfaceMaps<FqElem> s;
    s.alpha = P(3, "u", {"u0^4 + u0^2u1^2 + u1^4 + u0u2^3 + u1u2^3", "u0^4 + u0^2u1^2 + u1^4 + u0u2^3",
                         "u0^3u2 + u0^2u1u2 + u0u1^2u2 + u2^4", "u0^3u2 + u1^3u2 + u2^4"});
    s.cr = P(3, "u", {"u0^2 + u0u1 + u1^2 + u2^2", "u0u2 + u2^2", "u1u2"});
    s.beta = P(3, "v", {"v0^3 + v1^3 + v0^2v2 + v2^3", "v0^3 + v1^3 + v0^2v2 + v1^2v2 + v1v2^2",
                        "v0^2v1 + v0v1^2 + v1^3 + v1^2v2 + v0v2^2 + v1v2^2", "v0^2v1 + v0v1^2 + v1^3 + v0^2v2 + v2^3"});
    s.cr_inv = P(3, "v", {"v0v1 + v1^2 + v2^2", "v0v2 + v2^2", "v1^2 + v1v2 + v2^2"});
    s.alpha_inv = P(4, "x", {"x0x1^2 + x1^3 + x2^3 + x2^2x3 + x2x3^2 + x3^3", "x0^2x1 + x1^3 + x2^2x3 + x3^3",
                             "x0^2x2 + x1^2x2 + x0^2x3 + x0x1x3"});
    return s;
}

struct PolyList {
    std::string label;
    std::vector<std::string> vars;
    std::vector<MPoly<Rational>> polys;
};

// Data of the degeneration of degree five del Pezzo surfaces to the Fermat cubic 4-fold.
// With t left symbolic, t is the last variable of every t-dependent list.
struct SecdegData {
    std::optional<Rational> t;
    std::vector<PolyList> lists;
    std::vector<std::size_t> pr;
    std::vector<std::vector<QuadExt>> five_points;
    IntPoint p_t;
    int deg_K_th_spec = 12;
    int deg_K0 = 14;
    int deg_Kt_general = 20;

    const PolyList& get(const std::string& label) const {
        for (const auto& l : lists)
            if (l.label == label) return l;
        throw std::out_of_range("SecdegData: no list " + label);
    }
    Ideal<Rational> ideal(const std::string& label) const {
        const auto& l = get(label);
        return Ideal<Rational>(l.vars.size(), l.polys);
    }
    std::uint64_t checksum() const {
        std::uint64_t h = detail::fnv1a("");
        for (const auto& l : lists) {
            h = detail::fnv1a(l.label + "\n", h);
            for (const auto& f : l.polys) h = detail::fnv1a(f.str(l.vars) + "\n", h);
        }
        return h;
    }
};

namespace detail {

struct SecdegText {
    const char* label;
    const char* prefix;
    std::size_t nvars;
    bool has_t;
    std::vector<const char*> polys;
};

inline const std::vector<SecdegText>& secdeg_text() {
    static const std::vector<SecdegText> data = {
        {"sigma", "u", 3, true,
         {"-u0^3u1 - u1^4 - 3u0^3u2 - 6u1^2u2^2 - 9u2^4", "u0^3u1 + u1^4 - 3u0^3u2 + 6u1^2u2^2 + 9u2^4",
          "-u0^4 - u0u1^3 + 3u0u1^2u2 - 3u0u1u2^2 + 9u0u2^3", "u0^4 + u0u1^3 + 3u0u1^2u2 + 3u0u1u2^2 + 9u0u2^3",
          "t(u0^4 - u1^4 - 6u1^2u2^2 - 9u2^4)", "t(u0^3u1 + u1^4 + 6u1^2u2^2 + 9u2^4)",
          "t(u0^2u1^2 - u1^4 + 3u0^2u2^2 - 6u1^2u2^2 - 9u2^4)", "t(u0u1^3 + u1^4 + 3u0u1u2^2 + 6u1^2u2^2 + 9u2^4)",
          "t u0^3u2", "t(u0u1^2u2 + 3u0u2^3)"}},
        {"F_t", "x", 6, true, {"t(x1x4^2 + x2x4x5 - x1x5^2 + x2x5^2) + x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3"}},
        {"qoppa_t", "x", 6, true,
         {"(1/3)t(-x0^2 + 2x0x1 + x0x2 - x0x3 - x1x2 - x2^2 - x2x3) + x0x4 - x1x5",
          "(1/3)t(-x0^2 + x0x2 + x1^2 - x1x3 - x2^2 + x3^2) + x0x5 + x1x4 - x1x5",
          "(1/3)t(x0^2 + x0x1 - x0x2 + x0x3 + x1x2 + x2^2 - 2x2x3) + x2x4 - x3x5",
          "(1/3)t(x0^2 - x0x2 - x1^2 + x1x3 + x2^2 - x3^2) + x2x5 + x3x4 - x3x5",
          "t(x1x4 - x1x5 + x2x5) + x4^2 - x4x5 + x5^2"}},
        {"S0_X2", "x", 6, false, {"x0^3 + x1^3 + x2^3 + x3^3", "x4", "x5"}},
        {"S0_H2pm", "x", 6, false,
         {"x0^2 - x0x1 + x1^2", "x2^2 - x2x3 + x3^2", "x4^2 - x4x5 + x5^2", "x0x2 - x0x3 + x1x3",
          "x1x4 + x0x5 - x1x5", "x3x4 + x2x5 - x3x5", "x1x2 - x0x3", "x0x4 - x1x5", "x2x4 - x3x5"}},
        {"phi_0", "u", 5, false,
         {"-u0^4 + 2u0^3u1 - 3u0^2u1^2 + 2u0u1^3 - u1^4 - u0u2^3 - u1u2^3 + 3u0u2^2u3 - 3u0u2u3^2 + 2u0u3^3"
          " - u1u3^3 + 2u0u4^3 - u1u4^3",
          "u0^4 - 2u0^3u1 + 3u0^2u1^2 - 2u0u1^3 + u1^4 + u0u2^3 - 2u1u2^3 + 3u1u2^2u3 - 3u1u2u3^2 + u0u3^3"
          " + u1u3^3 + u0u4^3 + u1u4^3",
          "-u0^3u2 + 3u0^2u1u2 - 3u0u1^2u2 + 2u1^3u2 - u2^4 - u0^3u3 - u1^3u3 + 2u2^3u3 - 3u2^2u3^2 + 2u2u3^3"
          " - u3^4 + 2u2u4^3 - u3u4^3",
          "u0^3u2 + u1^3u2 + u2^4 - 2u0^3u3 + 3u0^2u1u3 - 3u0u1^2u3 + u1^3u3 - 2u2^3u3 + 3u2^2u3^2 - 2u2u3^3"
          " + u3^4 + u2u4^3 + u3u4^3",
          "-2u0^3u4 + 3u0^2u1u4 - 3u0u1^2u4 + u1^3u4 - 2u2^3u4 + 3u2^2u3u4 - 3u2u3^2u4 + u3^3u4 + u4^4",
          "-u0^3u4 - u1^3u4 - u2^3u4 - u3^3u4 - u4^4"}},
        {"S0red", "u", 5, false,
         {"u0^3 + u1^3 + u2^3 + u3^3 + u4^3", "u0^2u1 - u0u1^2 + u1^3 + u2^2u3 - u2u3^2 + u3^3 + u4^3"}},
        {"Sing_S0red", "u", 5, false,
         {"u0^2 - u0u1 + u1^2", "u0u2 - u0u3 + u1u3", "u1u2 - u0u3", "u2^2 - u2u3 + u3^2", "u4"}},
        {"K0", "z", 9, false,
         {"z5z6 - z4z7 - z2z8", "z3z4 - z1z6 + z2z7", "z0z1 + z3^2 + z7z8", "z2z4 - z1z5 + z0z7",
          "z0z5 + z3z7 + z8^2", "z2z3 - z4z8", "z0z4 + z3z6", "z0z2 + z6z8",
          "z2^2z4z6 - z2^2z5z7 - z4z5^2z8 + z5^3z8 - z6z7^2z8 + z7^3z8 + z8^4",
          "z2^2z5z6 + z2^2z4z7 - z2^2z5z7 - z4z5^2z8 - z6z7^2z8", "z4^2 - z4z5 + z5^2 - z0z8",
          "z1z4 - z2z4 + z2z5 - z0z6", "z6^2 - z6z7 + z7^2 - z3z8", "z4z6 - z4z7 + z5z7 - z1z8",
          "z3z5 - z2z6 - z1z7 + z2z7", "z1^2 - z1z2 + z2^2 - z0z3", "z0^2 + z1z3 - z4z8 + z5z8"}},
        {"H0", "z", 9, false, {"z4", "z5", "z6", "z7", "z8"}},
        {"C_t", "z", 9, false,
         {"z0^2 + z0z3 + z3^2", "z1^2 - z1z2 + z2^2 - z0z3", "z4", "z5", "z6", "z7", "z8"}},
        {"W_t", "u", 5, false,
         {"u0^2 + u0u3 + u3^2", "u0u1 + u1u3 - u2u3 + u3^2", "u1^2 - u0u3 + u1u3 - u2u3", "u0u2 - u0u3 + u1u3",
          "u1u2 - u0u3", "u2^2 - u2u3 + u3^2", "u4"}},
        {"contracted_line", "u", 5, false, {"u0 + u2", "u1 + u3", "u4"}},
        {"E0", "z", 9, false,
         {"z0^2 + z0z3 + z3^2", "z4^2 - z4z5 + z5^2", "z6^2 - z6z7 + z7^2", "z1^2 - z1z2 + z2^2 - z0z3",
          "z0z4 + z1z6 - z2z6 - z1z7", "z1z4 - z1z5 + z2z5 - z3z7", "z3z5 - z2z6 - z1z7 + z2z7",
          "z2z4 - z1z5 + z0z7", "z3z4 - z1z6 + z2z7", "z0z5 + z1z6 - z2z7", "z0z5 + z1z6 - z2z7",
          "z0z6 - z0z7 - z3z7", "z4z6 - z4z7 + z5z7", "z3z6 + z0z7", "z5z6 - z4z7", "z8"}},
        {"A", "x", 6, false, {"x1x4^2 - x0x4x5 + 3x2x4x5 + x2x5^2 - 2x3x5^2"}},
        {"B", "x", 6, false, {"x0^2x5 - x0x2x5 + x1x2x5 + x2^2x5 + x0x3x5 - x2x3x5"}},
        {"G_t", "x", 6, true,
         {"x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3 + t(x1x4^2 - x0x4x5 + 3x2x4x5 + x2x5^2 - 2x3x5^2)"
          " + t^2(x0^2x5 - x0x2x5 + x1x2x5 + x2^2x5 + x0x3x5 - x2x3x5)"}},
        {"Z_t", "u", 5, true,
         {"t^2u1u2 + t(2u1u3 - 2u1u4 - u2u4) - 3u3u4 + 3u4^2",
          "t^2u2^2 - t u2u4 - 4u3^2 - 4t u1u4 + 10u3u4 - u4^2",
          "t(u2u3 + u1u4 - u2u4) + 2u3^2 - 5u3u4 + 2u4^2", "t^2u1^2 - t(u1u3 + u1u4) + u3^2 - u3u4 + u4^2",
          "t(u0 - u1 + u2) + 3u3 - 3u4"}},
    };
    return data;
}

}  // namespace detail

inline SecdegData build_secdeg_data(std::optional<Rational> t = std::nullopt) {
    SecdegData d;
    d.t = t;
    for (const auto& e : detail::secdeg_text()) {
        PolyList l{e.label, var_names(e.prefix, e.nvars), {}};
        auto names = l.vars;
        if (e.has_t) names.push_back("t");
        for (const char* s : e.polys) {
            auto f = parse_q(names, s);
            if (e.has_t && t) f = f.substitute({{e.nvars, ring_q(e.nvars + 1).cst(*t)}}).drop_variable(e.nvars);
            l.polys.push_back(std::move(f));
        }
        if (e.has_t && !t) l.vars = names;
        d.lists.push_back(std::move(l));
    }
    // S_t is cut out by the five quadrics together with F_t.
    PolyList s{"S_t", d.get("qoppa_t").vars, d.get("qoppa_t").polys};
    s.polys.push_back(d.get("F_t").polys[0]);
    d.lists.push_back(std::move(s));
    d.pr = {0, 2, 1, 3, 4, 6};
    QuadExt o(1), z(0);
    for (QuadExt a : {QuadExt::a_plus(), QuadExt::a_minus()}) {
        std::vector<QuadExt> p(9, z), q(9, z);
        p[1] = a;
        p[2] = o;
        q[0] = QuadExt(-1) + a;
        q[1] = a;
        q[3] = o;
        d.five_points.push_back(p);
        d.five_points.push_back(q);
    }
    std::vector<QuadExt> pt(9, z);
    pt[0] = o;
    pt[1] = QuadExt(-1);
    pt[3] = o;
    d.five_points.insert(d.five_points.begin(), pt);
    d.p_t = {1, -1, 0, 1, 0, 0, 0, 0, 0};
    return d;
}

}  // namespace fermat

#endif
