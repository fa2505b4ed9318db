#ifndef FERMAT_PROJGEO_HPP
#define FERMAT_PROJGEO_HPP

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermat/multipoly.hpp"

namespace fermat {

using IntPoint = std::vector<mpz_class>;

// Coprime integers, first nonzero entry positive.
inline IntPoint reduce_point(const std::vector<Rational>& p) {
    mpz_class l = 1, g = 0;
    for (const auto& x : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.den().get_mpz_t());
    IntPoint r;
    r.reserve(p.size());
    for (const auto& x : p) {
        r.push_back(x.num() * (l / x.den()));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.back().get_mpz_t());
    }
    if (g == 0) throw std::invalid_argument("reduce_point: zero vector");
    int s = 0;
    for (const auto& x : r)
        if ((s = sgn(x)) != 0) break;
    if (s < 0) g = -g;
    for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return r;
}

inline IntPoint reduce_point(const IntPoint& p) {
    std::vector<Rational> q;
    q.reserve(p.size());
    for (const auto& x : p) q.emplace_back(x);
    return reduce_point(q);
}

inline mpz_class height(const IntPoint& reduced) {
    mpz_class h = 0;
    for (const auto& x : reduced)
        if (abs(x) > h) h = abs(x);
    return h;
}

inline mpz_class height(const std::vector<Rational>& p) { return height(reduce_point(p)); }

inline std::vector<Rational> to_rational(const IntPoint& p) {
    std::vector<Rational> r;
    r.reserve(p.size());
    for (const auto& x : p) r.emplace_back(x);
    return r;
}

// Field representative with first nonzero entry 1.
template <class K>
std::vector<K> normalize_point(std::vector<K> p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) continue;
        K inv = p[i].inv();
        for (std::size_t j = i; j < p.size(); ++j) p[j] = p[j] * inv;
        return p;
    }
    throw std::invalid_argument("normalize_point: zero vector");
}

template <class K>
bool points_equal_projectively(const std::vector<K>& a, const std::vector<K>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[i] * b[j] != a[j] * b[i]) return false;
    return true;
}

template <class K>
struct Ideal {
    std::size_t nvars = 0;
    std::vector<MPoly<K>> gens;

    Ideal() = default;
    Ideal(std::size_t n, std::vector<MPoly<K>> g) : nvars(n), gens(std::move(g)) {
        for (const auto& f : gens) {
            if (f.nvars() != nvars) throw std::invalid_argument("Ideal: generator arity mismatch");
            if (!f.is_homogeneous()) throw std::invalid_argument("Ideal: generator not homogeneous");
        }
    }
    template <class T>
    bool vanishes_at(const std::vector<T>& pt) const {
        for (const auto& f : gens)
            if (!f.template eval<T>(pt).is_zero()) return false;
        return true;
    }
    Ideal dedup() const {
        Ideal r;
        r.nvars = nvars;
        for (const auto& f : gens)
            if (std::find(r.gens.begin(), r.gens.end(), f) == r.gens.end()) r.gens.push_back(f);
        return r;
    }
    Ideal operator+(const Ideal& o) const {
        if (o.nvars != nvars) throw std::invalid_argument("Ideal: arity mismatch");
        Ideal r = *this;
        r.gens.insert(r.gens.end(), o.gens.begin(), o.gens.end());
        return r;
    }
};

// P^src ⇢ P^tgt by tgt+1 forms of a common degree in src+1 variables.
template <class K>
struct RationalMap {
    std::size_t src_dim = 0;
    std::size_t tgt_dim = 0;
    std::vector<MPoly<K>> comps;

    RationalMap() = default;
    explicit RationalMap(std::vector<MPoly<K>> c) : comps(std::move(c)) {
        if (comps.empty()) throw std::invalid_argument("RationalMap: no components");
        src_dim = comps[0].nvars() - 1;
        tgt_dim = comps.size() - 1;
        int d = -1;
        for (const auto& f : comps) {
            if (f.nvars() != src_dim + 1) throw std::invalid_argument("RationalMap: component arity mismatch");
            if (!f.is_homogeneous()) throw std::invalid_argument("RationalMap: component not homogeneous");
            if (f.is_zero()) continue;
            if (d >= 0 && f.degree() != d) throw std::invalid_argument("RationalMap: components of different degree");
            d = f.degree();
        }
        if (d < 0) throw std::invalid_argument("RationalMap: all components vanish");
    }
    static RationalMap identity(std::size_t dim, const K& one) { return RationalMap(PolyRing<K>{dim + 1, one}.vars()); }

    int degree() const {
        for (const auto& f : comps)
            if (!f.is_zero()) return f.degree();
        return -1;
    }
    const K& one() const { return comps[0].one(); }
};

// nullopt marks a point of the base locus.
template <class K, class T = K>
std::optional<std::vector<T>> map_eval(const RationalMap<K>& m, const std::vector<T>& pt) {
    std::vector<T> out;
    out.reserve(m.comps.size());
    bool any = false;
    for (const auto& f : m.comps) {
        out.push_back(f.template eval<T>(pt));
        any = any || !out.back().is_zero();
    }
    if (!any) return std::nullopt;
    return out;
}

inline std::optional<IntPoint> map_eval_reduced(const RationalMap<Rational>& m, const IntPoint& pt) {
    auto v = map_eval(m, to_rational(pt));
    if (!v) return std::nullopt;
    return reduce_point(*v);
}

// Common scaling: integer coefficients, joint content 1, first nonzero component with positive leading term.
inline RationalMap<Rational> normalize_map(const RationalMap<Rational>& m) {
    mpz_class l = 1, g = 0;
    for (const auto& f : m.comps)
        for (const auto& t : f.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.den().get_mpz_t());
    for (const auto& f : m.comps)
        for (const auto& t : f.terms()) {
            mpz_class v = t.c.num() * (l / t.c.den());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        }
    Rational s(l, g);
    for (const auto& f : m.comps)
        if (!f.is_zero()) {
            if (f.leading().c.sign() < 0) s = -s;
            break;
        }
    RationalMap<Rational> r = m;
    for (auto& f : r.comps) f = f.scale(s);
    return r;
}

template <class K>
RationalMap<K> normalize_map(const RationalMap<K>& m) {
    if constexpr (std::is_same_v<K, Rational>) {
        return normalize_map(m);
    } else {
        for (const auto& f : m.comps)
            if (!f.is_zero()) {
                K inv = f.leading().c.inv();
                RationalMap<K> r = m;
                for (auto& g : r.comps) g = g.scale(inv);
                return r;
            }
        return m;
    }
}

// outer ∘ inner, with an optional common factor removed from every component.
template <class K>
RationalMap<K> map_compose(const RationalMap<K>& outer, const RationalMap<K>& inner,
                           const std::optional<MPoly<K>>& factor = std::nullopt) {
    if (outer.src_dim != inner.tgt_dim) throw std::invalid_argument("map_compose: dimensions do not chain");
    std::vector<MPoly<K>> comps;
    comps.reserve(outer.comps.size());
    bool any = false;
    for (const auto& f : outer.comps) {
        MPoly<K> g = f.compose(inner.comps);
        if (factor && !g.is_zero()) {
            auto q = trial_divide(g, *factor);
            if (!q) throw std::runtime_error("map_compose: factor does not divide a component");
            g = std::move(*q);
        }
        any = any || !g.is_zero();
        comps.push_back(std::move(g));
    }
    if (!any) throw std::runtime_error("map_compose: composition is identically zero");
    return normalize_map(RationalMap<K>(std::move(comps)));
}

template <class K>
K random_scalar(const K& one, std::mt19937_64& rng) {
    if constexpr (std::is_same_v<K, FqElem>) {
        std::uniform_int_distribution<std::uint64_t> d(0, one.field().q - 1);
        return FqElem(one.field(), d(rng));
    } else {
        std::uniform_int_distribution<long> d(-10, 10);
        return one.from_int(d(rng));
    }
}

// Phi_k Psi_j = Phi_j Psi_k for a pivot k with Phi_k != 0 (equivalent to all 2x2 minors over a domain).
template <class K>
bool maps_equal_symbolic(const RationalMap<K>& a, const RationalMap<K>& b) {
    if (a.src_dim != b.src_dim || a.tgt_dim != b.tgt_dim) return false;
    std::size_t k = 0;
    while (k < a.comps.size() && a.comps[k].is_zero()) ++k;
    if (k == a.comps.size() || b.comps[k].is_zero()) return false;
    for (std::size_t j = 0; j < a.comps.size(); ++j) {
        if (j == k) continue;
        if (a.comps[k] * b.comps[j] != a.comps[j] * b.comps[k]) return false;
    }
    return true;
}

// Sampled comparison at points where both maps are defined; throws if too few such points turn up.
template <class K>
bool maps_equal_sampled(const RationalMap<K>& a, const RationalMap<K>& b, std::size_t npoints, std::uint64_t seed) {
    if (a.src_dim != b.src_dim || a.tgt_dim != b.tgt_dim) return false;
    std::mt19937_64 rng(seed);
    const K& one = a.one();
    std::size_t good = 0;
    for (std::size_t attempt = 0; good < npoints; ++attempt) {
        if (attempt > 50 * npoints + 1000) throw std::runtime_error("maps_equal_sampled: too many base-locus hits");
        std::vector<K> pt;
        for (std::size_t i = 0; i <= a.src_dim; ++i) pt.push_back(random_scalar(one, rng));
        auto va = map_eval(a, pt), vb = map_eval(b, pt);
        if (!va || !vb) continue;
        ++good;
        if (!points_equal_projectively(*va, *vb)) return false;
    }
    return true;
}

struct EqualityPolicy {
    int max_symbolic_degree = 20;
    std::size_t max_symbolic_vars = 7;
    std::size_t samples = 200;
    std::uint64_t seed = 0;
};

template <class K>
bool maps_equal_projectively(const RationalMap<K>& a, const RationalMap<K>& b, const EqualityPolicy& pol = {}) {
    if (a.src_dim != b.src_dim || a.tgt_dim != b.tgt_dim) return false;
    if (a.degree() + b.degree() <= pol.max_symbolic_degree && a.src_dim + 1 <= pol.max_symbolic_vars)
        return maps_equal_symbolic(a, b);
    return maps_equal_sampled(a, b, pol.samples, pol.seed);
}

// Coefficients [d, c, b, a] of F(p + l(q - p)) = a l^3 + b l^2 + c l + d.
template <class K>
std::vector<K> line_restriction(const MPoly<K>& F, const std::vector<K>& p, const std::vector<K>& q) {
    if (p.size() != F.nvars() || q.size() != F.nvars()) throw std::invalid_argument("line_restriction: length mismatch");
    PolyRing<K> L{1, F.one()};
    std::vector<MPoly<K>> line;
    for (std::size_t i = 0; i < p.size(); ++i) line.push_back(L.cst(p[i]) + L.var(0).scale(q[i] - p[i]));
    MPoly<K> r = F.compose(line);
    std::vector<K> c(static_cast<std::size_t>(std::max(F.degree(), 0)) + 1, F.zero_scalar());
    for (const auto& t : r.terms()) c[t.m[0]] = t.c;
    return c;
}

template <class K>
K third_intersection_parameter(const MPoly<K>& F, const std::vector<K>& p, const std::vector<K>& q) {
    if (F.degree() != 3 || !F.is_homogeneous()) throw std::invalid_argument("third_intersection: F must be a cubic form");
    auto c = line_restriction(F, p, q);
    if (!c[0].is_zero() || !(c[0] + c[1] + c[2] + c[3]).is_zero())
        throw std::invalid_argument("third_intersection: points not on the cubic");
    if (c[1].is_zero() && c[2].is_zero() && c[3].is_zero()) throw std::domain_error("line contained in cubic");
    if (c[3].is_zero()) throw std::domain_error("line is tangent/degenerate");
    return c[1] / c[3];
}

template <class K>
std::vector<K> third_intersection(const MPoly<K>& F, const std::vector<K>& p, const std::vector<K>& q) {
    K l = third_intersection_parameter(F, p, q);
    std::vector<K> r;
    for (std::size_t i = 0; i < p.size(); ++i) r.push_back(p[i] + l * (q[i] - p[i]));
    return r;
}

template <class K>
bool vanishes_on_linear_space(const MPoly<K>& f, const std::map<std::size_t, MPoly<K>>& space) {
    return f.substitute(space).is_zero();
}

}  // namespace fermat

#endif
