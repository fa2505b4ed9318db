#ifndef FERMAT_VERIFY_HPP
#define FERMAT_VERIFY_HPP

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fermat/counting.hpp"
#include "fermat/fermatlib.hpp"

namespace fermat {

inline constexpr unsigned kMaxN = 8;
inline constexpr unsigned kMaxSymbolicN = 6;

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    std::size_t samples = 200;
};

using Report = std::vector<CheckResult>;

inline bool all_pass(const Report& r) {
    for (const auto& c : r)
        if (!c.pass) return false;
    return !r.empty();
}

// Runs fn, recording its verdict, timing and any exception as a failure.
inline CheckResult run_check(const std::string& name, const std::function<bool(std::string&)>& fn) {
    CheckResult r{name, false, "", 0};
    auto t0 = std::chrono::steady_clock::now();
    try {
        r.pass = fn(r.detail);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace detail {

inline void require_verify_n(unsigned n, unsigned cap) {
    if (n < 1 || n > cap) throw std::invalid_argument("n = " + std::to_string(n) + " outside 1.." + std::to_string(cap));
}

template <class K>
RationalMap<K> identity_map(std::size_t dim, const K& one) {
    return RationalMap<K>::identity(dim, one);
}

}  // namespace detail

// Pushes random points through maps[0], maps[1], ... and checks the result is projectively the start point.
// Points hitting a base locus are skipped; at least `samples` points must survive.
template <class K>
bool chain_is_identity_sampled(const std::vector<RationalMap<K>>& maps, std::size_t samples, std::uint64_t seed,
                               std::string& detail) {
    std::mt19937_64 rng(seed);
    const K& one = maps.front().one();
    std::size_t done = 0, attempts = 0;
    while (done < samples) {
        if (++attempts > 50 * samples + 1000) {
            detail = "too many base-locus hits";
            return false;
        }
        std::vector<K> p;
        for (std::size_t i = 0; i <= maps.front().src_dim; ++i) p.push_back(random_scalar(one, rng));
        std::optional<std::vector<K>> x = p;
        for (const auto& m : maps) {
            if (x) x = map_eval(m, *x);
        }
        if (!x) continue;
        if (!points_equal_projectively(*x, p)) {
            detail = "mismatch at sample " + std::to_string(done);
            return false;
        }
        ++done;
    }
    detail = std::to_string(done) + " points";
    return true;
}

// F vanishes at φ(p) for random p.
template <class K>
bool lands_on_sampled(const MPoly<K>& F, const RationalMap<K>& m, std::size_t samples, std::uint64_t seed, std::string& detail) {
    std::mt19937_64 rng(seed);
    const K& one = m.one();
    std::size_t done = 0;
    for (std::size_t a = 0; done < samples && a < 50 * samples + 1000; ++a) {
        std::vector<K> p;
        for (std::size_t i = 0; i <= m.src_dim; ++i) p.push_back(random_scalar(one, rng));
        auto x = map_eval(m, p);
        if (!x) continue;
        if (!F.eval(*x).is_zero()) {
            detail = "nonzero at sample " + std::to_string(done);
            return false;
        }
        ++done;
    }
    detail = std::to_string(done) + " points";
    return done == samples;
}

template <class K>
bool lands_on_symbolic(const MPoly<K>& F, const RationalMap<K>& m, std::string& detail) {
    detail = "symbolic";
    return F.compose(m.comps).is_zero();
}

inline Report verify_identities(unsigned n, const VerifyOptions& opt = {}) {
    detail::require_verify_n(n, kMaxN);
    auto c = ctx_q(n);
    auto F = fermat_cubic(c);
    auto phi = build_phi(c), q = build_qoppa(c), h = build_h(c);
    Report r;
    r.push_back(run_check("F o phi == 0", [&](std::string& d) {
        return n <= 3 ? lands_on_symbolic(F, phi, d) : lands_on_sampled(F, phi, opt.samples, opt.seed, d);
    }));
    r.push_back(run_check("(h o qoppa) o phi ~ id", [&](std::string& d) {
        if (n <= 2) {
            d = "symbolic";
            auto hq = map_compose(h, map_compose(q, phi));
            return maps_equal_symbolic(hq, detail::identity_map(2 * n, Rational(1)));
        }
        return chain_is_identity_sampled<Rational>({phi, q, h}, opt.samples, opt.seed, d);
    }));
    r.push_back(run_check("phi o (h o qoppa) ~ id on X", [&](std::string& d) {
        std::mt19937_64 rng(opt.seed + 1);
        std::size_t done = 0;
        for (std::size_t a = 0; done < opt.samples / 4 + 1 && a < 10 * opt.samples + 100; ++a) {
            std::vector<Rational> u;
            for (std::size_t i = 0; i <= 2 * n; ++i) u.push_back(random_scalar(Rational(1), rng));
            auto x = map_eval(phi, u);
            if (!x) continue;
            auto y = map_eval(q, *x);
            if (!y) continue;
            auto back = map_eval(phi, *map_eval(h, *y));
            if (!back || !points_equal_projectively(*back, *x)) return false;
            ++done;
        }
        d = std::to_string(done) + " points of X";
        return done > 0;
    }));
    return r;
}

inline Report verify_linsys(unsigned n) {
    detail::require_verify_n(n, kMaxSymbolicN);
    Report r;
    r.push_back(run_check("dim quartic system == 2n+2", [&](std::string& d) {
        auto dim = quartic_system_dimension(n);
        d = "dimension " + std::to_string(dim);
        return dim == 2 * n + 2;
    }));
    return r;
}

inline Report verify_singular_locus(unsigned n) {
    detail::require_verify_n(n, kMaxSymbolicN);
    Report r;
    auto m = singular_locus_multiplicity(n);
    r.push_back(run_check("phi vanishes on Z+-", [&](std::string&) { return m.values_vanish; }));
    r.push_back(run_check("first partials vanish on Z+-", [&](std::string&) { return m.first_partials_vanish; }));
    r.push_back(run_check("some second partial nonzero on Z+ and Z-", [&](std::string&) { return m.some_second_partial_nonzero; }));
    return r;
}

inline Report verify_rel_cr(unsigned n, const VerifyOptions& opt = {}) {
    detail::require_verify_n(n, kMaxN);
    auto c = ctx_q(n);
    auto cr = build_cremona(c);
    auto id = detail::identity_map(2 * n, Rational(1));
    Report r;
    for (int k = 0; k < 2; ++k) {
        const auto& first = k == 0 ? cr.alpha : cr.beta;
        const auto& second = k == 0 ? cr.beta : cr.alpha;
        r.push_back(run_check(k == 0 ? "beta o alpha ~ id" : "alpha o beta ~ id", [&](std::string& d) {
            if (n <= 3) {
                d = "symbolic";
                return maps_equal_symbolic(map_compose(second, first), id);
            }
            return chain_is_identity_sampled<Rational>({first, second}, opt.samples, opt.seed, d);
        }));
    }
    std::optional<RationalMap<Rational>> grass;
    r.push_back(run_check("grassmann map: exact division, xi-free, degree", [&](std::string& d) {
        grass = build_grassmann_param(n);
        d = "degree " + std::to_string(grass->degree());
        return grass->degree() == (n == 1 ? 4 : 8);
    }));
    r.push_back(run_check("phi o alpha ~ grassmann map", [&](std::string& d) {
        if (!grass) return false;
        auto pa = map_compose(build_phi(c), cr.alpha);
        if (n <= 2) {
            d = "symbolic";
            return maps_equal_symbolic(pa, *grass);
        }
        d = std::to_string(opt.samples) + " points";
        return maps_equal_sampled(pa, *grass, opt.samples, opt.seed);
    }));
    return r;
}

inline Report verify_char2(unsigned n, const VerifyOptions& opt = {}) {
    detail::require_verify_n(n, kMaxN);
    const auto& f2 = fq_make(2);
    const auto& big = fq_make(2, 8);
    bool symbolic = n <= 3;
    auto c = ctx_fq(n, symbolic ? f2 : big);
    auto g = build_char2_g(c), q = build_qoppa(c);
    auto F = fermat_cubic(c);
    std::string over = symbolic ? " over F2" : " over GF(2^8), sampled";
    Report r;
    r.push_back(run_check("F o g == 0" + over, [&](std::string& d) {
        return symbolic ? lands_on_symbolic(F, g, d) : lands_on_sampled(F, g, opt.samples, opt.seed, d);
    }));
    r.push_back(run_check("qoppa o g ~ id" + over, [&](std::string& d) {
        if (symbolic) {
            d = "symbolic";
            return maps_equal_symbolic(map_compose(q, g), detail::identity_map(2 * n, c.one));
        }
        return chain_is_identity_sampled<FqElem>({g, q}, opt.samples, opt.seed, d);
    }));
    r.push_back(run_check("W and Y counts over F2", [&](std::string& d) {
        if (2 * n + 1 > 17) {
            d = "skipped above n = 8";
            return true;
        }
        auto y = count_projective_points(ideal_Y_char2(ctx_fq(n, f2)), f2);
        auto w = count_projective_points(ideal_W(ctx_fq(n, f2)), f2);
        d = "Y " + std::to_string(y) + ", W " + std::to_string(w);
        return n >= 2 ? y == projective_space_size(2 * n - 2, 2) && w == projective_space_size(2 * n - 3, 2) : true;
    }));
    return r;
}

// Surface corpus over Q and the characteristic-two maps on all F4-points.
inline Report verify_surfaces(const VerifyOptions& opt = {}) {
    auto s = build_surface_maps();
    auto F = fermat_cubic(ctx_q(1));
    auto id = detail::identity_map(2, Rational(1));
    Report r;
    r.push_back(run_check("F o phi == 0", [&](std::string& d) { return lands_on_symbolic(F, s.phi, d); }));
    r.push_back(run_check("F o chi == 0", [&](std::string& d) { return lands_on_symbolic(F, s.chi, d); }));
    r.push_back(run_check("F o gamma == 0", [&](std::string& d) { return lands_on_symbolic(F, s.gamma, d); }));
    r.push_back(run_check("chi ~ phi o cr^-1", [&](std::string&) { return maps_equal_symbolic(s.chi, map_compose(s.phi, s.cr_inv)); }));
    r.push_back(run_check("cr^-1 o cr ~ id", [&](std::string&) { return maps_equal_symbolic(map_compose(s.cr_inv, s.cr), id); }));
    r.push_back(run_check("phi^-1 o phi ~ id", [&](std::string&) { return maps_equal_symbolic(map_compose(s.phi_inv, s.phi), id); }));
    r.push_back(run_check("chi^-1 o chi ~ id", [&](std::string&) { return maps_equal_symbolic(map_compose(s.chi_inv, s.chi), id); }));
    r.push_back(run_check("base points", [&](std::string& d) {
        auto Fx = to_qxi(F);
        for (const auto& p : surface_base_points()) {
            const auto& m = p.label[0] == 'p' ? s.phi : p.label[0] == 'q' ? s.chi : s.chi_inv_displayed;
            for (const auto& g : m.comps)
                if (!to_qxi(g).eval(p.coords).is_zero()) {
                    d = p.label + " is not a base point";
                    return false;
                }
            if (p.label[0] == 'r' && !Fx.eval(p.coords).is_zero()) {
                d = p.label + " is not on X";
                return false;
            }
        }
        return true;
    }));

    const auto& f4 = fq_make(2, 2);
    auto c2 = build_surface_maps_char2(f4);
    auto F4 = fermat_cubic(ctx_fq(1, f4));
    auto id4 = detail::identity_map(2, FqElem(f4, 1));
    r.push_back(run_check("char 2: F o alpha == 0, F o beta == 0", [&](std::string& d) {
        std::string d2;
        return lands_on_symbolic(F4, c2.alpha, d) && lands_on_symbolic(F4, c2.beta, d2);
    }));
    r.push_back(run_check("char 2: beta ~ alpha o cr^-1, cr^-1 o cr ~ id", [&](std::string&) {
        return maps_equal_symbolic(c2.beta, map_compose(c2.alpha, c2.cr_inv)) && maps_equal_symbolic(map_compose(c2.cr_inv, c2.cr), id4);
    }));
    r.push_back(run_check("char 2: alpha^-1 inverts alpha on X(F4)", [&](std::string& d) {
        auto pts = enumerate_projective_points(Ideal<FqElem>(4, {F4}), f4);
        std::size_t inverted = 0;
        for (const auto& x : pts) {
            auto u = map_eval(c2.alpha_inv, x);
            if (!u) continue;
            auto y = map_eval(c2.alpha, *u);
            if (!y) continue;
            if (!points_equal_projectively(*y, x)) {
                d = "alpha(alpha^-1(x)) != x";
                return false;
            }
            ++inverted;
        }
        d = std::to_string(inverted) + " of " + std::to_string(pts.size()) + " points of X(F4) off the base loci";
        return inverted > 0 && pts.size() == 45;
    }));
    r.push_back(run_check("char 2: alpha and beta o cr agree on P2(F4)", [&](std::string& d) {
        auto pts = enumerate_projective_points(Ideal<FqElem>(3, {}), f4);
        std::size_t agreed = 0;
        for (const auto& u : pts) {
            auto a = map_eval(c2.alpha, u);
            if (!a) continue;
            if (!F4.eval(*a).is_zero()) return false;
            auto v = map_eval(c2.cr, u);
            if (!v) continue;
            auto b = map_eval(c2.beta, *v);
            if (!b) continue;
            if (!points_equal_projectively(*a, *b)) return false;
            ++agreed;
        }
        d = std::to_string(agreed) + " points";
        return agreed > 0;
    }));
    (void)opt;
    return r;
}

// Permutes coordinates: out[i] = p[perm[i]].
template <class T>
std::vector<T> permute(const std::vector<T>& p, const std::vector<std::size_t>& perm) {
    std::vector<T> out;
    for (std::size_t i : perm) out.push_back(p[i]);
    return out;
}

inline Report verify_secdeg(const VerifyOptions& opt = {}) {
    auto d = build_secdeg_data();
    auto d0 = build_secdeg_data(Rational(0));
    Report r;
    r.push_back(run_check("qoppa_{i,0} = pi o qoppa o s (n = 2)", [&](std::string& det) {
        auto q = build_qoppa(ctx_q(2)).comps;
        auto R = ring_q(6);
        std::vector<MPoly<Rational>> s = {R.var(1), R.var(0), R.var(3), R.var(2), R.var(4), R.var(5)};
        std::vector<std::size_t> pi = {1, 0, 3, 2, 4};
        const auto& q0 = d0.get("qoppa_t").polys;
        for (std::size_t i = 0; i < 5; ++i)
            if (q0[i] != q[pi[i]].compose(s)) {
                det = "component " + std::to_string(i);
                return false;
            }
        return true;
    }));
    r.push_back(run_check("F_0 is the Fermat cubic 4-fold", [&](std::string&) { return d0.get("F_t").polys[0] == fermat_cubic(ctx_q(2)); }));
    r.push_back(run_check("five points on K0 and H0", [&](std::string& det) {
        for (const auto& label : {"K0", "H0"})
            for (const auto& p : d.five_points)
                for (const auto& g : d.get(label).polys)
                    if (!to_qxi(g).eval(p).is_zero()) {
                        det = std::string("off ") + label;
                        return false;
                    }
        det = std::to_string(d.five_points.size()) + " points";
        return d.five_points.size() == 5 && d.get("K0").polys.size() == 17;
    }));
    std::vector<std::size_t> pi_u = {1, 0, 3, 2, 4};
    r.push_back(run_check("S'0,red vanishes on pi(Y(F2))", [&](std::string& det) {
        const auto& f2 = fq_make(2);
        auto pts = enumerate_projective_points(ideal_Y_char2(ctx_fq(2, f2)), f2);
        for (const auto& y : pts) {
            auto w = permute(y, pi_u);
            for (const auto& g : d.get("S0red").polys)
                if (!to_fq(g, f2).eval(w).is_zero()) return false;
        }
        det = std::to_string(pts.size()) + " points";
        return pts.size() == 7;
    }));
    r.push_back(run_check("S'0,red vanishes on pi(h^-1(Y(F5)))", [&](std::string& det) {
        const auto& f5 = fq_make(5);
        auto pts = enumerate_projective_points(ideal_Y(ctx_fq(2, f5)), f5);
        FqElem half = FqElem(f5, 2).inv();
        for (const auto& u : pts) {
            std::vector<FqElem> y(5, FqElem(f5, 0));
            y[4] = u[0] * half;
            y[1] = u[2];
            y[0] = (u[1] + y[1]) * half;
            y[3] = u[4];
            y[2] = (u[3] + y[3]) * half;
            auto w = permute(y, pi_u);
            for (const auto& g : d.get("S0red").polys)
                if (!to_fq(g, f5).eval(w).is_zero()) return false;
        }
        det = std::to_string(pts.size()) + " points";
        return pts.size() == 31;
    }));
    r.push_back(run_check("pr o sigma lands on S_t", [&](std::string&) {
        const auto& sigma = d.get("sigma").polys;
        std::vector<MPoly<Rational>> images;
        for (std::size_t i : d.pr) images.push_back(sigma[i]);
        images.push_back(ring_q(4).var(3));
        for (const auto& g : d.get("S_t").polys)
            if (!g.compose(images).is_zero()) return false;
        return true;
    }));
    r.push_back(run_check("S_0 = X2 u H2+- on P5(F4)", [&](std::string& det) {
        const auto& f = fq_make(2, 2);
        auto on = [&](const Ideal<Rational>& I, const std::vector<FqElem>& x) {
            for (const auto& g : I.gens)
                if (!to_fq(g, f).eval(x).is_zero()) return false;
            return true;
        };
        auto S0 = d0.ideal("S_t"), X2 = d0.ideal("S0_X2"), H2 = d0.ideal("S0_H2pm");
        auto all = enumerate_projective_points(Ideal<FqElem>(6, {}), f);
        std::size_t n = 0;
        for (const auto& x : all) {
            bool a = on(S0, x), b = on(X2, x) || on(H2, x);
            if (a != b) return false;
            n += a;
        }
        det = std::to_string(n) + " points";
        return true;
    }));
    r.push_back(run_check("data checksum", [&](std::string& det) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d.checksum()));
        det = buf;
        return d.checksum() == 0x4c617c6f770f466cULL;
    }));
    (void)opt;
    return r;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> s = {"identities", "linsys", "singular-locus", "rel-cr", "char2", "surfaces", "secdeg"};
    return s;
}

inline Report run_suite(const std::string& suite, unsigned n, const VerifyOptions& opt = {}) {
    if (suite == "identities") return verify_identities(n, opt);
    if (suite == "linsys") return verify_linsys(n);
    if (suite == "singular-locus") return verify_singular_locus(n);
    if (suite == "rel-cr") return verify_rel_cr(n, opt);
    if (suite == "char2") return verify_char2(n, opt);
    if (suite == "surfaces") return verify_surfaces(opt);
    if (suite == "secdeg") return verify_secdeg(opt);
    throw std::invalid_argument("unknown suite " + suite);
}

}  // namespace fermat

#endif
