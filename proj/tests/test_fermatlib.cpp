#include <gtest/gtest.h>

#include <random>

#include "fermat/counting.hpp"
#include "fermat/fermatlib.hpp"

using namespace fermat;

namespace {

template <class K>
bool proportional(const MPoly<K>& f, const MPoly<K>& g) {
    if (f.is_zero() || g.is_zero()) return f.is_zero() && g.is_zero();
    return f.scale(g.terms().front().c) == g.scale(f.terms().front().c);
}

template <class K>
bool composes_to_zero(const MPoly<K>& F, const RationalMap<K>& m) {
    return F.compose(m.comps).is_zero();
}

template <class K>
RationalMap<K> identity_like(const RationalMap<K>& m) {
    return RationalMap<K>::identity(m.src_dim, m.one());
}

bool all_vanish(const std::vector<MPoly<Rational>>& polys, const std::vector<QuadExt>& pt) {
    for (const auto& f : polys)
        if (!to_qxi(f).eval(pt).is_zero()) return false;
    return true;
}

std::vector<FqElem> to_points(const std::vector<QuadExt>& p, const FieldDescriptor& f) {
    std::vector<FqElem> r;
    for (const auto& x : p) r.push_back(specialize(f, x));
    return r;
}

}  // namespace

TEST(FermatCubic, Forms) {
    auto F = fermat_cubic(ctx_q(1));
    EXPECT_EQ(F.str(var_names("x", 4)), "x0^3 + x1^3 + x2^3 + x3^3");
    EXPECT_EQ(fermat_cubic(ctx_q(3)).nvars(), 8u);
    EXPECT_THROW(fermat_cubic(ctx_fq(1, fq_make(3))), std::domain_error);
    EXPECT_THROW(fermat_cubic(ctx_q(0)), std::invalid_argument);
    EXPECT_NO_THROW(fermat_cubic(ctx_fq(2, fq_make(2))));
}

TEST(AB, SurfaceCase) {
    auto [A, B] = build_AB(ctx_q(1));
    auto names = var_names("u", 3);
    EXPECT_EQ(A, parse_q(names, "u0^3 + u1^3 + 3u1^2u2 + 3u1u2^2 + 9u2^3"));
    EXPECT_EQ(A + B.scale(3), parse_q(names, "4u0^3 + 4u1^3 + 12u1u2^2"));
    EXPECT_TRUE(A.eval({Rational(1), Rational(0), Rational(0)}) == Rational(1));
    EXPECT_EQ(A - B, parse_q(names, "4(u1^2u2 + 3u2^3)"));
    EXPECT_THROW(build_AB(ctx_fq(1, fq_make(3))), std::domain_error);
    EXPECT_THROW(build_AB(ctx_fq(1, fq_make(2))), std::domain_error);
}

TEST(AB, DifferenceIsFourTimesBTilde) {
    for (unsigned n = 1; n <= 4; ++n) {
        auto c = ctx_q(n);
        auto [A, B] = build_AB(c);
        auto R = c.ring(c.src_vars());
        auto Bt = R.zero();
        for (unsigned i = 0; i < n; ++i) {
            auto a = R.var(2 * i + 1), b = R.var(2 * i + 2);
            Bt += a * a * b + b.pow(3).scale(3);
        }
        EXPECT_EQ(A - B, Bt.scale(4)) << n;
    }
}

TEST(Phi, LastComponentIsU0A) {
    for (unsigned n = 1; n <= 3; ++n) {
        auto c = ctx_q(n);
        auto phi = build_phi(c);
        auto A = build_AB(c).first;
        ASSERT_EQ(phi.comps.size(), 2 * n + 2);
        EXPECT_TRUE(proportional(phi.comps.back(), c.ring(c.src_vars()).var(0) * A));
        EXPECT_EQ(phi.degree(), 4);
    }
}

TEST(Phi, LandsOnFermat) {
    for (unsigned n = 1; n <= 3; ++n) {
        auto c = ctx_q(n);
        EXPECT_TRUE(composes_to_zero(fermat_cubic(c), build_phi(c))) << n;
    }
    auto c = ctx_fq(2, fq_make(7));
    EXPECT_TRUE(composes_to_zero(fermat_cubic(c), build_phi(c)));
}

TEST(Phi, InvertedByHQoppa) {
    for (unsigned n = 1; n <= 2; ++n) {
        auto c = ctx_q(n);
        auto hq = map_compose(build_h(c), map_compose(build_qoppa(c), build_phi(c)));
        EXPECT_TRUE(maps_equal_symbolic(hq, identity_like(hq))) << n;
    }
    auto c = ctx_q(3);
    auto hq = map_compose(build_h(c), map_compose(build_qoppa(c), build_phi(c)));
    EXPECT_TRUE(maps_equal_sampled(hq, identity_like(hq), 60, 1));
}

TEST(Phi, ComposedWithInverseOnX) {
    // φ̄ ∘ h ∘ ϙ is the identity on X: check on images of random points.
    auto c = ctx_q(2);
    auto phi = build_phi(c), h = build_h(c), q = build_qoppa(c);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> d(-9, 9);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        std::vector<Rational> u;
        for (int k = 0; k < 5; ++k) u.emplace_back(d(rng));
        auto x = map_eval(phi, u);
        if (!x) continue;
        auto y = map_eval(q, *x);
        if (!y) continue;
        auto back = map_eval(phi, *map_eval(h, *y));
        ASSERT_TRUE(back);
        EXPECT_TRUE(points_equal_projectively(*back, *x));
        ++checked;
    }
    EXPECT_GE(checked, 50);
}

TEST(Qoppa, VanishesOnHpm) {
    const auto& f = fq_make(5, 2);
    auto c = ctx_fq(1, f);
    auto pts = enumerate_projective_points(ideal_H_pm(c), f);
    EXPECT_EQ(pts.size(), 2 * projective_space_size(1, f.q));
    auto q = build_qoppa(c);
    auto F = fermat_cubic(c);
    for (const auto& x : pts) {
        EXPECT_TRUE(F.eval(x).is_zero());
        for (const auto& g : q.comps) EXPECT_TRUE(g.eval(x).is_zero());
    }
}

TEST(Qoppa, HRequiresOddCharacteristic) {
    EXPECT_THROW(build_h(ctx_fq(1, fq_make(2))), std::domain_error);
    EXPECT_THROW(build_qoppa(ctx_fq(1, fq_make(3))), std::domain_error);
}

TEST(Char2, GIsInverseOfQoppa) {
    const auto& f = fq_make(2);
    for (unsigned n = 1; n <= 3; ++n) {
        auto c = ctx_fq(n, f);
        auto g = build_char2_g(c);
        EXPECT_TRUE(composes_to_zero(fermat_cubic(c), g)) << n;
        auto qg = map_compose(build_qoppa(c), g);
        EXPECT_TRUE(maps_equal_symbolic(qg, identity_like(qg))) << n;
    }
    EXPECT_THROW(build_char2_g(ctx_fq(1, fq_make(5))), std::domain_error);
    EXPECT_THROW(build_char2_PQ(ctx_q(1)), std::domain_error);
}

TEST(Char2, LastComponents) {
    auto c = ctx_fq(2, fq_make(2));
    auto [P, Q] = build_char2_PQ(c);
    auto g = build_char2_g(c);
    auto u4 = c.ring(5).var(4);
    EXPECT_EQ(g.comps[4], u4 * (P + Q));
    EXPECT_EQ(g.comps[5], u4 * P);
}

TEST(Ideals, ZForN2) {
    auto Z = ideal_Z(ctx_q(2));
    auto names = var_names("u", 5);
    std::vector<std::string> want = {"u0", "u1^2 + 3u2^2", "u3^2 + 3u4^2", "u1u3 + 3u2u4", "-u1u4 + u2u3"};
    ASSERT_EQ(Z.gens.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_TRUE(proportional(Z.gens[i], parse_q(names, want[i]))) << i;
}

TEST(Ideals, ZpmPlanesLieInZAndY) {
    for (unsigned n = 1; n <= 3; ++n) {
        auto c = ctx_qxi(n);
        auto Z = ideal_Z(c);
        auto Y = ideal_Y(c);
        for (int s : {1, -1}) {
            auto sub = z_pm_substitution(n, s);
            for (const auto& g : Z.gens) EXPECT_TRUE(g.substitute(sub).is_zero());
            for (const auto& g : Y.gens) EXPECT_TRUE(g.substitute(sub).is_zero());
        }
    }
}

TEST(Ideals, BuildIdealsByCharacteristic) {
    auto q = build_ideals(ctx_q(2));
    EXPECT_TRUE(q.Y && q.Z && q.H_pm && q.D_divisor);
    EXPECT_FALSE(q.Y_char2);
    auto two = build_ideals(ctx_fq(2, fq_make(2)));
    EXPECT_TRUE(two.Y_char2 && two.Z_char2);
    EXPECT_FALSE(two.Y);
    auto three = build_ideals(ctx_fq(2, fq_make(3)));
    EXPECT_FALSE(three.Y || three.H_pm);
}

TEST(Ideals, YIsBaseLocusOfPhi) {
    const auto& f = fq_make(5);
    auto c = ctx_fq(2, f);
    auto phi = build_phi(c);
    for (const auto& u : enumerate_projective_points(ideal_Y(c), f))
        for (const auto& g : phi.comps) EXPECT_TRUE(g.eval(u).is_zero());
}

TEST(Ideals, DDivisorContractsOntoHpm) {
    for (unsigned n = 1; n <= 2; ++n) {
        const auto& f = fq_make(5, 2);
        auto c = ctx_fq(n, f);
        auto phi = build_phi(c);
        auto H = ideal_H_pm(c);
        auto Y = ideal_Y(c);
        Ideal<FqElem> D(c.src_vars(), {D_divisor(c)});
        std::size_t mapped = 0;
        for (const auto& u : enumerate_projective_points(D, f)) {
            bool onY = true;
            for (const auto& g : Y.gens) onY = onY && g.eval(u).is_zero();
            if (onY) continue;
            auto x = map_eval(phi, u);
            if (!x) continue;
            for (const auto& g : H.gens) EXPECT_TRUE(g.eval(*x).is_zero());
            ++mapped;
        }
        EXPECT_GT(mapped, n == 1 ? 40u : 10000u) << n;
    }
}

TEST(Irr, ProjectionOfYLiesOnHypersurface) {
    for (auto [n, p] : {std::pair{2u, 5ULL}, {3u, 5ULL}, {2u, 11ULL}}) {
        const auto& f = fq_make(p);
        auto c = ctx_fq(n, f);
        auto P = irr_hypersurface(c);
        auto pts = enumerate_projective_points(ideal_Y(c), f);
        EXPECT_EQ(pts.size(), projective_space_size(2 * n - 2, p));
        for (auto u : pts) {
            u.pop_back();
            bool zero = true;
            for (const auto& x : u) zero = zero && x.is_zero();
            if (!zero) {
                EXPECT_TRUE(P.eval(u).is_zero()) << "n=" << n << " p=" << p;
            }
        }
    }
    EXPECT_THROW(irr_hypersurface(ctx_q(1)), std::invalid_argument);
}

TEST(Cremona, BetaComponents) {
    auto cr = build_cremona(ctx_q(2));
    auto names = var_names("u", 5);
    EXPECT_EQ(cr.beta.comps[2], parse_q(names, "u1^2 + 3u2^2"));
    EXPECT_EQ(cr.alpha.degree(), 3);
    EXPECT_EQ(cr.beta.degree(), 2);
}

TEST(Cremona, MutuallyInverse) {
    for (unsigned n = 1; n <= 3; ++n) {
        auto cr = build_cremona(ctx_q(n));
        auto ba = map_compose(cr.beta, cr.alpha), ab = map_compose(cr.alpha, cr.beta);
        EXPECT_TRUE(maps_equal_symbolic(ba, identity_like(ba))) << n;
        EXPECT_TRUE(maps_equal_symbolic(ab, identity_like(ab))) << n;
    }
}

TEST(DNM, DisplayedD2) {
    auto d = build_DNM(1);
    EXPECT_EQ(d.D, parse_q(var_names("t", 3), "2t1^4 - 4t1t2^3 + 4t1^3 - 2t2^3 + 6t1^2 + 4t1 + 2"));
    EXPECT_EQ(d.D, d.M.scale(2));
    EXPECT_THROW(build_DNM(0), std::invalid_argument);
}

TEST(DNM, PrimedIncrementsAreStable) {
    // D_{2n+2} - D_{2n} only involves t1, t2 and the two new variables.
    auto d3 = build_DNM(3), d4 = build_DNM(4);
    auto diff = d4.D - d3.D.extend(9);
    for (const auto& t : diff.terms())
        for (std::size_t v : {3u, 4u, 5u, 6u}) EXPECT_EQ(t.m[v], 0u);
}

TEST(Grassmann, DegreesAndImage) {
    auto g1 = build_grassmann_param(1), g2 = build_grassmann_param(2);
    EXPECT_EQ(g1.degree(), 4);
    EXPECT_EQ(g2.degree(), 8);
    EXPECT_TRUE(composes_to_zero(fermat_cubic(ctx_q(1)), g1));
    EXPECT_TRUE(composes_to_zero(fermat_cubic(ctx_q(2)), g2));
}

TEST(Grassmann, FactorsThroughCremona) {
    auto c = ctx_q(2);
    auto pa = map_compose(build_phi(c), build_cremona(c).alpha);
    EXPECT_TRUE(maps_equal_sampled(pa, build_grassmann_param(2), 40, 2));
}

TEST(SingularLocus, QuarticSystemDimension) {
    for (unsigned n = 1; n <= 3; ++n) EXPECT_EQ(quartic_system_dimension(n), 2 * n + 2);
}

TEST(SingularLocus, MultiplicityTwo) {
    for (unsigned n = 1; n <= 3; ++n) EXPECT_TRUE(singular_locus_multiplicity(n).ok()) << n;
}

TEST(Surface, MapsLandOnCubic) {
    auto s = build_surface_maps();
    auto F = fermat_cubic(ctx_q(1));
    EXPECT_TRUE(composes_to_zero(F, s.phi));
    EXPECT_TRUE(composes_to_zero(F, s.chi));
    EXPECT_TRUE(composes_to_zero(F, s.gamma));
}

TEST(Surface, Inverses) {
    auto s = build_surface_maps();
    auto id = RationalMap<Rational>::identity(2, Rational(1));
    EXPECT_TRUE(maps_equal_symbolic(map_compose(s.phi_inv, s.phi), id));
    EXPECT_TRUE(maps_equal_symbolic(map_compose(s.chi_inv, s.chi), id));
    EXPECT_TRUE(maps_equal_symbolic(s.chi, map_compose(s.phi, s.cr_inv)));
    auto R = ring_q(3);
    RationalMap<Rational> swapped({R.var(0).scale(2), R.var(2), R.var(1).scale(2)});
    EXPECT_TRUE(maps_equal_symbolic(map_compose(s.phi_inv_displayed, s.phi), swapped));
}

TEST(Surface, BasePoints) {
    auto s = build_surface_maps();
    auto F = to_qxi(fermat_cubic(ctx_q(1)));
    for (const auto& p : surface_base_points()) {
        char kind = p.label[0];
        if (kind == 'p') {
            EXPECT_TRUE(all_vanish(s.phi.comps, p.coords)) << p.label;
        }
        if (kind == 'q') {
            EXPECT_TRUE(all_vanish(s.chi.comps, p.coords)) << p.label;
        }
        if (kind == 'r') {
            EXPECT_TRUE(F.eval(p.coords).is_zero()) << p.label;
            EXPECT_TRUE(all_vanish(s.chi_inv_displayed.comps, p.coords)) << p.label;
        }
    }
    EXPECT_EQ(surface_base_points().size(), 18u);
}

TEST(Surface, Char2Maps) {
    const auto& f = fq_make(2);
    auto s = build_surface_maps_char2(f);
    auto F = fermat_cubic(ctx_fq(1, f));
    auto id = RationalMap<FqElem>::identity(2, FqElem(f, 1));
    EXPECT_TRUE(composes_to_zero(F, s.alpha));
    EXPECT_TRUE(composes_to_zero(F, s.beta));
    EXPECT_TRUE(maps_equal_symbolic(map_compose(s.cr_inv, s.cr), id));
    EXPECT_TRUE(maps_equal_symbolic(map_compose(s.cr, s.cr_inv), id));
    EXPECT_TRUE(maps_equal_symbolic(s.beta, map_compose(s.alpha, s.cr_inv)));
    EXPECT_TRUE(maps_equal_symbolic(map_compose(s.alpha_inv, s.alpha), id));
    EXPECT_THROW(build_surface_maps_char2(fq_make(5)), std::domain_error);
}

TEST(Secdeg, QoppaAtZero) {
    auto d = build_secdeg_data(Rational(0));
    auto names = var_names("x", 6);
    const auto& q = d.get("qoppa_t").polys;
    ASSERT_EQ(q.size(), 5u);
    EXPECT_EQ(q[4], parse_q(names, "x4^2 - x4x5 + x5^2"));
    EXPECT_EQ(q[0], parse_q(names, "x0x4 - x1x5"));
    EXPECT_EQ(d.get("F_t").polys[0], fermat_cubic(ctx_q(2)));
}

TEST(Secdeg, SymbolicListsAndChecksum) {
    auto d = build_secdeg_data();
    EXPECT_EQ(d.get("K0").polys.size(), 17u);
    EXPECT_EQ(d.get("E0").polys.size(), 16u);
    EXPECT_EQ(d.get("E0").polys[9], d.get("E0").polys[10]);
    EXPECT_EQ(d.get("sigma").vars.back(), "t");
    EXPECT_EQ(d.get("S_t").polys.size(), 6u);
    EXPECT_EQ(d.checksum(), 0x4c617c6f770f466cULL);
    EXPECT_THROW(d.get("nosuch"), std::out_of_range);
    EXPECT_NE(build_secdeg_data(Rational(1)).checksum(), d.checksum());
}

TEST(Secdeg, FivePointsOnK0AndH0) {
    auto d = build_secdeg_data();
    ASSERT_EQ(d.five_points.size(), 5u);
    EXPECT_EQ(reduce_point(to_rational(d.p_t)), d.p_t);
    for (const auto& p : d.five_points) {
        EXPECT_TRUE(all_vanish(d.get("K0").polys, p));
        EXPECT_TRUE(all_vanish(d.get("H0").polys, p));
    }
}

TEST(Secdeg, SigmaLandsOnSt) {
    // pr∘σ satisfies the equations of S_t identically in t.
    auto d = build_secdeg_data();
    const auto& sigma = d.get("sigma").polys;
    auto R = ring_q(4);
    std::vector<MPoly<Rational>> images;
    for (std::size_t i : d.pr) images.push_back(sigma[i]);
    images.push_back(R.var(3));
    for (const auto& g : d.get("S_t").polys) EXPECT_TRUE(g.compose(images).is_zero()) << g.str(d.get("S_t").vars);
}

TEST(Secdeg, CentralFibreIsCubicSurfaceAndPlanes) {
    const auto& f = fq_make(2, 2);
    auto d = build_secdeg_data(Rational(0));
    auto on = [&](const Ideal<Rational>& I, const std::vector<FqElem>& x) {
        for (const auto& g : I.gens)
            if (!to_fq(g, f).eval(x).is_zero()) return false;
        return true;
    };
    auto S0 = d.ideal("S_t"), X2 = d.ideal("S0_X2"), H2 = d.ideal("S0_H2pm");
    auto pts = enumerate_projective_points(S0, f);
    for (const auto& x : pts) EXPECT_TRUE(on(X2, x) || on(H2, x));
    std::size_t both = 0;
    for (const auto& x : enumerate_projective_points(X2, f)) {
        EXPECT_TRUE(on(S0, x));
        both += on(H2, x);
    }
    EXPECT_EQ(pts.size(), count_projective_points(X2, f) + count_projective_points(H2, f) - both);
}

TEST(Secdeg, FivePointsOverFiniteField) {
    const auto& f = fq_make(7);
    auto d = build_secdeg_data();
    auto K0 = d.ideal("K0");
    for (const auto& p : d.five_points) {
        auto x = to_points(p, f);
        for (const auto& g : K0.gens) EXPECT_TRUE(to_fq(g, f).eval(x).is_zero());
    }
}
