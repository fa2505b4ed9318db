#include <gtest/gtest.h>

#include <random>

#include "fermat/fermatlib.hpp"
#include "fermat/serialize.hpp"

using namespace fermat;

namespace {

MPoly<Rational> cubic_surface() { return parse_q(var_names("x", 4), "x0^3 + x1^3 + x2^3 + x3^3"); }

std::vector<Rational> rv(std::initializer_list<long> xs) {
    std::vector<Rational> r;
    for (long x : xs) r.emplace_back(x);
    return r;
}

}  // namespace

TEST(ReducePoint, CoprimeWithPositiveLead) {
    EXPECT_EQ(reduce_point({Rational(-2), Rational(4), Rational(6)}), (IntPoint{1, -2, -3}));
    EXPECT_EQ(reduce_point({Rational(1, 2), Rational(1, 3)}), (IntPoint{3, 2}));
    EXPECT_EQ(reduce_point({Rational(0), Rational(-5)}), (IntPoint{0, 1}));
    EXPECT_THROW(reduce_point(rv({0, 0})), std::invalid_argument);
}

TEST(ReducePoint, HeightIsScaleInvariant) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long> d(-50, 50), s(1, 9);
    for (int i = 0; i < 200; ++i) {
        std::vector<Rational> p = rv({d(rng), d(rng), d(rng)});
        bool zero = true;
        for (const auto& x : p) zero = zero && x.is_zero();
        if (zero) continue;
        Rational k(s(rng) * (i % 2 ? -1 : 1), s(rng));
        std::vector<Rational> q;
        for (const auto& x : p) q.push_back(x * k);
        EXPECT_EQ(reduce_point(p), reduce_point(q));
        EXPECT_EQ(height(p), height(q));
    }
}

TEST(Points, ProjectiveEquality) {
    EXPECT_TRUE(points_equal_projectively(rv({1, 2, 3}), rv({-2, -4, -6})));
    EXPECT_FALSE(points_equal_projectively(rv({1, 2, 3}), rv({1, 2, 4})));
    EXPECT_EQ(normalize_point(rv({0, 3, 6})), (std::vector<Rational>{Rational(0), Rational(1), Rational(2)}));
}

TEST(IdealType, RejectsInhomogeneousGenerators) {
    auto R = ring_q(2);
    EXPECT_THROW(Ideal<Rational>(2, {R.var(0) + R.cst(1)}), std::invalid_argument);
    EXPECT_THROW(Ideal<Rational>(3, {R.var(0)}), std::invalid_argument);
    Ideal<Rational> I(2, {R.var(0), R.var(0), R.var(1)});
    EXPECT_EQ(I.dedup().gens.size(), 2u);
}

TEST(RationalMapType, Validation) {
    auto R = ring_q(3);
    EXPECT_THROW(RationalMap<Rational>({R.var(0), R.var(1) * R.var(1)}), std::invalid_argument);
    EXPECT_THROW(RationalMap<Rational>({R.zero(), R.zero()}), std::invalid_argument);
    RationalMap<Rational> m({R.var(0) * R.var(1), R.zero(), R.var(2) * R.var(2)});
    EXPECT_EQ(m.src_dim, 2u);
    EXPECT_EQ(m.tgt_dim, 2u);
    EXPECT_EQ(m.degree(), 2);
}

TEST(MapEval, BaseLocusIsNullopt) {
    auto s = build_surface_maps();
    auto v = map_eval(s.cr, rv({1, 0, 0}));
    ASSERT_TRUE(v.has_value());
    EXPECT_TRUE(points_equal_projectively(*v, rv({1, 0, 0})));
    EXPECT_FALSE(map_eval(s.cr, rv({1, 0, -1})).has_value());
}

TEST(NormalizeMap, JointContentAndSign) {
    auto R = ring_q(2);
    RationalMap<Rational> m({R.var(0).scale(Rational(-2, 3)), R.var(1).scale(Rational(4, 3))});
    auto n = normalize_map(m);
    EXPECT_EQ(n.comps[0], R.var(0));
    EXPECT_EQ(n.comps[1], R.var(1).scale(-2));
}

TEST(Compose, CremonaInverseIsIdentity) {
    auto s = build_surface_maps();
    auto id = RationalMap<Rational>::identity(2, Rational(1));
    EXPECT_TRUE(maps_equal_symbolic(map_compose(s.cr_inv, s.cr), id));
    EXPECT_TRUE(maps_equal_symbolic(map_compose(s.cr, s.cr_inv), id));
}

TEST(Compose, DimensionMismatchThrows) {
    auto s = build_surface_maps();
    EXPECT_THROW(map_compose(s.phi, s.phi), std::invalid_argument);
}

TEST(Compose, FactorRemoval) {
    auto R = ring_q(2);
    RationalMap<Rational> sq({R.var(0) * R.var(0), R.var(0) * R.var(1)});
    auto id = RationalMap<Rational>::identity(1, Rational(1));
    auto c = map_compose(id, sq, std::optional{R.var(0)});
    EXPECT_EQ(c.degree(), 1);
    EXPECT_TRUE(maps_equal_symbolic(c, id));
    EXPECT_THROW(map_compose(id, sq, std::optional{R.var(1)}), std::runtime_error);
}

TEST(Equality, SymbolicAndSampledAgree) {
    auto s = build_surface_maps();
    auto chi2 = map_compose(s.phi, s.cr_inv);
    EXPECT_TRUE(maps_equal_symbolic(s.chi, chi2));
    EXPECT_TRUE(maps_equal_sampled(s.chi, chi2, 200, 0));
    EXPECT_FALSE(maps_equal_symbolic(s.chi, s.phi));
    EXPECT_FALSE(maps_equal_sampled(s.chi, s.phi, 50, 0));
    EqualityPolicy sampled{0, 7, 200, 3};
    EXPECT_TRUE(maps_equal_projectively(s.chi, chi2, sampled));
}

TEST(Equality, ProportionalMapsAreEqual) {
    auto s = build_surface_maps();
    RationalMap<Rational> scaled = s.phi;
    for (auto& f : scaled.comps) f = f.scale(Rational(-7, 3));
    EXPECT_TRUE(maps_equal_projectively(s.phi, scaled));
}

TEST(ThirdIntersection, ContainedLine) {
    auto F = cubic_surface();
    EXPECT_THROW(third_intersection(F, rv({1, -1, 0, 0}), rv({0, 0, 1, -1})), std::domain_error);
}

TEST(ThirdIntersection, OffCubicRejected) {
    EXPECT_THROW(third_intersection(cubic_surface(), rv({1, 0, 0, 0}), rv({1, -1, 0, 0})), std::invalid_argument);
}

TEST(ThirdIntersection, PropertyThirdPointOnCubic) {
    auto s = build_surface_maps();
    auto F = cubic_surface();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-6, 6);
    int done = 0;
    for (int i = 0; i < 200 && done < 40; ++i) {
        auto p = map_eval(s.chi, rv({d(rng), d(rng), d(rng)}));
        auto q = map_eval(s.chi, rv({d(rng), d(rng), d(rng)}));
        if (!p || !q || points_equal_projectively(*p, *q)) continue;
        try {
            auto r = third_intersection(F, *p, *q);
            EXPECT_TRUE(F.eval(r).is_zero());
            ++done;
        } catch (const std::domain_error&) {
        }
    }
    EXPECT_GE(done, 20);
}

TEST(LinearSpace, LineOnCubic) {
    auto F = cubic_surface();
    auto R = ring_q(4);
    EXPECT_TRUE(vanishes_on_linear_space(F, {{1, -R.var(0)}, {3, -R.var(2)}}));
    EXPECT_FALSE(vanishes_on_linear_space(F, {{1, R.var(0)}}));
}

TEST(Serialize, PolyRoundTrip) {
    auto A = build_AB(ctx_q(2)).first;
    auto j = to_json(A);
    EXPECT_EQ(j["vars"], 5);
    EXPECT_EQ(j["field"], "QQ");
    EXPECT_EQ(poly_from_json(j, Rational(1)), A);
    EXPECT_THROW(poly_from_json(j, QuadExt(1)), std::invalid_argument);
}

TEST(Serialize, MapRoundTripOverFq) {
    const auto& f = fq_make(2, 2);
    auto g = build_char2_g(ctx_fq(2, f));
    auto j = to_json(g);
    EXPECT_EQ(j["source_dim"], 4);
    EXPECT_EQ(j["target_dim"], 5);
    EXPECT_EQ(j["degree"], 4);
    auto back = map_from_json(j, FqElem(f, 1));
    EXPECT_TRUE(maps_equal_symbolic(back, g));
}

TEST(Serialize, IdealRoundTrip) {
    auto I = ideal_Z(ctx_q(3));
    auto back = ideal_from_json(to_json(I), Rational(1));
    ASSERT_EQ(back.gens.size(), I.gens.size());
    for (std::size_t i = 0; i < I.gens.size(); ++i) EXPECT_EQ(back.gens[i], I.gens[i]);
}
