#include <gtest/gtest.h>

#include <random>

#include "fermat/multipoly.hpp"

using namespace fermat;

namespace {

template <class K>
MPoly<K> random_poly(const PolyRing<K>& R, std::mt19937_64& rng, int nterms, int maxdeg) {
    std::uniform_int_distribution<long> c(-9, 9);
    std::uniform_int_distribution<int> e(0, maxdeg);
    std::uniform_int_distribution<std::size_t> v(0, R.n - 1);
    MPoly<K> f = R.zero();
    for (int k = 0; k < nterms; ++k) {
        MPoly<K> t = R.cst(c(rng));
        int d = e(rng);
        for (int j = 0; j < d; ++j) t *= R.var(v(rng));
        f += t;
    }
    return f;
}

template <class K>
std::vector<K> random_point(const PolyRing<K>& R, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> c(-10, 10);
    std::vector<K> pt;
    for (std::size_t i = 0; i < R.n; ++i) pt.push_back(R.one.from_int(c(rng)));
    return pt;
}

const std::vector<std::string> kU = {"u0", "u1", "u2"};

MPoly<Rational> abar_n1() { return parse_q(kU, "u0^3 + u1^3 + 3u1^2u2 + 3u1u2^2 + 9u2^3"); }
MPoly<Rational> bbar_n1() { return parse_q(kU, "u0^3 + u1^3 - u1^2u2 + 3u1u2^2 - 3u2^3"); }

}  // namespace

TEST(Arith, DifferenceOfSquares) {
    auto R = ring_q(2);
    auto x0 = R.var(0), x1 = R.var(1);
    EXPECT_EQ((x0 + x1) * (x0 - x1), x0 * x0 - x1 * x1);
}

TEST(Arith, AbarPlusThreeBbar) {
    EXPECT_EQ(abar_n1() + bbar_n1().scale(3), parse_q(kU, "4u0^3 + 4u1^3 + 12u1u2^2"));
}

TEST(Arith, MultiplyByOne) {
    auto R = ring_q(4);
    auto F = parse_q(var_names("x", 4), "x0^3+x1^3+x2^3+x3^3");
    EXPECT_EQ(F * R.cst(1), F);
}

TEST(Arith, ArityMismatchThrows) {
    EXPECT_THROW(ring_q(2).var(0) + ring_q(3).var(0), std::invalid_argument);
}

TEST(Arith, CanonicalOrderIsGradedLex) {
    auto f = parse_q({"x", "y"}, "y + x^2 + 1 + x + y^2 + x*y");
    std::vector<std::pair<unsigned, unsigned>> order;
    for (const auto& t : f.terms()) order.push_back({t.m[0], t.m[1]});
    EXPECT_EQ(order, (std::vector<std::pair<unsigned, unsigned>>{{2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 1}, {0, 0}}));
}

TEST(Eval, Examples) {
    auto F = parse_q(var_names("x", 4), "x0^3+x1^3+x2^3+x3^3");
    EXPECT_EQ(F.eval<Rational>({1, -1, 0, 0}), Rational(0));
    EXPECT_EQ(abar_n1().eval<Rational>({1, 0, 0}), Rational(1));
    auto q = parse_q({"x4", "x5"}, "x4^2 - x4x5 + x5^2");
    EXPECT_EQ(q.eval<Rational>({1, 1}), Rational(1));
}

TEST(Eval, RationalPolynomialAtQuadExtPoint) {
    auto f = parse_q({"a"}, "a^2 + 3");
    EXPECT_TRUE(f.eval<QuadExt>({QuadExt::xi()}).is_zero());
}

TEST(Derivative, Examples) {
    EXPECT_EQ(abar_n1().derivative(0), parse_q(kU, "3u0^2"));
    EXPECT_EQ(bbar_n1().derivative(2), parse_q(kU, "-(u1 - 3u2)^2"));
    const auto& f3 = fq_make(3, 1);
    auto R = ring_fq(1, f3);
    EXPECT_TRUE(R.var(0).pow(3).derivative(0).is_zero());
}

TEST(Substitute, ParametrizedLineReproducesCubicInLambda) {
    // u1, u2, lambda
    auto R = ring_qxi(3);
    QuadExt xi = QuadExt::xi(), h(Rational(1, 2));
    auto u1 = R.var(0), u2 = R.var(1), l = R.var(2);
    auto L0 = (u1 - u2.scale(3) + (u1 + u2).scale(xi)).scale(h) - l * (u1 + u2).scale(xi);
    auto L1 = u1 + u2.scale(xi) - l * u2.scale(xi * QuadExt(2));
    auto L2 = R.cst(QuadExt::a_plus()) - l.scale(xi);
    auto F = to_qxi(parse_q({"x0", "x1", "x2"}, "x0^3 + x1^3 + x2^3 + 1"));
    auto Fu = F.compose({L0, L1, L2});
    auto A = to_qxi(parse_q({"u1", "u2", "l"}, "u1^3+3u1^2u2+3u1u2^2+9u2^3+1"));
    auto B = to_qxi(parse_q({"u1", "u2", "l"}, "u1^3-u1^2u2+3u1u2^2-3u2^3+1"));
    auto expected = (A.scale(xi * QuadExt(3))) * l.pow(3) - (A.scale(xi) + B).scale(QuadExt(Rational(9, 2))) * l.pow(2) +
                    (A.scale(xi) + B.scale(3)).scale(QuadExt(Rational(3, 2))) * l;
    EXPECT_EQ(Fu, expected);
}

TEST(Substitute, ZplusMembership) {
    auto R = ring_qxi(3);
    auto A = to_qxi(abar_n1());
    auto r = A.substitute({{0, R.zero()}, {1, R.var(2).scale(-QuadExt::xi())}});
    EXPECT_TRUE(r.is_zero());
}

TEST(Substitute, IdentityLeavesPolynomial) {
    auto A = abar_n1();
    EXPECT_EQ(A.substitute({}), A);
    EXPECT_EQ(A.compose(ring_q(3).vars()), A);
}

TEST(Homogenize, AffineAToAbar) {
    auto A = parse_q(kU, "u1^3+3u1^2u2+3u1u2^2+9u2^3+1");
    EXPECT_EQ(A.homogenize(0, 3), abar_n1());
}

TEST(Homogenize, ConstantAndIdempotent) {
    auto R = ring_q(3);
    EXPECT_EQ(R.cst(1).homogenize(0, 2), R.var(0).pow(2));
    EXPECT_EQ(abar_n1().homogenize(0, 3), abar_n1());
    EXPECT_THROW(abar_n1().homogenize(0, 2), std::invalid_argument);
}

TEST(ContentNormalize, Examples) {
    auto R = ring_q(2);
    auto f = R.var(0).scale(Rational(1, 2)) + R.var(1).scale(Rational(3, 2));
    EXPECT_EQ(integer_content_normalize(f), R.var(0) + R.var(1).scale(3));
    EXPECT_EQ(integer_content_normalize(R.var(0).scale(-4)), R.var(0));
    EXPECT_THROW(integer_content_normalize(R.zero()), std::invalid_argument);
}

TEST(TrialDivide, ExactAndInexact) {
    auto R = ring_q(3);
    std::mt19937_64 rng(3);
    auto g = parse_q(kU, "u1^2 + u1u2 + u2^2");
    for (int i = 0; i < 20; ++i) {
        auto h = random_poly(R, rng, 6, 4);
        auto q = trial_divide(g * h, g);
        ASSERT_TRUE(q.has_value());
        EXPECT_EQ(*q, h);
    }
    EXPECT_FALSE(trial_divide(g + R.cst(1), g).has_value());
    EXPECT_THROW(trial_divide(g, R.zero()), DivisionByZero);
}

TEST(Parser, JuxtapositionAndPrecedence) {
    auto R = ring_q(3);
    auto u0 = R.var(0), u1 = R.var(1), u2 = R.var(2);
    EXPECT_EQ(parse_q(kU, "3u0^2u1"), u0.pow(2) * u1 * R.cst(3));
    EXPECT_EQ(parse_q(kU, "-u0^2"), -u0.pow(2));
    EXPECT_EQ(parse_q(kU, "(1/3)u2(u0 - u1)"), (u2 * (u0 - u1)).scale(Rational(1, 3)));
    EXPECT_EQ(parse_q(kU, "u0u1u2 - 2*u1"), u0 * u1 * u2 - u1.scale(2));
    EXPECT_THROW(parse_q(kU, "u0 + w"), std::invalid_argument);
    EXPECT_THROW(parse_q(kU, "(u0"), std::invalid_argument);
}

TEST(Properties, RingAxiomsOverQ) {
    auto R = ring_q(4);
    std::mt19937_64 rng(10);
    for (int i = 0; i < 30; ++i) {
        auto a = random_poly(R, rng, 5, 3), b = random_poly(R, rng, 5, 3), c = random_poly(R, rng, 5, 3);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(Properties, RingAxiomsOverFq) {
    auto R = ring_fq(3, fq_make(2, 3));
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
        auto a = random_poly(R, rng, 5, 3).scale(FqElem::gen(fq_make(2, 3)));
        auto b = random_poly(R, rng, 5, 3), c = random_poly(R, rng, 5, 3);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
    }
}

TEST(Properties, EulerIdentity) {
    auto R = ring_q(4);
    std::mt19937_64 rng(12);
    for (int i = 0; i < 30; ++i) {
        auto f = random_poly(R, rng, 6, 4);
        int d = f.degree();
        if (d < 0) continue;
        auto h = f.homogenize(3, static_cast<unsigned>(d) + 1);
        auto lhs = R.zero();
        for (std::size_t v = 0; v < 4; ++v) lhs += R.var(v) * h.derivative(v);
        EXPECT_EQ(lhs, h.scale(d + 1));
    }
}

TEST(Properties, DehomogenizeRecovers) {
    auto R = ring_q(4);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 30; ++i) {
        auto f = random_poly(ring_q(3), rng, 6, 4).extend(4);
        int d = std::max(f.degree(), 0);
        auto h = f.homogenize(3, static_cast<unsigned>(d) + 2);
        EXPECT_TRUE(h.is_homogeneous());
        EXPECT_EQ(h.substitute({{3, R.cst(1)}}), f);
    }
}

TEST(Properties, EvalIsHomomorphism) {
    auto R = ring_fq(3, fq_make(13, 1));
    std::mt19937_64 rng(14);
    for (int i = 0; i < 30; ++i) {
        auto a = random_poly(R, rng, 5, 4), b = random_poly(R, rng, 5, 4);
        auto pt = random_point(R, rng);
        EXPECT_EQ((a * b).eval(pt), a.eval(pt) * b.eval(pt));
        EXPECT_EQ((a + b).eval(pt), a.eval(pt) + b.eval(pt));
    }
}

TEST(Properties, ComposeAgreesWithEvaluation) {
    auto R = ring_q(3);
    std::mt19937_64 rng(15);
    for (int i = 0; i < 20; ++i) {
        auto f = random_poly(R, rng, 4, 3);
        std::vector<MPoly<Rational>> imgs = {random_poly(R, rng, 3, 2), random_poly(R, rng, 3, 2),
                                             random_poly(R, rng, 3, 2)};
        auto pt = random_point(R, rng);
        std::vector<Rational> inner = {imgs[0].eval(pt), imgs[1].eval(pt), imgs[2].eval(pt)};
        EXPECT_EQ(f.compose(imgs).eval(pt), f.eval(inner));
    }
}
