#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cgras/rayoracle.hpp"

using namespace cgras;
using namespace cgras::rayoracle;
using quadfield::Field;
using quadfield::Ideal;

namespace {

/* number of ideals of norm n is sum over k | n of (d/k) */
i64 ideal_count(i64 d, i64 n)
{
    i64 s = 0;
    for (i64 k = 1; k <= n; ++k)
        if (n % k == 0)
            s += arith::kronecker(d, k);
    return s;
}

std::vector<Ideal> small_ideals(Field const& F, i64 bound, i64 mf)
{
    std::vector<Ideal> out;
    for (i64 n = 1; n <= bound; ++n)
        if (std::gcd(n, mf) == 1)
            for (auto const& I : F.ideals_of_norm(n))
                out.push_back(I);
    return out;
}

} // namespace

TEST(QuadField, IdealCountsAndNorms)
{
    for (i64 d : {-4, -3, -23, -84, -56, 5, 12, 13, 40, 136, -420}) {
        Field F{Discriminant(d)};
        for (i64 n = 1; n <= 120; ++n) {
            auto ids = F.ideals_of_norm(n);
            ASSERT_EQ(static_cast<i64>(ids.size()), ideal_count(d, n)) << d << " " << n;
            for (auto const& I : ids)
                ASSERT_EQ(I.norm(), n);
        }
        auto ids = small_ideals(F, 40, 1);
        for (std::size_t i = 0; i < ids.size(); i += 3)
            for (std::size_t j = 0; j < ids.size(); j += 5) {
                auto IJ = F.mul(ids[i], ids[j]);
                ASSERT_EQ(IJ.norm(), ids[i].norm() * ids[j].norm());
                ASSERT_EQ(IJ, F.mul(ids[j], ids[i]));
                ASSERT_EQ(F.mul(ids[i], F.conj(ids[i])), F.principal(ids[i].norm()));
            }
    }
}

TEST(QuadField, FormOfIsAHomomorphism)
{
    for (i64 d : {-84, -56, -231, 40, 136, 229, -3299}) {
        Field F{Discriminant(d)};
        quadforms::ClassGroup G{Discriminant(d)};
        auto ids = small_ideals(F, 60, 1);
        for (std::size_t i = 0; i < ids.size(); i += 2)
            for (std::size_t j = 0; j < ids.size(); j += 3) {
                auto a = G.index_of(F.form_of(ids[i]));
                auto b = G.index_of(F.form_of(ids[j]));
                ASSERT_EQ(G.index_of(F.form_of(F.mul(ids[i], ids[j]))), G.mul(a, b)) << d;
            }
    }
}

TEST(QuadField, GeneratorsOfPrincipalIdeals)
{
    for (i64 d : {-4, -84, 12, 136, 40, 229}) {
        Field F{Discriminant(d)};
        quadforms::ClassGroup G{Discriminant(d)};
        const auto J = G.negation_class();
        for (auto const& I : small_ideals(F, 80, 1)) {
            auto c = G.index_of(F.form_of(I));
            bool principal = c == 0 || c == J;
            auto g = F.find_generator(I);
            ASSERT_EQ(g.has_value(), principal) << d << " " << I.to_string();
            if (g) {
                ASSERT_EQ(std::abs(static_cast<i64>(F.norm(*g))), I.norm());
                ASSERT_TRUE(F.contains(I, *g));
            }
        }
    }
}

TEST(RayOracle, TrivialModulusGivesClassGroups)
{
    for (i64 d : arith::fundamental_discriminants(-300, 300)) {
        Discriminant D(d);
        auto s = quadforms::class_group_summary(D);
        auto o = RayClassOracle::build(D, Modulus::trivial(), PlaceSet{});
        ASSERT_EQ(o.order(), s.h) << d;
        auto on = RayClassOracle::build(D, Modulus::real_places(), PlaceSet{});
        ASSERT_EQ(on.order(), s.h_plus) << d;
    }
}

TEST(RayOracle, Examples)
{
    auto o = RayClassOracle::build(Discriminant(-4), Modulus(5, false), PlaceSet{});
    EXPECT_EQ(o.order(), 4U);
    EXPECT_EQ(ambiguous_count(o, SubmoduleSpec::trivial()), 4U);
    EXPECT_EQ(o.base().order(), 2U);
    auto s = RayClassOracle::build(Discriminant(-23), Modulus::trivial(), PlaceSet({2}));
    EXPECT_EQ(s.order(), 1U);
    auto r = RayClassOracle::build(Discriminant(12), Modulus::real_places(), PlaceSet{});
    EXPECT_EQ(r.order(), 2U);
    EXPECT_THROW(RayClassOracle::build(Discriminant(-4), Modulus(10, false), PlaceSet({5})), std::invalid_argument);
}

TEST(RayOracle, KeysAgreeWithDirectPrincipalTest)
{
    std::mt19937_64 rng(5);
    for (auto [d, mf, inf] : std::vector<std::tuple<i64, i64, bool>>{
             {-4, 5, false}, {-4, 8, false}, {-3, 7, false}, {-23, 3, false}, {-84, 5, false},
             {12, 5, true}, {12, 5, false}, {5, 11, true}, {40, 9, true}, {136, 3, false}, {-20, 9, false}}) {
        Modulus m(mf, inf);
        auto o = RayClassOracle::build(Discriminant(d), m, PlaceSet{});
        auto ids = small_ideals(o.field(), 60, mf);
        for (int t = 0; t < 400; ++t) {
            auto const& I = ids[rng() % ids.size()];
            auto const& J = ids[rng() % ids.size()];
            bool direct = ray_equivalent_direct(o.field(), m, I, J);
            ASSERT_EQ(direct, o.classify(I) == o.classify(J)) << d << " " << I.to_string() << " " << J.to_string();
            ASSERT_EQ(direct, o.ray_principal_test(I, J));
        }
    }
}

TEST(RayOracle, ConjugationAndNormAreCompatible)
{
    for (auto [d, mf, inf, S] : std::vector<std::tuple<i64, i64, bool, std::vector<u64>>>{
             {-4, 5, false, {}}, {-84, 5, true, {}}, {12, 5, true, {}}, {-23, 9, false, {2}}, {40, 7, true, {3}}}) {
        Modulus m(mf, inf);
        auto o = RayClassOracle::build(Discriminant(d), m, PlaceSet(S));
        for (auto const& I : small_ideals(o.field(), 50, mf)) {
            bool meets_s = false;
            for (u64 p : S)
                meets_s = meets_s || I.norm() % static_cast<i64>(p) == 0;
            if (meets_s)
                continue;
            auto k = o.classify(I);
            ASSERT_EQ(o.classify(o.field().conj(I)), o.sigma(k));
            ASSERT_EQ(o.norm_to_base(k), o.base().class_of(I.norm()));
            ASSERT_EQ(o.classify(o.field().principal(I.norm())), o.mul(k, o.sigma(k)));
        }
    }
}

TEST(RayOracle, SerializationRoundTrip)
{
    auto o = RayClassOracle::build(Discriminant(-84), Modulus(5, true), PlaceSet({3}));
    std::stringstream s;
    o.save(s);
    auto p = RayClassOracle::load(s);
    ASSERT_EQ(p.order(), o.order());
    EXPECT_EQ(p.sigma_map(), o.sigma_map());
    for (Elem i = 0; i < o.order(); ++i) {
        EXPECT_EQ(p.norm_to_base(i), o.norm_to_base(i));
        for (Elem j = 0; j < o.order(); ++j)
            ASSERT_EQ(p.mul(i, j), o.mul(i, j));
    }
    for (auto const& I : small_ideals(o.field(), 40, 5))
        if (I.norm() % 3) {
            ASSERT_EQ(p.classify(I), o.classify(I));
        }
    std::stringstream again;
    p.save(again);
    std::stringstream first;
    o.save(first);
    EXPECT_EQ(again.str(), first.str());

    std::stringstream bad("cgras-rayoracle v0\n");
    EXPECT_THROW(RayClassOracle::load(bad), std::runtime_error);
}

TEST(RayOracle, BaseGroupMatchesDefinition)
{
    // S = {inf}: (Z/m)^x x signs modulo <-1>
    for (i64 mf = 1; mf <= 60; ++mf)
        for (bool inf : {false, true}) {
            BaseRayGroup B(Modulus(mf, inf), PlaceSet{});
            std::size_t total = static_cast<std::size_t>(arith::euler_phi(mf)) * (inf ? 2 : 1);
            std::size_t minus_one_trivial = (!inf && mf <= 2) ? 1 : 2;
            ASSERT_EQ(B.order(), total / minus_one_trivial) << mf << " " << inf;
        }
}

TEST(RayOracle, BudgetIsEnforced)
{
    EXPECT_THROW(RayClassOracle::build(Discriminant(-4004), Modulus(9, false), PlaceSet{}, 0, 8), BudgetExceeded);
}

TEST(RayOracle, SubmodulesAreStable)
{
    for (i64 d : {-84, -56, 40, -20, 12}) {
        auto o = RayClassOracle::build(Discriminant(d), Modulus(3, true), PlaceSet{});
        for (auto spec : {SubmoduleSpec::trivial(), SubmoduleSpec::two_torsion(), SubmoduleSpec::ramified()}) {
            auto mask = submodule_mask(o, spec);
            EXPECT_NO_THROW(check_sigma_stable(o, mask));
            EXPECT_TRUE(mask[0]);
            for (auto const& I : submodule_ideals(o, spec))
                ASSERT_TRUE(mask[o.classify(I)]);
        }
    }
}
