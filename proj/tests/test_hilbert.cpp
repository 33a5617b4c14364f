#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cgras/hilbert.hpp"
#include "oracles.hpp"

using namespace cgras;
using hilbert::Place;

using namespace oracle;

TEST(Hilbert, KnownSymbols)
{
    EXPECT_EQ(hilbert::hilbert_symbol(-1, -1, Place::finite(2)), -1);
    EXPECT_EQ(hilbert::hilbert_symbol(-1, -1, Place::infinity()), -1);
    EXPECT_EQ(hilbert::hilbert_symbol(2, -1, Place::finite(2)), 1);
    EXPECT_EQ(hilbert::hilbert_symbol(3, -1, Place::finite(3)), -1);
    EXPECT_EQ(hilbert::hilbert_symbol(5, -1, Place::finite(5)), 1);
    EXPECT_EQ(hilbert::hilbert_symbol(Rational(1, 3), Rational(-1), Place::finite(3)), -1);
}

TEST(Hilbert, SymbolMatchesSolvability)
{
    for (i64 p = 2; p <= 50; ++p) {
        if (!arith::is_prime(static_cast<u64>(p)))
            continue;
        for (i64 a = -30; a <= 30; ++a)
            for (i64 b = -30; b <= 30; ++b) {
                if (a == 0 || b == 0)
                    continue;
                int sym = hilbert::hilbert_symbol(a, b, Place::finite(static_cast<u64>(p)));
                ASSERT_EQ(sym == 1, solvable(a, b, p)) << "(" << a << "," << b << ")_" << p;
            }
    }
    for (i64 a = -5; a <= 5; ++a)
        for (i64 b = -5; b <= 5; ++b)
            if (a && b) {
                ASSERT_EQ(hilbert::hilbert_symbol(a, b, Place::infinity()), (a < 0 && b < 0) ? -1 : 1);
            }
}

TEST(Hilbert, ProductFormulaOnRandomPairs)
{
    std::mt19937_64 rng(20240601);
    auto draw = [&] {
        i64 v = static_cast<i64>(rng() % 2000000) - 1000000;
        return v == 0 ? 1 : v;
    };
    for (int i = 0; i < 10000; ++i) {
        Rational a(draw(), std::abs(draw()));
        Rational b(draw());
        ASSERT_EQ(product_over_places(a, b), 1) << a.num << "/" << a.den << ", " << b.num;
    }
}

TEST(Hilbert, BimultiplicativeAndSymmetric)
{
    for (u64 p : {2, 3, 5, 7, 11})
        for (i64 a = -12; a <= 12; ++a)
            for (i64 b = -12; b <= 12; ++b)
                for (i64 c : {-3, 2, 5, 6}) {
                    if (!a || !b)
                        continue;
                    auto v = Place::finite(p);
                    ASSERT_EQ(hilbert::hilbert_symbol(a, b, v), hilbert::hilbert_symbol(b, a, v));
                    ASSERT_EQ(hilbert::hilbert_symbol(a * c, b, v),
                              hilbert::hilbert_symbol(a, b, v) * hilbert::hilbert_symbol(c, b, v));
                }
}

TEST(Hilbert, GlobalNormsFromGaussianField)
{
    // n > 0 is a norm from Q(i) iff it is a sum of two integer squares
    for (i64 n = 1; n <= 500; ++n) {
        bool sum = false;
        for (i64 x = 0; x * x <= n && !sum; ++x) {
            i64 r;
            sum = arith::is_square(n - x * x, &r);
        }
        ASSERT_EQ(hilbert::is_global_norm(n, Discriminant(-4)), sum) << n;
        ASSERT_FALSE(hilbert::is_global_norm(-n, Discriminant(-4)));
    }
    EXPECT_TRUE(hilbert::is_global_norm(2, Discriminant(-23)));
    EXPECT_TRUE(hilbert::is_global_norm(Rational(1, 2), Discriminant(-4)));
}

TEST(Hilbert, RelevantPlaces)
{
    auto ps = hilbert::relevant_places({Rational(15, 7)}, -4);
    std::vector<std::string> names;
    for (auto const& v : ps)
        names.push_back(v.to_string());
    EXPECT_EQ(names, (std::vector<std::string>{"2", "3", "5", "7", "inf"}));
}

TEST(Hilbert, LocalNormIndexExamples)
{
    EXPECT_EQ(hilbert::local_norm_index(Discriminant(-4), 5, 1).index, 1U);
    EXPECT_EQ(hilbert::local_norm_index(Discriminant(-4), 3, 1).index, 1U);
    EXPECT_EQ(hilbert::local_norm_index(Discriminant(-4), 2, 2).index, 2U);
    EXPECT_EQ(hilbert::local_norm_index(Discriminant(12), 2, 2).index, 2U);
    EXPECT_TRUE(hilbert::local_norm_index(Discriminant(-4), 2, 2).stabilized);
    EXPECT_THROW(hilbert::LocalNormImage(Discriminant(-4), 4, 1), std::invalid_argument);
}

TEST(Hilbert, LocalNormIndexAgreesWithFullEnumeration)
{
    for (i64 d : {-4, -3, -8, -7, -15, -20, -24, 5, 8, 12, 13, 24, 21, 28, -84, 40})
        for (i64 p : {2, 3, 5, 7})
            for (int k = 1; k <= 3; ++k) {
                auto img = hilbert::local_norm_image(Discriminant(d), static_cast<u64>(p), k);
                if (img->split()) {
                    ASSERT_EQ(img->index(), brute_local_index(d, p, k, k + 3));
                    continue;
                }
                const int M = img->level();
                for (int level : {M, M + 1}) {
                    if (2 * (level - k) * std::log2(static_cast<double>(p)) > 24)
                        continue;
                    ASSERT_EQ(img->index(), brute_local_index(d, p, k, level)) << d << " " << p << "^" << k << " level " << level;
                }
            }
}

TEST(Hilbert, RayNormsThroughLocalConditions)
{
    // 5 splits in Q(i), so only the symbols away from 5 matter
    Discriminant d(-4);
    Modulus m(5, false);
    EXPECT_TRUE(hilbert::in_ray(Rational(11), m));
    EXPECT_FALSE(hilbert::in_ray(Rational(2), m));
    EXPECT_FALSE(hilbert::is_ray_norm(Rational(11), d, m)); // 11 = 3 mod 4 is not a sum of squares
    EXPECT_TRUE(hilbert::is_ray_norm(Rational(61), d, m));  // 61 = 25 + 36 and N(6+5i)
}
