#include <gtest/gtest.h>

#include <filesystem>

#include "cgras/verify.hpp"

using namespace cgras;
using namespace cgras::verify;

namespace {

std::filesystem::path scratch_dir(std::string const& name)
{
    auto p = std::filesystem::temp_directory_path() / ("cgras_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    return p;
}

} // namespace

TEST(Verify, ChevalleyRecords)
{
    auto r = chevalley(-84, true);
    EXPECT_TRUE(r.match());
    EXPECT_EQ(r.lhs, 4);
    EXPECT_EQ(to_csv(r), "-84,1,1,inf,trivial,4,4,true,3,");
    auto o = chevalley(-4, false);
    EXPECT_EQ(o.lhs, 1);
    EXPECT_EQ(o.rhs, 1);
    auto s = chevalley(-84, true, {5});
    EXPECT_TRUE(s.match()) << s.detail;
    EXPECT_EQ(s.lhs, 2);
}

TEST(Verify, RedeiRecords)
{
    auto a = redei(-84);
    EXPECT_EQ(std::tuple(a.lhs, a.rhs, *a.redei_rank), std::tuple(0, 0, 2));
    auto b = redei(-56);
    EXPECT_EQ(std::tuple(b.lhs, b.rhs), std::tuple(1, 1));
    EXPECT_TRUE(redei(-4).match());
}

TEST(Verify, GrasAndRayclassRecords)
{
    OracleCache none;
    auto a = gras(-4, Modulus(5, false), {}, SubmoduleSpec::trivial(), none);
    EXPECT_EQ(std::tuple(a.lhs, a.rhs), std::tuple(4, 4));
    auto b = gras(-4, Modulus(1, true), {}, SubmoduleSpec::trivial(), none);
    EXPECT_EQ(std::tuple(b.lhs, b.rhs), std::tuple(1, 1));
    auto c = gras(-23, Modulus::trivial(), {2}, SubmoduleSpec::trivial(), none);
    EXPECT_EQ(std::tuple(c.lhs, c.rhs), std::tuple(1, 1));
    EXPECT_NE(c.detail.find("rhs=4/4"), std::string::npos);
    for (i64 mf : {3, 5, 7})
        EXPECT_TRUE(rayclass(-4, Modulus(mf, false), {}, none).match());
    EXPECT_TRUE(rayclass(12, Modulus(5, false), {}, none).match());
    EXPECT_TRUE(rayclass(1, Modulus(50, true), {}, none).match());
}

TEST(Verify, SkipsAreStructured)
{
    OracleCache tiny({}, 4);
    auto r = gras(-4004, Modulus(9, false), {}, SubmoduleSpec::trivial(), tiny);
    EXPECT_EQ(r.status, Status::skipped);
    EXPECT_NE(r.detail.find("budget"), std::string::npos);
    EXPECT_EQ(to_csv(r), "-4004,9,0,inf,trivial,,,skip,4,");
    auto bad = gras(-4, Modulus(2, false), {2}, SubmoduleSpec::trivial(), OracleCache{});
    EXPECT_EQ(bad.status, Status::skipped);
}

TEST(Verify, JsonLines)
{
    auto r = redei(-56);
    auto j = nlohmann::json::parse(to_jsonl(r));
    EXPECT_EQ(j["d"], -56);
    EXPECT_EQ(j["lhs"], 1);
    EXPECT_EQ(j["redei_rank"], 0);
    EXPECT_EQ(j["status"], "match");
    EXPECT_EQ(csv_header(), "d,mf,minf,S,submodule,lhs,rhs,match,t,redei_rank");
}

TEST(Verify, CacheStoresAndReloads)
{
    auto dir = scratch_dir("cache");
    OracleCache cache(dir.string());
    Discriminant d(-84);
    Modulus m(5, true);
    auto a = cache.get(d, m, PlaceSet{});
    auto files = cache.list();
    ASSERT_EQ(files.size(), 1U);
    EXPECT_EQ(files[0], OracleCache::file_name(d, m, PlaceSet{}, RayClassOracle::default_bound(d, m)));
    auto b = cache.get(d, m, PlaceSet{});
    EXPECT_EQ(a.order(), b.order());
    EXPECT_EQ(a.sigma_map(), b.sigma_map());
    auto r1 = gras(-84, m, {}, SubmoduleSpec::two_torsion(), cache);
    auto r2 = gras(-84, m, {}, SubmoduleSpec::two_torsion(), OracleCache{});
    EXPECT_EQ(to_csv(r1), to_csv(r2));
    // a damaged entry is rebuilt
    {
        std::ofstream out(dir / files[0]);
        out << "garbage\n";
    }
    EXPECT_EQ(cache.get(d, m, PlaceSet{}).order(), a.order());
    EXPECT_EQ(cache.clear(), 1U);
    EXPECT_TRUE(cache.list().empty());
    std::filesystem::remove_all(dir);
}
