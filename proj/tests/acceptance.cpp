// Acceptance suite: one PASS/FAIL line per criterion. All comparisons are exact.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cgras/cgras.hpp"
#include "oracles.hpp"

using namespace cgras;

namespace {

struct Outcome {
    bool pass = true;
    std::size_t cases = 0;
    std::string first_failure;

    void check(bool ok, std::string const& what)
    {
        ++cases;
        if (!ok && pass) {
            pass = false;
            first_failure = what;
        }
    }

    void record(verify::Record const& r)
    {
        std::ostringstream s;
        s << "d=" << r.id.d << " mf=" << r.id.mf << " minf=" << r.id.minf << " S={" << verify::s_field(r.id.S)
          << "} C=" << r.id.submodule << " lhs=" << r.lhs << " rhs=" << r.rhs << " " << r.detail;
        check(r.match(), s.str());
    }
};

int failures = 0;

void criterion(int n, std::string const& title, double limit_seconds, std::function<void(Outcome&)> const& body)
{
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (std::exception const& e) {
        o.pass = false;
        o.first_failure = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = s <= limit_seconds;
    bool ok = o.pass && in_time;
    failures += !ok;
    std::printf("%s criterion %d: %s [%zu cases, %.1fs, limit %.0fs]%s%s\n", ok ? "PASS" : "FAIL", n, title.c_str(), o.cases, s,
                limit_seconds, o.pass ? "" : (" first failure: " + o.first_failure).c_str(), in_time ? "" : " over time limit");
    std::fflush(stdout);
}

std::vector<i64> small_discriminants(i64 bound) { return arith::fundamental_discriminants(-bound, bound); }

} // namespace

int main()
{
    criterion(1, "narrow two-torsion equals 2^(t-1), 0 < |d| <= 10^4", 120, [](Outcome& o) {
        for (i64 d : small_discriminants(10000)) {
            Discriminant D(d);
            auto s = quadforms::class_group_summary(D);
            const u64 expect = u64{1} << (D.t() - 1);
            o.check(s.two_torsion_plus == expect && formulas::chevalley_narrow(D) == expect,
                    "d=" + std::to_string(d) + " lhs=" + std::to_string(s.two_torsion_plus));
        }
    });

    criterion(2, "ordinary two-torsion equals the ambiguous class number formula, |d| <= 5000", 120, [](Outcome& o) {
        for (i64 d : small_discriminants(5000))
            o.record(verify::chevalley(d, false));
    });

    criterion(3, "Redei: 4-rank of Cl+ equals t-1-rank R, and the formula route agrees, |d| <= 10^4", 300, [](Outcome& o) {
        for (i64 d : small_discriminants(10000))
            o.record(verify::redei(d));
    });

    criterion(4, "ambiguous ray classes with modulus, |d| <= 40, m_f in {2,3,4,5,7,8,9}, S = {inf}, C trivial", 600,
              [](Outcome& o) {
                  verify::OracleCache cache;
                  for (i64 d : small_discriminants(40))
                      for (i64 mf : {2, 3, 4, 5, 7, 8, 9})
                          for (bool inf : {false, true})
                              o.record(verify::gras(d, Modulus(mf, inf), {}, rayoracle::SubmoduleSpec::trivial(), cache));
              });

    criterion(5, "ambiguous ray classes with S = {inf, p}, p in {2,3,5}, |d| <= 60, C trivial or two-torsion", 600,
              [](Outcome& o) {
                  verify::OracleCache cache;
                  for (i64 d : small_discriminants(60))
                      for (u64 p : {2, 3, 5})
                          for (i64 mf : {1, 2, 3, 4, 5, 7, 8, 9}) {
                              if (mf % static_cast<i64>(p) == 0)
                                  continue;
                              for (bool inf : {false, true})
                                  for (auto spec : {rayoracle::SubmoduleSpec::trivial(), rayoracle::SubmoduleSpec::two_torsion()})
                                      o.record(verify::gras(d, Modulus(mf, inf), {p}, spec, cache));
                          }
              });

    criterion(6, "ray class numbers: base Q with m_f <= 200, quadratic |d| <= 40 with m_f <= 10", 300, [](Outcome& o) {
        verify::OracleCache cache;
        for (i64 mf = 1; mf <= 200; ++mf)
            for (bool inf : {false, true}) {
                o.record(verify::rayclass(1, Modulus(mf, inf), {}, cache));
                for (u64 p : {2, 3})
                    if (mf % static_cast<i64>(p) != 0)
                        o.record(verify::rayclass(1, Modulus(mf, inf), {p}, cache));
            }
        for (i64 d : small_discriminants(40))
            for (i64 mf = 1; mf <= 10; ++mf)
                for (bool inf : {false, true})
                    o.record(verify::rayclass(d, Modulus(mf, inf), {}, cache));
    });

    criterion(7, "property suites", 600, [](Outcome& o) {
        // product formula
        std::mt19937_64 rng(20240601);
        auto draw = [&] {
            i64 v = static_cast<i64>(rng() % 2000000) - 1000000;
            return v == 0 ? 1 : v;
        };
        for (int i = 0; i < 10000; ++i) {
            Rational a(draw(), std::abs(draw())), b(draw());
            o.check(oracle::product_over_places(a, b) == 1, "product formula at " + std::to_string(a.num) + "/" + std::to_string(a.den));
        }
        // symbols against solvability
        for (i64 p = 2; p <= 50; ++p) {
            if (!arith::is_prime(static_cast<u64>(p)))
                continue;
            for (i64 a = -30; a <= 30; ++a)
                for (i64 b = -30; b <= 30; ++b)
                    if (a && b)
                        o.check((hilbert::hilbert_symbol(a, b, hilbert::Place::finite(static_cast<u64>(p))) == 1) ==
                                    oracle::solvable(a, b, p),
                                "symbol (" + std::to_string(a) + "," + std::to_string(b) + ")_" + std::to_string(p));
        }
        // composition group axioms
        for (i64 d : small_discriminants(3000)) {
            quadforms::ClassGroup G{Discriminant(d)};
            const auto h = static_cast<quadforms::ClassGroup::Elem>(G.order());
            bool ok = G.form(0) == quadforms::reduce(quadforms::principal_form(d), d);
            for (int t = 0; t < 60 && ok; ++t) {
                auto x = static_cast<quadforms::ClassGroup::Elem>(rng() % h);
                auto y = static_cast<quadforms::ClassGroup::Elem>(rng() % h);
                auto z = static_cast<quadforms::ClassGroup::Elem>(rng() % h);
                ok = G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z)) && G.mul(x, y) == G.mul(y, x) && G.mul(x, 0) == x &&
                     G.mul(x, G.inverse(x)) == 0;
            }
            o.check(ok, "group axioms at d=" + std::to_string(d));
        }
        // Redei rows sum to zero
        for (i64 d : small_discriminants(10000)) {
            auto R = formulas::redei_matrix(Discriminant(d));
            bool ok = true;
            for (std::size_t i = 0; i < R.rows(); ++i)
                ok = ok && !R.row_sum(i);
            o.check(ok, "Redei row sum at d=" + std::to_string(d));
        }
        // local norm index: stabilized, and equal to full enumeration at two levels
        for (i64 d : small_discriminants(40))
            for (i64 mf : {2, 3, 4, 5, 7, 8, 9}) {
                Modulus m(mf, false);
                for (u64 p : m.primes()) {
                    const int k = m.exponent(p);
                    auto img = hilbert::local_norm_image(Discriminant(d), p, k);
                    // the two highest levels up to M + 1 that full enumeration can afford
                    int top = (img->split() ? k + 3 : img->level()) + 1;
                    while (top > k + 2 && 2.0 * (top - k) * std::log2(static_cast<double>(p)) > 24)
                        --top;
                    o.check(img->report().stabilized, "stabilization at d=" + std::to_string(d));
                    for (int level : {top - 1, top})
                        o.check(img->index() == oracle::brute_local_index(d, static_cast<i64>(p), k, level),
                                "local index d=" + std::to_string(d) + " p=" + std::to_string(p) + " level " + std::to_string(level));
                }
            }
        // Lambda index does not depend on the choice of D
        for (i64 d : small_discriminants(40))
            for (i64 mf : {2, 3, 4, 5, 7, 8, 9})
                for (bool inf : {false, true}) {
                    Discriminant D(d);
                    Modulus m(mf, inf);
                    auto spec = rayoracle::SubmoduleSpec::trivial();
                    auto ora = rayoracle::RayClassOracle::build(D, m, PlaceSet{});
                    std::vector<Rational> n1, n2;
                    for (auto const& I : rayoracle::submodule_ideals(ora, spec, 0))
                        n1.push_back(Rational(I.norm()));
                    for (auto const& I : rayoracle::submodule_ideals(ora, spec, 1))
                        n2.push_back(Rational(I.norm()));
                    auto i1 = formulas::lambda_norm_index(formulas::lambda_group(D, m, PlaceSet{}, n1), D, m);
                    auto i2 = formulas::lambda_norm_index(formulas::lambda_group(D, m, PlaceSet{}, n2), D, m);
                    o.check(i1 == i2 && n1 != n2, "D-independence at d=" + std::to_string(d) + " mf=" + std::to_string(mf));
                }
    });

    return failures ? 1 : 0;
}
