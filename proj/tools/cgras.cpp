// cgras: batch verification of the ambiguous class number formulas for
// quadratic fields against class group and ray class group computations.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cgras/cgras.hpp"

using namespace cgras;
using verify::Record;

namespace {

struct Options {
    i64 d_from = -100;
    i64 d_to = 100;
    std::optional<i64> d;
    bool base = false;
    i64 modulus = 1;
    std::optional<i64> mf_from, mf_to;
    bool infinite = false;
    std::vector<u64> s_primes;
    std::string submodule = "trivial";
    bool narrow = true;
    std::string format = "csv";
    std::string cache_dir;
    i64 budget = 0;
    unsigned jobs = 1;
    bool explain = false;
};

i64 budget_from(Options const& o)
{
    if (o.budget > 0)
        return o.budget;
    if (char const* env = std::getenv("CGRAS_BUDGET")) {
        try {
            i64 b = std::stoll(env);
            if (b > 0)
                return b;
        } catch (std::exception const&) {
        }
        std::cerr << "warning: ignoring CGRAS_BUDGET=" << env << "\n";
    }
    return rayoracle::RayClassOracle::default_budget;
}

std::vector<i64> discriminants(Options const& o)
{
    if (o.d) {
        if (!arith::is_fundamental(*o.d))
            throw CLI::ValidationError("--d", std::to_string(*o.d) + " is not a fundamental discriminant");
        return {*o.d};
    }
    if (o.d_from > o.d_to)
        throw CLI::ValidationError("--d-from", "empty range");
    return arith::fundamental_discriminants(o.d_from, o.d_to);
}

std::vector<i64> moduli(Options const& o)
{
    if (!o.mf_from && !o.mf_to)
        return {o.modulus};
    i64 lo = o.mf_from.value_or(1), hi = o.mf_to.value_or(lo);
    if (lo < 1 || lo > hi)
        throw CLI::ValidationError("--mf-from", "bad modulus range");
    std::vector<i64> out;
    for (i64 m = lo; m <= hi; ++m)
        out.push_back(m);
    return out;
}

/* Runs the jobs on a pool, then prints the records in input order. */
int run(std::vector<std::function<Record()>> const& jobs, Options const& o)
{
    std::vector<Record> out(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < jobs.size();)
            out[i] = jobs[i]();
    };
    const unsigned n = std::max(1U, std::min<unsigned>(o.jobs, static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    if (o.format == "csv")
        std::cout << verify::csv_header() << "\n";
    std::size_t match = 0, mismatch = 0, skipped = 0;
    double seconds = 0;
    for (auto const& r : out) {
        std::cout << (o.format == "csv" ? verify::to_csv(r) : verify::to_jsonl(r)) << "\n";
        seconds += r.seconds;
        switch (r.status) {
        case verify::Status::match:
            ++match;
            break;
        case verify::Status::mismatch:
            ++mismatch;
            std::cerr << "MISMATCH d=" << r.id.d << " mf=" << r.id.mf << " minf=" << r.id.minf << " S=" << verify::s_field(r.id.S)
                      << " lhs=" << r.lhs << " rhs=" << r.rhs << " " << r.detail << "\n";
            break;
        case verify::Status::skipped:
            ++skipped;
            std::cerr << "skip d=" << r.id.d << " mf=" << r.id.mf << ": " << r.detail << "\n";
            break;
        }
        if (o.explain && r.status != verify::Status::skipped && !r.detail.empty())
            std::cerr << "d=" << r.id.d << " mf=" << r.id.mf << " minf=" << r.id.minf << " " << r.detail << " ("
                      << r.seconds << "s)\n";
    }
    std::cerr << "cases=" << out.size() << " match=" << match << " mismatch=" << mismatch << " skipped=" << skipped
              << " cpu_seconds=" << seconds << "\n";
    if (mismatch)
        return 2;
    return skipped ? 3 : 0;
}

void common(CLI::App* app, Options& o)
{
    app->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "jsonl"}));
    app->add_option("--jobs,-j", o.jobs, "worker threads")->check(CLI::Range(1U, 1024U));
    app->add_flag("--explain", o.explain, "print the factor breakdown of each case to stderr");
}

void ranges(CLI::App* app, Options& o)
{
    app->add_option("--d-from", o.d_from, "smallest discriminant");
    app->add_option("--d-to", o.d_to, "largest discriminant");
}

void ray_options(CLI::App* app, Options& o)
{
    app->add_option("--modulus", o.modulus, "finite part m_f of the modulus")->check(CLI::PositiveNumber);
    app->add_flag("--infinite-modulus", o.infinite, "include the real place in the modulus");
    app->add_option("--s-primes", o.s_primes, "finite primes of S")->delimiter(',');
    app->add_option("--cache-dir", o.cache_dir, "directory for cached ray class oracles (empty disables)");
    app->add_option("--budget", o.budget, "oracle ideal budget (default: CGRAS_BUDGET or built-in)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Verification of ambiguous class number formulas for quadratic fields"};
    app.require_subcommand(1);
    Options o;

    auto* chev = app.add_subcommand("verify-chevalley", "two-torsion of the (narrow) S-class group");
    ranges(chev, o);
    common(chev, o);
    bool ordinary = false;
    auto* nflag = chev->add_flag("--narrow", "narrow class group (default)");
    chev->add_flag("--ordinary", ordinary, "ordinary class group")->excludes(nflag);
    chev->add_option("--s-primes", o.s_primes, "finite primes of S")->delimiter(',');

    auto* red = app.add_subcommand("verify-redei", "4-rank of the narrow class group");
    ranges(red, o);
    common(red, o);

    auto* gr = app.add_subcommand("verify-gras", "ambiguous classes of ray class groups modulo a submodule");
    ranges(gr, o);
    common(gr, o);
    ray_options(gr, o);
    gr->add_option("--d", o.d, "single discriminant");
    gr->add_option("--submodule", o.submodule, "submodule C")->check(CLI::IsMember({"trivial", "two-torsion", "ramified"}));

    auto* rc = app.add_subcommand("verify-rayclass", "ray class numbers against the unit index formula");
    ranges(rc, o);
    common(rc, o);
    ray_options(rc, o);
    rc->add_option("--d", o.d, "single discriminant");
    rc->add_flag("--base", o.base, "the base field Q instead of quadratic fields");
    rc->add_option("--mf-from", o.mf_from, "smallest m_f")->check(CLI::PositiveNumber);
    rc->add_option("--mf-to", o.mf_to, "largest m_f")->check(CLI::PositiveNumber);

    auto* cache = app.add_subcommand("cache", "inspect the oracle cache");
    cache->require_subcommand(1);
    auto* clist = cache->add_subcommand("list", "list cached oracles");
    auto* cclear = cache->add_subcommand("clear", "remove cached oracles");
    for (auto* c : {clist, cclear})
        c->add_option("--cache-dir", o.cache_dir, "cache directory")->required();

    CLI11_PARSE(app, argc, argv);
    o.narrow = !ordinary;

    try {
        std::vector<std::function<Record()>> jobs;
        if (chev->parsed()) {
            for (i64 d : discriminants(o))
                jobs.push_back([d, &o] { return verify::chevalley(d, o.narrow, o.s_primes); });
            return run(jobs, o);
        }
        if (red->parsed()) {
            for (i64 d : discriminants(o))
                jobs.push_back([d] { return verify::redei(d); });
            return run(jobs, o);
        }
        if (gr->parsed()) {
            verify::OracleCache cache_(o.cache_dir, budget_from(o));
            auto spec = rayoracle::SubmoduleSpec::parse(o.submodule);
            Modulus m(o.modulus, o.infinite);
            for (i64 d : discriminants(o))
                jobs.push_back([d, m, spec, &o, &cache_] { return verify::gras(d, m, o.s_primes, spec, cache_); });
            return run(jobs, o);
        }
        if (rc->parsed()) {
            verify::OracleCache cache_(o.cache_dir, budget_from(o));
            std::vector<i64> ds = o.base ? std::vector<i64>{1} : discriminants(o);
            for (i64 d : ds)
                for (i64 mf : moduli(o))
                    jobs.push_back([d, mf, &o, &cache_] { return verify::rayclass(d, Modulus(mf, o.infinite), o.s_primes, cache_); });
            return run(jobs, o);
        }
        verify::OracleCache cache_(o.cache_dir);
        if (clist->parsed()) {
            for (auto const& f : cache_.list())
                std::cout << f << "\n";
            return 0;
        }
        if (cclear->parsed()) {
            std::cout << "removed " << cache_.clear() << "\n";
            return 0;
        }
    } catch (CLI::ValidationError const& e) {
        return app.exit(e);
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
