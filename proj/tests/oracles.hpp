#ifndef CGRAS_TESTS_ORACLES_HPP
#define CGRAS_TESTS_ORACLES_HPP

// Brute-force references shared by the unit tests and the acceptance suite.

#include <set>
#include <vector>

#include "cgras/hilbert.hpp"

namespace oracle {

using namespace cgras;
using hilbert::Place;

/* n != 0 is a square in Z_p */
inline bool is_padic_square(i64 n, i64 p)
{
    if (n == 0)
        return true;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    if (v % 2)
        return false;
    if (p == 2)
        return arith::mod(n, 8) == 1;
    i64 r = arith::mod(n, p);
    for (i64 x = 1; x < p; ++x)
        if (x * x % p == r)
            return true;
    return false;
}

/* z^2 = a x^2 + b y^2 has a nontrivial solution in Q_p, searched over
 * integer x, y in a box; a nonzero right side that is a p-adic square gives z. */
inline bool solvable(i64 a, i64 b, i64 p)
{
    const i64 box = p == 2 ? 64 : (p <= 7 ? p * p : p);
    for (i64 x = 0; x < box; ++x)
        for (i64 y = 0; y < box; ++y) {
            if (x == 0 && y == 0)
                continue;
            i64 n = a * x * x + b * y * y;
            if (n != 0 && is_padic_square(n, p))
                return true;
            if (n == 0)
                return true; // isotropic, hence universal
        }
    return false;
}

inline int product_over_places(Rational const& a, Rational const& b)
{
    int prod = 1;
    std::set<u64> ps{2};
    for (i64 v : {a.num, a.den, b.num, b.den})
        if (std::abs(v) > 1)
            for (u64 p : arith::factorize(v).primes())
                ps.insert(p);
    for (u64 p : ps)
        prod *= hilbert::hilbert_symbol(a, b, Place::finite(p));
    return prod * hilbert::hilbert_symbol(a, b, Place::infinity());
}

/* index of N(1 + p^k O) in 1 + p^k Z_p, modulo p^M, by listing every norm */
inline u64 brute_local_index(i64 d, i64 p, int k, int M)
{
    const i64 delta = arith::mod(d, 4), q = (d - delta) / 4;
    const i64 pk = arith::ipow(p, k), pm = arith::ipow(p, M), span = pm / pk;
    std::vector<bool> seen(static_cast<std::size_t>(pm), false);
    u64 count = 0;
    for (i64 x = 0; x < span; ++x)
        for (i64 y = 0; y < span; ++y) {
            i128 a = 1 + static_cast<i128>(pk) * x, b = static_cast<i128>(pk) * y;
            i128 n = a * a + delta * a * b - static_cast<i128>(q) * b * b;
            i64 r = static_cast<i64>(((n % pm) + pm) % pm);
            if (!seen[r]) {
                seen[r] = true;
                ++count;
            }
        }
    return static_cast<u64>(span) / count;
}

} // namespace oracle

#endif
