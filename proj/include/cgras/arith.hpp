#ifndef CGRAS_ARITH_HPP
#define CGRAS_ARITH_HPP

// Exact 64-bit integer arithmetic: factorization, residue symbols and
// fundamental discriminants.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgras {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/* A computation needed more than the configured search budget. */
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace arith {

/* Non-negative remainder. */
inline i64 mod(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mod(int a, i64 m) { return mod(static_cast<i64>(a), m); }

inline i64 mod(i128 a, i64 m)
{
    i128 r = a % m;
    return static_cast<i64>(r < 0 ? r + m : r);
}

inline u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m)
{
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/* floor(sqrt(n)) */
inline u64 isqrt(u64 n)
{
    if (n < 2)
        return n;
    u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
    while (static_cast<u128>(r) * r > n)
        --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

inline bool is_square(i64 n, i64* root = nullptr)
{
    if (n < 0)
        return false;
    u64 r = isqrt(static_cast<u64>(n));
    if (root)
        *root = static_cast<i64>(r);
    return static_cast<u128>(r) * r == static_cast<u64>(n);
}

struct ExtGcd {
    i64 g, x, y; // g = x*a + y*b, g >= 0
};

inline ExtGcd ext_gcd(i64 a, i64 b)
{
    i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    if (old_r < 0)
        return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

/* Inverse of a modulo m (m >= 1); throws when gcd(a, m) != 1. */
inline i64 inverse_mod(i64 a, i64 m)
{
    if (m == 1)
        return 0;
    auto [g, x, y] = ext_gcd(mod(a, m), m);
    (void)y;
    if (g != 1)
        throw std::invalid_argument("inverse_mod: not invertible");
    return mod(x, m);
}

/* p-adic valuation of a nonzero integer. */
inline int valuation(i64 n, i64 p)
{
    if (n == 0)
        throw std::invalid_argument("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline i64 ipow(i64 base, int exp)
{
    i64 r = 1;
    while (exp-- > 0)
        r *= base;
    return r;
}

/* Deterministic Miller-Rabin, exact for all 64-bit inputs. */
inline bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

namespace detail {

// Brent's variant of Pollard rho; n must be odd and composite.
inline u64 rho_split(u64 n)
{
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        const u64 m = 128;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i)
                y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

inline void collect_primes(u64 n, std::vector<u64>& out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 f = rho_split(n);
    collect_primes(f, out);
    collect_primes(n / f, out);
}

} // namespace detail

struct PrimePower {
    u64 prime;
    int exponent;
    friend bool operator==(PrimePower const&, PrimePower const&) = default;
};

struct Factorization {
    i64 value = 1;
    int sign = 1;
    std::vector<PrimePower> factors; // strictly increasing primes

    /* Recomposes sign * prod p^e; only meaningful when it fits in 64 bits. */
    i64 recompose() const
    {
        i128 r = sign;
        for (auto const& [p, e] : factors)
            for (int i = 0; i < e; ++i)
                r *= static_cast<i128>(p);
        return static_cast<i64>(r);
    }

    bool squarefree() const
    {
        return std::all_of(factors.begin(), factors.end(),
                           [](PrimePower const& f) { return f.exponent == 1; });
    }

    std::vector<u64> primes() const
    {
        std::vector<u64> ps;
        for (auto const& f : factors)
            ps.push_back(f.prime);
        return ps;
    }
};

inline Factorization factorize(i64 n)
{
    if (n == 0)
        throw std::invalid_argument("factorize: zero has no factorization");
    Factorization fac;
    fac.value = n;
    fac.sign = n < 0 ? -1 : 1;
    u64 m = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);

    std::vector<u64> primes;
    for (u64 p = 2; p < 1000 && p * p <= m; p += (p == 2 ? 1 : 2)) {
        while (m % p == 0) {
            primes.push_back(p);
            m /= p;
        }
    }
    if (m > 1)
        detail::collect_primes(m, primes);
    std::sort(primes.begin(), primes.end());
    for (u64 p : primes) {
        if (!fac.factors.empty() && fac.factors.back().prime == p)
            ++fac.factors.back().exponent;
        else
            fac.factors.push_back({p, 1});
    }
    return fac;
}

inline i64 euler_phi(i64 n)
{
    if (n <= 0)
        throw std::invalid_argument("euler_phi: n must be positive");
    i64 phi = n;
    for (auto const& [p, e] : factorize(n).factors) {
        (void)e;
        phi = phi / static_cast<i64>(p) * (static_cast<i64>(p) - 1);
    }
    return phi;
}

/* Kronecker symbol (a|n). */
inline int kronecker(i64 a, i64 n)
{
    if (a == 0 && n == 0)
        throw std::invalid_argument("kronecker: (0|0) is undefined");
    if (n == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    if ((a % 2 == 0) && (n % 2 == 0))
        return 0;

    i128 aa = a, nn = n;
    int result = 1;
    int v = 0;
    while (nn % 2 == 0) {
        nn /= 2;
        ++v;
    }
    if (v & 1) {
        int a8 = static_cast<int>(((aa % 8) + 8) % 8);
        if (a8 == 3 || a8 == 5)
            result = -result;
    }
    if (nn < 0) {
        nn = -nn;
        if (aa < 0)
            result = -result;
    }
    // Jacobi symbol (aa|nn) with nn odd positive.
    aa %= nn;
    if (aa < 0)
        aa += nn;
    while (aa != 0) {
        while (aa % 2 == 0) {
            aa /= 2;
            int n8 = static_cast<int>(nn % 8);
            if (n8 == 3 || n8 == 5)
                result = -result;
        }
        std::swap(aa, nn);
        if (aa % 4 == 3 && nn % 4 == 3)
            result = -result;
        aa %= nn;
    }
    return nn == 1 ? result : 0;
}

/* A square root of a modulo an odd prime p (Tonelli-Shanks); a must be a residue. */
inline i64 sqrt_mod_prime(i64 a, i64 p)
{
    const u64 P = static_cast<u64>(p);
    u64 n = static_cast<u64>(mod(a, p));
    if (n == 0)
        return 0;
    if (powmod(n, (P - 1) / 2, P) != 1)
        throw std::invalid_argument("sqrt_mod_prime: not a quadratic residue");
    if (P % 4 == 3)
        return static_cast<i64>(powmod(n, (P + 1) / 4, P));
    u64 q = P - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    u64 z = 2;
    while (powmod(z, (P - 1) / 2, P) != P - 1)
        ++z;
    u64 c = powmod(z, q, P), r = powmod(n, (q + 1) / 2, P), t = powmod(n, q, P);
    int m = s;
    while (t != 1) {
        int i = 0;
        for (u64 tt = t; tt != 1; tt = mulmod(tt, tt, P))
            ++i;
        u64 b = c;
        for (int j = 0; j < m - i - 1; ++j)
            b = mulmod(b, b, P);
        r = mulmod(r, b, P);
        c = mulmod(b, b, P);
        t = mulmod(t, c, P);
        m = i;
    }
    return static_cast<i64>(r);
}

/* x = a1 mod m1, x = a2 mod m2 with coprime moduli; result in [0, m1 m2). */
inline i64 crt(i64 a1, i64 m1, i64 a2, i64 m2)
{
    i64 m = m1 * m2;
    i64 t = static_cast<i64>(static_cast<i128>(mod(a2 - a1, m2)) * inverse_mod(mod(m1, m2), m2) % m2);
    return mod(static_cast<i128>(a1) + static_cast<i128>(m1) * t, m);
}

inline bool is_fundamental(i64 d)
{
    if (d == 0 || d == 1)
        return false;
    i64 r = mod(d, 4);
    if (r == 1)
        return factorize(d).squarefree();
    if (r == 0) {
        i64 m = d / 4;
        i64 rm = mod(m, 4);
        return (rm == 2 || rm == 3) && factorize(m).squarefree();
    }
    return false;
}

namespace detail {

inline i64 odd_prime_discriminant(u64 p)
{
    i64 pp = static_cast<i64>(p);
    return (p % 4 == 1) ? pp : -pp;
}

} // namespace detail

/* Discriminant of a quadratic field, with its ramified primes and the
 * factorization d = prod p* into prime discriminants. */
class Discriminant {
public:
    explicit Discriminant(i64 d) : d_(d)
    {
        if (!is_fundamental(d))
            throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(d));
        ramified_ = factorize(d).primes();
        i64 odd_product = 1;
        for (u64 p : ramified_)
            if (p != 2)
                odd_product *= detail::odd_prime_discriminant(p);
        for (u64 p : ramified_) {
            if (p == 2) {
                i64 two_star = d / odd_product;
                if (two_star != -4 && two_star != 8 && two_star != -8)
                    throw std::logic_error("2* outside {-4, 8, -8}");
                prime_discs_.push_back(two_star);
            } else {
                prime_discs_.push_back(detail::odd_prime_discriminant(p));
            }
        }
    }

    i64 value() const { return d_; }
    std::vector<u64> const& ramified_primes() const { return ramified_; }
    std::vector<i64> const& prime_discriminants() const { return prime_discs_; }
    int t() const { return static_cast<int>(ramified_.size()); }
    bool is_real() const { return d_ > 0; }
    /* 0 when d = 0 mod 4, 1 when d = 1 mod 4 */
    int delta() const { return static_cast<int>(mod(d_, 4)); }

    bool ramified(u64 p) const
    {
        return std::find(ramified_.begin(), ramified_.end(), p) != ramified_.end();
    }

    friend bool operator==(Discriminant const& a, Discriminant const& b) { return a.d_ == b.d_; }

private:
    i64 d_;
    std::vector<u64> ramified_;
    std::vector<i64> prime_discs_;
};

inline std::vector<i64> prime_discriminants(Discriminant const& d)
{
    return d.prime_discriminants();
}

inline std::vector<i64> prime_discriminants(i64 d)
{
    return Discriminant(d).prime_discriminants();
}

/* All fundamental discriminants in [from, to], ascending. */
inline std::vector<i64> fundamental_discriminants(i64 from, i64 to)
{
    std::vector<i64> out;
    for (i64 d = from; d <= to; ++d)
        if (is_fundamental(d))
            out.push_back(d);
    return out;
}

/* Nonzero rational in lowest terms with positive denominator. */
struct Rational {
    i64 num = 1;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n) : num(n), den(1) {} // NOLINT(google-explicit-constructor)
    Rational(i64 n, i64 d) : num(n), den(d)
    {
        if (d == 0)
            throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i64 g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend bool operator==(Rational const&, Rational const&) = default;
};

} // namespace arith

using arith::Discriminant;
using arith::Rational;

} // namespace cgras

#endif
