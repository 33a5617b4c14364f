#ifndef CGRAS_QUADFORMS_HPP
#define CGRAS_QUADFORMS_HPP

// Primitive binary quadratic forms of fundamental discriminant d, their
// reduction and composition, the narrow class group they realize, and
// fundamental units of real quadratic fields.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cgras/arith.hpp"
#include "cgras/finite_group.hpp"
#include "cgras/modulus.hpp"

namespace cgras::quadforms {

/* a x^2 + b x y + c y^2 */
struct QuadraticForm {
    i64 a = 1, b = 0, c = 0;

    i64 discriminant() const { return b * b - 4 * a * c; }
    bool primitive() const { return std::gcd(std::gcd(a, b), c) == 1; }

    std::string to_string() const
    {
        return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
    }

    friend bool operator==(QuadraticForm const&, QuadraticForm const&) = default;
    friend auto operator<=>(QuadraticForm const&, QuadraticForm const&) = default;
};

inline QuadraticForm make_form(i64 a, i64 b, i64 d)
{
    i128 num = static_cast<i128>(b) * b - d;
    if (a == 0 || num % (4 * static_cast<i128>(a)) != 0)
        throw std::invalid_argument("make_form: 4a does not divide b^2 - d");
    return {a, b, static_cast<i64>(num / (4 * static_cast<i128>(a)))};
}

inline QuadraticForm principal_form(i64 d)
{
    if (d < 0)
        return make_form(1, arith::mod(d, 4), d);
    // the one reduced form (1, b, .) of the principal cycle: b = r or r - 1
    i64 r = static_cast<i64>(arith::isqrt(static_cast<u64>(d)));
    i64 b = (arith::mod(r - d, 2) == 0) ? r : r - 1;
    return make_form(1, b, d);
}

namespace detail {

inline i64 isqrt_d(i64 d) { return static_cast<i64>(arith::isqrt(static_cast<u64>(d))); }

} // namespace detail

inline bool is_reduced(QuadraticForm const& f, i64 d)
{
    if (d < 0) {
        if (!(std::abs(f.b) <= f.a && f.a <= f.c))
            return false;
        if ((std::abs(f.b) == f.a || f.a == f.c) && f.b < 0)
            return false;
        return true;
    }
    const i64 r = detail::isqrt_d(d);
    const i64 a2 = 2 * std::abs(f.a);
    // |sqrt d - 2|a|| < b < sqrt d
    return f.b > 0 && f.b <= r && a2 + f.b >= r + 1 && a2 - f.b <= r;
}

/* One reduction step for indefinite forms: (a,b,c) -> (c, s, (s^2-d)/4c). */
inline QuadraticForm rho(QuadraticForm const& f, i64 d)
{
    const i64 r = detail::isqrt_d(d);
    const i64 c = f.c;
    const i64 m = 2 * std::abs(c);
    i64 s;
    if (std::abs(c) > r) {
        s = arith::mod(-f.b, m);
        if (s > std::abs(c))
            s -= m;
    } else {
        // largest s <= r with s = -b mod 2|c|
        s = r - arith::mod(r + f.b, m);
    }
    return make_form(c, s, d);
}

inline QuadraticForm reduce(QuadraticForm f, i64 d)
{
    if (f.discriminant() != d)
        throw std::invalid_argument("reduce: form " + f.to_string() + " has the wrong discriminant");
    if (d > 0) {
        int guard = 0;
        while (!is_reduced(f, d)) {
            f = rho(f, d);
            if (++guard > 100000)
                throw std::logic_error("reduce: no reduced form reached");
        }
        return f;
    }
    if (f.a < 0)
        throw std::invalid_argument("reduce: negative definite form");
    for (;;) {
        // b into (-a, a]
        i64 m = 2 * f.a;
        i64 b = arith::mod(f.b, m);
        if (b > f.a)
            b -= m;
        f = make_form(f.a, b, d);
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        break;
    }
    if (f.b < 0 && (f.a == f.c || -f.b == f.a))
        f.b = -f.b;
    return f;
}

/* The rho-cycle of a reduced indefinite form. */
inline std::vector<QuadraticForm> cycle(QuadraticForm const& f, i64 d)
{
    std::vector<QuadraticForm> out{f};
    for (QuadraticForm g = rho(f, d); g != f; g = rho(g, d))
        out.push_back(g);
    return out;
}

/* Dirichlet composition of primitive forms of the same discriminant, reduced. */
inline QuadraticForm compose(QuadraticForm const& f, QuadraticForm const& g)
{
    const i64 d = f.discriminant();
    if (g.discriminant() != d)
        throw std::invalid_argument("compose: discriminants differ");
    const i64 s = (f.b + g.b) / 2;
    auto e1 = arith::ext_gcd(f.a, g.a);
    auto e2 = arith::ext_gcd(e1.g, s);
    const i64 e = e2.g;
    const i128 v = static_cast<i128>(e2.x) * e1.y;
    const i128 w = e2.y;
    const i64 a3 = (f.a / e) * (g.a / e);
    i128 b3 = g.b + 2 * static_cast<i128>(g.a / e) * (v * ((f.b - g.b) / 2) - w * g.c);
    i128 m = 2 * static_cast<i128>(a3);
    if (m < 0)
        m = -m;
    b3 %= m;
    if (b3 < 0)
        b3 += m;
    return reduce(make_form(a3, static_cast<i64>(b3), d), d);
}

/* Reduced forms, one per proper class (d < 0) or per cycle (d > 0); the
 * principal class comes first. */
inline std::vector<QuadraticForm> enumerate_reduced(Discriminant const& disc);

struct FundamentalUnit {
    // epsilon = (x + y sqrt d) / 2 with x^2 - d y^2 = 4 * norm
    mpz_class x, y;
    int norm = 1;
};

/* Smallest unit > 1, read off the continued fraction of omega. */
inline FundamentalUnit fundamental_unit(Discriminant const& disc)
{
    const i64 d = disc.value();
    if (d < 0)
        throw std::invalid_argument("fundamental_unit: d must be positive");
    const int delta = disc.delta();
    const i64 r = detail::isqrt_d(d);
    // omega = (P + sqrt d) / Q with Q | d - P^2
    i64 P = delta, Q = 2;
    mpz_class p_prev = 0, p_cur = 1, q_prev = 1, q_cur = 0;
    for (int it = 0; it < 10000000; ++it) {
        i64 a = (P + r) / Q;
        mpz_class p_next = a * p_cur + p_prev;
        mpz_class q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        P = a * Q - P;
        Q = (d - P * P) / Q;

        mpz_class x = delta ? mpz_class(2 * p_cur - q_cur) : mpz_class(2 * p_cur);
        mpz_class y = q_cur;
        mpz_class n = x * x - mpz_class(static_cast<long>(d)) * y * y;
        if (n == 4 || n == -4) {
            if (x < 0)
                continue;
            return {x, y, n > 0 ? 1 : -1};
        }
    }
    throw std::logic_error("fundamental_unit: continued fraction did not close");
}

/* Narrow class group realized on reduced representatives. */
class ClassGroup {
public:
    using Elem = std::uint32_t;

    explicit ClassGroup(Discriminant const& disc) : disc_(disc)
    {
        const i64 d = disc.value();
        if (d < 0) {
            for (auto const& f : enumerate_all_reduced_negative(d))
                reps_.push_back(f);
            for (Elem i = 0; i < reps_.size(); ++i)
                lookup_[key(reps_[i])] = i;
        } else {
            auto all = enumerate_all_reduced_positive(d);
            std::map<std::pair<i64, i64>, bool> seen;
            std::vector<std::vector<QuadraticForm>> cycles;
            for (auto const& f : all) {
                if (seen.count(key(f)))
                    continue;
                auto cyc = cycle(f, d);
                for (auto const& g : cyc)
                    seen[key(g)] = true;
                cycles.push_back(std::move(cyc));
            }
            // canonical member: positive a first, then small |a|, then small b
            auto rank = [](QuadraticForm const& f) { return std::tuple(f.a < 0, std::abs(f.a), f.b); };
            std::vector<std::pair<QuadraticForm, std::size_t>> canon;
            for (std::size_t i = 0; i < cycles.size(); ++i) {
                auto best = *std::min_element(cycles[i].begin(), cycles[i].end(),
                                              [&](auto const& x, auto const& y) { return rank(x) < rank(y); });
                canon.emplace_back(best, i);
            }
            std::sort(canon.begin(), canon.end(),
                      [&](auto const& x, auto const& y) { return rank(x.first) < rank(y.first); });
            for (auto const& [f, ci] : canon) {
                Elem idx = static_cast<Elem>(reps_.size());
                reps_.push_back(f);
                for (auto const& g : cycles[ci])
                    lookup_[key(g)] = idx;
            }
        }
        if (reps_.empty() || index_of(principal_form(d)) != 0)
            throw std::logic_error("ClassGroup: principal class is not first");
    }

    Discriminant const& discriminant() const { return disc_; }
    std::size_t order() const { return reps_.size(); }
    QuadraticForm const& form(Elem i) const { return reps_.at(i); }
    std::vector<QuadraticForm> const& forms() const { return reps_; }

    Elem index_of(QuadraticForm const& f) const
    {
        if (!f.primitive())
            throw std::invalid_argument("index_of: form is not primitive");
        auto g = reduce(f, disc_.value());
        auto it = lookup_.find(key(g));
        if (it == lookup_.end())
            throw std::logic_error("index_of: reduced form " + g.to_string() + " not enumerated");
        return it->second;
    }

    Elem mul(Elem i, Elem j) const { return index_of(compose(reps_[i], reps_[j])); }

    Elem power(Elem x, u64 k) const
    {
        Elem r = 0, base = x;
        while (k) {
            if (k & 1)
                r = mul(r, base);
            base = mul(base, base);
            k >>= 1;
        }
        return r;
    }

    Elem inverse(Elem x) const
    {
        auto const& f = reps_[x];
        return index_of({f.a, -f.b, f.c});
    }

    std::size_t element_order(Elem x) const
    {
        std::size_t k = 1;
        for (Elem y = x; y != 0; y = mul(y, x))
            ++k;
        return k;
    }

    /* Class of (-1, b, -c) for the principal (1, b, c): trivial iff some unit
     * has norm -1. Identity for d < 0. */
    Elem negation_class() const
    {
        if (disc_.value() < 0)
            return 0;
        auto p = principal_form(disc_.value());
        return index_of({-p.a, p.b, -p.c});
    }

    std::vector<bool> subgroup(std::vector<Elem> const& gens) const
    {
        std::vector<bool> in(order(), false);
        std::vector<Elem> members{0};
        in[0] = true;
        for (std::size_t i = 0; i < members.size(); ++i)
            for (Elem g : gens) {
                Elem x = mul(members[i], g);
                if (!in[x]) {
                    in[x] = true;
                    members.push_back(x);
                }
            }
        return in;
    }

    struct QuotientCounts {
        std::size_t order = 1;
        std::size_t two_torsion = 1;
        std::size_t four_torsion = 1;
    };

    /* Order and 2-, 4-torsion sizes of the quotient by <gens>, by exhaustion. */
    QuotientCounts quotient_counts(std::vector<Elem> const& gens) const
    {
        auto h = subgroup(gens);
        std::size_t hsize = CayleyGroup::count(h);
        std::size_t two = 0, four = 0;
        for (Elem x = 0; x < order(); ++x) {
            Elem x2 = mul(x, x);
            if (h[x2])
                ++two;
            if (h[mul(x2, x2)])
                ++four;
        }
        return {order() / hsize, two / hsize, four / hsize};
    }

    /* Full Cayley table; quadratic in the class number. */
    CayleyGroup cayley() const
    {
        const std::size_t n = order();
        std::vector<CayleyGroup::Elem> t(n * n);
        for (Elem i = 0; i < n; ++i)
            for (Elem j = i; j < n; ++j)
                t[i * n + j] = t[j * n + i] = mul(i, j);
        return {n, std::move(t)};
    }

    /* Every reduced form of discriminant d (d > 0: all cycle members). */
    static std::vector<QuadraticForm> enumerate_all_reduced_positive(i64 d)
    {
        std::vector<QuadraticForm> out;
        const i64 r = detail::isqrt_d(d);
        for (i64 b = 1; b <= r; ++b) {
            if (arith::mod(b - d, 2) != 0)
                continue;
            const i64 n = (d - b * b) / 4;
            for (i64 a = 1; a * a <= n; ++a) {
                if (n % a != 0)
                    continue;
                for (i64 aa : {a, n / a}) {
                    if (2 * aa + b < r + 1 || 2 * aa - b > r)
                        continue;
                    for (int sgn : {1, -1}) {
                        QuadraticForm f{sgn * aa, b, -sgn * (n / aa)};
                        if (f.primitive() && std::find(out.begin(), out.end(), f) == out.end())
                            out.push_back(f);
                    }
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    static std::vector<QuadraticForm> enumerate_all_reduced_negative(i64 d)
    {
        std::vector<QuadraticForm> out;
        for (i64 a = 1; 3 * a * a <= -d; ++a)
            for (i64 b = -a + 1; b <= a; ++b) {
                if (arith::mod(b - d, 2) != 0)
                    continue;
                i64 num = b * b - d;
                if (num % (4 * a) != 0)
                    continue;
                QuadraticForm f{a, b, num / (4 * a)};
                if (f.c < a || (f.c == a && b < 0) || !f.primitive())
                    continue;
                out.push_back(f);
            }
        std::sort(out.begin(), out.end(), [](QuadraticForm const& x, QuadraticForm const& y) {
            return std::tuple(x.a, std::abs(x.b), -x.b) < std::tuple(y.a, std::abs(y.b), -y.b);
        });
        return out;
    }

private:
    static std::pair<i64, i64> key(QuadraticForm const& f) { return {f.a, f.b}; }

    Discriminant disc_;
    std::vector<QuadraticForm> reps_;
    std::map<std::pair<i64, i64>, Elem> lookup_;
};

inline std::vector<QuadraticForm> enumerate_reduced(Discriminant const& disc)
{
    return ClassGroup(disc).forms();
}

enum class UnitNorm { minus_one = -1, not_applicable = 0, plus_one = 1 };

struct ClassGroupSummary {
    i64 d = 0;
    std::size_t h_plus = 1;
    std::size_t h = 1;
    std::size_t two_torsion_plus = 1;
    std::size_t four_torsion_plus = 1;
    std::size_t two_torsion = 1;
    UnitNorm unit_norm = UnitNorm::not_applicable;
};

inline ClassGroupSummary class_group_summary(ClassGroup const& g)
{
    ClassGroupSummary s;
    s.d = g.discriminant().value();
    auto narrow = g.quotient_counts({});
    s.h_plus = narrow.order;
    s.two_torsion_plus = narrow.two_torsion;
    s.four_torsion_plus = narrow.four_torsion;
    if (s.d > 0) {
        s.unit_norm = fundamental_unit(g.discriminant()).norm > 0 ? UnitNorm::plus_one : UnitNorm::minus_one;
        // the ordinary group identifies f with -f
        auto ordinary = g.quotient_counts({g.negation_class()});
        s.h = ordinary.order;
        s.two_torsion = ordinary.two_torsion;
    } else {
        s.h = s.h_plus;
        s.two_torsion = s.two_torsion_plus;
    }
    return s;
}

inline ClassGroupSummary class_group_summary(Discriminant const& disc)
{
    return class_group_summary(ClassGroup(disc));
}

/* Class of a prime ideal above p as a form (p, b, .) with the least b >= 0,
 * b^2 = d mod 4p; nullopt when p is inert (pO_K is principal). */
inline std::optional<QuadraticForm> prime_to_class(u64 p, Discriminant const& disc)
{
    if (!arith::is_prime(p))
        throw std::invalid_argument("prime_to_class: " + std::to_string(p) + " is not prime");
    const i64 d = disc.value();
    const i64 pp = static_cast<i64>(p);
    if (arith::kronecker(d, pp) == -1)
        return std::nullopt;
    for (i64 b = 0; b < 2 * pp; ++b)
        if (arith::mod(static_cast<i128>(b) * b - d, 4 * pp) == 0)
            return reduce(make_form(pp, b, d), d);
    throw std::logic_error("prime_to_class: no square root of d mod 4p");
}

/* Classes of the ramified prime ideals. */
inline std::vector<ClassGroup::Elem> ramified_classes(ClassGroup const& g)
{
    std::vector<ClassGroup::Elem> out;
    for (u64 p : g.discriminant().ramified_primes())
        out.push_back(g.index_of(*prime_to_class(p, g.discriminant())));
    return out;
}

struct SClassCounts {
    std::size_t narrow_order = 1;
    std::size_t narrow_two_torsion = 1;
    std::size_t order = 1;
    std::size_t two_torsion = 1;
};

/* Cl+_{K,S} and Cl_{K,S}: quotients by the classes of primes above S. */
inline SClassCounts s_class_counts(ClassGroup const& g, PlaceSet const& S)
{
    std::vector<ClassGroup::Elem> gens;
    for (u64 p : S.finite_primes())
        if (auto f = prime_to_class(p, g.discriminant()))
            gens.push_back(g.index_of(*f));
    SClassCounts out;
    auto narrow = g.quotient_counts(gens);
    out.narrow_order = narrow.order;
    out.narrow_two_torsion = narrow.two_torsion;
    gens.push_back(g.negation_class());
    auto ordinary = g.quotient_counts(gens);
    out.order = ordinary.order;
    out.two_torsion = ordinary.two_torsion;
    return out;
}

inline SClassCounts s_class_counts(Discriminant const& disc, PlaceSet const& S)
{
    return s_class_counts(ClassGroup(disc), S);
}

} // namespace cgras::quadforms

#endif
