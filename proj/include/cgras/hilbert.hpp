#ifndef CGRAS_HILBERT_HPP
#define CGRAS_HILBERT_HPP

// Quadratic Hilbert symbols over Q, the Hasse norm test, and the local
// norm groups N(1 + p^k O_w) for quadratic fields, computed at a finite
// p-adic precision that is raised until the index stops moving.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "cgras/arith.hpp"
#include "cgras/modulus.hpp"

namespace cgras::hilbert {

using arith::Rational;

struct Place {
    enum class Kind { finite, real_infinite };
    Kind kind = Kind::real_infinite;
    u64 p = 0;

    static Place finite(u64 p)
    {
        if (!arith::is_prime(p))
            throw std::invalid_argument("Place::finite: " + std::to_string(p) + " is not prime");
        return {Kind::finite, p};
    }
    static Place infinity() { return {Kind::real_infinite, 0}; }

    bool is_infinite() const { return kind == Kind::real_infinite; }

    std::string to_string() const { return is_infinite() ? "inf" : std::to_string(p); }

    friend bool operator==(Place const&, Place const&) = default;
    friend auto operator<=>(Place const& a, Place const& b)
    {
        // finite places first, by prime; infinity last
        return std::tuple(a.is_infinite(), a.p) <=> std::tuple(b.is_infinite(), b.p);
    }
};

namespace detail {

inline int integer_symbol(i64 a, i64 b, Place const& v)
{
    if (v.is_infinite())
        return (a < 0 && b < 0) ? -1 : 1;
    const i64 p = static_cast<i64>(v.p);
    int alpha = 0, beta = 0;
    while (a % p == 0) { a /= p; ++alpha; }
    while (b % p == 0) { b /= p; ++beta; }
    if (p != 2) {
        int r = 1;
        if ((alpha & beta & 1) && p % 4 == 3)
            r = -r;
        if (beta & 1)
            r *= arith::kronecker(a, p);
        if (alpha & 1)
            r *= arith::kronecker(b, p);
        return r;
    }
    auto eps = [](i64 u) { return arith::mod(u, 4) == 3 ? 1 : 0; };
    auto omega = [](i64 u) {
        i64 r = arith::mod(u, 8);
        return (r == 3 || r == 5) ? 1 : 0;
    };
    int e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
    return (e & 1) ? -1 : 1;
}

} // namespace detail

/* (a, b)_v in {-1, 1} */
inline int hilbert_symbol(Rational const& a, Rational const& b, Place const& v)
{
    if (a.num == 0 || b.num == 0)
        throw std::invalid_argument("hilbert_symbol: arguments must be nonzero");
    // (n/m, b) = (nm, b) = (n, b)(m, b), and likewise in b
    int r = 1;
    for (i64 x : {a.num, a.den})
        for (i64 y : {b.num, b.den})
            r *= detail::integer_symbol(x, y, v);
    return r;
}

/* Finite places where (x, d)_v can be nontrivial, together with infinity. */
inline std::vector<Place> relevant_places(std::vector<Rational> const& xs, i64 d)
{
    std::set<u64> primes{2};
    auto add = [&](i64 n) {
        if (n != 1 && n != -1)
            for (u64 p : arith::factorize(n).primes())
                primes.insert(p);
    };
    add(d);
    for (auto const& x : xs) {
        add(x.num);
        add(x.den);
    }
    std::vector<Place> places;
    for (u64 p : primes)
        places.push_back(Place::finite(p));
    places.push_back(Place::infinity());
    return places;
}

/* Hasse: x is a norm from Q(sqrt d) iff it is a local norm everywhere. */
inline bool is_global_norm(Rational const& x, Discriminant const& d)
{
    for (auto const& v : relevant_places({x}, d.value()))
        if (hilbert_symbol(x, Rational(d.value()), v) != 1)
            return false;
    return true;
}

struct LocalNormIndexReport {
    u64 p = 0;
    int m_exponent = 0;
    u64 index = 1;
    int truncation_level = 0;
    bool stabilized = false;
};

class StabilizationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/*
 * The subgroup N(1 + p^k O_w) of 1 + p^k Z_p, seen modulo p^M, for
 * K = Q(sqrt d) and p | m_f. O_K (x) Z_p = Z_p[omega] with the global
 * generator omega = (delta + sqrt d)/2, so the same model serves split,
 * inert and ramified p alike.
 *
 * The quotient (1 + p^k Z_p)/N(1 + p^k O_w) has exponent 2 (squares are
 * norms). For odd p it is also a p-group, hence trivial; for p = 2 we keep
 * an explicit residue table mod 2^M and an F2 basis of the quotient.
 */
class LocalNormImage {
public:
    static constexpr int max_extra_levels = 12;

    LocalNormImage(Discriminant const& d, u64 p, int k) : p_(p), k_(k)
    {
        if (k < 1)
            throw std::invalid_argument("LocalNormImage: exponent must be positive");
        if (!arith::is_prime(p))
            throw std::invalid_argument("LocalNormImage: p must be prime");
        delta_ = d.delta();
        q_ = (d.value() - delta_) / 4;
        split_ = arith::kronecker(d.value(), static_cast<i64>(p)) == 1;
        if (split_) {
            // the norm map on (1 + p^k Z_p)^2 is onto
            index_ = 1;
            level_ = 0;
            stabilized_ = true;
            return;
        }
        const int v = arith::valuation(4 * d.value(), static_cast<i64>(p));
        const int start = 2 * k + v + 2;
        u64 prev = compute(start);
        for (int m = start + 1; m <= start + max_extra_levels; ++m) {
            u64 cur = compute(m);
            if (cur == prev) {
                stabilized_ = true;
                break;
            }
            prev = cur;
        }
        if (!stabilized_)
            throw StabilizationFailure("local norm index did not stabilize at p = " + std::to_string(p));
        build_basis();
    }

    u64 index() const { return index_; }
    int level() const { return level_; }
    bool split() const { return split_; }
    int rank() const { return static_cast<int>(basis_.size()); }

    LocalNormIndexReport report() const { return {p_, k_, index_, level_, stabilized_}; }

    /* x must lie in 1 + p^k Z_p */
    bool contains(Rational const& x) const
    {
        return label(x) == 0;
    }

    /* F2 coordinates of x in (1 + p^k Z_p)/N(1 + p^k O_w). */
    std::vector<std::uint8_t> coordinates(Rational const& x) const
    {
        std::uint32_t l = label(x);
        std::vector<std::uint8_t> out(basis_.size());
        for (std::size_t i = 0; i < basis_.size(); ++i)
            out[i] = (l >> i) & 1U;
        return out;
    }

    /* Same, for x already reduced modulo p^level(). */
    std::vector<std::uint8_t> coordinates_of_residue(i64 r) const
    {
        std::uint32_t l = label_of_residue(r);
        std::vector<std::uint8_t> out(basis_.size());
        for (std::size_t i = 0; i < basis_.size(); ++i)
            out[i] = (l >> i) & 1U;
        return out;
    }

    i64 precision_modulus() const { return pm_; }

    /* Norm N(1 + p^k (x + y omega)) reduced mod p^M; exposed for tests. */
    static i64 unit_norm(i64 x, i64 y, int delta, i64 q, i64 pk, i64 pm)
    {
        i128 u = 1 + static_cast<i128>(pk) * x;
        i128 w = static_cast<i128>(pk) * y;
        u %= pm;
        w %= pm;
        i128 n = (u * u) % pm + (static_cast<i128>(delta) * u % pm) * w % pm - (static_cast<i128>(q) * w % pm) * w % pm;
        return arith::mod(n, pm);
    }

private:
    // index of the image at precision p^m; leaves the state describing that level
    u64 compute(int m)
    {
        level_ = m;
        pm_ = arith::ipow(static_cast<i64>(p_), m);
        const i64 pk = arith::ipow(static_cast<i64>(p_), k_);
        std::vector<i64> gens;
        for (int j = k_; j < m; ++j) {
            i64 pj = arith::ipow(static_cast<i64>(p_), j);
            gens.push_back(unit_norm(pj / pk, 0, delta_, q_, pk, pm_));
            gens.push_back(unit_norm(0, pj / pk, delta_, q_, pk, pm_));
        }
        const u64 h_order = static_cast<u64>(pm_ / pk);
        if (p_ != 2) {
            // 1 + p^k Z / p^m is cyclic; the image is the subgroup of the largest order
            u64 best = 1;
            for (i64 g : gens) {
                u64 ord = 1;
                i64 x = g;
                while (x != 1) {
                    x = static_cast<i64>(arith::powmod(static_cast<u64>(x), p_, static_cast<u64>(pm_)));
                    ord *= p_;
                }
                best = std::max(best, ord);
            }
            image_order_ = best;
            index_ = h_order / best;
            return index_;
        }
        image_.assign(static_cast<std::size_t>(pm_), false);
        std::vector<i64> members{1};
        image_[1] = true;
        for (std::size_t i = 0; i < members.size(); ++i)
            for (i64 g : gens) {
                i64 y = static_cast<i64>(arith::mulmod(static_cast<u64>(members[i]), static_cast<u64>(g), static_cast<u64>(pm_)));
                if (!image_[static_cast<std::size_t>(y)]) {
                    image_[static_cast<std::size_t>(y)] = true;
                    members.push_back(y);
                }
            }
        image_order_ = members.size();
        index_ = h_order / image_order_;
        return index_;
    }

    void build_basis()
    {
        if (split_)
            return;
        if (p_ != 2) {
            if (index_ != 1)
                throw std::logic_error("odd local norm quotient should be trivial");
            return;
        }
        const i64 pk = arith::ipow(2, k_);
        labels_.assign(static_cast<std::size_t>(pm_), unlabeled);
        std::vector<i64> norms;
        for (i64 r = 0; r < pm_; ++r)
            if (image_[static_cast<std::size_t>(r)]) {
                norms.push_back(r);
                labels_[static_cast<std::size_t>(r)] = 0;
            }
        for (i64 y = 1; y < pm_; y += pk) {
            if (labels_[static_cast<std::size_t>(y)] != unlabeled)
                continue;
            const std::uint32_t bit = 1U << basis_.size();
            basis_.push_back(y);
            // span <- span + y * span
            std::vector<std::pair<i64, std::uint32_t>> fresh;
            for (i64 z = 0; z < pm_; ++z) {
                auto l = labels_[static_cast<std::size_t>(z)];
                if (l == unlabeled)
                    continue;
                i64 t = static_cast<i64>(arith::mulmod(static_cast<u64>(z), static_cast<u64>(y), static_cast<u64>(pm_)));
                fresh.emplace_back(t, l | bit);
            }
            for (auto [t, l] : fresh)
                labels_[static_cast<std::size_t>(t)] = l;
        }
        if ((u64{1} << basis_.size()) != index_)
            throw std::logic_error("local norm quotient is not elementary abelian");
    }

    std::uint32_t label(Rational const& x) const
    {
        if (split_ || p_ != 2 || index_ == 1)
            return 0;
        i64 num = arith::mod(x.num, pm_);
        i64 den = arith::mod(x.den, pm_);
        i64 r = static_cast<i64>(arith::mulmod(static_cast<u64>(num), static_cast<u64>(arith::inverse_mod(den, pm_)), static_cast<u64>(pm_)));
        return label_of_residue(r);
    }

    std::uint32_t label_of_residue(i64 r) const
    {
        if (split_ || p_ != 2 || index_ == 1)
            return 0;
        r = arith::mod(r, pm_);
        auto l = labels_[static_cast<std::size_t>(r)];
        if (l == unlabeled)
            throw std::invalid_argument("LocalNormImage: element not in 1 + p^k Z_p");
        return l;
    }

    static constexpr std::uint32_t unlabeled = ~std::uint32_t{0};

    u64 p_;
    int k_;
    int delta_ = 0;
    i64 q_ = 0;
    bool split_ = false;
    bool stabilized_ = false;
    int level_ = 0;
    i64 pm_ = 1;
    u64 index_ = 1;
    u64 image_order_ = 1;
    std::vector<bool> image_;
    std::vector<std::uint32_t> labels_;
    std::vector<i64> basis_;
};

/* Shared, read-only cache of local norm images keyed by (d, p, k). */
inline std::shared_ptr<const LocalNormImage> local_norm_image(Discriminant const& d, u64 p, int k)
{
    static std::mutex mu;
    static std::map<std::tuple<i64, u64, int>, std::shared_ptr<const LocalNormImage>> cache;
    auto key = std::tuple(d.value(), p, k);
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    auto img = std::make_shared<const LocalNormImage>(d, p, k);
    std::lock_guard lock(mu);
    return cache.emplace(key, img).first->second;
}

inline LocalNormIndexReport local_norm_index(Discriminant const& d, u64 p, int m_exp)
{
    return local_norm_image(d, p, m_exp)->report();
}

/* x in Q^m, i.e. x = 1 mod* m_f and x > 0 when m has its real place. */
inline bool in_ray(Rational const& x, Modulus const& m)
{
    if (m.infinite && x.num < 0)
        return false;
    if (m.finite == 1)
        return true;
    if (std::gcd(x.num, m.finite) != 1 || std::gcd(x.den, m.finite) != 1)
        return false;
    return arith::mod(x.num - x.den, m.finite) == 0;
}

/* x in N(K^m), decided by purely local conditions. */
inline bool is_ray_norm(Rational const& x, Discriminant const& d, Modulus const& m)
{
    if (!in_ray(x, m))
        throw std::invalid_argument("is_ray_norm: x does not satisfy the congruence/sign conditions of m");
    for (auto const& v : relevant_places({x}, d.value())) {
        if (!v.is_infinite() && m.finite % static_cast<i64>(v.p) == 0)
            continue;
        if (hilbert_symbol(x, Rational(d.value()), v) != 1)
            return false;
    }
    for (u64 p : m.primes())
        if (!local_norm_image(d, p, m.exponent(p))->contains(x))
            return false;
    return true;
}

} // namespace cgras::hilbert

#endif
