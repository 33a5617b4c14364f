#ifndef CGRAS_QUADFIELD_HPP
#define CGRAS_QUADFIELD_HPP

// Elements and ideals of the maximal order O_K = Z[omega] of K = Q(sqrt d),
// omega = (delta + sqrt d)/2, with omega^2 = delta*omega + q.

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgras/arith.hpp"
#include "cgras/quadforms.hpp"

namespace cgras::quadfield {

/* u + v*omega */
struct Element {
    i64 u = 0, v = 0;
    friend bool operator==(Element const&, Element const&) = default;
};

/* Z-basis {A, B + C*omega} in Hermite normal form: C | A, C | B, 0 <= B < A. */
struct Ideal {
    i64 A = 1, B = 0, C = 1;

    i64 norm() const { return A * C; }
    i64 content() const { return C; }
    std::string to_string() const
    {
        return "[" + std::to_string(A) + "," + std::to_string(B) + "+" + std::to_string(C) + "w]";
    }

    friend bool operator==(Ideal const&, Ideal const&) = default;
    friend auto operator<=>(Ideal const& x, Ideal const& y)
    {
        return std::tuple(x.norm(), x.A, x.B, x.C) <=> std::tuple(y.norm(), y.A, y.B, y.C);
    }
};

/* A unit of O_K with its residue mod m and its signs at the two real places. */
struct UnitImage {
    Element residue;
    int sign0 = 1, sign1 = 1;
};

class Field {
public:
    explicit Field(Discriminant const& disc) : disc_(disc)
    {
        d_ = disc.value();
        delta_ = disc.delta();
        q_ = (d_ - delta_) / 4;
        if (d_ > 0)
            unit_ = quadforms::fundamental_unit(disc);
    }

    Discriminant const& discriminant() const { return disc_; }
    i64 d() const { return d_; }
    int delta() const { return delta_; }
    i64 q() const { return q_; }
    quadforms::FundamentalUnit const& fundamental_unit() const
    {
        if (d_ < 0)
            throw std::logic_error("imaginary field has no fundamental unit");
        return unit_;
    }

    Element mul(Element const& x, Element const& y) const
    {
        i128 u = static_cast<i128>(x.u) * y.u + static_cast<i128>(q_) * x.v * y.v;
        i128 v = static_cast<i128>(x.u) * y.v + static_cast<i128>(x.v) * y.u + static_cast<i128>(delta_) * x.v * y.v;
        return {narrow(u), narrow(v)};
    }

    Element mul_mod(Element const& x, Element const& y, i64 m) const
    {
        i128 u = static_cast<i128>(x.u) * y.u + static_cast<i128>(q_) * x.v % m * y.v;
        i128 v = static_cast<i128>(x.u) * y.v + static_cast<i128>(x.v) * y.u + static_cast<i128>(delta_) * x.v * y.v;
        return {arith::mod(u, m), arith::mod(v, m)};
    }

    Element reduce_mod(Element const& x, i64 m) const { return {arith::mod(x.u, m), arith::mod(x.v, m)}; }

    Element conj(Element const& x) const { return {x.u + delta_ * x.v, -x.v}; }

    i128 norm(Element const& x) const
    {
        return static_cast<i128>(x.u) * x.u + static_cast<i128>(delta_) * x.u * x.v - static_cast<i128>(q_) * x.v * x.v;
    }

    /* Sign of x under the real embedding sqrt d -> +sqrt d (k = 0) or -sqrt d (k = 1). */
    int sign(Element const& x, int k) const
    {
        if (d_ < 0)
            throw std::logic_error("sign: field is imaginary");
        // 2x = X + Y sqrt d
        i128 X = 2 * static_cast<i128>(x.u) + static_cast<i128>(delta_) * x.v;
        i128 Y = k == 0 ? x.v : -x.v;
        if (X == 0 && Y == 0)
            throw std::invalid_argument("sign of zero");
        if (X >= 0 && Y >= 0)
            return 1;
        if (X <= 0 && Y <= 0)
            return -1;
        i128 lhs = X * X, rhs = static_cast<i128>(d_) * Y * Y;
        return lhs > rhs ? (X > 0 ? 1 : -1) : (Y > 0 ? 1 : -1);
    }

    /* Ideal spanned over Z by the given elements (must have rank 2). */
    Ideal lattice(std::vector<Element> const& gens) const
    {
        i128 A = 0, B = 0, C = 0;
        bool have = false;
        for (auto const& g : gens) {
            i128 x = g.u, y = g.v;
            if (y == 0) {
                A = gcd128(A, x);
                continue;
            }
            if (!have) {
                B = x;
                C = y;
                have = true;
                continue;
            }
            auto e = arith::ext_gcd(static_cast<i64>(C), static_cast<i64>(y));
            i128 nb = e.x * B + e.y * x;
            i128 other = (y / e.g) * B - (C / e.g) * x;
            B = nb;
            C = e.g;
            A = gcd128(A, other);
        }
        if (!have || A == 0)
            throw std::invalid_argument("lattice: generators do not span a full-rank lattice");
        if (C < 0) {
            C = -C;
            B = -B;
        }
        B %= A;
        if (B < 0)
            B += A;
        Ideal I{narrow(A), narrow(B), narrow(C)};
        if (I.A % I.C != 0 || I.B % I.C != 0)
            throw std::logic_error("lattice: result is not an ideal");
        return I;
    }

    /* The O_K-ideal generated by the given elements. */
    Ideal ideal(std::vector<Element> const& gens) const
    {
        std::vector<Element> span;
        for (auto const& g : gens) {
            span.push_back(g);
            span.push_back(mul(g, {0, 1}));
        }
        return lattice(span);
    }

    Ideal principal(i64 n) const { return {std::abs(n), 0, std::abs(n)}; }

    Ideal mul(Ideal const& I, Ideal const& J) const
    {
        Element i1{I.A, 0}, i2{I.B, I.C}, j1{J.A, 0}, j2{J.B, J.C};
        return lattice({mul(i1, j1), mul(i1, j2), mul(i2, j1), mul(i2, j2)});
    }

    Ideal power(Ideal const& I, int k) const
    {
        Ideal r = principal(1);
        for (int i = 0; i < k; ++i)
            r = mul(r, I);
        return r;
    }

    Ideal conj(Ideal const& I) const { return lattice({{I.A, 0}, conj(Element{I.B, I.C})}); }

    bool contains(Ideal const& I, Element const& x) const
    {
        if (x.v % I.C != 0)
            return false;
        i128 r = static_cast<i128>(x.u) - static_cast<i128>(x.v / I.C) * I.B;
        return r % I.A == 0;
    }

    /* Roots of b^2 + delta b - q modulo p^k. */
    std::vector<i64> norm_roots(u64 p, int k) const
    {
        const i64 pp = static_cast<i64>(p), pk = arith::ipow(pp, k);
        auto g = [&](i128 b, i64 m) { return arith::mod(b * b + delta_ * b - q_, m); };
        std::vector<i64> out;
        if (p == 2 || pk <= 64) {
            for (i64 b = 0; b < pk; ++b)
                if (g(b, pk) == 0)
                    out.push_back(b);
            return out;
        }
        if (d_ % pp == 0) {
            if (k == 1)
                out.push_back(arith::mod(static_cast<i128>(-delta_) * arith::inverse_mod(2, pp), pp));
            return out;
        }
        if (arith::kronecker(d_, pp) == -1)
            return out;
        const i64 s = arith::sqrt_mod_prime(d_, pp);
        const i64 half = arith::inverse_mod(2, pp);
        for (i64 root : {s, pp - s}) {
            i64 b = arith::mod(static_cast<i128>(root - delta_) * half, pp);
            i64 m = pp;
            for (int j = 1; j < k; ++j) {
                m *= pp;
                i64 deriv = arith::mod(static_cast<i128>(2) * b + delta_, m);
                i128 step = static_cast<i128>(g(b, m)) * arith::inverse_mod(deriv, m) % m;
                b = arith::mod(static_cast<i128>(b) - step, m);
            }
            out.push_back(b);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /* Primitive ideals of norm a, ascending in B. */
    std::vector<Ideal> primitive_ideals_of_norm(i64 a) const
    {
        if (a == 1)
            return {{1, 0, 1}};
        std::vector<i64> sols{0};
        i64 m = 1;
        for (auto const& [p, k] : arith::factorize(a).factors) {
            auto local = norm_roots(p, k);
            const i64 pk = arith::ipow(static_cast<i64>(p), k);
            std::vector<i64> next;
            for (i64 x : sols)
                for (i64 y : local)
                    next.push_back(arith::crt(x, m, y, pk));
            sols = std::move(next);
            m *= pk;
            if (sols.empty())
                return {};
        }
        std::sort(sols.begin(), sols.end());
        std::vector<Ideal> out;
        for (i64 b : sols)
            out.push_back({a, b, 1});
        return out;
    }

    std::vector<Ideal> ideals_of_norm(i64 n) const
    {
        std::vector<Ideal> out;
        for (i64 g = 1; g * g <= n; ++g) {
            if (n % (g * g) != 0)
                continue;
            for (auto const& P : primitive_ideals_of_norm(n / (g * g)))
                out.push_back({P.A * g, P.B * g, g});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /* Primes above p: the ideal (p) when p is inert. */
    std::vector<Ideal> primes_above(u64 p) const
    {
        i64 pp = static_cast<i64>(p);
        if (arith::kronecker(d_, pp) == -1)
            return {principal(pp)};
        return primitive_ideals_of_norm(pp);
    }

    /* Form (a, -b, c) attached to the primitive part [a, (b + sqrt d)/2] of I. */
    quadforms::QuadraticForm form_of(Ideal const& I) const
    {
        i64 a = I.A / I.C;
        i64 b = 2 * (I.B / I.C) + delta_;
        return quadforms::make_form(a, -b, d_);
    }

    /* Unit x bound used by the generator search; its cost grows like sqrt(x). */
    static constexpr i64 max_unit_trace = 1'000'000'000'000LL;

    /* Some generator of I, or nullopt when I is not principal. */
    std::optional<Element> find_generator(Ideal const& I) const
    {
        const i64 n = I.norm();
        auto try_xy = [&](i64 X, i64 Y) -> std::optional<Element> {
            if (arith::mod(X - delta_ * Y, 2) != 0)
                return std::nullopt;
            Element e{(X - delta_ * Y) / 2, Y};
            if (contains(I, e))
                return e;
            return std::nullopt;
        };
        if (d_ < 0) {
            const i64 ad = -d_;
            for (i64 Y = 0; static_cast<i128>(ad) * Y * Y <= 4 * static_cast<i128>(n); ++Y) {
                i64 X;
                if (!arith::is_square(static_cast<i64>(4 * static_cast<i128>(n) - static_cast<i128>(ad) * Y * Y), &X))
                    continue;
                for (i64 sx : {X, -X})
                    for (i64 sy : {Y, -Y})
                        if (auto e = try_xy(sx, sy))
                            return e;
            }
            return std::nullopt;
        }
        if (!unit_.x.fits_slong_p() || unit_.x.get_si() > max_unit_trace)
            throw BudgetExceeded("generator search: fundamental unit of d = " + std::to_string(d_) + " too large");
        // some generator has |Y| sqrt d <= 2 sqrt(eps * N), eps < x + 1
        const i128 bound = 4 * static_cast<i128>(unit_.x.get_si() + 1) * n;
        for (i64 Y = 0; static_cast<i128>(d_) * Y * Y <= bound; ++Y) {
            for (i64 s : {4, -4}) {
                i128 x2 = static_cast<i128>(d_) * Y * Y + static_cast<i128>(s) * n;
                if (x2 < 0 || x2 > static_cast<i128>(INT64_MAX))
                    continue;
                i64 X;
                if (!arith::is_square(static_cast<i64>(x2), &X))
                    continue;
                for (i64 sx : {X, -X})
                    for (i64 sy : {Y, -Y})
                        if (auto e = try_xy(sx, sy))
                            return e;
            }
        }
        return std::nullopt;
    }

    /* Generators of the unit group of O_K, reduced mod m, with their signs. */
    std::vector<UnitImage> unit_generators(i64 m) const
    {
        std::vector<UnitImage> out;
        out.push_back({reduce_mod({-1, 0}, m), -1, -1});
        if (d_ == -4 || d_ == -3)
            out.push_back({reduce_mod({0, 1}, m), 1, 1}); // i, resp. a primitive sixth root of unity
        if (d_ > 0) {
            mpz_class mm = static_cast<long>(m);
            mpz_class u = (unit_.x - delta_ * unit_.y) / 2;
            mpz_class ur = u % mm, vr = unit_.y % mm;
            if (ur < 0)
                ur += mm;
            if (vr < 0)
                vr += mm;
            out.push_back({{ur.get_si(), vr.get_si()}, 1, unit_.norm});
        }
        return out;
    }

private:
    static i128 gcd128(i128 a, i128 b)
    {
        if (a < 0)
            a = -a;
        if (b < 0)
            b = -b;
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static i64 narrow(i128 x)
    {
        if (x > static_cast<i128>(INT64_MAX) || x < static_cast<i128>(INT64_MIN))
            throw BudgetExceeded("quadratic field arithmetic left the 64-bit range");
        return static_cast<i64>(x);
    }

    Discriminant disc_;
    i64 d_ = 0;
    int delta_ = 0;
    i64 q_ = 0;
    quadforms::FundamentalUnit unit_;
};

} // namespace cgras::quadfield

#endif
