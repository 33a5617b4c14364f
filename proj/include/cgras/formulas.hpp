#ifndef CGRAS_FORMULAS_HPP
#define CGRAS_FORMULAS_HPP

// Right-hand sides: the ambiguous class number formula with modulus and
// submodule for K = Q(sqrt d) over Q, its Chevalley specializations, the
// Redei matrix, and the ray class number formula.

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgras/arith.hpp"
#include "cgras/f2.hpp"
#include "cgras/hilbert.hpp"
#include "cgras/modulus.hpp"
#include "cgras/quadfield.hpp"
#include "cgras/quadforms.hpp"

namespace cgras::formulas {

using hilbert::Place;

struct SplittingData {
    Place v;
    int e = 1;
    int f = 1;
};

inline SplittingData splitting(Discriminant const& d, Place const& v)
{
    if (v.is_infinite())
        return {v, d.value() < 0 ? 2 : 1, 1};
    if (d.ramified(v.p))
        return {v, 2, 1};
    if (arith::kronecker(d.value(), static_cast<i64>(v.p)) == 1)
        return {v, 1, 1};
    return {v, 1, 2};
}

/* (log (p_i, d)_{p_j}) over the ramified primes. */
inline F2Matrix redei_matrix(Discriminant const& d)
{
    auto const& T = d.ramified_primes();
    F2Matrix R(T.size(), T.size());
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = 0; j < T.size(); ++j)
            R.set(i, j, hilbert::hilbert_symbol(Rational(static_cast<i64>(T[i])), Rational(d.value()), Place::finite(T[j])) == -1);
    return R;
}

/* Hermite normal form (row style) of an integer matrix; zero rows dropped. */
inline std::vector<std::vector<i64>> hermite_rows(std::vector<std::vector<i64>> rows, std::size_t cols)
{
    std::vector<std::vector<i64>> out;
    for (std::size_t c = 0; c < cols && !rows.empty(); ++c) {
        // gcd-combine all rows on column c into one pivot row
        for (;;) {
            std::size_t piv = rows.size();
            for (std::size_t r = 0; r < rows.size(); ++r)
                if (rows[r][c] != 0 && (piv == rows.size() || std::abs(rows[r][c]) < std::abs(rows[piv][c])))
                    piv = r;
            if (piv == rows.size())
                break;
            bool reduced = false;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (r == piv || rows[r][c] == 0)
                    continue;
                i64 q = rows[r][c] / rows[piv][c];
                for (std::size_t k = 0; k < cols; ++k) {
                    i128 v = static_cast<i128>(rows[r][k]) - static_cast<i128>(q) * rows[piv][k];
                    if (v > INT64_MAX / 4 || v < INT64_MIN / 4)
                        throw BudgetExceeded("hermite_rows: entries too large");
                    rows[r][k] = static_cast<i64>(v);
                }
                reduced = true;
            }
            if (!reduced) {
                auto p = rows[piv];
                if (p[c] < 0)
                    for (auto& x : p)
                        x = -x;
                out.push_back(p);
                rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(piv));
                break;
            }
        }
        rows.erase(std::remove_if(rows.begin(), rows.end(),
                                  [](auto const& r) { return std::all_of(r.begin(), r.end(), [](i64 x) { return x == 0; }); }),
                   rows.end());
    }
    // reduce entries above pivots
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t c = 0;
        while (out[i][c] == 0)
            ++c;
        for (std::size_t j = 0; j < i; ++j) {
            i64 q = arith::mod(out[j][c], out[i][c]);
            i64 k = (out[j][c] - q) / out[i][c];
            for (std::size_t t = 0; t < cols; ++t)
                out[j][t] -= k * out[i][t];
        }
    }
    return out;
}

/* Kernel of Z^n -> G, e_i -> gens[i], for a finite abelian group G given by
 * its law on codes; Schreier relations of a spanning tree, then HNF. */
inline std::vector<std::vector<i64>> kernel_lattice(std::vector<u64> const& gens, u64 identity,
                                                     std::function<u64(u64, u64)> const& mul)
{
    const std::size_t n = gens.size();
    std::map<u64, std::vector<i64>> word{{identity, std::vector<i64>(n, 0)}};
    std::vector<u64> queue{identity};
    std::vector<std::vector<i64>> rel;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        u64 x = queue[qi];
        for (std::size_t i = 0; i < n; ++i) {
            u64 y = mul(x, gens[i]);
            auto w = word[x];
            w[i] += 1;
            auto it = word.find(y);
            if (it == word.end()) {
                word[y] = w;
                queue.push_back(y);
                continue;
            }
            for (std::size_t k = 0; k < n; ++k)
                w[k] -= it->second[k];
            if (std::any_of(w.begin(), w.end(), [](i64 v) { return v != 0; }))
                rel.push_back(w);
        }
    }
    auto basis = hermite_rows(rel, n);
    if (basis.size() != n)
        throw std::logic_error("kernel_lattice: kernel is not of full rank");
    return basis;
}

/* Codes for (Z/m)^x x {+-1}: 2 * residue + sign bit. */
inline u64 base_code(i64 x, Modulus const& m)
{
    return static_cast<u64>(2 * arith::mod(x, m.finite) + ((m.infinite && x < 0) ? 1 : 0));
}

inline u64 base_code(Rational const& x, Modulus const& m)
{
    i64 r = static_cast<i64>(static_cast<i128>(arith::mod(x.num, m.finite)) * arith::inverse_mod(x.den, m.finite) % m.finite);
    return static_cast<u64>(2 * r + ((m.infinite && x.num < 0) ? 1 : 0));
}

inline std::function<u64(u64, u64)> base_law(Modulus const& m)
{
    const i64 mf = m.finite;
    return [mf](u64 a, u64 b) {
        u64 r = static_cast<u64>(static_cast<u128>(a / 2) * (b / 2) % static_cast<u64>(mf));
        return 2 * r + ((a ^ b) & 1U);
    };
}

/* Lambda = { x in Q^m : (x) = N(d) up to S-primes, d in D }, generated by
 * -1, the finite primes of S and the norms of generators of D, cut down to
 * the ray group Q^m. */
struct LambdaGroup {
    std::vector<Rational> generators;
    std::vector<std::vector<i64>> kernel_basis;

    /* prod g_i^{e_i} modulo M (M prime to every generator) */
    i64 residue(std::vector<i64> const& e, i64 M) const
    {
        i64 r = arith::mod(1, M);
        for (std::size_t i = 0; i < generators.size(); ++i) {
            if (e[i] == 0)
                continue;
            i64 g = static_cast<i64>(static_cast<i128>(arith::mod(generators[i].num, M)) * arith::inverse_mod(generators[i].den, M) % M);
            if (e[i] < 0)
                g = arith::inverse_mod(g, M);
            r = static_cast<i64>(static_cast<i128>(r) * static_cast<i64>(arith::powmod(static_cast<u64>(g), static_cast<u64>(std::abs(e[i])), static_cast<u64>(M))) % M);
        }
        return r;
    }

    int sign(std::vector<i64> const& e) const
    {
        int s = 1;
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (generators[i].num < 0 && (e[i] & 1))
                s = -s;
        return s;
    }
};

inline LambdaGroup lambda_group(Discriminant const& d, Modulus const& m, PlaceSet const& S, std::vector<Rational> const& d_norms)
{
    (void)d;
    S.check_disjoint(m);
    LambdaGroup L;
    L.generators.push_back(Rational(-1));
    for (u64 p : S.finite_primes())
        L.generators.push_back(Rational(static_cast<i64>(p)));
    for (auto const& x : d_norms) {
        if (std::gcd(x.num, m.finite) != 1 || std::gcd(x.den, m.finite) != 1)
            throw std::invalid_argument("lambda_group: norm of D meets the modulus");
        L.generators.push_back(x);
    }
    std::vector<u64> codes;
    for (auto const& g : L.generators)
        codes.push_back(base_code(g, m));
    L.kernel_basis = kernel_lattice(codes, base_code(Rational(1), m), base_law(m));
    return L;
}

/* [Lambda : Lambda cap N(K^m)] = 2^rank of the local symbol images. */
inline u64 lambda_norm_index(LambdaGroup const& L, Discriminant const& d, Modulus const& m)
{
    std::vector<Place> places;
    for (auto const& v : hilbert::relevant_places(L.generators, d.value())) {
        if (v.is_infinite() ? m.infinite : (m.finite % static_cast<i64>(v.p) == 0))
            continue;
        places.push_back(v);
    }
    std::vector<std::vector<std::uint8_t>> logs(L.generators.size());
    for (std::size_t i = 0; i < L.generators.size(); ++i)
        for (auto const& v : places)
            logs[i].push_back(hilbert::hilbert_symbol(L.generators[i], Rational(d.value()), v) == -1);

    std::vector<std::shared_ptr<const hilbert::LocalNormImage>> local;
    for (u64 p : m.primes())
        local.push_back(hilbert::local_norm_image(d, p, m.exponent(p)));
    std::size_t cols = places.size();
    for (auto const& img : local)
        cols += static_cast<std::size_t>(img->rank());

    F2Matrix M(0, cols);
    for (auto const& e : L.kernel_basis) {
        std::vector<std::uint8_t> row(places.size(), 0);
        for (std::size_t i = 0; i < L.generators.size(); ++i)
            if (e[i] & 1)
                for (std::size_t j = 0; j < places.size(); ++j)
                    row[j] ^= logs[i][j];
        for (auto const& img : local) {
            if (img->rank() == 0)
                continue;
            auto coords = img->coordinates_of_residue(L.residue(e, img->precision_modulus()));
            row.insert(row.end(), coords.begin(), coords.end());
        }
        M.append_row(row);
    }
    return u64{1} << M.rank();
}

struct GrasRhs {
    u64 base_quotient = 1;  // |Cl^m_{Q,S} / N(C)|
    u64 ef_in_S = 1;        // prod over v in S \ S(m) of e_v f_v
    u64 local_indices = 1;  // prod over p | m_f of the local unit norm indices
    u64 e_outside = 1;      // prod over v outside S and S(m) of e_v
    u64 lambda_index = 1;   // [Lambda : Lambda cap N(K^m)]
    u64 numerator = 1;
    u64 denominator = 2;
    bool integral = true;
    u64 value = 0;

    std::string breakdown() const
    {
        std::ostringstream s;
        s << "base=" << base_quotient << " efS=" << ef_in_S << " local=" << local_indices << " e_out=" << e_outside
          << " lambda=" << lambda_index << " rhs=" << numerator << "/" << denominator;
        return s.str();
    }
};

/* |Cl^m_{Q,S}/N(C)| * prod e_v f_v * prod local indices * prod e_v / (2 [Lambda : Lambda cap N(K^m)]) */
inline GrasRhs gras_rhs(Discriminant const& d, Modulus const& m, PlaceSet const& S, LambdaGroup const& L, u64 base_quotient)
{
    S.check_disjoint(m);
    GrasRhs r;
    r.base_quotient = base_quotient;
    if (!m.infinite) {
        auto sp = splitting(d, Place::infinity());
        r.ef_in_S *= static_cast<u64>(sp.e * sp.f);
    }
    for (u64 p : S.finite_primes()) {
        auto sp = splitting(d, Place::finite(p));
        r.ef_in_S *= static_cast<u64>(sp.e * sp.f);
    }
    for (u64 p : m.primes())
        r.local_indices *= hilbert::local_norm_index(d, p, m.exponent(p)).index;
    for (u64 p : d.ramified_primes())
        if (!S.contains(p) && m.finite % static_cast<i64>(p) != 0)
            r.e_outside *= 2;
    r.lambda_index = lambda_norm_index(L, d, m);
    r.numerator = r.base_quotient * r.ef_in_S * r.local_indices * r.e_outside;
    r.denominator = 2 * r.lambda_index;
    r.integral = r.numerator % r.denominator == 0;
    r.value = r.integral ? r.numerator / r.denominator : 0;
    return r;
}

/* |Cl_K[2]| predicted with m = 1, S = {inf}, C trivial. */
inline u64 chevalley_ordinary(Discriminant const& d)
{
    Modulus m = Modulus::trivial();
    auto L = lambda_group(d, m, PlaceSet::infinite_only(), {});
    auto r = gras_rhs(d, m, PlaceSet::infinite_only(), L, 1);
    if (!r.integral)
        throw std::logic_error("chevalley_ordinary: non-integral value " + r.breakdown());
    return r.value;
}

/* |Cl+_K[2]| predicted with m = real place, S = {inf}, C trivial. */
inline u64 chevalley_narrow(Discriminant const& d)
{
    Modulus m = Modulus::real_places();
    auto L = lambda_group(d, m, PlaceSet::infinite_only(), {});
    auto r = gras_rhs(d, m, PlaceSet::infinite_only(), L, 1);
    if (!r.integral)
        throw std::logic_error("chevalley_narrow: non-integral value " + r.breakdown());
    return r.value;
}

/* |(Cl+/Cl+[2])^G| predicted with D generated by the ramified primes. */
inline u64 redei_gras_prediction(Discriminant const& d)
{
    Modulus m = Modulus::real_places();
    std::vector<Rational> T;
    for (u64 p : d.ramified_primes())
        T.push_back(Rational(static_cast<i64>(p)));
    auto L = lambda_group(d, m, PlaceSet::infinite_only(), T);
    auto r = gras_rhs(d, m, PlaceSet::infinite_only(), L, 1);
    if (!r.integral)
        throw std::logic_error("redei_gras_prediction: non-integral value " + r.breakdown());
    return r.value;
}

/* Order of the subgroup generated by gens in a finite group given by codes. */
inline u64 generated_order(std::vector<u64> const& gens, u64 identity, std::function<u64(u64, u64)> const& mul)
{
    std::map<u64, bool> seen{{identity, true}};
    std::vector<u64> queue{identity};
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (u64 g : gens) {
            u64 y = mul(queue[i], g);
            if (!seen.count(y)) {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    return queue.size();
}

/* Ray class number of Q: phi(m_f) 2^[m_inf] / [E_S : E_S^m]. */
inline u64 ray_class_number(Modulus const& m, PlaceSet const& S)
{
    S.check_disjoint(m);
    std::vector<u64> gens{base_code(-1, m)};
    for (u64 p : S.finite_primes())
        gens.push_back(base_code(static_cast<i64>(p), m));
    u64 image = generated_order(gens, base_code(1, m), base_law(m));
    u64 total = static_cast<u64>(arith::euler_phi(m.finite)) * (m.infinite ? 2 : 1);
    if (total % image != 0)
        throw std::logic_error("ray_class_number: unit image order does not divide the group order");
    return total / image;
}

/* |(O_K / m_f)^x| from the splitting of each p | m_f. */
inline u64 residue_units_order(Discriminant const& d, Modulus const& m)
{
    u64 n = 1;
    for (u64 p : m.primes()) {
        const int k = m.exponent(p);
        const u64 pk = static_cast<u64>(arith::ipow(static_cast<i64>(p), k));
        const u64 pk1 = pk / p;
        auto sp = splitting(d, Place::finite(p));
        if (sp.e == 2)
            n *= pk * pk - pk * pk1;
        else if (sp.f == 2)
            n *= pk * pk - pk1 * pk1;
        else
            n *= (pk - pk1) * (pk - pk1);
    }
    return n;
}

/* Generators of the S-units of K modulo the units, as (residue mod m_f,
 * sign0, sign1), from the relations among the classes of primes above S. */
inline std::vector<quadfield::UnitImage> s_unit_images(quadfield::Field const& F, quadforms::ClassGroup const& G,
                                                        PlaceSet const& S, i64 mf)
{
    std::vector<quadfield::Ideal> primes;
    for (u64 p : S.finite_primes())
        for (auto const& P : F.primes_above(p))
            primes.push_back(P);
    if (primes.empty())
        return {};
    const auto J = G.negation_class();
    auto ordinary = [&](quadforms::ClassGroup::Elem x) { return std::min(x, G.mul(x, J)); };
    std::vector<u64> gens;
    for (auto const& P : primes)
        gens.push_back(ordinary(G.index_of(F.form_of(P))));
    auto law = [&](u64 a, u64 b) {
        return static_cast<u64>(ordinary(G.mul(static_cast<quadforms::ClassGroup::Elem>(a), static_cast<quadforms::ClassGroup::Elem>(b))));
    };
    auto basis = kernel_lattice(gens, 0, law);
    std::vector<quadfield::UnitImage> out;
    for (auto const& e : basis) {
        quadfield::Ideal X = F.principal(1);
        i64 divisor = 1;
        for (std::size_t j = 0; j < primes.size(); ++j) {
            if (e[j] >= 0) {
                X = F.mul(X, F.power(primes[j], static_cast<int>(e[j])));
            } else {
                // P^-1 = conj(P) / N(P)
                X = F.mul(X, F.power(F.conj(primes[j]), static_cast<int>(-e[j])));
                for (i64 t = 0; t < -e[j]; ++t)
                    divisor = static_cast<i64>(static_cast<i128>(divisor) * primes[j].norm() % (mf * 1'000'003LL));
            }
        }
        auto g = F.find_generator(X);
        if (!g)
            throw std::logic_error("s_unit_images: relation ideal is not principal");
        quadfield::UnitImage u;
        u.residue = F.mul_mod(F.reduce_mod(*g, mf), {arith::inverse_mod(arith::mod(divisor, mf), mf), 0}, mf);
        if (F.d() > 0) {
            u.sign0 = F.sign(*g, 0);
            u.sign1 = F.sign(*g, 1);
        }
        out.push_back(u);
    }
    return out;
}

/* |Cl^m_{K,S}| = |Cl_{K,S}| [E_S : E_S^m]^-1 2^{real places of K in m} |(O/m_f)^x| */
inline u64 ray_class_number(Discriminant const& d, Modulus const& m, PlaceSet const& S)
{
    S.check_disjoint(m);
    quadfield::Field F(d);
    quadforms::ClassGroup G(d);
    const u64 hS = quadforms::s_class_counts(G, S).order;
    const bool signs = d.value() > 0 && m.infinite;
    const i64 mf = m.finite;
    auto code = [&](quadfield::UnitImage const& u) {
        u64 bits = signs ? ((u.sign0 < 0 ? 1U : 0U) | (u.sign1 < 0 ? 2U : 0U)) : 0U;
        return (static_cast<u64>(arith::mod(u.residue.u, mf)) * static_cast<u64>(mf) + static_cast<u64>(arith::mod(u.residue.v, mf))) * 4 + bits;
    };
    auto law = [&](u64 a, u64 b) {
        quadfield::Element x{static_cast<i64>((a / 4) / static_cast<u64>(mf)), static_cast<i64>((a / 4) % static_cast<u64>(mf))};
        quadfield::Element y{static_cast<i64>((b / 4) / static_cast<u64>(mf)), static_cast<i64>((b / 4) % static_cast<u64>(mf))};
        auto z = F.mul_mod(x, y, mf);
        return (static_cast<u64>(z.u) * static_cast<u64>(mf) + static_cast<u64>(z.v)) * 4 + ((a ^ b) & 3U);
    };
    std::vector<u64> gens;
    for (auto const& u : F.unit_generators(mf))
        gens.push_back(code(u));
    for (auto const& u : s_unit_images(F, G, S, mf))
        gens.push_back(code(u));
    const u64 image = generated_order(gens, code({F.reduce_mod({1, 0}, mf), 1, 1}), law);
    const u64 total = hS * residue_units_order(d, m) * (signs ? 4 : 1);
    if (total % image != 0)
        throw std::logic_error("ray_class_number: unit image order does not divide");
    return total / image;
}

/* The relative form for the base Q inside K = Q(sqrt d):
 * |Cl^m_{Q,S}| = |Cl^{m_r}_{Q,S}| [E^{m_r} : E^m]^-1 2^{|S(m_inf^c)|}, where
 * m_r drops the real place when it becomes complex in K. */
inline u64 ray_class_number_relative(Discriminant const& d, Modulus const& m, PlaceSet const& S)
{
    S.check_disjoint(m);
    if (!m.infinite || d.value() > 0)
        return ray_class_number(m, S);
    Modulus mr(m.finite, false);
    // E^{m_r}: S-units = 1 mod m_f; its image in the signs at the real place
    std::vector<u64> codes;
    std::vector<Rational> gens{Rational(-1)};
    for (u64 p : S.finite_primes())
        gens.push_back(Rational(static_cast<i64>(p)));
    for (auto const& g : gens)
        codes.push_back(base_code(g, mr));
    auto basis = kernel_lattice(codes, base_code(Rational(1), mr), base_law(mr));
    u64 idx = 1;
    for (auto const& e : basis)
        if (e[0] & 1)
            idx = 2;
    return ray_class_number(mr, S) * 2 / idx;
}

} // namespace cgras::formulas

#endif
