#ifndef CGRAS_RAYORACLE_HPP
#define CGRAS_RAYORACLE_HPP

// Ray class groups Cl^m_{K,S} of a quadratic field K built by exhausting
// ideals of bounded norm, together with the Galois action and the norm map
// to the ray class group of Q.
//
// Ray classes are keyed as follows. Each ordinary class c has a fixed
// representative R_c coprime to m_f. For I in class c, I * conj(R_c) = (g)
// is principal, so I = (g / N(R_c)) R_c, and the ray class of I is
// determined by c and the image of g / N(R_c) in
// (O/m_f)^x x {signs at real places of m}, taken modulo the image of the
// unit group.

#include <algorithm>
#include <istream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgras/arith.hpp"
#include "cgras/finite_group.hpp"
#include "cgras/modulus.hpp"
#include "cgras/quadfield.hpp"
#include "cgras/quadforms.hpp"

namespace cgras::rayoracle {

using quadfield::Element;
using quadfield::Field;
using quadfield::Ideal;
using Elem = CayleyGroup::Elem;

/* Cl^m_{Q,S} = ((Z/m_f)^x x {+-1}^[m_inf]) / <(-1, -), (p, +) : p in S>. */
class BaseRayGroup {
public:
    BaseRayGroup() : BaseRayGroup(Modulus::trivial(), PlaceSet::infinite_only()) {}
    BaseRayGroup(Modulus const& m, PlaceSet const& S) : m_(m), S_(S)
    {
        S.check_disjoint(m);
        const i64 mf = m.finite;
        const int nsigns = m.infinite ? 2 : 1;
        index_.assign(static_cast<std::size_t>(2 * mf), unset);
        for (i64 r = 0; r < mf; ++r) {
            if (std::gcd(r, mf) != 1)
                continue;
            for (int s = 0; s < nsigns; ++s) {
                index_[static_cast<std::size_t>(2 * r + s)] = static_cast<Elem>(codes_.size());
                codes_.push_back(2 * r + s);
            }
        }
        const std::size_t n = codes_.size();
        std::vector<Elem> table(n * n);
        for (Elem i = 0; i < n; ++i)
            for (Elem j = 0; j < n; ++j) {
                i64 r = static_cast<i64>(static_cast<i128>(codes_[i] / 2) * (codes_[j] / 2) % mf);
                i64 s = (codes_[i] % 2) ^ (codes_[j] % 2);
                table[i * n + j] = index_[static_cast<std::size_t>(2 * r + s)];
            }
        full_ = CayleyGroup(n, std::move(table));
        std::vector<Elem> gens{element(-1)};
        for (u64 p : S.finite_primes())
            gens.push_back(element(static_cast<i64>(p)));
        group_ = full_.quotient(full_.subgroup(gens), &projection_);
    }

    Modulus const& modulus() const { return m_; }
    PlaceSet const& places() const { return S_; }
    std::size_t order() const { return group_.order(); }
    CayleyGroup const& group() const { return group_; }
    /* (Z/m_f)^x x signs before the quotient */
    CayleyGroup const& unquotiented() const { return full_; }

    /* Class of the principal ideal generated by the nonzero integer n. */
    Elem class_of(i64 n) const { return projection_[element(n)]; }

    Elem class_of(Rational const& x) const
    {
        Elem a = class_of(x.num), b = class_of(x.den);
        return group_.mul(a, group_.inverse(b));
    }

    /* Element (n mod m_f, sign n) of the unquotiented group. */
    Elem element(i64 n) const
    {
        if (n == 0 || std::gcd(n, m_.finite) != 1)
            throw std::invalid_argument("BaseRayGroup: " + std::to_string(n) + " is not prime to the modulus");
        i64 r = arith::mod(n, m_.finite);
        i64 s = (m_.infinite && n < 0) ? 1 : 0;
        return index_[static_cast<std::size_t>(2 * r + s)];
    }

private:
    static constexpr Elem unset = ~Elem{0};
    Modulus m_;
    PlaceSet S_;
    std::vector<i64> codes_;
    std::vector<Elem> index_;
    CayleyGroup full_, group_;
    std::vector<Elem> projection_;
};

/* Key machinery for the ray class group of K modulo m with S = {inf}. */
class RayEngine {
public:
    struct Key {
        Elem c = 0;
        u64 r = 0;
        friend bool operator==(Key const&, Key const&) = default;
        friend auto operator<=>(Key const&, Key const&) = default;
    };

    RayEngine(Discriminant const& d, Modulus const& m)
        : field_(d), forms_(d), m_(m), mf_(m.finite), signs_(d.value() > 0 && m.infinite)
    {
        // ordinary classes are cosets of the class of (-1, b, -c)
        const Elem J = forms_.negation_class();
        ord_of_narrow_.assign(forms_.order(), unset);
        for (Elem x = 0; x < forms_.order(); ++x) {
            if (ord_of_narrow_[x] != unset)
                continue;
            Elem id = static_cast<Elem>(h_);
            ++h_;
            ord_of_narrow_[x] = id;
            ord_of_narrow_[forms_.mul(x, J)] = id;
        }
        std::vector<std::optional<Ideal>> reps(h_);
        std::size_t found = 0;
        for (i64 n = 1; found < h_; ++n) {
            if (n > 1'000'000)
                throw BudgetExceeded("no ideal coprime to the modulus found in some class");
            if (std::gcd(n, mf_) != 1)
                continue;
            for (auto const& I : field_.ideals_of_norm(n)) {
                Elem c = ordinary_class(I);
                if (!reps[c]) {
                    reps[c] = I;
                    ++found;
                }
            }
        }
        for (auto const& r : reps)
            reps_.push_back(*r);

        identity_code_ = encode({arith::mod(1, mf_), 0}, 1, 1);
        std::vector<u64> gens;
        for (auto const& u : field_.unit_generators(mf_))
            gens.push_back(encode(u.residue, u.sign0, u.sign1));
        unit_orbit_ = {identity_code_};
        std::map<u64, bool> seen{{identity_code_, true}};
        for (std::size_t i = 0; i < unit_orbit_.size(); ++i)
            for (u64 g : gens) {
                u64 x = mul_code(unit_orbit_[i], g);
                if (!seen.count(x)) {
                    seen[x] = true;
                    unit_orbit_.push_back(x);
                }
            }

        tau_.resize(h_ * h_);
        for (Elem a = 0; a < h_; ++a)
            for (Elem b = 0; b < h_; ++b)
                tau_[a * h_ + b] = key(field_.mul(reps_[a], reps_[b]));
    }

    Field const& field() const { return field_; }
    quadforms::ClassGroup const& forms() const { return forms_; }
    Modulus const& modulus() const { return m_; }
    std::size_t ordinary_order() const { return h_; }
    Ideal const& class_rep(Elem c) const { return reps_.at(c); }
    std::size_t unit_image_order() const { return unit_orbit_.size(); }
    bool tracks_signs() const { return signs_; }

    Elem ordinary_class(Ideal const& I) const { return ord_of_narrow_[forms_.index_of(field_.form_of(I))]; }

    bool coprime(Ideal const& I) const { return std::gcd(I.norm(), mf_) == 1; }

    Key key(Ideal const& I) const
    {
        if (!coprime(I))
            throw std::invalid_argument("ray class key: ideal " + I.to_string() + " meets the modulus");
        const Elem c = ordinary_class(I);
        Ideal const& R = reps_[c];
        auto g = field_.find_generator(field_.mul(I, field_.conj(R)));
        if (!g)
            throw std::logic_error("ray class key: I * conj(R_c) is not principal");
        Element res = field_.mul_mod(field_.reduce_mod(*g, mf_), {arith::inverse_mod(R.norm(), mf_), 0}, mf_);
        int s0 = 1, s1 = 1;
        if (signs_) {
            s0 = field_.sign(*g, 0);
            s1 = field_.sign(*g, 1);
        }
        return {c, canon(encode(res, s0, s1))};
    }

    Key mul(Key const& a, Key const& b) const
    {
        Key const& t = tau_[a.c * h_ + b.c];
        return {t.c, canon(mul_code(mul_code(a.r, b.r), t.r))};
    }

    Key identity() const { return {0, canon(identity_code_)}; }

    /* residue code: ((u * m + v) * 4 + sign bits) */
    u64 encode(Element const& res, int s0, int s1) const
    {
        u64 bits = 0;
        if (signs_)
            bits = (s0 < 0 ? 1U : 0U) | (s1 < 0 ? 2U : 0U);
        return (static_cast<u64>(arith::mod(res.u, mf_)) * static_cast<u64>(mf_) + static_cast<u64>(arith::mod(res.v, mf_))) * 4 + bits;
    }

    u64 mul_code(u64 a, u64 b) const
    {
        Element x = decode(a), y = decode(b);
        Element z = field_.mul_mod(x, y, mf_);
        return (static_cast<u64>(z.u) * static_cast<u64>(mf_) + static_cast<u64>(z.v)) * 4 + ((a ^ b) & 3U);
    }

    u64 canon(u64 code) const
    {
        u64 best = ~u64{0};
        for (u64 u : unit_orbit_)
            best = std::min(best, mul_code(code, u));
        return best;
    }

    /* |(O/m_f)^x| times the number of sign patterns tracked. */
    std::size_t residue_group_order() const
    {
        std::size_t n = 0;
        for (i64 u = 0; u < mf_; ++u)
            for (i64 v = 0; v < mf_; ++v)
                if (std::gcd(arith::mod(field_.norm({u, v}), mf_), mf_) == 1)
                    ++n;
        return n * (signs_ ? 4 : 1);
    }

private:
    Element decode(u64 code) const
    {
        u64 rest = code / 4;
        return {static_cast<i64>(rest / static_cast<u64>(mf_)), static_cast<i64>(rest % static_cast<u64>(mf_))};
    }

    static constexpr Elem unset = ~Elem{0};

    Field field_;
    quadforms::ClassGroup forms_;
    Modulus m_;
    i64 mf_;
    bool signs_;
    std::vector<Elem> ord_of_narrow_;
    std::size_t h_ = 0;
    std::vector<Ideal> reps_;
    u64 identity_code_ = 0;
    std::vector<u64> unit_orbit_;
    std::vector<Key> tau_;
};

/* I ~ J in Cl^m_K (S = {inf}), decided by searching generators of I conj(J)
 * against every unit residue: for d > 0 the powers e^k of the fundamental
 * unit with k below its order modulo m_f and signs. */
inline bool ray_equivalent_direct(Field const& F, Modulus const& m, Ideal const& I, Ideal const& J)
{
    const i64 mf = m.finite;
    const bool signs = F.d() > 0 && m.infinite;
    auto g = F.find_generator(F.mul(I, F.conj(J)));
    if (!g)
        return false;
    const Element gr = F.reduce_mod(*g, mf);
    const i64 target = arith::mod(J.norm(), mf);
    int gs0 = 1, gs1 = 1;
    if (signs) {
        gs0 = F.sign(*g, 0);
        gs1 = F.sign(*g, 1);
    }
    struct Unit {
        Element res;
        int s0, s1;
    };
    std::vector<Unit> units;
    const Element one = F.reduce_mod({1, 0}, mf);
    if (F.d() < 0) {
        Element zeta = F.d() == -4 || F.d() == -3 ? Element{0, 1} : Element{-1, 0};
        int w = F.d() == -4 ? 4 : F.d() == -3 ? 6 : 2;
        Element z = one;
        for (int k = 0; k < w; ++k) {
            units.push_back({z, 1, 1});
            z = F.mul_mod(z, F.reduce_mod(zeta, mf), mf);
        }
    } else {
        auto eps = F.unit_generators(mf).back();
        Element e = one;
        int s1 = 1;
        for (int k = 0;; ++k) {
            if (k > 0 && e == one && s1 == 1)
                break;
            units.push_back({e, 1, s1});
            units.push_back({F.reduce_mod({-e.u, -e.v}, mf), -1, -s1});
            e = F.mul_mod(e, eps.residue, mf);
            s1 *= eps.sign1;
            if (k > 4 * mf * mf + 8)
                throw std::logic_error("unit order search did not terminate");
        }
    }
    for (auto const& u : units) {
        Element r = F.mul_mod(gr, u.res, mf);
        if (r.u != target || r.v != 0)
            continue;
        if (signs && (gs0 * u.s0 < 0 || gs1 * u.s1 < 0))
            continue;
        return true;
    }
    return false;
}

enum class SubmoduleKind { trivial, two_torsion, ramified, explicit_generators };

struct SubmoduleSpec {
    SubmoduleKind kind = SubmoduleKind::trivial;
    std::vector<Elem> generators;

    static SubmoduleSpec trivial() { return {}; }
    static SubmoduleSpec two_torsion() { return {SubmoduleKind::two_torsion, {}}; }
    static SubmoduleSpec ramified() { return {SubmoduleKind::ramified, {}}; }
    static SubmoduleSpec explicit_generators(std::vector<Elem> g) { return {SubmoduleKind::explicit_generators, std::move(g)}; }

    std::string tag() const
    {
        switch (kind) {
        case SubmoduleKind::trivial: return "trivial";
        case SubmoduleKind::two_torsion: return "two-torsion";
        case SubmoduleKind::ramified: return "ramified";
        case SubmoduleKind::explicit_generators: return "explicit";
        }
        return "?";
    }

    static SubmoduleSpec parse(std::string const& s)
    {
        if (s == "trivial")
            return trivial();
        if (s == "two-torsion")
            return two_torsion();
        if (s == "ramified")
            return ramified();
        throw std::invalid_argument("unknown submodule '" + s + "'");
    }
};

struct ClassRecord {
    Ideal rep;
    std::vector<Ideal> alternates;
};

class RayClassOracle {
public:
    static constexpr i64 default_budget = 1 << 16;
    static constexpr std::size_t reps_kept = 4;

    /* ceil(Minkowski bound) * m_f * 4, with 2/pi and 1/2 rounded up */
    static i64 default_bound(Discriminant const& d, Modulus const& m)
    {
        i64 s = static_cast<i64>(arith::isqrt(static_cast<u64>(std::abs(d.value())))) + 1;
        i64 mink = d.value() < 0 ? (2 * s + 2) / 3 : (s + 1) / 2;
        return std::max<i64>(mink, 1) * m.finite * 4;
    }

    static RayClassOracle build(Discriminant const& d, Modulus const& m, PlaceSet const& S, i64 norm_bound = 0,
                                i64 budget = default_budget)
    {
        S.check_disjoint(m);
        RayClassOracle o;
        o.engine_ = std::make_shared<const RayEngine>(d, m);
        o.S_ = S;
        o.base_ = BaseRayGroup(m, S);
        RayEngine const& E = *o.engine_;
        Field const& F = E.field();

        i64 avoid = m.finite;
        for (u64 p : S.finite_primes())
            avoid *= static_cast<i64>(p);

        std::map<RayEngine::Key, std::vector<Ideal>> found;
        i64 done = 0;
        auto extend = [&](i64 upto) {
            for (i64 n = done + 1; n <= upto; ++n) {
                if (std::gcd(n, avoid) != 1)
                    continue;
                for (auto const& I : F.ideals_of_norm(n)) {
                    auto& v = found[E.key(I)];
                    if (v.size() < reps_kept)
                        v.push_back(I);
                }
            }
            done = std::max(done, upto);
        };
        auto closed = [&] {
            std::vector<RayEngine::Key> keys;
            for (auto const& kv : found)
                keys.push_back(kv.first);
            for (auto const& a : keys)
                for (auto const& b : keys)
                    if (!found.count(E.mul(a, b)))
                        return false;
            return true;
        };

        i64 B = norm_bound > 0 ? norm_bound : default_bound(d, m);
        if (2 * B > budget)
            throw BudgetExceeded("initial norm bound " + std::to_string(B) + " exceeds the budget " + std::to_string(budget));
        extend(B);
        for (;;) {
            std::size_t before = found.size();
            extend(2 * B);
            if (found.size() == before && closed())
                break;
            B *= 2;
            if (2 * B > budget)
                throw BudgetExceeded("ray class enumeration did not stabilize below norm " + std::to_string(budget));
        }
        o.bound_ = B;

        // identity first, then key order
        const RayEngine::Key id = E.identity();
        if (!found.count(id))
            throw std::logic_error("unit ideal missing from the enumeration");
        o.full_keys_.push_back(id);
        for (auto const& kv : found)
            if (kv.first != id)
                o.full_keys_.push_back(kv.first);
        const std::size_t n = o.full_keys_.size();
        for (Elem i = 0; i < n; ++i)
            o.full_index_[o.full_keys_[i]] = i;
        std::vector<std::vector<Ideal>> full_reps(n);
        for (Elem i = 0; i < n; ++i)
            full_reps[i] = found[o.full_keys_[i]];

        std::vector<Elem> table(n * n);
        for (Elem i = 0; i < n; ++i)
            for (Elem j = 0; j < n; ++j)
                table[i * n + j] = o.full_index_.at(E.mul(o.full_keys_[i], o.full_keys_[j]));
        CayleyGroup full(n, std::move(table));

        // the key law must agree with multiplying actual ideals
        auto check_pair = [&](Elem i, Elem j) {
            Elem k = o.full_index_.at(E.key(F.mul(full_reps[i][0], full_reps[j][0])));
            if (k != full.mul(i, j))
                throw std::logic_error("ray class keys are not multiplicative");
        };
        if (n <= 48) {
            for (Elem i = 0; i < n; ++i)
                for (Elem j = i; j < n; ++j)
                    check_pair(i, j);
        } else {
            u64 state = 0x9e3779b97f4a7c15ULL;
            for (int t = 0; t < 2000; ++t) {
                state = state * 6364136223846793005ULL + 1442695040888963407ULL;
                check_pair(static_cast<Elem>((state >> 33) % n), static_cast<Elem>((state >> 13) % n));
            }
        }

        std::vector<Elem> sigma_full(n);
        for (Elem i = 0; i < n; ++i)
            sigma_full[i] = o.full_index_.at(E.key(F.conj(full_reps[i][0])));

        // S-quotient
        std::vector<Elem> sgens;
        for (u64 p : S.finite_primes())
            for (auto const& P : F.primes_above(p))
                sgens.push_back(o.full_index_.at(E.key(P)));
        o.group_ = full.quotient(full.subgroup(sgens), &o.projection_);
        const std::size_t q = o.group_.order();

        o.classes_.assign(q, {});
        std::vector<std::vector<Ideal>> pool(q);
        for (Elem i = 0; i < n; ++i)
            for (auto const& I : full_reps[i])
                pool[o.projection_[i]].push_back(I);
        o.sigma_.assign(q, 0);
        o.norm_map_.assign(q, 0);
        std::vector<bool> seen(q, false);
        for (Elem i = 0; i < n; ++i) {
            Elem k = o.projection_[i];
            Elem s = o.projection_[sigma_full[i]];
            Elem nb = o.base_.class_of(full_reps[i][0].norm());
            if (seen[k] && (o.sigma_[k] != s || o.norm_map_[k] != nb))
                throw std::logic_error("Galois action or norm map not constant on S-classes");
            seen[k] = true;
            o.sigma_[k] = s;
            o.norm_map_[k] = nb;
        }
        for (Elem k = 0; k < q; ++k) {
            auto& v = pool[k];
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            o.classes_[k].rep = v.front();
            o.classes_[k].alternates.assign(v.begin() + 1, v.begin() + static_cast<std::ptrdiff_t>(std::min(v.size(), reps_kept)));
        }
        for (u64 p : d.ramified_primes())
            if (m.finite % static_cast<i64>(p) != 0)
                o.ramified_.push_back(o.classify(F.primes_above(p).front()));
        o.check_group_law();
        return o;
    }

    Discriminant const& discriminant() const { return engine_->field().discriminant(); }
    Modulus const& modulus() const { return engine_->modulus(); }
    PlaceSet const& places() const { return S_; }
    i64 bound() const { return bound_; }
    RayEngine const& engine() const { return *engine_; }
    Field const& field() const { return engine_->field(); }

    std::size_t order() const { return group_.order(); }
    /* order of the ray class group before dividing out the primes of S */
    std::size_t full_order() const { return full_keys_.size(); }
    CayleyGroup const& group() const { return group_; }
    Elem mul(Elem a, Elem b) const { return group_.mul(a, b); }
    std::vector<ClassRecord> const& classes() const { return classes_; }
    ClassRecord const& record(Elem k) const { return classes_.at(k); }
    Elem sigma(Elem k) const { return sigma_.at(k); }
    std::vector<Elem> const& sigma_map() const { return sigma_; }
    Elem norm_to_base(Elem k) const { return norm_map_.at(k); }
    BaseRayGroup const& base() const { return base_; }
    std::vector<Elem> const& ramified_classes() const { return ramified_; }

    /* S-ray class of an ideal coprime to m_f. */
    Elem classify(Ideal const& I) const
    {
        auto it = full_index_.find(engine_->key(I));
        if (it == full_index_.end())
            throw std::logic_error("classify: key of " + I.to_string() + " was never enumerated");
        return projection_[it->second];
    }

    /* Class of the extension n O_K of a base ideal (n). */
    Elem extend_from_base(i64 n) const { return classify(field().principal(n)); }

    /* Independent equivalence test: I J^{-1} = (a) * prod P^e over primes P
     * above S with a = 1 mod m_f and positive where required. */
    bool ray_principal_test(Ideal const& I, Ideal const& J) const
    {
        Field const& F = field();
        Modulus const& m = modulus();
        std::vector<Ideal> primes;
        for (u64 p : S_.finite_primes())
            for (auto const& P : F.primes_above(p))
                primes.push_back(P);
        std::vector<int> orders;
        for (auto const& P : primes) {
            int k = 1;
            Ideal Pk = P;
            while (!ray_equivalent_direct(F, m, Pk, F.principal(1))) {
                if (++k > 64)
                    throw BudgetExceeded("ray order of a prime above S exceeds 64");
                Pk = F.mul(Pk, P);
            }
            orders.push_back(k);
        }
        std::vector<int> e(primes.size(), 0);
        for (;;) {
            Ideal X = I;
            for (std::size_t i = 0; i < primes.size(); ++i)
                X = F.mul(X, F.power(primes[i], e[i]));
            if (ray_equivalent_direct(F, m, X, J))
                return true;
            std::size_t i = 0;
            while (i < e.size() && ++e[i] == orders[i])
                e[i++] = 0;
            if (i == e.size())
                return false;
        }
    }

    void save(std::ostream& out) const
    {
        out << "cgras-rayoracle v1\n";
        out << "d " << discriminant().value() << "\n";
        out << "mf " << modulus().finite << "\n";
        out << "minf " << (modulus().infinite ? 1 : 0) << "\n";
        out << "S";
        for (u64 p : S_.finite_primes())
            out << " " << p;
        out << "\n";
        out << "bound " << bound_ << "\n";
        out << "full " << full_keys_.size() << "\n";
        for (std::size_t i = 0; i < full_keys_.size(); ++i)
            out << full_keys_[i].c << " " << full_keys_[i].r << " " << projection_[i] << "\n";
        const std::size_t q = order();
        out << "classes " << q << "\n";
        for (auto const& rec : classes_) {
            out << rec.alternates.size() + 1;
            out << " " << rec.rep.A << " " << rec.rep.B << " " << rec.rep.C;
            for (auto const& I : rec.alternates)
                out << " " << I.A << " " << I.B << " " << I.C;
            out << "\n";
        }
        out << "mul\n";
        for (Elem i = 0; i < q; ++i) {
            for (Elem j = 0; j < q; ++j)
                out << (j ? " " : "") << group_.mul(i, j);
            out << "\n";
        }
        auto line = [&](char const* tag, std::vector<Elem> const& v) {
            out << tag << " " << v.size();
            for (Elem x : v)
                out << " " << x;
            out << "\n";
        };
        line("sigma", sigma_);
        line("norm", norm_map_);
        line("ramified", ramified_);
        out << "end\n";
    }

    static RayClassOracle load(std::istream& in)
    {
        auto fail = [](std::string const& why) -> RayClassOracle {
            throw std::runtime_error("malformed ray class oracle file: " + why);
        };
        std::string line, word;
        if (!std::getline(in, line) || line != "cgras-rayoracle v1")
            return fail("bad header");
        auto expect = [&](char const* tag) {
            if (!(in >> word) || word != tag)
                throw std::runtime_error(std::string("malformed ray class oracle file: expected ") + tag);
        };
        i64 d = 0, mf = 1, bound = 0;
        int minf = 0;
        expect("d");
        in >> d;
        expect("mf");
        in >> mf;
        expect("minf");
        in >> minf;
        expect("S");
        std::getline(in, line);
        std::istringstream sl(line);
        std::vector<u64> sp;
        for (u64 p; sl >> p;)
            sp.push_back(p);
        expect("bound");
        in >> bound;

        RayClassOracle o;
        Modulus m(mf, minf != 0);
        o.engine_ = std::make_shared<const RayEngine>(Discriminant(d), m);
        o.S_ = PlaceSet(sp);
        o.base_ = BaseRayGroup(m, o.S_);
        o.bound_ = bound;
        std::size_t n = 0;
        expect("full");
        in >> n;
        o.full_keys_.resize(n);
        o.projection_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            in >> o.full_keys_[i].c >> o.full_keys_[i].r >> o.projection_[i];
            o.full_index_[o.full_keys_[i]] = static_cast<Elem>(i);
        }
        std::size_t q = 0;
        expect("classes");
        in >> q;
        o.classes_.resize(q);
        for (auto& rec : o.classes_) {
            std::size_t k = 0;
            in >> k;
            if (k == 0)
                return fail("class without representative");
            in >> rec.rep.A >> rec.rep.B >> rec.rep.C;
            rec.alternates.resize(k - 1);
            for (auto& I : rec.alternates)
                in >> I.A >> I.B >> I.C;
        }
        expect("mul");
        std::vector<Elem> table(q * q);
        for (auto& x : table)
            in >> x;
        o.group_ = CayleyGroup(q, std::move(table));
        auto read_vec = [&](char const* tag, std::vector<Elem>& v) {
            expect(tag);
            std::size_t k = 0;
            in >> k;
            v.resize(k);
            for (auto& x : v)
                in >> x;
        };
        read_vec("sigma", o.sigma_);
        read_vec("norm", o.norm_map_);
        read_vec("ramified", o.ramified_);
        expect("end");
        if (!in)
            return fail("truncated");
        if (o.sigma_.size() != q || o.norm_map_.size() != q)
            return fail("inconsistent sizes");
        o.check_group_law();
        return o;
    }

    void check_group_law() const
    {
        const std::size_t q = order();
        for (Elem i = 0; i < q; ++i) {
            if (group_.mul(0, i) != i)
                throw std::logic_error("ray class group: bad identity");
            for (Elem j = 0; j < q; ++j)
                if (group_.mul(i, j) != group_.mul(j, i))
                    throw std::logic_error("ray class group: not commutative");
        }
        for (Elem i = 0; i < q; ++i) {
            if (sigma_[sigma_[i]] != i)
                throw std::logic_error("ray class group: sigma is not an involution");
            for (Elem j = 0; j < q; ++j)
                if (sigma_[group_.mul(i, j)] != group_.mul(sigma_[i], sigma_[j]))
                    throw std::logic_error("ray class group: sigma is not a homomorphism");
        }
    }

private:
    RayClassOracle() = default;

    std::shared_ptr<const RayEngine> engine_;
    PlaceSet S_;
    BaseRayGroup base_;
    i64 bound_ = 0;
    std::vector<RayEngine::Key> full_keys_;
    std::map<RayEngine::Key, Elem> full_index_;
    std::vector<Elem> projection_;
    CayleyGroup group_;
    std::vector<ClassRecord> classes_;
    std::vector<Elem> sigma_;
    std::vector<Elem> norm_map_;
    std::vector<Elem> ramified_;
};

/* Membership mask of the submodule C. */
inline std::vector<bool> submodule_mask(RayClassOracle const& o, SubmoduleSpec const& spec)
{
    CayleyGroup const& G = o.group();
    switch (spec.kind) {
    case SubmoduleKind::trivial:
        return G.subgroup({});
    case SubmoduleKind::two_torsion: {
        std::vector<bool> mask(G.order(), false);
        for (Elem x = 0; x < G.order(); ++x)
            mask[x] = G.mul(x, x) == 0;
        return mask;
    }
    case SubmoduleKind::ramified:
        return G.subgroup(o.ramified_classes());
    case SubmoduleKind::explicit_generators:
        for (Elem g : spec.generators)
            if (g >= G.order())
                throw std::invalid_argument("submodule generator out of range");
        return G.subgroup(spec.generators);
    }
    throw std::logic_error("unknown submodule kind");
}

inline void check_sigma_stable(RayClassOracle const& o, std::vector<bool> const& mask)
{
    for (Elem x = 0; x < mask.size(); ++x)
        if (mask[x] && !mask[o.sigma(x)])
            throw std::invalid_argument("submodule is not stable under the Galois action");
}

/* |(Cl/C)^G|: cosets xC with sigma(x) C = x C. */
inline std::size_t ambiguous_count(RayClassOracle const& o, std::vector<bool> const& mask)
{
    check_sigma_stable(o, mask);
    std::size_t m = 0;
    auto id = o.group().coset_ids(mask, &m);
    std::vector<bool> fixed(m, false);
    for (Elem x = 0; x < o.order(); ++x)
        if (id[o.sigma(x)] == id[x])
            fixed[id[x]] = true;
    return static_cast<std::size_t>(std::count(fixed.begin(), fixed.end(), true));
}

inline std::size_t ambiguous_count(RayClassOracle const& o, SubmoduleSpec const& spec)
{
    return ambiguous_count(o, submodule_mask(o, spec));
}

/* N(C) as a subgroup (mask) of Cl^m_{Q,S}. */
inline std::vector<bool> norm_submodule(RayClassOracle const& o, std::vector<bool> const& mask)
{
    std::vector<Elem> image;
    for (Elem x = 0; x < mask.size(); ++x)
        if (mask[x])
            image.push_back(o.norm_to_base(x));
    return o.base().group().subgroup(image);
}

/* Greedy generating set of the subgroup given by mask. */
inline std::vector<Elem> generating_set(CayleyGroup const& G, std::vector<bool> const& mask)
{
    std::vector<Elem> gens;
    auto span = G.subgroup(gens);
    for (Elem x = 0; x < G.order(); ++x)
        if (mask[x] && !span[x]) {
            gens.push_back(x);
            span = G.subgroup(gens);
        }
    return gens;
}

/* Generators of an ideal group D whose image is C. Variant 0 uses the class
 * representatives (or the ramified primes); variant 1 swaps in alternative
 * ideals of the same classes and adds a nontrivial ideal of the identity class. */
inline std::vector<Ideal> submodule_ideals(RayClassOracle const& o, SubmoduleSpec const& spec, int variant = 0)
{
    Field const& F = o.field();
    std::optional<Ideal> trivial_extra;
    if (!o.record(0).alternates.empty())
        trivial_extra = o.record(0).alternates.front();
    std::vector<Ideal> out;
    auto alternative = [&](Elem k, Ideal const& I) {
        for (auto const& A : o.record(k).alternates)
            if (A != I)
                return A;
        return trivial_extra ? F.mul(I, *trivial_extra) : I;
    };
    if (spec.kind == SubmoduleKind::ramified) {
        for (u64 p : o.discriminant().ramified_primes())
            if (o.modulus().finite % static_cast<i64>(p) != 0) {
                Ideal P = F.primes_above(p).front();
                out.push_back(variant == 0 ? P : alternative(o.classify(P), P));
            }
    } else {
        for (Elem g : generating_set(o.group(), submodule_mask(o, spec)))
            out.push_back(variant == 0 ? o.record(g).rep : alternative(g, o.record(g).rep));
    }
    if (variant != 0 && trivial_extra)
        out.push_back(*trivial_extra);
    return out;
}

} // namespace cgras::rayoracle

#endif
