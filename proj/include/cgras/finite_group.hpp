#ifndef CGRAS_FINITE_GROUP_HPP
#define CGRAS_FINITE_GROUP_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cgras {

/* Finite abelian group given by its Cayley table. Element 0 is the identity. */
class CayleyGroup {
public:
    using Elem = std::uint32_t;

    CayleyGroup() : n_(1), table_{0} {}
    CayleyGroup(std::size_t order, std::vector<Elem> table) : n_(order), table_(std::move(table))
    {
        if (table_.size() != n_ * n_)
            throw std::invalid_argument("CayleyGroup: table size mismatch");
    }

    std::size_t order() const { return n_; }
    Elem mul(Elem a, Elem b) const { return table_[a * n_ + b]; }
    std::vector<Elem> const& table() const { return table_; }

    Elem power(Elem a, std::uint64_t k) const
    {
        Elem r = 0, base = a;
        while (k) {
            if (k & 1)
                r = mul(r, base);
            base = mul(base, base);
            k >>= 1;
        }
        return r;
    }

    Elem inverse(Elem a) const
    {
        for (Elem b = 0; b < n_; ++b)
            if (mul(a, b) == 0)
                return b;
        throw std::logic_error("CayleyGroup: element without inverse");
    }

    std::size_t element_order(Elem a) const
    {
        std::size_t k = 1;
        for (Elem x = a; x != 0; x = mul(x, a))
            ++k;
        return k;
    }

    /* Membership mask of the subgroup generated by gens. */
    std::vector<bool> subgroup(std::vector<Elem> const& gens) const
    {
        std::vector<bool> in(n_, false);
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

    static std::size_t count(std::vector<bool> const& mask)
    {
        return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
    }

    /* coset id of every element modulo the subgroup given by mask; ids are
     * assigned in order of first appearance, so the identity coset is 0 */
    std::vector<Elem> coset_ids(std::vector<bool> const& h, std::size_t* n_cosets = nullptr) const
    {
        std::vector<Elem> hs;
        for (Elem x = 0; x < n_; ++x)
            if (h[x])
                hs.push_back(x);
        constexpr Elem unset = ~Elem{0};
        std::vector<Elem> id(n_, unset);
        Elem next = 0;
        for (Elem x = 0; x < n_; ++x) {
            if (id[x] != unset)
                continue;
            for (Elem y : hs)
                id[mul(x, y)] = next;
            ++next;
        }
        if (n_cosets)
            *n_cosets = next;
        return id;
    }

    /* Quotient by the subgroup h; also returns the projection. */
    CayleyGroup quotient(std::vector<bool> const& h, std::vector<Elem>* projection = nullptr) const
    {
        std::size_t m = 0;
        auto id = coset_ids(h, &m);
        std::vector<Elem> rep(m);
        for (Elem x = n_; x-- > 0;)
            rep[id[x]] = x;
        std::vector<Elem> t(m * m);
        for (Elem i = 0; i < m; ++i)
            for (Elem j = 0; j < m; ++j)
                t[i * m + j] = id[mul(rep[i], rep[j])];
        if (projection)
            *projection = id;
        return {m, std::move(t)};
    }

    /* number of x with x^k = 1 */
    std::size_t torsion_count(std::uint64_t k) const
    {
        std::size_t c = 0;
        for (Elem x = 0; x < n_; ++x)
            if (power(x, k) == 0)
                ++c;
        return c;
    }

private:
    std::size_t n_;
    std::vector<Elem> table_;
};

} // namespace cgras

#endif
