#ifndef CGRAS_MODULUS_HPP
#define CGRAS_MODULUS_HPP

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgras/arith.hpp"

namespace cgras {

/* Modulus of Q: finite part m_f times (optionally) the real place. */
struct Modulus {
    i64 finite = 1;
    bool infinite = false;

    Modulus() = default;
    Modulus(i64 mf, bool inf) : finite(mf), infinite(inf)
    {
        if (mf < 1)
            throw std::invalid_argument("Modulus: finite part must be positive");
    }

    static Modulus trivial() { return {1, false}; }
    static Modulus real_places() { return {1, true}; }

    /* exponent of p in m_f */
    int exponent(u64 p) const
    {
        int e = 0;
        i64 m = finite;
        while (m % static_cast<i64>(p) == 0) {
            m /= static_cast<i64>(p);
            ++e;
        }
        return e;
    }

    std::vector<u64> primes() const
    {
        return finite == 1 ? std::vector<u64>{} : arith::factorize(finite).primes();
    }

    friend bool operator==(Modulus const&, Modulus const&) = default;
};

/* Finite set S of places of Q; the infinite place is always a member. */
class PlaceSet {
public:
    PlaceSet() = default;
    explicit PlaceSet(std::vector<u64> primes) : primes_(std::move(primes))
    {
        std::sort(primes_.begin(), primes_.end());
        primes_.erase(std::unique(primes_.begin(), primes_.end()), primes_.end());
        for (u64 p : primes_)
            if (!arith::is_prime(p))
                throw std::invalid_argument("PlaceSet: " + std::to_string(p) + " is not prime");
    }

    static PlaceSet infinite_only() { return PlaceSet{}; }

    std::vector<u64> const& finite_primes() const { return primes_; }
    bool contains(u64 p) const { return std::binary_search(primes_.begin(), primes_.end(), p); }
    bool only_infinite() const { return primes_.empty(); }

    /* S must avoid the support of m_f. */
    void check_disjoint(Modulus const& m) const
    {
        for (u64 p : primes_)
            if (m.finite % static_cast<i64>(p) == 0)
                throw std::invalid_argument("S meets the support of the modulus at " + std::to_string(p));
    }

    std::string to_string() const
    {
        std::string s = "inf";
        for (u64 p : primes_)
            s += " " + std::to_string(p);
        return s;
    }

    friend bool operator==(PlaceSet const&, PlaceSet const&) = default;

private:
    std::vector<u64> primes_;
};

} // namespace cgras

#endif
