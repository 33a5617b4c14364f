#ifndef CGRAS_F2_HPP
#define CGRAS_F2_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgras {

/* Dense matrix over the two-element field, rows packed into 64-bit words. */
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0)
    {}

    static F2Matrix identity(std::size_t n)
    {
        F2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const
    {
        check(r, c);
        return (bits_[r * words_ + c / 64] >> (c % 64)) & 1U;
    }

    void set(std::size_t r, std::size_t c, bool v)
    {
        check(r, c);
        std::uint64_t mask = std::uint64_t{1} << (c % 64);
        auto& w = bits_[r * words_ + c / 64];
        w = v ? (w | mask) : (w & ~mask);
    }

    /* Appends a row given as a 0/1 vector of length cols(). */
    void append_row(std::vector<std::uint8_t> const& row)
    {
        if (row.size() != cols_)
            throw std::invalid_argument("F2Matrix::append_row: wrong length");
        bits_.resize(bits_.size() + words_, 0);
        ++rows_;
        for (std::size_t c = 0; c < cols_; ++c)
            set(rows_ - 1, c, row[c] != 0);
    }

    bool row_sum(std::size_t r) const
    {
        unsigned parity = 0;
        for (std::size_t w = 0; w < words_; ++w)
            parity ^= static_cast<unsigned>(__builtin_popcountll(bits_[r * words_ + w]) & 1);
        return parity != 0;
    }

    F2Matrix transpose() const
    {
        F2Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (get(r, c))
                    t.set(c, r, true);
        return t;
    }

    /* Rank by Gaussian elimination on a private copy of the rows. */
    std::size_t rank() const
    {
        std::vector<std::uint64_t> m = bits_;
        std::size_t rank = 0;
        for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
            std::size_t w = c / 64;
            std::uint64_t mask = std::uint64_t{1} << (c % 64);
            std::size_t pivot = rank;
            while (pivot < rows_ && !(m[pivot * words_ + w] & mask))
                ++pivot;
            if (pivot == rows_)
                continue;
            if (pivot != rank)
                for (std::size_t k = 0; k < words_; ++k)
                    std::swap(m[pivot * words_ + k], m[rank * words_ + k]);
            for (std::size_t r = 0; r < rows_; ++r)
                if (r != rank && (m[r * words_ + w] & mask))
                    for (std::size_t k = w; k < words_; ++k)
                        m[r * words_ + k] ^= m[rank * words_ + k];
            ++rank;
        }
        return rank;
    }

    std::string to_string() const
    {
        std::string s;
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c)
                s += get(r, c) ? '1' : '0';
            s += '\n';
        }
        return s;
    }

    friend bool operator==(F2Matrix const&, F2Matrix const&) = default;

private:
    void check(std::size_t r, std::size_t c) const
    {
        if (r >= rows_ || c >= cols_)
            throw std::out_of_range("F2Matrix index");
    }

    std::size_t rows_ = 0, cols_ = 0, words_ = 0;
    std::vector<std::uint64_t> bits_;
};

inline std::size_t f2_rank(F2Matrix const& m) { return m.rank(); }

} // namespace cgras

#endif
