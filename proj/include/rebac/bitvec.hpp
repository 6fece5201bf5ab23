#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace rebac {

/// Fixed-size bit vector with word-level popcount scans; the dataset storage
/// contract is one BitVec per feature (column-major).
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n, bool value = false)
        : n_(n), words_((n + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        trim();
    }

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// popcount(this & other)
    std::size_t countAnd(const BitVec& other) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
        return c;
    }

    /// popcount(this & a & b)
    std::size_t countAnd(const BitVec& a, const BitVec& b) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & a.words_[i] & b.words_[i]));
        return c;
    }

    /// popcount(this & a & ~b)
    std::size_t countAndNot(const BitVec& a, const BitVec& b) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & a.words_[i] & ~b.words_[i]));
        return c;
    }

    BitVec operator&(const BitVec& other) const {
        BitVec r(n_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            r.words_[i] = words_[i] & other.words_[i];
        return r;
    }

    /// this & ~other
    BitVec andNot(const BitVec& other) const {
        BitVec r(n_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            r.words_[i] = words_[i] & ~other.words_[i];
        r.trim();
        return r;
    }

    /// Sets bits [begin, end).
    void setRange(std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) set(i, true);
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    /// true iff (this & ~other) has any set bit.
    bool anyAndNot(const BitVec& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return true;
        return false;
    }

    /// Index of the lowest set bit; n_ when none.
    std::size_t firstSet() const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return (i << 6) + static_cast<std::size_t>(std::countr_zero(words_[i]));
        return n_;
    }

    friend bool operator==(const BitVec&, const BitVec&) = default;

private:
    void trim() {
        if (n_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace rebac
