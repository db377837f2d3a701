#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "rumorlab/rng.hpp"

namespace rumorlab {

/// Tail policy of an infinite 0/1 pattern beyond its finite prefix.
struct Tail {
    enum class Kind { AllOnes, AllZeros, Bernoulli };
    Kind kind = Kind::AllOnes;
    double p = 0.5;             // success rate, Bernoulli only
    std::uint64_t seed = 0;     // Bernoulli only

    static Tail ones() { return {Kind::AllOnes, 0.0, 0}; }
    static Tail zeros() { return {Kind::AllZeros, 0.0, 0}; }
    static Tail bern(double p, std::uint64_t seed) {
        if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("Tail::bern: p must be in (0,1]");
        return {Kind::Bernoulli, p, seed};
    }
};

/// An infinite binary pattern b = (b1, b2, ...), 1-indexed. Represented as a
/// finite prefix plus a tail policy; ODD/EVEN/suffix views share the same
/// underlying pattern through a composed affine index map, so no bits are
/// ever materialized for a view. Bernoulli tail bits are a pure function of
/// (seed, absolute index), which makes repeated reads and reads through
/// different views agree, and makes concurrent reads trivially safe.
class BitStream {
public:
    BitStream() : core_(std::make_shared<Core>()) {}

    static BitStream from_bits(std::vector<std::uint8_t> prefix, Tail tail) {
        for (auto b : prefix)
            if (b > 1) throw std::invalid_argument("BitStream: prefix entries must be 0 or 1");
        auto core = std::make_shared<Core>();
        core->prefix = std::move(prefix);
        core->tail = tail;
        return BitStream(std::move(core), 1, 0);
    }

    /// Parses a string of '0'/'1' characters.
    static BitStream parse(const std::string& bits, Tail tail) {
        std::vector<std::uint8_t> prefix;
        prefix.reserve(bits.size());
        for (char ch : bits) {
            if (ch != '0' && ch != '1') throw std::invalid_argument("BitStream: pattern must be 0/1");
            prefix.push_back(static_cast<std::uint8_t>(ch - '0'));
        }
        return from_bits(std::move(prefix), tail);
    }

    static BitStream all_ones() { return from_bits({}, Tail::ones()); }
    static BitStream all_zeros() { return from_bits({}, Tail::zeros()); }

    /// Bit at 1-based position i.
    int at(std::int64_t i) const {
        if (i < 1) throw std::invalid_argument("BitStream::at: position must be >= 1");
        return core_->bit(mult_ * i + off_);
    }

    /// View of (b2, b3, ...).
    BitStream suffix() const { return BitStream(core_, mult_, off_ + mult_); }

    /// View of the odd-indexed subsequence (b1, b3, b5, ...).
    BitStream odd() const { return BitStream(core_, 2 * mult_, off_ - mult_); }

    /// View of the even-indexed subsequence (b2, b4, b6, ...).
    BitStream even() const { return BitStream(core_, 2 * mult_, off_); }

    /// Copy of this pattern with position pos forced to value; every other
    /// position reads exactly as before (Bernoulli tails included).
    BitStream with_bit(std::int64_t pos, int value) const {
        if (pos < 1) throw std::invalid_argument("BitStream::with_bit: position must be >= 1");
        if (value != 0 && value != 1) throw std::invalid_argument("BitStream::with_bit: bit value");
        const std::int64_t abs = mult_ * pos + off_;
        auto core = std::make_shared<Core>();
        core->tail = core_->tail;
        const std::int64_t len = std::max<std::int64_t>(abs, static_cast<std::int64_t>(core_->prefix.size()));
        core->prefix.reserve(static_cast<std::size_t>(len));
        for (std::int64_t j = 1; j <= len; ++j)
            core->prefix.push_back(static_cast<std::uint8_t>(core_->bit(j)));
        core->prefix[static_cast<std::size_t>(abs - 1)] = static_cast<std::uint8_t>(value);
        return BitStream(std::move(core), mult_, off_);
    }

    /// True iff every position of this view is provably 0: all visible prefix
    /// bits are 0 and the tail policy is AllZeros. Bernoulli tails are never
    /// provably zero.
    bool is_all_zeros() const {
        if (core_->tail.kind != Tail::Kind::AllZeros) return false;
        const auto plen = static_cast<std::int64_t>(core_->prefix.size());
        for (std::int64_t i = 1; mult_ * i + off_ <= plen; ++i)
            if (core_->prefix[static_cast<std::size_t>(mult_ * i + off_ - 1)] != 0) return false;
        return true;
    }

    /// Number of zeros in the window [1..len] (|b|_0 over a finite window).
    std::int64_t count_zeros(std::int64_t len) const {
        std::int64_t z = 0;
        for (std::int64_t i = 1; i <= len; ++i) z += (at(i) == 0);
        return z;
    }

    /// Absolute position in the underlying pattern that view position i maps to.
    std::int64_t map_index(std::int64_t i) const { return mult_ * i + off_; }

private:
    struct Core {
        std::vector<std::uint8_t> prefix;
        Tail tail;

        int bit(std::int64_t abs) const {
            if (abs <= static_cast<std::int64_t>(prefix.size()))
                return prefix[static_cast<std::size_t>(abs - 1)];
            switch (tail.kind) {
                case Tail::Kind::AllOnes: return 1;
                case Tail::Kind::AllZeros: return 0;
                case Tail::Kind::Bernoulli: {
                    const std::uint64_t u = mix64(tail.seed ^ mix64(static_cast<std::uint64_t>(abs)));
                    return (static_cast<double>(u >> 11) * 0x1.0p-53 < tail.p) ? 1 : 0;
                }
            }
            return 0;
        }
    };

    BitStream(std::shared_ptr<const Core> core, std::int64_t mult, std::int64_t off)
        : core_(std::move(core)), mult_(mult), off_(off) {}

    std::shared_ptr<const Core> core_;
    std::int64_t mult_ = 1;  // absolute = mult_ * i + off_
    std::int64_t off_ = 0;
};

/// Odd-indexed subsequence (s1, s3, ...) of a finite sequence.
template <typename T>
std::vector<T> odd_split(const std::vector<T>& s) {
    std::vector<T> out;
    out.reserve((s.size() + 1) / 2);
    for (std::size_t i = 0; i < s.size(); i += 2) out.push_back(s[i]);
    return out;
}

/// Even-indexed subsequence (s2, s4, ...) of a finite sequence.
template <typename T>
std::vector<T> even_split(const std::vector<T>& s) {
    std::vector<T> out;
    out.reserve(s.size() / 2);
    for (std::size_t i = 1; i < s.size(); i += 2) out.push_back(s[i]);
    return out;
}

/// Inverse of odd_split/even_split: interleaves (o1, e1, o2, e2, ...).
template <typename T>
std::vector<T> interleave(const std::vector<T>& odds, const std::vector<T>& evens) {
    if (odds.size() < evens.size() || odds.size() > evens.size() + 1)
        throw std::invalid_argument("interleave: size mismatch");
    std::vector<T> out;
    out.reserve(odds.size() + evens.size());
    for (std::size_t i = 0; i < odds.size(); ++i) {
        out.push_back(odds[i]);
        if (i < evens.size()) out.push_back(evens[i]);
    }
    return out;
}

}  // namespace rumorlab
