#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rumorlab {

/// Arithmetic progression {first, first + 2^log2_step, ...} of processor ids,
/// `len` terms. The todo lists arising in the halving protocol are always of
/// this form: splitting a progression with step 2^m into its odd and even
/// halves yields two progressions with step 2^(m+1). O(1) space per list.
struct TodoProgression {
    std::uint64_t first = 0;
    std::uint64_t len = 0;
    std::uint32_t log2_step = 0;

    std::uint64_t step() const { return std::uint64_t{1} << log2_step; }

    std::uint64_t at(std::uint64_t i) const {  // 0-based
        if (i >= len) throw std::out_of_range("TodoProgression::at");
        return first + i * step();
    }

    std::uint64_t head() const { return at(0); }

    /// The progression minus its first element.
    TodoProgression rest() const {
        if (len == 0) throw std::out_of_range("TodoProgression::rest");
        return {first + step(), len - 1, log2_step};
    }

    /// Odd-indexed half of this progression (1st, 3rd, ... elements).
    TodoProgression odd_half() const {
        return {first, (len + 1) / 2, log2_step + 1};
    }

    /// Even-indexed half (2nd, 4th, ... elements).
    TodoProgression even_half() const {
        return {first + step(), len / 2, log2_step + 1};
    }

    std::vector<std::uint64_t> to_vector() const {
        std::vector<std::uint64_t> out;
        out.reserve(len);
        for (std::uint64_t i = 0; i < len; ++i) out.push_back(at(i));
        return out;
    }

    bool operator==(const TodoProgression&) const = default;
};

/// Outcome of one contact attempt on a progression todo list: the head that
/// was contacted, the list the caller keeps, and the list handed over (empty
/// when the contact failed).
struct ProgressionSplit {
    std::uint64_t target;
    TodoProgression keep;
    TodoProgression give;
};

/// Applies one protocol step to a nonempty progression. On success the caller
/// keeps the odd half of the tail and hands over the even half; on failure the
/// caller keeps the whole tail.
inline ProgressionSplit split_progression(const TodoProgression& todo, bool success) {
    if (todo.len == 0) throw std::invalid_argument("split_progression: empty list");
    const TodoProgression tail = todo.rest();
    if (!success) return {todo.head(), tail, {tail.first, 0, tail.log2_step}};
    return {todo.head(), tail.odd_half(), tail.even_half()};
}

}  // namespace rumorlab
