#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rumorlab/rng.hpp"

namespace rumorlab {

/// Permutation of {0, ..., n-1} stored as an image table.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
        std::vector<std::uint8_t> seen(image_.size(), 0);
        for (auto v : image_) {
            if (v >= image_.size() || seen[v]) throw std::invalid_argument("Permutation: not a bijection");
            seen[v] = 1;
        }
    }

    static Permutation identity(std::size_t n) {
        std::vector<std::uint32_t> img(n);
        std::iota(img.begin(), img.end(), 0u);
        return Permutation(std::move(img));
    }

    std::size_t size() const { return image_.size(); }

    std::uint32_t operator()(std::uint32_t x) const {
        if (x >= image_.size()) throw std::out_of_range("Permutation::operator()");
        return image_[x];
    }

    Permutation inverse() const {
        std::vector<std::uint32_t> inv(image_.size());
        for (std::uint32_t x = 0; x < image_.size(); ++x) inv[image_[x]] = x;
        return Permutation(std::move(inv));
    }

    /// Composition (this ∘ other): x ↦ this(other(x)).
    Permutation compose(const Permutation& other) const {
        if (other.size() != size()) throw std::invalid_argument("Permutation::compose: size mismatch");
        std::vector<std::uint32_t> img(size());
        for (std::uint32_t x = 0; x < size(); ++x) img[x] = image_[other.image_[x]];
        return Permutation(std::move(img));
    }

    const std::vector<std::uint32_t>& image() const { return image_; }

    bool operator==(const Permutation&) const = default;

private:
    std::vector<std::uint32_t> image_;
};

/// Uniformly random permutation of {0, ..., n-1} (Fisher-Yates).
inline Permutation random_permutation(std::size_t n, RandomEngine& rng) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(img[i - 1], img[j]);
    }
    return Permutation(std::move(img));
}

}  // namespace rumorlab
