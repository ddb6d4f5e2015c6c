#ifndef HMT_BLOCK_HPP
#define HMT_BLOCK_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmt {

/// Bit for the 1-based index `i` inside a 64-bit index mask.
constexpr std::uint64_t index_bit(std::size_t i) { return std::uint64_t{1} << (i - 1); }

/// Largest 1-based index present in a nonzero mask.
constexpr std::size_t mask_max(std::uint64_t mask) { return 64 - std::countl_zero(mask); }

/// Smallest 1-based index present in a nonzero mask.
constexpr std::size_t mask_min(std::uint64_t mask) { return std::countr_zero(mask) + 1; }

/// Mask with all indices in [lo, hi] (1-based, inclusive).
constexpr std::uint64_t index_range_mask(std::size_t lo, std::size_t hi) {
    if (lo > hi) return 0;
    const std::uint64_t upto_hi = hi >= 64 ? ~std::uint64_t{0} : (index_bit(hi + 1) - 1);
    const std::uint64_t below_lo = index_bit(lo) - 1;
    return upto_hi & ~below_lo;
}

/// Block order on index masks: every index of `f` is below every index of `h`.
constexpr bool mask_block_less(std::uint64_t f, std::uint64_t h) {
    return f != 0 && h != 0 && mask_max(f) < mask_min(h);
}

/**
 * Nonempty finite set of 1-based natural indices.
 *
 * Blocks index finite sums a_F. They are stored sorted; the natural
 * comparison is lexicographic on the sorted indices, which is NOT the block
 * order F < H (use block_less for that).
 */
class Block {
public:
    Block(std::initializer_list<std::size_t> indices) : Block(std::vector<std::size_t>(indices)) {}

    explicit Block(std::vector<std::size_t> indices) : idx_(std::move(indices)) {
        std::sort(idx_.begin(), idx_.end());
        idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
        if (idx_.empty()) throw std::invalid_argument("block must be nonempty");
        if (idx_.front() == 0) throw std::invalid_argument("block indices are 1-based");
    }

    static Block from_mask(std::uint64_t mask) {
        if (mask == 0) throw std::invalid_argument("block must be nonempty");
        std::vector<std::size_t> out;
        for (std::uint64_t m = mask; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
        return Block(std::move(out));
    }

    std::size_t min() const { return idx_.front(); }
    std::size_t max() const { return idx_.back(); }
    std::size_t size() const { return idx_.size(); }
    const std::vector<std::size_t>& indices() const { return idx_; }
    bool contains(std::size_t i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

    std::uint64_t mask() const {
        if (max() > 64) throw std::out_of_range("block index exceeds 64 for mask form");
        std::uint64_t m = 0;
        for (auto i : idx_) m |= index_bit(i);
        return m;
    }

    friend bool operator==(const Block&, const Block&) = default;
    friend auto operator<=>(const Block& a, const Block& b) { return a.idx_ <=> b.idx_; }

    std::string str() const {
        std::ostringstream os;
        os << '{';
        for (std::size_t k = 0; k < idx_.size(); ++k) os << (k ? "," : "") << idx_[k];
        os << '}';
        return os.str();
    }

private:
    std::vector<std::size_t> idx_;
};

inline std::ostream& operator<<(std::ostream& os, const Block& b) { return os << b.str(); }

/// F < H in the block order: max(F) < min(H).
inline bool block_less(const Block& f, const Block& h) { return f.max() < h.min(); }

/// A finite sequence of blocks F_1 < F_2 < ... in the block order.
class BlockSequence {
public:
    BlockSequence() = default;
    BlockSequence(std::initializer_list<Block> blocks) : BlockSequence(std::vector<Block>(blocks)) {}
    explicit BlockSequence(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
        for (std::size_t i = 1; i < blocks_.size(); ++i) {
            if (!block_less(blocks_[i - 1], blocks_[i])) {
                throw std::invalid_argument("block order violated between positions " + std::to_string(i) +
                                            " and " + std::to_string(i + 1));
            }
        }
    }

    static BlockSequence identity(std::size_t n) {
        std::vector<Block> b;
        for (std::size_t i = 1; i <= n; ++i) b.push_back(Block{i});
        return BlockSequence(std::move(b));
    }

    static BlockSequence from_masks(const std::vector<std::uint64_t>& masks) {
        std::vector<Block> b;
        b.reserve(masks.size());
        for (auto m : masks) b.push_back(Block::from_mask(m));
        return BlockSequence(std::move(b));
    }

    std::size_t size() const { return blocks_.size(); }
    bool empty() const { return blocks_.empty(); }
    const Block& operator[](std::size_t i) const { return blocks_[i]; }
    const std::vector<Block>& blocks() const { return blocks_; }
    auto begin() const { return blocks_.begin(); }
    auto end() const { return blocks_.end(); }
    std::size_t max_index() const { return blocks_.empty() ? 0 : blocks_.back().max(); }

    friend bool operator==(const BlockSequence&, const BlockSequence&) = default;

private:
    std::vector<Block> blocks_;
};

/// Expresses `inner` (which indexes terms of a sumsequence taken with `outer`)
/// directly over the original sequence: block i becomes the union of
/// outer[j] for j in inner[i].
inline BlockSequence compose(const BlockSequence& outer, const BlockSequence& inner) {
    std::vector<Block> out;
    out.reserve(inner.size());
    for (const auto& b : inner) {
        std::vector<std::size_t> idx;
        for (auto j : b.indices()) {
            if (j > outer.size()) throw std::out_of_range("inner block references missing term " + std::to_string(j));
            const auto& ob = outer[j - 1].indices();
            idx.insert(idx.end(), ob.begin(), ob.end());
        }
        out.emplace_back(std::move(idx));
    }
    return BlockSequence(std::move(out));
}

}  // namespace hmt

#endif
