#ifndef HMT_PARALLEL_HPP
#define HMT_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace hmt {

enum class SearchStatus { found, exhausted, budget_exhausted };

inline std::string_view to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::exhausted: return "exhausted";
        case SearchStatus::budget_exhausted: return "budget-exhausted";
    }
    return "?";
}

/// Node counter for one depth-first branch, with a record of when each new
/// depth was first reached so a merge can replay any smaller budget.
class NodeMeter {
public:
    explicit NodeMeter(std::uint64_t limit) : limit_(limit) {}

    /// Counts one node; false once the limit is exceeded.
    bool tick() { return ++nodes_ <= limit_; }
    void reached(std::size_t depth) {
        if (depth > best_) {
            best_ = depth;
            depth_marks_.emplace_back(nodes_, depth);
        }
    }
    std::uint64_t nodes() const { return nodes_; }
    std::size_t best_depth() const { return best_; }
    const std::vector<std::pair<std::uint64_t, std::size_t>>& marks() const { return depth_marks_; }

private:
    std::uint64_t limit_;
    std::uint64_t nodes_ = 0;
    std::size_t best_ = 0;
    std::vector<std::pair<std::uint64_t, std::size_t>> depth_marks_;
};

template <class R>
struct BranchOutcome {
    std::optional<R> found;
    /// Nodes used up to the witness, or for the whole branch.
    std::uint64_t nodes = 0;
    bool hit_limit = false;
    bool cancelled = false;
    std::vector<std::pair<std::uint64_t, std::size_t>> depth_marks;
};

template <class R>
struct OrderedResult {
    SearchStatus status = SearchStatus::exhausted;
    std::optional<R> value;
    std::uint64_t nodes = 0;
    std::size_t best_depth = 0;
};

/**
 * Runs `branches` independent depth-first branches and merges them as if
 * they had been explored one after another in index order under a shared
 * node limit. Each branch gets the full limit and reports its own node
 * count; the merge charges branches in order, so the result (witness, node
 * count, status, best depth) is the same for every parallelism. Branches
 * after the first successful one are cancelled through `first_found`.
 *
 * fn(i, limit, first_found) -> BranchOutcome<R>
 */
template <class R, class Fn>
OrderedResult<R> run_ordered(std::size_t branches, std::uint64_t limit, unsigned parallelism, Fn&& fn) {
    std::vector<BranchOutcome<R>> out(branches);
    std::atomic<std::size_t> first_found{std::numeric_limits<std::size_t>::max()};
    if (parallelism <= 1 || branches <= 1) {
        std::uint64_t spent = 0;
        for (std::size_t i = 0; i < branches; ++i) {
            out[i] = fn(i, limit - std::min(spent, limit), first_found);
            spent += out[i].nodes;
            if (out[i].found || out[i].hit_limit || spent > limit) break;
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < branches; i = next++) {
                if (i > first_found.load()) {
                    out[i].cancelled = true;
                    continue;
                }
                out[i] = fn(i, limit, first_found);
                if (out[i].found) {
                    auto cur = first_found.load();
                    while (i < cur && !first_found.compare_exchange_weak(cur, i)) {
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        const unsigned n = static_cast<unsigned>(std::min<std::size_t>(parallelism, branches));
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    OrderedResult<R> r;
    std::uint64_t spent = 0;
    for (std::size_t i = 0; i < branches; ++i) {
        const auto& o = out[i];
        const std::uint64_t remaining = limit - spent;
        for (const auto& [at, depth] : o.depth_marks)
            if (at <= remaining) r.best_depth = std::max(r.best_depth, depth);
        if (o.found && o.nodes <= remaining) {
            r.status = SearchStatus::found;
            r.value = o.found;
            r.nodes = spent + o.nodes;
            return r;
        }
        if (o.hit_limit || o.nodes > remaining || o.cancelled) {
            r.status = SearchStatus::budget_exhausted;
            r.nodes = limit;
            return r;
        }
        spent += o.nodes;
    }
    r.status = SearchStatus::exhausted;
    r.nodes = spent;
    return r;
}

}  // namespace hmt

#endif
