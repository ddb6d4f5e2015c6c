#ifndef HMT_FILTER_HPP
#define HMT_FILTER_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <future>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hmt/semigroup.hpp"

namespace hmt {

/// Subset of the ground {1..g}: bit i-1 stands for point i.
using SubsetMask = std::uint32_t;

/**
 * Extensional family of subsets of a finite ground set {1..g}, g <= 16.
 * Membership is a bitset indexed by subset mask.
 */
class SetFamily {
public:
    explicit SetFamily(unsigned ground) : ground_(ground) {
        if (ground > 16) throw std::invalid_argument("extensional families are limited to ground size 16");
        members_ = PointSet(std::size_t{1} << ground);
    }

    static SetFamily from_sets(unsigned ground, const std::vector<SubsetMask>& sets) {
        SetFamily f(ground);
        for (auto s : sets) f.insert(s);
        return f;
    }

    /// Family number `code`: subset mask A is a member iff bit A of code is set (ground <= 6).
    static SetFamily from_code(unsigned ground, std::uint64_t code) {
        if (ground > 6) throw std::invalid_argument("family codes need ground size <= 6");
        SetFamily f(ground);
        for (SubsetMask a = 0; a < f.subset_count(); ++a)
            if ((code >> a) & 1U) f.members_.set(a);
        return f;
    }

    static SetFamily all_subsets(unsigned ground) {
        SetFamily f(ground);
        f.members_.set();
        return f;
    }

    static SetFamily upward_closure(unsigned ground, const std::vector<SubsetMask>& gens) {
        SetFamily f(ground);
        for (SubsetMask a = 0; a < f.subset_count(); ++a)
            for (auto g : gens)
                if ((g & ~a) == 0) {
                    f.members_.set(a);
                    break;
                }
        return f;
    }

    /// Principal ultrafilter of sets containing `point`.
    static SetFamily principal(unsigned ground, unsigned point) {
        if (point == 0 || point > ground) throw std::out_of_range("point outside ground");
        return upward_closure(ground, {SubsetMask{1} << (point - 1)});
    }

    unsigned ground() const { return ground_; }
    SubsetMask full() const { return static_cast<SubsetMask>((std::uint64_t{1} << ground_) - 1); }
    std::size_t subset_count() const { return members_.size(); }
    SubsetMask complement(SubsetMask a) const { return full() & ~a; }

    bool contains(SubsetMask a) const { return a < members_.size() && members_.test(a); }
    void insert(SubsetMask a) {
        if ((a & ~full()) != 0) throw std::invalid_argument("set is not a subset of the ground");
        members_.set(a);
    }
    std::size_t size() const { return members_.count(); }
    bool empty() const { return members_.none(); }
    const PointSet& bits() const { return members_; }

    std::vector<SubsetMask> members() const {
        std::vector<SubsetMask> out;
        for (auto p = members_.find_first(); p != PointSet::npos; p = members_.find_next(p))
            out.push_back(static_cast<SubsetMask>(p));
        return out;
    }

    bool subset_of(const SetFamily& o) const { return ground_ == o.ground_ && members_.is_subset_of(o.members_); }
    friend bool operator==(const SetFamily& a, const SetFamily& b) {
        return a.ground_ == b.ground_ && a.members_ == b.members_;
    }

    std::string str() const {
        std::ostringstream os;
        os << '{';
        bool first = true;
        for (auto a : members()) {
            os << (first ? "" : ",") << FinSet::from_bits(a).str();
            first = false;
        }
        os << '}';
        return os.str();
    }

private:
    unsigned ground_;
    PointSet members_;
};

/// F+ = {A : complement(A) not in F}.
inline SetFamily plus_dual(const SetFamily& f) {
    SetFamily out(f.ground());
    for (SubsetMask a = 0; a < f.subset_count(); ++a)
        if (!f.contains(f.complement(a))) out.insert(a);
    return out;
}

struct FamilyFlags {
    bool is_filter = false;
    bool is_free_filter = false;
    /// Superfilter conditions (2) upward closure and (3) partition regularity.
    bool is_superfilter = false;
    bool is_ultrafilter = false;
    bool upward_closed = false;
    bool partition_regular = false;
    /// "All members infinite" cannot hold literally on a finite ground; the
    /// superfilter flag above never includes it.
    bool infinite_members_unverifiable = true;
    /// Every filter on a finite ground is principal, so freeness is reported
    /// literally (and is always false for filters).
    bool free_literal_on_finite_ground = true;
};

inline bool upward_closed(const SetFamily& f) {
    for (auto a : f.members())
        for (unsigned i = 0; i < f.ground(); ++i)
            if (!f.contains(a | (SubsetMask{1} << i))) return false;
    return true;
}

inline bool intersection_closed(const SetFamily& f) {
    auto ms = f.members();
    for (auto a : ms)
        for (auto b : ms)
            if (!f.contains(a & b)) return false;
    return true;
}

/// Whenever A1 u A2 is a member, A1 or A2 is a member.
inline bool partition_regular(const SetFamily& f) {
    for (SubsetMask a1 = 0; a1 < f.subset_count(); ++a1)
        for (SubsetMask a2 = a1; a2 < f.subset_count(); ++a2)
            if (f.contains(a1 | a2) && !f.contains(a1) && !f.contains(a2)) return false;
    return true;
}

inline FamilyFlags classify_family(const SetFamily& f) {
    FamilyFlags out;
    out.upward_closed = upward_closed(f);
    out.partition_regular = partition_regular(f);
    out.is_filter = !f.empty() && !f.contains(0) && out.upward_closed && intersection_closed(f);
    if (out.is_filter) {
        SubsetMask meet = f.full();
        for (auto a : f.members()) meet &= a;
        out.is_free_filter = meet == 0;
        out.is_ultrafilter = true;
        for (SubsetMask a = 0; a < f.subset_count() && out.is_ultrafilter; ++a)
            out.is_ultrafilter = f.contains(a) || f.contains(f.complement(a));
    }
    out.is_superfilter = out.upward_closed && out.partition_regular;
    return out;
}

/// Surrogate superfilter on a finite ground: conditions (2), (3), nonempty, no empty member.
inline bool superfilter_surrogate(const SetFamily& f) {
    return !f.empty() && !f.contains(0) && upward_closed(f) && partition_regular(f);
}

struct LawResult {
    int id = 0;
    std::string name;
    std::uint64_t instances = 0;
    std::uint64_t violations = 0;
    std::string first_violation;
};

struct DualityReport {
    unsigned ground_size = 0;
    std::uint64_t families_scanned = 0;
    std::vector<LawResult> laws;
    std::vector<std::string> caveats;

    std::uint64_t total_violations() const {
        std::uint64_t v = 0;
        for (const auto& l : laws) v += l.violations;
        return v;
    }
};

namespace detail {

struct LawTally {
    std::uint64_t instances[6] = {};
    std::uint64_t violations[6] = {};
    std::string first[6];

    void record(int law, bool ok, const std::string& what) {
        ++instances[law];
        if (ok) return;
        if (violations[law]++ == 0) first[law] = what;
    }
    void merge(const LawTally& o) {
        for (int i = 0; i < 6; ++i) {
            instances[i] += o.instances[i];
            if (violations[i] == 0 && o.violations[i] != 0) first[i] = o.first[i];
            violations[i] += o.violations[i];
        }
    }
};

inline std::uint64_t family_code(const SetFamily& f) {
    std::uint64_t c = 0;
    for (auto a : f.members()) c |= std::uint64_t{1} << a;
    return c;
}

inline LawTally scan_families(unsigned g, std::uint64_t lo, std::uint64_t hi,
                              const std::vector<std::uint64_t>& dual_codes) {
    LawTally t;
    const std::uint64_t count = dual_codes.size();
    const SubsetMask subsets = SubsetMask{1} << g;
    for (std::uint64_t code = lo; code < hi; ++code) {
        const std::uint64_t dual = dual_codes[code];
        const std::string name = "family#" + std::to_string(code);

        // (1) antitone: F1 <= F2 implies F2+ <= F1+. Exhaustive over pairs for
        // g <= 3; for g = 4 over covering pairs F2 = F1 + {A}, which implies
        // the general case by transitivity.
        if (g <= 3) {
            for (std::uint64_t sup = 0; sup < count; ++sup) {
                if ((code & ~sup) != 0) continue;
                t.record(0, (dual_codes[sup] & ~dual) == 0, name + " <= family#" + std::to_string(sup));
            }
        } else {
            for (SubsetMask a = 0; a < subsets; ++a) {
                if ((code >> a) & 1U) continue;
                const std::uint64_t sup = code | (std::uint64_t{1} << a);
                t.record(0, (dual_codes[sup] & ~dual) == 0, name + " + one set");
            }
        }

        // (2) F++ = F
        t.record(1, dual_codes[dual] == code, name);

        const auto f = SetFamily::from_code(g, code);
        const auto flags = classify_family(f);
        const auto fp = SetFamily::from_code(g, dual);

        // (3) filters: F+ satisfies superfilter (2),(3) and contains F
        if (flags.is_filter) {
            const auto dflags = classify_family(fp);
            t.record(2, dflags.upward_closed && dflags.partition_regular && f.subset_of(fp), name);
        }
        // (4) superfilter surrogate: A+ is a filter contained in A
        if (superfilter_surrogate(f)) {
            t.record(3, classify_family(fp).is_filter && fp.subset_of(f), name);
        }
        // (5) A in F+, B in F implies A & B in F+
        if (flags.is_filter) {
            for (auto a : fp.members())
                for (auto b : f.members())
                    t.record(4, fp.contains(a & b), name + " A=" + FinSet::from_bits(a).str() + " B=" +
                                                        FinSet::from_bits(b).str());
        }
        // (6) ultrafilters are self-dual
        if (flags.is_ultrafilter) t.record(5, dual == code, name);
    }
    return t;
}

}  // namespace detail

/**
 * Exhaustively checks the six duality laws over every family of subsets of
 * {1..ground_size}, ground_size in 1..4. The scan is split into contiguous
 * ranges of family codes run concurrently; tallies merge in range order, so
 * the report does not depend on the thread count.
 */
inline DualityReport verify_duality_laws(unsigned ground_size, unsigned threads = 0) {
    if (ground_size == 0) throw std::invalid_argument("ground size must be at least 1");
    if (ground_size > 4) throw std::invalid_argument("ground size above 4 is refused: 2^(2^g) families");
    const unsigned g = ground_size;
    const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << g);
    std::vector<std::uint64_t> dual(count);
    for (std::uint64_t code = 0; code < count; ++code)
        dual[code] = detail::family_code(plus_dual(SetFamily::from_code(g, code)));

    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
    std::vector<std::future<detail::LawTally>> parts;
    for (unsigned i = 0; i < threads; ++i) {
        const std::uint64_t lo = count * i / threads, hi = count * (i + 1) / threads;
        parts.push_back(std::async(std::launch::async, detail::scan_families, g, lo, hi, std::cref(dual)));
    }
    detail::LawTally total;
    for (auto& p : parts) total.merge(p.get());

    static const char* names[6] = {
        "F1 <= F2 implies F2+ <= F1+",
        "F++ = F",
        "filter F: F+ is a superfilter containing F",
        "superfilter A: A+ is a filter contained in A",
        "filter F: A in F+ and B in F give A & B in F+",
        "ultrafilter p: p+ = p",
    };
    DualityReport r;
    r.ground_size = g;
    r.families_scanned = count;
    for (int i = 0; i < 6; ++i)
        r.laws.push_back(LawResult{i + 1, names[i], total.instances[i], total.violations[i], total.first[i]});
    if (g > 3) r.caveats.push_back("law 1 checked on covering pairs only");
    r.caveats.push_back("finite ground: no free filters exist; law 3 is checked for every filter");
    r.caveats.push_back("finite ground: superfilter condition (1) is unverifiable; law 4 uses conditions (2),(3), "
                        "nonemptiness and the empty set excluded");
    return r;
}

}  // namespace hmt

#endif
