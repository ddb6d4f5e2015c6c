#ifndef HMT_VERDICT_HPP
#define HMT_VERDICT_HPP

#include <string_view>

namespace hmt {

/// Three-valued outcome of a depth-bounded check.
enum class Verdict { holds, fails, unknown };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::unknown: return "unknown-at-depth";
    }
    return "?";
}

/// Conjunction: any failure fails, otherwise any unknown is unknown.
constexpr Verdict both(Verdict a, Verdict b) {
    if (a == Verdict::fails || b == Verdict::fails) return Verdict::fails;
    if (a == Verdict::unknown || b == Verdict::unknown) return Verdict::unknown;
    return Verdict::holds;
}

/// Disjunction: any success holds, otherwise any unknown is unknown.
constexpr Verdict either(Verdict a, Verdict b) {
    if (a == Verdict::holds || b == Verdict::holds) return Verdict::holds;
    if (a == Verdict::unknown || b == Verdict::unknown) return Verdict::unknown;
    return Verdict::fails;
}

}  // namespace hmt

#endif
