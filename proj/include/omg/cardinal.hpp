#pragma once

#include "omg/sequences.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace omg {

// A finite set of distinct functions {0..m-1} -> {0..r-1}, the finite
// stand-in for subsets of ^ω ω.
struct FunctionFamily {
    int m = 1;
    int r = 1;
    std::vector<std::vector<int>> funcs;

    void validate() const;
    int size() const { return static_cast<int>(funcs.size()); }
};

enum class PropertyKind { EverywhereDifferent, EverywhereAbove, OftenAbove };

struct FamilyProperty {
    PropertyKind kind = PropertyKind::EverywhereDifferent;
    int t = 0;  // OftenAbove only

    static FamilyProperty dif() { return {PropertyKind::EverywhereDifferent, 0}; }
    static FamilyProperty above() { return {PropertyKind::EverywhereAbove, 0}; }
    static FamilyProperty often(int t) { return {PropertyKind::OftenAbove, t}; }
};

std::string to_string(const FamilyProperty& p);

struct PropertyResult {
    bool holds = false;
    std::optional<std::vector<int>> counterexample_g;  // set iff !holds
};

// Exhaustive over adversary functions g. EverywhereDifferent quantifies g
// over {0..r-1}^m; the domination properties quantify over {0..r-2}^m (a
// value of r-1 cannot be beaten inside the range). r = 1 makes the
// domination properties vacuously true.
PropertyResult has_property(const FunctionFamily& F, const FamilyProperty& p,
                            std::uint64_t cap = default_enumeration_cap());

// A^i_n = {f : f(i) = n} with empty cells dropped; P_i = {A^i_n}. One family
// per coordinate, on DiscretePoints(|F|) with point j = funcs[j].
FamilySequence dif_to_one_tiny(const FunctionFamily& F);

// Inverse direction: f_x(i) = index of the member of P_i containing x. With
// refine_overlaps, non-partition families are first disjointified by
// assigning each point to its lowest-index containing member; otherwise a
// non-partition family is an error. Duplicate functions collapse.
FunctionFamily one_tiny_to_dif(const FamilySequence& seq, bool refine_overlaps = false);

// A^i_n = {f : f(i) <= n}; P_i keeps all r chain levels, empty levels
// included, so that member position equals chain level. These are the
// validated stand-ins for the dominating / unbounded reformulations.
FamilySequence dominating_to_tiny(const FunctionFamily& F);
FamilySequence unbounded_to_b_tiny(const FunctionFamily& F);

// The subfamily bound matching "all proper chain levels" for range r:
// prefixes of length <= r-1, i.e. adversary levels {0..r-2}.
inline int full_level_bound(int r) { return r - 1; }

struct TransformCheck {
    bool property_holds = false;
    VerifyStatus verdict = VerifyStatus::HoldsAtScale;
    bool equivalent = false;  // property_holds <=> verdict == HoldsAtScale
};

TransformCheck check_dif_equivalence(const FunctionFamily& F,
                                     std::uint64_t cap = default_enumeration_cap());
TransformCheck check_dominating_equivalence(const FunctionFamily& F,
                                            std::uint64_t cap = default_enumeration_cap());
TransformCheck check_unbounded_equivalence(const FunctionFamily& F, int t,
                                           std::uint64_t cap = default_enumeration_cap());

// Least |F| with the property, by increasing-size exhaustive search over
// subsets of all r^m candidate functions; nullopt when no family of any size
// works (e.g. EverywhereDifferent with r = 1).
std::optional<int> min_family_size(int m, int r, const FamilyProperty& p,
                                   std::uint64_t cap = default_enumeration_cap());

// Visits every family with domain m, range r and 1 <= |F| <= max_size,
// in lexicographic order. The driver for the exhaustive equivalence runs.
void for_each_function_family(int m, int r, int max_size,
                              const std::function<void(const FunctionFamily&)>& fn);

}  // namespace omg
