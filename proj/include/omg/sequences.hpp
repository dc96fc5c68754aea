#pragma once

#include "omg/games.hpp"
#include "omg/space.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace omg {

enum class SeqKind { Tiny, OneTiny, WeakTiny, BTiny };

std::string to_string(SeqKind k);
SeqKind seq_kind_from_string(const std::string& s);

// Default enumeration cap (selections per verification). Overridable with the
// OMEGA_GAMES_CAP environment variable.
std::uint64_t default_enumeration_cap();

// A finite prefix {P_0..P_{m-1}} of open families, each with dense union
// (checked at construction). Values are immutable after construction.
//
// Empty members are rejected for externally supplied sequences; internally
// built ascending chains (cardinal transforms, extraction) keep empty levels
// as placeholders so that member position continues to track the chain level.
class FamilySequence {
public:
    FamilySequence(SpacePtr space, std::vector<std::vector<OpenSet>> families,
                   SeqKind kind_claimed, bool allow_empty_members = false);

    const Space& space() const { return *space_; }
    SpacePtr space_ptr() const { return space_; }
    int length() const { return static_cast<int>(families_.size()); }
    const std::vector<std::vector<OpenSet>>& families() const { return families_; }
    SeqKind kind_claimed() const { return kind_; }

    // The suffix {P_k..P_{m-1}} as its own sequence.
    FamilySequence tail(int k) const;

private:
    SpacePtr space_;
    std::vector<std::vector<OpenSet>> families_;
    SeqKind kind_;
};

enum class VerifyStatus { HoldsAtScale, Defeated, CapExceeded };

std::string to_string(VerifyStatus s);

// A defeating selection. For one-tiny verdicts per_index holds member
// indexes (as given); for the subfamily verdicts it holds prefix lengths in
// the verifier's canonical (ascending size) member order. `sets` is the
// materialized selection, independent of any ordering convention.
struct SelectionWitness {
    std::vector<int> per_index;
    std::vector<std::vector<OpenSet>> sets;
    std::vector<int> sample_subsequence;  // b-tiny defeat: first dense size-t index set
};

struct VerifyResult {
    VerifyStatus status = VerifyStatus::HoldsAtScale;
    std::optional<SelectionWitness> witness;
    std::uint64_t enumerated = 0;
    std::uint64_t search_space = 0;
};

// Exhaustive search over all single-member choice functions; DEFEATED with
// the first (lexicographic) dense selection.
VerifyResult verify_one_tiny(const FamilySequence& seq,
                             std::uint64_t cap = default_enumeration_cap());

// Finite-subfamily selections are taken as initial segments of each family's
// members sorted ascending (size, then pointwise), with at most s members per
// index. For the ascending chains produced by strategies and transforms this
// coincides with choosing a single member of the chain, which is how the
// finite-subfamily clauses get used on chains.
VerifyResult verify_tiny(const FamilySequence& seq, int s,
                         std::uint64_t cap = default_enumeration_cap());

// DEFEATED iff some selection {E_n} has every tail union ⋃_{n>=k}⋃E_n dense
// for all k < m.
VerifyResult verify_weak_tiny(const FamilySequence& seq, int s,
                              std::uint64_t cap = default_enumeration_cap());

// HOLDS iff every selection admits an index subset of size >= t whose union
// is not dense; DEFEATED with a selection where every size-t subset unions
// densely. t in [1, m].
VerifyResult verify_b_tiny(const FamilySequence& seq, int s, int t,
                           std::uint64_t cap = default_enumeration_cap());

// Default subsequence-length threshold for b-tiny: ceil(m/2).
int default_subseq_threshold(int m);

// Replays a witness: true iff it certifies a defeat of `kind` (dense union;
// for weak, all tails dense; for b-tiny, all size-t subsets dense).
bool witness_recheck(const FamilySequence& seq, SeqKind kind, const SelectionWitness& w,
                     int t = -1);

// A tiny-defeat on the tail {P_n : n >= k}: one finite subfamily per index,
// subfamilies[0] drawn from P_k, subfamilies[1] from P_{k+1}, and so on.
struct TailDefeat {
    int k = 0;
    std::vector<std::vector<OpenSet>> subfamilies;
};

// The combiner behind the weak-tiny/tiny reduction: E'_n = union of the k-th
// tail witnesses' picks at n over k <= n. Checks that every tail union of the
// combined selection is dense and returns the combined subfamilies.
std::vector<std::vector<OpenSet>> weak_defeats_to_tiny_defeat(
    const FamilySequence& seq, const std::vector<TailDefeat>& witnesses);

// II plays P_{n mod m} at round n. Tiny sequences drive G7 (and G2, which
// needs only the weaker single-member property); one-tiny sequences drive G2
// and are accepted for G7 so strategies can feed the G7 extraction audits.
StrategyPtr sequence_to_strategy(const FamilySequence& seq, GameKind kind);

}  // namespace omg
