#pragma once

#include "omg/sequences.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace omg {

// The threshold families on ((0,1), density topology), measure calculus
// only: P_n is the partition of (0,1) into 3^n equal open intervals, each of
// measure exactly 3^{-n}, with union of measure 1.
struct ThresholdSequence {
    int T = 0;
    std::vector<std::vector<IntervalSet>> families;  // families[n-1] = P_n

    void validate() const;  // exact member bound and union measure
    FamilySequence as_family_sequence() const;
};

ThresholdSequence build_threshold_sequence(int T);

// The universal choice-function bound: any one-member-per-family choice has
// union measure <= sum of 3^{-n} = (1 - 3^{-T})/2. Samples choice functions
// with the recorded seed (plus the lexicographically first one) and confirms
// the bound on each.
struct MeasureBound {
    Rat bound;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    Rat max_sampled = 0;
    bool all_within_bound = true;
};

MeasureBound one_tiny_by_measure(const ThresholdSequence& seq, int samples,
                                 std::uint64_t seed);

// Exact maximum over every choice function, with the first argmax.
struct ChoiceScan {
    Rat max_measure = 0;
    std::vector<int> argmax;
    std::uint64_t enumerated = 0;
};

ChoiceScan exhaustive_choice_scan(const ThresholdSequence& seq,
                                  std::uint64_t cap = default_enumeration_cap());

// Round n picks the largest-gain members of P_n (leftmost first on ties),
// stopping at the per-round budget or when nothing is gained. Records the
// cumulative measure after each round against the 1 - 1/n ladder.
struct GreedyStep {
    int round = 0;  // n, 1-based
    std::vector<IntervalSet> picked;
    Rat cumulative;
    Rat round_bound;         // 1 - 1/n
    bool met_round_bound = false;
};

struct GreedyDefeat {
    int n_target = 0;
    std::vector<GreedyStep> steps;
    Rat final_cumulative;
    Rat target_bound;            // 1 - 1/n_target
    bool met_target = false;
    int round_reaching_one = 0;  // 0 when measure 1 is never reached
};

GreedyDefeat greedy_defeat(const ThresholdSequence& seq, int n_target,
                           int budget_per_round = -1);

// The two directions bundled: the 1-tiny measure bound and the greedy tiny
// defeat, plus the generic verifier's verdict on the same families.
struct SeparationReport {
    int T = 0;
    MeasureBound measure;
    GreedyDefeat greedy;          // unbudgeted
    VerifyStatus tiny_verdict = VerifyStatus::Defeated;
};

SeparationReport separation_report(int T, int samples = 64, std::uint64_t seed = 0);

}  // namespace omg
