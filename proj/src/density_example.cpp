#include "omg/density_example.hpp"

#include <algorithm>
#include <random>

namespace omg {

namespace {

Rat pow3_inv(int n) {
    Rat r(1);
    for (int i = 0; i < n; ++i) r /= 3;
    return r;
}

}  // namespace

void ThresholdSequence::validate() const {
    if (T < 1) throw ConstructionError("threshold sequence needs T >= 1");
    if (static_cast<int>(families.size()) != T) {
        throw ConstructionError("family count does not match T");
    }
    for (int n = 1; n <= T; ++n) {
        const auto& fam = families[static_cast<std::size_t>(n - 1)];
        const Rat cap = pow3_inv(n);
        std::vector<IntervalSet> sets;
        for (const auto& s : fam) {
            if (s.measure() > cap) {
                throw ConstructionError("member of P_" + std::to_string(n) +
                                        " exceeds the 3^-n measure bound");
            }
            sets.push_back(s);
        }
        if (measure_union(sets) != 1) {
            throw ConstructionError("P_" + std::to_string(n) + " union measure is not 1");
        }
    }
}

FamilySequence ThresholdSequence::as_family_sequence() const {
    std::vector<std::vector<OpenSet>> fams;
    for (const auto& fam : families) {
        std::vector<OpenSet> f;
        for (const auto& s : fam) f.push_back(OpenSet(s));
        fams.push_back(std::move(f));
    }
    return FamilySequence(Space::interval(), std::move(fams), SeqKind::Tiny);
}

ThresholdSequence build_threshold_sequence(int T) {
    if (T < 1) throw ConstructionError("threshold sequence needs T >= 1");
    ThresholdSequence seq;
    seq.T = T;
    long long denom = 1;
    for (int n = 1; n <= T; ++n) {
        denom *= 3;
        std::vector<IntervalSet> fam;
        for (long long i = 0; i < denom; ++i) {
            fam.push_back(IntervalSet::single(Rat(i, denom), Rat(i + 1, denom)));
        }
        seq.families.push_back(std::move(fam));
    }
    seq.validate();
    return seq;
}

MeasureBound one_tiny_by_measure(const ThresholdSequence& seq, int samples,
                                 std::uint64_t seed) {
    seq.validate();
    MeasureBound out;
    out.bound = (Rat(1) - pow3_inv(seq.T)) / 2;
    out.seed = seed;

    const auto measure_of_choice = [&](const std::vector<int>& pick) {
        std::vector<IntervalSet> sets;
        for (int n = 0; n < seq.T; ++n) {
            sets.push_back(seq.families[static_cast<std::size_t>(n)]
                                       [static_cast<std::size_t>(pick[n])]);
        }
        return measure_union(sets);
    };

    // the lexicographically first choice, then seeded random ones
    std::vector<int> pick(static_cast<std::size_t>(seq.T), 0);
    Rat m = measure_of_choice(pick);
    out.max_sampled = m;
    out.all_within_bound = m <= out.bound;
    out.samples = 1;

    std::mt19937_64 rng(seed);
    for (int s = 1; s < samples; ++s) {
        for (int n = 0; n < seq.T; ++n) {
            const auto size = seq.families[static_cast<std::size_t>(n)].size();
            pick[static_cast<std::size_t>(n)] =
                static_cast<int>(rng() % static_cast<std::uint64_t>(size));
        }
        m = measure_of_choice(pick);
        out.max_sampled = std::max(out.max_sampled, m);
        out.all_within_bound = out.all_within_bound && m <= out.bound;
        ++out.samples;
    }
    return out;
}

ChoiceScan exhaustive_choice_scan(const ThresholdSequence& seq, std::uint64_t cap) {
    seq.validate();
    std::uint64_t total = 1;
    for (const auto& fam : seq.families) {
        total *= fam.size();
        if (total > cap) throw CapError("choice-function space too large", total);
    }

    ChoiceScan out;
    std::vector<int> pick(static_cast<std::size_t>(seq.T), 0);
    for (;;) {
        ++out.enumerated;
        std::vector<IntervalSet> sets;
        for (int n = 0; n < seq.T; ++n) {
            sets.push_back(seq.families[static_cast<std::size_t>(n)]
                                       [static_cast<std::size_t>(pick[n])]);
        }
        const Rat m = measure_union(sets);
        if (out.argmax.empty() || m > out.max_measure) {
            out.max_measure = m;
            out.argmax = pick;
        }
        int i = seq.T - 1;
        while (i >= 0 &&
               pick[static_cast<std::size_t>(i)] + 1 ==
                   static_cast<int>(seq.families[static_cast<std::size_t>(i)].size())) {
            pick[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
    }
    return out;
}

GreedyDefeat greedy_defeat(const ThresholdSequence& seq, int n_target, int budget_per_round) {
    seq.validate();
    if (n_target < 1 || n_target > seq.T) {
        throw ProtocolError("n_target must lie in [1, T]");
    }
    GreedyDefeat out;
    out.n_target = n_target;
    out.target_bound = Rat(1) - Rat(1, n_target);

    IntervalSet covered;
    for (int n = 1; n <= n_target; ++n) {
        GreedyStep step;
        step.round = n;
        step.round_bound = Rat(1) - Rat(1, n);
        std::vector<bool> used(seq.families[static_cast<std::size_t>(n - 1)].size(), false);
        for (;;) {
            if (budget_per_round >= 0 &&
                static_cast<int>(step.picked.size()) >= budget_per_round) {
                break;
            }
            // largest gain, leftmost interval first on ties
            Rat best_gain = 0;
            int best = -1;
            const auto& fam = seq.families[static_cast<std::size_t>(n - 1)];
            for (std::size_t i = 0; i < fam.size(); ++i) {
                if (used[i]) continue;
                const Rat gain = covered.unite(fam[i]).measure() - covered.measure();
                if (gain > best_gain) {
                    best_gain = gain;
                    best = static_cast<int>(i);
                }
            }
            if (best < 0) break;  // nothing gains
            used[static_cast<std::size_t>(best)] = true;
            covered = covered.unite(fam[static_cast<std::size_t>(best)]);
            step.picked.push_back(fam[static_cast<std::size_t>(best)]);
        }
        step.cumulative = covered.measure();
        step.met_round_bound = step.cumulative >= step.round_bound;
        if (out.round_reaching_one == 0 && step.cumulative == 1) out.round_reaching_one = n;
        out.steps.push_back(std::move(step));
    }
    out.final_cumulative = covered.measure();
    out.met_target = out.final_cumulative >= out.target_bound;
    return out;
}

SeparationReport separation_report(int T, int samples, std::uint64_t seed) {
    if (T < 1) throw ConstructionError("separation report needs T >= 1");
    const ThresholdSequence seq = build_threshold_sequence(T);
    SeparationReport rep;
    rep.T = T;
    rep.measure = one_tiny_by_measure(seq, samples, seed);
    rep.greedy = greedy_defeat(seq, T);
    const FamilySequence fam = seq.as_family_sequence();
    int s_full = 0;
    for (const auto& f : fam.families()) s_full = std::max<int>(s_full, f.size());
    rep.tiny_verdict = verify_tiny(fam, s_full).status;
    return rep;
}

}  // namespace omg
