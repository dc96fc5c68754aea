#include "omg/sequences.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>

namespace omg {

std::string to_string(SeqKind k) {
    switch (k) {
        case SeqKind::Tiny: return "tiny";
        case SeqKind::OneTiny: return "one-tiny";
        case SeqKind::WeakTiny: return "weak";
        case SeqKind::BTiny: return "b-tiny";
    }
    return "?";
}

SeqKind seq_kind_from_string(const std::string& s) {
    if (s == "tiny") return SeqKind::Tiny;
    if (s == "one-tiny" || s == "one_tiny" || s == "1-tiny") return SeqKind::OneTiny;
    if (s == "weak" || s == "weak-tiny") return SeqKind::WeakTiny;
    if (s == "b-tiny" || s == "b_tiny") return SeqKind::BTiny;
    throw ProtocolError("unknown sequence kind: " + s);
}

std::string to_string(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::HoldsAtScale: return "HOLDS_AT_SCALE";
        case VerifyStatus::Defeated: return "DEFEATED";
        case VerifyStatus::CapExceeded: return "CAP_EXCEEDED";
    }
    return "?";
}

std::uint64_t default_enumeration_cap() {
    static const std::uint64_t cap = [] {
        if (const char* env = std::getenv("OMEGA_GAMES_CAP")) {
            const unsigned long long v = std::strtoull(env, nullptr, 10);
            if (v > 0) return static_cast<std::uint64_t>(v);
        }
        return std::uint64_t{10'000'000};
    }();
    return cap;
}

FamilySequence::FamilySequence(SpacePtr space, std::vector<std::vector<OpenSet>> families,
                               SeqKind kind_claimed, bool allow_empty_members)
    : space_(std::move(space)), families_(std::move(families)), kind_(kind_claimed) {
    for (const auto& fam : families_) {
        if (fam.empty()) throw ConstructionError("family has no members");
        for (const auto& s : fam) {
            space_->check_member(s);
            space_->require_open(s);
            if (s.empty() && !allow_empty_members) {
                throw ConstructionError("family member is empty");
            }
        }
        if (!space_->is_dense(fam)) {
            throw ConstructionError("family union is not dense");
        }
    }
}

FamilySequence FamilySequence::tail(int k) const {
    if (k < 0 || k > length()) throw ProtocolError("tail index out of range");
    std::vector<std::vector<OpenSet>> fams(families_.begin() + k, families_.end());
    return FamilySequence(space_, std::move(fams), kind_, /*allow_empty_members=*/true);
}

int default_subseq_threshold(int m) { return (m + 1) / 2; }

namespace {

// Product of per-index option counts, saturating at cap+1.
std::uint64_t search_size(const std::vector<int>& counts, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (int c : counts) {
        if (c <= 0) return 0;
        if (total > cap / static_cast<std::uint64_t>(c) + 1) return cap + 1;
        total *= static_cast<std::uint64_t>(c);
        if (total > cap) return cap + 1;
    }
    return total;
}

bool odometer_next(std::vector<int>& digits, const std::vector<int>& radix) {
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        if (++digits[static_cast<std::size_t>(i)] < radix[static_cast<std::size_t>(i)]) {
            return true;
        }
        digits[static_cast<std::size_t>(i)] = 0;
    }
    return false;
}

// Families with members in canonical ascending order plus the running prefix
// unions: prefix_union[i][p] = union of the first p members of family i.
struct PrefixTables {
    std::vector<std::vector<OpenSet>> sorted;
    std::vector<std::vector<OpenSet>> prefix_union;
};

PrefixTables build_prefix_tables(const FamilySequence& seq) {
    PrefixTables t;
    for (const auto& fam : seq.families()) {
        std::vector<OpenSet> sorted = fam;
        std::stable_sort(sorted.begin(), sorted.end(), [](const OpenSet& a, const OpenSet& b) {
            return a.canonical_order(b) == std::strong_ordering::less;
        });
        std::vector<OpenSet> pref;
        pref.push_back(seq.space().empty_set());
        for (const auto& s : sorted) pref.push_back(pref.back().unite(s));
        t.sorted.push_back(std::move(sorted));
        t.prefix_union.push_back(std::move(pref));
    }
    return t;
}

SelectionWitness prefix_witness(const PrefixTables& t, const std::vector<int>& lens) {
    SelectionWitness w;
    w.per_index = lens;
    for (std::size_t i = 0; i < lens.size(); ++i) {
        const auto& fam = t.sorted[i];
        w.sets.emplace_back(fam.begin(), fam.begin() + lens[i]);
    }
    return w;
}

}  // namespace

VerifyResult verify_one_tiny(const FamilySequence& seq, std::uint64_t cap) {
    const auto& fams = seq.families();
    const int m = seq.length();
    std::vector<int> counts;
    for (const auto& f : fams) counts.push_back(static_cast<int>(f.size()));

    VerifyResult res;
    res.search_space = search_size(counts, cap);
    if (res.search_space > cap) {
        res.status = VerifyStatus::CapExceeded;
        return res;
    }
    if (m == 0) return res;  // vacuously holds

    std::vector<int> pick(static_cast<std::size_t>(m), 0);
    do {
        ++res.enumerated;
        OpenSet u = seq.space().empty_set();
        for (int i = 0; i < m; ++i) {
            u = u.unite(fams[static_cast<std::size_t>(i)][static_cast<std::size_t>(pick[i])]);
        }
        if (seq.space().is_dense_set(u)) {
            res.status = VerifyStatus::Defeated;
            SelectionWitness w;
            w.per_index = pick;
            for (int i = 0; i < m; ++i) {
                w.sets.push_back(
                    {fams[static_cast<std::size_t>(i)][static_cast<std::size_t>(pick[i])]});
            }
            res.witness = std::move(w);
            return res;
        }
    } while (odometer_next(pick, counts));
    return res;
}

VerifyResult verify_tiny(const FamilySequence& seq, int s, std::uint64_t cap) {
    if (s < 0) throw ProtocolError("subfamily size bound must be >= 0");
    const int m = seq.length();
    const PrefixTables t = build_prefix_tables(seq);
    std::vector<int> radix;
    for (const auto& fam : t.sorted) {
        radix.push_back(std::min<int>(s, static_cast<int>(fam.size())) + 1);
    }
    VerifyResult res;
    res.search_space = search_size(radix, cap);
    if (res.search_space > cap) {
        res.status = VerifyStatus::CapExceeded;
        return res;
    }
    if (m == 0) return res;

    std::vector<int> lens(static_cast<std::size_t>(m), 0);
    do {
        ++res.enumerated;
        OpenSet u = seq.space().empty_set();
        for (int i = 0; i < m; ++i) {
            u = u.unite(t.prefix_union[static_cast<std::size_t>(i)]
                                      [static_cast<std::size_t>(lens[i])]);
        }
        if (seq.space().is_dense_set(u)) {
            res.status = VerifyStatus::Defeated;
            res.witness = prefix_witness(t, lens);
            return res;
        }
    } while (odometer_next(lens, radix));
    return res;
}

VerifyResult verify_weak_tiny(const FamilySequence& seq, int s, std::uint64_t cap) {
    if (s < 0) throw ProtocolError("subfamily size bound must be >= 0");
    const int m = seq.length();
    const PrefixTables t = build_prefix_tables(seq);
    std::vector<int> radix;
    for (const auto& fam : t.sorted) {
        radix.push_back(std::min<int>(s, static_cast<int>(fam.size())) + 1);
    }
    VerifyResult res;
    res.search_space = search_size(radix, cap);
    if (res.search_space > cap) {
        res.status = VerifyStatus::CapExceeded;
        return res;
    }
    if (m == 0) return res;

    std::vector<int> lens(static_cast<std::size_t>(m), 0);
    do {
        ++res.enumerated;
        // Tail unions from the back; defeated iff dense for every k < m.
        bool all_tails_dense = true;
        OpenSet tail = seq.space().empty_set();
        std::vector<bool> dense_at(static_cast<std::size_t>(m));
        for (int k = m - 1; k >= 0; --k) {
            tail = tail.unite(t.prefix_union[static_cast<std::size_t>(k)]
                                            [static_cast<std::size_t>(lens[k])]);
            dense_at[static_cast<std::size_t>(k)] = seq.space().is_dense_set(tail);
            all_tails_dense = all_tails_dense && dense_at[static_cast<std::size_t>(k)];
        }
        if (all_tails_dense) {
            res.status = VerifyStatus::Defeated;
            res.witness = prefix_witness(t, lens);
            return res;
        }
    } while (odometer_next(lens, radix));
    return res;
}

VerifyResult verify_b_tiny(const FamilySequence& seq, int s, int t_min, std::uint64_t cap) {
    if (s < 0) throw ProtocolError("subfamily size bound must be >= 0");
    const int m = seq.length();
    if (t_min < 1 || t_min > m) {
        throw ProtocolError("subsequence threshold t must be in [1, m]");
    }
    const PrefixTables t = build_prefix_tables(seq);
    std::vector<int> radix;
    for (const auto& fam : t.sorted) {
        radix.push_back(std::min<int>(s, static_cast<int>(fam.size())) + 1);
    }
    VerifyResult res;
    res.search_space = search_size(radix, cap);
    if (res.search_space > cap) {
        res.status = VerifyStatus::CapExceeded;
        return res;
    }

    // It suffices to look at index subsets of size exactly t_min: shrinking a
    // non-dense union keeps it non-dense.
    std::vector<std::vector<int>> subsets;
    {
        std::vector<int> idx;
        const std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(idx.size()) == t_min) {
                subsets.push_back(idx);
                return;
            }
            for (int i = start; i < m; ++i) {
                idx.push_back(i);
                rec(i + 1);
                idx.pop_back();
            }
        };
        rec(0);
    }

    std::vector<int> lens(static_cast<std::size_t>(m), 0);
    do {
        ++res.enumerated;
        std::vector<OpenSet> u;
        u.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            u.push_back(t.prefix_union[static_cast<std::size_t>(i)]
                                      [static_cast<std::size_t>(lens[i])]);
        }
        bool escaped = false;
        for (const auto& I : subsets) {
            OpenSet uu = seq.space().empty_set();
            for (int i : I) uu = uu.unite(u[static_cast<std::size_t>(i)]);
            if (!seq.space().is_dense_set(uu)) {
                escaped = true;
                break;
            }
        }
        if (!escaped) {
            res.status = VerifyStatus::Defeated;
            res.witness = prefix_witness(t, lens);
            res.witness->sample_subsequence = subsets.front();
            return res;
        }
    } while (odometer_next(lens, radix));
    return res;
}

bool witness_recheck(const FamilySequence& seq, SeqKind kind, const SelectionWitness& w,
                     int t) {
    const int m = seq.length();
    if (static_cast<int>(w.sets.size()) != m) return false;
    std::vector<OpenSet> u;
    for (const auto& sel : w.sets) {
        OpenSet x = seq.space().empty_set();
        for (const auto& s : sel) x = x.unite(s);
        u.push_back(x);
    }
    switch (kind) {
        case SeqKind::OneTiny:
        case SeqKind::Tiny: {
            OpenSet all = seq.space().empty_set();
            for (const auto& x : u) all = all.unite(x);
            return seq.space().is_dense_set(all);
        }
        case SeqKind::WeakTiny: {
            OpenSet tail = seq.space().empty_set();
            for (int k = m - 1; k >= 0; --k) {
                tail = tail.unite(u[static_cast<std::size_t>(k)]);
                if (!seq.space().is_dense_set(tail)) return false;
            }
            return true;
        }
        case SeqKind::BTiny: {
            if (t < 1 || t > m) return false;
            std::vector<int> idx;
            bool ok = true;
            const std::function<void(int)> rec = [&](int start) {
                if (!ok) return;
                if (static_cast<int>(idx.size()) == t) {
                    OpenSet uu = seq.space().empty_set();
                    for (int i : idx) uu = uu.unite(u[static_cast<std::size_t>(i)]);
                    if (!seq.space().is_dense_set(uu)) ok = false;
                    return;
                }
                for (int i = start; i < m; ++i) {
                    idx.push_back(i);
                    rec(i + 1);
                    idx.pop_back();
                }
            };
            rec(0);
            return ok;
        }
    }
    return false;
}

std::vector<std::vector<OpenSet>> weak_defeats_to_tiny_defeat(
    const FamilySequence& seq, const std::vector<TailDefeat>& witnesses) {
    const int m = seq.length();
    std::vector<const TailDefeat*> by_k(static_cast<std::size_t>(m), nullptr);
    for (const auto& w : witnesses) {
        if (w.k < 0 || w.k >= m) throw ProtocolError("tail witness index out of range");
        by_k[static_cast<std::size_t>(w.k)] = &w;
    }
    for (int k = 0; k < m; ++k) {
        if (!by_k[static_cast<std::size_t>(k)]) {
            throw ProtocolError("missing tail witness for k=" + std::to_string(k));
        }
        if (static_cast<int>(by_k[static_cast<std::size_t>(k)]->subfamilies.size()) != m - k) {
            throw ProtocolError("tail witness for k=" + std::to_string(k) +
                                " has the wrong length");
        }
    }

    std::vector<std::vector<OpenSet>> combined(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n) {
        std::vector<OpenSet>& dst = combined[static_cast<std::size_t>(n)];
        for (int k = 0; k <= n; ++k) {
            const auto& picks = by_k[static_cast<std::size_t>(k)]
                                    ->subfamilies[static_cast<std::size_t>(n - k)];
            for (const auto& s : picks) {
                if (std::find(dst.begin(), dst.end(), s) == dst.end()) dst.push_back(s);
            }
        }
    }

    // The combined selection dominates every tail witness, so all tail unions
    // must come out dense; a failure here means a defective input witness.
    for (int k = 0; k < m; ++k) {
        OpenSet tail = seq.space().empty_set();
        for (int n = k; n < m; ++n) {
            for (const auto& s : combined[static_cast<std::size_t>(n)]) tail = tail.unite(s);
        }
        if (!seq.space().is_dense_set(tail)) {
            throw ConstructionError("combined selection has a non-dense tail at k=" +
                                    std::to_string(k));
        }
    }
    return combined;
}

StrategyPtr sequence_to_strategy(const FamilySequence& seq, GameKind kind) {
    if (seq.length() == 0) throw ProtocolError("cannot build a strategy from an empty sequence");
    const SeqKind sk = seq.kind_claimed();
    const bool ok = (sk == SeqKind::Tiny && (kind == GameKind::G7 || kind == GameKind::G2)) ||
                    (sk == SeqKind::OneTiny && (kind == GameKind::G2 || kind == GameKind::G7));
    if (!ok) {
        throw ProtocolError("sequence kind " + to_string(sk) + " does not drive game " +
                            to_string(kind));
    }
    auto fams = std::make_shared<std::vector<std::vector<OpenSet>>>(seq.families());
    return std::make_shared<CallbackStrategy>(
        "cyclic[" + to_string(sk) + "]",
        [fams](const PlayContext& ctx, std::span<const Move>) -> std::optional<Move> {
            const auto m = fams->size();
            return Move::family((*fams)[static_cast<std::size_t>(ctx.round) % m]);
        });
}

}  // namespace omg
