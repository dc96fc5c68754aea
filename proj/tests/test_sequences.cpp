#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "omg/cardinal.hpp"
#include "omg/sequences.hpp"

#include <algorithm>
#include <random>

using namespace omg;

namespace {

OpenSet pts(std::initializer_list<int> xs) {
    PointSet m = 0;
    for (int x : xs) m |= PointSet{1} << x;
    return OpenSet(m);
}

FamilySequence seq_of(SpacePtr sp, std::vector<std::vector<OpenSet>> fams,
                      SeqKind kind = SeqKind::OneTiny) {
    return FamilySequence(std::move(sp), std::move(fams), kind, true);
}

FunctionFamily ff(int m, int r, std::vector<std::vector<int>> funcs) {
    FunctionFamily F;
    F.m = m;
    F.r = r;
    F.funcs = std::move(funcs);
    return F;
}

}  // namespace

TEST_CASE("construction rejects non-dense families and empty members") {
    const auto sp = Space::discrete(3);
    CHECK_THROWS_AS(FamilySequence(sp, {{pts({0}), pts({1})}}, SeqKind::OneTiny),
                    ConstructionError);
    CHECK_THROWS_AS(
        FamilySequence(sp, {{pts({0}), pts({1}), pts({2}), pts({})}}, SeqKind::OneTiny),
        ConstructionError);
    // the internal chain path may keep empty levels
    CHECK_NOTHROW(FamilySequence(sp, {{pts({}), pts({0, 1, 2})}}, SeqKind::Tiny, true));
}

TEST_CASE("verify_one_tiny") {
    const auto sp2 = Space::discrete(2);

    SUBCASE("two copies of the point partition are defeated") {
        const auto s = seq_of(sp2, {{pts({0}), pts({1})}, {pts({0}), pts({1})}});
        const auto r = verify_one_tiny(s);
        REQUIRE(r.status == VerifyStatus::Defeated);
        REQUIRE(r.witness.has_value());
        CHECK(r.witness->per_index == std::vector<int>{0, 1});  // first dense selection
        CHECK(witness_recheck(s, SeqKind::OneTiny, *r.witness));
    }
    SUBCASE("a single partition family holds") {
        const auto s = seq_of(sp2, {{pts({0}), pts({1})}});
        CHECK(verify_one_tiny(s).status == VerifyStatus::HoldsAtScale);
    }
    SUBCASE("cap refusal carries the size estimate") {
        const auto s = seq_of(sp2, {{pts({0}), pts({1})}, {pts({0}), pts({1})}});
        const auto r = verify_one_tiny(s, 3);
        CHECK(r.status == VerifyStatus::CapExceeded);
        CHECK(r.search_space == 4);
    }
}

TEST_CASE("verify_tiny with prefix selections") {
    const auto sp3 = Space::discrete(3);
    const std::vector<OpenSet> partition{pts({0}), pts({1}), pts({2})};

    SUBCASE("a family of size <= s is defeated by its own full prefix") {
        const auto s = seq_of(sp3, {partition}, SeqKind::Tiny);
        const auto r = verify_tiny(s, 3);
        REQUIRE(r.status == VerifyStatus::Defeated);
        CHECK(r.witness->per_index == std::vector<int>{3});
        CHECK(witness_recheck(s, SeqKind::Tiny, *r.witness));
    }
    SUBCASE("short prefixes of a partition never cover") {
        const auto s = seq_of(sp3, {partition, partition}, SeqKind::Tiny);
        CHECK(verify_tiny(s, 1).status == VerifyStatus::HoldsAtScale);
        CHECK(verify_tiny(s, 2).status == VerifyStatus::HoldsAtScale);
        CHECK(verify_tiny(s, 3).status == VerifyStatus::Defeated);
    }
    SUBCASE("a dominating-style chain instance holds below the top level") {
        const auto F = ff(2, 3, {{2, 2}, {0, 0}, {0, 1}, {1, 0}, {1, 1}});
        const auto s = dominating_to_tiny(F);
        CHECK(verify_tiny(s, full_level_bound(3)).status == VerifyStatus::HoldsAtScale);
        CHECK(verify_tiny(s, 3).status == VerifyStatus::Defeated);  // top level reachable
    }
}

TEST_CASE("verify_weak_tiny") {
    const auto sp3 = Space::discrete(3);
    const std::vector<OpenSet> partition{pts({0}), pts({1}), pts({2})};

    SUBCASE("m = 1 reduces to tiny on the single family") {
        const auto s = seq_of(sp3, {partition}, SeqKind::WeakTiny);
        for (int cap = 1; cap <= 3; ++cap) {
            CHECK(verify_weak_tiny(s, cap).status == verify_tiny(s, cap).status);
        }
    }
    SUBCASE("a tiny hold is a weak hold at the same scale") {
        const auto F = ff(2, 3, {{2, 2}, {0, 0}, {1, 1}});
        const auto s = dominating_to_tiny(F);
        const int bound = full_level_bound(3);
        REQUIRE(verify_tiny(s, bound).status == VerifyStatus::HoldsAtScale);
        CHECK(verify_weak_tiny(s, bound).status == VerifyStatus::HoldsAtScale);
    }
    SUBCASE("defeat needs every tail dense, not just the total union") {
        const auto sp2 = Space::discrete(2);
        const auto s = seq_of(
            sp2, {{pts({0}), pts({1})}, {pts({0, 1}), pts({0})}}, SeqKind::WeakTiny);
        const auto r = verify_weak_tiny(s, 2);
        REQUIRE(r.status == VerifyStatus::Defeated);
        CHECK(witness_recheck(s, SeqKind::WeakTiny, *r.witness));
        // picking only {0} at index 1 leaves the last tail non-dense
        const auto single = seq_of(sp2, {{pts({0}), pts({1})}, {pts({0}), pts({1})}},
                                   SeqKind::WeakTiny);
        CHECK(verify_weak_tiny(single, 1).status == VerifyStatus::HoldsAtScale);
    }
}

TEST_CASE("verify_b_tiny") {
    SUBCASE("t = m coincides with verify_tiny") {
        const auto F = ff(2, 3, {{2, 2}, {0, 1}, {1, 0}});
        const auto tiny_seq = dominating_to_tiny(F);
        const auto b_seq = unbounded_to_b_tiny(F);
        for (int s = 1; s <= 3; ++s) {
            CHECK(verify_b_tiny(b_seq, s, 2).status == verify_tiny(tiny_seq, s).status);
        }
    }
    SUBCASE("t = 1 holds when single-member selections never cover an index") {
        const auto sp3 = Space::discrete(3);
        const std::vector<OpenSet> partition{pts({0}), pts({1}), pts({2})};
        const auto s = seq_of(sp3, {partition, partition}, SeqKind::BTiny);
        CHECK(verify_b_tiny(s, 1, 1).status == VerifyStatus::HoldsAtScale);
        // full prefixes make every index dense, so every threshold is beaten
        CHECK(verify_b_tiny(s, 3, 1).status == VerifyStatus::Defeated);
        CHECK(verify_b_tiny(s, 3, 2).status == VerifyStatus::Defeated);
    }
    SUBCASE("often-above transform at the default threshold") {
        const auto F = ff(2, 3, {{2, 0}, {0, 2}});
        REQUIRE(has_property(F, FamilyProperty::often(1)).holds);
        const auto s = unbounded_to_b_tiny(F);
        CHECK(verify_b_tiny(s, full_level_bound(3), default_subseq_threshold(2)).status ==
              VerifyStatus::HoldsAtScale);
    }
    SUBCASE("threshold bounds are validated") {
        const auto sp2 = Space::discrete(2);
        const auto s = seq_of(sp2, {{pts({0}), pts({1})}}, SeqKind::BTiny);
        CHECK_THROWS_AS((void)verify_b_tiny(s, 1, 0), ProtocolError);
        CHECK_THROWS_AS((void)verify_b_tiny(s, 1, 2), ProtocolError);
    }
}

TEST_CASE("default_subseq_threshold is the half-length ceiling") {
    CHECK(default_subseq_threshold(1) == 1);
    CHECK(default_subseq_threshold(2) == 1);
    CHECK(default_subseq_threshold(3) == 2);
    CHECK(default_subseq_threshold(4) == 2);
}

TEST_CASE("weak_defeats_to_tiny_defeat combines tail witnesses") {
    const auto sp2 = Space::discrete(2);
    const std::vector<OpenSet> partition{pts({0}), pts({1})};

    SUBCASE("m = 1 returns the single witness") {
        const auto s = seq_of(sp2, {partition}, SeqKind::WeakTiny);
        const auto combined =
            weak_defeats_to_tiny_defeat(s, {TailDefeat{0, {partition}}});
        REQUIRE(combined.size() == 1);
        CHECK(combined[0].size() == 2);
    }
    SUBCASE("two tails defeated by singleton selections stay small") {
        const auto s = seq_of(sp2, {{pts({0, 1}), pts({0})}, {pts({0, 1}), pts({1})}},
                              SeqKind::WeakTiny);
        const std::vector<TailDefeat> w{
            {0, {{pts({0, 1})}, {}}},
            {1, {{pts({0, 1})}}},
        };
        const auto combined = weak_defeats_to_tiny_defeat(s, w);
        REQUIRE(combined.size() == 2);
        CHECK(combined[0].size() == 1);
        CHECK(combined[1].size() <= 2);
    }
    SUBCASE("a partition instance re-checks densely on all tails") {
        const auto s = seq_of(sp2, {partition, partition}, SeqKind::WeakTiny);
        const std::vector<TailDefeat> w{
            {0, {partition, {}}},
            {1, {partition}},
        };
        const auto combined = weak_defeats_to_tiny_defeat(s, w);
        for (int k = 0; k < 2; ++k) {
            OpenSet tail = sp2->empty_set();
            for (int n = k; n < 2; ++n) {
                for (const auto& x : combined[static_cast<std::size_t>(n)]) {
                    tail = tail.unite(x);
                }
            }
            CHECK(sp2->is_dense_set(tail));
        }
    }
    SUBCASE("a missing tail witness is an error") {
        const auto s = seq_of(sp2, {partition, partition}, SeqKind::WeakTiny);
        CHECK_THROWS_AS(weak_defeats_to_tiny_defeat(s, {TailDefeat{1, {partition}}}),
                        ProtocolError);
    }
}

TEST_CASE("a weak-tiny defeat yields tiny defeats on every tail, and back") {
    const auto sp2 = Space::discrete(2);
    const auto s = seq_of(sp2, {{pts({0}), pts({1})}, {pts({0}), pts({1})}},
                          SeqKind::WeakTiny);
    const auto weak = verify_weak_tiny(s, 2);
    REQUIRE(weak.status == VerifyStatus::Defeated);
    std::vector<TailDefeat> tail_witnesses;
    for (int k = 0; k < s.length(); ++k) {
        TailDefeat td;
        td.k = k;
        for (int n = k; n < s.length(); ++n) {
            td.subfamilies.push_back(weak.witness->sets[static_cast<std::size_t>(n)]);
        }
        OpenSet u = sp2->empty_set();
        for (const auto& fam : td.subfamilies) {
            for (const auto& x : fam) u = u.unite(x);
        }
        CHECK(sp2->is_dense_set(u));  // a tiny defeat of the tail, re-checked
        tail_witnesses.push_back(std::move(td));
    }
    const auto combined = weak_defeats_to_tiny_defeat(s, tail_witnesses);
    CHECK(combined.size() == 2);
}

TEST_CASE("verdicts are invariant under member permutation and point relabeling") {
    std::mt19937_64 rng(41);
    const auto F = ff(2, 3, {{2, 2}, {0, 0}, {0, 1}, {1, 0}});
    const auto base = dominating_to_tiny(F);
    const auto base_verdict = verify_tiny(base, 2).status;
    const auto base_one = verify_one_tiny(dif_to_one_tiny(F)).status;

    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<OpenSet>> fams = base.families();
        for (auto& fam : fams) std::shuffle(fam.begin(), fam.end(), rng);
        const FamilySequence shuffled(base.space_ptr(), fams, SeqKind::Tiny, true);
        CHECK(verify_tiny(shuffled, 2).status == base_verdict);

        std::vector<int> perm(static_cast<std::size_t>(base.space().point_count()));
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::vector<OpenSet>> relabeled;
        for (const auto& fam : base.families()) {
            std::vector<OpenSet> f;
            for (const auto& s : fam) {
                PointSet m = 0;
                for (int x = 0; x < base.space().point_count(); ++x) {
                    if ((s.points() >> x) & 1) {
                        m |= PointSet{1} << perm[static_cast<std::size_t>(x)];
                    }
                }
                f.push_back(OpenSet(m));
            }
            relabeled.push_back(std::move(f));
        }
        const FamilySequence rel(base.space_ptr(), relabeled, SeqKind::Tiny, true);
        CHECK(verify_tiny(rel, 2).status == base_verdict);
    }
    CHECK(base_one == VerifyStatus::HoldsAtScale);
}

TEST_CASE("a one-tiny defeat implies a tiny defeat at full prefix width") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const auto sp = Space::discrete(n);
        std::vector<std::vector<OpenSet>> fams;
        const int m = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < m; ++i) {
            PointSet a = 0;
            for (int x = 0; x < n; ++x) {
                if (rng() % 2) a |= PointSet{1} << x;
            }
            const PointSet all = (PointSet{1} << n) - 1;
            if (a == 0 || a == all) a = 1;
            fams.push_back({OpenSet(a), OpenSet(all & ~a)});
        }
        const FamilySequence s(sp, fams, SeqKind::OneTiny);
        int max_size = 0;
        for (const auto& f : fams) max_size = std::max(max_size, static_cast<int>(f.size()));
        if (verify_one_tiny(s).status == VerifyStatus::Defeated) {
            CHECK(verify_tiny(s, max_size).status == VerifyStatus::Defeated);
        }
    }
}

TEST_CASE("sequence_to_strategy plays the families cyclically") {
    SUBCASE("an empty sequence is rejected") {
        const auto sp = Space::discrete(2);
        const FamilySequence s(sp, {}, SeqKind::OneTiny);
        CHECK_THROWS_AS(sequence_to_strategy(s, GameKind::G2), ProtocolError);
    }
    SUBCASE("kind gating") {
        const auto sp = Space::discrete(2);
        const FamilySequence weak(sp, {{pts({0}), pts({1})}}, SeqKind::WeakTiny);
        CHECK_THROWS_AS(sequence_to_strategy(weak, GameKind::G7), ProtocolError);
        const FamilySequence one(sp, {{pts({0}), pts({1})}}, SeqKind::OneTiny);
        CHECK_THROWS_AS(sequence_to_strategy(one, GameKind::G4), ProtocolError);
        CHECK_NOTHROW(sequence_to_strategy(one, GameKind::G2));
        CHECK_NOTHROW(sequence_to_strategy(one, GameKind::G7));
    }
    SUBCASE("a held one-tiny instance survives exhaustive member picks at T = m") {
        const auto F = ff(2, 4, {{0, 0}, {0, 1}, {1, 2}, {1, 3}});
        const auto s = dif_to_one_tiny(F);
        REQUIRE(verify_one_tiny(s).status == VerifyStatus::HoldsAtScale);
        const auto strat = sequence_to_strategy(s, GameKind::G2);
        const MemberPickEnumerator picks;
        const auto rep = cross_play(s.space_ptr(), GameKind::G2, *strat, Player::II,
                                    picks, s.length(), 100000);
        CHECK(rep.complete);
        CHECK(rep.i_wins == 0);
        CHECK(rep.survives_at_scale);
    }
    SUBCASE("a held tiny instance survives prefix subsets of size <= s at T = m") {
        const auto F = ff(2, 3, {{2, 2}, {0, 0}, {1, 1}});
        const auto s = dominating_to_tiny(F);
        const int bound = full_level_bound(3);
        REQUIRE(verify_tiny(s, bound).status == VerifyStatus::HoldsAtScale);
        const auto strat = sequence_to_strategy(s, GameKind::G7);
        const SubsetPickEnumerator prefixes(bound, /*prefix_only=*/true);
        const auto rep = cross_play(s.space_ptr(), GameKind::G7, *strat, Player::II,
                                    prefixes, s.length(), 100000);
        CHECK(rep.complete);
        CHECK(rep.i_wins == 0);
        CHECK(rep.survives_at_scale);
    }
}

TEST_CASE("every defeated verdict re-checks through is_dense") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const auto sp = Space::discrete(n);
        const PointSet all = (PointSet{1} << n) - 1;
        std::vector<std::vector<OpenSet>> fams;
        const int m = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < m; ++i) {
            std::vector<OpenSet> fam;
            PointSet covered = 0;
            while (covered != all) {
                const PointSet s = (rng() % all) + 1;
                fam.push_back(OpenSet(s & all));
                covered |= s & all;
            }
            fams.push_back(std::move(fam));
        }
        const FamilySequence s(sp, fams, SeqKind::Tiny);
        int max_size = 0;
        for (const auto& f : fams) max_size = std::max(max_size, static_cast<int>(f.size()));
        const auto tiny = verify_tiny(s, max_size);
        if (tiny.status == VerifyStatus::Defeated) {
            CHECK(witness_recheck(s, SeqKind::Tiny, *tiny.witness));
        }
        const auto one = verify_one_tiny(s);
        if (one.status == VerifyStatus::Defeated) {
            CHECK(witness_recheck(s, SeqKind::OneTiny, *one.witness));
        }
        const auto weak = verify_weak_tiny(s, max_size);
        if (weak.status == VerifyStatus::Defeated) {
            CHECK(witness_recheck(s, SeqKind::WeakTiny, *weak.witness));
        }
        const auto b = verify_b_tiny(s, max_size, std::max(1, m / 2));
        if (b.status == VerifyStatus::Defeated) {
            CHECK(witness_recheck(s, SeqKind::BTiny, *b.witness, std::max(1, m / 2)));
        }
    }
}
