#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "omg/games.hpp"
#include "omg/json_io.hpp"

using namespace omg;

namespace {

OpenSet pts(std::initializer_list<int> xs) {
    PointSet m = 0;
    for (int x : xs) m |= PointSet{1} << x;
    return OpenSet(m);
}

StrategyPtr pick_member(std::size_t index) {
    return std::make_shared<CallbackStrategy>(
        "pick-member",
        [index](const PlayContext&, std::span<const Move> opp) -> std::optional<Move> {
            if (opp.empty()) return std::nullopt;
            const auto& fam = opp.back().sets;
            return Move::single(fam[index % fam.size()]);
        });
}

}  // namespace

TEST_CASE("legality of the quoted rules") {
    const auto sp = Space::discrete(3);

    SUBCASE("open-open game: nonempty open subset") {
        const std::vector<Move> hist{Move::single(pts({0, 1}))};
        CHECK(legal(sp, GameKind::G, hist, Move::single(pts({1}))));
        CHECK_FALSE(legal(sp, GameKind::G, hist, Move::single(pts({2}))));
        CHECK_FALSE(legal(sp, GameKind::G, hist, Move::single(pts({}))));
    }
    SUBCASE("G2: I must pick a member") {
        const Move fam = Move::family({pts({0, 1}), pts({2})});
        const std::vector<Move> hist{fam};
        CHECK(legal(sp, GameKind::G2, hist, Move::single(pts({2}))));
        CHECK_FALSE(legal(sp, GameKind::G2, hist, Move::single(pts({0}))));
    }
    SUBCASE("G4: the reply must match the size and refine") {
        const std::vector<Move> hist{Move::finite_family({pts({0, 1})})};
        CHECK_FALSE(legal(sp, GameKind::G4, hist,
                          Move::finite_family({pts({0}), pts({1})})));
        CHECK(legal(sp, GameKind::G4, hist, Move::finite_family({pts({0})})));
        CHECK_FALSE(legal(sp, GameKind::G4, hist, Move::finite_family({pts({2})})));
    }
    SUBCASE("G7: finite subsets of the offered family") {
        const Move fam = Move::family({pts({0}), pts({1}), pts({2})});
        const std::vector<Move> hist{fam};
        CHECK(legal(sp, GameKind::G7, hist, Move::finite_family({pts({0}), pts({2})})));
        CHECK_FALSE(legal(sp, GameKind::G7, hist, Move::finite_family({pts({0, 1})})));
    }
    SUBCASE("family moves need dense unions") {
        CHECK_FALSE(legal(sp, GameKind::G2, {}, Move::family({pts({0}), pts({1})})));
        CHECK(legal(sp, GameKind::G2, {}, Move::family({pts({0}), pts({1}), pts({2})})));
    }
    SUBCASE("malformed histories raise protocol errors") {
        const std::vector<Move> bad{Move::family({pts({0})})};
        CHECK_THROWS_AS((void)legal(sp, GameKind::G, bad, Move::single(pts({0}))),
                        ProtocolError);
    }
}

TEST_CASE("play: echo reaches density, a stuck I never does") {
    const auto sp = Space::discrete(2);
    const auto full = const_strategy(Move::single(pts({0, 1})), "full");
    const auto echo = echo_strategy();
    const Transcript t1 = play(sp, GameKind::G, *full, *echo, 1);
    CHECK(t1.verdict.outcome == Outcome::IWinsAtT);
    CHECK(t1.verdict.win_round == 0);

    const auto zero = const_strategy(Move::single(pts({0})), "zero");
    const Transcript t2 = play(sp, GameKind::G, *zero, *echo, 10);
    CHECK(t2.verdict.outcome == Outcome::UndeterminedIILeading);
    CHECK(t2.rounds.size() == 20);
}

TEST_CASE("play: an illegal family move loses at round 0 and stops the game") {
    const auto sp = Space::finite(3, {1, 2, 4});  // singleton basis
    const auto bad_family =
        const_strategy(Move::family({pts({0}), pts({1})}), "not-dense");
    const auto any = pick_member(0);
    const Transcript t = play(sp, GameKind::G2, *any, *bad_family, 3);
    REQUIRE(t.verdict.outcome == Outcome::Illegal);
    CHECK(t.verdict.illegal->player == Player::II);
    CHECK(t.verdict.illegal->round == 0);
    CHECK(t.rounds.size() == 1);  // nothing after the illegal move
}

TEST_CASE("monotone win detection: verdict is stable for larger horizons") {
    const auto sp = Space::discrete(2);
    const auto full = const_strategy(Move::single(pts({0, 1})), "full");
    const auto echo = echo_strategy();
    const Transcript base = play(sp, GameKind::G, *full, *echo, 1);
    for (int T = 2; T <= 6; ++T) {
        const Transcript t = play(sp, GameKind::G, *full, *echo, T);
        CHECK(t.verdict.outcome == base.verdict.outcome);
        CHECK(t.verdict.win_round == base.verdict.win_round);
        CHECK(t.rounds.size() == base.rounds.size());
    }
}

TEST_CASE("referee determinism: repeated plays produce bit-identical transcripts") {
    const auto sp = Space::discrete(3);
    const auto strat_ii = const_strategy(
        Move::family({pts({0}), pts({1}), pts({2})}), "partition");
    const auto strat_i = pick_member(1);
    const Transcript first = play(sp, GameKind::G7, *strat_i, *strat_ii, 4);
    const Json ref = transcript_to_json(*sp, first);
    for (int i = 0; i < 99; ++i) {
        const Transcript t = play(sp, GameKind::G7, *strat_i, *strat_ii, 4);
        CHECK(transcript_to_json(*sp, t).dump() == ref.dump());
    }
}

TEST_CASE("G7 sigma reports tail density instead of a winner") {
    const auto sp = Space::discrete(2);
    // II offers the partition; I picks everything in round 0 and then only {0}.
    const auto strat_ii = const_strategy(Move::family({pts({0}), pts({1})}), "partition");
    const auto strat_i = std::make_shared<CallbackStrategy>(
        "first-then-zero",
        [](const PlayContext& ctx, std::span<const Move> opp) -> std::optional<Move> {
            const auto& fam = opp.back().sets;
            if (ctx.round == 0) return Move::finite_family(fam);
            return Move::finite_family({fam[0]});
        });
    const Transcript t = play(sp, GameKind::G7_SIGMA, *strat_i, *strat_ii, 3);
    CHECK(t.verdict.outcome == Outcome::UndeterminedIILeading);
    REQUIRE(t.verdict.tail_dense.size() == 3);
    CHECK(t.verdict.tail_dense[0]);        // rounds 0.. cover both points
    CHECK_FALSE(t.verdict.tail_dense[1]);  // rounds 1.. only ever cover {0}
    CHECK_FALSE(t.verdict.tail_dense[2]);
}

TEST_CASE("G4 referee plays a full round") {
    const auto sp = Space::discrete(2);
    const auto strat_i =
        const_strategy(Move::finite_family({pts({0}), pts({1})}), "both");
    const auto strat_ii = std::make_shared<CallbackStrategy>(
        "refine",
        [](const PlayContext&, std::span<const Move> opp) -> std::optional<Move> {
            return opp.back();  // same family back: sizes match, refines itself
        });
    const Transcript t = play(sp, GameKind::G4, *strat_i, *strat_ii, 1);
    CHECK(t.verdict.outcome == Outcome::IWinsAtT);
}

TEST_CASE("cross_play: echo is beaten somewhere, II survives when I cannot cover") {
    const auto sp = Space::discrete(2);
    const ExhaustiveOpenEnumerator all_opens;

    SUBCASE("echo strategy for II loses some line") {
        const auto rep = cross_play(sp, GameKind::G, *echo_strategy(), Player::II,
                                    all_opens, 2, 1000);
        CHECK(rep.complete);
        // three nonempty opens; the {0,1} opener wins immediately, the other
        // two branch over three second moves: 1 + 2*3 lines
        CHECK(rep.lines == 7);
        CHECK(rep.i_wins > 0);
        CHECK_FALSE(rep.survives_at_scale);
    }
    SUBCASE("the fixed-singleton II strategy: the report lists surviving lines") {
        const auto fixed = std::make_shared<CallbackStrategy>(
            "fixed-singleton",
            [](const PlayContext&, std::span<const Move> opp) -> std::optional<Move> {
                const OpenSet& u = opp.back().one();
                if ((u.points() >> 0) & 1) return Move::single(OpenSet(PointSet{1}));
                return Move::single(u);
            });
        const auto rep =
            cross_play(sp, GameKind::G, *fixed, Player::II, all_opens, 3, 1000);
        CHECK(rep.complete);
        CHECK(rep.undetermined > 0);  // e.g. I repeating {0} forever
        CHECK(rep.line_records.size() == rep.lines);
        bool surviving_listed = false;
        for (const auto& line : rep.line_records) {
            if (line.outcome == Outcome::UndeterminedIILeading) surviving_listed = true;
        }
        CHECK(surviving_listed);
    }
    SUBCASE("T = 0 gives an empty report") {
        const auto rep = cross_play(sp, GameKind::G, *echo_strategy(), Player::II,
                                    all_opens, 0, 1000);
        CHECK(rep.lines == 0);
        CHECK(rep.complete);
    }
    SUBCASE("budget exhaustion flags the report incomplete") {
        const auto rep = cross_play(sp, GameKind::G, *echo_strategy(), Player::II,
                                    all_opens, 2, 4);
        CHECK_FALSE(rep.complete);
        CHECK(rep.lines == 4);
    }
}

TEST_CASE("subset enumerator honours size caps and prefix mode") {
    const auto sp = Space::discrete(3);
    Referee pos(sp, GameKind::G7, 2);
    pos.apply(Move::family({pts({0}), pts({1}), pts({2})}));
    CHECK(SubsetPickEnumerator(1).options(pos).size() == 3);
    CHECK(SubsetPickEnumerator(2).options(pos).size() == 6);
    CHECK(SubsetPickEnumerator(3).options(pos).size() == 7);
    const auto prefixes = SubsetPickEnumerator(2, /*prefix_only=*/true).options(pos);
    REQUIRE(prefixes.size() == 2);
    CHECK(prefixes[0].sets.size() == 1);
    CHECK(prefixes[1].sets.size() == 2);
}

TEST_CASE("table strategies answer known histories and fall back to the default") {
    const auto sp = Space::discrete(2);
    const Move fam_a = Move::family({pts({0}), pts({1})});
    const Move fam_b = Move::family({pts({0, 1})});
    TableStrategy table(GameKind::G2, fam_b, {{{Move::single(pts({0}))}, fam_a}});
    const PlayContext ctx{*sp, GameKind::G2, Player::II, 1};
    const std::vector<Move> known{Move::single(pts({0}))};
    const std::vector<Move> unknown{Move::single(pts({1}))};
    CHECK(*table.next(ctx, known) == fam_a);
    CHECK(*table.next(ctx, unknown) == fam_b);

    TableStrategy no_default(GameKind::G2, std::nullopt, {});
    CHECK_FALSE(no_default.next(ctx, known).has_value());
    // a strategy without a move forfeits
    const Transcript t = play(sp, GameKind::G2, *pick_member(0), no_default, 1);
    CHECK(t.verdict.outcome == Outcome::Illegal);
    CHECK(t.verdict.illegal->player == Player::II);
}

TEST_CASE("canonical history keys ignore member order inside a move") {
    const auto sp = Space::discrete(3);
    const std::vector<Move> h1{Move::family({pts({0}), pts({1, 2})})};
    const std::vector<Move> h2{Move::family({pts({1, 2}), pts({0})})};
    CHECK(canonical_history_key(*sp, h1) == canonical_history_key(*sp, h2));
    const std::vector<Move> h3{Move::family({pts({1}), pts({0, 2})})};
    CHECK(canonical_history_key(*sp, h1) != canonical_history_key(*sp, h3));
}
