#pragma once

#include "omg/space.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace omg {

enum class GameKind { G, G2, G4, G7, G7_SIGMA };

enum class Player { I, II };

inline Player other(Player p) { return p == Player::I ? Player::II : Player::I; }

// II opens in the cover games, I in the open-open game and G4.
inline Player first_mover(GameKind k) {
    return (k == GameKind::G || k == GameKind::G4) ? Player::I : Player::II;
}

enum class MoveType { Single, Family, FiniteFamily };

struct Move {
    MoveType type = MoveType::Single;
    std::vector<OpenSet> sets;

    static Move single(OpenSet s) { return {MoveType::Single, {std::move(s)}}; }
    static Move family(std::vector<OpenSet> f) { return {MoveType::Family, std::move(f)}; }
    static Move finite_family(std::vector<OpenSet> f) {
        return {MoveType::FiniteFamily, std::move(f)};
    }

    const OpenSet& one() const {
        if (type != MoveType::Single || sets.size() != 1) {
            throw ProtocolError("move is not a single open set");
        }
        return sets[0];
    }

    bool operator==(const Move&) const = default;
};

enum class Outcome { IWinsAtT, UndeterminedIILeading, Illegal };

struct IllegalInfo {
    Player player;
    int round = 0;
    std::string reason;
};

struct Verdict {
    Outcome outcome = Outcome::UndeterminedIILeading;
    int win_round = -1;                  // round where density was reached
    std::optional<IllegalInfo> illegal;  // set iff outcome == Illegal
    std::vector<bool> tail_dense;        // G7_SIGMA: k-th entry = ⋃_{n≥k}⋃T_n dense
};

struct RoundEntry {
    Player mover;
    Move move;
    bool operator==(const RoundEntry&) const = default;
};

struct Transcript {
    GameKind kind;
    int T = 0;
    std::vector<RoundEntry> rounds;  // alternating per protocol, length ≤ 2T
    Verdict verdict;
};

struct PlayContext {
    const Space& space;
    GameKind kind;
    Player role;
    int round;  // own move index, 0-based
};

// Deterministic map from the opponent-move history to the next move.
// Returning nullopt means the strategy has no move; the referee records an
// ILLEGAL verdict against the owner.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::optional<Move> next(const PlayContext& ctx,
                                     std::span<const Move> opponent_history) const = 0;
    virtual std::string name() const { return "strategy"; }
};

using StrategyPtr = std::shared_ptr<const Strategy>;

class CallbackStrategy final : public Strategy {
public:
    using Fn = std::function<std::optional<Move>(const PlayContext&, std::span<const Move>)>;
    CallbackStrategy(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
    std::optional<Move> next(const PlayContext& ctx,
                             std::span<const Move> hist) const override {
        return fn_(ctx, hist);
    }
    std::string name() const override { return name_; }

private:
    std::string name_;
    Fn fn_;
};

// Plays one fixed move every round.
StrategyPtr const_strategy(Move m, std::string name = "const");

// For the open-open game: II echoes I's set back.
StrategyPtr echo_strategy();

// Table strategy with canonical-serialization history keys and an optional
// default move for unknown histories.
class TableStrategy final : public Strategy {
public:
    TableStrategy(GameKind kind, std::optional<Move> fallback,
                  std::vector<std::pair<std::vector<Move>, Move>> entries);

    std::optional<Move> next(const PlayContext& ctx,
                             std::span<const Move> hist) const override;
    std::string name() const override { return "table"; }
    GameKind kind() const { return kind_; }
    const std::optional<Move>& fallback() const { return fallback_; }
    const std::vector<std::pair<std::vector<Move>, Move>>& entries() const { return entries_; }

private:
    GameKind kind_;
    std::optional<Move> fallback_;
    std::vector<std::pair<std::vector<Move>, Move>> entries_;
};

// Canonical serialization of histories: sorted set representations, stable
// across runs. Used for table lookup and determinism checks.
std::string canonical_history_key(const Space& space, std::span<const Move> history);

// Copyable game position: validates moves, tracks the accumulated target
// union, and settles the verdict. Win detection is monotone (density of the
// accumulated union is checked after every completed round).
class Referee {
public:
    Referee(SpacePtr space, GameKind kind, int T);

    bool finished() const { return final_.has_value(); }
    Player to_move() const;
    int round() const { return round_; }
    const Space& space() const { return *space_; }
    GameKind kind() const { return kind_; }

    // nullopt = legal. Does not mutate.
    std::optional<std::string> illegal_reason(const Move& m) const;

    // Applies the move; on an illegal move records the ILLEGAL verdict and
    // stops the game (no exception). Throws ProtocolError if already finished.
    void apply(const Move& m);

    // Ends the game with an ILLEGAL verdict against `p` without a move
    // (strategy had no move for the position).
    void forfeit(Player p, const std::string& reason);

    const Verdict& verdict() const;
    Transcript transcript() const;
    const std::vector<Move>& history_of(Player p) const {
        return p == Player::I ? moves_I_ : moves_II_;
    }

private:
    void finish_round();
    MoveType expected_type(Player p) const;

    SpacePtr space_;
    GameKind kind_;
    int T_;
    int round_ = 0;
    bool first_to_move_ = true;
    std::vector<Move> moves_I_, moves_II_;
    std::vector<RoundEntry> entries_;
    OpenSet accumulated_;
    std::vector<OpenSet> round_contrib_;  // per-round addition, for tail reports
    std::optional<Verdict> final_;
};

// Runs strat_I vs strat_II for T rounds (or until a win / illegal move).
Transcript play(SpacePtr space, GameKind kind, const Strategy& strat_I,
                const Strategy& strat_II, int T);

// Legality of `move` after `history` (all moves so far, in protocol order).
// Throws ProtocolError if the history itself is malformed or illegal.
bool legal(SpacePtr space, GameKind kind, std::span<const Move> history, const Move& move);

// Enumerates the adversary's legal options at a position.
class MoveEnumerator {
public:
    virtual ~MoveEnumerator() = default;
    virtual std::vector<Move> options(const Referee& pos) const = 0;
};

// All nonempty open sets of a point space (unions of basis elements); for
// the open-open game role II, restricted to subsets of I's last set.
class ExhaustiveOpenEnumerator final : public MoveEnumerator {
public:
    std::vector<Move> options(const Referee& pos) const override;
};

// G2 adversary (player I): every nonempty member of II's family.
class MemberPickEnumerator final : public MoveEnumerator {
public:
    std::vector<Move> options(const Referee& pos) const override;
};

// G7 adversary (player I): subsets of II's family of size 1..max_size, or
// only initial segments when prefix_only is set (the faithful option for
// ascending-chain families).
class SubsetPickEnumerator final : public MoveEnumerator {
public:
    explicit SubsetPickEnumerator(int max_size, bool prefix_only = false)
        : max_size_(max_size), prefix_only_(prefix_only) {}
    std::vector<Move> options(const Referee& pos) const override;

private:
    int max_size_;
    bool prefix_only_;
};

struct CrossPlayLine {
    std::vector<int> choices;  // adversary option indexes, round by round
    Outcome outcome;
    int win_round = -1;
};

struct CrossPlayReport {
    GameKind kind;
    int T = 0;
    Player tested_role = Player::II;
    std::uint64_t lines = 0;
    std::uint64_t i_wins = 0;
    std::uint64_t undetermined = 0;
    std::uint64_t illegal = 0;
    bool complete = true;  // false iff the line budget ran out
    bool survives_at_scale = false;
    std::vector<CrossPlayLine> line_records;
};

// Plays `tested` (in `tested_role`) against every adversary line the
// enumerator generates, up to `budget` lines. Strategies must be pure.
CrossPlayReport cross_play(SpacePtr space, GameKind kind, const Strategy& tested,
                           Player tested_role, const MoveEnumerator& adversary, int T,
                           std::uint64_t budget);

std::string to_string(GameKind k);
std::string to_string(Player p);
std::string to_string(Outcome o);
GameKind game_kind_from_string(const std::string& s);

}  // namespace omg
