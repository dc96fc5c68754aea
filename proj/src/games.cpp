#include "omg/games.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace omg {

std::string to_string(GameKind k) {
    switch (k) {
        case GameKind::G: return "G";
        case GameKind::G2: return "G2";
        case GameKind::G4: return "G4";
        case GameKind::G7: return "G7";
        case GameKind::G7_SIGMA: return "G7_SIGMA";
    }
    return "?";
}

std::string to_string(Player p) { return p == Player::I ? "I" : "II"; }

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::IWinsAtT: return "I_WINS_AT_T";
        case Outcome::UndeterminedIILeading: return "UNDETERMINED_II_LEADING";
        case Outcome::Illegal: return "ILLEGAL";
    }
    return "?";
}

GameKind game_kind_from_string(const std::string& s) {
    if (s == "G" || s == "g") return GameKind::G;
    if (s == "G2" || s == "g2") return GameKind::G2;
    if (s == "G4" || s == "g4") return GameKind::G4;
    if (s == "G7" || s == "g7") return GameKind::G7;
    if (s == "G7_SIGMA" || s == "g7-sigma" || s == "g7sigma") return GameKind::G7_SIGMA;
    throw ProtocolError("unknown game kind: " + s);
}

namespace {

void dump_set(std::ostringstream& os, const OpenSet& s) {
    if (s.is_points()) {
        os << '{';
        const PointSet m = s.points();
        bool first = true;
        for (int i = 0; i < 64; ++i) {
            if ((m >> i) & 1) {
                if (!first) os << ',';
                os << i;
                first = false;
            }
        }
        os << '}';
    } else {
        os << '[';
        bool first = true;
        for (const auto& [lo, hi] : s.intervals().intervals()) {
            if (!first) os << ',';
            os << '(' << rat_str(lo) << ' ' << rat_str(hi) << ')';
            first = false;
        }
        os << ']';
    }
}

void dump_move(std::ostringstream& os, const Move& m) {
    switch (m.type) {
        case MoveType::Single: os << "s"; break;
        case MoveType::Family: os << "f"; break;
        case MoveType::FiniteFamily: os << "t"; break;
    }
    std::vector<OpenSet> sorted = m.sets;
    std::sort(sorted.begin(), sorted.end(), [](const OpenSet& a, const OpenSet& b) {
        return a.canonical_order(b) == std::strong_ordering::less;
    });
    os << '<';
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) os << ';';
        dump_set(os, sorted[i]);
    }
    os << '>';
}

}  // namespace

std::string canonical_history_key(const Space&, std::span<const Move> history) {
    std::ostringstream os;
    for (const auto& m : history) dump_move(os, m);
    return os.str();
}

StrategyPtr const_strategy(Move m, std::string name) {
    return std::make_shared<CallbackStrategy>(
        std::move(name),
        [m = std::move(m)](const PlayContext&, std::span<const Move>) -> std::optional<Move> {
            return m;
        });
}

StrategyPtr echo_strategy() {
    return std::make_shared<CallbackStrategy>(
        "echo",
        [](const PlayContext&, std::span<const Move> opp) -> std::optional<Move> {
            if (opp.empty()) return std::nullopt;
            return Move::single(opp.back().one());
        });
}

TableStrategy::TableStrategy(GameKind kind, std::optional<Move> fallback,
                             std::vector<std::pair<std::vector<Move>, Move>> entries)
    : kind_(kind), fallback_(std::move(fallback)), entries_(std::move(entries)) {}

std::optional<Move> TableStrategy::next(const PlayContext& ctx,
                                        std::span<const Move> hist) const {
    const std::string key = canonical_history_key(ctx.space, hist);
    for (const auto& [h, mv] : entries_) {
        if (canonical_history_key(ctx.space, h) == key) return mv;
    }
    return fallback_;
}

Referee::Referee(SpacePtr space, GameKind kind, int T)
    : space_(std::move(space)), kind_(kind), T_(T), accumulated_(space_->empty_set()) {
    if (T_ < 0) throw ProtocolError("negative round count");
    if (T_ == 0) final_ = Verdict{Outcome::UndeterminedIILeading, -1, std::nullopt, {}};
}

Player Referee::to_move() const {
    const Player first = first_mover(kind_);
    return first_to_move_ ? first : other(first);
}

MoveType Referee::expected_type(Player p) const {
    switch (kind_) {
        case GameKind::G: return MoveType::Single;
        case GameKind::G2: return p == Player::II ? MoveType::Family : MoveType::Single;
        case GameKind::G7:
        case GameKind::G7_SIGMA:
            return p == Player::II ? MoveType::Family : MoveType::FiniteFamily;
        case GameKind::G4: return MoveType::FiniteFamily;
    }
    throw ProtocolError("bad game kind");
}

std::optional<std::string> Referee::illegal_reason(const Move& m) const {
    const Player p = to_move();
    if (m.type != expected_type(p)) return "wrong move type for this turn";
    for (const auto& s : m.sets) space_->check_member(s);  // mixed spaces: type error

    const auto open_nonempty = [&](const OpenSet& s) -> std::optional<std::string> {
        if (s.empty()) return "set is empty";
        if (!space_->is_open(s)) return "set is not open";
        return std::nullopt;
    };
    const auto member_of = [&](const OpenSet& s, const std::vector<OpenSet>& fam) {
        return std::any_of(fam.begin(), fam.end(), [&](const OpenSet& f) { return f == s; });
    };

    switch (kind_) {
        case GameKind::G: {
            if (m.sets.size() != 1) return "single move must carry one set";
            if (auto r = open_nonempty(m.sets[0])) return r;
            if (p == Player::II) {
                const OpenSet& u = moves_I_.back().one();
                if (!m.sets[0].subset_of(u)) return "II's set is not inside I's set";
            }
            return std::nullopt;
        }
        case GameKind::G2:
        case GameKind::G7:
        case GameKind::G7_SIGMA: {
            if (p == Player::II) {
                for (const auto& s : m.sets) {
                    if (!space_->is_open(s)) return "family member is not open";
                }
                if (!space_->is_dense(m.sets)) return "family union is not dense";
                return std::nullopt;
            }
            const std::vector<OpenSet>& fam = moves_II_.back().sets;
            if (kind_ == GameKind::G2) {
                if (m.sets.size() != 1) return "single move must carry one set";
                if (m.sets[0].empty()) return "pick is empty";
                if (!member_of(m.sets[0], fam)) return "pick is not a member of II's family";
                return std::nullopt;
            }
            for (const auto& s : m.sets) {
                if (!member_of(s, fam)) return "selection contains a non-member";
            }
            return std::nullopt;  // empty finite subsets are allowed
        }
        case GameKind::G4: {
            for (const auto& s : m.sets) {
                if (auto r = open_nonempty(s)) return r;
            }
            if (p == Player::II) {
                const std::vector<OpenSet>& proposed = moves_I_.back().sets;
                if (m.sets.size() != proposed.size()) return "family sizes differ";
                for (const auto& v : proposed) {
                    const bool refined = std::any_of(
                        m.sets.begin(), m.sets.end(),
                        [&](const OpenSet& w) { return w.subset_of(v); });
                    if (!refined) return "no member refines one of I's sets";
                }
            }
            return std::nullopt;
        }
    }
    throw ProtocolError("bad game kind");
}

void Referee::apply(const Move& m) {
    if (finished()) throw ProtocolError("game already finished");
    const Player p = to_move();
    const auto reason = illegal_reason(m);
    entries_.push_back({p, m});
    (p == Player::I ? moves_I_ : moves_II_).push_back(m);
    if (reason) {
        final_ = Verdict{Outcome::Illegal, -1, IllegalInfo{p, round_, *reason}, {}};
        return;
    }
    if (first_to_move_) {
        first_to_move_ = false;
        return;
    }
    // Second move of the round: it is always the accumulating one.
    OpenSet contrib = space_->empty_set();
    for (const auto& s : m.sets) contrib = contrib.unite(s);
    round_contrib_.push_back(contrib);
    accumulated_ = accumulated_.unite(contrib);
    first_to_move_ = true;
    ++round_;
    finish_round();
}

void Referee::finish_round() {
    if (kind_ != GameKind::G7_SIGMA && space_->is_dense_set(accumulated_)) {
        final_ = Verdict{Outcome::IWinsAtT, round_ - 1, std::nullopt, {}};
        return;
    }
    if (round_ == T_) {
        Verdict v{Outcome::UndeterminedIILeading, -1, std::nullopt, {}};
        if (kind_ == GameKind::G7_SIGMA) {
            v.tail_dense.resize(static_cast<std::size_t>(T_));
            for (int k = T_ - 1; k >= 0; --k) {
                OpenSet tail = space_->empty_set();
                for (int n = k; n < T_; ++n) tail = tail.unite(round_contrib_[n]);
                v.tail_dense[static_cast<std::size_t>(k)] = space_->is_dense_set(tail);
            }
        }
        final_ = v;
    }
}

void Referee::forfeit(Player p, const std::string& reason) {
    if (finished()) throw ProtocolError("game already finished");
    final_ = Verdict{Outcome::Illegal, -1, IllegalInfo{p, round_, reason}, {}};
}

const Verdict& Referee::verdict() const {
    if (!final_) throw ProtocolError("game not finished");
    return *final_;
}

Transcript Referee::transcript() const {
    return Transcript{kind_, T_, entries_, verdict()};
}

Transcript play(SpacePtr space, GameKind kind, const Strategy& strat_I,
                const Strategy& strat_II, int T) {
    if (T < 1) throw ProtocolError("play needs T >= 1");
    Referee ref(std::move(space), kind, T);
    while (!ref.finished()) {
        const Player p = ref.to_move();
        const Strategy& s = p == Player::I ? strat_I : strat_II;
        const auto& opp = ref.history_of(other(p));
        const PlayContext ctx{ref.space(), kind, p,
                              static_cast<int>(ref.history_of(p).size())};
        const auto mv = s.next(ctx, opp);
        if (!mv) {
            ref.forfeit(p, "strategy has no move for this history");
            break;
        }
        ref.apply(*mv);
    }
    return ref.transcript();
}

bool legal(SpacePtr space, GameKind kind, std::span<const Move> history, const Move& move) {
    Referee ref(std::move(space), kind, static_cast<int>(history.size() / 2) + 1);
    for (const auto& h : history) {
        if (ref.finished()) throw ProtocolError("history continues past the end of the game");
        if (auto r = ref.illegal_reason(h)) {
            throw ProtocolError("history contains an illegal move: " + *r);
        }
        ref.apply(h);
    }
    if (ref.finished()) throw ProtocolError("history already decided the game");
    return !ref.illegal_reason(move).has_value();
}

std::vector<Move> ExhaustiveOpenEnumerator::options(const Referee& pos) const {
    const Space& sp = pos.space();
    if (!sp.has_points()) {
        throw ProtocolError("exhaustive open enumeration needs a point space");
    }
    const int n = sp.point_count();
    if (n > 20) throw CapError("too many points for exhaustive open enumeration", 1ull << n);
    std::vector<Move> out;
    OpenSet bound = sp.full_set();
    if (pos.kind() == GameKind::G && pos.to_move() == Player::II) {
        bound = pos.history_of(Player::I).back().one();
    }
    for (PointSet m = 1; m < (PointSet{1} << n); ++m) {
        OpenSet s(m);
        if (!s.subset_of(bound)) continue;
        if (!sp.is_open(s)) continue;
        out.push_back(Move::single(s));
    }
    return out;
}

std::vector<Move> MemberPickEnumerator::options(const Referee& pos) const {
    const auto& fam = pos.history_of(Player::II).back().sets;
    std::vector<Move> out;
    std::vector<OpenSet> seen;
    for (const auto& s : fam) {
        if (s.empty()) continue;
        if (std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
        seen.push_back(s);
        out.push_back(Move::single(s));
    }
    return out;
}

std::vector<Move> SubsetPickEnumerator::options(const Referee& pos) const {
    const auto& fam = pos.history_of(Player::II).back().sets;
    const int f = static_cast<int>(fam.size());
    std::vector<Move> out;
    if (prefix_only_) {
        for (int len = 1; len <= std::min(max_size_, f); ++len) {
            out.push_back(Move::finite_family(
                std::vector<OpenSet>(fam.begin(), fam.begin() + len)));
        }
        return out;
    }
    // All index subsets of size 1..max_size, lexicographic.
    std::vector<int> idx;
    const std::function<void(int)> rec = [&](int start) {
        if (!idx.empty() && static_cast<int>(idx.size()) <= max_size_) {
            std::vector<OpenSet> sel;
            for (int i : idx) sel.push_back(fam[static_cast<std::size_t>(i)]);
            out.push_back(Move::finite_family(std::move(sel)));
        }
        if (static_cast<int>(idx.size()) == max_size_) return;
        for (int i = start; i < f; ++i) {
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(0);
    return out;
}

namespace {

constexpr std::size_t kMaxLineRecords = 16384;

void record_line(CrossPlayReport& rep, const std::vector<int>& choices, const Verdict& v,
                 std::uint64_t budget) {
    if (rep.lines >= budget) {
        rep.complete = false;
        return;
    }
    ++rep.lines;
    switch (v.outcome) {
        case Outcome::IWinsAtT: ++rep.i_wins; break;
        case Outcome::UndeterminedIILeading: ++rep.undetermined; break;
        case Outcome::Illegal: ++rep.illegal; break;
    }
    if (rep.line_records.size() < kMaxLineRecords) {
        rep.line_records.push_back({choices, v.outcome, v.win_round});
    }
}

void dfs(Referee pos, const Strategy& tested, Player tested_role,
         const MoveEnumerator& adversary, std::vector<int>& choices,
         CrossPlayReport& rep, std::uint64_t budget) {
    if (!rep.complete) return;
    for (;;) {
        if (pos.finished()) {
            record_line(rep, choices, pos.verdict(), budget);
            return;
        }
        const Player p = pos.to_move();
        if (p == tested_role) {
            const auto& opp = pos.history_of(other(p));
            const PlayContext ctx{pos.space(), pos.kind(), p,
                                  static_cast<int>(pos.history_of(p).size())};
            const auto mv = tested.next(ctx, opp);
            if (!mv) {
                pos.forfeit(p, "strategy has no move for this history");
                continue;
            }
            pos.apply(*mv);
            continue;
        }
        const auto opts = adversary.options(pos);
        if (opts.empty()) {
            pos.forfeit(p, "adversary has no options");
            continue;
        }
        for (std::size_t i = 0; i < opts.size(); ++i) {
            choices.push_back(static_cast<int>(i));
            Referee fork = pos;
            fork.apply(opts[i]);
            dfs(std::move(fork), tested, tested_role, adversary, choices, rep, budget);
            choices.pop_back();
            if (!rep.complete) return;
        }
        return;
    }
}

}  // namespace

CrossPlayReport cross_play(SpacePtr space, GameKind kind, const Strategy& tested,
                           Player tested_role, const MoveEnumerator& adversary, int T,
                           std::uint64_t budget) {
    CrossPlayReport rep;
    rep.kind = kind;
    rep.T = T;
    rep.tested_role = tested_role;
    if (T == 0) return rep;  // empty report
    std::vector<int> choices;
    dfs(Referee(std::move(space), kind, T), tested, tested_role, adversary, choices, rep,
        budget);
    rep.survives_at_scale =
        tested_role == Player::II
            ? (rep.complete && rep.i_wins == 0 && rep.lines > 0)
            : (rep.complete && rep.lines > 0 && rep.i_wins == rep.lines);
    return rep;
}

}  // namespace omg
