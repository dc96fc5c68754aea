#include "omg/json_io.hpp"

#include <fstream>

namespace omg {

namespace {

[[noreturn]] void malformed(const std::string& what) {
    throw ProtocolError("malformed input: " + what);
}

void expect(bool ok, const std::string& what) {
    if (!ok) malformed(what);
}

}  // namespace

Json space_to_json(const Space& space) {
    Json j;
    switch (space.kind()) {
        case SpaceKind::Finite: {
            j["kind"] = "finite";
            j["n"] = space.point_count();
            Json basis = Json::array();
            for (PointSet b : space.basis()) {
                Json elem = Json::array();
                for (int i = 0; i < 64; ++i) {
                    if ((b >> i) & 1) elem.push_back(i);
                }
                basis.push_back(elem);
            }
            j["basis"] = basis;
            break;
        }
        case SpaceKind::Discrete:
            j["kind"] = "discrete";
            j["n"] = space.point_count();
            break;
        case SpaceKind::Interval:
            j["kind"] = "interval";
            break;
    }
    return j;
}

SpacePtr space_from_json(const Json& j) {
    expect(j.is_object() && j.contains("kind") && j["kind"].is_string(),
           "space needs a \"kind\" string");
    const std::string kind = j["kind"];
    if (kind == "interval") return Space::interval();
    expect(j.contains("n") && j["n"].is_number_integer(), "space needs an integer \"n\"");
    const int n = j["n"];
    if (kind == "discrete") return Space::discrete(n);
    if (kind == "finite") {
        expect(j.contains("basis") && j["basis"].is_array(), "finite space needs a basis");
        std::vector<PointSet> basis;
        for (const auto& elem : j["basis"]) {
            expect(elem.is_array(), "basis element must be an array of points");
            PointSet m = 0;
            for (const auto& p : elem) {
                expect(p.is_number_integer(), "point must be an integer");
                const int x = p;
                expect(x >= 0 && x < n, "point out of range");
                m |= PointSet{1} << x;
            }
            basis.push_back(m);
        }
        return Space::finite(n, std::move(basis));
    }
    malformed("unknown space kind: " + kind);
}

Json open_set_to_json(const Space& space, const OpenSet& s) {
    Json j = Json::array();
    if (space.has_points()) {
        const PointSet m = s.points();
        for (int i = 0; i < 64; ++i) {
            if ((m >> i) & 1) j.push_back(i);
        }
    } else {
        for (const auto& [lo, hi] : s.intervals().intervals()) {
            j.push_back(Json::array({rat_str(lo), rat_str(hi)}));
        }
    }
    return j;
}

OpenSet open_set_from_json(const Space& space, const Json& j) {
    expect(j.is_array(), "open set must be an array");
    if (space.has_points()) {
        PointSet m = 0;
        for (const auto& p : j) {
            expect(p.is_number_integer(), "point must be an integer");
            const int x = p;
            expect(x >= 0 && x < space.point_count(), "point out of range");
            m |= PointSet{1} << x;
        }
        return OpenSet(m);
    }
    std::vector<IntervalSet::Interval> ivs;
    for (const auto& pair : j) {
        expect(pair.is_array() && pair.size() == 2 && pair[0].is_string() &&
                   pair[1].is_string(),
               "interval must be a pair of rational strings");
        try {
            ivs.push_back({parse_rat(pair[0]), parse_rat(pair[1])});
        } catch (const std::invalid_argument& e) {
            malformed(e.what());
        }
    }
    return OpenSet(IntervalSet(std::move(ivs)));
}

Json move_to_json(const Space& space, const Move& m) {
    Json j;
    switch (m.type) {
        case MoveType::Single:
            j["type"] = "single";
            j["set"] = open_set_to_json(space, m.one());
            return j;
        case MoveType::Family: j["type"] = "family"; break;
        case MoveType::FiniteFamily: j["type"] = "finite-family"; break;
    }
    Json sets = Json::array();
    for (const auto& s : m.sets) sets.push_back(open_set_to_json(space, s));
    j["sets"] = sets;
    return j;
}

Move move_from_json(const Space& space, const Json& j) {
    expect(j.is_object() && j.contains("type") && j["type"].is_string(),
           "move needs a \"type\"");
    const std::string type = j["type"];
    if (type == "single") {
        expect(j.contains("set"), "single move needs a \"set\"");
        return Move::single(open_set_from_json(space, j["set"]));
    }
    expect(j.contains("sets") && j["sets"].is_array(), "family move needs \"sets\"");
    std::vector<OpenSet> sets;
    for (const auto& s : j["sets"]) sets.push_back(open_set_from_json(space, s));
    if (type == "family") return Move::family(std::move(sets));
    if (type == "finite-family") return Move::finite_family(std::move(sets));
    malformed("unknown move type: " + type);
}

Json transcript_to_json(const Space& space, const Transcript& t) {
    Json j;
    j["kind"] = to_string(t.kind);
    j["T"] = t.T;
    Json rounds = Json::array();
    for (const auto& e : t.rounds) {
        rounds.push_back(
            {{"mover", to_string(e.mover)}, {"move", move_to_json(space, e.move)}});
    }
    j["rounds"] = rounds;
    Json v;
    v["outcome"] = to_string(t.verdict.outcome);
    if (t.verdict.outcome == Outcome::IWinsAtT) v["win_round"] = t.verdict.win_round;
    if (t.verdict.illegal) {
        v["illegal"] = {{"player", to_string(t.verdict.illegal->player)},
                        {"round", t.verdict.illegal->round},
                        {"reason", t.verdict.illegal->reason}};
    }
    if (t.kind == GameKind::G7_SIGMA && t.verdict.outcome != Outcome::Illegal) {
        Json tails = Json::array();
        for (const bool b : t.verdict.tail_dense) tails.push_back(b);
        v["tail_dense"] = tails;
    }
    j["verdict"] = v;
    return j;
}

Transcript transcript_from_json(const Space& space, const Json& j) {
    expect(j.is_object() && j.contains("kind") && j.contains("T") && j.contains("rounds") &&
               j.contains("verdict"),
           "transcript needs kind, T, rounds and verdict");
    Transcript t;
    t.kind = game_kind_from_string(j["kind"]);
    t.T = j["T"];
    for (const auto& e : j["rounds"]) {
        expect(e.contains("mover") && e.contains("move"), "round needs mover and move");
        const std::string mover = e["mover"];
        t.rounds.push_back(
            {mover == "I" ? Player::I : Player::II, move_from_json(space, e["move"])});
    }
    const auto& v = j["verdict"];
    const std::string outcome = v["outcome"];
    if (outcome == "I_WINS_AT_T") {
        t.verdict.outcome = Outcome::IWinsAtT;
        t.verdict.win_round = v.value("win_round", -1);
    } else if (outcome == "ILLEGAL") {
        t.verdict.outcome = Outcome::Illegal;
        const auto& il = v["illegal"];
        t.verdict.illegal = IllegalInfo{
            il["player"] == "I" ? Player::I : Player::II, il["round"], il["reason"]};
    } else {
        t.verdict.outcome = Outcome::UndeterminedIILeading;
    }
    if (v.contains("tail_dense")) {
        for (const auto& b : v["tail_dense"]) t.verdict.tail_dense.push_back(b.get<bool>());
    }
    return t;
}

Json sequence_to_json(const FamilySequence& seq) {
    Json j;
    j["space"] = space_to_json(seq.space());
    j["kind"] = to_string(seq.kind_claimed());
    Json fams = Json::array();
    for (const auto& fam : seq.families()) {
        Json f = Json::array();
        for (const auto& s : fam) f.push_back(open_set_to_json(seq.space(), s));
        fams.push_back(f);
    }
    j["families"] = fams;
    return j;
}

FamilySequence sequence_from_json(const Json& j) {
    expect(j.is_object() && j.contains("space") && j.contains("kind") &&
               j.contains("families"),
           "sequence needs space, kind and families");
    const SpacePtr space = space_from_json(j["space"]);
    const SeqKind kind = seq_kind_from_string(j["kind"]);
    std::vector<std::vector<OpenSet>> fams;
    expect(j["families"].is_array(), "families must be an array");
    for (const auto& fam : j["families"]) {
        expect(fam.is_array(), "family must be an array of open sets");
        std::vector<OpenSet> f;
        for (const auto& s : fam) f.push_back(open_set_from_json(*space, s));
        fams.push_back(std::move(f));
    }
    return FamilySequence(space, std::move(fams), kind);
}

Json function_family_to_json(const FunctionFamily& F) {
    Json j;
    j["m"] = F.m;
    j["r"] = F.r;
    j["funcs"] = F.funcs;
    return j;
}

FunctionFamily function_family_from_json(const Json& j) {
    expect(j.is_object() && j.contains("m") && j.contains("r") && j.contains("funcs"),
           "function family needs m, r and funcs");
    FunctionFamily F;
    F.m = j["m"];
    F.r = j["r"];
    expect(j["funcs"].is_array(), "funcs must be an array");
    for (const auto& f : j["funcs"]) {
        expect(f.is_array(), "each function must be an array");
        std::vector<int> fn;
        for (const auto& v : f) {
            expect(v.is_number_integer(), "function value must be an integer");
            fn.push_back(v);
        }
        F.funcs.push_back(std::move(fn));
    }
    try {
        F.validate();
    } catch (const ConstructionError& e) {
        malformed(e.what());
    }
    return F;
}

Json strategy_to_json(const Space& space, GameKind kind, const TableStrategy& s) {
    Json j;
    j["kind"] = to_string(kind);
    if (s.fallback()) j["default"] = move_to_json(space, *s.fallback());
    Json table = Json::array();
    for (const auto& [hist, mv] : s.entries()) {
        Json h = Json::array();
        for (const auto& m : hist) h.push_back(move_to_json(space, m));
        table.push_back({{"history", h}, {"move", move_to_json(space, mv)}});
    }
    j["table"] = table;
    return j;
}

StrategyFile strategy_from_json(const Space& space, const Json& j) {
    expect(j.is_object() && j.contains("kind"), "strategy needs a game kind");
    StrategyFile out;
    out.kind = game_kind_from_string(j["kind"]);
    std::optional<Move> fallback;
    if (j.contains("default")) fallback = move_from_json(space, j["default"]);
    std::vector<std::pair<std::vector<Move>, Move>> entries;
    if (j.contains("table")) {
        expect(j["table"].is_array(), "strategy table must be an array");
        for (const auto& e : j["table"]) {
            expect(e.contains("history") && e.contains("move"),
                   "table entry needs history and move");
            std::vector<Move> hist;
            for (const auto& m : e["history"]) hist.push_back(move_from_json(space, m));
            entries.push_back({std::move(hist), move_from_json(space, e["move"])});
        }
    }
    out.strategy =
        std::make_shared<TableStrategy>(out.kind, std::move(fallback), std::move(entries));
    return out;
}

Json verify_result_to_json(const Space& space, const VerifyResult& r) {
    Json j;
    j["status"] = to_string(r.status);
    j["enumerated"] = r.enumerated;
    j["search_space"] = r.search_space;
    if (r.witness) {
        Json w;
        w["per_index"] = r.witness->per_index;
        Json sel = Json::array();
        for (const auto& fam : r.witness->sets) {
            Json f = Json::array();
            for (const auto& s : fam) f.push_back(open_set_to_json(space, s));
            sel.push_back(f);
        }
        w["sets"] = sel;
        if (!r.witness->sample_subsequence.empty()) {
            w["dense_subsequence_sample"] = r.witness->sample_subsequence;
        }
        j["witness"] = w;
    }
    return j;
}

Json cross_play_to_json(const CrossPlayReport& r) {
    Json j;
    j["kind"] = to_string(r.kind);
    j["T"] = r.T;
    j["tested_role"] = to_string(r.tested_role);
    j["lines"] = r.lines;
    j["i_wins"] = r.i_wins;
    j["undetermined"] = r.undetermined;
    j["illegal"] = r.illegal;
    j["complete"] = r.complete;
    j["survives_at_scale"] = r.survives_at_scale;
    Json lines = Json::array();
    for (const auto& line : r.line_records) {
        lines.push_back({{"choices", line.choices},
                         {"outcome", to_string(line.outcome)},
                         {"win_round", line.win_round}});
    }
    j["line_records"] = lines;
    return j;
}

Json tiny_extraction_to_json(const Space& space, const TinyExtraction& e) {
    Json j;
    j["status"] = e.status == TinyExtraction::Status::Ok ? "ok" : "WIDTH_INSUFFICIENT";
    if (e.status == TinyExtraction::Status::WidthInsufficient) {
        j["failing_level"] = e.failing_level;
    }
    j["audit"] = {{"chains_ascending", e.chains_ascending},
                  {"antitone_in_n", e.antitone_in_n},
                  {"node_containment", e.node_containment},
                  {"density_evidence", e.density_evidence}};
    if (e.sequence) j["sequence"] = sequence_to_json(*e.sequence);
    if (e.verdict) j["verdict"] = verify_result_to_json(space, *e.verdict);
    return j;
}

Json one_tiny_extraction_to_json(const Space& space, const OneTinyExtraction& e) {
    Json j;
    j["schedule_violations"] = e.schedule_violations;
    Json lines = Json::array();
    for (const auto& line : e.lines) {
        Json l;
        l["choices"] = line.choices;
        l["schedule"] = {{"m", line.run.schedule.m},
                         {"j", line.run.schedule.j},
                         {"a", line.run.schedule.a}};
        l["truncated"] = line.run.truncated;
        if (line.run.truncated) l["truncation_reason"] = line.run.truncation_reason;
        Json fam_sizes = Json::array();
        for (const auto& f : line.run.families) fam_sizes.push_back(f.members.size());
        l["family_sizes"] = fam_sizes;
        Json w_sizes = Json::array();
        for (const auto& wn : line.W) w_sizes.push_back(wn.size());
        l["w_sizes"] = w_sizes;
        l["w_dense"] = line.w_dense;
        l["w_valid"] = line.w_valid;
        if (line.verdict) l["verdict"] = verify_result_to_json(space, *line.verdict);
        l["selections_audited"] = line.selections_audited;
        l["containment_failures"] = line.containment_failures;
        l["range_failures"] = line.range_failures;
        l["replays_not_dense"] = line.replays_not_dense;
        l["replays_dense"] = line.replays_dense;
        l["replays_illegal"] = line.replays_illegal;
        lines.push_back(l);
    }
    j["lines"] = lines;
    if (e.best) j["sequence"] = sequence_to_json(*e.best);
    if (e.best_verdict) j["verdict"] = verify_result_to_json(space, *e.best_verdict);
    return j;
}

Json ku_report_to_json(const KuReport& r) {
    Json j;
    j["depth"] = r.depth;
    j["branching"] = r.branching;
    j["boxes"] = r.box_count;
    Json d;
    d["dense"] = r.density.dense;
    if (r.density.failing) {
        d["failing"] = {{"level", r.density.failing->first.first},
                        {"node", r.density.failing->first.second},
                        {"y_basis_index", r.density.failing->second}};
    }
    j["density"] = d;
    Json sections = Json::array();
    for (const auto& [sigma, not_dense] : r.sections) {
        sections.push_back({{"branch", sigma}, {"section_not_dense", not_dense}});
    }
    j["sections"] = sections;
    j["all_sections_not_dense"] = r.all_sections_not_dense;
    return j;
}

Json greedy_to_json(const GreedyDefeat& g) {
    Json j;
    j["n_target"] = g.n_target;
    j["target_bound"] = rat_str(g.target_bound);
    j["final_cumulative"] = rat_str(g.final_cumulative);
    j["met_target"] = g.met_target;
    j["round_reaching_one"] = g.round_reaching_one;
    Json steps = Json::array();
    for (const auto& s : g.steps) {
        Json picked = Json::array();
        for (const auto& iv : s.picked) {
            Json one = Json::array();
            for (const auto& [lo, hi] : iv.intervals()) {
                one.push_back(Json::array({rat_str(lo), rat_str(hi)}));
            }
            picked.push_back(one);
        }
        steps.push_back({{"round", s.round},
                         {"picked", picked},
                         {"cumulative", rat_str(s.cumulative)},
                         {"round_bound", rat_str(s.round_bound)},
                         {"met_round_bound", s.met_round_bound}});
    }
    j["steps"] = steps;
    return j;
}

Json separation_report_to_json(const SeparationReport& r) {
    Json j;
    j["T"] = r.T;
    j["one_tiny_bound"] = rat_str(r.measure.bound);
    j["measure"] = {{"samples", r.measure.samples},
                    {"seed", r.measure.seed},
                    {"max_sampled", rat_str(r.measure.max_sampled)},
                    {"all_within_bound", r.measure.all_within_bound}};
    j["greedy"] = greedy_to_json(r.greedy);
    j["tiny_verdict"] = to_string(r.tiny_verdict);
    return j;
}

Json transform_check_to_json(const TransformCheck& c) {
    return Json{{"property_holds", c.property_holds},
                {"verdict", to_string(c.verdict)},
                {"equivalent", c.equivalent}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProtocolError("cannot open file: " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ProtocolError("malformed JSON in " + path + ": " + e.what());
    }
}

}  // namespace omg
