#include "omg/extraction.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace omg {

namespace {

std::string tau_str(const std::vector<int>& tau) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (i) os << ',';
        os << tau[i];
    }
    os << ')';
    return os.str();
}

std::uint64_t pow_sat(std::uint64_t b, int e, std::uint64_t cap) {
    std::uint64_t x = 1;
    for (int i = 0; i < e; ++i) {
        if (b != 0 && x > cap / b) return cap + 1;
        x *= b;
    }
    return x;
}

bool odometer_next(std::vector<int>& digits, int radix) {
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        if (++digits[static_cast<std::size_t>(i)] < radix) return true;
        digits[static_cast<std::size_t>(i)] = 0;
    }
    return false;
}

}  // namespace

const OpenSet& G7Tree::at(const std::vector<int>& tau) const {
    const auto it = nodes.find(tau);
    if (it == nodes.end()) throw ProtocolError("no tree node at " + tau_str(tau));
    return it->second;
}

G7Tree grow_tree_G7(const Strategy& strat_II, SpacePtr space, int d, int w) {
    if (d < 0) throw ProtocolError("negative depth");
    if (w < 1) throw ProtocolError("width must be >= 1");
    G7Tree tree;
    tree.space = space;
    tree.depth = d;
    tree.width = w;
    tree.nodes[{}] = space->empty_set();

    struct Item {
        std::vector<int> tau;
        std::vector<Move> hist;
    };
    std::vector<Item> frontier{{{}, {}}};
    for (int level = 0; level < d; ++level) {
        std::vector<Item> next;
        for (const auto& item : frontier) {
            const PlayContext ctx{*space, GameKind::G7, Player::II,
                                  static_cast<int>(item.hist.size())};
            const auto mv = strat_II.next(ctx, item.hist);
            if (!mv || mv->type != MoveType::Family || mv->sets.empty()) {
                throw ConstructionError("strategy yields no family at node " +
                                        tau_str(item.tau));
            }
            const auto& fam = mv->sets;
            if (!space->is_dense(fam)) {
                throw ConstructionError("strategy family union not dense at node " +
                                        tau_str(item.tau));
            }
            const int fsize = static_cast<int>(fam.size());
            OpenSet cum = tree.nodes.at(item.tau);
            std::vector<OpenSet> children;
            for (int i = 0; i < w; ++i) {
                if (i < fsize) cum = cum.unite(fam[static_cast<std::size_t>(i)]);
                children.push_back(cum);
            }
            if (!space->is_dense_set(children.back())) {
                throw ConstructionError(
                    "width insufficient: cumulative chain prefix not dense at node " +
                    tau_str(item.tau));
            }
            tree.info.push_back({item.tau, fsize, fsize < w});
            for (int i = 0; i < w; ++i) {
                std::vector<int> tau = item.tau;
                tau.push_back(i);
                tree.nodes[tau] = children[static_cast<std::size_t>(i)];
                std::vector<Move> hist = item.hist;
                hist.push_back(Move::finite_family(std::vector<OpenSet>(
                    fam.begin(), fam.begin() + std::min(i + 1, fsize))));
                next.push_back({std::move(tau), std::move(hist)});
            }
        }
        frontier = std::move(next);
    }
    return tree;
}

void validate_g7_tree(const G7Tree& tree) {
    for (const auto& [tau, value] : tree.nodes) {
        if (static_cast<int>(tau.size()) >= tree.depth) continue;
        std::vector<OpenSet> children;
        for (int i = 0; i < tree.width; ++i) {
            std::vector<int> child = tau;
            child.push_back(i);
            children.push_back(tree.at(child));
        }
        for (int i = 0; i + 1 < tree.width; ++i) {
            if (!children[static_cast<std::size_t>(i)].subset_of(
                    children[static_cast<std::size_t>(i + 1)])) {
                throw ConstructionError("chain property (1) fails below " + tau_str(tau));
            }
        }
        for (int i = 0; i < tree.width; ++i) {
            if (!value.subset_of(children[static_cast<std::size_t>(i)])) {
                throw ConstructionError("parent containment (2) fails below " + tau_str(tau));
            }
        }
        if (!tree.space->is_dense(children)) {
            throw ConstructionError("child family (3) not dense below " + tau_str(tau));
        }
    }
}

OpenSet compute_Unk(const G7Tree& tree, int n, int k) {
    if (n < 1 || n > tree.depth) throw ProtocolError("level n out of range");
    if (k < 0 || k >= tree.width) throw ProtocolError("index k out of range");
    OpenSet u = tree.at({k});
    for (int level = 2; level <= n; ++level) {
        // intersect over sigma in ^{level-1}w of U_{sigma,k}
        std::vector<int> sigma(static_cast<std::size_t>(level - 1), 0);
        do {
            std::vector<int> tau = sigma;
            tau.push_back(k);
            u = u.intersect(tree.at(tau));
        } while (odometer_next(sigma, tree.width));
    }
    return u;
}

TinyExtraction extract_tiny_G7(const Strategy& strat_II, SpacePtr space, int d, int w,
                               int s, std::uint64_t cap) {
    const G7Tree tree = grow_tree_G7(strat_II, space, d, w);
    validate_g7_tree(tree);

    TinyExtraction out;
    std::vector<std::vector<OpenSet>> levels;  // levels[n-1][k]
    for (int n = 1; n <= d; ++n) {
        std::vector<OpenSet> fam;
        for (int k = 0; k < w; ++k) fam.push_back(compute_Unk(tree, n, k));
        levels.push_back(std::move(fam));
    }

    for (int n = 0; n < d; ++n) {
        for (int k = 0; k + 1 < w; ++k) {
            if (!levels[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)].subset_of(
                    levels[static_cast<std::size_t>(n)][static_cast<std::size_t>(k + 1)])) {
                out.chains_ascending = false;
            }
        }
        if (n + 1 < d) {
            for (int k = 0; k < w; ++k) {
                if (!levels[static_cast<std::size_t>(n + 1)][static_cast<std::size_t>(k)]
                         .subset_of(levels[static_cast<std::size_t>(n)]
                                          [static_cast<std::size_t>(k)])) {
                    out.antitone_in_n = false;
                }
            }
        }
        // U^n_k ⊆ U_{sigma,k} for every sigma of length n
        std::vector<int> sigma(static_cast<std::size_t>(n), 0);
        do {
            for (int k = 0; k < w; ++k) {
                std::vector<int> tau = sigma;
                tau.push_back(k);
                if (!levels[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)]
                         .subset_of(tree.at(tau))) {
                    out.node_containment = false;
                }
            }
        } while (odometer_next(sigma, w));
    }

    for (int n = 1; n <= d; ++n) {
        const auto& fam = levels[static_cast<std::size_t>(n - 1)];
        if (!space->is_dense(fam)) {
            out.status = TinyExtraction::Status::WidthInsufficient;
            out.failing_level = n;
            return out;
        }
        // Mirror of the k_0 = max{k_1,...} step: the least chain index that
        // already meets each basis element, maximized over the basis.
        int evidence = 0;
        if (space->has_points()) {
            for (PointSet b : space->basis()) {
                for (int k = 0; k < w; ++k) {
                    if (fam[static_cast<std::size_t>(k)].meets(OpenSet(b))) {
                        evidence = std::max(evidence, k);
                        break;
                    }
                }
            }
        }
        out.density_evidence.push_back(evidence);
    }

    out.sequence = FamilySequence(space, levels, SeqKind::Tiny, /*allow_empty_members=*/true);
    out.verdict = verify_tiny(*out.sequence, s, cap);
    return out;
}

// ---------------------------------------------------------------------------
// G2 side
// ---------------------------------------------------------------------------

G2Tree::G2Tree(StrategyPtr strat_II, SpacePtr space)
    : strat_(std::move(strat_II)), space_(std::move(space)) {}

const std::vector<OpenSet>& G2Tree::family_after(const std::vector<int>& tau) {
    const auto it = family_cache_.find(tau);
    if (it != family_cache_.end()) return it->second;
    std::vector<Move> hist;
    hist.reserve(tau.size());
    for (std::size_t i = 1; i <= tau.size(); ++i) {
        hist.push_back(Move::single(node(std::vector<int>(tau.begin(), tau.begin() + i))));
    }
    const PlayContext ctx{*space_, GameKind::G2, Player::II, static_cast<int>(tau.size())};
    const auto mv = strat_->next(ctx, hist);
    if (!mv || mv->type != MoveType::Family || mv->sets.empty()) {
        throw ConstructionError("strategy yields no family after " + tau_str(tau));
    }
    if (!space_->is_dense(mv->sets)) {
        throw ConstructionError("strategy family union not dense after " + tau_str(tau));
    }
    return family_cache_.emplace(tau, mv->sets).first->second;
}

const OpenSet& G2Tree::node(const std::vector<int>& tau) {
    if (tau.empty()) throw ProtocolError("the empty address carries no open set");
    const auto it = node_cache_.find(tau);
    if (it != node_cache_.end()) return it->second;
    const std::vector<int> parent(tau.begin(), tau.end() - 1);
    const auto& fam = family_after(parent);
    const OpenSet& v = fam[static_cast<std::size_t>(tau.back()) % fam.size()];
    return node_cache_.emplace(tau, v).first->second;
}

OpenSet build_U_rho(G2Tree& tree, int m, int j, const std::vector<int>& rho) {
    if (m < 1 || j < 1) throw ProtocolError("m and j must be positive");
    const std::uint64_t jm = pow_sat(static_cast<std::uint64_t>(j), m, 1u << 20);
    if (jm > (1u << 20)) throw CapError("j^m too large", jm);
    if (rho.size() != jm) throw ProtocolError("rho must have length j^m");

    OpenSet acc = tree.space().full_set();
    bool first = true;
    std::vector<int> sigma(static_cast<std::size_t>(m), 0);
    do {
        OpenSet u = tree.space().empty_set();
        std::vector<int> tau = sigma;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            tau.push_back(rho[i]);
            u = u.unite(tree.node(tau));
            if (!first && acc.subset_of(u)) break;  // union already swallows acc
        }
        acc = first ? u : acc.intersect(u);
        first = false;
        if (acc.empty()) break;
    } while (odometer_next(sigma, j));
    return acc;
}

RhoFamily build_U_family(G2Tree& tree, int m, int j, int M, std::uint64_t cap) {
    if (M < 1) throw ProtocolError("index bound M must be >= 1");
    const std::uint64_t jm = pow_sat(static_cast<std::uint64_t>(j), m, cap);
    if (jm > cap) throw CapError("j^m exceeds the cap", jm);
    const std::uint64_t count = pow_sat(static_cast<std::uint64_t>(M),
                                        static_cast<int>(jm), cap);
    if (count > cap) throw CapError("M^(j^m) exceeds the cap", count);

    RhoFamily fam;
    fam.m = m;
    fam.j = j;
    fam.index_bound = M;
    std::vector<int> rho(static_cast<std::size_t>(jm), 0);
    do {
        fam.members.push_back({rho, build_U_rho(tree, m, j, rho)});
    } while (odometer_next(rho, M));

    std::vector<OpenSet> sets;
    sets.reserve(fam.members.size());
    for (const auto& mm : fam.members) sets.push_back(mm.set);
    fam.dense_at_scale = tree.space().is_dense(sets);
    return fam;
}

int CSchedule::m_at(int round) const {
    const int R = static_cast<int>(m.size());
    if (round >= 1 && round <= R) return m[static_cast<std::size_t>(round - 1)];
    if (round == R + 1 && R >= 1) {
        return m.back() + static_cast<int>(pow_sat(
                              static_cast<std::uint64_t>(j.back()), m.back(), 1u << 30));
    }
    throw ProtocolError("schedule round out of range");
}

int CSchedule::j_at(int round) const {
    if (round < 1 || round > static_cast<int>(j.size())) {
        throw ProtocolError("schedule round out of range");
    }
    return j[static_cast<std::size_t>(round - 1)];
}

bool CSchedule::law_holds() const {
    if (m.empty() || m[0] != 1 || j[0] != 1) return false;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        const auto jm = pow_sat(static_cast<std::uint64_t>(j[i]), m[i], 1u << 30);
        if (m[i + 1] != m[i] + static_cast<int>(jm)) return false;
        if (!(j[i + 1] > std::max(j[i], a[i]))) return false;
    }
    return true;
}

CAdversary singleton_adversary(int member_index) {
    return [member_index](int, const RhoFamily& fam) {
        return std::vector<int>{member_index % static_cast<int>(fam.members.size())};
    };
}

CAdversary full_family_adversary() {
    return [](int, const RhoFamily& fam) {
        std::vector<int> all(fam.members.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        return all;
    };
}

CRun run_counter_strategy_c(G2Tree& tree, int rounds, int M, const CAdversary& adversary,
                            std::uint64_t cap) {
    CRun run;
    int m = 1, j = 1;
    for (int n = 1; n <= rounds; ++n) {
        RhoFamily fam;
        try {
            fam = build_U_family(tree, m, j, M, cap);
        } catch (const CapError& e) {
            run.truncated = true;
            run.truncation_reason = "round " + std::to_string(n) + ": " + e.what();
            break;
        }
        run.schedule.m.push_back(m);
        run.schedule.j.push_back(j);
        run.families.push_back(fam);

        const auto idxs = adversary(n, run.families.back());
        std::vector<RhoMember> T;
        int a = 0;
        for (int idx : idxs) {
            const auto& mem =
                run.families.back().members[static_cast<std::size_t>(idx) %
                                            run.families.back().members.size()];
            T.push_back(mem);
            for (int v : mem.rho) a = std::max(a, v);
        }
        run.picks.push_back(std::move(T));
        run.schedule.a.push_back(a);

        const std::uint64_t jm = pow_sat(static_cast<std::uint64_t>(j), m, cap);
        if (jm > cap) {
            run.truncated = true;
            run.truncation_reason = "round " + std::to_string(n + 1) + ": j^m exceeds cap";
            break;
        }
        m = m + static_cast<int>(jm);
        j = std::max(j, a) + 1;
    }
    return run;
}

std::vector<std::vector<WMember>> build_W_families(const Space& space, const CRun& run) {
    const int R = static_cast<int>(run.picks.size());
    std::vector<std::vector<WMember>> W;
    for (int n = 1; n <= R; ++n) {
        std::vector<WMember> wn;
        std::vector<int> rounds_tuple;
        std::vector<const RhoMember*> chosen;
        const std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(rounds_tuple.size()) == n) {
                OpenSet x = space.full_set();
                for (const auto* mm : chosen) x = x.intersect(mm->set);
                if (x.empty()) return;  // empties are excluded
                WMember w;
                w.rounds = rounds_tuple;
                for (const auto* mm : chosen) w.rhos.push_back(mm->rho);
                w.set = x;
                wn.push_back(std::move(w));
                return;
            }
            for (int k = start; k <= R; ++k) {
                for (const auto& mem : run.picks[static_cast<std::size_t>(k - 1)]) {
                    rounds_tuple.push_back(k);
                    chosen.push_back(&mem);
                    rec(k + 1);
                    rounds_tuple.pop_back();
                    chosen.pop_back();
                }
            }
        };
        rec(1);
        W.push_back(std::move(wn));
    }
    return W;
}

FAssembly assemble_f(G2Tree& tree, const CRun& run, const std::vector<WMember>& selection) {
    const auto& sched = run.schedule;
    const int N = static_cast<int>(selection.size());
    for (int n = 0; n < N; ++n) {
        const auto& rounds = selection[static_cast<std::size_t>(n)].rounds;
        if (static_cast<int>(rounds.size()) != n + 1) {
            throw ProtocolError("selection entry " + std::to_string(n + 1) +
                                " is not drawn from W_" + std::to_string(n + 1));
        }
        if (!std::is_sorted(rounds.begin(), rounds.end()) ||
            std::adjacent_find(rounds.begin(), rounds.end()) != rounds.end()) {
            throw ProtocolError("selection index set is not strictly increasing");
        }
    }

    // s_1 = k^1_1, s_n = the smallest unused element of {k^n_1..k^n_n}.
    FAssembly out;
    std::set<int> used;
    for (int n = 0; n < N; ++n) {
        int pick = -1;
        for (int k : selection[static_cast<std::size_t>(n)].rounds) {
            if (!used.count(k)) {
                pick = k;
                break;
            }
        }
        if (pick < 0) throw ProtocolError("no unused index available for s_n");
        used.insert(pick);
        out.s_chosen.push_back(pick);
    }
    out.a_sorted = out.s_chosen;
    std::sort(out.a_sorted.begin(), out.a_sorted.end());

    if (N == 0) return out;

    // f starts with an arbitrary sigma_0 (all zeros) of length m_{a_1}.
    out.f.assign(static_cast<std::size_t>(sched.m_at(out.a_sorted[0])), 0);
    for (int t = 0; t < N; ++t) {
        const int a = out.a_sorted[static_cast<std::size_t>(t)];
        // locate the selection entry whose s_n is a, and a's position in it
        int n_t = -1, i_t = -1;
        for (int n = 0; n < N; ++n) {
            if (out.s_chosen[static_cast<std::size_t>(n)] == a) {
                n_t = n;
                const auto& rounds = selection[static_cast<std::size_t>(n)].rounds;
                i_t = static_cast<int>(std::find(rounds.begin(), rounds.end(), a) -
                                       rounds.begin());
                break;
            }
        }
        const auto& rho =
            selection[static_cast<std::size_t>(n_t)].rhos[static_cast<std::size_t>(i_t)];
        if (static_cast<int>(out.f.size()) != sched.m_at(a)) {
            throw ProtocolError("f block misaligned before round " + std::to_string(a));
        }
        const int block_len = sched.m_at(a + 1) - sched.m_at(a);
        if (static_cast<int>(rho.size()) != block_len) {
            throw ProtocolError("rho length does not match the block");
        }
        out.f.insert(out.f.end(), rho.begin(), rho.end());
        if (t + 1 < N) {
            const int next_a = out.a_sorted[static_cast<std::size_t>(t + 1)];
            const int from = sched.m_at(a + 1);
            const int to = sched.m_at(next_a);
            if (to > from) {
                out.zero_gaps.push_back({from, to});
                out.f.insert(out.f.end(), static_cast<std::size_t>(to - from), 0);
            }
        }
    }

    // range audit: f|m_a takes values below j_a
    for (int a : out.a_sorted) {
        const int ma = sched.m_at(a);
        const int ja = sched.j_at(a);
        for (int i = 0; i < ma; ++i) {
            if (out.f[static_cast<std::size_t>(i)] >= ja) out.range_ok = false;
        }
    }

    // (*) containment audit on every index of every selection entry
    for (int n = 0; n < N; ++n) {
        const auto& w = selection[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < w.rounds.size(); ++i) {
            const int a = w.rounds[i];
            const int ma = sched.m_at(a);
            const int ja = sched.j_at(a);
            const OpenSet u_rho = build_U_rho(tree, ma, ja, w.rhos[i]);
            if (!w.set.subset_of(u_rho)) out.containment_ok = false;
            // U_rho is contained in the union along every sigma in ^{m_a}j_a
            std::vector<int> sigma(static_cast<std::size_t>(ma), 0);
            do {
                OpenSet u = tree.space().empty_set();
                std::vector<int> tau = sigma;
                bool covered = false;
                for (const int v : w.rhos[i]) {
                    tau.push_back(v);
                    u = u.unite(tree.node(tau));
                    if (u_rho.subset_of(u)) {
                        covered = true;
                        break;
                    }
                }
                if (!covered) out.containment_ok = false;
            } while (odometer_next(sigma, ja));
        }
    }

    // final containment: the union of the chosen W's sits inside ⋃ U_{f|n}
    OpenSet w_union = tree.space().empty_set();
    for (const auto& w : selection) w_union = w_union.unite(w.set);
    OpenSet f_union = tree.space().empty_set();
    for (std::size_t i = 1; i <= out.f.size(); ++i) {
        f_union = f_union.unite(
            tree.node(std::vector<int>(out.f.begin(), out.f.begin() + i)));
        if (w_union.subset_of(f_union)) break;
    }
    if (!w_union.subset_of(f_union)) out.containment_ok = false;
    return out;
}

namespace {

StrategyPtr follow_f_strategy(std::vector<int> f) {
    return std::make_shared<CallbackStrategy>(
        "follow-f",
        [f = std::move(f)](const PlayContext& ctx,
                           std::span<const Move> opp) -> std::optional<Move> {
            if (opp.empty() || ctx.round >= static_cast<int>(f.size())) return std::nullopt;
            const auto& fam = opp.back().sets;
            if (fam.empty()) return std::nullopt;
            return Move::single(
                fam[static_cast<std::size_t>(f[static_cast<std::size_t>(ctx.round)]) %
                    fam.size()]);
        });
}

void finalize_line(OneTinyExtraction& out, OneTinyExtraction::Line line, SpacePtr space,
                   G2Tree& tree, const StrategyPtr& strat, std::uint64_t cap) {
    if (!line.run.schedule.law_holds()) ++out.schedule_violations;

    line.W = build_W_families(*space, line.run);
    const int R = static_cast<int>(line.W.size());
    line.w_valid = R > 0;
    for (const auto& wn : line.W) {
        std::vector<OpenSet> sets;
        for (const auto& w : wn) sets.push_back(w.set);
        const bool dense = !sets.empty() && space->is_dense(sets);
        line.w_dense.push_back(dense);
        line.w_valid = line.w_valid && dense;
    }

    std::optional<FamilySequence> seq;
    if (line.w_valid) {
        std::vector<std::vector<OpenSet>> fams;
        for (const auto& wn : line.W) {
            std::vector<OpenSet> sets;
            for (const auto& w : wn) sets.push_back(w.set);
            fams.push_back(std::move(sets));
        }
        seq.emplace(space, std::move(fams), SeqKind::OneTiny);
        line.verdict = verify_one_tiny(*seq, cap);
    }

    // Audit every selection through assemble_f and the referee replay, as
    // long as every W level is populated.
    const bool enumerable =
        std::all_of(line.W.begin(), line.W.end(),
                    [](const std::vector<WMember>& wn) { return !wn.empty(); });
    if (enumerable && R > 0) {
        std::uint64_t total = 1;
        for (const auto& wn : line.W) {
            total *= wn.size();
            if (total > cap) break;
        }
        if (total <= cap) {
            std::vector<int> pick(static_cast<std::size_t>(R), 0);
            std::vector<int> radix;
            for (const auto& wn : line.W) radix.push_back(static_cast<int>(wn.size()));
            for (;;) {
                std::vector<WMember> selection;
                for (int n = 0; n < R; ++n) {
                    selection.push_back(
                        line.W[static_cast<std::size_t>(n)]
                              [static_cast<std::size_t>(pick[static_cast<std::size_t>(n)])]);
                }
                const FAssembly fa = assemble_f(tree, line.run, selection);
                ++line.selections_audited;
                if (!fa.containment_ok) ++line.containment_failures;
                if (!fa.range_ok) ++line.range_failures;
                if (!fa.f.empty()) {
                    const auto replay = play(space, GameKind::G2,
                                             *follow_f_strategy(fa.f), *strat,
                                             static_cast<int>(fa.f.size()));
                    switch (replay.verdict.outcome) {
                        case Outcome::UndeterminedIILeading: ++line.replays_not_dense; break;
                        case Outcome::IWinsAtT: ++line.replays_dense; break;
                        case Outcome::Illegal: ++line.replays_illegal; break;
                    }
                }
                // next selection
                bool more = false;
                for (int i = R - 1; i >= 0; --i) {
                    if (++pick[static_cast<std::size_t>(i)] <
                        radix[static_cast<std::size_t>(i)]) {
                        more = true;
                        break;
                    }
                    pick[static_cast<std::size_t>(i)] = 0;
                }
                if (!more) break;
            }
        }
    }

    const bool better =
        seq.has_value() &&
        (!out.best.has_value() ||
         (out.best_verdict && out.best_verdict->status != VerifyStatus::HoldsAtScale &&
          line.verdict && line.verdict->status == VerifyStatus::HoldsAtScale));
    if (better) {
        out.best = seq;
        out.best_verdict = line.verdict;
    }
    out.lines.push_back(std::move(line));
}

}  // namespace

OneTinyExtraction extract_one_tiny_G2(StrategyPtr strat_II, SpacePtr space, int rounds,
                                      int M, CAdversaryMode mode, std::uint64_t cap) {
    if (rounds < 0) throw ProtocolError("negative round count");
    OneTinyExtraction out;
    G2Tree tree(strat_II, space);

    if (mode == CAdversaryMode::FullFamily) {
        OneTinyExtraction::Line line;
        line.run = run_counter_strategy_c(tree, rounds, M, full_family_adversary(), cap);
        finalize_line(out, std::move(line), space, tree, strat_II, cap);
        return out;
    }

    // Exhaustive singleton lines: DFS over one member index per round.
    constexpr std::uint64_t kMaxLines = 65536;
    std::vector<int> choices;
    const std::function<void()> rec = [&]() {
        if (out.lines.size() >= kMaxLines) {
            throw CapError("too many adversary lines", out.lines.size());
        }
        const int played = static_cast<int>(choices.size());
        const CAdversary scripted = [&choices](int round, const RhoFamily& fam) {
            return std::vector<int>{choices[static_cast<std::size_t>(round - 1)] %
                                    static_cast<int>(fam.members.size())};
        };
        if (played == rounds) {
            OneTinyExtraction::Line line;
            line.choices = choices;
            line.run = run_counter_strategy_c(tree, rounds, M, scripted, cap);
            finalize_line(out, std::move(line), space, tree, strat_II, cap);
            return;
        }
        // Probe the family at the next round to know the branching factor.
        const CRun probe = run_counter_strategy_c(tree, played + 1, M, [&](int round,
                                                                           const RhoFamily& fam) {
            if (round <= played) {
                return std::vector<int>{choices[static_cast<std::size_t>(round - 1)] %
                                        static_cast<int>(fam.members.size())};
            }
            return std::vector<int>{0};
        }, cap);
        if (probe.truncated || static_cast<int>(probe.families.size()) <= played) {
            OneTinyExtraction::Line line;
            line.choices = choices;
            line.run = probe;
            finalize_line(out, std::move(line), space, tree, strat_II, cap);
            return;
        }
        const int options =
            static_cast<int>(probe.families[static_cast<std::size_t>(played)].members.size());
        for (int i = 0; i < options; ++i) {
            choices.push_back(i);
            rec();
            choices.pop_back();
        }
    };
    if (rounds == 0) {
        OneTinyExtraction::Line line;
        line.run = run_counter_strategy_c(tree, 0, M, full_family_adversary(), cap);
        finalize_line(out, std::move(line), space, tree, strat_II, cap);
    } else {
        rec();
    }
    return out;
}

}  // namespace omg
