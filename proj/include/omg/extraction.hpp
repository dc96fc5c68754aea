#pragma once

#include "omg/sequences.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace omg {

// ---------------------------------------------------------------------------
// G7 side: strategy -> indexed tree -> candidate tiny sequence.
// ---------------------------------------------------------------------------

// The family {U_tau : tau in ^{<=d}{0..w-1}}, U_empty = the empty set.
// Children of a node enumerate the strategy's family at that history,
// normalized to an increasing chain by cumulative unions with the parent:
//   (1) m < n  =>  U_{tau,m} included in U_{tau,n}
//   (2) U_tau included in U_{tau,n}
//   (3) the last child is dense (the chain exhausts a dense-union family).
struct G7Tree {
    SpacePtr space;
    int depth = 0;
    int width = 0;
    std::map<std::vector<int>, OpenSet> nodes;

    struct NodeInfo {
        std::vector<int> tau;
        int raw_family_size = 0;
        bool padded = false;  // family shorter than the width, last entry repeated
    };
    std::vector<NodeInfo> info;

    const OpenSet& at(const std::vector<int>& tau) const;
};

// Grows the tree by querying strat_II with prefix-subset responses
// (I's move after child i is the first i+1 members of the raw family).
// Throws ConstructionError naming the node when the strategy emits a family
// with non-dense union, or when width w truncates below density.
G7Tree grow_tree_G7(const Strategy& strat_II, SpacePtr space, int d, int w);

// Exhaustive check of invariants (1)-(3) on every node.
void validate_g7_tree(const G7Tree& tree);

// U^1_k = U_(k);  U^n_k = intersection over sigma in ^{n-1}w of U_{sigma,k},
// intersected with U^{n-1}_k. 1-based n <= depth, 0-based k < width.
OpenSet compute_Unk(const G7Tree& tree, int n, int k);

struct TinyExtraction {
    enum class Status { Ok, WidthInsufficient };
    Status status = Status::Ok;
    int failing_level = 0;  // n with non-dense U_n (when WidthInsufficient)

    std::optional<FamilySequence> sequence;  // families U_n = {U^n_k : k < w}
    std::optional<VerifyResult> verdict;     // verify_tiny(sequence, s)

    // Audit flags; a false here is a bug, not an input condition.
    bool chains_ascending = true;       // U^n_k ⊆ U^n_{k+1}
    bool antitone_in_n = true;          // U^{n+1}_k ⊆ U^n_k
    bool node_containment = true;       // U^n_k ⊆ U_{sigma,k} for all sigma
    std::vector<int> density_evidence;  // per level: max over basis of least hitting k
};

TinyExtraction extract_tiny_G7(const Strategy& strat_II, SpacePtr space, int d, int w,
                               int s, std::uint64_t cap = default_enumeration_cap());

// ---------------------------------------------------------------------------
// G2 side: strategy -> U_rho families -> counter-strategy schedule -> W
// families -> assembled f with containment audit.
// ---------------------------------------------------------------------------

// Lazy memoized tree of I's picks against a G2 strategy: node (t_1..t_p) is
// member t_p (mod family size) of the strategy's family after I picked the
// nodes along the path. Families must have dense unions.
class G2Tree {
public:
    G2Tree(StrategyPtr strat_II, SpacePtr space);

    const Space& space() const { return *space_; }
    SpacePtr space_ptr() const { return space_; }
    StrategyPtr strategy() const { return strat_; }

    const OpenSet& node(const std::vector<int>& tau);
    const std::vector<OpenSet>& family_after(const std::vector<int>& tau);

private:
    StrategyPtr strat_;
    SpacePtr space_;
    std::map<std::vector<int>, OpenSet> node_cache_;
    std::map<std::vector<int>, std::vector<OpenSet>> family_cache_;
};

// U_rho(m,j) = intersection over sigma in ^m{0..j-1} of the union of
// U_{sigma ⌢ rho|i} for i = 1..j^m. rho has length j^m.
OpenSet build_U_rho(G2Tree& tree, int m, int j, const std::vector<int>& rho);

struct RhoMember {
    std::vector<int> rho;
    OpenSet set;
};

struct RhoFamily {
    int m = 1;
    int j = 1;
    int index_bound = 1;  // M: rho takes values in {0..M-1}
    std::vector<RhoMember> members;
    bool dense_at_scale = false;
};

// Enumerates all rho in ^{j^m}{0..M-1} (lexicographic) and reports whether
// the family is dense at this scale. Throws CapError when M^{j^m} > cap.
RhoFamily build_U_family(G2Tree& tree, int m, int j, int M,
                         std::uint64_t cap = default_enumeration_cap());

struct CSchedule {
    std::vector<int> m;  // m[i] = m_{i+1}; m_1 = 1
    std::vector<int> j;  // j[i] = j_{i+1}; j_1 = 1
    std::vector<int> a;  // a[i] = max rho value among round-(i+1) picks

    int m_at(int round) const;        // 1-based; round == R+1 gives m_R + j_R^{m_R}
    int j_at(int round) const;        // 1-based
    bool law_holds() const;           // m_{n+1} = m_n + j_n^{m_n}, j_{n+1} > max(j_n, a_n)
};

// Picks T_n for the counter-strategy round n, as indexes into the family.
using CAdversary = std::function<std::vector<int>(int round, const RhoFamily& family)>;

CAdversary singleton_adversary(int member_index);  // always pick that index (mod size)
CAdversary full_family_adversary();                // T_n = the whole family

struct CRun {
    CSchedule schedule;
    std::vector<RhoFamily> families;            // c's moves, round by round
    std::vector<std::vector<RhoMember>> picks;  // adversary's T_n
    bool truncated = false;
    std::string truncation_reason;
};

// Plays c for `rounds` rounds: m_1 = j_1 = 1, c(...) = U(m_n, j_n), then
// m_{n+1} = m_n + j_n^{m_n} and j_{n+1} = max(j_n, a_n) + 1.
CRun run_counter_strategy_c(G2Tree& tree, int rounds, int M, const CAdversary& adversary,
                            std::uint64_t cap = default_enumeration_cap());

struct WMember {
    std::vector<int> rounds;             // k_1 < ... < k_n (1-based)
    std::vector<std::vector<int>> rhos;  // the picked members' rho per round
    OpenSet set;                         // intersection of the picked members
};

// W_n = all nonempty intersections over increasing round tuples of length n.
std::vector<std::vector<WMember>> build_W_families(const Space& space, const CRun& run);

struct FAssembly {
    std::vector<int> f;
    std::vector<int> s_chosen;                    // s_n, one per selection entry
    std::vector<int> a_sorted;                    // the s_n sorted increasingly
    std::vector<std::pair<int, int>> zero_gaps;   // [from,to) ranges padded with 0
    bool containment_ok = true;                   // (*) and the final union containment
    bool range_ok = true;                         // f|m_a takes values below j_a
};

// selection[i] must come from W_{i+1}. Implements the recursive s_n choice
// (smallest unused), the per-block copies of the picked rho, and the zero
// padding on index gaps; audits every containment it relies on.
FAssembly assemble_f(G2Tree& tree, const CRun& run, const std::vector<WMember>& selection);

enum class CAdversaryMode { Singletons, FullFamily };

struct OneTinyExtraction {
    struct Line {
        std::vector<int> choices;  // singleton index per round (empty for FullFamily)
        CRun run;
        std::vector<std::vector<WMember>> W;
        std::vector<bool> w_dense;
        bool w_valid = false;                  // every W_n nonempty with dense union
        std::optional<VerifyResult> verdict;   // verify_one_tiny over the W sequence
        int selections_audited = 0;
        int containment_failures = 0;
        int range_failures = 0;
        int replays_not_dense = 0;  // replay of {U_{f|n}} left II leading
        int replays_dense = 0;      // I's f-line reached density at this scale
        int replays_illegal = 0;    // f-line hit an unpickable (empty) member
    };

    std::vector<Line> lines;
    int schedule_violations = 0;
    std::optional<FamilySequence> best;  // first line with a valid (preferably HOLDS) W
    std::optional<VerifyResult> best_verdict;
};

OneTinyExtraction extract_one_tiny_G2(StrategyPtr strat_II, SpacePtr space, int rounds,
                                      int M, CAdversaryMode mode,
                                      std::uint64_t cap = default_enumeration_cap());

}  // namespace omg
