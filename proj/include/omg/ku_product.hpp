#pragma once

#include "omg/cardinal.hpp"
#include "omg/sequences.hpp"

#include <optional>
#include <vector>

namespace omg {

struct PiTreeNode {
    OpenSet cone;
    std::vector<int> label;  // length = level
    int parent = -1;         // index into the previous level
};

// Levels B_0..B_d of disjoint open sets of X with labels f_n : B_n -> ^n k.
// Validation enforces, per level: pairwise disjointness, density, refinement
// with a unique parent, exact label surjectivity below every parent (each
// label of ^{n+1}k once), and the branch property: every sigma in ^d k is
// realized by a nested chain with f_n(chain_n) = sigma|n.
struct LabeledPiTree {
    SpacePtr space;
    int depth = 0;
    int branching = 0;
    std::vector<std::vector<PiTreeNode>> levels;  // levels[0] = {X}

    void validate() const;  // throws ConstructionError

    // Node indexes (per level 1..d) of the chain realizing sigma.
    std::vector<int> coherent_chain(const std::vector<int>& sigma) const;
};

// The widened k-ary tree: every level-n node has exactly k^{n+1} children,
// one per label of ^{n+1}k. X = FinitePoints over the k^{d(d+1)/2} leaves,
// with all cones as the basis.
LabeledPiTree build_canonical_tree(int d, int k);

// A 1-tiny sequence on Y whose n-th family has exactly k^n pairwise disjoint
// members refining the previous family, enumerated as V^n_sigma by the
// lexicographic rank of sigma in ^n k.
struct RefiningOneTiny {
    SpacePtr y_space;
    int branching = 0;
    std::vector<std::vector<OpenSet>> families;  // families[n-1] has k^n members

    int depth() const { return static_cast<int>(families.size()); }
    const OpenSet& member(int n, const std::vector<int>& sigma) const;  // V^n_sigma
    FamilySequence as_sequence() const;
};

// Disjointifies (lowest-index membership), product-refines each family with
// the previous level, and checks the k^n sizes. Throws ConstructionError
// when the input cannot be shaped into a total enumeration.
RefiningOneTiny make_refining_one_tiny(const FamilySequence& one_tiny, int k, int d);

// The k-ary block instance on Y = DiscretePoints(k^d), built through
// dif_to_one_tiny from the block-coordinate function family.
RefiningOneTiny canonical_y_sequence(int d, int k);

struct ProductBox {
    int level = 0;       // n, 1-based
    int node_index = 0;  // position in levels[n]
    OpenSet x_part;
    OpenSet y_part;
    std::vector<int> label;
};

// E = union over n = 1..d of { U x V^n_{f_n(U)} : U in B_n }.
std::vector<ProductBox> build_E(const LabeledPiTree& tree, const RefiningOneTiny& y);

struct DensityCheck {
    bool dense = false;
    // witness on failure: (level, node index) of the X-side cone and the
    // index of the Y basis element missed by every box meeting it
    std::optional<std::pair<std::pair<int, int>, int>> failing;
};

// Density of E against basic boxes W x U: U runs over Y's basis and W over
// the deepest cones that still have labeled structure below them (level d-1;
// the root when d = 1). At the leaf level a box's trace is exactly a section,
// which the construction makes non-dense on purpose, so the finite density
// test lives one level up, where the paper's argument descends to children.
DensityCheck check_E_dense(const std::vector<ProductBox>& E, const LabeledPiTree& tree,
                           const RefiningOneTiny& y);

struct SectionReport {
    bool not_dense = false;
    std::vector<OpenSet> section;  // E_x for the branch point
    std::vector<int> chain_nodes;  // per level 1..d
};

// E_x for the point x at the bottom of the coherent chain of sigma; true
// when that section is not dense in Y.
SectionReport section_not_dense(const std::vector<ProductBox>& E, const LabeledPiTree& tree,
                                const RefiningOneTiny& y, const std::vector<int>& sigma);

struct KuReport {
    int depth = 0;
    int branching = 0;
    std::size_t box_count = 0;
    DensityCheck density;
    std::vector<std::pair<std::vector<int>, bool>> sections;  // (sigma, not_dense)
    bool all_sections_not_dense = false;
};

KuReport ku_report(const LabeledPiTree& tree, const RefiningOneTiny& y);

}  // namespace omg
