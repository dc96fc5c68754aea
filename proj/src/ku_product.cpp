#include "omg/ku_product.hpp"

#include <algorithm>
#include <set>

namespace omg {

namespace {

std::uint64_t pow_u64(std::uint64_t b, int e) {
    std::uint64_t x = 1;
    for (int i = 0; i < e; ++i) x *= b;
    return x;
}

int sigma_rank(const std::vector<int>& sigma, int k) {
    int r = 0;
    for (int v : sigma) r = r * k + v;
    return r;
}

std::vector<std::vector<int>> all_sigmas(int len, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> s(static_cast<std::size_t>(len), 0);
    for (;;) {
        out.push_back(s);
        int i = len - 1;
        while (i >= 0 && s[static_cast<std::size_t>(i)] == k - 1) {
            s[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++s[static_cast<std::size_t>(i)];
    }
    if (len == 0) out = {{}};
    return out;
}

}  // namespace

void LabeledPiTree::validate() const {
    if (depth < 0 || branching < 1) throw ConstructionError("bad tree parameters");
    if (static_cast<int>(levels.size()) != depth + 1) {
        throw ConstructionError("level count does not match the depth");
    }
    if (levels[0].size() != 1 || !levels[0][0].label.empty()) {
        throw ConstructionError("level 0 must hold the whole space with the empty label");
    }

    for (int n = 0; n <= depth; ++n) {
        const auto& level = levels[static_cast<std::size_t>(n)];
        std::vector<OpenSet> cones;
        for (const auto& node : level) {
            if (node.cone.empty()) throw ConstructionError("empty cone in the tree");
            space->require_open(node.cone);
            if (static_cast<int>(node.label.size()) != n) {
                throw ConstructionError("label length differs from the level");
            }
            for (int v : node.label) {
                if (v < 0 || v >= branching) throw ConstructionError("label symbol out of range");
            }
            cones.push_back(node.cone);
        }
        for (std::size_t i = 0; i < cones.size(); ++i) {
            for (std::size_t j = i + 1; j < cones.size(); ++j) {
                if (cones[i].meets(cones[j])) {
                    throw ConstructionError("level " + std::to_string(n) +
                                            " is not pairwise disjoint");
                }
            }
        }
        if (!space->is_dense(cones)) {
            throw ConstructionError("level " + std::to_string(n) + " union is not dense");
        }
        if (n == 0) continue;

        // refinement with a unique parent + exact label surjectivity below it
        const auto& parents = levels[static_cast<std::size_t>(n - 1)];
        std::vector<std::set<int>> seen_labels(parents.size());
        for (std::size_t c = 0; c < level.size(); ++c) {
            const auto& node = level[c];
            if (node.parent < 0 || node.parent >= static_cast<int>(parents.size())) {
                throw ConstructionError("node has no parent at level " + std::to_string(n));
            }
            if (!node.cone.subset_of(parents[static_cast<std::size_t>(node.parent)].cone)) {
                throw ConstructionError("node is not inside its parent at level " +
                                        std::to_string(n));
            }
            if (!seen_labels[static_cast<std::size_t>(node.parent)]
                     .insert(sigma_rank(node.label, branching))
                     .second) {
                throw ConstructionError("duplicate child label below a level-" +
                                        std::to_string(n - 1) + " node");
            }
        }
        const std::uint64_t want = pow_u64(static_cast<std::uint64_t>(branching), n);
        for (std::size_t p = 0; p < parents.size(); ++p) {
            if (seen_labels[p].size() != want) {
                throw ConstructionError("label surjectivity fails below a level-" +
                                        std::to_string(n - 1) + " node");
            }
        }
    }

    // Every sigma in ^d k must be realized by a coherent nested chain.
    for (const auto& sigma : all_sigmas(depth, branching)) {
        coherent_chain(sigma);  // throws if missing
    }
}

std::vector<int> LabeledPiTree::coherent_chain(const std::vector<int>& sigma) const {
    if (static_cast<int>(sigma.size()) != depth) {
        throw ProtocolError("branch length must equal the depth");
    }
    std::vector<int> chain;
    int parent = 0;  // index into level n-1
    for (int n = 1; n <= depth; ++n) {
        const std::vector<int> want(sigma.begin(), sigma.begin() + n);
        const auto& level = levels[static_cast<std::size_t>(n)];
        int found = -1;
        for (std::size_t i = 0; i < level.size(); ++i) {
            if (level[i].parent == parent && level[i].label == want) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found < 0) {
            throw ConstructionError("no coherent chain for the requested branch");
        }
        chain.push_back(found);
        parent = found;
    }
    return chain;
}

LabeledPiTree build_canonical_tree(int d, int k) {
    if (d < 0 || k < 1) throw ProtocolError("bad tree parameters");
    // level n has k^{n(n+1)/2} nodes; leaves are the level-d nodes
    std::uint64_t leaves = 1;
    for (int n = 1; n <= d; ++n) {
        leaves *= pow_u64(static_cast<std::uint64_t>(k), n);
        if (leaves > 64) throw CapError("leaf count exceeds the 64-point bound", leaves);
    }
    const int n_leaves = std::max<int>(1, static_cast<int>(leaves));

    // Assign leaf blocks by DFS; a node at level n owns a contiguous range.
    struct Raw {
        int lo, hi;  // leaf range [lo, hi)
        std::vector<int> label;
        int parent;
    };
    std::vector<std::vector<Raw>> raw(static_cast<std::size_t>(d + 1));
    raw[0].push_back({0, n_leaves, {}, -1});
    for (int n = 1; n <= d; ++n) {
        const int fan = static_cast<int>(pow_u64(static_cast<std::uint64_t>(k), n));
        const auto sigmas = all_sigmas(n, k);
        for (std::size_t p = 0; p < raw[static_cast<std::size_t>(n - 1)].size(); ++p) {
            const Raw& parent = raw[static_cast<std::size_t>(n - 1)][p];
            const int width = (parent.hi - parent.lo) / fan;
            for (int c = 0; c < fan; ++c) {
                raw[static_cast<std::size_t>(n)].push_back(
                    {parent.lo + c * width, parent.lo + (c + 1) * width,
                     sigmas[static_cast<std::size_t>(c)], static_cast<int>(p)});
            }
        }
    }

    std::vector<PointSet> basis;
    for (int n = 1; n <= d; ++n) {
        for (const auto& r : raw[static_cast<std::size_t>(n)]) {
            PointSet m = 0;
            for (int x = r.lo; x < r.hi; ++x) m |= PointSet{1} << x;
            basis.push_back(m);
        }
    }
    if (basis.empty()) basis.push_back(PointSet{1});  // d = 0: a single point

    LabeledPiTree tree;
    tree.space = Space::finite(n_leaves, basis);
    tree.depth = d;
    tree.branching = k;
    tree.levels.resize(static_cast<std::size_t>(d + 1));
    for (int n = 0; n <= d; ++n) {
        for (const auto& r : raw[static_cast<std::size_t>(n)]) {
            PointSet m = 0;
            for (int x = r.lo; x < r.hi; ++x) m |= PointSet{1} << x;
            tree.levels[static_cast<std::size_t>(n)].push_back(
                {OpenSet(m), r.label, r.parent});
        }
    }
    tree.validate();
    return tree;
}

const OpenSet& RefiningOneTiny::member(int n, const std::vector<int>& sigma) const {
    if (n < 1 || n > depth()) throw ProtocolError("family level out of range");
    if (static_cast<int>(sigma.size()) != n) throw ProtocolError("label length mismatch");
    const auto& fam = families[static_cast<std::size_t>(n - 1)];
    const int rank = sigma_rank(sigma, branching);
    if (rank < 0 || rank >= static_cast<int>(fam.size())) {
        throw ConstructionError("missing enumerated member V^n_sigma");
    }
    return fam[static_cast<std::size_t>(rank)];
}

FamilySequence RefiningOneTiny::as_sequence() const {
    return FamilySequence(y_space, families, SeqKind::OneTiny);
}

RefiningOneTiny make_refining_one_tiny(const FamilySequence& one_tiny, int k, int d) {
    if (k < 1 || d < 0) throw ProtocolError("bad parameters");
    if (one_tiny.length() < d) {
        throw ConstructionError("sequence shorter than the requested depth");
    }
    const SpacePtr space = one_tiny.space_ptr();
    if (!space->has_points()) {
        throw TypeError("refining sequences are built over point spaces");
    }
    const int N = space->point_count();

    RefiningOneTiny out;
    out.y_space = space;
    out.branching = k;

    std::vector<OpenSet> prev;  // previous level after refinement
    for (int n = 1; n <= d; ++n) {
        const auto& fam = one_tiny.families()[static_cast<std::size_t>(n - 1)];
        // lowest-index disjointification
        std::vector<PointSet> cells(fam.size(), 0);
        for (int x = 0; x < N; ++x) {
            for (std::size_t i = 0; i < fam.size(); ++i) {
                if ((fam[i].points() >> x) & 1) {
                    cells[i] |= PointSet{1} << x;
                    break;
                }
            }
        }
        std::vector<OpenSet> level;
        if (n == 1) {
            for (PointSet c : cells) {
                if (c != 0) level.push_back(OpenSet(c));
            }
        } else {
            // product-refinement with the previous level
            for (const auto& w : prev) {
                for (PointSet c : cells) {
                    const OpenSet piece = OpenSet(c).intersect(w);
                    if (!piece.empty()) level.push_back(piece);
                }
            }
        }
        const std::uint64_t want = pow_u64(static_cast<std::uint64_t>(k), n);
        if (level.size() != want) {
            throw ConstructionError("family " + std::to_string(n) + " has " +
                                    std::to_string(level.size()) + " cells, expected k^n = " +
                                    std::to_string(want));
        }
        prev = level;
        out.families.push_back(std::move(level));
    }
    out.as_sequence();  // re-checks density and membership
    return out;
}

RefiningOneTiny canonical_y_sequence(int d, int k) {
    if (d < 0 || k < 2) {
        throw ProtocolError("the canonical Y instance needs branching >= 2");
    }
    std::uint64_t n_points = pow_u64(static_cast<std::uint64_t>(k), d);
    if (n_points > 64) throw CapError("Y point count exceeds the 64-point bound", n_points);
    if (d == 0) {
        RefiningOneTiny out;
        out.y_space = Space::discrete(1);
        out.branching = k;
        return out;
    }

    // f_j(i) = the depth-(i+1) block of leaf j in the k-ary tree over Y.
    FunctionFamily F;
    F.m = d;
    F.r = static_cast<int>(n_points);
    for (int jj = 0; jj < static_cast<int>(n_points); ++jj) {
        std::vector<int> f(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            f[static_cast<std::size_t>(i)] =
                jj / static_cast<int>(pow_u64(static_cast<std::uint64_t>(k), d - 1 - i));
        }
        F.funcs.push_back(std::move(f));
    }
    return make_refining_one_tiny(dif_to_one_tiny(F), k, d);
}

std::vector<ProductBox> build_E(const LabeledPiTree& tree, const RefiningOneTiny& y) {
    if (y.depth() < tree.depth) {
        throw ConstructionError("tree depth exceeds the sequence length");
    }
    if (tree.depth > 0 && y.branching != tree.branching) {
        throw ConstructionError("label alphabet does not match the enumeration alphabet");
    }
    std::vector<ProductBox> E;
    for (int n = 1; n <= tree.depth; ++n) {
        const auto& level = tree.levels[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < level.size(); ++i) {
            E.push_back({n, static_cast<int>(i), level[i].cone,
                         y.member(n, level[i].label), level[i].label});
        }
    }
    return E;
}

DensityCheck check_E_dense(const std::vector<ProductBox>& E, const LabeledPiTree& tree,
                           const RefiningOneTiny& y) {
    DensityCheck out;
    const int test_level = std::max(0, tree.depth - 1);
    const auto& cones = tree.levels[static_cast<std::size_t>(test_level)];
    const auto& y_basis = y.y_space->basis();
    for (std::size_t w = 0; w < cones.size(); ++w) {
        for (std::size_t b = 0; b < y_basis.size(); ++b) {
            const OpenSet u(y_basis[b]);
            bool met = false;
            for (const auto& box : E) {
                if (box.x_part.meets(cones[w].cone) && box.y_part.meets(u)) {
                    met = true;
                    break;
                }
            }
            if (!met) {
                out.failing = {{test_level, static_cast<int>(w)}, static_cast<int>(b)};
                return out;
            }
        }
    }
    out.dense = true;
    return out;
}

SectionReport section_not_dense(const std::vector<ProductBox>& E, const LabeledPiTree& tree,
                                const RefiningOneTiny& y, const std::vector<int>& sigma) {
    SectionReport out;
    OpenSet point = tree.space->full_set();
    if (tree.depth > 0) {
        out.chain_nodes = tree.coherent_chain(sigma);
        point = tree.levels[static_cast<std::size_t>(tree.depth)]
                           [static_cast<std::size_t>(out.chain_nodes.back())]
                               .cone;
    }
    // x = the first point of the chain-bottom cone; E_x from E itself.
    const PointSet bits = point.points();
    PointSet x = bits & (~bits + 1);
    for (const auto& box : E) {
        if (box.x_part.meets(OpenSet(x))) out.section.push_back(box.y_part);
    }
    out.not_dense = !y.y_space->is_dense(out.section);
    return out;
}

KuReport ku_report(const LabeledPiTree& tree, const RefiningOneTiny& y) {
    KuReport rep;
    rep.depth = tree.depth;
    rep.branching = tree.branching;
    const auto E = build_E(tree, y);
    rep.box_count = E.size();
    rep.density = check_E_dense(E, tree, y);
    rep.all_sections_not_dense = true;
    std::vector<int> sigma(static_cast<std::size_t>(tree.depth), 0);
    for (;;) {
        const auto sec = section_not_dense(E, tree, y, sigma);
        rep.sections.push_back({sigma, sec.not_dense});
        rep.all_sections_not_dense = rep.all_sections_not_dense && sec.not_dense;
        int i = tree.depth - 1;
        while (i >= 0 && sigma[static_cast<std::size_t>(i)] == tree.branching - 1) {
            sigma[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++sigma[static_cast<std::size_t>(i)];
    }
    return rep;
}

}  // namespace omg
