#include "omg/cardinal.hpp"

#include <algorithm>
#include <set>

namespace omg {

void FunctionFamily::validate() const {
    if (m < 1) throw ConstructionError("function domain must be nonempty");
    if (r < 1) throw ConstructionError("function range must be nonempty");
    if (funcs.empty()) throw ConstructionError("function family must be nonempty");
    std::set<std::vector<int>> seen;
    for (const auto& f : funcs) {
        if (static_cast<int>(f.size()) != m) throw ConstructionError("function arity mismatch");
        for (int v : f) {
            if (v < 0 || v >= r) throw ConstructionError("function value out of range");
        }
        if (!seen.insert(f).second) throw ConstructionError("duplicate function in family");
    }
}

std::string to_string(const FamilyProperty& p) {
    switch (p.kind) {
        case PropertyKind::EverywhereDifferent: return "dif";
        case PropertyKind::EverywhereAbove: return "above";
        case PropertyKind::OftenAbove: return "often:" + std::to_string(p.t);
    }
    return "?";
}

namespace {

std::uint64_t pow_u64(std::uint64_t b, int e, std::uint64_t cap) {
    std::uint64_t x = 1;
    for (int i = 0; i < e; ++i) {
        if (b != 0 && x > cap / b) return cap + 1;
        x *= b;
    }
    return x;
}

bool beats(const std::vector<int>& f, const std::vector<int>& g, int needed) {
    int cnt = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] > g[i]) ++cnt;
    }
    return cnt >= needed;
}

}  // namespace

PropertyResult has_property(const FunctionFamily& F, const FamilyProperty& p,
                            std::uint64_t cap) {
    F.validate();
    const int g_range = p.kind == PropertyKind::EverywhereDifferent ? F.r : F.r - 1;
    if (g_range <= 0) return {true, std::nullopt};  // nothing to beat or differ from

    const std::uint64_t total = pow_u64(static_cast<std::uint64_t>(g_range), F.m, cap);
    if (total > cap) throw CapError("adversary function space too large", total);

    std::vector<int> g(static_cast<std::size_t>(F.m), 0);
    for (;;) {
        bool witnessed = false;
        for (const auto& f : F.funcs) {
            switch (p.kind) {
                case PropertyKind::EverywhereDifferent: {
                    bool all_diff = true;
                    for (int i = 0; i < F.m; ++i) {
                        if (f[static_cast<std::size_t>(i)] == g[static_cast<std::size_t>(i)]) {
                            all_diff = false;
                            break;
                        }
                    }
                    witnessed = all_diff;
                    break;
                }
                case PropertyKind::EverywhereAbove:
                    witnessed = beats(f, g, F.m);
                    break;
                case PropertyKind::OftenAbove:
                    witnessed = beats(f, g, p.t);
                    break;
            }
            if (witnessed) break;
        }
        if (!witnessed) return {false, g};
        int i = F.m - 1;
        while (i >= 0 && g[static_cast<std::size_t>(i)] == g_range - 1) {
            g[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++g[static_cast<std::size_t>(i)];
    }
    return {true, std::nullopt};
}

FamilySequence dif_to_one_tiny(const FunctionFamily& F) {
    F.validate();
    const auto space = Space::discrete(F.size());
    std::vector<std::vector<OpenSet>> families;
    for (int i = 0; i < F.m; ++i) {
        std::vector<OpenSet> fam;
        for (int n = 0; n < F.r; ++n) {
            PointSet cell = 0;
            for (int j = 0; j < F.size(); ++j) {
                if (F.funcs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] == n) {
                    cell |= PointSet{1} << j;
                }
            }
            if (cell != 0) fam.push_back(OpenSet(cell));
        }
        families.push_back(std::move(fam));
    }
    return FamilySequence(space, std::move(families), SeqKind::OneTiny);
}

FunctionFamily one_tiny_to_dif(const FamilySequence& seq, bool refine_overlaps) {
    if (seq.space().kind() != SpaceKind::Discrete) {
        throw TypeError("one_tiny_to_dif needs a sequence on a discrete space");
    }
    const int N = seq.space().point_count();
    const int m = seq.length();
    if (m == 0) throw ConstructionError("empty sequence");

    // membership[i][x] = index of the member of P_i owning point x.
    std::vector<std::vector<int>> membership;
    for (const auto& fam : seq.families()) {
        std::vector<int> owner(static_cast<std::size_t>(N), -1);
        for (int j = 0; j < static_cast<int>(fam.size()); ++j) {
            const PointSet cell = fam[static_cast<std::size_t>(j)].points();
            for (int x = 0; x < N; ++x) {
                if (!((cell >> x) & 1)) continue;
                if (owner[static_cast<std::size_t>(x)] == -1) {
                    owner[static_cast<std::size_t>(x)] = j;
                } else if (!refine_overlaps) {
                    throw ConstructionError(
                        "family is not a partition; pass the refinement flag");
                }
            }
        }
        for (int x = 0; x < N; ++x) {
            if (owner[static_cast<std::size_t>(x)] == -1) {
                throw ConstructionError("family does not cover the space");
            }
        }
        membership.push_back(std::move(owner));
    }

    FunctionFamily out;
    out.m = m;
    out.r = 1;
    std::set<std::vector<int>> seen;
    for (int x = 0; x < N; ++x) {
        std::vector<int> fx(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            fx[static_cast<std::size_t>(i)] = membership[static_cast<std::size_t>(i)]
                                                        [static_cast<std::size_t>(x)];
            out.r = std::max(out.r, fx[static_cast<std::size_t>(i)] + 1);
        }
        if (seen.insert(fx).second) out.funcs.push_back(std::move(fx));
    }
    out.validate();
    return out;
}

namespace {

FamilySequence chain_transform(const FunctionFamily& F, SeqKind kind) {
    F.validate();
    const auto space = Space::discrete(F.size());
    std::vector<std::vector<OpenSet>> families;
    for (int i = 0; i < F.m; ++i) {
        std::vector<OpenSet> fam;
        PointSet below = 0;
        for (int n = 0; n < F.r; ++n) {
            for (int j = 0; j < F.size(); ++j) {
                if (F.funcs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] <= n) {
                    below |= PointSet{1} << j;
                }
            }
            fam.push_back(OpenSet(below));  // empty levels kept: position = level
        }
        families.push_back(std::move(fam));
    }
    return FamilySequence(space, std::move(families), kind, /*allow_empty_members=*/true);
}

}  // namespace

FamilySequence dominating_to_tiny(const FunctionFamily& F) {
    return chain_transform(F, SeqKind::Tiny);
}

FamilySequence unbounded_to_b_tiny(const FunctionFamily& F) {
    return chain_transform(F, SeqKind::BTiny);
}

TransformCheck check_dif_equivalence(const FunctionFamily& F, std::uint64_t cap) {
    TransformCheck c;
    c.property_holds = has_property(F, FamilyProperty::dif(), cap).holds;
    c.verdict = verify_one_tiny(dif_to_one_tiny(F), cap).status;
    c.equivalent = c.property_holds == (c.verdict == VerifyStatus::HoldsAtScale);
    return c;
}

TransformCheck check_dominating_equivalence(const FunctionFamily& F, std::uint64_t cap) {
    TransformCheck c;
    c.property_holds = has_property(F, FamilyProperty::above(), cap).holds;
    c.verdict = verify_tiny(dominating_to_tiny(F), full_level_bound(F.r), cap).status;
    c.equivalent = c.property_holds == (c.verdict == VerifyStatus::HoldsAtScale);
    return c;
}

TransformCheck check_unbounded_equivalence(const FunctionFamily& F, int t, std::uint64_t cap) {
    TransformCheck c;
    c.property_holds = has_property(F, FamilyProperty::often(t), cap).holds;
    c.verdict = verify_b_tiny(unbounded_to_b_tiny(F), full_level_bound(F.r), t, cap).status;
    c.equivalent = c.property_holds == (c.verdict == VerifyStatus::HoldsAtScale);
    return c;
}

void for_each_function_family(int m, int r, int max_size,
                              const std::function<void(const FunctionFamily&)>& fn) {
    // All functions ^m r in lexicographic order.
    std::vector<std::vector<int>> all;
    std::vector<int> f(static_cast<std::size_t>(m), 0);
    for (;;) {
        all.push_back(f);
        int i = m - 1;
        while (i >= 0 && f[static_cast<std::size_t>(i)] == r - 1) {
            f[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++f[static_cast<std::size_t>(i)];
    }
    const int total = static_cast<int>(all.size());
    std::vector<int> idx;
    const std::function<void(int)> rec = [&](int start) {
        if (!idx.empty()) {
            FunctionFamily F;
            F.m = m;
            F.r = r;
            for (int i : idx) F.funcs.push_back(all[static_cast<std::size_t>(i)]);
            fn(F);
        }
        if (static_cast<int>(idx.size()) == max_size) return;
        for (int i = start; i < total; ++i) {
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(0);
}

std::optional<int> min_family_size(int m, int r, const FamilyProperty& p, std::uint64_t cap) {
    const std::uint64_t n_funcs = pow_u64(static_cast<std::uint64_t>(r), m, cap);
    if (n_funcs > cap) throw CapError("function space too large", n_funcs);

    std::uint64_t examined = 0;
    std::optional<int> found;
    const int total = static_cast<int>(n_funcs);
    for (int k = 1; k <= total && !found; ++k) {
        // Subsets of size exactly k, lexicographic.
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        for (;;) {
            if (++examined > cap) throw CapError("family search too large", examined);
            FunctionFamily F;
            F.m = m;
            F.r = r;
            for (int i : idx) {
                std::vector<int> f(static_cast<std::size_t>(m));
                int v = i;
                for (int d = m - 1; d >= 0; --d) {
                    f[static_cast<std::size_t>(d)] = v % r;
                    v /= r;
                }
                F.funcs.push_back(std::move(f));
            }
            if (has_property(F, p, cap).holds) {
                found = k;
                break;
            }
            // next combination
            int i = k - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == total - k + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j) {
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    return found;
}

}  // namespace omg
