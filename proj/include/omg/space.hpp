#pragma once

#include "omg/errors.hpp"
#include "omg/interval_set.hpp"

#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace omg {

enum class SpaceKind { Finite, Discrete, Interval };

// Set of points of a finite space, as a bit mask over {0..n-1}. n ≤ 64.
using PointSet = std::uint64_t;

// An open set of whichever space it belongs to. The owning Space interprets
// the representation; mixing representations across spaces is a type error.
class OpenSet {
public:
    OpenSet() : repr_(PointSet{0}) {}
    explicit OpenSet(PointSet pts) : repr_(pts) {}
    explicit OpenSet(IntervalSet ivs) : repr_(std::move(ivs)) {}

    bool is_points() const { return std::holds_alternative<PointSet>(repr_); }
    bool is_intervals() const { return std::holds_alternative<IntervalSet>(repr_); }

    PointSet points() const {
        if (!is_points()) throw TypeError("expected a point-set open set");
        return std::get<PointSet>(repr_);
    }
    const IntervalSet& intervals() const {
        if (!is_intervals()) throw TypeError("expected an interval open set");
        return std::get<IntervalSet>(repr_);
    }

    bool empty() const {
        return is_points() ? points() == 0 : intervals().empty();
    }

    OpenSet unite(const OpenSet& o) const {
        check_same(o);
        if (is_points()) return OpenSet(points() | o.points());
        return OpenSet(intervals().unite(o.intervals()));
    }
    OpenSet intersect(const OpenSet& o) const {
        check_same(o);
        if (is_points()) return OpenSet(points() & o.points());
        return OpenSet(intervals().intersect(o.intervals()));
    }
    bool subset_of(const OpenSet& o) const {
        check_same(o);
        if (is_points()) return (points() & ~o.points()) == 0;
        return intervals().subset_of(o.intervals());
    }
    bool meets(const OpenSet& o) const {
        check_same(o);
        if (is_points()) return (points() & o.points()) != 0;
        return intervals().meets(o.intervals());
    }

    bool operator==(const OpenSet& o) const { return repr_ == o.repr_; }

    // Size proxy for canonical ordering: point count, or exact measure.
    // Only comparable within one space kind.
    std::strong_ordering canonical_order(const OpenSet& o) const {
        check_same(o);
        if (is_points()) {
            const int a = std::popcount(points()), b = std::popcount(o.points());
            if (a != b) return a < b ? std::strong_ordering::less : std::strong_ordering::greater;
            if (points() != o.points())
                return points() < o.points() ? std::strong_ordering::less
                                             : std::strong_ordering::greater;
            return std::strong_ordering::equal;
        }
        const Rat ma = intervals().measure(), mb = o.intervals().measure();
        if (ma != mb) return ma < mb ? std::strong_ordering::less : std::strong_ordering::greater;
        return intervals() <=> o.intervals();
    }

private:
    void check_same(const OpenSet& o) const {
        if (repr_.index() != o.repr_.index()) {
            throw TypeError("open sets from different space kinds");
        }
    }

    std::variant<PointSet, IntervalSet> repr_;
};

// Finite or exact-rational representation of a space, immutable after
// construction. Finite: explicit basis (a π-base by construction: open means
// union of basis elements). Discrete: basis = all singletons. Interval:
// carries no points, only the measure calculus on (0,1); density there is
// defined as measure exactly 1.
class Space {
public:
    static std::shared_ptr<const Space> finite(int n, std::vector<PointSet> basis) {
        check_n(n);
        if (basis.empty()) throw ConstructionError("finite space needs a nonempty basis");
        const PointSet all = all_mask(n);
        for (PointSet b : basis) {
            if (b == 0) throw ConstructionError("basis element must be nonempty");
            if (b & ~all) throw TypeError("basis element out of point range");
        }
        return std::shared_ptr<const Space>(new Space(SpaceKind::Finite, n, std::move(basis)));
    }

    static std::shared_ptr<const Space> discrete(int n) {
        check_n(n);
        std::vector<PointSet> basis;
        basis.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) basis.push_back(PointSet{1} << i);
        return std::shared_ptr<const Space>(new Space(SpaceKind::Discrete, n, std::move(basis)));
    }

    static std::shared_ptr<const Space> interval() {
        return std::shared_ptr<const Space>(new Space(SpaceKind::Interval, 0, {}));
    }

    SpaceKind kind() const { return kind_; }
    int point_count() const { return n_; }
    const std::vector<PointSet>& basis() const { return basis_; }

    bool has_points() const { return kind_ != SpaceKind::Interval; }

    OpenSet empty_set() const {
        return has_points() ? OpenSet(PointSet{0}) : OpenSet(IntervalSet{});
    }
    OpenSet full_set() const {
        if (has_points()) return OpenSet(all_mask(n_));
        return OpenSet(IntervalSet::single(Rat(0), Rat(1)));
    }

    // Kind/range compatibility. Throws TypeError on mismatch.
    void check_member(const OpenSet& s) const {
        if (has_points()) {
            if (!s.is_points()) throw TypeError("interval set used on a point space");
            if (s.points() & ~all_mask(n_)) throw TypeError("point outside space");
        } else if (!s.is_intervals()) {
            throw TypeError("point set used on the interval space");
        }
    }

    // True iff the set is open: for finite spaces, equal to the union of the
    // basis elements it contains; discrete and interval sets are always open.
    bool is_open(const OpenSet& s) const {
        check_member(s);
        if (kind_ != SpaceKind::Finite) return true;
        const PointSet m = s.points();
        PointSet cover = 0;
        for (PointSet b : basis_) {
            if ((b & ~m) == 0) cover |= b;
        }
        return cover == m;
    }

    void require_open(const OpenSet& s) const {
        if (!is_open(s)) throw TypeError("set is not open in this space");
    }

    // Density of a family of open sets. Point spaces: the union meets every
    // basis element. Interval space: the union has measure exactly 1.
    bool is_dense(std::span<const OpenSet> family) const {
        for (const auto& s : family) {
            check_member(s);
            require_open(s);
        }
        if (has_points()) {
            PointSet u = 0;
            for (const auto& s : family) u |= s.points();
            for (PointSet b : basis_) {
                if ((b & u) == 0) return false;
            }
            return true;
        }
        std::vector<IntervalSet> sets;
        sets.reserve(family.size());
        for (const auto& s : family) sets.push_back(s.intervals());
        return measure_union(sets) == 1;
    }

    bool is_dense(const std::vector<OpenSet>& family) const {
        return is_dense(std::span<const OpenSet>(family));
    }
    bool is_dense_set(const OpenSet& s) const {
        return is_dense(std::span<const OpenSet>(&s, 1));
    }

    bool meets(const OpenSet& u, const OpenSet& v) const {
        check_member(u);
        check_member(v);
        return u.meets(v);
    }

private:
    Space(SpaceKind kind, int n, std::vector<PointSet> basis)
        : kind_(kind), n_(n), basis_(std::move(basis)) {}

    static void check_n(int n) {
        if (n < 1 || n > 64) throw ConstructionError("point count must be in [1,64]");
    }
    static PointSet all_mask(int n) {
        return n >= 64 ? ~PointSet{0} : (PointSet{1} << n) - 1;
    }

    SpaceKind kind_;
    int n_;
    std::vector<PointSet> basis_;
};

using SpacePtr = std::shared_ptr<const Space>;

}  // namespace omg
