#pragma once

#include "omg/errors.hpp"
#include "omg/rational.hpp"

#include <algorithm>
#include <compare>
#include <utility>
#include <vector>

namespace omg {

// A finite union of disjoint open intervals with rational endpoints inside
// [0,1]. Normalized on construction: sorted, positive length, overlapping
// pieces merged. Abutting open intervals (a,b),(b,c) are kept separate; they
// differ from (a,c) as point sets even though the measures agree.
class IntervalSet {
public:
    using Interval = std::pair<Rat, Rat>;

    IntervalSet() = default;

    explicit IntervalSet(std::vector<Interval> intervals) {
        for (auto& [lo, hi] : intervals) {
            if (lo < 0 || hi > 1) {
                throw TypeError("interval endpoints must lie in [0,1]");
            }
            if (lo >= hi) continue;  // empty piece
            ivs_.push_back({std::move(lo), std::move(hi)});
        }
        normalize();
    }

    static IntervalSet single(Rat lo, Rat hi) {
        return IntervalSet({{std::move(lo), std::move(hi)}});
    }

    const std::vector<Interval>& intervals() const { return ivs_; }
    bool empty() const { return ivs_.empty(); }

    Rat measure() const {
        Rat m = 0;
        for (const auto& [lo, hi] : ivs_) m += hi - lo;
        return m;
    }

    IntervalSet unite(const IntervalSet& other) const {
        std::vector<Interval> all = ivs_;
        all.insert(all.end(), other.ivs_.begin(), other.ivs_.end());
        IntervalSet out;
        out.ivs_ = std::move(all);
        out.normalize();
        return out;
    }

    IntervalSet intersect(const IntervalSet& other) const {
        IntervalSet out;
        for (const auto& a : ivs_) {
            for (const auto& b : other.ivs_) {
                Rat lo = std::max(a.first, b.first);
                Rat hi = std::min(a.second, b.second);
                if (lo < hi) out.ivs_.push_back({std::move(lo), std::move(hi)});
            }
        }
        out.normalize();
        return out;
    }

    // Open intervals meet iff they overlap on a set of positive measure.
    bool meets(const IntervalSet& other) const { return !intersect(other).empty(); }

    bool subset_of(const IntervalSet& other) const {
        // Every piece must be covered by other's pieces. Pieces of an open
        // set can be covered only up to abutment points, so work piecewise:
        // (lo,hi) ⊆ other iff each maximal uncovered gap inside (lo,hi) is empty.
        for (const auto& [lo, hi] : ivs_) {
            Rat cursor = lo;
            for (const auto& [blo, bhi] : other.ivs_) {
                if (bhi <= cursor) continue;
                if (blo > cursor) break;  // gap (cursor, min(blo,hi)) uncovered
                cursor = bhi;
                if (cursor >= hi) break;
            }
            if (cursor < hi) return false;
        }
        return true;
    }

    bool operator==(const IntervalSet& other) const { return ivs_ == other.ivs_; }

    // Deterministic total order (for canonical sorting of families).
    std::strong_ordering operator<=>(const IntervalSet& other) const {
        const std::size_t n = std::min(ivs_.size(), other.ivs_.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (ivs_[i].first != other.ivs_[i].first)
                return ivs_[i].first < other.ivs_[i].first ? std::strong_ordering::less
                                                           : std::strong_ordering::greater;
            if (ivs_[i].second != other.ivs_[i].second)
                return ivs_[i].second < other.ivs_[i].second ? std::strong_ordering::less
                                                             : std::strong_ordering::greater;
        }
        if (ivs_.size() != other.ivs_.size())
            return ivs_.size() < other.ivs_.size() ? std::strong_ordering::less
                                                   : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    void normalize() {
        std::sort(ivs_.begin(), ivs_.end());
        std::vector<Interval> merged;
        for (auto& iv : ivs_) {
            // Merge on positive overlap only.
            if (!merged.empty() && iv.first < merged.back().second) {
                merged.back().second = std::max(merged.back().second, iv.second);
            } else {
                merged.push_back(std::move(iv));
            }
        }
        ivs_ = std::move(merged);
    }

    std::vector<Interval> ivs_;
};

// Exact measure of the union of several interval sets (interval sweep).
inline Rat measure_union(const std::vector<IntervalSet>& sets) {
    IntervalSet acc;
    for (const auto& s : sets) acc = acc.unite(s);
    return acc.measure();
}

}  // namespace omg
