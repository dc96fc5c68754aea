#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "omg/json_io.hpp"
#include "omg/space.hpp"

#include <bit>
#include <random>

using namespace omg;

namespace {

OpenSet pts(std::initializer_list<int> xs) {
    PointSet m = 0;
    for (int x : xs) m |= PointSet{1} << x;
    return OpenSet(m);
}

OpenSet iv(const std::string& lo, const std::string& hi) {
    return OpenSet(IntervalSet::single(parse_rat(lo), parse_rat(hi)));
}

// Point-by-point density oracle, independent of the bitset path: a family is
// dense iff every basis element contains a point lying in some member.
bool dense_oracle(const Space& sp, const std::vector<OpenSet>& family) {
    for (PointSet b : sp.basis()) {
        bool hit = false;
        for (int p = 0; p < sp.point_count() && !hit; ++p) {
            if (!((b >> p) & 1)) continue;
            for (const auto& s : family) {
                if ((s.points() >> p) & 1) {
                    hit = true;
                    break;
                }
            }
        }
        if (!hit) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("discrete density") {
    const auto sp = Space::discrete(3);
    CHECK(sp->is_dense({pts({0}), pts({1}), pts({2})}));
    CHECK_FALSE(sp->is_dense({pts({0}), pts({1})}));
}

TEST_CASE("interval density is exact measure one") {
    const auto sp = Space::interval();
    CHECK(sp->is_dense({iv("0", "1/2"), iv("1/2", "1")}));
    CHECK_FALSE(sp->is_dense({iv("0", "1/2"), iv("1/2", "999/1000")}));
}

TEST_CASE("meets") {
    const auto sp = Space::discrete(3);
    CHECK(sp->meets(pts({0, 1}), pts({1, 2})));
    CHECK_FALSE(sp->meets(pts({0}), pts({1})));
    const auto isp = Space::interval();
    CHECK(isp->meets(iv("0", "1/3"), iv("1/4", "1/2")));
    CHECK_FALSE(isp->meets(iv("0", "1/4"), iv("1/4", "1/2")));  // abutting opens
}

TEST_CASE("measure_union") {
    CHECK(measure_union({IntervalSet::single(Rat(0), Rat(1, 2)),
                         IntervalSet::single(Rat(1, 4), Rat(3, 4))}) == Rat(3, 4));
    CHECK(measure_union({}) == Rat(0));
    CHECK(measure_union({IntervalSet::single(Rat(0), Rat(1, 3)),
                         IntervalSet::single(Rat(1, 3), Rat(2, 3)),
                         IntervalSet::single(Rat(2, 3), Rat(1))}) == Rat(1));
}

TEST_CASE("measure_union is order independent and matches inclusion-exclusion") {
    std::mt19937_64 rng(7);
    const auto rnd_iv = [&]() {
        const int den = 2 + static_cast<int>(rng() % 30);
        int a = static_cast<int>(rng() % den);
        int b = static_cast<int>(rng() % den);
        if (a > b) std::swap(a, b);
        if (a == b) b = std::min(den, b + 1);
        return IntervalSet::single(Rat(a, den), Rat(b, den));
    };
    for (int trial = 0; trial < 200; ++trial) {
        const IntervalSet A = rnd_iv(), B = rnd_iv(), C = rnd_iv();
        const Rat swept = measure_union({A, B, C});
        const Rat incl_excl = A.measure() + B.measure() + C.measure() -
                              A.intersect(B).measure() - A.intersect(C).measure() -
                              B.intersect(C).measure() +
                              A.intersect(B).intersect(C).measure();
        CHECK(swept == incl_excl);
        CHECK(swept == measure_union({C, A, B}));
        CHECK(swept == measure_union({B, C, A}));
    }
}

TEST_CASE("density is monotone in the family") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        std::vector<PointSet> basis;
        const PointSet all = (PointSet{1} << n) - 1;
        for (int i = 0; i < 3; ++i) {
            const PointSet b = (rng() % all) + 1;
            basis.push_back(b & all ? (b & all) : 1);
        }
        const auto sp = Space::finite(n, basis);
        std::vector<OpenSet> fam, bigger;
        for (int i = 0; i < 2; ++i) {
            // open sets: random unions of basis elements
            PointSet u = 0;
            for (PointSet b : basis) {
                if (rng() % 2) u |= b;
            }
            fam.push_back(OpenSet(u));
        }
        PointSet basis_union = 0;
        for (PointSet b : basis) basis_union |= b;
        bigger = fam;
        bigger.push_back(OpenSet(basis_union));
        if (sp->is_dense(fam)) CHECK(sp->is_dense(bigger));
    }
}

TEST_CASE("bitset density agrees with the point oracle, exhaustively for small spaces") {
    // every basis of size <= 3 over n <= 3, every family of <= 2 declared opens
    for (int n = 1; n <= 3; ++n) {
        const PointSet all = (PointSet{1} << n) - 1;
        std::vector<PointSet> masks;
        for (PointSet m = 1; m <= all; ++m) masks.push_back(m);
        const int nm = static_cast<int>(masks.size());
        for (int i = 0; i < nm; ++i) {
            for (int j = i; j < nm; ++j) {
                for (int k = j; k < nm; ++k) {
                    const std::vector<PointSet> basis{masks[i], masks[j], masks[k]};
                    const auto sp = Space::finite(n, basis);
                    // declared opens: unions of basis subsets
                    std::vector<OpenSet> opens;
                    for (int sel = 0; sel < 8; ++sel) {
                        PointSet u = 0;
                        for (int b = 0; b < 3; ++b) {
                            if ((sel >> b) & 1) u |= basis[static_cast<std::size_t>(b)];
                        }
                        opens.push_back(OpenSet(u));
                    }
                    for (const auto& a : opens) {
                        if (a.empty()) continue;
                        for (const auto& b : opens) {
                            if (b.empty()) continue;
                            const std::vector<OpenSet> fam{a, b};
                            CHECK(sp->is_dense(fam) == dense_oracle(*sp, fam));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("bitset density agrees with the point oracle, randomized up to n = 6") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 1500; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 6);
        const PointSet all = (PointSet{1} << n) - 1;
        const int bsize = 1 + static_cast<int>(rng() % 4);
        std::vector<PointSet> basis;
        for (int i = 0; i < bsize; ++i) basis.push_back((rng() % all) + 1);
        const auto sp = Space::finite(n, basis);
        std::vector<OpenSet> fam;
        const int fsize = static_cast<int>(rng() % 4);
        for (int i = 0; i < fsize; ++i) {
            PointSet u = 0;
            for (PointSet b : basis) {
                if (rng() % 2) u |= b;
            }
            fam.push_back(OpenSet(u));
        }
        CHECK(sp->is_dense(fam) == dense_oracle(*sp, fam));
    }
}

TEST_CASE("openness in a finite space means union of contained basis elements") {
    const auto sp = Space::finite(4, {0b0011, 0b1100});
    CHECK(sp->is_open(pts({0, 1})));
    CHECK(sp->is_open(pts({0, 1, 2, 3})));
    CHECK_FALSE(sp->is_open(pts({1, 2})));
    CHECK_THROWS_AS(sp->require_open(pts({1})), TypeError);
    CHECK_THROWS_AS((void)sp->is_dense({pts({1})}), TypeError);
}

TEST_CASE("mixed spaces raise type errors") {
    const auto sp = Space::discrete(2);
    CHECK_THROWS_AS((void)sp->meets(pts({0}), iv("0", "1/2")), TypeError);
    CHECK_THROWS_AS(sp->check_member(iv("0", "1/2")), TypeError);
    const auto isp = Space::interval();
    CHECK_THROWS_AS(isp->check_member(pts({0})), TypeError);
}

TEST_CASE("interval endpoints must stay inside [0,1]") {
    CHECK_THROWS_AS(IntervalSet::single(Rat(-1, 2), Rat(1, 2)), TypeError);
    CHECK_THROWS_AS(IntervalSet::single(Rat(1, 2), Rat(3, 2)), TypeError);
}

TEST_CASE("interval subset and intersection are exact") {
    const IntervalSet a({{Rat(0), Rat(1, 3)}, {Rat(1, 2), Rat(1)}});
    const IntervalSet b = IntervalSet::single(Rat(0), Rat(1));
    CHECK(a.subset_of(b));
    CHECK_FALSE(b.subset_of(a));
    CHECK(a.intersect(b) == a);
    const IntervalSet c = IntervalSet::single(Rat(1, 4), Rat(3, 4));
    CHECK(a.intersect(c) ==
          IntervalSet({{Rat(1, 4), Rat(1, 3)}, {Rat(1, 2), Rat(3, 4)}}));
    // union merges positive overlap but keeps abutting pieces apart
    const IntervalSet u = IntervalSet::single(Rat(0), Rat(1, 2))
                              .unite(IntervalSet::single(Rat(1, 2), Rat(1)));
    CHECK(u.intervals().size() == 2);
    CHECK(u.measure() == Rat(1));
}

TEST_CASE("space and open set JSON round trips") {
    for (const auto& sp : {Space::discrete(5), Space::finite(4, {0b0011, 0b1100, 0b0100}),
                           Space::interval()}) {
        const Json j = space_to_json(*sp);
        const auto back = space_from_json(j);
        CHECK(space_to_json(*back) == j);
    }
    const auto sp = Space::discrete(6);
    const OpenSet s = pts({0, 3, 5});
    CHECK(open_set_from_json(*sp, open_set_to_json(*sp, s)) == s);
    const auto isp = Space::interval();
    const OpenSet t = OpenSet(IntervalSet({{Rat(1, 4), Rat(1, 2)}, {Rat(2, 3), Rat(1)}}));
    CHECK(open_set_from_json(*isp, open_set_to_json(*isp, t)) == t);
}

TEST_CASE("rational parsing") {
    CHECK(parse_rat("3/4") == Rat(3, 4));
    CHECK(parse_rat("2") == Rat(2));
    CHECK(rat_str(Rat(40, 81)) == "40/81");
    CHECK(rat_str(Rat(4, 2)) == "2");
    CHECK_THROWS_AS(parse_rat("x/y"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
}
