#include <doctest.h>

#include <algorithm>
#include <functional>

#include "ccoreset/constraints.hpp"
#include "support.hpp"

using namespace ccoreset;

namespace {

ColorMatrix size_vector(std::initializer_list<std::int64_t> v) {
    ColorMatrix K(static_cast<int>(v.size()), 1);
    int i = 0;
    for (auto x : v) K.at(i++, 0) = x;
    return K;
}

// all matrices with the required column sums, by direct recursion (the test-side
// generator the family enumerations are compared against)
std::vector<ColorMatrix> all_matrices(int rows, const std::vector<std::int64_t>& masses) {
    std::vector<ColorMatrix> out;
    ColorMatrix K(rows, static_cast<int>(masses.size()));
    std::function<void(int)> color = [&](int j) {
        if (j == K.cols) {
            out.push_back(K);
            return;
        }
        std::function<void(int, std::int64_t)> row = [&](int i, std::int64_t rem) {
            if (i == rows - 1) {
                K.at(i, j) = rem;
                color(j + 1);
                K.at(i, j) = 0;
                return;
            }
            for (std::int64_t v = 0; v <= rem; ++v) {
                K.at(i, j) = v;
                row(i + 1, rem - v);
            }
            K.at(i, j) = 0;
        };
        row(0, masses[j]);
    };
    color(0);
    return out;
}

}  // namespace

TEST_CASE("lower bounds: strict vs open-centers semantics") {
    auto strict = ConstraintFamily::lower_bounds({4, 4}, LowerBoundMode::Strict, {8});
    CHECK(strict.admits(size_vector({4, 4})));
    CHECK_FALSE(strict.admits(size_vector({5, 3})));
    CHECK(strict.admits(size_vector({5, 4})) == false);  // column sum 9 != 8

    auto tight = ConstraintFamily::lower_bounds({4, 4}, LowerBoundMode::Strict, {4});
    CHECK(tight.provably_infeasible());
    auto open = ConstraintFamily::lower_bounds({4, 4}, LowerBoundMode::OpenCenters, {4});
    CHECK_FALSE(open.provably_infeasible());
    CHECK(open.admits(size_vector({4, 0})));
    CHECK(open.admits(size_vector({0, 4})));
    CHECK_FALSE(open.admits(size_vector({2, 2})));
}

TEST_CASE("lower bounds enumeration equals the composition filter") {
    auto fam = ConstraintFamily::lower_bounds({2, 3}, LowerBoundMode::Strict, {6});
    auto got = fam.enumerate();
    auto expect = all_matrices(2, {6});
    expect.erase(std::remove_if(expect.begin(), expect.end(),
                                [&](const ColorMatrix& K) {
                                    return K.at(0, 0) < 2 || K.at(1, 0) < 3;
                                }),
                 expect.end());
    std::sort(expect.begin(), expect.end());
    CHECK(got == expect);
    for (const auto& K : got) CHECK(fam.admits(K));
}

TEST_CASE("upper bounds: forced, unconstrained and enumerated cases") {
    auto loose = ConstraintFamily::upper_bounds({5, 5}, {5});
    CHECK(loose.enumerate().size() == all_matrices(2, {5}).size());

    auto forced = ConstraintFamily::upper_bounds({1, 1}, {2});
    auto got = forced.enumerate();
    REQUIRE(got.size() == 1);
    CHECK(got[0] == size_vector({1, 1}));

    auto fam = ConstraintFamily::upper_bounds({2, 2, 2}, {5});
    auto expect = all_matrices(3, {5});
    expect.erase(std::remove_if(expect.begin(), expect.end(),
                                [](const ColorMatrix& K) {
                                    return K.at(0, 0) > 2 || K.at(1, 0) > 2 || K.at(2, 0) > 2;
                                }),
                 expect.end());
    std::sort(expect.begin(), expect.end());
    CHECK(fam.enumerate() == expect);

    CHECK(ConstraintFamily::upper_bounds({1, 1}, {3}).provably_infeasible());
}

TEST_CASE("outlier families") {
    auto plain = ConstraintFamily::outliers(2, 0, {3});
    CHECK(plain.cluster_count() == 2);
    CHECK(plain.enumerate() == ConstraintFamily::unconstrained(2, {3}).enumerate());

    auto fam = ConstraintFamily::outliers(1, 1, {3});
    CHECK(fam.cluster_count() == 2);
    CHECK(fam.center_count() == 1);
    CHECK(fam.admits(size_vector({1, 2})));
    CHECK_FALSE(fam.admits(size_vector({0, 3})));
    CHECK_FALSE(fam.admits(size_vector({2, 1})));

    CHECK(ConstraintFamily::outliers(1, 4, {3}).provably_infeasible());
}

TEST_CASE("chromatic families") {
    auto single = ConstraintFamily::chromatic(1, {1});
    auto got = single.enumerate();
    REQUIRE(got.size() == 1);
    CHECK(got[0].at(0, 0) == 1);

    // two colors with two points each and k = 2 force the all-ones matrix
    auto forced = ConstraintFamily::chromatic(2, {2, 2});
    got = forced.enumerate();
    REQUIRE(got.size() == 1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(got[0].at(i, j) == 1);

    auto fam = ConstraintFamily::chromatic(3, {2, 1});
    auto expect = all_matrices(3, {2, 1});
    expect.erase(std::remove_if(expect.begin(), expect.end(),
                                [](const ColorMatrix& K) {
                                    return *std::max_element(K.data.begin(), K.data.end()) > 1;
                                }),
                 expect.end());
    std::sort(expect.begin(), expect.end());
    CHECK(fam.enumerate() == expect);

    CHECK(ConstraintFamily::chromatic(2, {3}).provably_infeasible());
}

TEST_CASE("l-diversity families") {
    // l = 1 admits everything
    auto everything = ConstraintFamily::l_diversity(2, 1, {2, 1});
    CHECK(everything.enumerate().size() == all_matrices(2, {2, 1}).size());

    auto fam2 = ConstraintFamily::l_diversity(1, 2, {2, 1});
    ColorMatrix bad(1, 2);
    bad.at(0, 0) = 2;
    bad.at(0, 1) = 1;
    CHECK_FALSE(fam2.admits(bad));  // 2/3 > 1/2

    auto fam3 = ConstraintFamily::l_diversity(1, 2, {1, 1});
    ColorMatrix good(1, 2);
    good.at(0, 0) = 1;
    good.at(0, 1) = 1;
    CHECK(fam3.admits(good));

    auto fam = ConstraintFamily::l_diversity(2, 2, {2, 2});
    auto expect = all_matrices(2, {2, 2});
    expect.erase(std::remove_if(expect.begin(), expect.end(),
                                [](const ColorMatrix& K) {
                                    for (int i = 0; i < K.rows; ++i) {
                                        auto r = K.row_sum(i);
                                        if (r == 0) continue;
                                        for (int j = 0; j < K.cols; ++j)
                                            if (2 * K.at(i, j) > r) return true;
                                    }
                                    return false;
                                }),
                 expect.end());
    std::sort(expect.begin(), expect.end());
    CHECK(fam.enumerate() == expect);
}

TEST_CASE("must-link encoding recolors components") {
    Rng rng(23);
    PointSet p = testsupport::random_points(rng, 4, 2);

    auto none = encode_must_link({}, p, 2);
    CHECK(none.recolored.color_count() == 1);
    CHECK(none.family.constrained_colors() == 0);

    auto enc = encode_must_link({{0, 1}, {1, 2}}, p, 2);
    CHECK(enc.recolored.color_count() == 2);
    CHECK(enc.family.constrained_colors() == 1);
    CHECK(enc.recolored[0].color == 0);
    CHECK(enc.recolored[1].color == 0);
    CHECK(enc.recolored[2].color == 0);
    CHECK(enc.recolored[3].color == 1);

    ColorMatrix split(2, 2);
    split.at(0, 0) = 2;
    split.at(1, 0) = 1;  // component split across clusters
    split.at(0, 1) = 1;
    CHECK_FALSE(enc.family.admits(split));

    ColorMatrix together(2, 2);
    together.at(0, 0) = 3;
    together.at(1, 1) = 1;
    CHECK(enc.family.admits(together));

    CHECK_THROWS_AS(encode_must_link({{0, 9}}, p, 2), Error);
}

TEST_CASE("must-link admitted clusterings never split a component") {
    Rng rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        PointSet p = testsupport::random_points(rng, 8, 2);
        std::vector<std::pair<int, int>> links;
        for (int l = 0; l < 3; ++l) {
            int a = static_cast<int>(rng.next_index(8));
            int b = static_cast<int>(rng.next_index(8));
            if (a != b) links.emplace_back(a, b);
        }
        auto enc = encode_must_link(links, p, 2);
        // brute force every labeling; the family must admit exactly those that keep
        // linked points together
        std::vector<int> labels(8, 0);
        for (int mask = 0; mask < 256; ++mask) {
            for (int i = 0; i < 8; ++i) labels[i] = (mask >> i) & 1;
            bool respects = true;
            for (auto [a, b] : links) respects &= labels[a] == labels[b];
            // transitive closure through components: admitted iff no component split
            ColorMatrix K = realized_matrix(enc.recolored, labels, 2);
            bool component_ok = true;
            for (int j = 0; j < enc.family.constrained_colors(); ++j) {
                int nz = 0;
                for (int i = 0; i < 2; ++i) nz += K.at(i, j) > 0;
                component_ok &= nz <= 1;
            }
            CHECK(enc.family.admits(K) == component_ok);
            if (respects) CHECK(enc.family.admits(K));
        }
    }
}

TEST_CASE("cannot-link encoding separates linked points") {
    Rng rng(31);
    PointSet p = testsupport::random_points(rng, 2, 2);
    auto none = encode_cannot_link({}, p, 2);
    CHECK(none.family.conflicts().empty());

    auto enc = encode_cannot_link({{0, 1}}, p, 2);
    CHECK(enc.recolored[0].color != enc.recolored[1].color);
    for (const auto& K : enc.family.enumerate())
        for (int i = 0; i < K.rows; ++i)
            CHECK((K.at(i, 0) == 0 || K.at(i, 1) == 0));
}

TEST_CASE("cannot-link admitted clusterings respect every link") {
    Rng rng(37);
    for (int rep = 0; rep < 10; ++rep) {
        PointSet p = testsupport::random_points(rng, 5, 2);
        std::vector<std::pair<int, int>> links;
        while (links.size() < 3) {
            int a = static_cast<int>(rng.next_index(5));
            int b = static_cast<int>(rng.next_index(5));
            if (a != b) links.emplace_back(std::min(a, b), std::max(a, b));
        }
        auto enc = encode_cannot_link(links, p, 3);
        std::vector<int> labels(5, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == 5) {
                ColorMatrix K = realized_matrix(enc.recolored, labels, 3);
                if (enc.family.admits(K)) {
                    // soundness: an admitted clustering may never violate a link
                    for (auto [a, b] : links) CHECK(labels[a] != labels[b]);
                }
                return;
            }
            for (int c = 0; c < 3; ++c) {
                labels[i] = c;
                rec(i + 1);
            }
        };
        rec(0);
    }
}

TEST_CASE("unconstrained enumeration lists compositions") {
    auto fam = ConstraintFamily::unconstrained(2, {3});
    auto got = fam.enumerate();
    std::vector<ColorMatrix> expect{size_vector({0, 3}), size_vector({1, 2}),
                                    size_vector({2, 1}), size_vector({3, 0})};
    std::sort(expect.begin(), expect.end());
    CHECK(got == expect);
    // enumeration is exactly the admitted set, column sums included
    for (const auto& K : got) {
        CHECK(fam.admits(K));
        CHECK(K.col_sum(0) == 3);
    }
    ColorMatrix wrong(2, 1);
    wrong.at(0, 0) = 4;
    CHECK_FALSE(fam.admits(wrong));
}

TEST_CASE("enumeration cap is enforced") {
    auto fam = ConstraintFamily::unconstrained(6, {60});
    CHECK_THROWS_AS(fam.enumerate(1000), CapExceeded);
}

TEST_CASE("explicit families are deduplicated, sorted and validated") {
    ColorMatrix a = size_vector({1, 2});
    ColorMatrix b = size_vector({2, 1});
    auto fam = ConstraintFamily::explicit_family({b, a, a}, {3});
    CHECK(fam.explicit_matrices().size() == 2);
    CHECK(fam.enumerate() == fam.explicit_matrices());
    CHECK(fam.admits(a));
    CHECK_FALSE(fam.admits(size_vector({0, 3})));
    CHECK_THROWS_AS(ConstraintFamily::explicit_family({size_vector({1, 1})}, {3}), Error);
    CHECK_THROWS_AS(ConstraintFamily::explicit_family({}, {3}), Error);
}

TEST_CASE("size families ignore colors: the one-color view matches row sums") {
    // the same bounds applied at l = 1 and at l = 2 admit identical row-sum profiles
    auto size_view = ConstraintFamily::upper_bounds({2, 2}, {3});
    auto color_view = ConstraintFamily::upper_bounds({2, 2}, {2, 1});
    std::vector<std::vector<std::int64_t>> size_profiles, color_profiles;
    for (const auto& K : size_view.enumerate()) size_profiles.push_back(K.row_sums());
    for (const auto& K : color_view.enumerate()) color_profiles.push_back(K.row_sums());
    std::sort(size_profiles.begin(), size_profiles.end());
    size_profiles.erase(std::unique(size_profiles.begin(), size_profiles.end()),
                        size_profiles.end());
    std::sort(color_profiles.begin(), color_profiles.end());
    color_profiles.erase(std::unique(color_profiles.begin(), color_profiles.end()),
                         color_profiles.end());
    CHECK(size_profiles == color_profiles);
}
