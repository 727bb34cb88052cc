#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "strobo/moments.hpp"

using namespace strobo;

namespace {

// Naive double-loop oracle: accumulates raw moments pixel by pixel, then
// the central sums in a second explicit scan.
struct NaiveMoments {
    long long m00 = 0, m10 = 0, m01 = 0;
    double mu20 = 0, mu02 = 0, mu11 = 0;
};

NaiveMoments naive_moments(const BinaryMask& mask) {
    NaiveMoments n;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.get(x, y)) {
                n.m00 += 1;
                n.m10 += x;
                n.m01 += y;
            }
    const double cx = static_cast<double>(n.m10) / static_cast<double>(n.m00);
    const double cy = static_cast<double>(n.m01) / static_cast<double>(n.m00);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.get(x, y)) {
                n.mu20 += (x - cx) * (x - cx);
                n.mu02 += (y - cy) * (y - cy);
                n.mu11 += (x - cx) * (y - cy);
            }
    return n;
}

BinaryMask random_mask(int w, int h, double p, std::mt19937& rng) {
    BinaryMask m(w, h);
    std::bernoulli_distribution bit(p);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (bit(rng)) m.set(x, y, true);
    return m;
}

BinaryMask translate(const BinaryMask& m, int dx, int dy, int w, int h) {
    BinaryMask out(w, h);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.get(x, y)) out.set(x + dx, y + dy, true);
    return out;
}

}  // namespace

TEST_CASE("moments of simple shapes") {
    SECTION("3x3 solid square at x,y in {4,5,6}") {
        BinaryMask m(10, 10);
        for (int y = 4; y <= 6; ++y)
            for (int x = 4; x <= 6; ++x) m.set(x, y, true);
        const Moments mm = compute_moments(m);
        CHECK(mm.m00 == 9);
        CHECK(mm.centroid_x() == 5.0);
        CHECK(mm.centroid_y() == 5.0);
        // offsets -1,0,1 each appear 3 times: 3*(1+0+1) = 6
        CHECK_THAT(mm.mu20, Catch::Matchers::WithinAbs(6.0, 1e-12));
        CHECK_THAT(mm.mu02, Catch::Matchers::WithinAbs(6.0, 1e-12));
        CHECK_THAT(mm.mu11, Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
    SECTION("a single pixel is a point mass") {
        BinaryMask m(10, 10);
        m.set(7, 2, true);
        const Moments mm = compute_moments(m);
        CHECK(mm.centroid_x() == 7.0);
        CHECK(mm.centroid_y() == 2.0);
        CHECK(mm.mu20 == 0.0);
        CHECK(mm.mu02 == 0.0);
        CHECK(mm.mu11 == 0.0);
    }
    SECTION("empty mask") { CHECK_THROWS_AS(compute_moments(BinaryMask(4, 4)), EmptyMask); }
}

TEST_CASE("moments match the naive oracle on random masks") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        BinaryMask m = random_mask(32, 24, 0.05 + 0.9 * (trial % 10) / 9.0, rng);
        if (m.popcount() == 0) m.set(3, 3, true);
        const Moments got = compute_moments(m);
        const NaiveMoments want = naive_moments(m);
        CHECK(got.m00 == want.m00);
        CHECK(got.m10 == want.m10);
        CHECK(got.m01 == want.m01);
        CHECK_THAT(got.mu20, Catch::Matchers::WithinAbs(want.mu20, 1e-9));
        CHECK_THAT(got.mu02, Catch::Matchers::WithinAbs(want.mu02, 1e-9));
        CHECK_THAT(got.mu11, Catch::Matchers::WithinAbs(want.mu11, 1e-9));
        CHECK(got.m00 == m.popcount());
    }
}

TEST_CASE("blob_stats packages moments, bbox and timing") {
    BinaryMask m(12, 12);
    for (int y = 4; y <= 6; ++y)
        for (int x = 4; x <= 6; ++x) m.set(x, y, true);
    const BlobStats s = blob_stats(m, 10, 10 / 25.0);
    CHECK(s.frame_index == 10);
    CHECK(s.area == 9);
    CHECK(s.cx == 5.0);
    CHECK(s.cy == 5.0);
    CHECK(s.min_x == 4);
    CHECK(s.min_y == 4);
    CHECK(s.max_x == 6);
    CHECK(s.max_y == 6);
    CHECK_THAT(s.timestamp_s, Catch::Matchers::WithinAbs(0.4, 1e-12));
    // centroid inside bbox, Cauchy-Schwarz on the central moments
    CHECK(s.cx >= s.min_x);
    CHECK(s.cx <= s.max_x);
    CHECK(s.mu11 * s.mu11 <= s.mu20 * s.mu02 + 1e-9);
}

TEST_CASE("translation: centroid equivariant, central moments invariant") {
    std::mt19937 rng(19);
    std::uniform_int_distribution<int> shift(0, 20);
    for (int trial = 0; trial < 100; ++trial) {
        BinaryMask m = random_mask(16, 16, 0.4, rng);
        if (m.popcount() == 0) m.set(1, 2, true);
        const int dx = shift(rng), dy = shift(rng);
        const BinaryMask t = translate(m, dx, dy, 16 + 20, 16 + 20);
        const Moments a = compute_moments(m);
        const Moments b = compute_moments(t);
        CHECK_THAT(b.centroid_x(), Catch::Matchers::WithinAbs(a.centroid_x() + dx, 1e-9));
        CHECK_THAT(b.centroid_y(), Catch::Matchers::WithinAbs(a.centroid_y() + dy, 1e-9));
        CHECK_THAT(b.mu20, Catch::Matchers::WithinAbs(a.mu20, 1e-9));
        CHECK_THAT(b.mu02, Catch::Matchers::WithinAbs(a.mu02, 1e-9));
        CHECK_THAT(b.mu11, Catch::Matchers::WithinAbs(a.mu11, 1e-9));
    }
}

TEST_CASE("transposing a mask swaps mu20 and mu02 and keeps mu11") {
    std::mt19937 rng(23);
    BinaryMask m = random_mask(14, 9, 0.5, rng);
    if (m.popcount() == 0) m.set(2, 1, true);
    BinaryMask t(9, 14);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 14; ++x)
            if (m.get(x, y)) t.set(y, x, true);
    const Moments a = compute_moments(m);
    const Moments b = compute_moments(t);
    CHECK_THAT(b.mu20, Catch::Matchers::WithinAbs(a.mu02, 1e-9));
    CHECK_THAT(b.mu02, Catch::Matchers::WithinAbs(a.mu20, 1e-9));
    CHECK_THAT(b.mu11, Catch::Matchers::WithinAbs(a.mu11, 1e-9));
}
