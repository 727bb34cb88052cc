#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "reference/gmm_reference.hpp"
#include "reference/scenes.hpp"
#include "strobo/gmm.hpp"
#include "strobo/synth.hpp"

using namespace strobo;

namespace {

refgmm::Params to_ref(const ModelParams& p) {
    refgmm::Params r;
    r.alpha = p.alpha;
    r.m_max = p.m_max;
    r.sigma0_sq = p.sigma0_sq;
    r.match_thresh = p.match_thresh;
    r.c_t = p.c_t;
    r.c_f = p.c_f;
    r.c_thr = p.c_thr;
    r.sigma_min_sq = p.sigma_min_sq;
    r.sigma_max_sq = p.sigma_max_sq;
    return r;
}

// Random sample schedule that exercises matching, creation, replacement
// and exact-hit paths.
Vec3 next_sample(std::mt19937& rng, const PixelMixture& mix) {
    std::uniform_real_distribution<double> uniform(0.0, 255.0);
    std::uniform_real_distribution<double> jitter(-4.0, 4.0);
    std::uniform_int_distribution<int> kind(0, 99);
    const int k = kind(rng);
    if (!mix.components.empty() && k < 60) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(mix.components.size()) - 1);
        const Vec3& mean = mix.components[static_cast<std::size_t>(pick(rng))].mean;
        return {mean[0] + jitter(rng), mean[1] + jitter(rng), mean[2] + jitter(rng)};
    }
    if (!mix.components.empty() && k < 70) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(mix.components.size()) - 1);
        return mix.components[static_cast<std::size_t>(pick(rng))].mean;  // exact hit
    }
    if (k < 75) {
        const double corner = k % 2 ? 0.0 : 255.0;
        return {corner, corner, corner};
    }
    return {uniform(rng), uniform(rng), uniform(rng)};
}

void require_matches_reference(const PixelMixture& mix, const refgmm::Mixture& ref) {
    REQUIRE(mix.components.size() == ref.components.size());
    const std::vector<int> order = refgmm::weight_order(ref);
    for (std::size_t i = 0; i < mix.components.size(); ++i) {
        const GmmComponent& a = mix.components[i];
        const refgmm::Component& b = ref.components[static_cast<std::size_t>(order[i])];
        REQUIRE_THAT(a.weight, Catch::Matchers::WithinAbs(b.weight, 1e-9));
        REQUIRE_THAT(a.variance, Catch::Matchers::WithinAbs(b.variance, 1e-9));
        for (int c = 0; c < 3; ++c)
            REQUIRE_THAT(a.mean[static_cast<std::size_t>(c)],
                         Catch::Matchers::WithinAbs(b.mean[c], 1e-9));
    }
}

void check_invariants(const PixelMixture& mix, const ModelParams& p) {
    REQUIRE(static_cast<int>(mix.components.size()) <= p.m_max);
    double sum = 0.0;
    for (std::size_t i = 0; i < mix.components.size(); ++i) {
        const GmmComponent& c = mix.components[i];
        REQUIRE(c.weight > 0.0);
        REQUIRE(c.variance >= p.sigma_min_sq);
        REQUIRE(c.variance <= p.sigma_max_sq);
        if (i > 0) REQUIRE(mix.components[i - 1].weight >= c.weight);
        sum += c.weight;
    }
    REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
}

void run_scripted_equivalence(const ModelParams& params, int steps, std::uint32_t seed) {
    PixelMixture mix;
    refgmm::Mixture ref;
    const refgmm::Params ref_params = to_ref(params);
    std::mt19937 rng(seed);
    for (int step = 0; step < steps; ++step) {
        const Vec3 x = next_sample(rng, mix);
        const double xr[3] = {x[0], x[1], x[2]};
        const bool fg_impl = update_pixel(mix, x, params);
        const bool fg_ref = refgmm::update(ref, xr, ref_params);
        REQUIRE(fg_impl == fg_ref);
        require_matches_reference(mix, ref);
        check_invariants(mix, params);
    }
}

}  // namespace

TEST_CASE("init_model builds an empty grid and validates arguments") {
    const BackgroundModel m = init_model(4, 3, ModelParams{});
    REQUIRE(m.grid.size() == 12);
    for (const PixelMixture& mix : m.grid) CHECK(mix.components.empty());
    CHECK(m.frames_seen == 0);
    CHECK_THROWS_AS(init_model(0, 3, ModelParams{}), InvalidArgument);
    CHECK_THROWS_AS(init_model(3, -1, ModelParams{}), InvalidArgument);
}

TEST_CASE("mixture_density") {
    const Vec3 x{10.0, 20.0, 30.0};
    SECTION("empty mixture has zero density") {
        CHECK(mixture_density(PixelMixture{}, x) == 0.0);
    }
    SECTION("a unit-variance component at its mean evaluates to the Gaussian peak") {
        PixelMixture m;
        m.components.push_back({1.0, x, 1.0});
        CHECK_THAT(mixture_density(m, x), Catch::Matchers::WithinAbs(0.063493635934241, 1e-12));
    }
    SECTION("two equal components at the sample sum back to the peak") {
        PixelMixture m;
        m.components.push_back({0.5, x, 1.0});
        m.components.push_back({0.5, x, 1.0});
        CHECK_THAT(mixture_density(m, x), Catch::Matchers::WithinAbs(0.063493635934241, 1e-12));
    }
}

TEST_CASE("classify_pixel") {
    ModelParams p;
    SECTION("empty mixture is foreground") {
        CHECK(classify_pixel(PixelMixture{}, Vec3{0, 0, 0}, p) == PixelClass::kForeground);
    }
    SECTION("a dominant component at the sample is background") {
        PixelMixture m;
        m.components.push_back({1.0, {50, 60, 70}, 1.0});
        p.c_thr = 0.01;  // below the 0.0635 peak
        CHECK(classify_pixel(m, Vec3{50, 60, 70}, p) == PixelClass::kBackground);
    }
    SECTION("the background prefix excludes light far-away components") {
        // pi = 0.9 at black already reaches 1 - c_f, so the second
        // component never contributes and the sample at (200,200,200)
        // sees ~zero background density.
        PixelMixture m;
        m.components.push_back({0.9, {0, 0, 0}, 100.0});
        m.components.push_back({0.1, {200, 200, 200}, 100.0});
        p.c_f = 0.1;
        CHECK(classify_pixel(m, Vec3{200, 200, 200}, p) == PixelClass::kForeground);
    }
    SECTION("classification is pure: repeated calls agree") {
        PixelMixture m;
        m.components.push_back({0.7, {10, 10, 10}, 30.0});
        m.components.push_back({0.3, {90, 90, 90}, 30.0});
        const Vec3 x{12, 9, 11};
        const PixelClass first = classify_pixel(m, x, p);
        for (int i = 0; i < 5; ++i) CHECK(classify_pixel(m, x, p) == first);
    }
}

TEST_CASE("update_pixel trivial recursions") {
    ModelParams p;
    SECTION("empty mixture: the sample becomes the single full-weight component") {
        PixelMixture m;
        const bool fg = update_pixel(m, Vec3{100, 150, 200}, p);
        CHECK(fg);  // pre-update mixture was empty
        REQUIRE(m.components.size() == 1);
        CHECK(m.components[0].weight == 1.0);
        CHECK(m.components[0].mean == Vec3{100, 150, 200});
        CHECK(m.components[0].variance == p.sigma0_sq);
    }
    SECTION("a component exactly at the sample is a fixed point for mean and weight") {
        PixelMixture m;
        m.components.push_back({1.0, {42, 43, 44}, 50.0});
        update_pixel(m, Vec3{42, 43, 44}, p);
        REQUIRE(m.components.size() == 1);
        CHECK(m.components[0].weight == 1.0);  // renormalized back to 1
        CHECK(m.components[0].mean == Vec3{42, 43, 44});
    }
    SECTION("an unmatched sample at capacity replaces the lightest component") {
        ModelParams tight;
        tight.m_max = 2;
        PixelMixture m;
        m.components.push_back({0.8, {0, 0, 0}, 4.0});
        m.components.push_back({0.2, {50, 50, 50}, 4.0});
        update_pixel(m, Vec3{200, 200, 200}, tight);
        REQUIRE(m.components.size() == 2);
        CHECK(m.components[0].mean == Vec3{0, 0, 0});
        CHECK(m.components[1].mean == Vec3{200, 200, 200});
        CHECK(m.components[1].variance == tight.sigma0_sq);
    }
}

TEST_CASE("scripted update sequences match the straight-line reference") {
    SECTION("default parameters, 1000 steps") { run_scripted_equivalence(ModelParams{}, 1000, 42); }
    SECTION("fast-learning parameters") {
        ModelParams p;
        p.alpha = 0.02;
        p.c_t = 0.05 * p.alpha;
        p.m_max = 3;
        run_scripted_equivalence(p, 1000, 43);
    }
    SECTION("coarse parameters") {
        ModelParams p;
        p.alpha = 0.1;
        p.c_t = 0.05 * p.alpha;
        p.m_max = 5;
        p.sigma0_sq = 100.0;
        p.sigma_max_sq = 500.0;
        run_scripted_equivalence(p, 1000, 44);
    }
}

TEST_CASE("monotone gating: moving a background sample toward the mean stays background") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0.0, 255.0);
    std::uniform_real_distribution<double> near(-12.0, 12.0);
    std::uniform_real_distribution<double> t01(0.0, 1.0);
    ModelParams p;
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        PixelMixture m;
        const Vec3 mean{u(rng), u(rng), u(rng)};
        m.components.push_back({0.95, mean, 64.0});
        m.components.push_back({0.05, {u(rng), u(rng), u(rng)}, 64.0});
        const Vec3 x{mean[0] + near(rng), mean[1] + near(rng), mean[2] + near(rng)};
        if (classify_pixel(m, x, p) != PixelClass::kBackground) continue;
        ++checked;
        const double t = t01(rng);
        const Vec3 closer{mean[0] + t * (x[0] - mean[0]), mean[1] + t * (x[1] - mean[1]),
                          mean[2] + t * (x[2] - mean[2])};
        CHECK(classify_pixel(m, closer, p) == PixelClass::kBackground);
    }
    CHECK(checked > 50);
}

TEST_CASE("process_frame") {
    ModelParams p;
    SECTION("dimension mismatch is rejected") {
        BackgroundModel m = init_model(4, 4, p);
        CHECK_THROWS_AS(process_frame(m, Frame(4, 5)), DimensionMismatch);
    }
    SECTION("the first frame of a fresh model is all foreground") {
        BackgroundModel m = init_model(6, 4, p);
        Frame f(6, 4);
        const BinaryMask mask = process_frame(m, f);
        CHECK(mask.popcount() == 24);
        CHECK(m.frames_seen == 1);
    }
    SECTION("identical frames converge to an all-background mask") {
        BackgroundModel m = init_model(8, 8, p);
        Frame f(8, 8);
        for (std::size_t i = 0; i < f.pixels.size(); i += 3) {
            f.pixels[i] = 90;
            f.pixels[i + 1] = 120;
            f.pixels[i + 2] = 150;
        }
        BinaryMask mask(8, 8);
        for (int k = 0; k < 100; ++k) mask = process_frame(m, f);
        CHECK(mask.popcount() == 0);
    }
    SECTION("pixel updates are order independent") {
        std::mt19937 rng(5);
        std::uniform_int_distribution<int> d(0, 255);
        ModelParams fast;
        fast.alpha = 0.05;
        fast.c_t = 0.05 * fast.alpha;
        BackgroundModel forward = init_model(5, 4, fast);
        BackgroundModel reversed = init_model(5, 4, fast);
        for (int k = 0; k < 30; ++k) {
            Frame f(5, 4);
            for (auto& v : f.pixels) v = static_cast<std::uint8_t>(d(rng));
            const BinaryMask mask = process_frame(forward, f);
            // reversed order, updating mixtures by hand
            BinaryMask mask2(5, 4);
            for (int y = 3; y >= 0; --y)
                for (int x = 4; x >= 0; --x) {
                    PixelMixture& mix = reversed.grid[static_cast<std::size_t>(y) * 5 + x];
                    if (update_pixel(mix, to_vec3(f.at(x, y)), fast)) mask2.set(x, y, true);
                }
            ++reversed.frames_seen;
            REQUIRE(mask == mask2);
        }
        for (std::size_t i = 0; i < forward.grid.size(); ++i) {
            REQUIRE(forward.grid[i].components.size() == reversed.grid[i].components.size());
            for (std::size_t c = 0; c < forward.grid[i].components.size(); ++c) {
                CHECK(forward.grid[i].components[c].weight ==
                      reversed.grid[i].components[c].weight);
                CHECK(forward.grid[i].components[c].mean == reversed.grid[i].components[c].mean);
            }
        }
    }
}

TEST_CASE("background_image") {
    ModelParams p;
    SECTION("fresh model has no background") {
        const BackgroundModel m = init_model(2, 2, p);
        CHECK_THROWS_AS(background_image(m), ModelEmpty);
    }
    SECTION("constant video yields the constant background") {
        BackgroundModel m = init_model(4, 4, p);
        Frame f(4, 4);
        for (std::size_t i = 0; i < f.pixels.size(); i += 3) {
            f.pixels[i] = 31;
            f.pixels[i + 1] = 99;
            f.pixels[i + 2] = 202;
        }
        for (int k = 0; k < 20; ++k) process_frame(m, f);
        const Frame bg = background_image(m);
        for (std::size_t i = 0; i < bg.pixels.size(); i += 3) {
            CHECK(std::abs(bg.pixels[i] - 31) <= 1);
            CHECK(std::abs(bg.pixels[i + 1] - 99) <= 1);
            CHECK(std::abs(bg.pixels[i + 2] - 202) <= 1);
        }
    }
}

TEST_CASE("background recovery on the synthetic disk scene") {
    // The disk occupies any given pixel for < 20% of the clip, so the
    // learned background must match the clean plate closely.
    const SceneSpec spec = scenes::standard(2.0);
    BackgroundModel model = init_model(spec.width, spec.height, scenes::eval_model_params());
    for (int k = 0; k < spec.n_frames; ++k) process_frame(model, render_frame(spec, k));
    const Frame bg = background_image(model);
    const Frame truth = true_background(spec);
    double abs_err = 0.0;
    for (std::size_t i = 0; i < bg.pixels.size(); ++i)
        abs_err += std::abs(static_cast<double>(bg.pixels[i]) - truth.pixels[i]);
    const double mae = abs_err / static_cast<double>(bg.pixels.size());
    CHECK(mae <= 2.0);
}
