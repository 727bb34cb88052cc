// Command-line front end for the strobo library: scene synthesis,
// background extraction, segmentation masks, and the full stroboscopic
// composite pipeline.
//
// Exit codes: 0 success, 1 usage/config error, 2 input parse or I/O error,
// 3 no motion detected.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "strobo/strobo.hpp"

namespace fs = std::filesystem;

namespace {

strobo::Rgb parse_color(const std::string& s) {
    int v[3];
    char extra;
    if (std::sscanf(s.c_str(), "%d,%d,%d%c", &v[0], &v[1], &v[2], &extra) != 3)
        throw strobo::InvalidArgument("color must be R,G,B: " + s);
    for (int c : v)
        if (c < 0 || c > 255) throw strobo::InvalidArgument("color channel out of [0,255]: " + s);
    return {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]),
            static_cast<std::uint8_t>(v[2])};
}

// Shared pipeline flags; the raw strings are resolved into a validated
// PipelineConfig after parsing.
struct PipelineCli {
    strobo::PipelineConfig cfg;
    double sigma0 = 15.0;
    std::string threshold = "otsu";
    std::string target;
    std::string dmin;
    std::string config_path;
    CLI::Option* sigma0_opt = nullptr;
    CLI::Option* ct_opt = nullptr;
    CLI::Option* dmin_opt = nullptr;
    CLI::Option* target_opt = nullptr;
};

void add_pipeline_flags(CLI::App* sub, PipelineCli& p, const char* output_help) {
    sub->add_option("-i,--input", p.cfg.input,
                    "input video: .y4m file, or image-sequence pattern with one %d placeholder")
        ->required();
    sub->add_option("-o,--output", p.cfg.output, output_help);
    sub->add_option("--fps", p.cfg.fps_override,
                    "frame rate override for timestamps (0 = source rate; sequences default to 25)");
    sub->add_option("--downscale", p.cfg.downscale,
                    "integer box-downscale factor applied before modeling and segmentation");
    sub->add_option("--alpha", p.cfg.model.alpha, "model learning rate; history is 1/alpha frames");
    sub->add_option("--components", p.cfg.model.m_max, "max mixture components per pixel");
    p.sigma0_opt = sub->add_option("--sigma0", p.sigma0, "initial std dev of a new component");
    sub->add_option("--match-thresh", p.cfg.model.match_thresh,
                    "squared-Mahalanobis gate for sample ownership");
    p.ct_opt = sub->add_option("--ct", p.cfg.model.c_t,
                               "complexity-reduction prior weight (default 0.05*alpha)");
    sub->add_option("--cf", p.cfg.model.c_f, "maximum total weight of foreground components");
    sub->add_option("--cthr", p.cfg.model.c_thr, "background density acceptance threshold");
    sub->add_option("--threshold", p.threshold, "difference threshold: 'otsu' or 'fixed:N'");
    sub->add_option("--morph-open", p.cfg.morph_open_radius, "opening radius (0 disables)");
    sub->add_option("--morph-close", p.cfg.morph_close_radius, "closing radius (0 disables)");
    sub->add_option("--min-area", p.cfg.min_area_frac,
                    "min subject area as a fraction of (downscaled) frame pixels");
    p.dmin_opt = sub->add_option("--dmin", p.dmin,
                                 "strobe spacing in pixels, or 'auto' (1.5 x mean bbox diagonal)");
    p.target_opt =
        sub->add_option("--target", p.target, "desired strobe count range n_min:n_max (default 5:10)");
    sub->add_option("--debug-dir", p.cfg.debug_dir,
                    "directory for per-stage debug artifacts (background, masks, blobs.csv, "
                    "selection.txt, config.txt)");
    sub->add_option("--seed", p.cfg.seed, "seed recorded in the effective config");
    sub->add_option("--config", p.config_path, "key=value config file; command-line flags override");
    for (CLI::Option* opt : sub->get_options())
        if (opt->get_expected_min() > 0) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

strobo::PipelineConfig finish_config(PipelineCli& p) {
    strobo::PipelineConfig cfg = p.cfg;
    if (p.sigma0_opt->count() > 0) {
        if (p.sigma0 <= 0) throw strobo::InvalidArgument("sigma0 must be positive");
        cfg.model.sigma0_sq = p.sigma0 * p.sigma0;
    }
    cfg.model.sigma_max_sq = 5.0 * cfg.model.sigma0_sq;
    if (p.ct_opt->count() == 0) cfg.model.c_t = 0.05 * cfg.model.alpha;

    if (p.threshold == "otsu") {
        cfg.threshold_mode = strobo::ThresholdMode::kOtsu;
    } else if (p.threshold.rfind("fixed:", 0) == 0) {
        cfg.threshold_mode = strobo::ThresholdMode::kFixed;
        try {
            cfg.threshold_fixed = std::stoi(p.threshold.substr(6));
        } catch (const std::exception&) {
            throw strobo::InvalidArgument("bad threshold: " + p.threshold);
        }
    } else {
        throw strobo::InvalidArgument("threshold must be 'otsu' or 'fixed:N': " + p.threshold);
    }

    if (p.dmin_opt->count() > 0 && p.target_opt->count() > 0)
        throw strobo::InvalidArgument("--dmin and --target are mutually exclusive");
    if (p.dmin_opt->count() > 0) {
        if (p.dmin == "auto") {
            cfg.selection_mode = strobo::SelectionMode::kAutoDmin;
        } else {
            cfg.selection_mode = strobo::SelectionMode::kFixedDmin;
            try {
                cfg.d_min = std::stod(p.dmin);
            } catch (const std::exception&) {
                throw strobo::InvalidArgument("bad dmin: " + p.dmin);
            }
        }
    } else {
        cfg.selection_mode = strobo::SelectionMode::kTargetRange;
        if (p.target_opt->count() > 0) {
            char sep;
            if (std::sscanf(p.target.c_str(), "%d%c%d", &cfg.target_min, &sep, &cfg.target_max) !=
                    3 ||
                (sep != ':' && sep != ','))
                throw strobo::InvalidArgument("target must be n_min:n_max: " + p.target);
        }
    }
    cfg.validate();
    return cfg;
}

// Line-oriented key=value config with '#' comments. Keys are the long flag
// names without the leading dashes.
std::vector<std::pair<std::string, std::string>> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw strobo::InvalidArgument("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        const std::string stripped = strip(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw strobo::InvalidArgument("config line " + std::to_string(lineno) +
                                          " is not key=value: " + stripped);
        const std::string key = strip(stripped.substr(0, eq));
        const std::string value = strip(stripped.substr(eq + 1));
        if (key.empty())
            throw strobo::InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
        if (key == "config")
            throw strobo::InvalidArgument("config files cannot nest 'config' keys");
        entries.emplace_back(key, value);
    }
    return entries;
}

bool argv_mentions(const std::vector<std::string>& args, const std::string& flag) {
    for (const std::string& a : args)
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
}

// Splices config-file entries in as flags right after the subcommand, so
// later (real) command-line flags win via TakeLast.
std::vector<std::string> build_args(int argc, char** argv) {
    std::vector<std::string> user(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < user.size(); ++i) {
        if (user[i] == "--config" && i + 1 < user.size())
            config_path = user[i + 1];
        else if (user[i].rfind("--config=", 0) == 0)
            config_path = user[i].substr(9);
    }
    if (config_path.empty() || user.empty()) return user;

    const bool user_selects =
        argv_mentions(user, "--dmin") || argv_mentions(user, "--target");
    std::vector<std::string> merged;
    merged.push_back(user.front());  // subcommand token
    for (const auto& [key, value] : load_config_file(config_path)) {
        if (user_selects && (key == "dmin" || key == "target")) continue;
        merged.push_back("--" + key);
        merged.push_back(value);
    }
    merged.insert(merged.end(), user.begin() + 1, user.end());
    return merged;
}

void print_pass_summary(const strobo::PipelineResult& r) {
    std::fprintf(stderr, "pass 1: modeled %ld frames in %.2f s (%.1f fps)\n", r.timings.frames,
                 r.timings.model_seconds,
                 r.timings.model_seconds > 0 ? r.timings.frames / r.timings.model_seconds : 0.0);
    std::fprintf(stderr, "pass 2: tracked %zu/%ld frames in %.2f s (%.1f fps)\n",
                 r.track.entries.size(), r.timings.frames, r.timings.segment_seconds,
                 r.timings.segment_seconds > 0 ? r.timings.frames / r.timings.segment_seconds
                                               : 0.0);
}

int run_strobe(PipelineCli& p) {
    const strobo::PipelineConfig cfg = finish_config(p);
    const strobo::PipelineResult r = strobo::run_strobe_pipeline(cfg);
    print_pass_summary(r);
    if (r.exit_code == 3) {
        std::fprintf(stderr, "no motion detected: subject track is empty\n");
        return 3;
    }
    std::fprintf(stderr, "selected %zu strobes (d_min %.2f%s)\n", r.selection.count(),
                 r.selection.d_min_used, r.selection.short_of_target ? ", short of target" : "");
    std::printf("wrote %s\n", cfg.output.c_str());
    return 0;
}

int run_bgmodel(PipelineCli& p) {
    strobo::PipelineConfig cfg = finish_config(p);
    if (!cfg.debug_dir.empty()) {
        std::filesystem::create_directories(cfg.debug_dir);
        strobo::write_effective_config(cfg, (std::filesystem::path(cfg.debug_dir) / "config.txt").string());
    }
    auto src = strobo::open_frame_source(cfg.input, cfg.fps_override);
    strobo::PassTimings timings;
    strobo::BackgroundModel model = strobo::run_background_pass(*src, cfg, &timings);
    const strobo::Frame bg = strobo::background_image(model);
    strobo::write_image(bg, cfg.output);
    std::fprintf(stderr, "pass 1: modeled %ld frames in %.2f s (%.1f fps)\n", timings.frames,
                 timings.model_seconds,
                 timings.model_seconds > 0 ? timings.frames / timings.model_seconds : 0.0);
    std::printf("wrote %s\n", cfg.output.c_str());
    return 0;
}

int run_masks(PipelineCli& p) {
    strobo::PipelineConfig cfg = finish_config(p);
    // the output directory collects the same artifacts a debug run would
    cfg.debug_dir = cfg.output;
    std::filesystem::create_directories(cfg.debug_dir);
    strobo::write_effective_config(cfg,
                                   (std::filesystem::path(cfg.debug_dir) / "config.txt").string());
    auto src = strobo::open_frame_source(cfg.input, cfg.fps_override);
    strobo::PassTimings timings;
    strobo::BackgroundModel model = strobo::run_background_pass(*src, cfg, &timings);
    const strobo::Frame bg = strobo::background_image(model);
    strobo::write_png(bg, (std::filesystem::path(cfg.debug_dir) / "background.png").string());
    const strobo::Track track = strobo::run_segmentation_pass(*src, bg, cfg, &timings);
    std::fprintf(stderr, "pass 1: modeled %ld frames in %.2f s\n", timings.frames,
                 timings.model_seconds);
    std::fprintf(stderr, "pass 2: tracked %zu/%ld frames in %.2f s\n", track.entries.size(),
                 timings.frames, timings.segment_seconds);
    std::printf("wrote %zu masks to %s\n", static_cast<std::size_t>(timings.frames),
                cfg.debug_dir.c_str());
    return 0;
}

struct SynthCli {
    strobo::SceneSpec spec;
    std::string output = "scene.y4m";
    std::string masks;
    std::string bg = "gradient";
    std::string color0 = "32,40,48";
    std::string color1 = "96,112,128";
    std::string disk_color = "220,60,60";
    std::string traj;
    double fps = 25.0;
};

void add_synth_flags(CLI::App* sub, SynthCli& s) {
    sub->add_option("-o,--output", s.output,
                    "output video: .y4m path, or image pattern with %d (.ppm/.png)");
    sub->add_option("--masks", s.masks, "also write ground-truth masks to this %d pattern (.png)");
    sub->add_option("--width", s.spec.width, "frame width");
    sub->add_option("--height", s.spec.height, "frame height");
    sub->add_option("--frames", s.spec.n_frames, "frame count");
    sub->add_option("--bg", s.bg, "background: flat, gradient or checker");
    sub->add_option("--color0", s.color0, "flat color / gradient left / checker even");
    sub->add_option("--color1", s.color1, "gradient right / checker odd");
    sub->add_option("--checker-cell", s.spec.checker_cell, "checker cell size in pixels");
    sub->add_option("--radius", s.spec.disk_radius, "disk radius in pixels");
    sub->add_option("--disk-color", s.disk_color, "disk color R,G,B");
    sub->add_option("--traj", s.traj,
                    "trajectory: linear:x,y,vx,vy or parabolic:x,y,vx,vy,ax,ay (px/frame units)");
    sub->add_option("--noise-sigma", s.spec.noise_sigma, "per-channel Gaussian noise std dev");
    sub->add_option("--seed", s.spec.seed, "noise seed");
    sub->add_option("--fps", s.fps, "frame rate written to the Y4M header");
}

int run_synth(SynthCli& s) {
    if (s.bg == "flat")
        s.spec.background = strobo::BackgroundKind::kFlat;
    else if (s.bg == "gradient")
        s.spec.background = strobo::BackgroundKind::kGradient;
    else if (s.bg == "checker")
        s.spec.background = strobo::BackgroundKind::kChecker;
    else
        throw strobo::InvalidArgument("bg must be flat, gradient or checker: " + s.bg);
    s.spec.color0 = parse_color(s.color0);
    s.spec.color1 = parse_color(s.color1);
    s.spec.disk_color = parse_color(s.disk_color);

    if (!s.traj.empty()) {
        double v[6];
        if (std::sscanf(s.traj.c_str(), "linear:%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) == 4) {
            s.spec.trajectory = strobo::TrajectoryKind::kLinear;
            s.spec.start_x = v[0];
            s.spec.start_y = v[1];
            s.spec.vel_x = v[2];
            s.spec.vel_y = v[3];
        } else if (std::sscanf(s.traj.c_str(), "parabolic:%lf,%lf,%lf,%lf,%lf,%lf", &v[0], &v[1],
                               &v[2], &v[3], &v[4], &v[5]) == 6) {
            s.spec.trajectory = strobo::TrajectoryKind::kParabolic;
            s.spec.start_x = v[0];
            s.spec.start_y = v[1];
            s.spec.vel_x = v[2];
            s.spec.vel_y = v[3];
            s.spec.accel_x = v[4];
            s.spec.accel_y = v[5];
        } else {
            throw strobo::InvalidArgument("bad trajectory: " + s.traj);
        }
    }

    const auto ensure_parent = [](const std::string& path) {
        const fs::path parent = fs::path(path).parent_path();
        if (!parent.empty()) fs::create_directories(parent);
    };
    ensure_parent(s.output);
    if (!s.masks.empty()) ensure_parent(s.masks);

    if (s.output.find('%') != std::string::npos) {
        strobo::write_scene_images(s.spec, s.output);
    } else {
        if (s.fps <= 0) throw strobo::InvalidArgument("fps must be positive");
        int num = static_cast<int>(std::lround(s.fps));
        int den = 1;
        if (std::abs(s.fps - num) > 1e-9) {
            num = static_cast<int>(std::lround(s.fps * 1000));
            den = 1000;
        }
        strobo::write_scene_y4m(s.spec, s.output, num, den);
    }
    if (!s.masks.empty()) strobo::write_scene_masks(s.spec, s.masks);
    std::printf("wrote %d frames to %s\n", s.spec.n_frames, s.output.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stroboscopic composite images from fixed-camera video"};
    app.require_subcommand(1);

    PipelineCli strobe_cli, bgmodel_cli, masks_cli;
    SynthCli synth_cli;

    CLI::App* strobe =
        app.add_subcommand("strobe", "model background, track the subject, composite strobes");
    add_pipeline_flags(strobe, strobe_cli, "composite image path (.png or .ppm)");

    CLI::App* bgmodel = app.add_subcommand("bgmodel", "modeling pass only: emit the background image");
    add_pipeline_flags(bgmodel, bgmodel_cli, "background image path (.png or .ppm)");
    bgmodel_cli.cfg.output = "background.png";

    CLI::App* masks =
        app.add_subcommand("masks", "modeling + segmentation: emit per-frame subject masks");
    add_pipeline_flags(masks, masks_cli, "output directory for masks and blobs.csv");
    masks_cli.cfg.output = "masks";

    CLI::App* synth = app.add_subcommand("synth", "render a synthetic test scene with ground truth");
    add_synth_flags(synth, synth_cli);

    std::vector<std::string> args;
    try {
        args = build_args(argc, argv);
    } catch (const strobo::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const std::string& a : args) cargs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (strobe->parsed()) return run_strobe(strobe_cli);
        if (bgmodel->parsed()) return run_bgmodel(bgmodel_cli);
        if (masks->parsed()) return run_masks(masks_cli);
        if (synth->parsed()) return run_synth(synth_cli);
    } catch (const strobo::InvalidArgument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const strobo::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
