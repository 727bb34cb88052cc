#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "strobo/image_io.hpp"
#include "strobo/y4m.hpp"

namespace strobo {

// Sequential, resettable stream of frames. The two-pass pipeline needs to
// walk the input more than once, so every source must be file-backed.
// A source is a state machine owned by one logical thread; the frames it
// produces are immutable values.
class FrameSource {
   public:
    virtual ~FrameSource() = default;
    virtual std::optional<Frame> next() = 0;
    virtual void reset() = 0;
    virtual int width() const = 0;
    virtual int height() const = 0;
    virtual double fps() const = 0;
};

class Y4mFileSource final : public FrameSource {
   public:
    explicit Y4mFileSource(const std::string& path, double fps_override = 0.0)
        : path_(path), fps_override_(fps_override), in_(path, std::ios::binary) {
        if (!in_) throw IoFailure("cannot open: " + path);
        header_ = parse_y4m_header(in_);
        data_start_ = in_.tellg();
    }

    std::optional<Frame> next() override {
        auto f = read_y4m_frame(in_, header_);
        if (!f) return std::nullopt;
        f->frame_index = next_index_;
        f->timestamp_s =
            fps_override_ > 0 ? next_index_ / fps_override_ : header_.timestamp(next_index_);
        ++next_index_;
        return f;
    }

    void reset() override {
        in_.clear();
        in_.seekg(data_start_);
        if (!in_) throw IoFailure("cannot rewind: " + path_);
        next_index_ = 0;
    }

    int width() const override { return header_.width; }
    int height() const override { return header_.height; }
    double fps() const override { return fps_override_ > 0 ? fps_override_ : header_.fps(); }
    const VideoHeader& header() const { return header_; }

   private:
    std::string path_;
    double fps_override_;
    std::ifstream in_;
    VideoHeader header_;
    std::ifstream::pos_type data_start_;
    long next_index_ = 0;
};

namespace detail {

// A sequence pattern holds exactly one %d or %0<N>d placeholder.
struct SequencePattern {
    std::string prefix;
    std::string suffix;
    int pad = 0;  // 0 = no zero padding

    static SequencePattern parse(const std::string& pattern) {
        const auto pct = pattern.find('%');
        if (pct == std::string::npos || pattern.find('%', pct + 1) != std::string::npos)
            throw InvalidArgument("pattern needs exactly one %d placeholder: " + pattern);
        SequencePattern p;
        p.prefix = pattern.substr(0, pct);
        std::size_t i = pct + 1;
        if (i < pattern.size() && pattern[i] == '0') {
            ++i;
            std::size_t start = i;
            while (i < pattern.size() && pattern[i] >= '0' && pattern[i] <= '9') ++i;
            if (start == i) throw InvalidArgument("bad placeholder in pattern: " + pattern);
            p.pad = std::stoi(pattern.substr(start, i - start));
        }
        if (i >= pattern.size() || pattern[i] != 'd')
            throw InvalidArgument("pattern placeholder must be %d or %0<N>d: " + pattern);
        p.suffix = pattern.substr(i + 1);
        return p;
    }

    std::string format(long index) const {
        std::string digits = std::to_string(index);
        if (static_cast<int>(digits.size()) < pad)
            digits.insert(0, static_cast<std::size_t>(pad) - digits.size(), '0');
        return prefix + digits + suffix;
    }

    // Extracts the index from a candidate path, or -1 if it cannot be a
    // rendering of this pattern.
    long match(const std::string& path) const {
        if (path.size() <= prefix.size() + suffix.size()) return -1;
        if (path.compare(0, prefix.size(), prefix) != 0) return -1;
        if (path.compare(path.size() - suffix.size(), suffix.size(), suffix) != 0) return -1;
        const std::string digits =
            path.substr(prefix.size(), path.size() - prefix.size() - suffix.size());
        for (char c : digits)
            if (c < '0' || c > '9') return -1;
        if (digits.empty() || digits.size() > 12) return -1;
        const long v = std::stol(digits);
        return format(v) == path ? v : -1;
    }
};

}  // namespace detail

// Reads PPM/PNG files matching a printf-style pattern ("frames/f_%04d.png").
// Frames come from the maximal run of consecutive file indices starting at
// the smallest one present; emitted frame_index is the 0-based position in
// that run, with timestamps synthesized from the supplied fps.
class ImageSequenceSource final : public FrameSource {
   public:
    explicit ImageSequenceSource(const std::string& pattern, double fps = 25.0)
        : pattern_(detail::SequencePattern::parse(pattern)), fps_(fps) {
        if (fps <= 0) throw InvalidArgument("fps must be positive");
        namespace fs = std::filesystem;
        const fs::path sample = pattern_.format(0);
        const fs::path dir = sample.parent_path().empty() ? "." : sample.parent_path();
        long first = -1;
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(dir, ec)) {
            const long idx = pattern_.match(entry.path().string());
            if (idx >= 0 && (first < 0 || idx < first)) first = idx;
        }
        if (ec || first < 0) throw NoFramesFound("no files match pattern: " + pattern);
        for (long i = first; fs::exists(pattern_.format(i)); ++i) paths_.push_back(pattern_.format(i));

        const Frame head = load(0);
        width_ = head.width;
        height_ = head.height;
    }

    std::optional<Frame> next() override {
        if (pos_ >= static_cast<long>(paths_.size())) return std::nullopt;
        Frame f = load(pos_);
        if (f.width != width_ || f.height != height_)
            throw DimensionMismatch("frame size changes at " + paths_[pos_]);
        f.frame_index = pos_;
        f.timestamp_s = pos_ / fps_;
        ++pos_;
        return f;
    }

    void reset() override { pos_ = 0; }
    int width() const override { return width_; }
    int height() const override { return height_; }
    double fps() const override { return fps_; }
    long frame_count() const { return static_cast<long>(paths_.size()); }

   private:
    Frame load(long i) const { return read_image(paths_[static_cast<std::size_t>(i)]); }

    detail::SequencePattern pattern_;
    double fps_;
    std::vector<std::string> paths_;
    int width_ = 0;
    int height_ = 0;
    long pos_ = 0;
};

// Inputs containing a % placeholder are image sequences; anything else is
// read as Y4M.
inline std::unique_ptr<FrameSource> open_frame_source(const std::string& input,
                                                      double fps_override = 0.0) {
    if (input.find('%') != std::string::npos)
        return std::make_unique<ImageSequenceSource>(input,
                                                     fps_override > 0 ? fps_override : 25.0);
    return std::make_unique<Y4mFileSource>(input, fps_override);
}

}  // namespace strobo
