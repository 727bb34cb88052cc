#pragma once

#include <stdexcept>
#include <string>

namespace strobo {

// Base class for everything this library throws. Subclasses name the
// failure so callers can map them to exit codes without string matching.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidArgument : Error {
    using Error::Error;
};
struct IoFailure : Error {
    using Error::Error;
};

// video / image ingestion
struct MalformedHeader : Error {
    using Error::Error;
};
struct UnsupportedChroma : Error {
    using Error::Error;
};
struct TruncatedFrame : Error {
    using Error::Error;
};
struct MissingFrameMarker : Error {
    using Error::Error;
};
struct NoFramesFound : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct UnsupportedPixelFormat : Error {
    using Error::Error;
};

// analysis stages
struct EmptyHistogram : Error {
    using Error::Error;
};
struct EmptyMask : Error {
    using Error::Error;
};
struct ModelEmpty : Error {
    using Error::Error;
};
struct MissingFrame : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};

}  // namespace strobo
