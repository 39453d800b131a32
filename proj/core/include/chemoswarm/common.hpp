#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace chemo {

using Rng = std::mt19937_64;
using AgentId = std::uint32_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGenome : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// Raised when a statistic is undefined because an input has zero variance.
class DegenerateError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct FieldDims {
    int width = 600;
    int height = 600;

    friend bool operator==(const FieldDims&, const FieldDims&) = default;
};

/// Wraps a coordinate into [0, extent).
inline double wrap(double v, double extent) {
    double r = v - extent * std::floor(v / extent);
    // v slightly below zero can round up to exactly `extent`
    if (r >= extent) r = 0.0;
    return r;
}

inline Vec2 wrap(Vec2 p, FieldDims dims) {
    return {wrap(p.x, dims.width), wrap(p.y, dims.height)};
}

/// Minimum-image displacement on a ring of the given extent, in [-extent/2, extent/2).
inline double min_image(double d, double extent) {
    return d - extent * std::floor(d / extent + 0.5);
}

/// Periodic cell index of a continuous coordinate.
inline int cell_index(double v, int extent) {
    long long c = static_cast<long long>(std::floor(v)) % extent;
    if (c < 0) c += extent;
    return static_cast<int>(c);
}

} // namespace chemo
