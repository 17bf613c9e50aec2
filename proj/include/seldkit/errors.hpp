#pragma once

#include <stdexcept>
#include <string>

namespace seldkit {

/// Thrown when a direction is requested from a (near-)zero vector.
class ZeroVectorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class EmptyClipError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SampleRateMismatchError : public std::runtime_error {
public:
    SampleRateMismatchError(int expected_hz, int got_hz)
        : std::runtime_error("sample rate mismatch: expected " + std::to_string(expected_hz) +
                             " Hz, got " + std::to_string(got_hz) + " Hz") {}
};

class SilentClipError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotFoaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GeometryMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleSceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TooManySourcesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SilentSegmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, long line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

/// Well-formed field whose value is outside its documented range.
class RangeError : public std::runtime_error {
public:
    RangeError(const std::string& file, long line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

}  // namespace seldkit
