#pragma once

#include <stdexcept>
#include <string>

namespace mpdn {

// Data/file problems: bad paths, malformed formats, mismatched shapes. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Image file decode/encode failures, with a machine-checkable kind.
class ImageIoError : public DataError {
public:
    enum class Kind { unreadable, unwritable, multi_channel, bad_depth, bad_format, truncated };

    ImageIoError(Kind k, const std::string& msg) : DataError(msg), kind(k) {}
    Kind kind;
};

// Checkpoint decode failures.
class CheckpointError : public DataError {
public:
    enum class Kind { bad_magic, bad_version, truncated, bad_crc };

    CheckpointError(Kind k, const std::string& msg) : DataError(msg), kind(k) {}
    Kind kind;
};

// Numeric checks that failed (gradient verification and the like). CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mpdn
