#pragma once

#include <stdexcept>
#include <string>

namespace wmkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or violated precondition (dimensions, ranges, mismatched shapes).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Unreadable/unwritable file or malformed netpbm content.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Payload or watermark does not fit in the carrier.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Carrier does not hold a valid framed payload.
class PayloadError : public Error {
public:
    using Error::Error;
};

} // namespace wmkit
