#pragma once

#include <stdexcept>
#include <string>

namespace bpb {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Vector/operator shapes disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A nonzero vector was required.
class ZeroVectorError : public Error {
public:
    using Error::Error;
};

/// Input outside the operation's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Requested brute-force computation is too large.
class ComplexityError : public Error {
public:
    using Error::Error;
};

/// The range space's convexity modulus lower bound is not positive.
class NotUniformlyConvexError : public Error {
public:
    using Error::Error;
};

/// ||T f0|| does not clear the correction gate.
class HypothesisNotMet : public Error {
public:
    using Error::Error;
};

/// The norm oracle did not converge within its sweep budget.
class OracleNotConverged : public Error {
public:
    using Error::Error;
};

/// Malformed input file; message names the offending location.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace bpb
