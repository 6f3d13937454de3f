#pragma once

#include <stdexcept>
#include <string>

namespace qdilog {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inverting a truncated series whose lowest coefficient is not +-1.
struct NotAUnit : Error {
  using Error::Error;
};

/// Expanding a rational function whose denominator has no unit lowest term.
struct NotExpandable : Error {
  using Error::Error;
};

struct NegativeIndex : Error {
  using Error::Error;
};

/// The valuation form of a factor product is not positive definite on the
/// constraint lattice, so the set of contributing index tuples is not
/// certifiably finite.
struct NoCertificate : Error {
  using Error::Error;
};

/// A factor product mixes a generator with its inverse; the exact backend
/// cannot bound the number of contributing terms.
struct InfiniteSupport : Error {
  using Error::Error;
};

struct InvalidParams : Error {
  using Error::Error;
};

/// A rewrite step whose relation side is not present at the stated position.
struct NoMatch : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace qdilog
