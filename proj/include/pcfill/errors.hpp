// pcfill - exemplar-based hole filling for 3D point cloud geometry
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pcfill {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cloud too small (or empty) for the requested operation.
struct DegenerateCloud : Error {
  using Error::Error;
};

/// Two points coincide exactly; octree subdivision cannot separate them.
struct DuplicatePoints : Error {
  using Error::Error;
};

/// Octree hit the hard depth cap before isolating every point.
struct DepthCapExceeded : Error {
  using Error::Error;
};

/// k exceeds the number of available points.
struct InsufficientPoints : Error {
  using Error::Error;
};

/// A point set that must be nonempty is empty.
struct EmptySet : Error {
  using Error::Error;
};

/// Candidate enumeration produced no usable cube for a template.
struct NoCandidates : Error {
  using Error::Error;
};

/// Point configuration leaves the rigid alignment underdetermined.
struct DegenerateGeometry : Error {
  using Error::Error;
};

/// Normal equations are singular (only reachable with mu forced to 0).
struct SingularSystem : Error {
  using Error::Error;
};

/// File could not be read, parsed or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace pcfill
