// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hexdiv {

/// Base class for all hexdiv failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPositiveJacobian : Error {
  using Error::Error;
};
struct NonFlatFace : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct DegenerateElement : Error {
  using Error::Error;
};
struct DegenerateCorner : Error {
  using Error::Error;
};
struct RankDeficiency : Error {
  using Error::Error;
};
struct SingularCnuMatrix : Error {
  using Error::Error;
};
struct SupplementSelectionFailed : Error {
  using Error::Error;
};
struct SingularDofMatrix : Error {
  using Error::Error;
};
struct OddSubdivision : Error {
  using Error::Error;
};
struct NonConforming : Error {
  using Error::Error;
};
struct ElementBuildFailure : Error {
  using Error::Error;
};
struct QuadratureOrderTooLow : Error {
  using Error::Error;
};
struct SolverDivergence : Error {
  using Error::Error;
};
struct SingularLocalBlock : Error {
  using Error::Error;
};

}  // namespace hexdiv
