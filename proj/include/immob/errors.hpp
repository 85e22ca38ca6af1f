#pragma once

// Error taxonomy and the tolerance knobs shared by all modules.
//
// Every tolerance is relative to a stated scale (noted next to each field);
// the defaults are what the test suite and the CLI pin.  Callers that work
// with unusually scaled data can pass their own Tolerances.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace immob {

struct Tolerances {
  // Simplex degeneracy: |det V| relative to the product of column norms.
  double degeneracy = 1e-12;
  // Symmetry defect of the penetration matrix, relative to max |A_ij|.
  double sym = 1e-9;
  // Almost-positive-definite margin, relative to the spectral norm of A.
  double apd = 1e-10;
  // Strict interiority floor on barycentric weights.
  double interior = 1e-10;
  // Hyperplane membership residual, relative to |k_i| * (1 + |p_i|).
  double plane = 1e-9;
  // Singular value cutoff for rank decisions, relative to sigma_max.
  double svd_rank = 1e-10;
  // Homogeneous-row and sum residuals when validating fans, relative.
  double fan_consistency = 1e-8;
  // In-span classification for displacement projections, relative to |rhs|.
  double span_residual = 1e-8;
  // Residual allowed by the block-factorization cross-check, relative.
  double spectral_link = 1e-9;
  // Orthogonality drift allowed on a rotation before polar correction.
  double orthonormal = 1e-12;
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Simplex construction: vertices affinely dependent (volume ~ 0).
class DegenerateSimplex : public Error {
 public:
  explicit DegenerateSimplex(const std::string& what) : Error(what) {}
};

// A normal set fails the leave-one-out independence / sign conditions,
// or a homogeneous normal matrix is inconsistent with any simplex.
class InvalidFan : public Error {
 public:
  explicit InvalidFan(const std::string& what) : Error(what) {}
};

// det K has the wrong sign for the dimension, so no real volume scale exists.
class NonPositiveRadicand : public Error {
 public:
  explicit NonPositiveRadicand(const std::string& what) : Error(what) {}
};

// Rescaling a fan against contact points produced sum(kappa) >= 0, which
// contradicts outward orientation.
class NonNegativeKappaSum : public Error {
 public:
  explicit NonNegativeKappaSum(const std::string& what) : Error(what) {}
};

// A supposed contact point does not lie on its face's hyperplane.
class OffFace : public Error {
 public:
  OffFace(int contact, double residual, const std::string& what)
      : Error(what), contact(contact), residual(residual) {}
  int contact;
  double residual;
};

// A barycentric weight matrix is not column-stochastic with zero diagonal.
class BadStochastic : public Error {
 public:
  explicit BadStochastic(const std::string& what) : Error(what) {}
};

// Asked a symmetric-only question about an asymmetric penetration matrix.
class NotSymmetric : public Error {
 public:
  explicit NotSymmetric(const std::string& what) : Error(what) {}
};

// The centred construction around the requested point is infeasible.
class NotCentredFeasible : public Error {
 public:
  NotCentredFeasible(std::vector<std::pair<int, int>> negative_weights,
                     std::vector<int> negative_offsets, const std::string& what)
      : Error(what),
        negative_weights(std::move(negative_weights)),
        negative_offsets(std::move(negative_offsets)) {}
  std::vector<std::pair<int, int>> negative_weights;  // (i, j) with lambda_ij <= 0
  std::vector<int> negative_offsets;                  // j with t_j <= 0
};

// A displacement pushed a contact outside its face.
class LeftFace : public Error {
 public:
  LeftFace(int contact, double worst, const std::string& what)
      : Error(what), contact(contact), worst(worst) {}
  int contact;
  double worst;  // most negative barycentric entry of the displaced column
};

// Inputs that are structurally wrong for the requested operation.
class BadInput : public Error {
 public:
  explicit BadInput(const std::string& what) : Error(what) {}
};

// Asked for the penetrating contact of a zero translation.
class ZeroTranslation : public Error {
 public:
  explicit ZeroTranslation(const std::string& what) : Error(what) {}
};

// An internal cross-check that should be unreachable fired; indicates a bug,
// not bad input.
class InternalCheckFailure : public Error {
 public:
  explicit InternalCheckFailure(const std::string& what) : Error(what) {}
};

// Malformed JSON or wrong shapes during parsing.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace immob
