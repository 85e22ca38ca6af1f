#pragma once

// Built-in reference configuration: a 4-simplex with rational data whose
// penetration matrix is known in closed form.  The contact set is symmetric
// but fails the pair-sum criterion (6.8 - 13.6 < 0), which makes it the
// canonical regression case for both the algebra and the falsifier: five
// contacts, one per face, that do NOT immobilize even though no finite set
// of translations alone would reveal it.

#include <vector>

#include "immob/contact.hpp"
#include "immob/mat.hpp"
#include "immob/simplex.hpp"

namespace immob {

struct ReferenceCase {
  Simplex simplex;
  ContactSet contacts;
  Mat expected_a;                     // diag(238/5, 136/5, 34/5, -68/5), in the published scale
  std::vector<Vec> expected_normals;  // published outward normals (scale x canonical)
  double expected_vol = 17.0 / 6.0;   // det(V)/n! with det(V) = 68
  // The published data is uniformly (n-1)! = 6 times the |k_i| = vol(F_i)
  // normalization used everywhere else in this library: the published normals
  // satisfy K^T V = -det(V) I rather than -n vol(Delta) I, so |k_i| equals the
  // Gram-determinant root of face i, not the face volume.  Multiply canonical
  // quantities by `published_scale` before comparing against expected_a or
  // expected_normals.  Scale-invariant quantities (margin -1/5, verdicts,
  // eigenvalue signs) need no adjustment.
  double published_scale = 6.0;
};

inline ReferenceCase reference_case(const Tolerances& tol = {}) {
  ReferenceCase rc;
  rc.simplex = make_simplex(
      {{-5.0 / 12.0, -1.0, 0.0, -3.0},
       {-83.0 / 36.0, 0.0, 0.0, 1.0},
       {1.0, 1.0, 0.0, -3.0},
       {35.0 / 18.0, 0.0, -1.0, 1.0},
       {35.0 / 18.0, 0.0, 1.0, 1.0}},
      tol);

  // Barycentric weights of the five contacts, one column per contact.
  const double la[5][5] = {
      {0.0, 1.0 / 10.0, 2.0 / 5.0, 1.0 / 10.0, 1.0 / 10.0},
      {3.0 / 10.0, 0.0, 2.0 / 5.0, 7.0 / 10.0, 7.0 / 10.0},
      {2.0 / 5.0, 1.0 / 10.0, 0.0, 1.0 / 10.0, 1.0 / 10.0},
      {3.0 / 20.0, 2.0 / 5.0, 1.0 / 10.0, 0.0, 1.0 / 10.0},
      {3.0 / 20.0, 2.0 / 5.0, 1.0 / 10.0, 1.0 / 10.0, 0.0}};
  Mat weights(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) weights(i, j) = la[i][j];
  if (rc.simplex.reoriented) {
    // Vertex labels 0 and 1 were transposed, so rows (vertices) and columns
    // (faces) of the weight matrix transpose with them.
    for (int j = 0; j < 5; ++j) std::swap(weights(0, j), weights(1, j));
    for (int i = 0; i < 5; ++i) std::swap(weights(i, 0), weights(i, 1));
  }
  rc.contacts = contacts_from_barycentric(rc.simplex, weights, tol);

  rc.expected_a = Mat(4, 4);
  rc.expected_a(0, 0) = 238.0 / 5.0;
  rc.expected_a(1, 1) = 136.0 / 5.0;
  rc.expected_a(2, 2) = 34.0 / 5.0;
  rc.expected_a(3, 3) = -68.0 / 5.0;

  rc.expected_normals = {
      {0.0, 34.0, 0.0, 17.0 / 2.0},
      {16.0, -34.0 / 3.0, 0.0, -119.0 / 18.0},
      {0.0, -34.0, 0.0, 17.0 / 2.0},
      {-8.0, 17.0 / 3.0, 34.0, -187.0 / 36.0},
      {-8.0, 17.0 / 3.0, -34.0, -187.0 / 36.0}};
  if (rc.simplex.reoriented)
    std::swap(rc.expected_normals[0], rc.expected_normals[1]);
  return rc;
}

}  // namespace immob
