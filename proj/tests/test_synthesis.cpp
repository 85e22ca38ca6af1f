// Synthesis constructions: centroid and centred contact sets, the
// displacement basis, its rank, and projection onto its span.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "immob/immob.hpp"
#include "support.hpp"

using namespace immob;

namespace {

Simplex unit_triangle() {
  return make_simplex({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
}

}  // namespace

TEST_CASE("triangle centroid contacts sit at the edge midpoints") {
  const Simplex s = unit_triangle();
  const ContactSet g = centroid_contacts(s);
  REQUIRE(support::max_abs_diff(g.point(0), Vec{0.5, 0.5}) < 1e-15);
  REQUIRE(support::max_abs_diff(g.point(1), Vec{0.0, 0.5}) < 1e-15);
  REQUIRE(support::max_abs_diff(g.point(2), Vec{0.5, 0.0}) < 1e-15);

  const NormalFan fan = normals_from_vertices(s);
  const PenetrationMatrix pm = penetration_matrix(fan, g);
  REQUIRE(support::max_abs_diff(pm.A, 0.5 * Mat::identity(2)) < 1e-15);
}

TEST_CASE("centroid penetration spectrum is flat at the volume") {
  Rng rng(411);
  const Simplex s = support::random_simplex(4, rng);
  const ImmobilizationVerdict v = immobilizes(s, centroid_contacts(s));
  REQUIRE(v.eigenvalues.size() == 4);
  for (double lam : v.eigenvalues)
    REQUIRE(lam == Catch::Approx(s.vol).epsilon(1e-11));
  REQUIRE(v.margin == Catch::Approx(1.0).epsilon(1e-11));
}

// ---------------------------------------------------------------------------
// Centred sets
// ---------------------------------------------------------------------------

TEST_CASE("face-weighted centre is feasible on the unit triangle") {
  const Simplex s = unit_triangle();
  const CentredContacts cc = centred_feasible_witness(s);

  // mu weights faces by size: (sqrt2, 1, 1) / (2 + sqrt2).
  const double denom = 2.0 + std::sqrt(2.0);
  REQUIRE(cc.witness.mu[0] == Catch::Approx(std::sqrt(2.0) / denom));
  REQUIRE(cc.witness.mu[1] == Catch::Approx(1.0 / denom));
  REQUIRE(cc.witness.mu[2] == Catch::Approx(1.0 / denom));
  REQUIRE(support::max_abs_diff(cc.witness.z,
                                Vec{1.0 / denom, 1.0 / denom}) < 1e-14);

  // Contacts land at z + t_i k_i with strictly positive offsets.
  const NormalFan fan = normals_from_vertices(s);
  for (int i = 0; i <= 2; ++i) {
    REQUIRE(cc.witness.t[i] > 0.0);
    Vec want = cc.witness.z;
    axpy(cc.witness.t[i], fan.normal(i), want);
    REQUIRE(support::max_abs_diff(cc.set.point(i), want) < 1e-13);
  }

  // A = sum_i t_i k_i k_i^T, symmetric positive definite.
  const PenetrationMatrix pm = penetration_matrix(fan, cc.set);
  Mat want(2, 2);
  for (int i = 0; i <= 2; ++i)
    add_outer(want, cc.witness.t[i], fan.normal(i), fan.normal(i));
  REQUIRE(support::max_abs_diff(pm.A, want) < 1e-13);
  REQUIRE(pm.eigenvalues[0] > 0.0);

  const ImmobilizationVerdict v = immobilizes(s, cc.set);
  REQUIRE(v.immobilizes);
}

TEST_CASE("face-weighted centre immobilizes across dimensions") {
  Rng rng(881);
  for (int n = 2; n <= 5; ++n) {
    const Simplex s = support::random_simplex(n, rng);
    const CentredContacts cc = centred_feasible_witness(s);
    REQUIRE(cc.set.strictly_interior);
    for (double t : cc.witness.t) REQUIRE(t > 0.0);
    const ImmobilizationVerdict v = immobilizes(s, cc.set);
    REQUIRE(v.immobilizes);
    REQUIRE(v.margin > 0.0);
  }
}

TEST_CASE("centre beyond a face is rejected with negative offsets") {
  const Simplex s = unit_triangle();
  const NormalFan fan = normals_from_vertices(s);
  // Far past the hypotenuse: the barycentric weight of vertex 0 goes
  // negative, and with it the offset t_0.
  Vec z = s.centroid();
  axpy(100.0, fan.normal(0), z);
  try {
    centred_contacts(s, z);
    FAIL("expected NotCentredFeasible");
  } catch (const NotCentredFeasible& e) {
    REQUIRE_FALSE(e.negative_offsets.empty());
    REQUIRE(e.negative_offsets[0] == 0);
  }
}

TEST_CASE("obtuse triangles exclude interior centres near sharp corners") {
  // The concurrency region of an obtuse triangle is a parallelogram that
  // does not cover the whole interior; a centre near a base vertex yields a
  // negative weight even though every offset stays positive.
  const Simplex s = make_simplex({{0.0, 0.0}, {4.0, 0.0}, {2.0, 0.4}});
  const Vec z = {0.2, 0.02};
  try {
    centred_contacts(s, z);
    FAIL("expected NotCentredFeasible");
  } catch (const NotCentredFeasible& e) {
    REQUIRE(e.negative_offsets.empty());
    REQUIRE_FALSE(e.negative_weights.empty());
    bool found = false;
    for (const auto& [i, j] : e.negative_weights)
      if (i == 1 && j == 0) found = true;
    REQUIRE(found);
  }
}

TEST_CASE("centred contacts reject a centre of the wrong dimension") {
  REQUIRE_THROWS_AS(centred_contacts(unit_triangle(), Vec{0.3, 0.3, 0.3}),
                    BadInput);
}

// ---------------------------------------------------------------------------
// Displacement basis
// ---------------------------------------------------------------------------

TEST_CASE("triangle tangent directions are the projected normals") {
  const Simplex s = unit_triangle();
  const NormalFan fan = normals_from_vertices(s);
  const DisplacementBasis b = displacement_basis(fan);

  REQUIRE(support::max_abs_diff(b.k_tangent[0][1], Vec{-0.5, 0.5}) < 1e-15);
  REQUIRE(support::max_abs_diff(b.k_tangent[1][0], Vec{0.0, 1.0}) < 1e-15);

  // Tangency: each direction is orthogonal to its own face normal.
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) {
      if (i == j) continue;
      REQUIRE(std::abs(dot(b.k_tangent[i][j], fan.normal(i))) < 1e-14);
    }

  REQUIRE(b.generators.size() == 3);
  REQUIRE(b.generators[0].i == 0);
  REQUIRE(b.generators[0].j == 1);
  REQUIRE(support::max_abs_diff(b.generators[0].dP.col(0), Vec{-0.5, 0.5}) <
          1e-15);
  REQUIRE(support::max_abs_diff(b.generators[0].dP.col(1), Vec{0.0, 1.0}) <
          1e-15);
  REQUIRE(norm2(b.generators[0].dP.col(2)) == 0.0);
}

TEST_CASE("displacement space has dimension n(n+1)/2 - 1") {
  Rng rng(555);
  for (int n = 2; n <= 4; ++n) {
    const Simplex s = support::random_simplex(n, rng);
    const DisplacementBasis b = displacement_basis(normals_from_vertices(s));
    const DisplacementRankReport rep = displacement_space_rank(b);
    REQUIRE(rep.generator_count == (n + 1) * n / 2);
    REQUIRE(rep.rank == n * (n + 1) / 2 - 1);
    // The unique dependency weights every generator equally.
    REQUIRE(rep.dependency_spread < 1e-8);
  }
}

// ---------------------------------------------------------------------------
// Applying displacements
// ---------------------------------------------------------------------------

TEST_CASE("zero displacement is the identity on contact sets") {
  const Simplex s = unit_triangle();
  const ContactSet g = centroid_contacts(s);
  const ContactSet moved = apply_displacement(s, g, {});
  REQUIRE(support::max_abs_diff(moved.P, g.P) < 1e-15);
  REQUIRE(support::max_abs_diff(moved.La, g.La) < 1e-14);
}

TEST_CASE("a single-pair displacement splits the flat spectrum") {
  const Simplex s = unit_triangle();
  const ContactSet g = centroid_contacts(s);
  const double t = 0.4;
  const ContactSet moved = apply_displacement(s, g, {{0, 1, t}});
  REQUIRE(moved.strictly_interior);

  // Eigenvalues split to vol +- t |k01| |k10| = 1/2 +- 0.4/sqrt(2).
  const double split = t * std::sqrt(0.5) * 1.0;
  const ImmobilizationVerdict v = immobilizes(s, moved);
  REQUIRE(v.symmetric);
  REQUIRE(v.eigenvalues[0] == Catch::Approx(0.5 - split).epsilon(1e-12));
  REQUIRE(v.eigenvalues[1] == Catch::Approx(0.5 + split).epsilon(1e-12));
  // The pair sum is the constant trace: margin stays exactly 1 for n = 2.
  REQUIRE(v.margin == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(v.immobilizes);
}

TEST_CASE("spectrum split matches the tangent norms in general position") {
  Rng rng(808);
  const Simplex s = support::random_simplex(3, rng);
  const NormalFan fan = normals_from_vertices(s);
  const DisplacementBasis b = displacement_basis(fan);

  double t = 0.1 * s.vol;
  for (int attempt = 0; attempt < 40; ++attempt) {
    try {
      const ContactSet moved =
          apply_displacement(s, centroid_contacts(s), {{1, 2, t}});
      const ImmobilizationVerdict v = immobilizes(s, moved);
      const double split =
          t * norm2(b.k_tangent[1][2]) * norm2(b.k_tangent[2][1]);
      REQUIRE(v.eigenvalues[0] == Catch::Approx(s.vol - split).epsilon(1e-8));
      REQUIRE(v.eigenvalues[1] == Catch::Approx(s.vol).epsilon(1e-8));
      REQUIRE(v.eigenvalues[2] == Catch::Approx(s.vol + split).epsilon(1e-8));
      return;
    } catch (const LeftFace&) {
      t *= 0.5;
    }
  }
  FAIL("no feasible step size found");
}

TEST_CASE("trace is invariant under in-span displacements") {
  Rng rng(909);
  for (int n = 2; n <= 4; ++n) {
    const Simplex s = support::random_simplex(n, rng);
    const ContactSet moved = support::random_displaced_contacts(s, rng);
    const NormalFan fan = normals_from_vertices(s);
    const PenetrationMatrix pm = penetration_matrix(fan, moved);
    REQUIRE(pm.symmetric);
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += pm.A(i, i);
    REQUIRE(tr == Catch::Approx(s.n * s.vol).epsilon(1e-9));
    // Centroids maximize the margin over the symmetric family.
    const ImmobilizationVerdict v = immobilizes(s, moved);
    REQUIRE(v.margin <= 1.0 + 1e-10);
  }
}

TEST_CASE("sliding past a face boundary raises LeftFace") {
  const Simplex s = unit_triangle();
  const ContactSet g = centroid_contacts(s);
  // Contact 1 moves along (0,1) from (0, 1/2) and exits its edge at
  // t = 1/2; contact 0 slides within the hypotenuse until t = 1.
  try {
    apply_displacement(s, g, {{0, 1, 0.75}});
    FAIL("expected LeftFace");
  } catch (const LeftFace& e) {
    REQUIRE(e.contact == 1);
    REQUIRE(e.worst == Catch::Approx(-0.25).epsilon(1e-12));
  }

  // Exactly at the corner: no throw, but the boundary is flagged.
  const ContactSet at_corner = apply_displacement(s, g, {{0, 1, 0.5}});
  REQUIRE_FALSE(at_corner.strictly_interior);
  REQUIRE(support::max_abs_diff(at_corner.point(1), Vec{0.0, 1.0}) < 1e-14);
}

TEST_CASE("bad generator indices are rejected") {
  const Simplex s = unit_triangle();
  const ContactSet g = centroid_contacts(s);
  REQUIRE_THROWS_AS(apply_displacement(s, g, {{0, 0, 0.1}}), BadInput);
  REQUIRE_THROWS_AS(apply_displacement(s, g, {{-1, 2, 0.1}}), BadInput);
  REQUIRE_THROWS_AS(apply_displacement(s, g, {{0, 3, 0.1}}), BadInput);
}

// ---------------------------------------------------------------------------
// Projection onto the generator span
// ---------------------------------------------------------------------------

TEST_CASE("in-span displacements project back onto the generators") {
  Rng rng(616);
  for (int n = 2; n <= 4; ++n) {
    const Simplex s = support::random_simplex(n, rng);
    const NormalFan fan = normals_from_vertices(s);
    const DisplacementBasis b = displacement_basis(fan);

    Mat dp(n, n + 1);
    const std::vector<DisplacementCoeff> coeffs =
        support::random_coeffs(n, rng, 0.3);
    for (const auto& dc : coeffs) {
      Vec ci = dp.col(dc.i);
      axpy(dc.t, b.k_tangent[dc.i][dc.j], ci);
      dp.set_col(dc.i, ci);
      Vec cj = dp.col(dc.j);
      axpy(dc.t, b.k_tangent[dc.j][dc.i], cj);
      dp.set_col(dc.j, cj);
    }

    const ProjectionCoords pc = symmetry_projection_coords(fan, dp);
    REQUIRE(pc.in_space);
    REQUIRE(pc.residual < 1e-10);
    REQUIRE(pc.wedge_defect < 1e-12);

    // Coefficients are only unique modulo the all-equal dependency, so
    // compare the reassembled displacement, not the coefficients.
    Mat rebuilt(n, n + 1);
    for (const auto& dc : pc.coeffs) {
      Vec ci = rebuilt.col(dc.i);
      axpy(dc.t, b.k_tangent[dc.i][dc.j], ci);
      rebuilt.set_col(dc.i, ci);
      Vec cj = rebuilt.col(dc.j);
      axpy(dc.t, b.k_tangent[dc.j][dc.i], cj);
      rebuilt.set_col(dc.j, cj);
    }
    REQUIRE(support::max_abs_diff(rebuilt, dp) < 1e-10);
  }
}

TEST_CASE("a lone tangent column is outside the symmetric span") {
  const Simplex s = unit_triangle();
  const NormalFan fan = normals_from_vertices(s);
  const DisplacementBasis b = displacement_basis(fan);

  Mat dp(2, 3);
  dp.set_col(1, b.k_tangent[1][0]);  // moves p_1 alone
  const ProjectionCoords pc = symmetry_projection_coords(fan, dp);
  REQUIRE_FALSE(pc.in_space);
  REQUIRE(pc.wedge_defect > 0.5);
}

TEST_CASE("non-tangent displacements are rejected outright") {
  const Simplex s = unit_triangle();
  const NormalFan fan = normals_from_vertices(s);
  Mat dp(2, 3);
  dp.set_col(0, fan.normal(0));  // normal, not tangent, to face 0
  REQUIRE_THROWS_AS(symmetry_projection_coords(fan, dp), BadInput);
}
