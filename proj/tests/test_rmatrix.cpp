#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "braidkit/rmatrix.hpp"

using namespace braidkit;

namespace {

// Standard FRT gl2 R-matrix scaled by q, so that (PR - q^2)(PR + 1) = 0.
RMatrix gl2Seed() {
  QScalar q = QScalar::q();
  RMatrix R = RMatrix::zero(2);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) R.entry(i, i, k, k) = (i == k) ? q : QScalar::one();
  R.entry(0, 1, 1, 0) = q - q.inverse();
  return R.scaled(q);
}

}  // namespace

TEST_CASE("qybeResidual") {
  CHECK(qybeResidual(RMatrix::flip(2)).isZero());
  CHECK(qybeResidual(RMatrix::flip(3)).isZero());
  CHECK(qybeResidual(gl2Seed()).isZero());
  RMatrix bad = RMatrix::flip(2);
  bad.entry(0, 0, 0, 0) += QScalar::q();
  CHECK_FALSE(qybeResidual(bad).isZero());
}

TEST_CASE("heckeCheck") {
  auto hp = heckeCheck(RMatrix::flip(2));
  REQUIRE(hp.holds);
  CHECK(hp.alpha == QScalar::one());
  CHECK(hp.beta == -QScalar::one());

  auto hs = heckeCheck(gl2Seed());
  REQUIRE(hs.holds);
  CHECK(hs.alpha == QScalar::qPow(2));
  CHECK(hs.beta == -QScalar::one());

  // PR with more than two distinct eigenvalues is not Hecke.
  RMatrix d = RMatrix::zero(2);
  d.entry(0, 0, 0, 0) = QScalar::one();
  d.entry(0, 0, 1, 1) = QScalar::q();
  d.entry(1, 1, 0, 0) = QScalar::qPow(2);
  d.entry(1, 1, 1, 1) = QScalar::qPow(3);
  RMatrix nonHecke(2, RMatrix::flip(2).mat() * d.mat());
  CHECK_FALSE(heckeCheck(nonHecke).holds);
}

TEST_CASE("mixedRelationsResidual") {
  RMatrix P = RMatrix::flip(2);
  for (const Mat& r : mixedRelationsResidual(P, P)) CHECK(r.isZero());

  RMatrix R = gl2Seed();
  RMatrix Rp = R.scaled(QScalar::qPow(-2));  // quantum-plane companion
  for (const Mat& r : mixedRelationsResidual(Rp, R)) CHECK(r.isZero());

  // (R, R) violates (PR+1)(PR'-1) = 0 in the Hecke normalization.
  auto res = mixedRelationsResidual(R, R);
  CHECK_FALSE(res[3].isZero());

  CHECK_THROWS_AS(mixedRelationsResidual(RMatrix::flip(3), P), DimensionError);
}

TEST_CASE("secondInverse") {
  CHECK(secondInverse(RMatrix::identityR(2)) == RMatrix::identityR(2));
  RMatrix R = gl2Seed();
  RMatrix Rt = secondInverse(R);
  CHECK(secondInverse(Rt) == R);  // involution
  CHECK_FALSE(Rt == R);
}

TEST_CASE("thetaMatrices on trivial R") {
  auto th = thetaMatrices(RMatrix::identityR(3), QScalar::one());
  CHECK(th.v == Mat::identity(3));
  CHECK(th.u == Mat::identity(3));
  CHECK(th.lambdaNu == QScalar::one());
}

TEST_CASE("assembleBigMatrices from flip collapses to commutativity") {
  auto [Rp, R] = assembleBigMatrices(RMatrix::flip(2), BigLayout::MatrixMinkowski);
  CHECK(Rp == RMatrix::flip(4));
  CHECK(qybeResidual(R).isZero());
}

TEST_CASE("assembled big matrices are admissible braided-vector data") {
  RMatrix seed = gl2Seed();
  for (BigLayout layout : {BigLayout::MatrixEuclidean, BigLayout::MatrixMinkowski}) {
    auto [Rp, R] = assembleBigMatrices(seed, layout);
    CHECK(qybeResidual(R).isZero());
    for (const Mat& r : mixedRelationsResidual(Rp, R)) CHECK(r.isZero());
  }
  // A PR with more than two eigenvalues is rejected.
  RMatrix d = RMatrix::zero(2);
  d.entry(0, 0, 0, 0) = QScalar::one();
  d.entry(0, 0, 1, 1) = QScalar::q();
  d.entry(1, 1, 0, 0) = QScalar::qPow(2);
  d.entry(1, 1, 1, 1) = QScalar::qPow(3);
  RMatrix nonHecke(2, RMatrix::flip(2).mat() * d.mat());
  CHECK_THROWS_AS(assembleBigMatrices(nonHecke, BigLayout::MatrixEuclidean), NotHecke);
}

TEST_CASE("Euclidean degree-2 relation ideal has classical dimension 6") {
  auto [Rp, R] = assembleBigMatrices(gl2Seed(), BigLayout::MatrixEuclidean);
  // Relations x_I x_J - x_B x_A R'^A_I^B_J span the ideal; its rank at
  // degree 2 must be dim Lambda^2(C^4) = 6.
  Mat T = Mat::identity(16);
  for (int I = 0; I < 4; ++I)
    for (int J = 0; J < 4; ++J)
      for (int A = 0; A < 4; ++A)
        for (int B = 0; B < 4; ++B) T(I * 4 + J, B * 4 + A) -= Rp.entry(A, I, B, J);
  CHECK(T.rank() == 6);
}

TEST_CASE("theta matrices of the assembled big R match Prop 5.3 values") {
  for (BigLayout layout : {BigLayout::MatrixEuclidean, BigLayout::MatrixMinkowski}) {
    auto [Rp, R] = assembleBigMatrices(gl2Seed(), layout);
    auto th = thetaMatrices(R, QScalar::one());
    Mat v(4, 4), u(4, 4);
    v(0, 0) = QScalar::qPow(-4); v(1, 1) = QScalar::qPow(-6);
    v(2, 2) = QScalar::qPow(-2); v(3, 3) = QScalar::qPow(-4);
    u(0, 0) = QScalar::qPow(-4); u(1, 1) = QScalar::qPow(-2);
    u(2, 2) = QScalar::qPow(-6); u(3, 3) = QScalar::qPow(-4);
    CHECK(th.v == v);
    CHECK(th.u == u);
    CHECK(th.lambdaNu == QScalar::qPow(-4));
  }
}

TEST_CASE("solveMetricAndLambda on the big models") {
  QScalar q = QScalar::q();
  {
    auto [Rp, R] = assembleBigMatrices(gl2Seed(), BigLayout::MatrixEuclidean);
    auto m = solveMetricAndLambda(R);
    CHECK(m.lambdaSquared == QScalar::qPow(-2));
    Mat eta(4, 4);
    eta(0, 3) = QScalar::one();
    eta(1, 2) = -q.inverse();
    eta(2, 1) = -q;
    eta(3, 0) = QScalar::one();
    CHECK(m.eta == eta);
  }
  {
    auto [Rp, R] = assembleBigMatrices(gl2Seed(), BigLayout::MatrixMinkowski);
    auto m = solveMetricAndLambda(R);
    CHECK(m.lambdaSquared == QScalar::qPow(-2));
    Mat eta(4, 4);
    eta(0, 3) = QScalar::one();
    eta(1, 2) = -QScalar::qPow(-2);
    eta(2, 1) = -QScalar::one();
    eta(3, 0) = QScalar::one();
    eta(3, 3) = QScalar::one() - QScalar::qPow(-2);
    CHECK(m.eta == eta);
    // Classical Minkowski pairing at q = 1 (symmetric, signature pattern).
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        CHECK(m.eta(a, b).specializeAt(1) == m.eta(b, a).specializeAt(1));
  }
}

TEST_CASE("solveMetricAndLambda rejects a generic R") {
  RMatrix R = RMatrix::zero(2);
  int v = 1;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) R.entry(i, j, k, l) = QScalar::fromInteger((v += 3) % 17 + 1);
  CHECK_THROWS_AS(solveMetricAndLambda(R), NoMetric);
}

TEST_CASE("metric identities hold for the returned pair") {
  for (BigLayout layout : {BigLayout::MatrixEuclidean, BigLayout::MatrixMinkowski}) {
    auto [Rp, R] = assembleBigMatrices(gl2Seed(), layout);
    auto m = solveMetricAndLambda(R);
    RMatrix Rinv = R.inverse();
    int n = 4;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            QScalar lhs1, rhs1, lhs2, rhs2;
            for (int a = 0; a < n; ++a) {
              lhs1 += m.eta(i, a) * Rinv.entry(a, j, k, l);
              rhs1 += m.lambdaSquared * R.entry(a, i, k, l) * m.eta(a, j);
              lhs2 += m.eta(k, a) * R.entry(i, j, a, l);
              rhs2 += m.lambdaSquared.inverse() * Rinv.entry(i, j, a, k) * m.eta(a, l);
            }
            CHECK(lhs1 == rhs1);
            CHECK(lhs2 == rhs2);
          }
  }
}

TEST_CASE("JSON round trip") {
  RMatrix R = gl2Seed();
  nlohmann::json j = rmatrixToJson(R);
  RMatrix back = rmatrixFromJson(j);
  CHECK(back == R);

  nlohmann::json bad = {{"n", 2}};
  CHECK_THROWS_AS(rmatrixFromJson(bad), JsonFormatError);
  nlohmann::json oob = {{"n", 1},
                        {"entries", {{{"i", 0}, {"j", 0}, {"k", 1}, {"l", 0}, {"value", "1"}}}}};
  CHECK_THROWS_AS(rmatrixFromJson(oob), JsonFormatError);
}

TEST_CASE("classical limit of built-in R matrices is the flip braiding") {
  // In this entry convention the braiding acts by (i,j) -> sum R^a_i^b_j
  // (b,a); the identity multi-index matrix therefore realizes the classical
  // flip x_i x_j -> x_j x_i.
  for (BigLayout layout : {BigLayout::MatrixEuclidean, BigLayout::MatrixMinkowski}) {
    auto [Rp, R] = assembleBigMatrices(gl2Seed(), layout);
    for (const RMatrix* M : {&Rp, &R})
      for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
          CHECK(M->mat()(r, c).specializeAt(1) == (r == c ? 1 : 0));
  }
}
