#include <catch2/catch_amalgamated.hpp>

#include "braidkit/model.hpp"

using namespace braidkit;

TEST_CASE("registry") {
  CHECK(modelNames() == std::vector<std::string>{"quantum_plane:2", "quantum_plane:3",
                                                 "q_euclidean_4", "q_minkowski_4"});
  CHECK_THROWS_AS(makeModel("quantum_plane:4"), UnknownModel);
  CHECK_THROWS_AS(makeModel(""), UnknownModel);
}

TEST_CASE("quantum planes") {
  for (int n : {2, 3}) {
    ModelSpec m = makeModel("quantum_plane:" + std::to_string(n));
    CHECK(m.n == n);
    CHECK(m.layout == Layout::Vector);
    CHECK(m.Rprime == m.R.scaled(QScalar::qPow(-2)));
    // lambda = q^{-(n+1)/n}
    CHECK(m.lambda == QScalar::qPow(-(n + 1), n));
    // construction already ran the validation battery; spot-check anyway
    CHECK(qybeResidual(m.R).isZero());
  }
  // The n=2 plane carries the epsilon-tensor metric; the n=3 plane has none.
  ModelSpec p2 = makeModel("quantum_plane:2");
  REQUIRE(p2.hasMetric);
  CHECK(p2.starType == StarType::RealTypeI);
  CHECK(p2.lambdaSquared == QScalar::qPow(-3));
  ModelSpec p3 = makeModel("quantum_plane:3");
  CHECK_FALSE(p3.hasMetric);
  CHECK(p3.starType == StarType::None);
}

TEST_CASE("4-dimensional models") {
  for (const char* name : {"q_euclidean_4", "q_minkowski_4"}) {
    ModelSpec m = makeModel(name);
    CHECK(m.n == 4);
    REQUIRE(m.hasMetric);
    CHECK(m.lambda == QScalar::qPow(-1));
    CHECK(m.lambdaSquared == QScalar::qPow(-2));
    REQUIRE(m.hasRibbon);
    CHECK(m.lambdaNu == QScalar::qPow(-4));
    CHECK(m.seed.n() == 2);
    CHECK(m.eta * m.etaInv.transpose() == Mat::identity(4));
  }
  ModelSpec e = makeModel("q_euclidean_4");
  CHECK(e.starType == StarType::RealTypeI);
  CHECK(e.layout == Layout::MatrixEuclidean);
  ModelSpec mk = makeModel("q_minkowski_4");
  CHECK(mk.starType == StarType::RealTypeII);
  CHECK(mk.ibar == std::vector<int>{0, 2, 1, 3});
  // Minkowski metric has the extra corner entry 1 - q^{-2}.
  CHECK(mk.eta(3, 3) == QScalar::one() - QScalar::qPow(-2));
  CHECK(e.eta(3, 3).isZero());
}

TEST_CASE("custom model via the validation gate") {
  // The gl2 seed itself is a valid custom vector model (= quantum_plane:2).
  ModelSpec plane = makeModel("quantum_plane:2");
  ModelSpec custom = makeCustomModel("my_plane", plane.R);
  CHECK(custom.Rprime == plane.Rprime);
  CHECK(custom.lambda == plane.lambda);

  // A non-Hecke input is rejected.
  RMatrix d = RMatrix::zero(2);
  d.entry(0, 0, 0, 0) = QScalar::one();
  d.entry(0, 0, 1, 1) = QScalar::q();
  d.entry(1, 1, 0, 0) = QScalar::qPow(2);
  d.entry(1, 1, 1, 1) = QScalar::qPow(3);
  RMatrix nonHecke(2, RMatrix::flip(2).mat() * d.mat());
  CHECK_THROWS_AS(makeCustomModel("bad", nonHecke), ModelValidationError);
}
