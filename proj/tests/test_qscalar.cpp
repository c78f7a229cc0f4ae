#include <catch2/catch_amalgamated.hpp>

#include "braidkit/qscalar.hpp"

using braidkit::QScalar;

TEST_CASE("basic arithmetic in Q(q)") {
  QScalar q = QScalar::q();
  QScalar one = QScalar::one();

  CHECK(QScalar::zero().isZero());
  CHECK(one.isOne());
  CHECK((q - q).isZero());
  CHECK((q * q.inverse()).isOne());
  CHECK(q + q == QScalar::fromInteger(2) * q);
  CHECK(q.pow(3) == q * q * q);
  CHECK(q.pow(-2) == (q * q).inverse());
  CHECK((q - one) * (q + one) == q * q - one);
}

TEST_CASE("rational function simplification") {
  QScalar q = QScalar::q();
  QScalar one = QScalar::one();
  // (q^2 - 1)/(q + 1) = q - 1
  QScalar val = (q * q - one) / (q + one);
  CHECK(val == q - one);
  // (q - 1)/(q^2 - 1) = 1/(q + 1)
  CHECK((q - one) / (q * q - one) == (q + one).inverse());
}

TEST_CASE("fractional powers of q") {
  QScalar h = QScalar::qPow(1, 2);
  CHECK(h * h == QScalar::q());
  QScalar t = QScalar::qPow(1, 3);
  CHECK(t.pow(3) == QScalar::q());
  CHECK(QScalar::qPow(-3, 2) * QScalar::qPow(3, 2) == QScalar::one());
  CHECK(QScalar::qPow(-4, 3) == QScalar::qPow(1, 3).pow(-4));
  CHECK_THROWS_AS(QScalar::qPow(1, 4), std::invalid_argument);
}

TEST_CASE("parsing round trips") {
  auto rt = [](const std::string& s) { return QScalar::parse(QScalar::parse(s).str()); };
  QScalar q = QScalar::q();
  QScalar one = QScalar::one();
  CHECK(QScalar::parse("(q^2-1)/(q+1)") == q - one);
  CHECK(QScalar::parse("q^-1") == q.inverse());
  CHECK(QScalar::parse("q^(1/2)") == QScalar::qPow(1, 2));
  CHECK(QScalar::parse("3*q^2 - 2") == QScalar::fromInteger(3) * q * q - QScalar::fromInteger(2));
  CHECK(QScalar::parse("0").isZero());
  for (const char* s : {"q^(-3/2)", "1/(q+1)", "(q^4-1)/(q^2+1)", "-q^2+q-1"})
    CHECK(rt(s) == QScalar::parse(s));
  CHECK_THROWS_AS(QScalar::parse("q^^2"), braidkit::ParseError);
  CHECK_THROWS_AS(QScalar::parse("x+1"), braidkit::ParseError);
}

TEST_CASE("specialization at rational q") {
  QScalar q = QScalar::q();
  QScalar one = QScalar::one();
  QScalar val = (q * q - one) / (q + one);  // = q - 1
  CHECK(val.specializeAt(mpq_class(3)) == mpq_class(2));
  CHECK(val.specializeAt(mpq_class(1)) == mpq_class(0));
  // 1/(q-1) has a pole at q=1.
  CHECK_THROWS_AS((q - one).inverse().specializeAt(mpq_class(1)),
                  braidkit::PoleAtSpecialization);
  // Fractional powers specialize when the root is exact.
  CHECK(QScalar::qPow(1, 2).specializeAt(mpq_class(4)) == mpq_class(2));
  CHECK_THROWS_AS(QScalar::qPow(1, 2).specializeAt(mpq_class(3)),
                  braidkit::PoleAtSpecialization);
}

TEST_CASE("division by zero") {
  CHECK_THROWS_AS(QScalar::one() / QScalar::zero(), braidkit::DivisionByZero);
  CHECK_THROWS_AS(QScalar::zero().inverse(), braidkit::DivisionByZero);
}

TEST_CASE("square roots") {
  QScalar q = QScalar::q();
  QScalar one = QScalar::one();
  auto r = (q * q).trySqrt();
  REQUIRE(r);
  CHECK(*r == q);
  auto r2 = ((q + one) * (q + one) / (q * q)).trySqrt();
  REQUIRE(r2);
  CHECK(*r2 == (q + one) / q);
  CHECK_FALSE((q + one).trySqrt().has_value());
  auto r3 = QScalar::qPow(-8).trySqrt();
  REQUIRE(r3);
  CHECK(*r3 == QScalar::qPow(-4));
}

TEST_CASE("monomial detection") {
  QScalar q = QScalar::q();
  CHECK(q.isMonomial());
  CHECK(QScalar::qPow(-3, 2).isMonomial());
  CHECK((QScalar::fromInteger(5) * q.pow(-7)).isMonomial());
  CHECK_FALSE((q + QScalar::one()).isMonomial());
  CHECK_FALSE(QScalar::zero().isMonomial());
}
