#include <catch2/catch_amalgamated.hpp>

#include "braidkit/braided_space.hpp"

using namespace braidkit;

namespace {
long binom(int a, int b) {
  long r = 1;
  for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
  return r;
}
}  // namespace

TEST_CASE("quantum plane relations and bases") {
  ModelSpec m = makeModel("quantum_plane:2");
  BraidedSpace V(m);
  // x_0 x_1 = q^{-1} x_1 x_0
  FreeTensor x0 = {{{0}, QScalar::one()}}, x1 = {{{1}, QScalar::one()}};
  FreeTensor p01 = V.multiply(x0, x1);
  REQUIRE(p01.size() == 1);
  CHECK(p01.at({1, 0}) == QScalar::qPow(-1));
  CHECK(V.multiply(x1, x0) == FreeTensor{{{1, 0}, QScalar::one()}});
  // Flat dimensions: dim V_m = C(n+m-1, m).
  for (int deg = 0; deg <= 5; ++deg) CHECK(V.dim(deg) == binom(deg + 1, deg));
}

TEST_CASE("flat dimensions for all built-in models") {
  for (const std::string& name : modelNames()) {
    ModelSpec m = makeModel(name);
    BraidedSpace V(m);
    int top = m.n == 4 ? 3 : 4;
    for (int deg = 0; deg <= top; ++deg)
      CHECK(V.dim(deg) == binom(m.n + deg - 1, deg));
  }
}

TEST_CASE("normal form kills the relation ideal") {
  for (const std::string& name : {std::string("quantum_plane:2"), std::string("q_euclidean_4")}) {
    ModelSpec m = makeModel(name);
    BraidedSpace V(m);
    for (int deg = 2; deg <= 3; ++deg)
      for (const FreeTensor& rel : V.relationSpan(deg)) CHECK(V.isZeroInQuotient(rel));
  }
}

TEST_CASE("multiplication is associative in the quotient") {
  ModelSpec m = makeModel("q_minkowski_4");
  BraidedSpace V(m);
  FreeTensor a = {{{0}, QScalar::one()}, {{2}, QScalar::q()}};
  FreeTensor b = {{{1}, QScalar::one()}, {{3}, -QScalar::one()}};
  FreeTensor c = {{{2}, QScalar::qPow(-1)}};
  CHECK(V.multiply(V.multiply(a, b), c) == V.multiply(a, V.multiply(b, c)));
}

TEST_CASE("toVector round trip") {
  ModelSpec m = makeModel("quantum_plane:3");
  BraidedSpace V(m);
  for (int pos = 0; pos < V.dim(2); ++pos) {
    FreeTensor e = V.basisElement(2, pos);
    auto vec = V.toVector(e, 2);
    for (int i = 0; i < V.dim(2); ++i) CHECK(vec[i] == (i == pos ? QScalar::one() : QScalar::zero()));
  }
}

TEST_CASE("braiding descends to the quotient") {
  for (const std::string& name : {std::string("quantum_plane:2"), std::string("q_euclidean_4"),
                                  std::string("q_minkowski_4")}) {
    ModelSpec m = makeModel(name);
    BraidedSpace V(m);
    for (const FreeTensor& rel : V.relationSpan(2)) {
      for (int g = 0; g < m.n; ++g) {
        FreeTensor xg = {{{g}, QScalar::one()}};
        // Psi(rel (x) x_g) and Psi(x_g (x) rel) must vanish blockwise.
        CHECK(V.normalFormSplit(V.psi(rel, xg), 1).empty());
        CHECK(V.normalFormSplit(V.psi(xg, rel), 2).empty());
      }
    }
  }
}

TEST_CASE("psi on generators matches the R-matrix") {
  ModelSpec m = makeModel("quantum_plane:2");
  BraidedSpace V(m);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      FreeTensor out = V.psi({{{i}, QScalar::one()}}, {{{j}, QScalar::one()}});
      // coefficient of (b, a) must be R^a_i^b_j
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          Word w = {b, a};
          QScalar c = out.count(w) ? out.at(w) : QScalar::zero();
          CHECK(c == m.R.entry(a, i, b, j));
        }
    }
}

TEST_CASE("antipode") {
  ModelSpec m = makeModel("quantum_plane:2");
  BraidedSpace V(m);
  FreeTensor x0 = {{{0}, QScalar::one()}};
  CHECK(V.antipode(x0) == FreeTensor{{{0}, -QScalar::one()}});
  // S(x_0 x_0) = mult Psi(x_0 (x) x_0) = R^0_0^0_0 x_0 x_0 = q^2 x_0^2.
  FreeTensor sq = V.antipode(FreeTensor{{{0, 0}, QScalar::one()}});
  REQUIRE(sq.size() == 1);
  CHECK(sq.at({0, 0}) == QScalar::qPow(2));
  // Classical limit: S acts as (-1)^m on every basis monomial.
  for (const std::string& name : modelNames()) {
    ModelSpec mm = makeModel(name);
    BraidedSpace W(mm);
    for (int deg = 1; deg <= 2; ++deg)
      for (int pos = 0; pos < W.dim(deg); ++pos) {
        FreeTensor s = W.antipode(W.basisElement(deg, pos));
        auto vec = W.toVector(s, deg);
        for (int i = 0; i < W.dim(deg); ++i) {
          mpq_class expect = (i == pos) ? mpq_class((deg % 2) ? -1 : 1) : mpq_class(0);
          CHECK(vec[i].specializeAt(1) == expect);
        }
      }
  }
}

TEST_CASE("antipode is a braided antihomomorphism") {
  ModelSpec m = makeModel("q_euclidean_4");
  BraidedSpace V(m);
  FreeTensor a = {{{0}, QScalar::one()}};
  FreeTensor b = {{{1, 2}, QScalar::one()}};
  // S(ab) = mult(Psi(S(a) (x) S(b)))
  FreeTensor lhs = V.antipode(V.multiply(a, b));
  FreeTensor rhs = V.normalForm(V.psi(V.antipode(a), V.antipode(b)));
  CHECK(lhs == rhs);
}
