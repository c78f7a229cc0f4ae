#pragma once
// Built-in model registry and validation gate.  A ModelSpec bundles the
// braided-covector data (R', R), the quantum metric and normalization
// constants, the theta/u/v matrices and the star structure for one model.
//
// Built-ins: quantum_plane:2, quantum_plane:3, q_euclidean_4, q_minkowski_4.

#include <string>
#include <vector>

#include "rmatrix.hpp"

namespace braidkit {

struct UnknownModel : std::runtime_error {
  explicit UnknownModel(const std::string& name)
      : std::runtime_error("unknown model: " + name) {}
};
struct ModelValidationError : std::runtime_error {
  explicit ModelValidationError(const std::string& w)
      : std::runtime_error("model validation failed: " + w) {}
};

enum class StarType { None, RealTypeI, RealTypeII };
enum class Layout { Vector, MatrixEuclidean, MatrixMinkowski };

struct ModelSpec {
  std::string name;
  int n = 0;
  Layout layout = Layout::Vector;
  RMatrix R;
  RMatrix Rprime;
  RMatrix seed;  // 2x2 seed for the matrix models (n = 0 when absent)

  QScalar lambda;  // quantum group normalization constant

  bool hasMetric = false;
  Mat eta;     // eta_{ij}
  Mat etaInv;  // eta^{ij} = inverse transpose of eta
  QScalar lambdaSquared;

  bool hasRibbon = false;
  Mat thetaV;
  Mat thetaU;
  QScalar lambdaNu;

  StarType starType = StarType::None;
  std::vector<int> ibar;  // index involution for RealTypeII

  // R21^{-1} and friends, precomputed for the operator chains.
  RMatrix Rinv;
  RMatrix R21;
  RMatrix R21inv;
};

namespace detail {

// FRT gl_n R-matrix scaled by q, so that (PR - q^2)(PR + 1) = 0.
inline RMatrix glnSeed(int n) {
  QScalar q = QScalar::q();
  RMatrix R = RMatrix::zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) R.entry(i, i, k, k) = (i == k) ? q : QScalar::one();
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) R.entry(i, k, k, i) = q - q.inverse();
  return R.scaled(q);
}

inline void finishDerived(ModelSpec& m) {
  m.Rinv = m.R.inverse();
  m.R21 = m.R.swapped();
  m.R21inv = m.R21.inverse();
}

inline void validateSpec(const ModelSpec& m) {
  if (!qybeResidual(m.R).isZero())
    throw ModelValidationError(m.name + ": R violates the QYBE");
  for (const Mat& r : mixedRelationsResidual(m.Rprime, m.R))
    if (!r.isZero())
      throw ModelValidationError(m.name + ": (R', R) violate the compatibility equations");
  if (m.seed.n() != 0 && !heckeCheck(m.seed).holds)
    throw ModelValidationError(m.name + ": seed is not q-Hecke");
  if (m.hasMetric) {
    int n = m.n;
    RMatrix Rinv = m.R.inverse();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            QScalar lhs1, rhs1, lhs2, rhs2;
            for (int a = 0; a < n; ++a) {
              lhs1 += m.eta(i, a) * Rinv.entry(a, j, k, l);
              rhs1 += m.lambdaSquared * m.R.entry(a, i, k, l) * m.eta(a, j);
              lhs2 += m.eta(k, a) * m.R.entry(i, j, a, l);
              rhs2 += m.lambdaSquared.inverse() * Rinv.entry(i, j, a, k) * m.eta(a, l);
            }
            if (lhs1 != rhs1 || lhs2 != rhs2)
              throw ModelValidationError(m.name + ": metric identities fail");
          }
    // Reality condition: eta_{ij} equals the inverse-transpose entry eta^{ji}
    // only after conjugation, which is the identity here; assert the
    // consistency eta * (etaInv)^T = id.
    if (!(m.eta * m.etaInv.transpose() - Mat::identity(m.n)).isZero())
      throw ModelValidationError(m.name + ": eta inverse-transpose inconsistent");
  }
}

inline ModelSpec makePlane(int n) {
  ModelSpec m;
  m.name = "quantum_plane:" + std::to_string(n);
  m.n = n;
  m.layout = Layout::Vector;
  m.R = glnSeed(n);
  m.Rprime = m.R.scaled(QScalar::qPow(-2));
  m.seed = (n == 2) ? m.R : RMatrix();
  // Quantum group normalization constant for the gl_n plane family.
  m.lambda = QScalar::qPow(-(n + 1), n);
  m.starType = StarType::None;
  // The n=2 plane admits a quantum metric (the epsilon tensor); gl_n planes
  // with n > 2 do not, which solveMetricAndLambda reports as NoMetric.
  try {
    MetricResult metric = solveMetricAndLambda(m.R);
    m.hasMetric = true;
    m.eta = std::move(metric.eta);
    m.etaInv = m.eta.transpose().inverse();
    m.lambdaSquared = metric.lambdaSquared;
    if (m.lambdaSquared != m.lambda * m.lambda)
      throw ModelValidationError(m.name + ": metric lambda disagrees with the plane convention");
    m.starType = StarType::RealTypeI;
  } catch (const NoMetric&) {
    m.hasMetric = false;
  } catch (const AmbiguousMetric&) {
    m.hasMetric = false;
  }
  try {
    ThetaMatrices th = thetaMatrices(m.R, QScalar::one());
    m.hasRibbon = true;
    m.thetaV = th.v;
    m.thetaU = th.u;
    m.lambdaNu = th.lambdaNu;
  } catch (const std::runtime_error&) {
    m.hasRibbon = false;
  }
  finishDerived(m);
  validateSpec(m);
  return m;
}

inline ModelSpec makeBig(Layout layout) {
  ModelSpec m;
  bool euclid = layout == Layout::MatrixEuclidean;
  m.name = euclid ? "q_euclidean_4" : "q_minkowski_4";
  m.n = 4;
  m.layout = layout;
  m.seed = glnSeed(2);
  auto [Rp, R] = assembleBigMatrices(
      m.seed, euclid ? BigLayout::MatrixEuclidean : BigLayout::MatrixMinkowski);
  m.R = std::move(R);
  m.Rprime = std::move(Rp);
  MetricResult metric = solveMetricAndLambda(m.R);
  m.hasMetric = true;
  m.eta = std::move(metric.eta);
  m.etaInv = m.eta.transpose().inverse();
  m.lambdaSquared = metric.lambdaSquared;
  auto lam = m.lambdaSquared.trySqrt();
  if (!lam) throw ModelValidationError(m.name + ": lambda^2 is not a perfect square");
  m.lambda = *lam;
  ThetaMatrices th = thetaMatrices(m.R, QScalar::one());
  m.hasRibbon = true;
  m.thetaV = th.v;
  m.thetaU = th.u;
  m.lambdaNu = th.lambdaNu;
  if (euclid) {
    m.starType = StarType::RealTypeI;
  } else {
    m.starType = StarType::RealTypeII;
    // I = (i0, i1) -> (i1, i0): transposition of the matrix indices.
    m.ibar = {0, 2, 1, 3};
  }
  finishDerived(m);
  validateSpec(m);
  return m;
}

}  // namespace detail

inline std::vector<std::string> modelNames() {
  return {"quantum_plane:2", "quantum_plane:3", "q_euclidean_4", "q_minkowski_4"};
}

inline ModelSpec makeModel(const std::string& name) {
  if (name == "quantum_plane:2") return detail::makePlane(2);
  if (name == "quantum_plane:3") return detail::makePlane(3);
  if (name == "q_euclidean_4") return detail::makeBig(Layout::MatrixEuclidean);
  if (name == "q_minkowski_4") return detail::makeBig(Layout::MatrixMinkowski);
  throw UnknownModel(name);
}

// Custom vector-layout model from an R-matrix (same validation gate as the
// built-ins).  R must be q-Hecke; R' is R scaled so that (PR+1)(PR'-1) = 0,
// and the normalization constant comes from the quantum metric when one
// exists, falling back to the gl_n plane formula for metric-free inputs.
inline ModelSpec makeCustomModel(const std::string& name, const RMatrix& R) {
  ModelSpec m;
  m.name = name;
  m.n = R.n();
  m.layout = Layout::Vector;
  m.R = R;
  HeckeResult hk = heckeCheck(R);
  if (!hk.holds) throw ModelValidationError(name + ": R is not q-Hecke");
  if (hk.alpha.isZero()) throw ModelValidationError(name + ": degenerate Hecke eigenvalue");
  m.Rprime = R.scaled(hk.alpha.inverse());
  try {
    MetricResult metric = solveMetricAndLambda(m.R);
    m.hasMetric = true;
    m.eta = std::move(metric.eta);
    m.etaInv = m.eta.transpose().inverse();
    m.lambdaSquared = metric.lambdaSquared;
    auto lam = m.lambdaSquared.trySqrt();
    if (!lam) throw ModelValidationError(name + ": lambda^2 is not a perfect square");
    m.lambda = *lam;
  } catch (const NoMetric&) {
    if (m.n >= 2 && 6 % m.n == 0 && hk.alpha == QScalar::qPow(2)) {
      m.lambda = QScalar::qPow(-(m.n + 1), m.n);
    } else {
      throw ModelValidationError(name + ": cannot determine normalization constant lambda");
    }
  }
  try {
    ThetaMatrices th = thetaMatrices(m.R, QScalar::one());
    m.hasRibbon = true;
    m.thetaV = th.v;
    m.thetaU = th.u;
    m.lambdaNu = th.lambdaNu;
  } catch (const std::runtime_error&) {
    m.hasRibbon = false;
  }
  detail::finishDerived(m);
  detail::validateSpec(m);
  return m;
}

}  // namespace braidkit
