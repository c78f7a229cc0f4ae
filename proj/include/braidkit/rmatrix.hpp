#pragma once
// R-matrix toolkit: structural condition checks (QYBE, Hecke, mixed
// relations), the second inverse, theta/u/v matrices, quantum-metric solving,
// and assembly of the 4-dimensional multi-index matrices R', R from a 2x2
// Hecke seed.
//
// Entry convention: an RMatrix of dimension n is stored as an n^2 x n^2 Mat
// with R^i_j^k_l = m(i*n+k, j*n+l), i.e. the row multi-index is (i,k) and the
// column multi-index is (j,l).

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "qscalar.hpp"

namespace braidkit {

struct SingularSecondInverse : std::runtime_error {
  SingularSecondInverse() : std::runtime_error("R^{t2} is singular; second inverse does not exist") {}
};
struct NotRibbonScalar : std::runtime_error {
  NotRibbonScalar() : std::runtime_error("uv is not a scalar multiple of the identity") {}
};
struct NoCanonicalRoot : std::runtime_error {
  NoCanonicalRoot() : std::runtime_error("uv scalar is not a perfect-square monomial") {}
};
struct NoMetric : std::runtime_error {
  NoMetric() : std::runtime_error("no invertible quantum metric solves the metric identities") {}
};
struct AmbiguousMetric : std::runtime_error {
  AmbiguousMetric() : std::runtime_error("quantum metric solution space has dimension > 1") {}
};
struct NotHecke : std::runtime_error {
  NotHecke() : std::runtime_error("R is not a q-Hecke solution of the QYBE") {}
};
struct JsonFormatError : std::runtime_error {
  explicit JsonFormatError(const std::string& w) : std::runtime_error(w) {}
};

class RMatrix {
 public:
  RMatrix() : n_(0), m_(0, 0) {}
  RMatrix(int n, Mat m) : n_(n), m_(std::move(m)) {
    if (m_.rows() != n_ * n_ || m_.cols() != n_ * n_)
      throw DimensionError("RMatrix: matrix must be n^2 x n^2");
  }
  static RMatrix zero(int n) { return RMatrix(n, Mat(n * n, n * n)); }
  static RMatrix flip(int n) {
    Mat p(n * n, n * n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) p(i * n + k, k * n + i) = QScalar::one();
    return RMatrix(n, std::move(p));
  }
  static RMatrix identityR(int n) { return RMatrix(n, Mat::identity(n * n)); }

  int n() const { return n_; }
  const Mat& mat() const { return m_; }
  Mat& mat() { return m_; }

  QScalar& entry(int i, int j, int k, int l) { return m_(i * n_ + k, j * n_ + l); }
  const QScalar& entry(int i, int j, int k, int l) const { return m_(i * n_ + k, j * n_ + l); }

  bool operator==(const RMatrix& o) const { return n_ == o.n_ && m_ == o.m_; }

  // R with the two matrix legs swapped: R21^i_j^k_l = R^k_l^i_j.
  RMatrix swapped() const {
    RMatrix r = zero(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int l = 0; l < n_; ++l) r.entry(i, j, k, l) = entry(k, l, i, j);
    return r;
  }
  RMatrix inverse() const { return RMatrix(n_, m_.inverse()); }
  RMatrix scaled(const QScalar& s) const { return RMatrix(n_, m_ * s); }

  // Embeddings into End(V^3) acting on legs (1,2), (2,3) or (1,3).
  Mat embed12() const {
    int n = n_, N = n * n * n;
    Mat out(N, N);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int c = 0; c < n; ++c)
              out((i * n + k) * n + c, (j * n + l) * n + c) = entry(i, j, k, l);
    return out;
  }
  Mat embed23() const {
    int n = n_, N = n * n * n;
    Mat out(N, N);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int c = 0; c < n; ++c)
              out((c * n + i) * n + k, (c * n + j) * n + l) = entry(i, j, k, l);
    return out;
  }
  Mat embed13() const {
    int n = n_, N = n * n * n;
    Mat out(N, N);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int c = 0; c < n; ++c)
              out((i * n + c) * n + k, (j * n + c) * n + l) = entry(i, j, k, l);
    return out;
  }

 private:
  int n_;
  Mat m_;
};

// Residual of the quantum Yang-Baxter equation
// R12 R13 R23 - R23 R13 R12, as an n^3 x n^3 matrix.
inline Mat qybeResidual(const RMatrix& R) {
  Mat a = R.embed12() * (R.embed13() * R.embed23());
  Mat b = R.embed23() * (R.embed13() * R.embed12());
  return a - b;
}

struct HeckeResult {
  bool holds = false;
  QScalar alpha;  // eigenvalues of PR when holds
  QScalar beta;
};

// Reports whether (PR - alpha)(PR - beta) = 0 with distinct roots alpha, beta.
inline HeckeResult heckeCheck(const RMatrix& R) {
  int N = R.n() * R.n();
  Mat M = RMatrix::flip(R.n()).mat() * R.mat();
  Mat M2 = M * M;
  Mat I = Mat::identity(N);
  // Scalar PR = cI is annihilated by (x - c)(x + c); report the roots (c, -c)
  // so that e.g. the flip yields (1, -1).
  if ((M - I * M(0, 0)).isZero()) {
    HeckeResult out;
    out.holds = !M(0, 0).isZero();
    out.alpha = M(0, 0);
    out.beta = -M(0, 0);
    return out;
  }
  // Solve M^2 = s*M - p*I for scalars (s, p) by row-reducing the N^2 x 3
  // system [vec(M) | -vec(I) | vec(M^2)].
  Mat sys(N * N, 3);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      sys(r * N + c, 0) = M(r, c);
      sys(r * N + c, 1) = -I(r, c);
      sys(r * N + c, 2) = M2(r, c);
    }
  auto pivots = sys.rowReduceInPlace();
  HeckeResult out;
  // Consistent iff column 2 is not a pivot and the first two columns are.
  bool consistent = pivots.size() <= 2;
  for (auto p : pivots)
    if (p == 2) consistent = false;
  if (!consistent) return out;
  QScalar s, p;
  for (size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == 0) s = sys(static_cast<int>(r), 2);
    if (pivots[r] == 1) p = sys(static_cast<int>(r), 2);
  }
  // Verify (cheap guard against an under-determined system).
  if (!(M2 - M * s + I * p).isZero()) return out;
  QScalar disc = s * s - p * QScalar::fromInteger(4);
  auto root = disc.trySqrt();
  if (!root || root->isZero()) return out;  // no exact distinct roots
  QScalar half = QScalar::fromRational(1, 2);
  QScalar a = (s + *root) * half, b = (s - *root) * half;
  // Order the roots so that the first is positive at q = 1 when possible.
  try {
    if (a.specializeAt(1) < 0 && b.specializeAt(1) > 0) std::swap(a, b);
  } catch (const PoleAtSpecialization&) {
  }
  out.holds = true;
  out.alpha = a;
  out.beta = b;
  return out;
}

// Residuals of the four compatibility equations for braided-vector data:
//   R'12 R13 R23 - R23 R13 R'12
//   R12 R13 R'23 - R'23 R13 R12
//   R12 R13 R23  - R23 R13 R12
//   (PR + 1)(PR' - 1)
inline std::vector<Mat> mixedRelationsResidual(const RMatrix& Rp, const RMatrix& R) {
  if (Rp.n() != R.n()) throw DimensionError("mixedRelationsResidual: dimension mismatch");
  std::vector<Mat> out;
  out.push_back(Rp.embed12() * (R.embed13() * R.embed23()) -
                R.embed23() * (R.embed13() * Rp.embed12()));
  out.push_back(R.embed12() * (R.embed13() * Rp.embed23()) -
                Rp.embed23() * (R.embed13() * R.embed12()));
  out.push_back(qybeResidual(R));
  int N = R.n() * R.n();
  Mat P = RMatrix::flip(R.n()).mat();
  Mat I = Mat::identity(N);
  out.push_back((P * R.mat() + I) * (P * Rp.mat() - I));
  return out;
}

// Second inverse R~ = ((R^{t2})^{-1})^{t2}, where t2 transposes the second
// matrix factor: (R^{t2})^i_j^k_l = R^i_j^l_k.
inline RMatrix secondInverse(const RMatrix& R) {
  int n = R.n();
  RMatrix t2 = RMatrix::zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t2.entry(i, j, k, l) = R.entry(i, j, l, k);
  Mat inv;
  try {
    inv = t2.mat().inverse();
  } catch (const SingularMatrix&) {
    throw SingularSecondInverse();
  }
  RMatrix invR(n, std::move(inv));
  RMatrix out = RMatrix::zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out.entry(i, j, k, l) = invR.entry(i, j, l, k);
  return out;
}

struct ThetaMatrices {
  Mat v;
  Mat u;
  QScalar lambdaNu;
};

// Matrices of the braided-group automorphisms theta_v, theta_u and the ribbon
// constant lambda_nu, from partial traces of the second inverse.  The dilaton
// cancellation factor multiplies both traces.
inline ThetaMatrices thetaMatrices(const RMatrix& R, const QScalar& lambdaDilatonFactor) {
  int n = R.n();
  RMatrix Rt = secondInverse(R);
  Mat v(n, n), u(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      QScalar sv, su;
      for (int a = 0; a < n; ++a) {
        sv += Rt.entry(a, i, j, a);
        su += Rt.entry(i, a, a, j);
      }
      v(i, j) = sv * lambdaDilatonFactor;
      u(i, j) = su * lambdaDilatonFactor;
    }
  Mat uv = u * v;
  QScalar c = uv(0, 0);
  if (!(uv - Mat::identity(n) * c).isZero()) throw NotRibbonScalar();
  if (!c.isMonomial()) throw NoCanonicalRoot();
  auto root = c.trySqrt();
  if (!root) throw NoCanonicalRoot();
  QScalar lam = *root;
  try {
    if (lam.specializeAt(1) < 0) lam = -lam;
  } catch (const PoleAtSpecialization&) {
  }
  return {std::move(v), std::move(u), lam};
}

struct MetricResult {
  Mat eta;
  QScalar lambdaSquared;
};

// Solves the quantum-metric identities
//   eta_{ia} (R^{-1})^a_j^k_l = lambda^2 R^a_i^k_l eta_{aj}
//   eta_{ka} R^i_j^a_l        = lambda^{-2} (R^{-1})^i_j^a_k eta_{al}
// for an invertible eta and a monomial lambda^2 = q^k, k in [-8, 8].  The
// returned eta is scaled so its first nonzero entry (row-major) is 1; the
// result must specialize at q = 1 to entries in {0, +-1}.
inline MetricResult solveMetricAndLambda(const RMatrix& R) {
  int n = R.n();
  RMatrix Rinv = R.inverse();
  std::optional<MetricResult> found;
  for (int k = -8; k <= 8; ++k) {
    QScalar lam2 = QScalar::qPow(k);
    QScalar lam2inv = QScalar::qPow(-k);
    // Unknowns: eta entries, flattened eta_{ab} -> a*n + b.
    std::vector<std::vector<QScalar>> rows;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int kk = 0; kk < n; ++kk)
          for (int l = 0; l < n; ++l) {
            std::vector<QScalar> r1(n * n), r2(n * n);
            for (int a = 0; a < n; ++a) {
              r1[i * n + a] += Rinv.entry(a, j, kk, l);
              r1[a * n + j] -= lam2 * R.entry(a, i, kk, l);
              r2[kk * n + a] += R.entry(i, j, a, l);
              r2[a * n + l] -= lam2inv * Rinv.entry(i, j, a, kk);
            }
            rows.push_back(std::move(r1));
            rows.push_back(std::move(r2));
          }
    Mat sys(static_cast<int>(rows.size()), n * n);
    for (size_t r = 0; r < rows.size(); ++r)
      for (int c = 0; c < n * n; ++c) sys(static_cast<int>(r), c) = rows[r][c];
    Mat ker = sys.kernel();
    if (ker.cols() == 0) continue;
    if (ker.cols() > 1) throw AmbiguousMetric();
    Mat eta(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) eta(a, b) = ker(a * n + b, 0);
    // Require invertibility.
    try {
      (void)eta.inverse();
    } catch (const SingularMatrix&) {
      continue;
    }
    if (found) throw AmbiguousMetric();
    // Normalize: first nonzero entry (row-major) becomes 1.
    QScalar pivot;
    for (int a = 0; a < n * n && pivot.isZero(); ++a)
      if (!eta(a / n, a % n).isZero()) pivot = eta(a / n, a % n);
    eta = eta * pivot.inverse();
    // Classical pattern check: entries must specialize to {0, +-1} at q = 1.
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        mpq_class cval = eta(a, b).specializeAt(1);
        if (cval != 0 && cval != 1 && cval != -1) throw NoMetric();
      }
    found = MetricResult{std::move(eta), lam2};
  }
  if (!found) throw NoMetric();
  return *found;
}

enum class BigLayout { MatrixEuclidean, MatrixMinkowski };

namespace detail {

// Multi-index helpers for the 2x2 -> 4 assembly.
inline int bigIdx(int i0, int i1) { return 2 * i0 + i1; }

// Solves sum_{I,J} Lc[rho,(I,J)] X^A_I^B_J = Rc[rho,(B,A)] for the 16x16
// multi-index matrix X, block by block in (A,B).  Lc, Rc are 16x16 with rows
// indexed by the matrix position rho = ((i,k),(j,l)) and columns by the word
// (first letter, second letter).
// When the display does not pin every coefficient (degenerate seeds such as
// the flip leave the system under-determined), the solution is completed from
// the trivial-exchange ansatz X^A_I^B_J = delta(B,I) delta(A,J), which leaves
// every word unchanged.
inline RMatrix solveWordMatching(const Mat& Lc, const Mat& Rc) {
  RMatrix out = RMatrix::zero(4);
  for (int A = 0; A < 4; ++A)
    for (int B = 0; B < 4; ++B) {
      Mat rhs(16, 1);
      for (int r = 0; r < 16; ++r) {
        rhs(r, 0) = Rc(r, B * 4 + A);
        // Subtract the ansatz contribution: its only nonzero coordinate in
        // this block is (I,J) = (B,A).
        rhs(r, 0) -= Lc(r, B * 4 + A);
      }
      auto y = Lc.solveParticular(rhs);
      if (!y) throw std::logic_error("assembleBigMatrices: inconsistent coefficient system");
      for (int IJ = 0; IJ < 16; ++IJ) {
        QScalar v = (*y)(IJ, 0);
        if (IJ == B * 4 + A) v += QScalar::one();
        out.entry(A, IJ / 4, B, IJ % 4) = v;
      }
    }
  return out;
}

}  // namespace detail

// Assembles the 4-dimensional multi-index matrices (R', R) for the matrix
// models from a 2x2 Hecke seed, by equating coefficients of the quadratic
// monomials in the displayed matrix relations and braid statistics:
//   Euclidean:  R21 p1 p2 = p2 p1 R,        p'1 p2 = R p2 p'1 R
//   Minkowski:  R21 p1 R p2 = p2 R21 p1 R,  R^{-1} p'1 R p2 = p2 R21 p'1 R
// The braiding solve determines R only up to scale (the braided tensor uses
// the quantum-group-normalized braiding); the result is rescaled so its Hecke
// eigenvalues match the seed's.
inline std::pair<RMatrix, RMatrix> assembleBigMatrices(const RMatrix& seed, BigLayout layout) {
  if (seed.n() != 2) throw DimensionError("assembleBigMatrices: seed must be 2x2");
  HeckeResult hk = heckeCheck(seed);
  if (!hk.holds) throw NotHecke();
  const Mat& R = seed.mat();
  Mat R21 = seed.swapped().mat();
  Mat Rinv = R.inverse();
  auto L = detail::bigIdx;
  auto rho = [](int i, int k, int j, int l) { return ((i * 2 + k) * 2 + j) * 2 + l; };
  auto word = [](int I, int J) { return I * 4 + J; };

  Mat LcRel(16, 16), RcRel(16, 16), LcStat(16, 16), RcStat(16, 16);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) {
          int row = rho(i, k, j, l);
          if (layout == BigLayout::MatrixEuclidean) {
            // Relations: (R21 p1 p2)[(i,k),(j,l)] vs (p2 p1 R)[(i,k),(j,l)].
            for (int a = 0; a < 2; ++a)
              for (int b = 0; b < 2; ++b)
                LcRel(row, word(L(a, j), L(b, l))) += R21(i * 2 + k, a * 2 + b);
            for (int c = 0; c < 2; ++c)
              for (int d = 0; d < 2; ++d)
                RcRel(row, word(L(k, c), L(i, d))) += R(d * 2 + c, j * 2 + l);
            // Statistics: p'1 p2 vs R p2 p'1 R.
            LcStat(row, word(L(i, j), L(k, l))) += QScalar::one();
            for (int a = 0; a < 2; ++a)
              for (int b = 0; b < 2; ++b)
                for (int d = 0; d < 2; ++d)
                  for (int e = 0; e < 2; ++e)
                    RcStat(row, word(L(b, d), L(a, e))) +=
                        R(i * 2 + k, a * 2 + b) * R(e * 2 + d, j * 2 + l);
          } else {
            // Relations: R21 p1 R p2 vs p2 R21 p1 R.
            for (int a = 0; a < 2; ++a)
              for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                  for (int f = 0; f < 2; ++f)
                    LcRel(row, word(L(a, c), L(f, l))) +=
                        R21(i * 2 + k, a * 2 + b) * R(c * 2 + b, j * 2 + f);
            for (int d = 0; d < 2; ++d)
              for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v)
                  for (int w = 0; w < 2; ++w)
                    RcRel(row, word(L(k, d), L(u, w))) +=
                        R21(i * 2 + d, u * 2 + v) * R(w * 2 + v, j * 2 + l);
            // Statistics: R^{-1} p'1 R p2 vs p2 R21 p'1 R.
            for (int a = 0; a < 2; ++a)
              for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                  for (int f = 0; f < 2; ++f)
                    LcStat(row, word(L(a, c), L(f, l))) +=
                        Rinv(i * 2 + k, a * 2 + b) * R(c * 2 + b, j * 2 + f);
            for (int d = 0; d < 2; ++d)
              for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v)
                  for (int w = 0; w < 2; ++w)
                    RcStat(row, word(L(k, d), L(u, w))) +=
                        R21(i * 2 + d, u * 2 + v) * R(w * 2 + v, j * 2 + l);
          }
        }

  RMatrix bigRp = detail::solveWordMatching(LcRel, RcRel);
  RMatrix bigR = detail::solveWordMatching(LcStat, RcStat);
  // The statistics display determines the braiding only up to the
  // quantum-group normalization.  The missing monomial scale is pinned by the
  // one scale-sensitive compatibility condition, (P R + 1)(P R' - 1) = 0;
  // when several scales work (degenerate seeds) prefer q^0.
  Mat P16 = RMatrix::flip(4).mat();
  Mat I16 = Mat::identity(16);
  Mat relFactor = P16 * bigRp.mat() - I16;
  std::optional<long> foundK;
  for (long k = -8; k <= 8; ++k) {
    Mat lhs = P16 * bigR.mat() * QScalar::qPow(k) + I16;
    if ((lhs * relFactor).isZero()) {
      if (k == 0 || !foundK) foundK = k;
      if (k == 0) break;
    }
  }
  if (!foundK) throw NotHecke();
  bigR = bigR.scaled(QScalar::qPow(*foundK));
  return {std::move(bigRp), std::move(bigR)};
}

// --- JSON interchange -------------------------------------------------------
// Format: {"n": <int>, "entries": [{"i":..,"j":..,"k":..,"l":..,"value":"<QScalar>"}]}
// Omitted entries are zero.

inline RMatrix rmatrixFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw JsonFormatError("R-matrix JSON must contain \"n\" and \"entries\"");
  int n = j.at("n").get<int>();
  if (n <= 0) throw JsonFormatError("R-matrix dimension must be positive");
  RMatrix out = RMatrix::zero(n);
  for (const auto& e : j.at("entries")) {
    int i = e.at("i").get<int>(), jj = e.at("j").get<int>();
    int k = e.at("k").get<int>(), l = e.at("l").get<int>();
    if (i < 0 || jj < 0 || k < 0 || l < 0 || i >= n || jj >= n || k >= n || l >= n)
      throw JsonFormatError("R-matrix entry index out of range");
    out.entry(i, jj, k, l) = QScalar::parse(e.at("value").get<std::string>());
  }
  return out;
}

inline nlohmann::json rmatrixToJson(const RMatrix& R) {
  nlohmann::json entries = nlohmann::json::array();
  int n = R.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (!R.entry(i, j, k, l).isZero())
            entries.push_back({{"i", i}, {"j", j}, {"k", k}, {"l", l},
                               {"value", R.entry(i, j, k, l).str()}});
  return {{"n", n}, {"entries", entries}};
}

}  // namespace braidkit
