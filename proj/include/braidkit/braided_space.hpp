#pragma once
// The braided covector space V(R', R): free words modulo the quadratic
// relation ideal x_i x_j = x_b x_a R'^a_i^b_j, with per-degree bases (the
// lex-least monomials outside the pivot set of the row-reduced relation
// span), normal forms, multiplication, the braiding Psi and the braided
// antipode.

#include <map>
#include <utility>
#include <vector>

#include "model.hpp"

namespace braidkit {

struct NotCovariant : std::runtime_error {
  explicit NotCovariant(const std::string& w) : std::runtime_error(w) {}
};

using Word = std::vector<int>;
using FreeTensor = std::map<Word, QScalar>;  // free-algebra element

inline void addTerm(FreeTensor& f, const Word& w, const QScalar& c) {
  if (c.isZero()) return;
  auto it = f.find(w);
  if (it == f.end()) {
    f.emplace(w, c);
  } else {
    it->second += c;
    if (it->second.isZero()) f.erase(it);
  }
}
inline FreeTensor freeScale(const FreeTensor& f, const QScalar& c) {
  FreeTensor out;
  if (c.isZero()) return out;
  for (const auto& [w, v] : f) out.emplace(w, v * c);
  return out;
}
inline void freeAdd(FreeTensor& dst, const FreeTensor& src, const QScalar& c = QScalar::one()) {
  for (const auto& [w, v] : src) addTerm(dst, w, v * c);
}

// One adjacent braiding step at position pos:
// (..., i, j, ...) -> sum_{a,b} X^a_i^b_j (..., b, a, ...).
inline FreeTensor adjacentBraid(const RMatrix& X, const FreeTensor& f, int pos) {
  int n = X.n();
  FreeTensor out;
  for (const auto& [w, c] : f) {
    int i = w[pos], j = w[pos + 1];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const QScalar& r = X.entry(a, i, b, j);
        if (r.isZero()) continue;
        Word w2 = w;
        w2[pos] = b;
        w2[pos + 1] = a;
        addTerm(out, w2, c * r);
      }
  }
  return out;
}

class BraidedSpace {
 public:
  explicit BraidedSpace(const ModelSpec& m) : model_(&m) {}

  const ModelSpec& model() const { return *model_; }
  int n() const { return model_->n; }

  int dim(int degree) { return static_cast<int>(degreeData(degree).basisWords.size()); }

  // Basis monomials (words) of the quotient at the given degree, lex order.
  std::vector<Word> basis(int degree) {
    DegreeData& d = degreeData(degree);
    std::vector<Word> out;
    out.reserve(d.basisWords.size());
    for (int idx : d.basisWords) out.push_back(d.words[idx]);
    return out;
  }

  // Normal form of a free-algebra element (may mix degrees).
  FreeTensor normalForm(const FreeTensor& f) {
    FreeTensor out;
    for (const auto& [w, c] : f) freeAdd(out, wordNormalForm(w), c);
    return out;
  }
  bool isZeroInQuotient(const FreeTensor& f) { return normalForm(f).empty(); }

  FreeTensor multiply(const FreeTensor& a, const FreeTensor& b) {
    FreeTensor prod;
    for (const auto& [wa, ca] : a)
      for (const auto& [wb, cb] : b) {
        Word w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        addTerm(prod, w, ca * cb);
      }
    return normalForm(prod);
  }

  // Coefficient vector of a homogeneous element over the degree basis.
  std::vector<QScalar> toVector(const FreeTensor& f, int degree) {
    DegreeData& d = degreeData(degree);
    std::vector<QScalar> out(d.basisWords.size());
    FreeTensor nf = normalForm(f);
    for (const auto& [w, c] : nf) {
      if (static_cast<int>(w.size()) != degree)
        throw DimensionError("toVector: element is not homogeneous of the given degree");
      out[d.basisPos.at(wordIndex(w))] += c;
    }
    return out;
  }
  FreeTensor basisElement(int degree, int pos) {
    DegreeData& d = degreeData(degree);
    return {{d.words[d.basisWords[pos]], QScalar::one()}};
  }

  // Spanning set of the relation ideal at a degree (free-algebra elements
  // that vanish in the quotient): every word with the quadratic relation
  // substituted at every position.
  std::vector<FreeTensor> relationSpan(int degree) {
    std::vector<FreeTensor> out;
    const RMatrix& Rp = model_->Rprime;
    std::vector<Word> all = allWords(degree);
    for (const Word& w : all)
      for (int pos = 0; pos + 1 < degree; ++pos) {
        FreeTensor r = {{w, QScalar::one()}};
        int i = w[pos], j = w[pos + 1];
        for (int a = 0; a < n(); ++a)
          for (int b = 0; b < n(); ++b) {
            const QScalar& c = Rp.entry(a, i, b, j);
            if (c.isZero()) continue;
            Word w2 = w;
            w2[pos] = b;
            w2[pos + 1] = a;
            addTerm(r, w2, -c);
          }
        if (!r.empty()) out.push_back(std::move(r));
      }
    return out;
  }

  // Braiding Psi on a free tensor product: f (degree m) tensor g (degree k),
  // both given as free elements; returns sum c * (w1 tensor w2) encoded as
  // concatenated words with the first k letters forming the first output leg.
  // On generators Psi(x_i (x) x_j) = sum x_b (x) x_a R^a_i^b_j.
  FreeTensor psi(const FreeTensor& f, const FreeTensor& g) {
    FreeTensor cur;
    int m = -1, k = -1;
    for (const auto& [wf, cf] : f) {
      if (m < 0)
        m = static_cast<int>(wf.size());
      else if (m != static_cast<int>(wf.size()))
        throw DimensionError("psi: first factor is not homogeneous");
      for (const auto& [wg, cg] : g) {
        if (k < 0)
          k = static_cast<int>(wg.size());
        else if (k != static_cast<int>(wg.size()))
          throw DimensionError("psi: second factor is not homogeneous");
        Word w = wf;
        w.insert(w.end(), wg.begin(), wg.end());
        addTerm(cur, w, cf * cg);
      }
    }
    if (m <= 0 || k <= 0) return cur;  // tensor with a scalar leg is trivial
    for (int src = m - 1; src >= 0; --src)
      for (int pos = src; pos < src + k; ++pos) cur = adjacentBraid(model_->R, cur, pos);
    return cur;
  }

  // Normal form applied blockwise to a two-leg element encoded as
  // concatenated words split after the first splitAt letters.
  FreeTensor normalFormSplit(const FreeTensor& f, int splitAt) {
    FreeTensor out;
    for (const auto& [w, c] : f) {
      Word w1(w.begin(), w.begin() + splitAt), w2(w.begin() + splitAt, w.end());
      for (const auto& [u1, c1] : wordNormalForm(w1))
        for (const auto& [u2, c2] : wordNormalForm(w2)) {
          Word u = u1;
          u.insert(u.end(), u2.begin(), u2.end());
          addTerm(out, u, c * c1 * c2);
        }
    }
    return out;
  }

  // Braided antipode: S(x_i) = -x_i, S(ab) = mult(Psi(S(a) (x) S(b))),
  // evaluated by the one-letter recursion S(x_i w) = -mult(Psi(x_i (x) S(w))).
  FreeTensor antipode(const FreeTensor& f) {
    FreeTensor out;
    for (const auto& [w, c] : f) freeAdd(out, wordAntipode(w), c);
    return normalForm(out);
  }

  int wordIndex(const Word& w) const {
    int idx = 0;
    for (int l : w) idx = idx * model_->n + l;
    return idx;
  }
  std::vector<Word> allWords(int degree) const {
    std::vector<Word> out;
    Word w(degree, 0);
    while (true) {
      out.push_back(w);
      int p = degree - 1;
      while (p >= 0 && w[p] == model_->n - 1) {
        w[p] = 0;
        --p;
      }
      if (p < 0) break;
      ++w[p];
    }
    if (degree == 0) out.resize(1);
    return out;
  }

 private:
  struct DegreeData {
    std::vector<Word> words;                       // all words, lex order
    std::map<int, std::map<int, QScalar>> pivots;  // pivot col -> reduced row
    std::vector<int> basisWords;                   // non-pivot word indices
    std::map<int, int> basisPos;                   // word index -> basis position
    std::map<int, FreeTensor> nfCache;             // pivot word -> normal form
  };

  const ModelSpec* model_;
  std::map<int, DegreeData> degrees_;
  std::map<Word, FreeTensor> antipodeCache_;

  DegreeData& degreeData(int degree) {
    auto it = degrees_.find(degree);
    if (it != degrees_.end()) return it->second;
    DegreeData d;
    d.words = allWords(degree);
    // Sparse Gauss-Jordan over the relation span.
    for (const FreeTensor& rel : relationSpan(degree)) {
      std::map<int, QScalar> row;
      for (const auto& [w, c] : rel) row[wordIndex(w)] = c;
      // Reduce against existing pivots.
      while (true) {
        auto hit = row.end();
        for (auto rit = row.begin(); rit != row.end(); ++rit)
          if (d.pivots.count(rit->first)) {
            hit = rit;
            break;
          }
        if (hit == row.end()) break;
        QScalar factor = hit->second;
        const auto& prow = d.pivots.at(hit->first);
        for (const auto& [col, v] : prow) {
          auto cit = row.find(col);
          QScalar nv = (cit == row.end() ? QScalar::zero() : cit->second) - factor * v;
          if (nv.isZero())
            row.erase(col);
          else
            row[col] = nv;
        }
      }
      if (row.empty()) continue;
      int pcol = row.begin()->first;
      QScalar lead = row.begin()->second;
      for (auto& [col, v] : row) v /= lead;
      // Back-substitute into existing rows.
      for (auto& [c, prow] : d.pivots) {
        auto cit = prow.find(pcol);
        if (cit == prow.end()) continue;
        QScalar factor = cit->second;
        for (const auto& [col, v] : row) {
          auto pit = prow.find(col);
          QScalar nv = (pit == prow.end() ? QScalar::zero() : pit->second) - factor * v;
          if (nv.isZero())
            prow.erase(col);
          else
            prow[col] = nv;
        }
      }
      d.pivots.emplace(pcol, std::move(row));
    }
    for (int idx = 0; idx < static_cast<int>(d.words.size()); ++idx)
      if (!d.pivots.count(idx)) {
        d.basisPos[idx] = static_cast<int>(d.basisWords.size());
        d.basisWords.push_back(idx);
      }
    return degrees_.emplace(degree, std::move(d)).first->second;
  }

  FreeTensor wordNormalForm(const Word& w) {
    DegreeData& d = degreeData(static_cast<int>(w.size()));
    int idx = wordIndex(w);
    auto pit = d.pivots.find(idx);
    if (pit == d.pivots.end()) return {{w, QScalar::one()}};
    auto cit = d.nfCache.find(idx);
    if (cit != d.nfCache.end()) return cit->second;
    FreeTensor nf;
    for (const auto& [col, v] : pit->second)
      if (col != idx) addTerm(nf, d.words[col], -v);
    d.nfCache.emplace(idx, nf);
    return nf;
  }

  FreeTensor wordAntipode(const Word& w) {
    if (w.empty()) return {{w, QScalar::one()}};
    auto cit = antipodeCache_.find(w);
    if (cit != antipodeCache_.end()) return cit->second;
    FreeTensor result;
    if (w.size() == 1) {
      result = {{w, -QScalar::one()}};
    } else {
      Word head(w.begin(), w.begin() + 1), rest(w.begin() + 1, w.end());
      FreeTensor srest = wordAntipode(rest);
      // S(x_i w') = -mult(Psi(x_i (x) S(w'))); the concatenated Psi output is
      // already the multiplied free word.
      result = freeScale(psi({{head, QScalar::one()}}, srest), -QScalar::one());
    }
    antipodeCache_.emplace(w, result);
    return result;
  }
};

}  // namespace braidkit
