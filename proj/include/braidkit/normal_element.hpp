#pragma once
// NormalElement: an element of a braided covector algebra held in canonical
// per-degree basis coordinates, with the text form
//   coeff * x[i1]x[i2]... + ...
// used by the CLI and the JSON report.

#include <map>
#include <string>
#include <vector>

#include "braided_space.hpp"

namespace braidkit {

class NormalElement {
 public:
  explicit NormalElement(BraidedSpace& space) : space_(&space) {}
  NormalElement(BraidedSpace& space, const FreeTensor& f) : space_(&space) {
    FreeTensor nf = space.normalForm(f);
    std::map<int, FreeTensor> byDegree;
    for (const auto& [w, c] : nf) byDegree[(int)w.size()][w] = c;
    for (auto& [d, part] : byDegree) coords_[d] = space.toVector(part, d);
  }

  BraidedSpace& space() const { return *space_; }
  const std::map<int, std::vector<QScalar>>& coordinates() const { return coords_; }

  bool isZero() const {
    for (const auto& [d, v] : coords_)
      for (const QScalar& c : v)
        if (!c.isZero()) return false;
    return true;
  }

  FreeTensor toFree() const {
    FreeTensor out;
    for (const auto& [d, v] : coords_)
      for (int i = 0; i < (int)v.size(); ++i)
        if (!v[i].isZero()) freeAdd(out, space_->basisElement(d, i), v[i]);
    return out;
  }

  NormalElement operator+(const NormalElement& o) const {
    requireSameSpace(o);
    FreeTensor f = toFree();
    freeAdd(f, o.toFree());
    return NormalElement(*space_, f);
  }
  NormalElement operator-(const NormalElement& o) const {
    requireSameSpace(o);
    FreeTensor f = toFree();
    freeAdd(f, o.toFree(), -QScalar::one());
    return NormalElement(*space_, f);
  }
  NormalElement operator*(const NormalElement& o) const {
    requireSameSpace(o);
    return NormalElement(*space_, space_->multiply(toFree(), o.toFree()));
  }
  NormalElement scaled(const QScalar& c) const {
    return NormalElement(*space_, freeScale(toFree(), c));
  }
  bool operator==(const NormalElement& o) const { return (*this - o).isZero(); }

  std::string str() const {
    std::string out;
    for (const auto& [d, v] : coords_)
      for (int i = 0; i < (int)v.size(); ++i) {
        if (v[i].isZero()) continue;
        if (!out.empty()) out += " + ";
        out += v[i].str();
        if (d > 0) {
          out += " * ";
          for (int letter : space_->basis(d)[i]) out += "x[" + std::to_string(letter) + "]";
        }
      }
    return out.empty() ? "0" : out;
  }

  // Parses "coeff * x[i]x[j]... + ...".  Coefficients use the QScalar text
  // format; a missing coefficient means 1, a missing monomial means degree 0.
  static NormalElement parse(BraidedSpace& space, const std::string& text) {
    FreeTensor total;
    size_t pos = 0;
    bool negate = false;
    auto skipWs = [&] { while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos; };
    skipWs();
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      negate = text[pos] == '-';
      ++pos;
    }
    while (true) {
      skipWs();
      if (pos >= text.size()) break;
      // One term: everything up to the next top-level +/-.
      size_t start = pos;
      int depth = 0;
      while (pos < text.size()) {
        char c = text[pos];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (depth == 0 && (c == '+' || c == '-') && pos > start) break;
        ++pos;
      }
      std::string term = text.substr(start, pos - start);
      size_t xpos = term.find("x[");
      std::string coeffText = xpos == std::string::npos ? term : term.substr(0, xpos);
      // Trim a trailing '*' and whitespace off the coefficient part.
      while (!coeffText.empty() &&
             (std::isspace((unsigned char)coeffText.back()) || coeffText.back() == '*'))
        coeffText.pop_back();
      QScalar coeff = coeffText.empty() ? QScalar::one() : QScalar::parse(coeffText);
      if (negate) coeff = -coeff;
      Word w;
      if (xpos != std::string::npos) {
        size_t p = xpos;
        while (p < term.size()) {
          if (std::isspace((unsigned char)term[p])) { ++p; continue; }
          if (term.compare(p, 2, "x[") != 0) throw ParseError("bad monomial in: " + term);
          size_t close = term.find(']', p + 2);
          if (close == std::string::npos) throw ParseError("unterminated index in: " + term);
          int idx = std::stoi(term.substr(p + 2, close - p - 2));
          if (idx < 0 || idx >= space.n()) throw ParseError("index out of range in: " + term);
          w.push_back(idx);
          p = close + 1;
        }
      }
      addTerm(total, w, coeff);
      if (pos < text.size()) {
        negate = text[pos] == '-';
        ++pos;
      }
    }
    return NormalElement(space, total);
  }

 private:
  void requireSameSpace(const NormalElement& o) const {
    if (space_ != o.space_) throw ModelValidationError("NormalElement model mismatch");
  }
  BraidedSpace* space_;
  std::map<int, std::vector<QScalar>> coords_;
};

}  // namespace braidkit
