#pragma once

#include <string>
#include <vector>

namespace braidkit {

// One verified identity instance: an identity id, the location in the
// underlying text it comes from, the degree (or total degree) at which it was
// checked, and the outcome. residual is "0" on success, otherwise a sample
// nonzero residual entry in QScalar text form.
struct CheckItem {
  std::string id;
  std::string anchor;
  int degree = 0;
  bool pass = false;
  std::string residual = "0";
};

inline bool allPass(const std::vector<CheckItem>& items) {
  for (const auto& it : items)
    if (!it.pass) return false;
  return true;
}

}  // namespace braidkit
