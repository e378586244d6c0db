#include "deepcva/eval/kappa.hpp"

#include <map>

namespace deepcva::eval {

double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size() || a.empty()) {
    throw LengthMismatch("cohen_kappa: ratings of length " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  const double n = static_cast<double>(a.size());
  std::map<std::string, double> ma, mb;
  double agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma[a[i]] += 1;
    mb[b[i]] += 1;
    if (a[i] == b[i]) agree += 1;
  }
  const double po = agree / n;
  double pe = 0;
  for (const auto& [category, count] : ma) {
    auto it = mb.find(category);
    if (it != mb.end()) pe += (count / n) * (it->second / n);
  }
  if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

}  // namespace deepcva::eval
