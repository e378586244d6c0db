#include "deepcva/baselines/oversample.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "deepcva/tensor/random.hpp"

namespace deepcva::baselines {

namespace {

std::vector<std::size_t> nearest_neighbours(const LabeledSet& set, const std::vector<std::size_t>& members,
                                            std::size_t of, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (auto m : members) {
    if (m != of) d.emplace_back(squared_distance(set.xs[of], set.xs[m]), m);
  }
  const auto kk = std::min(k, d.size());
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kk), d.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kk; ++i) out.push_back(d[i].second);
  return out;
}

}  // namespace

OversampleResult oversample(const LabeledSet& train, OversampleMethod method, std::size_t smote_k,
                            std::uint64_t seed) {
  if (train.xs.size() != train.ys.size()) throw std::invalid_argument("features and labels differ in length");
  if (method == OversampleMethod::smote &&
      std::find(std::begin(kSmoteNeighborChoices), std::end(kSmoteNeighborChoices), smote_k) ==
          std::end(kSmoteNeighborChoices)) {
    throw std::invalid_argument("smote k must be one of 1, 5, 10, 15, 20");
  }
  OversampleResult result;
  result.data = train;
  if (method == OversampleMethod::none || train.xs.empty()) return result;

  std::map<int, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < train.ys.size(); ++i) classes[train.ys[i]].push_back(i);
  std::size_t target = 0;
  for (const auto& [label, members] : classes) target = std::max(target, members.size());

  for (const auto& [label, members] : classes) {
    if (members.size() == target) continue;
    tensor::Rng rng(tensor::derive_seed(seed, "oversample", static_cast<std::uint64_t>(label)));
    bool smote = method == OversampleMethod::smote;
    if (smote && members.size() <= smote_k) {
      spdlog::warn("class {} has {} samples, not more than smote k = {}; using random oversampling", label,
                   members.size(), smote_k);
      smote = false;
    }
    std::map<std::size_t, std::vector<std::size_t>> neighbours;
    for (std::size_t n = members.size(); n < target; ++n) {
      const auto base = members[tensor::uniform_index(rng, members.size())];
      if (!smote) {
        result.data.xs.push_back(train.xs[base]);
        result.data.ys.push_back(label);
        continue;
      }
      auto it = neighbours.find(base);
      if (it == neighbours.end()) it = neighbours.emplace(base, nearest_neighbours(train, members, base, smote_k)).first;
      const auto nn = it->second[tensor::uniform_index(rng, it->second.size())];
      const double u = tensor::uniform01(rng);
      result.synthetic.push_back({result.data.xs.size(), base, nn, u});
      result.data.xs.push_back(interpolate(train.xs[base], train.xs[nn], u));
      result.data.ys.push_back(label);
    }
  }
  return result;
}

}  // namespace deepcva::baselines
