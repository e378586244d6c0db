#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "deepcva/baselines/oversample.hpp"
#include "deepcva/eval/experiment.hpp"

namespace deepcva::baselines {

enum class BaselineModel { scva, xcva, ucva };
enum class ClassifierKind { lr, knn };

struct BaselineOptions {
  BaselineModel model = BaselineModel::scva;
  ClassifierKind classifier = ClassifierKind::lr;  // scva and xcva
  OversampleMethod oversample = OversampleMethod::none;  // scva only
  std::size_t smote_k = 5;
  std::size_t n_folds = eval::kDefaultFolds;
  std::size_t rounds = eval::kDefaultFolds - 2;
  std::size_t max_vocab = tokenizer::kDefaultVocabSize;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

std::string method_name(const BaselineOptions& options);

/// Same protocol as the neural model: per round a training-fold vocabulary,
/// BoW features, grid search on the validation fold, scores on the test
/// fold. One run per round. Oversampling touches only the training view.
eval::ExperimentResult run_baseline(std::span<const io::CommitText> dataset, const BaselineOptions& options);

}  // namespace deepcva::baselines
