#include "deepcva/baselines/runner.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "deepcva/baselines/classifiers.hpp"
#include "deepcva/baselines/kmeans.hpp"
#include "deepcva/baselines/xcva.hpp"
#include "deepcva/eval/metrics.hpp"
#include "deepcva/tensor/random.hpp"

namespace deepcva::baselines {

namespace {

struct RoundData {
  std::vector<SparseVector> train_x, val_x, test_x;
  std::vector<CvssAssessment> train_y, val_y, test_y;
};

std::vector<int> task_column(std::span<const CvssAssessment> labels, Task task) {
  std::vector<int> out;
  for (const auto& l : labels) out.push_back(l[task]);
  return out;
}

double task_mcc(std::span<const int> truth, std::span<const int> predicted, std::size_t classes) {
  return eval::mcc_multiclass(eval::confusion_matrix(truth, predicted, classes));
}

double mean_mcc(std::span<const CvssAssessment> truth, std::span<const CvssAssessment> predicted) {
  double s = 0;
  for (const auto& score : eval::score_tasks(truth, predicted)) s += score.mcc;
  return s / static_cast<double>(kTaskCount);
}

std::vector<Candidate> grid_for(ClassifierKind kind, std::span<const SparseVector> xs, std::span<const int> ys,
                                std::size_t n_classes) {
  return kind == ClassifierKind::lr ? logreg_grid(xs, ys, n_classes) : knn_grid(xs, ys, n_classes);
}

std::vector<CvssAssessment> run_scva(const RoundData& d, const BaselineOptions& o, std::uint64_t seed) {
  std::vector<CvssAssessment> predicted(d.test_x.size());
  for (auto task : kAllTasks) {
    const auto n_classes = label_count(task);
    LabeledSet view{d.train_x, task_column(d.train_y, task)};
    auto grown = oversample(view, o.oversample, o.smote_k,
                            tensor::derive_seed(seed, "oversample", static_cast<std::uint64_t>(task)));
    const auto val_truth = task_column(d.val_y, task);
    const auto grid = grid_for(o.classifier, grown.data.xs, grown.data.ys, n_classes);
    auto best = grid_search(grid, d.val_x, [&](const std::vector<int>& p) {
      return task_mcc(val_truth, p, n_classes);
    }, o.threads);
    spdlog::debug("{}: {} selected", task_name(task), grid[best.best].name);
    const auto p = best.model->predict_all(d.test_x);
    for (std::size_t i = 0; i < p.size(); ++i) predicted[i][task] = static_cast<std::uint8_t>(p[i]);
  }
  return predicted;
}

std::vector<CvssAssessment> run_xcva(const RoundData& d, const BaselineOptions& o) {
  // Composite codes seen in training become classes 0..m-1 in code order.
  std::map<std::uint32_t, int> class_of;
  for (const auto& l : d.train_y) class_of.emplace(xcva_encode(l), 0);
  std::vector<std::uint32_t> code_of;
  for (auto& [code, cls] : class_of) {
    cls = static_cast<int>(code_of.size());
    code_of.push_back(code);
  }
  std::vector<int> ys;
  for (const auto& l : d.train_y) ys.push_back(class_of.at(xcva_encode(l)));
  const auto decode = [&](const std::vector<int>& classes) {
    std::vector<CvssAssessment> out;
    for (int c : classes) out.push_back(xcva_decode(code_of.at(static_cast<std::size_t>(c))));
    return out;
  };
  const auto grid = grid_for(o.classifier, d.train_x, ys, code_of.size());
  auto best = grid_search(grid, d.val_x, [&](const std::vector<int>& p) {
    return mean_mcc(d.val_y, decode(p));
  }, o.threads);
  spdlog::debug("x-cva: {} composites, {} selected", code_of.size(), grid[best.best].name);
  return decode(best.model->predict_all(d.test_x));
}

std::vector<CvssAssessment> run_ucva(const RoundData& d, const BaselineOptions& o, std::uint64_t seed) {
  std::vector<std::size_t> ks;
  for (auto k : ucva_k_grid()) {
    if (k <= d.train_x.size()) ks.push_back(k);
  }
  if (ks.empty()) ks.push_back(1);
  std::vector<ClusterModel> models(ks.size());
  std::vector<double> scores(ks.size());
  eval::parallel_for(ks.size(), o.threads, [&](std::size_t i) {
    models[i] = train_ucva(d.train_x, d.train_y, ks[i], tensor::derive_seed(seed, "ucva", ks[i]));
    std::vector<CvssAssessment> p;
    for (const auto& x : d.val_x) p.push_back(models[i].predict(x));
    scores[i] = mean_mcc(d.val_y, p);
  });
  const auto best = static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
  spdlog::debug("u-cva: k = {} selected", ks[best]);
  std::vector<CvssAssessment> out;
  for (const auto& x : d.test_x) out.push_back(models[best].predict(x));
  return out;
}

}  // namespace

std::string method_name(const BaselineOptions& o) {
  std::string name;
  switch (o.model) {
    case BaselineModel::scva: name = "s-cva"; break;
    case BaselineModel::xcva: name = "x-cva"; break;
    case BaselineModel::ucva: return "u-cva/bow";
  }
  name += o.classifier == ClassifierKind::lr ? "/lr/bow" : "/knn/bow";
  if (o.oversample == OversampleMethod::ros) name += "+ros";
  if (o.oversample == OversampleMethod::smote) name += "+smote(k=" + std::to_string(o.smote_k) + ")";
  return name;
}

eval::ExperimentResult run_baseline(std::span<const io::CommitText> dataset, const BaselineOptions& options) {
  if (options.oversample != OversampleMethod::none && options.model != BaselineModel::scva) {
    throw std::invalid_argument("oversampling applies to the single-task (scva) baseline only");
  }
  std::vector<std::int64_t> timestamps;
  for (const auto& c : dataset) timestamps.push_back(c.timestamp);
  const auto plan = eval::time_split(timestamps, options.n_folds);
  if (options.rounds == 0 || options.rounds > plan.rounds.size()) {
    throw std::invalid_argument("rounds must be in [1, " + std::to_string(plan.rounds.size()) + "]");
  }
  const auto started = std::chrono::steady_clock::now();
  std::vector<eval::RunResult> runs;
  eval::Timings timings;
  for (std::size_t r = 0; r < options.rounds; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& round = plan.rounds[r];
    const auto train_idx = plan.train_indices(round);
    const auto vocab = eval::build_vocab_from(dataset, train_idx, options.max_vocab);
    RoundData d;
    const auto fill = [&](std::span<const std::size_t> idx, std::vector<SparseVector>& xs,
                          std::vector<CvssAssessment>& ys) {
      for (auto i : idx) {
        xs.push_back(bow_featurize(dataset[i].inputs, vocab));
        ys.push_back(dataset[i].labels);
      }
    };
    fill(train_idx, d.train_x, d.train_y);
    fill(plan.val_indices(round), d.val_x, d.val_y);
    fill(plan.test_indices(round), d.test_x, d.test_y);

    eval::RunResult run;
    run.round = round.number;
    run.seed = eval::run_seed(options.seed, round.number, 0);
    std::vector<CvssAssessment> predicted;
    switch (options.model) {
      case BaselineModel::scva: predicted = run_scva(d, options, run.seed); break;
      case BaselineModel::xcva: predicted = run_xcva(d, options); break;
      case BaselineModel::ucva: predicted = run_ucva(d, options, run.seed); break;
    }
    run.tasks = eval::score_tasks(d.test_y, predicted);
    eval::finish_run(run);
    spdlog::info("round {}: mean test MCC {:.4f}", round.number, run.mean_mcc);
    runs.push_back(std::move(run));
    timings.run_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  eval::ExperimentResult result;
  result.report = eval::aggregate(method_name(options), std::move(runs));
  result.timings = std::move(timings);
  result.timings.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace deepcva::baselines
