#include "deepcva/model/model.hpp"

#include <spdlog/spdlog.h>

#include "deepcva/tokenizer/vocab.hpp"

namespace deepcva::model {

using namespace tensor;

Tensor encode_commits(ModelParams& params, const ModelConfig& config, Batch batch, Mode mode,
                      Rng& rng) {
  const bool train = mode == Mode::train;
  const std::size_t sides = config.inputs, b = batch.size(), n = config.n;
  if (b == 0) throw std::invalid_argument("encode_commits: empty batch");
  // Row s * b + i holds input s of commit i, so every side shares one pass.
  std::vector<std::int32_t> ids;
  ids.reserve(sides * b * n);
  for (std::size_t s = 0; s < sides; ++s) {
    for (const auto* commit : batch) {
      const auto& seq = commit->ids[s];
      if (seq.size() != n) {
        throw ShapeMismatch("encode_commits: " + std::string(tokenizer::kInputNames[s]) +
                            " has " + std::to_string(seq.size()) + " ids, expected n=" +
                            std::to_string(n));
      }
      ids.insert(ids.end(), seq.begin(), seq.end());
    }
  }
  const std::size_t rows = sides * b;
  auto x = reshape(embedding_lookup(params.embedding, ids), {rows, n, config.l});

  std::vector<Tensor> branch_out;
  for (auto& branch : params.branches) {
    const std::size_t steps = n - branch.width + 1;
    auto conv = relu(conv1d(x, branch.filters, branch.conv_bias));
    auto normed = batch_norm(conv, branch.bn_gamma, branch.bn_beta, branch.bn, train);
    auto states = gru_sequence(normed, branch.gru);
    std::vector<std::uint8_t> valid(rows * steps);
    std::vector<std::size_t> last(rows, steps - 1);
    for (std::size_t r = 0; r < rows; ++r) {
      bool any = false;
      for (std::size_t t = 0; t < steps; ++t) {
        const bool real = ids[r * n + t] != tokenizer::kPadId;
        valid[r * steps + t] = real;
        if (real) last[r] = t;
        any = any || real;
      }
      if (!any) spdlog::debug("input row {} has no real token; pooling falls back", r);
    }
    branch_out.push_back(config.attention
                             ? attention_pool(states, valid, branch.attention,
                                              MaskFallback::uniform)
                             : gather_steps(states, last));
  }
  auto per_row = concat(branch_out, 1);
  std::vector<Tensor> per_side;
  for (std::size_t s = 0; s < sides; ++s) per_side.push_back(slice(per_row, 0, s * b, b));
  return dropout(concat(per_side, 1), config.dropout_rate, rng, train);
}

std::vector<Tensor> head_logits(const ModelParams& params, const ModelConfig& config,
                                const Tensor& commit_vectors, Mode mode, Rng& rng) {
  const bool train = mode == Mode::train;
  std::vector<Tensor> out;
  out.reserve(params.heads.size());
  for (const auto& head : params.heads) {
    auto hidden = relu(add(matmul(commit_vectors, head.w_t), head.b_t));
    hidden = dropout(hidden, config.dropout_rate, rng, train);
    out.push_back(add(matmul(hidden, head.w_p), head.b_p));
  }
  return out;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<Prediction> predict_vectors(const ModelParams& params, const ModelConfig& config,
                                        const Tensor& commit_vectors) {
  NoGradGuard no_grad;
  Rng unused(0);
  const auto logits = head_logits(params, config, commit_vectors, Mode::infer, unused);
  const std::size_t b = commit_vectors.dim(0);
  std::vector<Prediction> out(b);
  for (const auto& task_logits : logits) {
    const auto probs = softmax(task_logits);
    const std::size_t c = probs.dim(1);
    for (std::size_t i = 0; i < b; ++i) {
      TaskPrediction p;
      p.probs.assign(probs.values().begin() + i * c, probs.values().begin() + (i + 1) * c);
      p.label = argmax(p.probs);
      out[i].tasks.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<Prediction> predict(ModelParams& params, const ModelConfig& config, Batch batch) {
  NoGradGuard no_grad;
  Rng unused(0);
  return predict_vectors(params, config,
                         encode_commits(params, config, batch, Mode::infer, unused));
}

Tensor multi_task_loss(std::span<const Tensor> probs,
                       std::span<const std::vector<std::int32_t>> labels) {
  if (probs.size() != labels.size() || probs.empty()) {
    throw std::invalid_argument("multi_task_loss: " + std::to_string(probs.size()) +
                                " prediction sets for " + std::to_string(labels.size()) +
                                " label sets");
  }
  Tensor total = nll_loss(probs[0], labels[0]);
  for (std::size_t i = 1; i < probs.size(); ++i) total = add(total, nll_loss(probs[i], labels[i]));
  return total;
}

Tensor multi_task_loss_from_logits(std::span<const Tensor> logits,
                                   std::span<const std::vector<std::int32_t>> labels) {
  if (logits.size() != labels.size() || logits.empty()) {
    throw std::invalid_argument("multi_task_loss_from_logits: " + std::to_string(logits.size()) +
                                " heads for " + std::to_string(labels.size()) + " label sets");
  }
  Tensor total = cross_entropy(logits[0], labels[0]);
  for (std::size_t i = 1; i < logits.size(); ++i) {
    total = add(total, cross_entropy(logits[i], labels[i]));
  }
  return total;
}

std::vector<std::vector<std::int32_t>> batch_labels(const ModelConfig& config, Batch batch) {
  std::vector<std::vector<std::int32_t>> out;
  for (const auto& spec : config.tasks) {
    const auto task = task_of(spec);
    if (!task) throw ConfigError("head '" + spec.name + "' is not a CVSS task");
    std::vector<std::int32_t> column;
    column.reserve(batch.size());
    for (const auto* commit : batch) column.push_back(commit->labels[*task]);
    out.push_back(std::move(column));
  }
  return out;
}

Tensor batch_loss(ModelParams& params, const ModelConfig& config, Batch batch, Rng& rng) {
  const auto vectors = encode_commits(params, config, batch, Mode::train, rng);
  const auto logits = head_logits(params, config, vectors, Mode::train, rng);
  const auto labels = batch_labels(config, batch);
  return multi_task_loss_from_logits(logits, labels);
}

}  // namespace deepcva::model
