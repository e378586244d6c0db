#include "deepcva/model/params.hpp"

#include <cmath>

#include "deepcva/tensor/random.hpp"

namespace deepcva::model {

namespace {

using tensor::Rng;
using tensor::Shape;

Tensor uniform_tensor(Rng& rng, Shape shape, double limit) {
  std::vector<double> v(tensor::numel_of(shape));
  for (auto& x : v) x = tensor::uniform(rng, -limit, limit);
  return Tensor(std::move(shape), std::move(v), true);
}

Tensor glorot(Rng& rng, Shape shape, std::size_t fan_in, std::size_t fan_out) {
  return uniform_tensor(rng, std::move(shape), std::sqrt(6.0 / double(fan_in + fan_out)));
}

Tensor zeros(std::size_t n) { return Tensor::zeros({n}, true); }

template <typename F>
void for_each_tensor(const ModelParams& p, F&& visit, bool with_stats) {
  visit("embedding", p.embedding);
  for (std::size_t i = 0; i < p.branches.size(); ++i) {
    const auto& b = p.branches[i];
    const std::string pre = "branch" + std::to_string(i) + ".";
    visit(pre + "filters", b.filters);
    visit(pre + "conv_bias", b.conv_bias);
    visit(pre + "bn_gamma", b.bn_gamma);
    visit(pre + "bn_beta", b.bn_beta);
    if (with_stats) {
      visit(pre + "bn_running_mean", b.bn.running_mean);
      visit(pre + "bn_running_var", b.bn.running_var);
    }
    const auto& g = b.gru;
    visit(pre + "gru.w_z", g.w_z);
    visit(pre + "gru.w_r", g.w_r);
    visit(pre + "gru.w_h", g.w_h);
    visit(pre + "gru.u_z", g.u_z);
    visit(pre + "gru.u_r", g.u_r);
    visit(pre + "gru.u_h", g.u_h);
    visit(pre + "gru.b_z", g.b_z);
    visit(pre + "gru.b_r", g.b_r);
    visit(pre + "gru.b_h", g.b_h);
    visit(pre + "attn.w_a", b.attention.w_a);
    visit(pre + "attn.b_a", b.attention.b_a);
    visit(pre + "attn.w_s", b.attention.w_s);
  }
  for (std::size_t i = 0; i < p.heads.size(); ++i) {
    const auto& h = p.heads[i];
    const std::string pre = "head" + std::to_string(i) + ".";
    visit(pre + "w_t", h.w_t);
    visit(pre + "b_t", h.b_t);
    visit(pre + "w_p", h.w_p);
    visit(pre + "b_p", h.b_p);
  }
}

// Same traversal as for_each_tensor but yielding mutable slots.
template <typename F>
void for_each_slot(ModelParams& p, F&& visit) {
  const ModelParams& view = p;
  std::vector<Tensor*> slots;
  slots.push_back(&p.embedding);
  for (auto& b : p.branches) {
    for (Tensor* t : {&b.filters, &b.conv_bias, &b.bn_gamma, &b.bn_beta, &b.bn.running_mean,
                      &b.bn.running_var, &b.gru.w_z, &b.gru.w_r, &b.gru.w_h, &b.gru.u_z,
                      &b.gru.u_r, &b.gru.u_h, &b.gru.b_z, &b.gru.b_r, &b.gru.b_h,
                      &b.attention.w_a, &b.attention.b_a, &b.attention.w_s}) {
      slots.push_back(t);
    }
  }
  for (auto& h : p.heads) {
    for (Tensor* t : {&h.w_t, &h.b_t, &h.w_p, &h.b_p}) slots.push_back(t);
  }
  std::size_t i = 0;
  for_each_tensor(
      view, [&](const std::string& name, const Tensor&) { visit(name, *slots[i++]); }, true);
}

}  // namespace

std::vector<Tensor> ModelParams::trainable() const {
  std::vector<Tensor> out;
  for_each_tensor(*this, [&](const std::string&, const Tensor& t) { out.push_back(t); }, false);
  return out;
}

std::vector<std::pair<std::string, Tensor>> ModelParams::named() const {
  std::vector<std::pair<std::string, Tensor>> out;
  for_each_tensor(
      *this, [&](const std::string& name, const Tensor& t) { out.emplace_back(name, t); }, true);
  return out;
}

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(tensor::derive_seed(seed, "model.init"));
  const auto l = config.l, f = config.f, h = config.gru_hidden, a = config.attn_hidden;
  ModelParams p;
  p.embedding = uniform_tensor(rng, {config.vocab_size, l}, 0.05);
  for (auto k : config.filter_sizes) {
    BranchParams b;
    b.width = k;
    b.filters = glorot(rng, {k, l, f}, k * l, k * f);
    b.conv_bias = zeros(f);
    b.bn_gamma = Tensor::filled({f}, 1.0, true);
    b.bn_beta = zeros(f);
    b.bn.running_mean = Tensor::zeros({f});
    b.bn.running_var = Tensor::filled({f}, 1.0);
    b.gru.w_z = glorot(rng, {f, h}, f, h);
    b.gru.w_r = glorot(rng, {f, h}, f, h);
    b.gru.w_h = glorot(rng, {f, h}, f, h);
    b.gru.u_z = glorot(rng, {h, h}, h, h);
    b.gru.u_r = glorot(rng, {h, h}, h, h);
    b.gru.u_h = glorot(rng, {h, h}, h, h);
    b.gru.b_z = zeros(h);
    b.gru.b_r = zeros(h);
    b.gru.b_h = zeros(h);
    b.attention.w_a = glorot(rng, {h, a}, h, a);
    b.attention.b_a = zeros(a);
    b.attention.w_s = glorot(rng, {a, 1}, a, 1);
    p.branches.push_back(std::move(b));
  }
  const auto d = config.commit_vector_size();
  for (const auto& task : config.tasks) {
    HeadParams head;
    head.w_t = glorot(rng, {d, config.task_hidden}, d, config.task_hidden);
    head.b_t = zeros(config.task_hidden);
    head.w_p = glorot(rng, {config.task_hidden, task.n_labels}, config.task_hidden, task.n_labels);
    head.b_p = zeros(task.n_labels);
    p.heads.push_back(std::move(head));
  }
  return p;
}

ModelParams clone(const ModelParams& params) {
  ModelParams out = params;
  for_each_slot(out, [](const std::string&, Tensor& t) {
    t = Tensor(t.shape(), std::vector<double>(t.values().begin(), t.values().end()),
               t.requires_grad());
  });
  return out;
}

void copy_values(const ModelParams& src, ModelParams& dst) {
  const auto from = src.named();
  std::size_t i = 0;
  for_each_slot(dst, [&](const std::string& name, Tensor& t) {
    const auto& s = from[i++].second;
    if (s.shape() != t.shape()) {
      throw tensor::ShapeMismatch("copy_values: " + name + " " + tensor::shape_str(s.shape()) +
                                  " vs " + tensor::shape_str(t.shape()));
    }
    std::copy(s.values().begin(), s.values().end(), t.mutable_values().begin());
  });
}

tensor::Checkpoint to_checkpoint(const ModelParams& params, const ModelConfig& config,
                                 std::uint64_t seed) {
  tensor::Checkpoint ck;
  ck.config = config.canonical();
  ck.config_hash = tensor::fnv1a_hash(ck.config);
  ck.seed = seed;
  for (auto& [name, t] : params.named()) ck.tensors.emplace_back(name, t.detach());
  return ck;
}

std::pair<ModelParams, ModelConfig> from_checkpoint(const tensor::Checkpoint& checkpoint) {
  ModelConfig config;
  try {
    config = ModelConfig::from_canonical(checkpoint.config);
  } catch (const ConfigError& e) {
    throw tensor::CheckpointError(std::string("checkpoint config: ") + e.what());
  }
  auto params = init_params(config, checkpoint.seed);
  for_each_slot(params, [&](const std::string& name, Tensor& t) {
    const Tensor* stored = checkpoint.find(name);
    if (!stored) throw tensor::CheckpointError("checkpoint lacks tensor " + name);
    if (stored->shape() != t.shape()) {
      throw tensor::CheckpointError("checkpoint tensor " + name + " has shape " +
                                    tensor::shape_str(stored->shape()) + ", expected " +
                                    tensor::shape_str(t.shape()));
    }
    std::copy(stored->values().begin(), stored->values().end(), t.mutable_values().begin());
  });
  return {std::move(params), std::move(config)};
}

}  // namespace deepcva::model
