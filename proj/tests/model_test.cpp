#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "doctest.h"
#include "deepcva/model/cvss2.hpp"
#include "deepcva/model/model.hpp"
#include "support/gradcheck.hpp"
#include "support/model_fixtures.hpp"

using namespace deepcva;
using namespace deepcva::model;
using deepcva::tensor::Rng;

namespace {

Tensor random_tensor(Rng& rng, std::vector<std::size_t> shape, double lo = -1, double hi = 1) {
  std::vector<double> v(tensor::numel_of(shape));
  for (auto& x : v) x = tensor::uniform(rng, lo, hi);
  return Tensor(std::move(shape), std::move(v), true);
}

GruParams random_gru(Rng& rng, std::size_t in, std::size_t h) {
  return {random_tensor(rng, {in, h}), random_tensor(rng, {in, h}), random_tensor(rng, {in, h}),
          random_tensor(rng, {h, h}),  random_tensor(rng, {h, h}),  random_tensor(rng, {h, h}),
          random_tensor(rng, {h}),     random_tensor(rng, {h}),     random_tensor(rng, {h})};
}

GruParams zero_gru(std::size_t in, std::size_t h) {
  return {Tensor::zeros({in, h}), Tensor::zeros({in, h}), Tensor::zeros({in, h}),
          Tensor::zeros({h, h}),  Tensor::zeros({h, h}),  Tensor::zeros({h, h}),
          Tensor::zeros({h}),     Tensor::zeros({h}),     Tensor::zeros({h})};
}

std::vector<Tensor> gru_tensors(const GruParams& p) {
  return {p.w_z, p.w_r, p.w_h, p.u_z, p.u_r, p.u_h, p.b_z, p.b_r, p.b_h};
}

// Plain-double attention used as an oracle for one batch row.
std::vector<double> attention_oracle(const std::vector<std::vector<double>>& h,
                                     const std::vector<bool>& mask, const AttentionParams& p,
                                     std::vector<double>* weights = nullptr) {
  const std::size_t hd = h[0].size(), ad = p.b_a.numel();
  const auto wa = p.w_a.values(), ba = p.b_a.values(), ws = p.w_s.values();
  std::vector<double> scores;
  for (const auto& row : h) {
    double s = 0;
    for (std::size_t a = 0; a < ad; ++a) {
      double z = ba[a];
      for (std::size_t k = 0; k < hd; ++k) z += row[k] * wa[k * ad + a];
      s += std::tanh(z) * ws[a];
    }
    scores.push_back(s);
  }
  double mx = -1e300;
  for (std::size_t t = 0; t < h.size(); ++t) if (mask[t]) mx = std::max(mx, scores[t]);
  std::vector<double> w(h.size(), 0.0);
  double total = 0;
  for (std::size_t t = 0; t < h.size(); ++t) if (mask[t]) total += (w[t] = std::exp(scores[t] - mx));
  std::vector<double> out(hd, 0.0);
  for (std::size_t t = 0; t < h.size(); ++t) {
    w[t] /= total;
    for (std::size_t k = 0; k < hd; ++k) out[k] += w[t] * h[t][k];
  }
  if (weights) *weights = w;
  return out;
}

AttentionParams random_attention(Rng& rng, std::size_t h, std::size_t a) {
  return {random_tensor(rng, {h, a}), random_tensor(rng, {a}), random_tensor(rng, {a, 1})};
}

std::vector<double> row(const Tensor& t, std::size_t r) {
  const std::size_t w = t.dim(1);
  return {t.values().begin() + r * w, t.values().begin() + (r + 1) * w};
}

}  // namespace

TEST_CASE("gru_step: zero weights halve the previous state") {
  const Tensor x({1, 3}, {0.3, -0.2, 0.9});
  const Tensor h({1, 2}, {0.8, -0.4});
  const auto out = gru_step(x, h, zero_gru(3, 2));
  CHECK(out.values()[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(out.values()[1] == doctest::Approx(-0.2).epsilon(1e-15));
}

TEST_CASE("gru_step: a closed update gate keeps the previous state") {
  Rng rng(3);
  auto p = random_gru(rng, 3, 4);
  for (auto& v : p.b_z.mutable_values()) v = -1e3;
  const auto x = random_tensor(rng, {2, 3});
  const auto h = random_tensor(rng, {2, 4});
  const auto out = gru_step(x, h, p);
  for (std::size_t i = 0; i < out.numel(); ++i) CHECK(out.values()[i] == doctest::Approx(h.values()[i]).epsilon(1e-12));
}

TEST_CASE("gru_step: gradients of all nine weight groups match finite differences") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    auto p = random_gru(rng, 3, 4);
    auto x = random_tensor(rng, {2, 3});
    auto h = random_tensor(rng, {2, 4});
    const auto proj = random_tensor(rng, {2, 4}).detach();
    auto params = gru_tensors(p);
    params.push_back(x);
    params.push_back(h);
    const auto res = testing::grad_check(
        [&] { return tensor::sum(tensor::mul(gru_step(x, h, p), proj)); }, params);
    CHECK_MESSAGE(res.max_rel_error < 1e-4, res.worst);
  }
}

TEST_CASE("gru_step rejects inconsistent shapes") {
  Rng rng(1);
  const auto p = random_gru(rng, 3, 4);
  CHECK_THROWS_AS(gru_step(Tensor::zeros({1, 2}), Tensor::zeros({1, 4}), p), tensor::ShapeMismatch);
  CHECK_THROWS_AS(gru_step(Tensor::zeros({1, 3}), Tensor::zeros({1, 5}), p), tensor::ShapeMismatch);
}

TEST_CASE("gru_sequence equals repeated gru_step from a zero state") {
  Rng rng(9);
  const auto p = random_gru(rng, 3, 4);
  const auto x = random_tensor(rng, {2, 5, 3});
  const auto seq = gru_sequence(x, p);
  auto h = Tensor::zeros({2, 4});
  for (std::size_t t = 0; t < 5; ++t) {
    h = gru_step(tensor::time_step(x, t), h, p);
    const auto expect = tensor::time_step(seq, t);
    for (std::size_t i = 0; i < h.numel(); ++i) CHECK(expect.values()[i] == doctest::Approx(h.values()[i]).epsilon(1e-12));
  }
}

TEST_CASE("attention_pool: zero projection averages the real positions") {
  Rng rng(4);
  const auto h = random_tensor(rng, {1, 4, 3});
  AttentionParams p{Tensor::zeros({3, 2}), Tensor::zeros({2}), random_tensor(rng, {2, 1})};
  const std::vector<std::uint8_t> mask = {1, 0, 1, 1};
  const auto out = attention_pool(h, mask, p);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto v = h.values();
    const double mean = (v[0 * 3 + k] + v[2 * 3 + k] + v[3 * 3 + k]) / 3.0;
    CHECK(out.values()[k] == doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("attention_pool: a single position is returned unchanged") {
  Rng rng(5);
  const auto h = random_tensor(rng, {1, 1, 4});
  const auto out = attention_pool(h, std::vector<std::uint8_t>{1}, random_attention(rng, 4, 3));
  for (std::size_t k = 0; k < 4; ++k) CHECK(out.values()[k] == doctest::Approx(h.values()[k]).epsilon(1e-14));
}

TEST_CASE("attention_pool matches a scalar oracle; duplicates get equal weight") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t b = 2, t = 1 + tensor::uniform_index(rng, 6), hd = 3;
    auto h = random_tensor(rng, {b, t, hd});
    if (t >= 2) {
      auto v = h.mutable_values();
      std::copy_n(v.begin(), hd, v.begin() + (t - 1) * hd);  // row 0: last position duplicates first
    }
    std::vector<std::uint8_t> mask(b * t);
    for (std::size_t r = 0; r < b; ++r) {
      for (std::size_t i = 0; i < t; ++i) mask[r * t + i] = tensor::uniform01(rng) < 0.7;
      mask[r * t] = 1;
      if (t >= 2) mask[r * t + t - 1] = 1;
    }
    const auto p = random_attention(rng, hd, 4);
    const auto out = attention_pool(h, mask, p);
    for (std::size_t r = 0; r < b; ++r) {
      std::vector<std::vector<double>> rows;
      std::vector<bool> m;
      for (std::size_t i = 0; i < t; ++i) {
        rows.emplace_back(h.values().begin() + (r * t + i) * hd, h.values().begin() + (r * t + i + 1) * hd);
        m.push_back(mask[r * t + i]);
      }
      std::vector<double> w;
      const auto expect = attention_oracle(rows, m, p, &w);
      for (std::size_t k = 0; k < hd; ++k) CHECK(out.values()[r * hd + k] == doctest::Approx(expect[k]).epsilon(1e-12));
      if (r == 0 && t >= 2) CHECK(w.front() == doctest::Approx(w.back()).epsilon(1e-15));
    }
  }
}

TEST_CASE("attention_pool: fully masked row") {
  Rng rng(7);
  const auto h = random_tensor(rng, {1, 3, 2});
  const auto p = random_attention(rng, 2, 2);
  const std::vector<std::uint8_t> none(3, 0);
  CHECK_THROWS_AS(attention_pool(h, none, p), AllMasked);
  const auto out = attention_pool(h, none, p, MaskFallback::uniform);
  const auto v = h.values();
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(out.values()[k] == doctest::Approx((v[k] + v[2 + k] + v[4 + k]) / 3).epsilon(1e-12));
  }
}

TEST_CASE("encode_commits: default configuration yields a 1536-wide commit vector") {
  ModelConfig config;
  config.validate();
  CHECK(config.commit_vector_size() == 1536);
  tensor::NoGradGuard no_grad;
  const auto params = init_params(config, 1);
  auto p = params;
  Rng rng(2);
  std::vector<tokenizer::EncodedCommit> commits = {testing::random_commit(rng, config)};
  const auto vec = encode_commits(p, config, testing::pointers(commits), Mode::infer, rng);
  CHECK(vec.shape() == std::vector<std::size_t>{1, 1536});
}

TEST_CASE("encode_commits: reduced shapes, ablations and an all-PAD side") {
  auto config = testing::reduced_config();
  Rng rng(8);
  std::vector<tokenizer::EncodedCommit> commits;
  for (int i = 0; i < 3; ++i) commits.push_back(testing::random_commit(rng, config));
  commits[1].ids[2].assign(config.n, tokenizer::kPadId);
  commits[1].masks[2].assign(config.n, 0);
  const auto batch = testing::pointers(commits);
  SUBCASE("attention") {
    auto params = init_params(config, 1);
    const auto vec = encode_commits(params, config, batch, Mode::train, rng);
    CHECK(vec.shape() == std::vector<std::size_t>{3, 96});
    for (double v : vec.values()) CHECK(std::isfinite(v));
  }
  SUBCASE("no attention") {
    config.attention = false;
    auto params = init_params(config, 1);
    const auto vec = encode_commits(params, config, batch, Mode::infer, rng);
    CHECK(vec.shape() == std::vector<std::size_t>{3, 96});
    for (double v : vec.values()) CHECK(std::isfinite(v));
  }
  SUBCASE("hunks only, single filter size") {
    config.inputs = 2;
    config.filter_sizes = {3};
    auto params = init_params(config, 1);
    const auto vec = encode_commits(params, config, batch, Mode::infer, rng);
    CHECK(vec.shape() == std::vector<std::size_t>{3, 16});
  }
  SUBCASE("wrong sequence length") {
    auto params = init_params(config, 1);
    commits[0].ids[3].resize(config.n - 1);
    CHECK_THROWS_AS(encode_commits(params, config, testing::pointers(commits), Mode::infer, rng),
                    tensor::ShapeMismatch);
  }
}

TEST_CASE("encode_commits: inputs are encoded independently before concatenation") {
  const auto config = testing::reduced_config();
  Rng rng(10);
  auto params = init_params(config, 4);
  std::vector<tokenizer::EncodedCommit> commits = {testing::random_commit(rng, config)};
  commits.push_back(commits[0]);
  commits[1].ids[3] = testing::random_commit(rng, config).ids[3];
  REQUIRE(commits[1].ids[3] != commits[0].ids[3]);
  const auto vec = encode_commits(params, config, testing::pointers(commits), Mode::infer, rng);
  const std::size_t side = config.commit_vector_size() / config.inputs;
  const auto a = row(vec, 0), b = row(vec, 1);
  CHECK(std::equal(a.begin(), a.begin() + 3 * side, b.begin()));
  CHECK(!std::equal(a.begin() + 3 * side, a.end(), b.begin() + 3 * side));
}

TEST_CASE("encode_commits is sensitive to token order") {
  const auto config = testing::reduced_config();
  Rng rng(11);
  auto params = init_params(config, 5);
  for (int trial = 0; trial < 10; ++trial) {
    tokenizer::EncodedCommit c = testing::random_commit(rng, config);
    for (auto& ids : c.ids) {
      for (std::size_t t = 0; t < config.n; ++t) ids[t] = static_cast<std::int32_t>(2 + t);
    }
    auto reversed = c;
    for (auto& ids : reversed.ids) std::reverse(ids.begin(), ids.end());
    std::vector<tokenizer::EncodedCommit> commits = {c, reversed};
    const auto vec = encode_commits(params, config, testing::pointers(commits), Mode::infer, rng);
    CHECK(row(vec, 0) != row(vec, 1));
  }
}

TEST_CASE("predict: zero output layer gives uniform probabilities and label 0") {
  const auto config = testing::reduced_config();
  auto params = init_params(config, 2);
  for (auto& head : params.heads) {
    std::fill(head.w_p.mutable_values().begin(), head.w_p.mutable_values().end(), 0.0);
    std::fill(head.b_p.mutable_values().begin(), head.b_p.mutable_values().end(), 0.0);
  }
  Rng rng(12);
  std::vector<tokenizer::EncodedCommit> commits = {testing::random_commit(rng, config)};
  const auto preds = predict(params, config, testing::pointers(commits));
  REQUIRE(preds.size() == 1);
  REQUIRE(preds[0].tasks.size() == 7);
  for (const auto& t : preds[0].tasks) {
    CHECK(t.label == 0);
    for (double p : t.probs) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }
}

TEST_CASE("predict: heads are independent, normalised and shift invariant") {
  const auto config = testing::reduced_config();
  auto params = init_params(config, 3);
  Rng rng(13);
  std::vector<tokenizer::EncodedCommit> commits;
  for (int i = 0; i < 4; ++i) commits.push_back(testing::random_commit(rng, config));
  const auto batch = testing::pointers(commits);
  const auto base = predict(params, config, batch);
  for (const auto& p : base) {
    for (const auto& t : p.tasks) {
      CHECK(std::accumulate(t.probs.begin(), t.probs.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(t.label == argmax(t.probs));
    }
  }
  SUBCASE("perturbing one task block leaves the other heads unchanged") {
    for (auto& v : params.heads[0].w_t.mutable_values()) v += 0.5;
    const auto after = predict(params, config, batch);
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(after[i].tasks[0].probs != base[i].tasks[0].probs);
      for (std::size_t t = 1; t < 7; ++t) CHECK(after[i].tasks[t].probs == base[i].tasks[t].probs);
    }
  }
  SUBCASE("adding a constant to every logit of one task") {
    for (auto& v : params.heads[2].b_p.mutable_values()) v += 3.25;
    const auto after = predict(params, config, batch);
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::size_t c = 0; c < 3; ++c) {
        CHECK(after[i].tasks[2].probs[c] == doctest::Approx(base[i].tasks[2].probs[c]).epsilon(1e-12));
      }
    }
  }
  SUBCASE("inference is bitwise repeatable") {
    const auto again = predict(params, config, batch);
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (std::size_t t = 0; t < 7; ++t) CHECK(again[i].tasks[t].probs == base[i].tasks[t].probs);
    }
  }
}

TEST_CASE("argmax breaks ties toward the lowest index") {
  CHECK(argmax(std::vector<double>{0.2, 0.4, 0.4}) == 1);
  CHECK(argmax(std::vector<double>{0.5, 0.5}) == 0);
  CHECK(argmax(std::vector<double>{1.0}) == 0);
}

TEST_CASE("multi_task_loss anchors") {
  std::vector<std::vector<std::int32_t>> labels(7, {2, 0});
  SUBCASE("perfect one-hot predictions") {
    std::vector<Tensor> probs(7, Tensor({2, 3}, {0, 0, 1, 1, 0, 0}));
    CHECK(multi_task_loss(probs, labels).item() < 1e-6);
  }
  SUBCASE("uniform predictions over seven three-class tasks") {
    std::vector<Tensor> probs(7, Tensor::filled({2, 3}, 1.0 / 3));
    CHECK(std::abs(multi_task_loss(probs, labels).item() - 7 * std::log(3.0)) < 1e-6);
    std::vector<Tensor> logits(7, Tensor::zeros({2, 3}));
    CHECK(std::abs(multi_task_loss_from_logits(logits, labels).item() - 7 * std::log(3.0)) < 1e-6);
  }
  SUBCASE("a zero probability is clamped") {
    std::vector<Tensor> probs(7, Tensor({2, 3}, {1, 0, 0, 1, 0, 0}));
    const double loss = multi_task_loss(probs, labels).item();
    CHECK(std::isfinite(loss));
    CHECK(loss == doctest::Approx(7 * -std::log(1e-12) / 2).epsilon(1e-9));
  }
}

TEST_CASE("multi_task_loss gradient w.r.t. logits is prob minus one-hot") {
  Rng rng(14);
  const std::size_t b = 3;
  std::vector<Tensor> logits;
  std::vector<std::vector<std::int32_t>> labels;
  for (int t = 0; t < 7; ++t) {
    logits.push_back(random_tensor(rng, {b, 3}, -2, 2));
    std::vector<std::int32_t> y;
    for (std::size_t i = 0; i < b; ++i) y.push_back(static_cast<std::int32_t>(tensor::uniform_index(rng, 3)));
    labels.push_back(y);
  }
  std::vector<Tensor> probs;
  for (const auto& l : logits) probs.push_back(tensor::softmax(l));
  tensor::backward(multi_task_loss(probs, labels));
  for (std::size_t t = 0; t < 7; ++t) {
    const auto lv = logits[t].values();
    for (std::size_t i = 0; i < b; ++i) {
      double mx = *std::max_element(lv.begin() + i * 3, lv.begin() + i * 3 + 3), z = 0;
      for (std::size_t c = 0; c < 3; ++c) z += std::exp(lv[i * 3 + c] - mx);
      for (std::size_t c = 0; c < 3; ++c) {
        const double p = std::exp(lv[i * 3 + c] - mx) / z;
        const double expect = (p - (static_cast<std::int32_t>(c) == labels[t][i] ? 1.0 : 0.0)) / b;
        CHECK(logits[t].grad()[i * 3 + c] == doctest::Approx(expect).epsilon(1e-9));
      }
    }
  }
  const auto res = testing::grad_check([&] { return multi_task_loss_from_logits(logits, labels); }, logits);
  CHECK_MESSAGE(res.max_rel_error < 1e-4, res.worst);
}

TEST_CASE("full model gradients match finite differences at the reduced configuration") {
  const auto config = testing::reduced_config();
  const auto full = testing::model_grad_check(config, 100, true);
  CHECK_MESSAGE(full.max_rel_error < 1e-4, full.worst);
  for (std::uint64_t seed = 101; seed < 104; ++seed) {
    const auto res = testing::model_grad_check(config, seed, false);
    CHECK_MESSAGE(res.max_rel_error < 1e-4, res.worst);
  }
}

TEST_CASE("batch_labels follows head order and rejects unknown heads") {
  auto config = testing::reduced_config();
  Rng rng(15);
  std::vector<tokenizer::EncodedCommit> commits = {testing::random_commit(rng, config)};
  const auto all = batch_labels(config, testing::pointers(commits));
  REQUIRE(all.size() == 7);
  for (auto task : kAllTasks) CHECK(all[static_cast<std::size_t>(task)][0] == commits[0].labels[task]);
  config.tasks = {{"authentication", 3}};
  CHECK(batch_labels(config, testing::pointers(commits))[0][0] == commits[0].labels[Task::authentication]);
  config.tasks = {{"exploitability", 3}};
  CHECK_THROWS_AS(batch_labels(config, testing::pointers(commits)), ConfigError);
}

TEST_CASE("model config validation and canonical form") {
  ModelConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(ModelConfig::from_canonical(c.canonical()) == c);
  auto big = c;
  big.filter_sizes = {1, 2000};
  CHECK_THROWS_AS(big.validate(), ConfigError);
  auto none = c;
  none.filter_sizes.clear();
  CHECK_THROWS_AS(none.validate(), ConfigError);
  auto unary = c;
  unary.tasks[0].n_labels = 1;
  CHECK_THROWS_AS(unary.validate(), ConfigError);
  auto r = testing::reduced_config();
  r.dropout_rate = 0.125;
  r.attention = false;
  CHECK(ModelConfig::from_canonical(r.canonical()) == r);
}

TEST_CASE("params: initialisation is seeded and checkpoints round-trip") {
  const auto config = testing::reduced_config();
  auto a = init_params(config, 77);
  const auto b = init_params(config, 77);
  const auto c = init_params(config, 78);
  const auto ta = a.trainable(), tb = b.trainable(), tc = c.trainable();
  CHECK(ta[0].values()[0] == tb[0].values()[0]);
  CHECK(std::vector<double>(ta[0].values().begin(), ta[0].values().end()) !=
        std::vector<double>(tc[0].values().begin(), tc[0].values().end()));
  for (double v : a.embedding.values()) CHECK(std::abs(v) <= 0.05);
  for (const auto& h : a.heads) for (double v : h.b_t.values()) CHECK(v == 0.0);

  Rng rng(16);
  std::vector<tokenizer::EncodedCommit> commits = {testing::random_commit(rng, config), testing::random_commit(rng, config)};
  const auto batch = testing::pointers(commits);
  // Move batch-norm statistics away from their initial values first.
  tensor::NoGradGuard no_grad;
  encode_commits(a, config, batch, Mode::train, rng);
  const auto before = predict(a, config, batch);
  const auto bytes = tensor::serialize_checkpoint(to_checkpoint(a, config, 77));
  auto [restored, restored_config] = from_checkpoint(tensor::deserialize_checkpoint(bytes));
  CHECK(restored_config == config);
  const auto after = predict(restored, config, batch);
  for (std::size_t i = 0; i < before.size(); ++i) {
    for (std::size_t t = 0; t < 7; ++t) CHECK(after[i].tasks[t].probs == before[i].tasks[t].probs);
  }
  auto copy = clone(a);
  copy.embedding.mutable_values()[0] += 1.0;
  CHECK(copy.embedding.values()[0] != a.embedding.values()[0]);
}

// Independent evaluation of the CVSS v2 base equations, keyed by label text.
double cvss_oracle(const CvssAssessment& a) {
  const std::map<std::string, double> impact = {{"None", 0.0}, {"Partial", 0.275}, {"Complete", 0.660}};
  const std::map<std::string, double> av = {{"Local", 0.395}, {"Adjacent Network", 0.646}, {"Network", 1.0}};
  const std::map<std::string, double> ac = {{"High", 0.35}, {"Medium", 0.61}, {"Low", 0.71}};
  const std::map<std::string, double> au = {{"Multiple", 0.45}, {"Single", 0.56}, {"None", 0.704}};
  const auto name = [&](Task t) { return label_name(t, a[t]); };
  const double imp = 10.41 * (1 - (1 - impact.at(name(Task::confidentiality))) *
                                      (1 - impact.at(name(Task::integrity))) *
                                      (1 - impact.at(name(Task::availability))));
  const double expl = 20 * av.at(name(Task::access_vector)) * ac.at(name(Task::access_complexity)) *
                      au.at(name(Task::authentication));
  const double f = imp == 0 ? 0 : 1.176;
  return std::round(((0.6 * imp) + (0.4 * expl) - 1.5) * f * 10) / 10;
}

CvssAssessment assessment(const char* c, const char* i, const char* a, const char* av, const char* ac, const char* au) {
  CvssAssessment out;
  out.values[0] = parse_label(Task::confidentiality, c);
  out.values[1] = parse_label(Task::integrity, i);
  out.values[2] = parse_label(Task::availability, a);
  out.values[3] = parse_label(Task::access_vector, av);
  out.values[4] = parse_label(Task::access_complexity, ac);
  out.values[5] = parse_label(Task::authentication, au);
  return out;
}

TEST_CASE("CVSS v2 severity examples") {
  const auto high = assessment("Complete", "Complete", "Complete", "Network", "Low", "None");
  CHECK(cvss2_base_score(high) == 10.0);
  CHECK(label_name(Task::severity, cvss2_severity_from_metrics(high)) == "High");
  const auto zero = assessment("None", "None", "None", "Network", "Low", "None");
  CHECK(cvss2_base_score(zero) == 0.0);
  CHECK(label_name(Task::severity, cvss2_severity_from_metrics(zero)) == "Low");
  const auto medium = assessment("Partial", "None", "None", "Network", "Low", "None");
  CHECK(cvss2_base_score(medium) == 5.0);
  CHECK(label_name(Task::severity, cvss2_severity_from_metrics(medium)) == "Medium");
}

TEST_CASE("CVSS v2 score agrees with the oracle on every metric combination") {
  for (int code = 0; code < 729; ++code) {
    CvssAssessment a;
    int rest = code;
    for (int k = 0; k < 6; ++k, rest /= 3) a.values[k] = static_cast<std::uint8_t>(rest % 3);
    const double score = cvss2_base_score(a);
    CHECK(score == doctest::Approx(cvss_oracle(a)).epsilon(1e-12));
    const char* band = score >= 7.0 ? "High" : score >= 4.0 ? "Medium" : "Low";
    CHECK(label_name(Task::severity, cvss2_severity_from_metrics(a)) == band);
  }
  CHECK(severity_band(3.9) == 0);
  CHECK(severity_band(4.0) == 1);
  CHECK(severity_band(6.9) == 1);
  CHECK(severity_band(7.0) == 2);
}
