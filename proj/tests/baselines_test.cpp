#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "deepcva/baselines/classifiers.hpp"
#include "deepcva/baselines/features.hpp"
#include "deepcva/baselines/kmeans.hpp"
#include "deepcva/baselines/oversample.hpp"
#include "deepcva/baselines/runner.hpp"
#include "deepcva/baselines/xcva.hpp"
#include "deepcva/eval/metrics.hpp"
#include "support/dataset_fixtures.hpp"

using namespace deepcva;
using namespace deepcva::baselines;

namespace {

SparseVector point(std::initializer_list<double> v) {
  return SparseVector::from_dense(std::vector<double>(v));
}

// Two Gaussian-ish blobs in 2-D around (0,0) and (10,10).
LabeledSet blobs(std::size_t per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<> noise(-1, 1);
  LabeledSet s;
  for (int label = 0; label < 2; ++label) {
    for (std::size_t i = 0; i < per_class; ++i) {
      const double c = label * 10.0;
      s.xs.push_back(point({c + noise(rng), c + noise(rng)}));
      s.ys.push_back(label);
    }
  }
  return s;
}

CvssAssessment random_labels(std::mt19937_64& rng) {
  CvssAssessment a;
  for (auto t : kAllTasks) a[t] = static_cast<std::uint8_t>(rng() % label_count(t));
  return a;
}

double dense_sq_distance(const SparseVector& x, const std::vector<double>& c) {
  double s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += (x.at(i) - c[i]) * (x.at(i) - c[i]);
  return s;
}

}  // namespace

TEST_CASE("bow_featurize") {
  std::vector<std::string> docs = {"a ; a b"};
  const auto vocab = tokenizer::build_vocab(docs);
  const std::size_t v = vocab.size();
  const auto x = bow_featurize({"a ; a", "", "zzz", "b"}, vocab);
  CHECK(x.dim == 4 * v);
  CHECK(x.at(static_cast<std::size_t>(vocab.id("a"))) == 2);
  CHECK(x.at(static_cast<std::size_t>(vocab.id(";"))) == 1);
  for (std::size_t i = v; i < 2 * v; ++i) REQUIRE(x.at(i) == 0);  // empty side
  CHECK(x.at(2 * v + tokenizer::kUnkId) == 1);
  CHECK(x.at(3 * v + static_cast<std::size_t>(vocab.id("b"))) == 1);
  CHECK(bow_featurize({"a ; a", "", "zzz", "b"}, vocab) == x);
  double total = 0;
  for (double c : x.value) total += c;
  CHECK(total == 5);
}

TEST_CASE("sparse helpers agree with dense arithmetic") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(12), b(12);
    for (std::size_t i = 0; i < 12; ++i) {
      a[i] = rng() % 3 ? 0.0 : static_cast<double>(rng() % 7);
      b[i] = rng() % 3 ? 0.0 : static_cast<double>(rng() % 7);
    }
    const auto sa = SparseVector::from_dense(a), sb = SparseVector::from_dense(b);
    double l1 = 0, l2 = 0, d = 0;
    for (std::size_t i = 0; i < 12; ++i) {
      l1 += std::abs(a[i] - b[i]);
      l2 += (a[i] - b[i]) * (a[i] - b[i]);
      d += a[i] * b[i];
    }
    CHECK(manhattan_distance(sa, sb) == l1);
    CHECK(squared_distance(sa, sb) == l2);
    CHECK(dot(sa, b) == d);
    CHECK(squared_distance(sa, sa.squared_norm(), b, sb.squared_norm()) == doctest::Approx(l2));
    CHECK(interpolate(sa, sb, 0.0) == sa);
    CHECK(interpolate(sa, sb, 1.0) == sb);
  }
}

TEST_CASE("logistic regression separates a separable toy set") {
  const auto s = blobs(20, 2);
  for (auto penalty : {Penalty::l1, Penalty::l2}) {
    const auto m = LogisticRegression::fit(s.xs, s.ys, 2, {.penalty = penalty, .c = 100});
    CHECK(m->predict_all(s.xs) == s.ys);
  }
  const auto m = LogisticRegression::fit(s.xs, s.ys, 3, {.c = 10});
  const auto* lr = dynamic_cast<const LogisticRegression*>(m.get());
  REQUIRE(lr);
  const auto p = lr->probabilities(s.xs[0]);
  CHECK(p.size() == 3);
  CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
  CHECK(p[2] < p[0]);  // a class with no training examples
}

TEST_CASE("single-class training gives a constant classifier") {
  const auto s = blobs(5, 3);
  const std::vector<int> ones(s.xs.size(), 1);
  CHECK(single_class(ones));
  for (auto* m : {LogisticRegression::fit(s.xs, ones, 3, {}).release(),
                  KNearestNeighbors::fit(s.xs, ones, 3, 11, 2).release()}) {
    CHECK(dynamic_cast<ConstantClassifier*>(m));
    CHECK(m->predict(point({100, -100})) == 1);
    delete m;
  }
}

TEST_CASE("k nearest neighbours") {
  SUBCASE("eleven agreeing neighbours decide") {
    LabeledSet s;
    for (int i = 0; i < 11; ++i) {
      s.xs.push_back(point({static_cast<double>(i) * 0.1, 0}));
      s.ys.push_back(2);
    }
    for (int i = 0; i < 30; ++i) {
      s.xs.push_back(point({50.0 + i, 0}));
      s.ys.push_back(i % 2);
    }
    for (int p : {1, 2}) CHECK(KNearestNeighbors::fit(s.xs, s.ys, 3, 11, p)->predict(point({0.3, 0.1})) == 2);
  }
  SUBCASE("vote ties go to the lower label, distance ties to the lower index") {
    LabeledSet s{{point({1, 0}), point({-1, 0}), point({0, 1})}, {1, 0, 1}};
    CHECK(KNearestNeighbors::fit(s.xs, s.ys, 2, 2, 2)->predict(point({0, 0})) == 0);
    // k=1: three equidistant points, index 0 wins.
    CHECK(KNearestNeighbors::fit(s.xs, s.ys, 2, 1, 2)->predict(point({0, 0})) == 1);
  }
  SUBCASE("k beyond the training set uses every point") {
    LabeledSet s{{point({1, 0}), point({2, 0}), point({3, 0})}, {1, 1, 0}};
    CHECK(KNearestNeighbors::fit(s.xs, s.ys, 2, 51, 1)->predict(point({3, 0})) == 1);
  }
}

TEST_CASE("grid search picks the best validation MCC") {
  std::mt19937_64 rng(4);
  LabeledSet train, val;
  for (int i = 0; i < 120; ++i) {
    const int y = static_cast<int>(rng() % 3);
    auto x = point({y + std::uniform_real_distribution<>(-1.5, 1.5)(rng), std::uniform_real_distribution<>(-1, 1)(rng)});
    (i < 80 ? train : val).xs.push_back(x);
    (i < 80 ? train : val).ys.push_back(y);
  }
  const auto score = [&](const std::vector<int>& p) {
    return eval::mcc_multiclass(eval::confusion_matrix(val.ys, p, 3));
  };
  for (bool lr : {true, false}) {
    const auto grid = lr ? logreg_grid(train.xs, train.ys, 3) : knn_grid(train.xs, train.ys, 3);
    CHECK(grid.size() == (lr ? 10u : 6u));
    const auto result = grid_search(grid, val.xs, score, 2);
    // Exhaustive re-evaluation.
    std::size_t best = 0;
    double best_score = -2;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double s = score(grid[i].fit()->predict_all(val.xs));
      CHECK(s == result.scores[i]);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    CHECK(result.best == best);
    CHECK(result.model->describe() == grid[best].name);
  }
}

TEST_CASE("x-cva composite labels") {
  CHECK(xcva_composite_count() == 2187);
  std::set<std::uint32_t> seen;
  for (std::uint32_t code = 0; code < xcva_composite_count(); ++code) {
    const auto a = xcva_decode(code);
    REQUIRE(xcva_encode(a) == code);
    seen.insert(code);
  }
  CHECK_THROWS_AS(xcva_decode(2187), UnknownComposite);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_labels(rng);
    REQUIRE(xcva_decode(xcva_encode(a)) == a);
    auto b = a;
    const auto t = kAllTasks[rng() % kTaskCount];
    b[t] = static_cast<std::uint8_t>((b[t] + 1) % label_count(t));
    REQUIRE(xcva_encode(b) != xcva_encode(a));
  }
}

TEST_CASE("x-cva density: 1209 samples over 39 composites") {
  std::mt19937_64 rng(7);
  std::set<std::uint32_t> pool;
  while (pool.size() < 39) pool.insert(xcva_encode(random_labels(rng)));
  const std::vector<std::uint32_t> codes(pool.begin(), pool.end());
  std::map<std::uint32_t, std::size_t> counts;
  for (std::size_t i = 0; i < 1209; ++i) ++counts[xcva_encode(xcva_decode(codes[i % codes.size()]))];
  CHECK(counts.size() == 39);
  CHECK(1209 / counts.size() == 31);
  for (const auto& [code, n] : counts) CHECK(n == 31);
}

TEST_CASE("k-means and u-cva") {
  std::mt19937_64 rng(8);
  SUBCASE("k = 1 predicts the global majority") {
    std::vector<SparseVector> xs;
    std::vector<CvssAssessment> ys;
    for (int i = 0; i < 30; ++i) {
      xs.push_back(point({static_cast<double>(rng() % 10), static_cast<double>(rng() % 10)}));
      ys.push_back(random_labels(rng));
    }
    const auto m = train_ucva(xs, ys, 1, 1);
    const auto majority = majority_labels(ys);
    for (int i = 0; i < 10; ++i) CHECK(m.predict(point({static_cast<double>(i), -3.0})) == majority);
  }
  SUBCASE("two separated blobs give blob-pure predictions") {
    const auto s = blobs(25, 9);
    std::vector<CvssAssessment> ys;
    CvssAssessment a, b;
    for (auto t : kAllTasks) b[t] = 2;
    for (int y : s.ys) ys.push_back(y ? b : a);
    const auto m = train_ucva(s.xs, ys, 2, 3);
    const auto test = blobs(10, 10);
    for (std::size_t i = 0; i < test.xs.size(); ++i) CHECK(m.predict(test.xs[i]) == (test.ys[i] ? b : a));
  }
  SUBCASE("equidistant point goes to the lower centroid") {
    const std::vector<std::vector<double>> c = {{1, 0}, {-1, 0}};
    CHECK(nearest_centroid(point({0, 5}), c) == 0);
    const std::vector<std::vector<double>> r = {{-1, 0}, {1, 0}};
    CHECK(nearest_centroid(point({0, 5}), r) == 0);
  }
  SUBCASE("assignments and predictions match a brute-force oracle") {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<SparseVector> xs;
      std::vector<CvssAssessment> ys;
      for (int i = 0; i < 40; ++i) {
        std::vector<double> v(6);
        for (auto& e : v) e = static_cast<double>(rng() % 5);
        xs.push_back(SparseVector::from_dense(v));
        ys.push_back(random_labels(rng));
      }
      const std::size_t k = 2 + rng() % 6;
      const auto km = kmeans(xs, k, trial);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        double best = 1e300;
        for (const auto& c : km.centroids) best = std::min(best, dense_sq_distance(xs[i], c));
        REQUIRE(dense_sq_distance(xs[i], km.centroids[km.assignment[i]]) == doctest::Approx(best));
      }
      const auto m = train_ucva(xs, ys, k, trial);
      for (int q = 0; q < 20; ++q) {
        std::vector<double> v(6);
        for (auto& e : v) e = static_cast<double>(rng() % 5) + 0.5;
        const auto x = SparseVector::from_dense(v);
        std::size_t nearest = 0;
        for (std::size_t c = 1; c < m.centroids.size(); ++c) {
          if (dense_sq_distance(x, m.centroids[c]) < dense_sq_distance(x, m.centroids[nearest])) nearest = c;
        }
        std::vector<CvssAssessment> members;
        const auto assign = kmeans(xs, k, trial).assignment;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          if (assign[i] == nearest) members.push_back(ys[i]);
        }
        REQUIRE(m.predict(x) == (members.empty() ? majority_labels(ys) : majority_labels(members)));
      }
    }
  }
  SUBCASE("more clusters than distinct points") {
    std::vector<SparseVector> xs(6, point({1, 1}));
    xs.push_back(point({5, 5}));
    const auto km = kmeans(xs, 4, 2);
    CHECK(km.centroids.size() == 4);
    CHECK(km.inertia == doctest::Approx(0.0));
  }
  CHECK(ucva_k_grid() == std::vector<std::size_t>{2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30, 35, 40, 45, 50});
}

TEST_CASE("oversampling") {
  LabeledSet s;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const int y = i < 90 ? 0 : 1;
    s.xs.push_back(point({y * 5.0 + static_cast<double>(rng() % 100) / 10, static_cast<double>(rng() % 100) / 10}));
    s.ys.push_back(y);
  }
  SUBCASE("ROS duplicates minority members up to the majority count") {
    const auto r = oversample(s, OversampleMethod::ros, 5, 1);
    CHECK(std::count(r.data.ys.begin(), r.data.ys.end(), 0) == 90);
    CHECK(std::count(r.data.ys.begin(), r.data.ys.end(), 1) == 90);
    for (std::size_t i = 100; i < r.data.xs.size(); ++i) {
      CHECK(std::find(s.xs.begin() + 90, s.xs.end(), r.data.xs[i]) != s.xs.end());
    }
    CHECK(std::equal(s.xs.begin(), s.xs.end(), r.data.xs.begin()));
  }
  SUBCASE("balanced input is unchanged") {
    LabeledSet b{{point({1}), point({2})}, {0, 1}};
    for (auto m : {OversampleMethod::ros, OversampleMethod::smote}) {
      const auto r = oversample(b, m, 1, 1);
      CHECK(r.data.xs == b.xs);
      CHECK(r.data.ys == b.ys);
    }
  }
  SUBCASE("SMOTE points lie on segments to true nearest neighbours") {
    for (std::size_t k : kSmoteNeighborChoices) {
      if (k >= 10) continue;  // the minority class has 10 members
      const auto r = oversample(s, OversampleMethod::smote, k, k);
      CHECK(std::count(r.data.ys.begin(), r.data.ys.end(), 1) == 90);
      CHECK(r.synthetic.size() == 80);
      for (const auto& sp : r.synthetic) {
        // Brute-force k nearest within the class.
        std::vector<std::pair<double, std::size_t>> d;
        for (std::size_t j = 90; j < 100; ++j) {
          if (j != sp.base) d.emplace_back(squared_distance(s.xs[sp.base], s.xs[j]), j);
        }
        std::sort(d.begin(), d.end());
        bool among = false;
        for (std::size_t j = 0; j < k; ++j) among |= d[j].second == sp.neighbor;
        CHECK(among);
        const auto& x = s.xs[sp.base].dense();
        const auto& n = s.xs[sp.neighbor].dense();
        const auto p = r.data.xs[sp.row].dense();
        for (std::size_t c = 0; c < x.size(); ++c) CHECK(std::abs(p[c] - (x[c] + sp.u * (n[c] - x[c]))) < 1e-9);
        CHECK(sp.u >= 0.0);
        CHECK(sp.u < 1.0);
      }
    }
  }
  SUBCASE("SMOTE falls back to ROS for small classes") {
    const auto r = oversample(s, OversampleMethod::smote, 10, 1);
    CHECK(r.synthetic.empty());
    CHECK(std::count(r.data.ys.begin(), r.data.ys.end(), 1) == 90);
  }
  CHECK_THROWS_AS(oversample(s, OversampleMethod::smote, 3, 1), std::invalid_argument);
}

TEST_CASE("run_baseline end to end") {
  const auto data = testing::synthetic_texts(48, 12);
  BaselineOptions o;
  o.rounds = 2;
  o.seed = 5;
  for (auto model : {BaselineModel::scva, BaselineModel::xcva, BaselineModel::ucva}) {
    o.model = model;
    for (auto kind : {ClassifierKind::lr, ClassifierKind::knn}) {
      o.classifier = kind;
      const auto a = run_baseline(data, o);
      CHECK(a.report.runs.size() == 2);
      const auto b = run_baseline(data, o);
      CHECK(eval::report_to_json(a.report).dump() == eval::report_to_json(b.report).dump());
      if (model == BaselineModel::ucva) break;
    }
  }
  o.model = BaselineModel::scva;
  o.classifier = ClassifierKind::knn;
  o.oversample = OversampleMethod::smote;
  o.smote_k = 1;
  CHECK(run_baseline(data, o).report.method == "s-cva/knn/bow+smote(k=1)");
  o.model = BaselineModel::xcva;
  CHECK_THROWS_AS(run_baseline(data, o), std::invalid_argument);
}
