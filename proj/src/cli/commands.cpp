#include "deepcva/cli/commands.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "deepcva/baselines/runner.hpp"
#include "deepcva/cli/settings.hpp"
#include "deepcva/context/inputs.hpp"
#include "deepcva/eval/experiment.hpp"
#include "deepcva/eval/split.hpp"
#include "deepcva/io/atomic_file.hpp"
#include "deepcva/io/json_io.hpp"
#include "deepcva/miner/dedup.hpp"
#include "deepcva/miner/filter.hpp"
#include "deepcva/miner/git_repo.hpp"
#include "deepcva/miner/normalize.hpp"
#include "deepcva/miner/process.hpp"
#include "deepcva/miner/szz.hpp"
#include "deepcva/model/cvss2.hpp"
#include "deepcva/tensor/checkpoint.hpp"

namespace deepcva::cli {

namespace {

using io::Json;
namespace fs = std::filesystem;

fs::path output_path(const Settings& s, const std::string& fallback) { return s.get_string("out", fallback); }

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  auto stem = p;
  stem.replace_extension();
  return stem.string() + suffix;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

miner::GitRepo open_repo(const Settings& s) {
  const fs::path dir = s.require("repo");
  if (!fs::exists(dir)) throw io::MissingInput("repository " + dir.string() + " does not exist");
  return miner::GitRepo(dir, s.get_string("repo_id", dir.filename().string()));
}

eval::TrainOptions train_options(const Settings& s) {
  eval::TrainOptions o;
  o.max_epochs = s.get_uint("epochs", o.max_epochs);
  o.batch_size = s.get_uint("batch_size", o.batch_size);
  o.learning_rate = s.get_double("lr", o.learning_rate);
  o.patience = s.get_uint("patience", o.patience);
  o.min_delta = s.get_double("min_delta", o.min_delta);
  return o;
}

std::vector<io::CommitText> read_corpus(const Settings& s) {
  return io::read_jsonl_as<io::CommitText>(s.require("corpus"), io::commit_text_from_json);
}

std::vector<tokenizer::EncodedCommit> read_encoded(const Settings& s) {
  return io::read_jsonl_as<tokenizer::EncodedCommit>(s.require("data"), io::encoded_from_json);
}

// ---- mining ---------------------------------------------------------------

int cmd_mine(const Settings& s, std::ostream& out) {
  const auto repo = open_repo(s);
  const auto manifest = io::read_jsonl_as<miner::VfcRecord>(s.require("manifest"), io::vfc_from_json);
  std::vector<miner::VfcRecord> candidates;
  for (auto row : manifest) {
    if (!row.commit.repo_id.empty() && row.commit.repo_id != repo.repo_id()) {
      spdlog::debug("{}: belongs to repository {}; skipped", row.commit.commit_hash, row.commit.repo_id);
      continue;
    }
    row.commit = repo.load_commit(row.commit.commit_hash);
    candidates.push_back(std::move(row));
  }
  const auto kept = miner::filter_vfcs(candidates, s.get_uint("max_files", miner::kDefaultMaxFiles),
                                       s.get_uint("max_lines", miner::kDefaultMaxLines));
  std::vector<Json> rows;
  for (auto vfc : kept) {
    vfc.commit = miner::normalize_changes(vfc.commit, miner::commit_file_loader(repo, vfc.commit));
    rows.push_back(io::vfc_to_json(vfc));
  }
  const auto path = output_path(s, "vfcs.jsonl");
  io::write_jsonl(path, rows);
  out << "mined " << rows.size() << " of " << candidates.size() << " fixing commits into " << path.string() << "\n";
  return 0;
}

int cmd_trace(const Settings& s, std::ostream& out) {
  const auto repo = open_repo(s);
  auto vfcs = io::read_jsonl_as<miner::VfcRecord>(s.require("corpus"), io::vfc_from_json);
  miner::SzzTracer tracer(repo);
  std::vector<miner::LabeledVcc> traced;
  for (auto& vfc : vfcs) {
    if (vfc.commit.repo_id != repo.repo_id()) continue;
    if (vfc.commit.files.empty()) vfc.commit = tracer.normalized(repo.resolve(vfc.commit.commit_hash));
    for (auto& t : tracer.trace(vfc)) traced.push_back({std::move(t.vcc), vfc.labels});
  }
  const auto vccs = miner::dedup_vccs(traced);
  std::vector<Json> rows;
  for (const auto& v : vccs) rows.push_back(io::vcc_to_json(v));
  const auto path = output_path(s, "vccs.jsonl");
  io::write_jsonl(path, rows);
  out << "traced " << rows.size() << " contributing commits from " << vfcs.size() << " fixes into "
      << path.string() << "\n";
  return 0;
}

int cmd_context(const Settings& s, std::ostream& out) {
  const auto repo = open_repo(s);
  auto vccs = io::read_jsonl_as<miner::VccRecord>(s.require("corpus"), io::vcc_from_json);
  std::vector<Json> rows;
  for (auto& v : vccs) {
    if (v.commit.parent_hashes.empty()) v.commit.parent_hashes = repo.parents(v.commit.commit_hash);
    const auto scopes = context::compute_scopes(v.commit, miner::commit_file_loader(repo, v.commit));
    const auto inputs = context::build_inputs(v.commit, scopes);
    io::CommitText t;
    t.commit_id = io::commit_id(v.commit.repo_id, v.commit.commit_hash);
    t.timestamp = v.commit.author_timestamp;
    t.inputs = {inputs.pre_hunks, inputs.post_hunks, inputs.pre_ctx, inputs.post_ctx};
    t.labels = v.labels;
    t.label_conflict = v.label_conflict;
    rows.push_back(io::commit_text_to_json(t));
  }
  const auto path = output_path(s, "corpus.jsonl");
  io::write_jsonl(path, rows);
  out << "wrote model inputs of " << rows.size() << " commits to " << path.string() << "\n";
  return 0;
}

// ---- model ----------------------------------------------------------------

int cmd_build_vocab(const Settings& s, std::ostream& out) {
  const auto corpus = read_corpus(s);
  std::vector<std::size_t> all(corpus.size());
  std::iota(all.begin(), all.end(), 0);
  const auto vocab = eval::build_vocab_from(corpus, all, s.get_uint("max_vocab", tokenizer::kDefaultVocabSize));
  const auto path = output_path(s, "vocab.txt");
  tokenizer::save_vocab(path, vocab);
  out << "vocabulary of " << vocab.size() << " ids written to " << path.string() << "\n";
  return 0;
}

int cmd_encode(const Settings& s, std::ostream& out) {
  const auto corpus = read_corpus(s);
  const auto vocab = tokenizer::load_vocab(s.require("vocab"));
  const auto n = s.get_uint("n", tokenizer::kDefaultLength);
  std::vector<Json> rows;
  for (const auto& c : corpus) {
    auto e = tokenizer::encode(c.inputs, vocab, n);
    e.commit_id = c.commit_id;
    e.timestamp = c.timestamp;
    e.labels = c.labels;
    e.label_conflict = c.label_conflict;
    rows.push_back(io::encoded_to_json(e));
  }
  const auto path = output_path(s, "encoded.jsonl");
  io::write_jsonl(path, rows);
  out << "encoded " << rows.size() << " commits into " << path.string() << "\n";
  return 0;
}

int cmd_train(const Settings& s, std::ostream& out) {
  auto data = read_encoded(s);
  if (data.size() < 2) throw eval::TooFewCommits("training needs at least 2 encoded commits");
  auto config = model_config(s);
  config.vocab_size = tokenizer::load_vocab(s.require("vocab")).size();
  if (const auto task_flag = s.raw("single_task")) {
    const auto task = parse_task(*task_flag);
    if (!task) throw ConfigParse("single_task", "'" + *task_flag + "' is not a CVSS task");
    config.tasks = {{std::string(task_name(*task)), label_count(*task)}};
  } else if (s.get_bool("severity_from_formula", false)) {
    config = eval::model_configs(config, {.single_task = false, .severity_from_formula = true}).front();
  }
  for (const auto& e : data) {
    for (const auto& ids : e.ids) {
      if (ids.size() != config.n) throw ConfigParse("n", "encoded inputs have length " + std::to_string(ids.size()));
    }
  }
  // The most recent twelfth validates; the rest trains.
  std::stable_sort(data.begin(), data.end(), [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  const std::size_t n_val = std::max<std::size_t>(1, data.size() / eval::kDefaultFolds);
  std::vector<const tokenizer::EncodedCommit*> train, val;
  for (std::size_t i = 0; i < data.size(); ++i) (i + n_val < data.size() ? train : val).push_back(&data[i]);

  const auto seed = s.get_uint("seed", 0);
  auto result = eval::train_model(config, train, val, train_options(s), seed);
  const auto path = output_path(s, "model.ckpt");
  tensor::save_checkpoint(path, model::to_checkpoint(result.params, config, seed));
  out << "trained " << config.tasks.size() << "-head model on " << train.size() << " commits; best epoch "
      << result.best_epoch << " of " << result.history.size() << ", validation MCC " << result.best_val_mcc
      << "; checkpoint " << path.string() << "\n";
  return 0;
}

int cmd_predict(const Settings& s, std::ostream& out) {
  auto [params, config] = model::from_checkpoint(tensor::load_checkpoint(s.require("checkpoint")));
  const auto data = read_encoded(s);
  std::vector<const tokenizer::EncodedCommit*> batch;
  for (const auto& e : data) {
    for (const auto& ids : e.ids) {
      if (ids.size() != config.n) {
        throw io::SchemaViolation("ids", e.commit_id + ": length " + std::to_string(ids.size()) +
                                             " differs from the model's " + std::to_string(config.n));
      }
    }
    batch.push_back(&e);
  }
  const auto preds = eval::predict_all(params, config, batch);
  std::vector<Json> rows;
  for (std::size_t i = 0; i < preds.size(); ++i) rows.push_back(io::prediction_to_json(data[i].commit_id, preds[i], config.tasks));
  const auto path = output_path(s, "predictions.jsonl");
  io::write_jsonl(path, rows);
  out << "predicted " << rows.size() << " commits into " << path.string() << "\n";
  return 0;
}

// ---- protocol ---------------------------------------------------------------

void write_report(const eval::ExperimentResult& r, const fs::path& path, std::ostream& out) {
  const auto table = eval::report_table(r.report);
  io::write_file_atomic(path, dump_json(eval::report_to_json(r.report)));
  io::write_file_atomic(with_suffix(path, ".txt"), table);
  io::write_file_atomic(with_suffix(path, ".timings.json"), dump_json(eval::timings_to_json(r.timings, r.report)));
  out << table << "report: " << path.string() << "\n";
}

int cmd_evaluate(const Settings& s, std::ostream& out) {
  const auto corpus = read_corpus(s);
  eval::ExperimentOptions o;
  o.config = model_config(s);
  o.train = train_options(s);
  o.ablations.single_task = s.get_bool("single_task", false);
  o.ablations.severity_from_formula = s.get_bool("severity_from_formula", false);
  o.n_folds = s.get_uint("folds", o.n_folds);
  o.rounds = s.get_uint("rounds", o.n_folds - 2);
  o.repeats = s.get_uint("repeats", o.repeats);
  o.max_vocab = s.get_uint("max_vocab", o.max_vocab);
  o.seed = s.get_uint("seed", 0);
  o.threads = s.get_uint("threads", 1);
  write_report(eval::run_experiment(corpus, o), output_path(s, "report.json"), out);
  return 0;
}

int cmd_baseline(const Settings& s, std::ostream& out) {
  const auto corpus = read_corpus(s);
  baselines::BaselineOptions o;
  const auto pick = [&](const std::string& key, const std::string& fallback,
                        const std::map<std::string, int>& choices) {
    const auto v = s.get_string(key, fallback);
    const auto it = choices.find(v);
    if (it == choices.end()) throw ConfigParse(key, "unsupported value '" + v + "'");
    return it->second;
  };
  o.model = static_cast<baselines::BaselineModel>(pick("model", "scva", {{"scva", 0}, {"xcva", 1}, {"ucva", 2}}));
  pick("features", "bow", {{"bow", 0}});
  o.classifier = static_cast<baselines::ClassifierKind>(pick("classifier", "lr", {{"lr", 0}, {"knn", 1}}));
  o.oversample =
      static_cast<baselines::OversampleMethod>(pick("oversample", "none", {{"none", 0}, {"ros", 1}, {"smote", 2}}));
  o.smote_k = s.get_uint("smote_k", o.smote_k);
  o.n_folds = s.get_uint("folds", o.n_folds);
  o.rounds = s.get_uint("rounds", o.n_folds - 2);
  o.max_vocab = s.get_uint("max_vocab", o.max_vocab);
  o.seed = s.get_uint("seed", 0);
  o.threads = s.get_uint("threads", 1);
  if (o.oversample != baselines::OversampleMethod::none && o.model != baselines::BaselineModel::scva) {
    throw ConfigParse("oversample", "only the scva baseline can be oversampled");
  }
  write_report(baselines::run_baseline(corpus, o), output_path(s, "baseline.json"), out);
  return 0;
}

// ---- plumbing ---------------------------------------------------------------

struct ErrorInfo {
  std::string kind;
  std::string message;
  std::string field;
  int code;
};

ErrorInfo failure(std::string kind, std::string message, std::string field = {}, int code = 1) {
  return {std::move(kind), std::move(message), std::move(field), code};
}

ErrorInfo describe(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const io::SchemaViolation& e) {
    return failure("SchemaViolation", e.what(), e.field());
  } catch (const io::MissingInput& e) {
    return failure("MissingInput", e.what());
  } catch (const ConfigParse& e) {
    return failure("ConfigParse", e.what(), e.key(), 2);
  } catch (const model::ConfigError& e) {
    return failure("ConfigParse", e.what(), {}, 2);
  } catch (const eval::TooFewCommits& e) {
    return failure("TooFewCommits", e.what());
  } catch (const eval::DivergedLoss& e) {
    return failure("DivergedLoss", e.what());
  } catch (const tensor::CheckpointError& e) {
    return failure("CheckpointError", e.what());
  } catch (const miner::GitError& e) {
    return failure("GitError", e.what());
  } catch (const miner::ProcessError& e) {
    return failure("ProcessError", e.what());
  } catch (const tokenizer::EmptyCorpus& e) {
    return failure("EmptyCorpus", e.what());
  } catch (const std::exception& e) {
    return failure("Error", e.what());
  }
}

void print_error(std::ostream& err, const ErrorInfo& info) {
  Json j = {{"error", info.kind}, {"message", info.message}};
  if (!info.field.empty()) j["field"] = info.field;
  err << j.dump() << "\n";
}

using Command = int (*)(const Settings&, std::ostream&);

struct Stage {
  const char* name;
  const char* help;
  Command run;
  // flag name (also the settings key with '-' as '_') and help text
  std::vector<std::pair<const char*, const char*>> values;
  std::vector<std::pair<const char*, const char*>> switches;
};

const std::vector<Stage>& stages() {
  static const std::pair<const char*, const char*> kModelFlags[] = {
      {"n", "tokens per input"}, {"l", "embedding width"}, {"filter-sizes", "comma-separated convolution widths"},
      {"f", "filters per width"}, {"gru-hidden", "GRU state size"}, {"attn-hidden", "attention size"},
      {"task-hidden", "task layer size"}, {"dropout", "dropout rate"}};
  static const std::pair<const char*, const char*> kTrainFlags[] = {
      {"epochs", "maximum epochs"}, {"batch-size", "mini-batch size"}, {"lr", "Adam learning rate"},
      {"patience", "early-stopping patience"}, {"min-delta", "minimum validation gain"}};
  const auto with = [](std::vector<std::pair<const char*, const char*>> v,
                       std::initializer_list<std::span<const std::pair<const char*, const char*>>> extra) {
    for (auto e : extra) v.insert(v.end(), e.begin(), e.end());
    return v;
  };
  static const std::vector<Stage> all = {
      {"mine", "load, filter and normalize fixing commits listed in a manifest", cmd_mine,
       {{"repo", "git repository"}, {"repo-id", "repository id"}, {"manifest", "VFC manifest (JSONL)"},
        {"max-files", "file limit"}, {"max-lines", "changed-line limit"}}, {}},
      {"trace", "trace contributing commits of mined fixes with SZZ", cmd_trace,
       {{"repo", "git repository"}, {"repo-id", "repository id"}, {"corpus", "mined VFCs (JSONL)"}}, {}},
      {"context", "extract enclosing scopes and the four model inputs", cmd_context,
       {{"repo", "git repository"}, {"repo-id", "repository id"}, {"corpus", "VCC corpus (JSONL)"}}, {}},
      {"build-vocab", "build a vocabulary from a corpus", cmd_build_vocab,
       {{"corpus", "model inputs (JSONL)"}, {"max-vocab", "tokens kept"}}, {}},
      {"encode", "encode model inputs into token ids", cmd_encode,
       {{"corpus", "model inputs (JSONL)"}, {"vocab", "vocabulary file"}, {"n", "tokens per input"}}, {}},
      {"train", "train one model and save a checkpoint", cmd_train,
       with({{"data", "encoded commits (JSONL)"}, {"vocab", "vocabulary file"},
             {"single-task", "train one head for this task"}},
            {kModelFlags, kTrainFlags}),
       {{"no-attention", "pool with the last GRU state"}, {"hunks-only", "drop the context inputs"},
        {"severity-from-formula", "no severity head"}}},
      {"evaluate", "run the time-based evaluation protocol", cmd_evaluate,
       with({{"corpus", "model inputs (JSONL)"}, {"folds", "number of folds"}, {"rounds", "rounds to run"},
             {"repeats", "seeded runs per round"}, {"max-vocab", "tokens kept per round"}},
            {kModelFlags, kTrainFlags}),
       {{"single-task", "one model per task"}, {"no-attention", "pool with the last GRU state"},
        {"hunks-only", "drop the context inputs"}, {"severity-from-formula", "severity from the CVSS formula"}}},
      {"predict", "predict CVSS metrics with a checkpoint", cmd_predict,
       {{"checkpoint", "model checkpoint"}, {"data", "encoded commits (JSONL)"}}, {}},
      {"baseline", "run a BoW baseline under the evaluation protocol", cmd_baseline,
       {{"corpus", "model inputs (JSONL)"}, {"model", "scva, xcva or ucva"}, {"features", "bow"},
        {"classifier", "lr or knn"}, {"oversample", "none, ros or smote"}, {"smote-k", "SMOTE neighbours"},
        {"folds", "number of folds"}, {"rounds", "rounds to run"}, {"max-vocab", "tokens kept per round"}},
       {}},
  };
  return all;
}

std::string key_of(const char* flag) {
  std::string k = flag;
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

void configure_logging(const Settings& s) {
  const auto level = spdlog::level::from_str(s.get_string("log_level", "info"));
  if (level == spdlog::level::off && s.get_string("log_level", "info") != "off") {
    throw ConfigParse("log_level", "unknown level '" + s.get_string("log_level", "") + "'");
  }
  spdlog::set_level(level);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings settings;
  std::string config_path;
  CLI::App app("Commit-level software vulnerability assessment", "deepcva");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");
  std::map<CLI::App*, Command> commands;
  for (const auto& stage : stages()) {
    auto* sub = app.add_subcommand(stage.name, stage.help);
    commands[sub] = stage.run;
    sub->add_option("--config", config_path, "flat key = value configuration file");
    const auto value = [&](const char* flag, const char* help) {
      sub->add_option_function<std::string>(
          std::string("--") + flag, [&settings, key = key_of(flag)](const std::string& v) { settings.set_flag(key, v); },
          help);
    };
    value("seed", "random seed");
    value("out", "output path");
    value("threads", "worker threads");
    value("log-level", "trace, debug, info, warn, error or off");
    for (const auto& [flag, help] : stage.values) value(flag, help);
    for (const auto& [flag, help] : stage.switches) {
      sub->add_flag_callback(std::string("--") + flag, [&settings, key = key_of(flag)] { settings.set_flag(key, "true"); },
                             help);
    }
  }

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (!argv.empty()) argv.pop_back();  // program name
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, failure("Usage", e.what(), {}, 2));
    return 2;
  }

  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv("DEEPCVA_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) settings.load_file(config_path);
    settings.load_env();
    configure_logging(settings);
    for (auto* sub : app.get_subcommands()) return commands.at(sub)(settings, out);
    return 2;
  } catch (...) {
    const auto info = describe(std::current_exception());
    print_error(err, info);
    return info.code;
  }
}

}  // namespace deepcva::cli
