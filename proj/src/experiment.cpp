#include "brgcl/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "brgcl/encoder.hpp"
#include "brgcl/rng.hpp"

namespace brgcl {

namespace fs = std::filesystem;

ExperimentTask parse_task(const std::string& name) {
  if (name == "classify") return ExperimentTask::Classify;
  if (name == "cluster") return ExperimentTask::Cluster;
  if (name == "both") return ExperimentTask::Both;
  throw ConfigError("unknown task '" + name + "' (expected classify, cluster, or both)");
}

std::string task_name(ExperimentTask task) {
  switch (task) {
    case ExperimentTask::Classify: return "classify";
    case ExperimentTask::Cluster: return "cluster";
    case ExperimentTask::Both: return "both";
  }
  return "classify";
}

void ExperimentConfig::validate() const {
  if (dataset.empty()) throw ConfigError("experiment config: dataset is required");
  if (output_dir.empty()) throw ConfigError("experiment config: output_dir is required");
  if (repeats < 1) throw ConfigError("experiment config: repeats must be >= 1");
  if (noise.empty()) {
    throw ConfigError("experiment config: at least one [[noise]] entry is required"
                      " (use level 0 for a clean run)");
  }
  for (const NoiseEntry& e : noise) {
    if (e.level < 0 || e.level > 1) {
      throw ConfigError("experiment config: noise level must lie in [0, 1]");
    }
  }
  train.validate();
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quotes = !in_quotes;
    if (line[i] == '#' && !in_quotes) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void fail_at(const std::string& origin, std::size_t lineno, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + msg);
}

std::string expect_string(const std::string& v, const std::string& origin, std::size_t lineno) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
    fail_at(origin, lineno, "expected a double-quoted string, got '" + v + "'");
  }
  std::string inner = v.substr(1, v.size() - 2);
  if (inner.find('"') != std::string::npos) {
    fail_at(origin, lineno, "embedded quotes are not supported");
  }
  return inner;
}

bool expect_bool(const std::string& v, const std::string& origin, std::size_t lineno) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail_at(origin, lineno, "expected true or false, got '" + v + "'");
}

double expect_real(const std::string& v, const std::string& origin, std::size_t lineno) {
  double x = 0;
  std::size_t pos = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    fail_at(origin, lineno, "expected a number, got '" + v + "'");
  }
  if (pos != v.size()) fail_at(origin, lineno, "trailing characters after number '" + v + "'");
  return x;
}

std::uint64_t expect_u64(const std::string& v, const std::string& origin, std::size_t lineno) {
  if (!v.empty() && v[0] == '-') fail_at(origin, lineno, "expected a non-negative integer");
  std::uint64_t x = 0;
  std::size_t pos = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    fail_at(origin, lineno, "expected a non-negative integer, got '" + v + "'");
  }
  if (pos != v.size()) fail_at(origin, lineno, "trailing characters after integer '" + v + "'");
  return x;
}

}  // namespace

ExperimentConfig parse_experiment_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  enum class Section { Top, Train, Noise };
  Section section = Section::Top;

  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line == "[[noise]]") {
      cfg.noise.push_back({});
      section = Section::Noise;
      continue;
    }
    if (line == "[train]") {
      section = Section::Train;
      continue;
    }
    if (line.front() == '[') fail_at(origin, lineno, "unknown section " + line);

    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail_at(origin, lineno, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail_at(origin, lineno, "expected key = value");

    switch (section) {
      case Section::Top:
        if (key == "dataset") cfg.dataset = expect_string(value, origin, lineno);
        else if (key == "output_dir") cfg.output_dir = expect_string(value, origin, lineno);
        else if (key == "task") cfg.task = parse_task(expect_string(value, origin, lineno));
        else if (key == "repeats") cfg.repeats = expect_u64(value, origin, lineno);
        else if (key == "seed") cfg.seed = expect_u64(value, origin, lineno);
        else if (key == "checkpoint_interval")
          cfg.checkpoint_interval = expect_u64(value, origin, lineno);
        else fail_at(origin, lineno, "unknown key '" + key + "'");
        break;
      case Section::Train:
        if (key == "t_max") cfg.train.t_max = expect_u64(value, origin, lineno);
        else if (key == "lr") cfg.train.lr = static_cast<real_t>(expect_real(value, origin, lineno));
        else if (key == "tau") cfg.train.tau = static_cast<real_t>(expect_real(value, origin, lineno));
        else if (key == "xi") cfg.train.xi = static_cast<real_t>(expect_real(value, origin, lineno));
        else if (key == "gamma0")
          cfg.train.gamma0 = static_cast<real_t>(expect_real(value, origin, lineno));
        else if (key == "alpha")
          cfg.train.alpha = static_cast<real_t>(expect_real(value, origin, lineno));
        else if (key == "T") cfg.train.T = expect_u64(value, origin, lineno);
        else if (key == "beta")
          cfg.train.beta = static_cast<real_t>(expect_real(value, origin, lineno));
        else if (key == "T_cls") cfg.train.T_cls = expect_u64(value, origin, lineno);
        else if (key == "hidden_dim") cfg.train.hidden_dim = expect_u64(value, origin, lineno);
        else if (key == "embed_dim") cfg.train.embed_dim = expect_u64(value, origin, lineno);
        else if (key == "classifier_epochs")
          cfg.train.classifier_epochs = expect_u64(value, origin, lineno);
        else if (key == "warmup") cfg.train.warmup = expect_u64(value, origin, lineno);
        else if (key == "strict_infonce")
          cfg.train.strict_infonce = expect_bool(value, origin, lineno);
        else if (key == "edge_drop_prob")
          cfg.train.augment.edge_drop_prob = static_cast<real_t>(expect_real(value, origin, lineno));
        else if (key == "feature_mask_prob")
          cfg.train.augment.feature_mask_prob =
              static_cast<real_t>(expect_real(value, origin, lineno));
        else fail_at(origin, lineno, "unknown key '" + key + "' in [train]");
        break;
      case Section::Noise:
        if (key == "kind") cfg.noise.back().kind = parse_noise_kind(expect_string(value, origin, lineno));
        else if (key == "level")
          cfg.noise.back().level = static_cast<real_t>(expect_real(value, origin, lineno));
        else fail_at(origin, lineno, "unknown key '" + key + "' in [[noise]]");
        break;
    }
  }
  return cfg;
}

ExperimentConfig parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_text(buf.str(), path);
}

namespace {

std::string fmt_real(real_t x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(x));
  return buf;
}

}  // namespace

std::string canonical_dump(const ExperimentConfig& cfg) {
  // Key-sorted; excludes output_dir and checkpoint_interval, which do not
  // affect results.
  std::ostringstream out;
  out << "dataset=" << cfg.dataset << '\n';
  for (std::size_t i = 0; i < cfg.noise.size(); ++i) {
    out << "noise." << i << ".kind=" << noise_kind_name(cfg.noise[i].kind) << '\n';
    out << "noise." << i << ".level=" << fmt_real(cfg.noise[i].level) << '\n';
  }
  out << "repeats=" << cfg.repeats << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "task=" << task_name(cfg.task) << '\n';
  out << "train.T=" << cfg.train.T << '\n';
  out << "train.T_cls=" << cfg.train.T_cls << '\n';
  out << "train.alpha=" << fmt_real(cfg.train.alpha) << '\n';
  out << "train.beta=" << fmt_real(cfg.train.beta) << '\n';
  out << "train.classifier_epochs=" << cfg.train.classifier_epochs << '\n';
  out << "train.edge_drop_prob=" << fmt_real(cfg.train.augment.edge_drop_prob) << '\n';
  out << "train.embed_dim=" << cfg.train.embed_dim << '\n';
  out << "train.feature_mask_prob=" << fmt_real(cfg.train.augment.feature_mask_prob) << '\n';
  out << "train.gamma0=" << fmt_real(cfg.train.gamma0) << '\n';
  out << "train.hidden_dim=" << cfg.train.hidden_dim << '\n';
  out << "train.lr=" << fmt_real(cfg.train.lr) << '\n';
  out << "train.strict_infonce=" << (cfg.train.strict_infonce ? "true" : "false") << '\n';
  out << "train.t_max=" << cfg.train.t_max << '\n';
  out << "train.tau=" << fmt_real(cfg.train.tau) << '\n';
  out << "train.warmup=" << cfg.train.warmup << '\n';
  out << "train.xi=" << fmt_real(cfg.train.xi) << '\n';
  return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::string dump = canonical_dump(cfg);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string resolve_dataset_path(const std::string& dataset) {
  if (fs::exists(fs::path(dataset) / "meta.json")) return dataset;
  if (const char* root = std::getenv("BRGCL_DATA_ROOT"); root && *root) {
    fs::path p = fs::path(root) / dataset;
    if (fs::exists(p / "meta.json")) return p.string();
  }
  fs::path local = fs::path("data") / dataset;
  if (fs::exists(local / "meta.json")) return local.string();
  throw ConfigError("dataset '" + dataset +
                    "' not found (tried the literal path, $BRGCL_DATA_ROOT, and ./data)");
}

std::string metrics_to_json(const MetricsRecord& rec) {
  nlohmann::ordered_json j;
  j["task"] = rec.task;
  j["model"] = rec.model;
  j["dataset"] = rec.dataset;
  j["noise_kind"] = noise_kind_name(rec.noise.kind);
  j["noise_level"] = rec.noise.level;
  j["repeat"] = rec.repeat;
  j["seed"] = rec.seed;
  j["config_hash"] = rec.config_hash;
  if (rec.task == "clustering") {
    j["acc"] = rec.clustering.acc;
    j["nmi"] = rec.clustering.nmi;
    j["ari"] = rec.clustering.ari;
  } else {
    j["accuracy"] = rec.accuracy;
  }
  j["k_tilde"] = rec.k_tilde;
  return j.dump();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Graph base = load_graph(resolve_dataset_path(cfg.dataset));

  fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir / "curves");
  fs::create_directories(out_dir / "checkpoints");
  std::ofstream metrics(out_dir / "metrics.jsonl");
  if (!metrics) throw ConfigError("cannot open " + (out_dir / "metrics.jsonl").string());

  std::string hash = config_hash(cfg);
  bool do_classify = cfg.task != ExperimentTask::Cluster;
  bool do_cluster = cfg.task != ExperimentTask::Classify;

  ExperimentResult result;
  auto emit = [&](const MetricsRecord& rec) {
    metrics << metrics_to_json(rec) << '\n';
    metrics.flush();
    result.records.push_back(rec);
  };

  for (std::size_t ni = 0; ni < cfg.noise.size(); ++ni) {
    const NoiseEntry& entry = cfg.noise[ni];
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
      std::uint64_t run_seed = mix_seed(cfg.seed, ni, r);
      std::string tag = "run-" + std::to_string(ni) + "-" + std::to_string(r);
      try {
        NoiseSpec spec{entry.kind, static_cast<double>(entry.level), mix_seed(run_seed, 0xDA7A, 0)};
        Graph noisy = inject_noise(base, spec);

        TrainConfig tc = cfg.train;
        tc.seed = run_seed;
        EpochCallback cb;
        if (cfg.checkpoint_interval > 0) {
          cb = [&](std::size_t epoch, const GcnEncoder& enc, const TrainHistory&) {
            if ((epoch + 1) % cfg.checkpoint_interval == 0 && epoch + 1 < tc.t_max) {
              save_encoder((out_dir / "checkpoints" / (tag + "-epoch" + std::to_string(epoch + 1) +
                                                       ".bin")).string(),
                           enc, run_seed);
            }
          };
        }
        auto [enc, hist] = train_encoder(noisy, tc, cb);
        write_history_csv((out_dir / "curves" / (tag + ".csv")).string(), hist);
        save_encoder((out_dir / "checkpoints" / (tag + ".bin")).string(), enc, run_seed);

        CsrAdjacency adj_norm = normalized_adjacency(noisy);
        Matrix H = gcn_forward(enc, adj_norm, noisy.features());
        std::size_t K = noisy.num_classes();

        MetricsRecord proto;
        proto.dataset = cfg.dataset;
        proto.noise = spec;
        proto.repeat = r;
        proto.seed = run_seed;
        proto.config_hash = hash;
        proto.k_tilde = hist.epochs.empty() ? 0 : hist.epochs.back().k_tilde;

        if (do_classify) {
          MlpClassifier clf = train_classifier(noisy, H, tc);
          MetricsRecord rec = proto;
          rec.task = "classification";
          rec.model = "brgcl";
          rec.accuracy = classification_accuracy(predict(clf, H), base.labels(), base.test_mask);
          emit(rec);

          GcnEncoder baseline = train_gcn_baseline(noisy, tc);
          rec = proto;
          rec.task = "classification";
          rec.model = "gcn_baseline";
          rec.accuracy = classification_accuracy(predict(baseline, adj_norm, noisy.features()),
                                                 base.labels(), base.test_mask);
          emit(rec);
        }
        if (do_cluster) {
          std::vector<int> z = kmeans_embed(row_l2_normalize(H), K, mix_seed(run_seed, 0x37, 0));
          const std::vector<int>& truth = base.labels();
          std::vector<int> z_labeled, t_labeled;
          for (std::size_t i = 0; i < truth.size(); ++i) {
            if (truth[i] >= 0) {
              z_labeled.push_back(z[i]);
              t_labeled.push_back(truth[i]);
            }
          }
          if (t_labeled.empty()) throw std::runtime_error("clustering eval: no labeled nodes");
          MetricsRecord rec = proto;
          rec.task = "clustering";
          rec.model = "brgcl";
          rec.clustering = cluster_eval(z_labeled, t_labeled, K);
          emit(rec);
        }
        std::fprintf(stderr, "[%s] %s level=%.2f seed=%llu done\n", tag.c_str(),
                     noise_kind_name(entry.kind).c_str(), static_cast<double>(entry.level),
                     static_cast<unsigned long long>(run_seed));
      } catch (const std::exception& e) {
        result.errors.push_back(tag + ": " + e.what());
        std::fprintf(stderr, "[%s] FAILED: %s\n", tag.c_str(), e.what());
      }
    }
  }

  if (do_classify) {
    summarize_records(result.records, (out_dir / "curves" / "noise-accuracy.csv").string());
  }
  return result;
}

std::vector<std::string> summarize_records(const std::vector<MetricsRecord>& records,
                                           const std::string& csv_path) {
  struct Cell {
    std::vector<real_t> accs;
  };
  std::map<std::tuple<std::string, double, std::string>, Cell> groups;
  for (const MetricsRecord& rec : records) {
    if (rec.task != "classification") continue;
    groups[{noise_kind_name(rec.noise.kind), rec.noise.level, rec.model}].accs.push_back(
        rec.accuracy);
  }

  std::ofstream csv(csv_path);
  if (!csv) throw ConfigError("cannot open " + csv_path);
  csv << "noise_kind,noise_level,model,mean_accuracy,std_accuracy,runs\n";

  std::vector<std::string> rows;
  for (const auto& [key, cell] : groups) {
    const auto& [kind, level, model] = key;
    real_t mean = 0;
    for (real_t a : cell.accs) mean += a;
    mean /= static_cast<real_t>(cell.accs.size());
    real_t var = 0;
    for (real_t a : cell.accs) var += (a - mean) * (a - mean);
    real_t stdev = cell.accs.size() > 1
                       ? std::sqrt(var / static_cast<real_t>(cell.accs.size() - 1))
                       : real_t(0);
    char line[256];
    std::snprintf(line, sizeof line, "%s,%.17g,%s,%.17g,%.17g,%zu", kind.c_str(), level,
                  model.c_str(), static_cast<double>(mean), static_cast<double>(stdev),
                  cell.accs.size());
    csv << line << '\n';
    std::snprintf(line, sizeof line, "%-16s level=%.2f %-12s acc=%.4f +- %.4f (n=%zu)",
                  kind.c_str(), level, model.c_str(), static_cast<double>(mean),
                  static_cast<double>(stdev), cell.accs.size());
    rows.emplace_back(line);
  }
  return rows;
}

}  // namespace brgcl
