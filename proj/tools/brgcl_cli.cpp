#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "brgcl/bec.hpp"
#include "brgcl/bpl.hpp"
#include "brgcl/experiment.hpp"
#include "brgcl/gradcheck.hpp"

namespace fs = std::filesystem;
using namespace brgcl;

namespace {

int g_exit = 0;

void add_train_options(CLI::App* cmd, TrainConfig& tc) {
  cmd->add_option("--t-max", tc.t_max, "Encoder training epochs")->capture_default_str();
  cmd->add_option("--lr", tc.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--tau", tc.tau, "Prototype softmax temperature")->capture_default_str();
  cmd->add_option("--xi", tc.xi, "Cluster spawn margin (squared distance)")->capture_default_str();
  cmd->add_option("--gamma0", tc.gamma0, "Confidence threshold floor parameter")
      ->capture_default_str();
  cmd->add_option("--alpha", tc.alpha, "Pseudo-label propagation teleport")->capture_default_str();
  cmd->add_option("--T", tc.T, "Pseudo-label propagation steps")->capture_default_str();
  cmd->add_option("--beta", tc.beta, "Classifier soft-label teleport")->capture_default_str();
  cmd->add_option("--T-cls", tc.T_cls, "Classifier soft-label propagation steps")
      ->capture_default_str();
  cmd->add_option("--hidden-dim", tc.hidden_dim, "Encoder hidden width")->capture_default_str();
  cmd->add_option("--embed-dim", tc.embed_dim, "Embedding width")->capture_default_str();
  cmd->add_option("--classifier-epochs", tc.classifier_epochs,
                  "Epochs for the downstream classifier / supervised baseline")
      ->capture_default_str();
  cmd->add_option("--warmup", tc.warmup, "Epochs before the prototypical gradient is applied")
      ->capture_default_str();
  cmd->add_flag("!--conventional-infonce", tc.strict_infonce,
                "Signed-cosine softmax contrastive loss instead of the literal form");
  cmd->add_option("--edge-drop", tc.augment.edge_drop_prob, "View augmentation edge drop prob")
      ->capture_default_str();
  cmd->add_option("--feature-mask", tc.augment.feature_mask_prob,
                  "View augmentation feature column mask prob")
      ->capture_default_str();
}

struct NoiseFlags {
  std::string kind = "label-symmetric";
  double level = 0;
};

void add_noise_options(CLI::App* cmd, NoiseFlags& nf) {
  cmd->add_option("--noise-kind", nf.kind,
                  "label-symmetric | label-asymmetric | attribute")
      ->capture_default_str();
  cmd->add_option("--noise-level", nf.level, "Corruption level in [0, 1]")->capture_default_str();
}

Graph load_noisy(const std::string& dataset, const NoiseFlags& nf, std::uint64_t seed,
                 Graph& clean_out) {
  clean_out = load_graph(resolve_dataset_path(dataset));
  NoiseSpec spec{parse_noise_kind(nf.kind), nf.level, mix_seed(seed, 0xDA7A, 0)};
  return inject_noise(clean_out, spec);
}

real_t masked_accuracy_or(const std::vector<int>& pred, const std::vector<int>& truth,
                          const std::vector<std::uint8_t>& mask, real_t fallback) {
  for (std::uint8_t m : mask) {
    if (m) return classification_accuracy(pred, truth, mask);
  }
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust graph contrastive learning: encoder training, noise-robust"
               " classification, clustering, and experiment sweeps"};
  app.require_subcommand(1);

  // ---- train ----------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Train the unsupervised encoder");
  std::string tr_data, tr_out = "runs/train";
  std::uint64_t tr_seed = 0;
  std::size_t tr_ckpt_interval = 0;
  TrainConfig tr_cfg;
  train_cmd->add_option("--data,-d", tr_data, "Dataset name or directory")->required();
  train_cmd->add_option("--out,-o", tr_out, "Output directory")->capture_default_str();
  train_cmd->add_option("--seed", tr_seed, "Root seed")->capture_default_str();
  train_cmd->add_option("--checkpoint-interval", tr_ckpt_interval,
                        "Epochs between mid-run checkpoints (0 = final only)")
      ->capture_default_str();
  add_train_options(train_cmd, tr_cfg);
  train_cmd->callback([&]() {
    Graph g = load_graph(resolve_dataset_path(tr_data));
    tr_cfg.seed = tr_seed;
    fs::create_directories(tr_out);
    EpochCallback cb;
    if (tr_ckpt_interval > 0) {
      cb = [&](std::size_t epoch, const GcnEncoder& enc, const TrainHistory&) {
        if ((epoch + 1) % tr_ckpt_interval == 0 && epoch + 1 < tr_cfg.t_max) {
          save_encoder((fs::path(tr_out) / ("encoder-epoch" + std::to_string(epoch + 1) + ".bin"))
                           .string(),
                       enc, tr_seed);
        }
      };
    }
    auto [enc, hist] = train_encoder(g, tr_cfg, cb);
    std::string ckpt = (fs::path(tr_out) / "encoder.bin").string();
    std::string curve = (fs::path(tr_out) / "history.csv").string();
    save_encoder(ckpt, enc, tr_seed);
    write_history_csv(curve, hist);
    const EpochRecord& last = hist.epochs.back();
    std::printf("epochs: %zu\n", hist.epochs.size());
    std::printf("loss_node: %.6f\nloss_proto: %.6f\nk_tilde: %zu\nn_confident: %zu\n",
                static_cast<double>(last.loss_node), static_cast<double>(last.loss_proto),
                last.k_tilde, last.n_confident);
    std::printf("checkpoint: %s\nhistory: %s\n", ckpt.c_str(), curve.c_str());
  });

  // ---- classify -------------------------------------------------------
  auto* cls_cmd = app.add_subcommand(
      "classify", "Fit the decoupled classifier on a frozen encoder checkpoint");
  std::string cls_data, cls_ckpt;
  std::uint64_t cls_seed = 0;
  NoiseFlags cls_noise;
  TrainConfig cls_cfg;
  cls_cmd->add_option("--data,-d", cls_data, "Dataset name or directory")->required();
  cls_cmd->add_option("--checkpoint,-c", cls_ckpt, "Encoder checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  cls_cmd->add_option("--seed", cls_seed, "Root seed")->capture_default_str();
  add_noise_options(cls_cmd, cls_noise);
  add_train_options(cls_cmd, cls_cfg);
  cls_cmd->callback([&]() {
    Graph clean;
    Graph noisy = load_noisy(cls_data, cls_noise, cls_seed, clean);
    GcnEncoder enc = load_encoder(cls_ckpt);
    if (enc.in_dim() != noisy.num_features()) {
      throw ConfigError("checkpoint expects " + std::to_string(enc.in_dim()) +
                        " features, dataset has " + std::to_string(noisy.num_features()));
    }
    CsrAdjacency adj_norm = normalized_adjacency(noisy);
    Matrix H = gcn_forward(enc, adj_norm, noisy.features());
    cls_cfg.seed = cls_seed;
    MlpClassifier clf = train_classifier(noisy, H, cls_cfg);
    std::vector<int> pred = predict(clf, H);
    real_t val = masked_accuracy_or(pred, clean.labels(), clean.val_mask, real_t(-1));
    if (val >= 0) std::printf("val_accuracy: %.4f\n", static_cast<double>(val));
    std::printf("test_accuracy: %.4f\n",
                static_cast<double>(
                    classification_accuracy(pred, clean.labels(), clean.test_mask)));
  });

  // ---- cluster --------------------------------------------------------
  auto* clu_cmd = app.add_subcommand(
      "cluster", "K-means on checkpoint embeddings, scored against ground truth");
  std::string clu_data, clu_ckpt;
  std::uint64_t clu_seed = 0;
  std::size_t clu_restarts = 10;
  double clu_xi = 0.20;
  clu_cmd->add_option("--data,-d", clu_data, "Dataset name or directory")->required();
  clu_cmd->add_option("--checkpoint,-c", clu_ckpt, "Encoder checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  clu_cmd->add_option("--seed", clu_seed, "K-means seed")->capture_default_str();
  clu_cmd->add_option("--restarts", clu_restarts, "K-means restarts")->capture_default_str();
  clu_cmd->add_option("--xi", clu_xi, "Cluster spawn margin for the prototype count")
      ->capture_default_str();
  clu_cmd->callback([&]() {
    Graph g = load_graph(resolve_dataset_path(clu_data));
    GcnEncoder enc = load_encoder(clu_ckpt);
    CsrAdjacency adj_norm = normalized_adjacency(g);
    Matrix Hn = row_l2_normalize(gcn_forward(enc, adj_norm, g.features()));
    std::size_t K = g.num_classes();
    std::vector<int> z = kmeans_embed(Hn, K, mix_seed(clu_seed, 0x37, 0), clu_restarts);
    const std::vector<int>& truth = g.labels();
    std::vector<int> z_labeled, t_labeled;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i] >= 0) {
        z_labeled.push_back(z[i]);
        t_labeled.push_back(truth[i]);
      }
    }
    if (t_labeled.empty()) throw ConfigError("dataset has no labeled nodes to score against");
    ClusterMetrics m = cluster_eval(z_labeled, t_labeled, K);
    PseudoLabeling pl = dp_means(Hn, static_cast<real_t>(clu_xi));
    std::printf("acc: %.4f\nnmi: %.4f\nari: %.4f\nk_tilde: %zu\n", static_cast<double>(m.acc),
                static_cast<double>(m.nmi), static_cast<double>(m.ari), pl.k_tilde);
  });

  // ---- baseline -------------------------------------------------------
  auto* base_cmd =
      app.add_subcommand("baseline", "Train the supervised graph-convolutional baseline");
  std::string base_data;
  std::uint64_t base_seed = 0;
  NoiseFlags base_noise;
  TrainConfig base_cfg;
  base_cmd->add_option("--data,-d", base_data, "Dataset name or directory")->required();
  base_cmd->add_option("--seed", base_seed, "Root seed")->capture_default_str();
  add_noise_options(base_cmd, base_noise);
  add_train_options(base_cmd, base_cfg);
  base_cmd->callback([&]() {
    Graph clean;
    Graph noisy = load_noisy(base_data, base_noise, base_seed, clean);
    base_cfg.seed = base_seed;
    GcnEncoder model = train_gcn_baseline(noisy, base_cfg);
    CsrAdjacency adj_norm = normalized_adjacency(noisy);
    std::vector<int> pred = predict(model, adj_norm, noisy.features());
    real_t val = masked_accuracy_or(pred, clean.labels(), clean.val_mask, real_t(-1));
    if (val >= 0) std::printf("val_accuracy: %.4f\n", static_cast<double>(val));
    std::printf("test_accuracy: %.4f\n",
                static_cast<double>(
                    classification_accuracy(pred, clean.labels(), clean.test_mask)));
  });

  // ---- sweep ----------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Run the (noise level x repeat) experiment grid from a config file");
  std::string sw_config;
  ExperimentConfig sw_flags;
  std::vector<std::string> sw_noise;
  sweep_cmd->add_option("--config", sw_config, "Experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--dataset", sw_flags.dataset, "Override: dataset");
  sweep_cmd->add_option("--output-dir", sw_flags.output_dir, "Override: output directory");
  std::string sw_task;
  sweep_cmd->add_option("--task", sw_task, "Override: classify | cluster | both");
  sweep_cmd->add_option("--repeats", sw_flags.repeats, "Override: repeats per noise level");
  sweep_cmd->add_option("--seed", sw_flags.seed, "Override: root seed");
  sweep_cmd->add_option("--checkpoint-interval", sw_flags.checkpoint_interval,
                        "Override: epochs between mid-run checkpoints");
  sweep_cmd->add_option("--noise", sw_noise,
                        "Override: noise entries as kind:level (repeatable)");
  add_train_options(sweep_cmd, sw_flags.train);
  sweep_cmd->callback([&]() {
    ExperimentConfig cfg = parse_experiment_file(sw_config);
    auto passed = [&](const std::string& name) { return sweep_cmd->count(name) > 0; };
    if (passed("--dataset")) cfg.dataset = sw_flags.dataset;
    if (passed("--output-dir")) cfg.output_dir = sw_flags.output_dir;
    if (passed("--task")) cfg.task = parse_task(sw_task);
    if (passed("--repeats")) cfg.repeats = sw_flags.repeats;
    if (passed("--seed")) cfg.seed = sw_flags.seed;
    if (passed("--checkpoint-interval")) cfg.checkpoint_interval = sw_flags.checkpoint_interval;
    if (passed("--t-max")) cfg.train.t_max = sw_flags.train.t_max;
    if (passed("--lr")) cfg.train.lr = sw_flags.train.lr;
    if (passed("--tau")) cfg.train.tau = sw_flags.train.tau;
    if (passed("--xi")) cfg.train.xi = sw_flags.train.xi;
    if (passed("--gamma0")) cfg.train.gamma0 = sw_flags.train.gamma0;
    if (passed("--alpha")) cfg.train.alpha = sw_flags.train.alpha;
    if (passed("--T")) cfg.train.T = sw_flags.train.T;
    if (passed("--beta")) cfg.train.beta = sw_flags.train.beta;
    if (passed("--T-cls")) cfg.train.T_cls = sw_flags.train.T_cls;
    if (passed("--hidden-dim")) cfg.train.hidden_dim = sw_flags.train.hidden_dim;
    if (passed("--embed-dim")) cfg.train.embed_dim = sw_flags.train.embed_dim;
    if (passed("--classifier-epochs"))
      cfg.train.classifier_epochs = sw_flags.train.classifier_epochs;
    if (passed("--warmup")) cfg.train.warmup = sw_flags.train.warmup;
    if (passed("--conventional-infonce")) cfg.train.strict_infonce = false;
    if (passed("--edge-drop")) cfg.train.augment.edge_drop_prob = sw_flags.train.augment.edge_drop_prob;
    if (passed("--feature-mask"))
      cfg.train.augment.feature_mask_prob = sw_flags.train.augment.feature_mask_prob;
    if (!sw_noise.empty()) {
      cfg.noise.clear();
      for (const std::string& s : sw_noise) {
        std::size_t colon = s.rfind(':');
        if (colon == std::string::npos) {
          throw ConfigError("--noise expects kind:level, got '" + s + "'");
        }
        NoiseEntry e;
        e.kind = parse_noise_kind(s.substr(0, colon));
        try {
          e.level = static_cast<real_t>(std::stod(s.substr(colon + 1)));
        } catch (const std::exception&) {
          throw ConfigError("--noise expects kind:level, got '" + s + "'");
        }
        cfg.noise.push_back(e);
      }
    }
    ExperimentResult res = run_experiment(cfg);
    std::printf("config_hash: %s\n", config_hash(cfg).c_str());
    for (const std::string& row :
         summarize_records(res.records, (fs::path(cfg.output_dir) / "curves" /
                                         "noise-accuracy.csv").string())) {
      std::printf("%s\n", row.c_str());
    }
    std::printf("records: %zu  failures: %zu\n", res.records.size(), res.errors.size());
    if (!res.errors.empty()) {
      for (const std::string& e : res.errors) std::fprintf(stderr, "failed %s\n", e.c_str());
      g_exit = 2;
    }
  });

  // ---- gradcheck ------------------------------------------------------
  auto* grad_cmd =
      app.add_subcommand("gradcheck", "Finite-difference verification of every backward pass");
  std::size_t gc_seeds = 20;
  double gc_tol = 1e-4;
  grad_cmd->add_option("--seeds", gc_seeds, "Randomized instances per check")
      ->capture_default_str();
  grad_cmd->add_option("--tol", gc_tol, "Relative error tolerance")->capture_default_str();
  grad_cmd->callback([&]() {
    std::vector<GradSuiteResult> results =
        run_gradient_suite(gc_seeds, static_cast<real_t>(gc_tol));
    std::size_t failures = 0;
    real_t worst = 0;
    std::string worst_name;
    for (const GradSuiteResult& r : results) {
      if (r.report.max_rel_err > worst) {
        worst = r.report.max_rel_err;
        worst_name = r.name;
      }
      if (!r.report.passed) {
        ++failures;
        std::printf("FAIL %s max_rel_err=%.3g\n", r.name.c_str(),
                    static_cast<double>(r.report.max_rel_err));
      }
    }
    std::printf("gradcheck: %zu checks, %zu failures, worst %.3g (%s)\n", results.size(),
                failures, static_cast<double>(worst), worst_name.c_str());
    if (failures > 0) g_exit = 2;
  });

  // ---- export-confidence ----------------------------------------------
  auto* conf_cmd = app.add_subcommand(
      "export-confidence", "Per-node pseudo-labels and confidence scores as CSV");
  std::string conf_data, conf_ckpt, conf_out = "confidence.csv";
  double conf_xi = 0.20, conf_alpha = 0.1, conf_gamma0 = 0.3;
  std::size_t conf_T = 10;
  conf_cmd->add_option("--data,-d", conf_data, "Dataset name or directory")->required();
  conf_cmd->add_option("--checkpoint,-c", conf_ckpt, "Encoder checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  conf_cmd->add_option("--out,-o", conf_out, "Output CSV path")->capture_default_str();
  conf_cmd->add_option("--xi", conf_xi, "Cluster spawn margin")->capture_default_str();
  conf_cmd->add_option("--alpha", conf_alpha, "Propagation teleport")->capture_default_str();
  conf_cmd->add_option("--T", conf_T, "Propagation steps")->capture_default_str();
  conf_cmd->add_option("--gamma0", conf_gamma0, "Threshold floor parameter")
      ->capture_default_str();
  conf_cmd->callback([&]() {
    Graph g = load_graph(resolve_dataset_path(conf_data));
    GcnEncoder enc = load_encoder(conf_ckpt);
    CsrAdjacency adj_norm = normalized_adjacency(g);
    Matrix Hn = row_l2_normalize(gcn_forward(enc, adj_norm, g.features()));
    PseudoLabeling pl = dp_means(Hn, static_cast<real_t>(conf_xi));
    real_t gamma = real_t(1) - static_cast<real_t>(conf_gamma0);  // fully decayed threshold
    ConfidenceReport rep = estimate_confidence(adj_norm, Hn, pl.z, pl.k_tilde,
                                               static_cast<real_t>(conf_alpha), conf_T, gamma);
    if (fs::path(conf_out).has_parent_path()) {
      fs::create_directories(fs::path(conf_out).parent_path());
    }
    std::ofstream out(conf_out);
    if (!out) throw ConfigError("cannot open " + conf_out);
    out << "node,pseudo_label,phi,confident,label\n";
    const std::vector<int>& truth = g.labels();
    std::size_t confident = 0;
    for (std::size_t i = 0; i < pl.z.size(); ++i) {
      bool is_conf = rep.phi[i] < gamma;
      confident += is_conf ? 1 : 0;
      char line[128];
      std::snprintf(line, sizeof line, "%zu,%d,%.17g,%d,%d", i, pl.z[i],
                    static_cast<double>(rep.phi[i]), is_conf ? 1 : 0, truth[i]);
      out << line << '\n';
    }
    std::printf("nodes: %zu\nk_tilde: %zu\ngamma: %.4f\nconfident: %zu\nwrote: %s\n", pl.z.size(),
                pl.k_tilde, static_cast<double>(gamma), confident, conf_out.c_str());
  });

  // ---- inspect ----------------------------------------------------------
  auto* ins_cmd = app.add_subcommand("inspect", "Print dataset statistics");
  std::string ins_data;
  ins_cmd->add_option("--data,-d", ins_data, "Dataset name or directory")->required();
  ins_cmd->callback([&]() {
    Graph g = load_graph(resolve_dataset_path(ins_data));
    std::size_t train = 0, val = 0, test = 0;
    for (std::uint8_t m : g.train_mask) train += m;
    for (std::uint8_t m : g.val_mask) val += m;
    for (std::uint8_t m : g.test_mask) test += m;
    std::printf("dataset: %s\n", resolve_dataset_path(ins_data).c_str());
    std::printf("nodes: %zu\n", g.num_nodes());
    std::printf("features: %zu\n", g.num_features());
    std::printf("classes: %zu\n", static_cast<std::size_t>(g.num_classes()));
    std::printf("edges: %zu\n", g.adj().nnz() / 2);
    std::printf("labeled: %zu\n", g.num_labeled());
    std::printf("splits: train=%zu val=%zu test=%zu\n", train, val, test);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const LoadError& e) {
    std::fprintf(stderr, "load error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return g_exit;
}
