#include "brgcl/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "brgcl/bec.hpp"
#include "brgcl/bpl.hpp"
#include "brgcl/param.hpp"
#include "brgcl/rng.hpp"

namespace brgcl {

void TrainConfig::validate() const {
  if (t_max < 1) throw ConfigError("train config: t_max must be >= 1");
  if (lr <= 0) throw ConfigError("train config: lr must be positive");
  if (tau <= 0) throw ConfigError("train config: tau must be positive");
  if (xi <= 0) throw ConfigError("train config: xi must be positive");
  if (gamma0 <= 0 || gamma0 >= 1) throw ConfigError("train config: gamma0 must lie in (0, 1)");
  if (alpha <= 0 || alpha >= 1) throw ConfigError("train config: alpha must lie in (0, 1)");
  if (beta <= 0 || beta >= 1) throw ConfigError("train config: beta must lie in (0, 1)");
  if (T < 1 || T_cls < 1) throw ConfigError("train config: propagation steps must be >= 1");
  if (hidden_dim < 1 || embed_dim < 1) throw ConfigError("train config: dims must be >= 1");
  if (augment.edge_drop_prob < 0 || augment.edge_drop_prob >= 1 ||
      augment.feature_mask_prob < 0 || augment.feature_mask_prob >= 1) {
    throw ConfigError("train config: augmentation probabilities must lie in [0, 1)");
  }
}

std::pair<GcnEncoder, TrainHistory> train_encoder(const EncoderView& view, const TrainConfig& cfg,
                                                  const EpochCallback& callback) {
  cfg.validate();

  GcnEncoder enc(view.num_features(), cfg.hidden_dim, cfg.embed_dim, mix_seed(cfg.seed, 0, 0));
  AdamState opt_w1(enc.W1.value.rows, enc.W1.value.cols, cfg.lr);
  AdamState opt_w2(enc.W2.value.rows, enc.W2.value.cols, cfg.lr);
  CsrAdjacency adj_norm = normalized_adjacency(*view.adj);
  InfoNceOptions nce{cfg.strict_infonce, cfg.tau};

  TrainHistory history;
  history.epochs.reserve(cfg.t_max);

  for (std::size_t epoch = 0; epoch < cfg.t_max; ++epoch) {
    GcnCache cache_full, cache_v1, cache_v2;
    Matrix H = gcn_forward(enc, adj_norm, *view.features, cache_full);

    AugmentedView v1 = augment(view, cfg.augment, mix_seed(cfg.seed, epoch + 1, 1));
    AugmentedView v2 = augment(view, cfg.augment, mix_seed(cfg.seed, epoch + 1, 2));
    Matrix H1 = gcn_forward(enc, v1.adj_norm, v1.X, cache_v1);
    Matrix H2 = gcn_forward(enc, v2.adj_norm, v2.X, cache_v2);

    LossOutput node = node_infonce(H1, H2, nce);

    Matrix Hn = row_l2_normalize(H);
    PseudoLabeling pl = dp_means(Hn, cfg.xi);
    Matrix soft = label_propagate(adj_norm, one_hot(pl.z, pl.k_tilde), cfg.alpha, cfg.T);
    std::vector<real_t> phi = confidence_scores(pl.z, soft);
    real_t gamma = threshold(epoch, cfg.t_max, cfg.gamma0);
    std::vector<std::vector<std::size_t>> sets = confident_sets(pl.z, phi, gamma);
    sets.resize(pl.k_tilde);
    Matrix C = robust_prototypes(Hn, sets, pl.z);
    LossOutput proto = proto_loss(Hn, C, pl.z, cfg.tau);

    if (!std::isfinite(static_cast<double>(node.value)) ||
        !std::isfinite(static_cast<double>(proto.value))) {
      throw NumericError("train_encoder: non-finite loss at epoch " + std::to_string(epoch));
    }

    enc.zero_grad();
    gcn_backward(enc, cache_v1, node.dH1);
    gcn_backward(enc, cache_v2, node.dH2);
    if (epoch >= cfg.warmup) {
      gcn_backward(enc, cache_full, row_l2_normalize_backward(H, proto.dH));
    }
    adam_step(enc.W1, opt_w1, "encoder.W1");
    adam_step(enc.W2, opt_w2, "encoder.W2");

    std::size_t n_confident = 0;
    for (const auto& s : sets) n_confident += s.size();
    history.epochs.push_back({node.value, proto.value, pl.k_tilde, n_confident, gamma});
    if (callback) callback(epoch, enc, history);
  }
  return {std::move(enc), std::move(history)};
}

std::pair<GcnEncoder, TrainHistory> train_encoder(const Graph& g, const TrainConfig& cfg,
                                                  const EpochCallback& callback) {
  std::size_t reads_before = g.label_reads();
  EncoderView view(g);
  auto result = train_encoder(view, cfg, callback);
  if (g.label_reads() != reads_before) {
    throw std::logic_error("train_encoder: label access detected on the unsupervised path");
  }
  return result;
}

namespace {

std::vector<std::size_t> labeled_train_nodes(const Graph& g, const std::vector<int>& labels) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (g.train_mask[i] && labels[i] >= 0) ids.push_back(i);
  }
  return ids;
}

Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& ids) {
  Matrix out(ids.size(), m.cols);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const real_t* src = m.row(ids[r]);
    std::copy(src, src + m.cols, out.row(r));
  }
  return out;
}

}  // namespace

MlpClassifier train_classifier(const Graph& g_noisy, const Matrix& H, const TrainConfig& cfg) {
  cfg.validate();
  if (H.rows != g_noisy.num_nodes()) {
    throw DimensionError("train_classifier: dimension mismatch (features " + H.shape_str() +
                         " vs " + std::to_string(g_noisy.num_nodes()) + " nodes)");
  }
  const std::vector<int>& labels = g_noisy.labels();
  std::vector<std::size_t> train_ids = labeled_train_nodes(g_noisy, labels);
  if (train_ids.empty()) throw std::invalid_argument("train_classifier: empty train mask");

  std::size_t K = static_cast<std::size_t>(g_noisy.num_classes());
  Matrix Y0(H.rows, K);
  for (std::size_t i : train_ids) Y0(i, static_cast<std::size_t>(labels[i])) = real_t(1);

  CsrAdjacency adj_norm = normalized_adjacency(g_noisy);
  Matrix soft = row_softmax(propagate_matrix(adj_norm, Y0, cfg.beta, cfg.T_cls));

  Matrix H_train = gather_rows(H, train_ids);
  Matrix Y_train = gather_rows(soft, train_ids);

  MlpClassifier clf(H.cols, K, mix_seed(cfg.seed, 0xC15, 0));
  AdamState opt_w1(clf.W1.value.rows, clf.W1.value.cols, cfg.lr);
  AdamState opt_b1(clf.b1.value.rows, clf.b1.value.cols, cfg.lr);
  AdamState opt_w2(clf.W2.value.rows, clf.W2.value.cols, cfg.lr);
  AdamState opt_b2(clf.b2.value.rows, clf.b2.value.cols, cfg.lr);

  real_t inv_count = real_t(1) / static_cast<real_t>(train_ids.size());
  for (std::size_t epoch = 0; epoch < cfg.classifier_epochs; ++epoch) {
    MlpCache cache;
    Matrix logits = mlp_forward(clf, H_train, cache);
    Matrix dlogits = scale(subtract(row_softmax(logits), Y_train), inv_count);
    clf.zero_grad();
    mlp_backward(clf, cache, dlogits);
    adam_step(clf.W1, opt_w1, "classifier.W1");
    adam_step(clf.b1, opt_b1, "classifier.b1");
    adam_step(clf.W2, opt_w2, "classifier.W2");
    adam_step(clf.b2, opt_b2, "classifier.b2");
  }
  return clf;
}

GcnEncoder train_gcn_baseline(const Graph& g_noisy, const TrainConfig& cfg) {
  cfg.validate();
  const std::vector<int>& labels = g_noisy.labels();
  std::vector<std::size_t> train_ids = labeled_train_nodes(g_noisy, labels);
  if (train_ids.empty()) throw std::invalid_argument("train_gcn_baseline: empty train mask");

  std::size_t K = static_cast<std::size_t>(g_noisy.num_classes());
  GcnEncoder model(g_noisy.num_features(), cfg.hidden_dim, K, mix_seed(cfg.seed, 0xBA5E, 0));
  AdamState opt_w1(model.W1.value.rows, model.W1.value.cols, cfg.lr);
  AdamState opt_w2(model.W2.value.rows, model.W2.value.cols, cfg.lr);
  CsrAdjacency adj_norm = normalized_adjacency(g_noisy);

  real_t inv_count = real_t(1) / static_cast<real_t>(train_ids.size());
  for (std::size_t epoch = 0; epoch < cfg.classifier_epochs; ++epoch) {
    GcnCache cache;
    Matrix logits = gcn_forward(model, adj_norm, g_noisy.features(), cache);
    Matrix P = row_softmax(logits);
    Matrix dlogits(P.rows, P.cols);
    for (std::size_t i : train_ids) {
      const real_t* prow = P.row(i);
      real_t* drow = dlogits.row(i);
      for (std::size_t c = 0; c < K; ++c) drow[c] = prow[c] * inv_count;
      drow[static_cast<std::size_t>(labels[i])] -= inv_count;
    }
    model.zero_grad();
    gcn_backward(model, cache, dlogits);
    adam_step(model.W1, opt_w1, "baseline.W1");
    adam_step(model.W2, opt_w2, "baseline.W2");
  }
  return model;
}

std::vector<int> argmax_rows(const Matrix& logits) {
  std::vector<int> out(logits.rows, 0);
  for (std::size_t i = 0; i < logits.rows; ++i) {
    const real_t* row = logits.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < logits.cols; ++j) {
      if (row[j] > row[best]) best = j;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict(const GcnEncoder& model, const CsrAdjacency& adj_norm, const Matrix& X) {
  return argmax_rows(gcn_forward(model, adj_norm, X));
}

std::vector<int> predict(const MlpClassifier& clf, const Matrix& H) {
  return argmax_rows(mlp_forward(clf, H));
}

void write_history_csv(const std::string& path, const TrainHistory& history) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw LoadError("write_history_csv: cannot open " + path);
  std::fprintf(f, "epoch,loss_node,loss_proto,k_tilde,n_confident,gamma\n");
  for (std::size_t e = 0; e < history.epochs.size(); ++e) {
    const EpochRecord& r = history.epochs[e];
    std::fprintf(f, "%zu,%.17g,%.17g,%zu,%zu,%.17g\n", e, static_cast<double>(r.loss_node),
                 static_cast<double>(r.loss_proto), r.k_tilde, r.n_confident,
                 static_cast<double>(r.gamma));
  }
  std::fclose(f);
}

}  // namespace brgcl
