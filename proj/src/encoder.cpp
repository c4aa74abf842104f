#include "brgcl/encoder.hpp"

#include <fstream>

#include <json.hpp>

namespace brgcl {

using nlohmann::json;

GcnEncoder::GcnEncoder(std::size_t in_dim, std::size_t hidden_dim, std::size_t out_dim,
                       std::uint64_t seed)
    : W1(in_dim, hidden_dim), W2(hidden_dim, out_dim) {
  Rng rng(seed);
  W1.glorot_init(rng);
  W2.glorot_init(rng);
}

Matrix gcn_forward(const GcnEncoder& enc, const CsrAdjacency& adj_norm, const Matrix& X,
                   GcnCache& cache) {
  check_dims(X.cols == enc.W1.value.rows, "gcn_forward", X, enc.W1.value);
  cache.adj = &adj_norm;
  cache.X = &X;
  cache.U = spmm(adj_norm, matmul(X, enc.W1.value));
  cache.S = spmm(adj_norm, relu(cache.U));
  return matmul(cache.S, enc.W2.value);
}

Matrix gcn_forward(const GcnEncoder& enc, const CsrAdjacency& adj_norm, const Matrix& X) {
  GcnCache cache;
  return gcn_forward(enc, adj_norm, X, cache);
}

void gcn_backward(GcnEncoder& enc, const GcnCache& cache, const Matrix& dH) {
  if (cache.adj == nullptr || cache.X == nullptr ||
      cache.S.rows != dH.rows || dH.cols != enc.W2.value.cols) {
    throw std::logic_error("gcn_backward: cache does not match this encoder and gradient");
  }
  add_inplace(enc.W2.grad, matmul_atb(cache.S, dH));
  Matrix dS = matmul_abt(dH, enc.W2.value);
  Matrix dR = spmm(*cache.adj, dS);  // A_n is symmetric
  Matrix dU = relu_backward(cache.U, dR);
  add_inplace(enc.W1.grad, matmul_atb(*cache.X, spmm(*cache.adj, dU)));
}

MlpClassifier::MlpClassifier(std::size_t in_dim, std::size_t num_classes, std::uint64_t seed,
                             std::size_t hidden_dim)
    : W1(in_dim, hidden_dim), b1(1, hidden_dim), W2(hidden_dim, num_classes), b2(1, num_classes) {
  Rng rng(seed);
  W1.glorot_init(rng);
  W2.glorot_init(rng);
}

Matrix mlp_forward(const MlpClassifier& clf, const Matrix& H, MlpCache& cache) {
  check_dims(H.cols == clf.W1.value.rows, "mlp_forward", H, clf.W1.value);
  cache.H = &H;
  cache.A = matmul(H, clf.W1.value);
  for (std::size_t i = 0; i < cache.A.rows; ++i) {
    real_t* row = cache.A.row(i);
    for (std::size_t j = 0; j < cache.A.cols; ++j) row[j] += clf.b1.value.data[j];
  }
  cache.Z = relu(cache.A);
  Matrix logits = matmul(cache.Z, clf.W2.value);
  for (std::size_t i = 0; i < logits.rows; ++i) {
    real_t* row = logits.row(i);
    for (std::size_t j = 0; j < logits.cols; ++j) row[j] += clf.b2.value.data[j];
  }
  return logits;
}

Matrix mlp_forward(const MlpClassifier& clf, const Matrix& H) {
  MlpCache cache;
  return mlp_forward(clf, H, cache);
}

void mlp_backward(MlpClassifier& clf, const MlpCache& cache, const Matrix& dlogits) {
  if (cache.H == nullptr || cache.Z.rows != dlogits.rows ||
      dlogits.cols != clf.W2.value.cols) {
    throw std::logic_error("mlp_backward: cache does not match this classifier and gradient");
  }
  add_inplace(clf.W2.grad, matmul_atb(cache.Z, dlogits));
  for (std::size_t i = 0; i < dlogits.rows; ++i) {
    const real_t* row = dlogits.row(i);
    for (std::size_t j = 0; j < dlogits.cols; ++j) clf.b2.grad.data[j] += row[j];
  }
  Matrix dZ = matmul_abt(dlogits, clf.W2.value);
  Matrix dA = relu_backward(cache.A, dZ);
  add_inplace(clf.W1.grad, matmul_atb(*cache.H, dA));
  for (std::size_t i = 0; i < dA.rows; ++i) {
    const real_t* row = dA.row(i);
    for (std::size_t j = 0; j < dA.cols; ++j) clf.b1.grad.data[j] += row[j];
  }
}

AugmentedView augment(const EncoderView& view, const AugmentConfig& cfg, std::uint64_t seed) {
  if (cfg.edge_drop_prob < 0 || cfg.edge_drop_prob >= 1 || cfg.feature_mask_prob < 0 ||
      cfg.feature_mask_prob >= 1) {
    throw std::invalid_argument("augment: probabilities must lie in [0, 1)");
  }
  Rng rng(seed);

  EdgeList kept;
  for (const auto& e : edge_list(*view.adj)) {
    if (!rng.bernoulli(cfg.edge_drop_prob)) kept.push_back(e);
  }

  AugmentedView out;
  out.adj_norm = normalized_adjacency(build_adjacency(view.adj->n, kept));
  out.X = *view.features;
  for (std::size_t c = 0; c < out.X.cols; ++c) {
    if (!rng.bernoulli(cfg.feature_mask_prob)) continue;
    for (std::size_t i = 0; i < out.X.rows; ++i) out.X(i, c) = real_t(0);
  }
  return out;
}

namespace {

void write_param_payload(std::ofstream& out, const Matrix& value) {
  std::vector<float> raw(value.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<float>(value.data[i]);
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
}

Matrix read_param_payload(std::ifstream& in, std::size_t rows, std::size_t cols,
                          const std::string& path) {
  std::vector<float> raw(rows * cols);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!in) throw LoadError("load_encoder: truncated payload in " + path);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < raw.size(); ++i) m.data[i] = static_cast<real_t>(raw[i]);
  return m;
}

}  // namespace

void save_encoder(const std::string& path, const GcnEncoder& enc, std::uint64_t seed) {
  json header;
  header["format"] = "brgcl-checkpoint";
  header["version"] = 1;
  header["kind"] = "gcn_encoder";
  header["input_dim"] = enc.in_dim();
  header["hidden_dim"] = enc.hidden_dim();
  header["output_dim"] = enc.out_dim();
  header["seed"] = seed;
  header["params"] = json::array({
      json{{"name", "W1"}, {"rows", enc.W1.value.rows}, {"cols", enc.W1.value.cols}},
      json{{"name", "W2"}, {"rows", enc.W2.value.rows}, {"cols", enc.W2.value.cols}},
  });

  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("save_encoder: cannot open " + path);
  out << header.dump() << "\n";
  write_param_payload(out, enc.W1.value);
  write_param_payload(out, enc.W2.value);
  if (!out) throw LoadError("save_encoder: write failed for " + path);
}

GcnEncoder load_encoder(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("load_encoder: missing checkpoint " + path);
  std::string header_line;
  if (!std::getline(in, header_line)) throw LoadError("load_encoder: empty checkpoint " + path);

  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::exception& e) {
    throw LoadError("load_encoder: malformed header in " + path + ": " + e.what());
  }
  if (header.value("format", "") != "brgcl-checkpoint" || header.value("kind", "") != "gcn_encoder") {
    throw LoadError("load_encoder: " + path + " is not a gcn_encoder checkpoint");
  }

  const auto& params = header["params"];
  if (!params.is_array() || params.size() != 2) {
    throw LoadError("load_encoder: unexpected parameter list in " + path);
  }

  GcnEncoder enc;
  enc.W1.value = read_param_payload(in, params[0]["rows"].get<std::size_t>(),
                                    params[0]["cols"].get<std::size_t>(), path);
  enc.W2.value = read_param_payload(in, params[1]["rows"].get<std::size_t>(),
                                    params[1]["cols"].get<std::size_t>(), path);
  if (enc.W1.value.cols != enc.W2.value.rows) {
    throw LoadError("load_encoder: inconsistent layer shapes in " + path);
  }
  enc.W1.grad = Matrix(enc.W1.value.rows, enc.W1.value.cols);
  enc.W2.grad = Matrix(enc.W2.value.rows, enc.W2.value.cols);
  return enc;
}

}  // namespace brgcl
