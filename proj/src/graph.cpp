#include "brgcl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "brgcl/rng.hpp"

namespace brgcl {

namespace fs = std::filesystem;
using nlohmann::json;

CsrAdjacency build_adjacency(std::size_t n, const EdgeList& edges) {
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw LoadError("build_adjacency: edge (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") out of range for n=" + std::to_string(n));
    }
    if (u == v) continue;
    unique.emplace(std::min(u, v), std::max(u, v));
  }

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (const auto& [u, v] : unique) {
    neighbors[u].push_back(v);
    neighbors[v].push_back(u);
  }

  CsrAdjacency adj;
  adj.n = n;
  adj.indptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(neighbors[i].begin(), neighbors[i].end());
    adj.indptr[i + 1] = adj.indptr[i] + neighbors[i].size();
  }
  adj.indices.reserve(adj.indptr[n]);
  for (std::size_t i = 0; i < n; ++i)
    adj.indices.insert(adj.indices.end(), neighbors[i].begin(), neighbors[i].end());
  return adj;
}

EdgeList edge_list(const CsrAdjacency& adj) {
  EdgeList edges;
  edges.reserve(adj.nnz() / 2);
  for (std::size_t i = 0; i < adj.n; ++i) {
    for (std::size_t p = adj.indptr[i]; p < adj.indptr[i + 1]; ++p) {
      std::size_t j = adj.indices[p];
      if (i < j) edges.emplace_back(i, j);
    }
  }
  return edges;
}

Graph::Graph(Matrix features, CsrAdjacency adj, std::vector<int> labels, int num_classes)
    : features_(std::move(features)),
      adj_(std::move(adj)),
      labels_(std::move(labels)),
      num_classes_(num_classes) {
  if (features_.rows != adj_.n) {
    throw LoadError("Graph: feature rows " + std::to_string(features_.rows) +
                    " do not match node count " + std::to_string(adj_.n));
  }
  if (!labels_.empty() && labels_.size() != adj_.n) {
    throw LoadError("Graph: label vector length " + std::to_string(labels_.size()) +
                    " does not match node count " + std::to_string(adj_.n));
  }
  for (int y : labels_) {
    if (y < -1 || y >= num_classes_) {
      throw LoadError("Graph: label id " + std::to_string(y) + " outside [0, " +
                      std::to_string(num_classes_) + ")");
    }
  }
  train_mask.assign(adj_.n, 0);
  val_mask.assign(adj_.n, 0);
  test_mask.assign(adj_.n, 0);
}

std::size_t Graph::num_labeled() const {
  std::size_t count = 0;
  for (int y : labels_) count += (y >= 0);
  return count;
}

CsrAdjacency normalized_adjacency(const CsrAdjacency& adj) {
  std::size_t n = adj.n;
  std::vector<real_t> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i)
    inv_sqrt[i] = real_t(1) / std::sqrt(static_cast<real_t>(adj.degree(i) + 1));

  CsrAdjacency norm;
  norm.n = n;
  norm.indptr.assign(n + 1, 0);
  norm.indices.reserve(adj.nnz() + n);
  norm.weights.reserve(adj.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t p = adj.indptr[i];
    std::size_t end = adj.indptr[i + 1];
    bool self_emitted = false;
    auto emit = [&](std::size_t j) {
      norm.indices.push_back(j);
      norm.weights.push_back(inv_sqrt[i] * inv_sqrt[j]);
    };
    for (; p < end; ++p) {
      std::size_t j = adj.indices[p];
      if (!self_emitted && j > i) {
        emit(i);
        self_emitted = true;
      }
      emit(j);
    }
    if (!self_emitted) emit(i);
    norm.indptr[i + 1] = norm.indices.size();
  }
  return norm;
}

CsrAdjacency normalized_adjacency(const Graph& g) { return normalized_adjacency(g.adj()); }

Matrix spmm(const CsrAdjacency& adj, const Matrix& dense) {
  if (adj.n != dense.rows) {
    throw DimensionError("spmm: dimension mismatch (adjacency " + std::to_string(adj.n) + "x" +
                         std::to_string(adj.n) + " vs " + dense.shape_str() + ")");
  }
  Matrix out(adj.n, dense.cols);
  for (std::size_t i = 0; i < adj.n; ++i) {
    real_t* orow = out.row(i);
    for (std::size_t p = adj.indptr[i]; p < adj.indptr[i + 1]; ++p) {
      std::size_t j = adj.indices[p];
      real_t w = adj.weighted() ? adj.weights[p] : real_t(1);
      const real_t* drow = dense.row(j);
      for (std::size_t c = 0; c < dense.cols; ++c) orow[c] += w * drow[c];
    }
  }
  return out;
}

namespace {

json read_json_file(const fs::path& p, const char* what) {
  std::ifstream in(p);
  if (!in) throw LoadError(std::string("load_graph: missing ") + what + " at " + p.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw LoadError(std::string("load_graph: malformed ") + what + " at " + p.string() + ": " +
                    e.what());
  }
  return j;
}

std::size_t require_uint(const json& j, const char* key, const fs::path& p) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) {
    throw LoadError("load_graph: " + p.string() + " lacks unsigned integer field \"" + key + "\"");
  }
  return j[key].get<std::size_t>();
}

std::vector<std::uint8_t> ids_to_mask(const json& ids, std::size_t n, const char* which,
                                      const fs::path& p) {
  std::vector<std::uint8_t> mask(n, 0);
  if (!ids.is_array()) {
    throw LoadError("load_graph: splits field \"" + std::string(which) + "\" in " + p.string() +
                    " is not an array");
  }
  for (const auto& v : ids) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() >= n) {
      throw LoadError("load_graph: split id out of range in " + p.string());
    }
    mask[v.get<std::size_t>()] = 1;
  }
  return mask;
}

}  // namespace

Graph load_graph(const std::string& path) {
  fs::path dir(path);
  json meta = read_json_file(dir / "meta.json", "meta.json");
  std::size_t n = require_uint(meta, "num_nodes", dir / "meta.json");
  std::size_t d = require_uint(meta, "num_features", dir / "meta.json");
  std::size_t k = require_uint(meta, "num_classes", dir / "meta.json");

  fs::path feat_path = dir / "features.bin";
  std::ifstream feat(feat_path, std::ios::binary);
  if (!feat) throw LoadError("load_graph: missing features.bin at " + feat_path.string());
  feat.seekg(0, std::ios::end);
  std::size_t bytes = static_cast<std::size_t>(feat.tellg());
  if (bytes != n * d * sizeof(float)) {
    throw LoadError("load_graph: features.bin holds " + std::to_string(bytes) +
                    " bytes but meta.json implies " + std::to_string(n * d * sizeof(float)));
  }
  feat.seekg(0);
  std::vector<float> raw(n * d);
  feat.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (!feat) throw LoadError("load_graph: short read on " + feat_path.string());
  Matrix features(n, d);
  for (std::size_t i = 0; i < raw.size(); ++i) features.data[i] = static_cast<real_t>(raw[i]);

  fs::path edge_path = dir / "edges.tsv";
  std::ifstream ein(edge_path);
  if (!ein) throw LoadError("load_graph: missing edges.tsv at " + edge_path.string());
  EdgeList edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ein, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t u, v;
    if (!(ls >> u >> v)) {
      throw LoadError("load_graph: malformed edge at " + edge_path.string() + ":" +
                      std::to_string(lineno));
    }
    edges.emplace_back(u, v);
  }
  CsrAdjacency adj = build_adjacency(n, edges);

  fs::path label_path = dir / "labels.tsv";
  std::ifstream lin(label_path);
  if (!lin) throw LoadError("load_graph: missing labels.tsv at " + label_path.string());
  std::vector<int> labels(n, -1);
  lineno = 0;
  while (std::getline(lin, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t node;
    long long label;
    if (!(ls >> node >> label) || node >= n) {
      throw LoadError("load_graph: malformed label at " + label_path.string() + ":" +
                      std::to_string(lineno));
    }
    if (label < 0 || static_cast<std::size_t>(label) >= k) {
      throw LoadError("load_graph: label id " + std::to_string(label) + " >= num_classes " +
                      std::to_string(k) + " at " + label_path.string() + ":" +
                      std::to_string(lineno));
    }
    labels[node] = static_cast<int>(label);
  }

  Graph g(std::move(features), std::move(adj), std::move(labels), static_cast<int>(k));

  fs::path split_path = dir / "splits.json";
  json splits = read_json_file(split_path, "splits.json");
  g.train_mask = ids_to_mask(splits.value("train", json::array()), n, "train", split_path);
  g.val_mask = ids_to_mask(splits.value("val", json::array()), n, "val", split_path);
  g.test_mask = ids_to_mask(splits.value("test", json::array()), n, "test", split_path);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.train_mask[i] + g.val_mask[i] + g.test_mask[i] > 1) {
      throw LoadError("load_graph: node " + std::to_string(i) + " appears in multiple splits");
    }
  }
  return g;
}

void save_graph(const std::string& path, const Graph& g) {
  fs::path dir(path);
  fs::create_directories(dir);
  std::size_t n = g.num_nodes();

  {
    json meta;
    meta["num_nodes"] = n;
    meta["num_features"] = g.num_features();
    meta["num_classes"] = static_cast<std::size_t>(g.num_classes());
    std::ofstream out(dir / "meta.json");
    out << meta.dump() << "\n";
  }
  {
    std::ofstream out(dir / "edges.tsv");
    for (const auto& [u, v] : edge_list(g.adj())) out << u << "\t" << v << "\n";
  }
  {
    std::vector<float> raw(g.features().size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<float>(g.features().data[i]);
    std::ofstream out(dir / "features.bin", std::ios::binary);
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(float)));
  }
  {
    std::ofstream out(dir / "labels.tsv");
    const std::vector<int>& labels = g.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] >= 0) out << i << "\t" << labels[i] << "\n";
    }
  }
  {
    auto mask_ids = [n](const std::vector<std::uint8_t>& mask) {
      json ids = json::array();
      for (std::size_t i = 0; i < n; ++i) {
        if (i < mask.size() && mask[i]) ids.push_back(i);
      }
      return ids;
    };
    json splits;
    splits["train"] = mask_ids(g.train_mask);
    splits["val"] = mask_ids(g.val_mask);
    splits["test"] = mask_ids(g.test_mask);
    std::ofstream out(dir / "splits.json");
    out << splits.dump() << "\n";
  }
}

Graph generate_sbm(const std::vector<std::size_t>& block_sizes, double p_in, double p_out,
                   std::size_t d, double feature_shift, std::uint64_t seed) {
  if (block_sizes.empty()) throw std::invalid_argument("generate_sbm: block_sizes empty");
  if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1) {
    throw std::invalid_argument("generate_sbm: probabilities must lie in [0, 1]");
  }
  std::size_t n = 0;
  for (std::size_t s : block_sizes) n += s;

  std::vector<int> labels(n);
  {
    std::size_t at = 0;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
      for (std::size_t i = 0; i < block_sizes[b]; ++i) labels[at++] = static_cast<int>(b);
    }
  }

  Rng rng(seed);
  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double p = labels[i] == labels[j] ? p_in : p_out;
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
    }
  }

  Matrix features(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t shift_dim = static_cast<std::size_t>(labels[i]) % d;
    real_t* row = features.row(i);
    for (std::size_t c = 0; c < d; ++c) row[c] = static_cast<real_t>(rng.normal());
    row[shift_dim] += static_cast<real_t>(feature_shift);
  }

  return Graph(std::move(features), build_adjacency(n, edges), std::move(labels),
               static_cast<int>(block_sizes.size()));
}

SplitMasks make_splits(const Graph& g, double train_frac, double val_frac, std::uint64_t seed) {
  if (train_frac <= 0 || val_frac <= 0 || train_frac + val_frac >= 1) {
    throw std::invalid_argument("make_splits: fractions must be positive and sum below 1");
  }
  std::size_t n = g.num_nodes();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);

  std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(n));
  std::size_t n_val = static_cast<std::size_t>(val_frac * static_cast<double>(n));

  SplitMasks masks;
  masks.train.assign(n, 0);
  masks.val.assign(n, 0);
  masks.test.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train) {
      masks.train[perm[i]] = 1;
    } else if (i < n_train + n_val) {
      masks.val[perm[i]] = 1;
    } else {
      masks.test[perm[i]] = 1;
    }
  }
  return masks;
}

}  // namespace brgcl
