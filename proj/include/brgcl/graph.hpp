#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "brgcl/matrix.hpp"

namespace brgcl {

/// Compressed sparse row adjacency. Unweighted until normalization attaches
/// per-entry weights. Per-row column indices are strictly increasing.
struct CsrAdjacency {
  std::size_t n = 0;
  std::vector<std::size_t> indptr;   // length n + 1
  std::vector<std::size_t> indices;  // length nnz
  std::vector<real_t> weights;       // empty for unweighted, else length nnz

  std::size_t nnz() const { return indices.size(); }
  std::size_t degree(std::size_t i) const { return indptr[i + 1] - indptr[i]; }
  bool weighted() const { return !weights.empty(); }
};

/// Undirected edges as (u, v) pairs with u < v, each stored once.
using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

/// Builds a symmetric CSR from undirected edges. Self-loops are dropped and
/// duplicate or reversed duplicate pairs are merged.
CsrAdjacency build_adjacency(std::size_t n, const EdgeList& edges);

/// Recovers the canonical (u < v) edge list from a symmetric CSR.
EdgeList edge_list(const CsrAdjacency& adj);

struct SplitMasks {
  std::vector<std::uint8_t> train;
  std::vector<std::uint8_t> val;
  std::vector<std::uint8_t> test;
};

/// An attributed graph with optional per-node labels and split masks.
/// Label access goes through the counting accessors so that tests can assert
/// the unsupervised encoder path never reads them.
class Graph {
 public:
  Graph() = default;
  Graph(Matrix features, CsrAdjacency adj, std::vector<int> labels, int num_classes);

  std::size_t num_nodes() const { return adj_.n; }
  std::size_t num_features() const { return features_.cols; }
  int num_classes() const { return num_classes_; }

  const Matrix& features() const { return features_; }
  const CsrAdjacency& adj() const { return adj_; }

  /// Per-node class ids; -1 marks an unlabeled node. Bumps the read counter.
  const std::vector<int>& labels() const {
    ++label_reads_;
    return labels_;
  }
  bool has_labels() const { return !labels_.empty(); }
  std::size_t num_labeled() const;

  /// How many times labels() has been called on this graph.
  std::size_t label_reads() const { return label_reads_; }

  std::vector<std::uint8_t> train_mask;
  std::vector<std::uint8_t> val_mask;
  std::vector<std::uint8_t> test_mask;

 private:
  Matrix features_;
  CsrAdjacency adj_;
  std::vector<int> labels_;
  int num_classes_ = 0;
  mutable std::size_t label_reads_ = 0;
};

/// Symmetric renormalization with self-loops: entry (i, j) = 1/sqrt((d_i+1)(d_j+1))
/// for j in N(i) or j = i. An edgeless graph yields the identity.
CsrAdjacency normalized_adjacency(const CsrAdjacency& adj);
CsrAdjacency normalized_adjacency(const Graph& g);

/// Sparse-dense product adj * dense. Unweighted entries count as 1.
Matrix spmm(const CsrAdjacency& adj, const Matrix& dense);

/// Loads a graph from the directory container format:
///   meta.json     {"num_nodes", "num_features", "num_classes"}
///   edges.tsv     "u<TAB>v" per undirected edge, 0-indexed, no header
///   features.bin  little-endian float32, row-major N x D
///   labels.tsv    "node_id<TAB>label", absent rows mean unlabeled
///   splits.json   {"train": [ids], "val": [ids], "test": [ids]}
/// One-directional edge files are symmetrized.
Graph load_graph(const std::string& path);

/// Writes the container format back out canonically (sorted edges u < v,
/// sorted label and split ids). load -> save -> load round-trips bit-exactly.
void save_graph(const std::string& path, const Graph& g);

/// Stochastic block model with Gaussian features. Block b's feature mean is
/// feature_shift * e_{b mod d}; labels are block ids; masks start empty.
Graph generate_sbm(const std::vector<std::size_t>& block_sizes, double p_in, double p_out,
                   std::size_t d, double feature_shift, std::uint64_t seed);

/// Random disjoint masks of sizes floor(train_frac*n) and floor(val_frac*n);
/// the remainder is the test set. Fractions must be positive and sum below 1.
SplitMasks make_splits(const Graph& g, double train_frac, double val_frac, std::uint64_t seed);

}  // namespace brgcl
