#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "netcon/linalg.hpp"

namespace netcon {

/// Undirected graph on vertices 1..n (1-based ids, matching the scenario and
/// file conventions). Edges carry an optional positive weight, default 1.
class Graph {
public:
    Graph(std::size_t n, std::vector<std::pair<int, int>> edges, Vec weights = {});

    std::size_t vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const Vec& weights() const { return weights_; }

    /// Neighbor lists, 0-based.
    const std::vector<std::vector<std::size_t>>& adjacency() const { return adj_; }

private:
    std::size_t n_;
    std::vector<std::pair<int, int>> edges_;  // as given, 1-based
    Vec weights_;
    std::vector<std::vector<std::size_t>> adj_;
};

/// Oriented incidence matrix: column k has +1 at the lower-indexed endpoint of
/// edge k and -1 at the higher-indexed one. The orientation is a fixed
/// convention; L = B*B^T does not depend on it.
Matrix incidence_matrix(const Graph& g);

Matrix laplacian(const Graph& g, bool weighted);

bool is_connected(const Graph& g);

struct SymmetricSpectrum {
    Vec eigenvalues;  // ascending
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
/// Rejects inputs that are not symmetric within 1e-10 elementwise.
SymmetricSpectrum symmetric_eigenvalues(const Matrix& m);

/// n x (n-1) matrix S with orthonormal columns spanning the complement of the
/// all-ones vector, so that [1/sqrt(n)*1 | S] is orthonormal. Helmert basis.
Matrix disagreement_basis(std::size_t n);

/// Reads a CSV graph file with header `i,j,weight` (weight column optional,
/// defaults 1.0, indices 1-based). Vertex count is the largest index seen.
Graph load_graph_csv(const std::string& path);

}  // namespace netcon
