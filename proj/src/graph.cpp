#include "netcon/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "netcon/errors.hpp"

namespace netcon {

Graph::Graph(std::size_t n, std::vector<std::pair<int, int>> edges, Vec weights)
    : n_(n), edges_(std::move(edges)), weights_(std::move(weights)) {
    if (weights_.empty()) weights_.assign(edges_.size(), 1.0);
    if (weights_.size() != edges_.size())
        throw InputError("graph: weight count does not match edge count");
    std::set<std::pair<int, int>> seen;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        auto [i, j] = edges_[k];
        if (i < 1 || j < 1 || i > static_cast<int>(n_) || j > static_cast<int>(n_))
            throw InputError("graph: vertex index out of range");
        if (i == j) throw InputError("graph: self-loop rejected");
        auto key = std::minmax(i, j);
        if (!seen.insert(key).second) throw InputError("graph: duplicate undirected edge rejected");
        if (!(weights_[k] > 0.0)) throw InputError("graph: edge weight must be positive");
    }
    adj_.assign(n_, {});
    for (auto [i, j] : edges_) {
        adj_[i - 1].push_back(static_cast<std::size_t>(j - 1));
        adj_[j - 1].push_back(static_cast<std::size_t>(i - 1));
    }
}

Matrix incidence_matrix(const Graph& g) {
    Matrix B(g.vertex_count(), g.edge_count());
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
        auto [i, j] = g.edges()[k];
        const int lo = std::min(i, j), hi = std::max(i, j);
        B(lo - 1, k) = 1.0;
        B(hi - 1, k) = -1.0;
    }
    return B;
}

Matrix laplacian(const Graph& g, bool weighted) {
    const std::size_t n = g.vertex_count();
    Matrix L(n, n);
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
        auto [i, j] = g.edges()[k];
        const double w = weighted ? g.weights()[k] : 1.0;
        L(i - 1, j - 1) -= w;
        L(j - 1, i - 1) -= w;
    }
    // Diagonal from the accumulated off-diagonals so each row sums to zero.
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) row += L(i, j);
        L(i, i) = -row;
    }
    return L;
}

bool is_connected(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w : g.adjacency()[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

SymmetricSpectrum symmetric_eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) throw InputError("symmetric_eigenvalues: matrix not square");
    if (!m.is_symmetric(1e-10)) throw InputError("symmetric_eigenvalues: matrix not symmetric");
    const std::size_t n = m.rows();
    Matrix a = m;
    const double stop = 1e-12 * std::max(a.frobenius_norm(), 1e-300);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    SymmetricSpectrum out;
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    return out;
}

Matrix disagreement_basis(std::size_t n) {
    if (n < 2) throw InputError("disagreement_basis: n must be >= 2");
    Matrix S(n, n - 1);
    // Column k (0-based): (1,...,1,-(k+1),0,...)/sqrt((k+1)(k+2))
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double norm = std::sqrt(static_cast<double>((k + 1) * (k + 2)));
        for (std::size_t i = 0; i <= k; ++i) S(i, k) = 1.0 / norm;
        S(k + 1, k) = -static_cast<double>(k + 1) / norm;
    }
    return S;
}

Graph load_graph_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty graph file: " + path);
    // header: i,j[,weight]
    std::vector<std::pair<int, int>> edges;
    Vec weights;
    int max_vertex = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> fields;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        if (fields.size() < 2)
            throw InputError("graph file line " + std::to_string(lineno) + ": expected i,j[,weight]");
        try {
            const int i = std::stoi(fields[0]);
            const int j = std::stoi(fields[1]);
            const double w = fields.size() > 2 && !fields[2].empty() ? std::stod(fields[2]) : 1.0;
            edges.emplace_back(i, j);
            weights.push_back(w);
            max_vertex = std::max({max_vertex, i, j});
        } catch (const std::exception&) {
            throw InputError("graph file line " + std::to_string(lineno) + ": malformed row");
        }
    }
    return Graph(static_cast<std::size_t>(max_vertex), std::move(edges), std::move(weights));
}

}  // namespace netcon
