#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "netcpd/core/matrix.hpp"

namespace netcpd {

/// Which ordered pairs (i, j) enter the likelihood, and with what weight.
/// The known-graph engine uses a 0/1 edge set; the unknown-adjacency engine
/// weights every ordered pair by its edge probability.
class EdgeSet {
public:
    enum class Kind { complete, sparse, weighted };

    EdgeSet() = default;

    static EdgeSet complete(std::size_t nodes, bool self_loops = true);
    /// Directed edges i -> j wherever adjacency(i, j) != 0.
    static EdgeSet from_adjacency(const Matrix& adjacency);
    static EdgeSet weighted(Matrix weights);

    Kind kind() const noexcept { return kind_; }
    std::size_t nodes() const noexcept { return nodes_; }
    bool self_loops() const noexcept { return self_loops_; }

    double weight(std::size_t i, std::size_t j) const;

    /// Sparse edge sets only.
    std::span<const std::size_t> out_neighbors(std::size_t i) const;
    std::span<const std::size_t> in_neighbors(std::size_t j) const;

    /// Weighted edge sets only.
    const Matrix& weights() const noexcept { return weights_; }

private:
    Kind kind_ = Kind::complete;
    std::size_t nodes_ = 0;
    bool self_loops_ = true;
    std::vector<std::size_t> out_ptr_, out_;
    std::vector<std::size_t> in_ptr_, in_;
    Matrix weights_;
};

} // namespace netcpd
