#include "netcpd/core/edge_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace netcpd {

EdgeSet EdgeSet::complete(std::size_t nodes, bool self_loops) {
    EdgeSet e;
    e.kind_ = Kind::complete;
    e.nodes_ = nodes;
    e.self_loops_ = self_loops;
    return e;
}

EdgeSet EdgeSet::from_adjacency(const Matrix& adjacency) {
    if (adjacency.rows() != adjacency.cols()) {
        throw std::invalid_argument("EdgeSet: adjacency must be square");
    }
    const std::size_t n = adjacency.rows();
    EdgeSet e;
    e.kind_ = Kind::sparse;
    e.nodes_ = n;
    e.out_ptr_.assign(n + 1, 0);
    e.in_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (adjacency(i, j) != 0.0) {
                e.out_.push_back(j);
                ++e.in_ptr_[j + 1];
            }
        }
        e.out_ptr_[i + 1] = e.out_.size();
    }
    for (std::size_t j = 0; j < n; ++j) {
        e.in_ptr_[j + 1] += e.in_ptr_[j];
    }
    e.in_.resize(e.out_.size());
    std::vector<std::size_t> fill(e.in_ptr_.begin(), e.in_ptr_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = e.out_ptr_[i]; p < e.out_ptr_[i + 1]; ++p) {
            e.in_[fill[e.out_[p]]++] = i;
        }
    }
    e.self_loops_ = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (adjacency(i, i) != 0.0) {
            e.self_loops_ = true;
        }
    }
    return e;
}

EdgeSet EdgeSet::weighted(Matrix weights) {
    if (weights.rows() != weights.cols()) {
        throw std::invalid_argument("EdgeSet: weight matrix must be square");
    }
    EdgeSet e;
    e.kind_ = Kind::weighted;
    e.nodes_ = weights.rows();
    e.weights_ = std::move(weights);
    return e;
}

double EdgeSet::weight(std::size_t i, std::size_t j) const {
    switch (kind_) {
    case Kind::complete:
        return (i != j || self_loops_) ? 1.0 : 0.0;
    case Kind::sparse: {
        auto row = out_neighbors(i);
        return std::binary_search(row.begin(), row.end(), j) ? 1.0 : 0.0;
    }
    case Kind::weighted:
        return weights_(i, j);
    }
    return 0.0;
}

std::span<const std::size_t> EdgeSet::out_neighbors(std::size_t i) const {
    return {out_.data() + out_ptr_[i], out_ptr_[i + 1] - out_ptr_[i]};
}

std::span<const std::size_t> EdgeSet::in_neighbors(std::size_t j) const {
    return {in_.data() + in_ptr_[j], in_ptr_[j + 1] - in_ptr_[j]};
}

} // namespace netcpd
