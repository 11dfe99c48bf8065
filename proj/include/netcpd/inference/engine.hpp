#pragma once

#include <cstddef>
#include <vector>

#include "netcpd/core/event_batch.hpp"
#include "netcpd/core/matrix.hpp"
#include "netcpd/core/model.hpp"
#include "netcpd/inference/cavi.hpp"

namespace netcpd {

/// Common view over the three streaming engines, used by the pipeline and
/// the detectors.
class StreamingEngine {
public:
    virtual ~StreamingEngine() = default;

    virtual void step(const EventBatch& batch) = 0;
    virtual std::size_t step_index() const = 0;
    virtual const RatePosterior& rates() const = 0;
    virtual const Matrix& memberships() const = 0;
    virtual const FixedPointReport& last_fixed_point() const = 0;

    /// Edge probabilities, or nullptr when the graph is known.
    virtual const Matrix* edge_probabilities() const { return nullptr; }
    /// Diagonal block occupancy sum_ij tau_ik tau_jk, reported by every engine.
    virtual std::vector<double> occupancy() const;
};

} // namespace netcpd
