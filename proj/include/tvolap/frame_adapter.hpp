#pragma once

#include <Eigen/Dense>

#include "tvolap/reference.hpp"

namespace tvolap {

/// Size adapter between a host that delivers arbitrary chunk lengths and a
/// processor that wants exact hops. Buffers input until a full hop is
/// available; output is returned as it is produced, so the concatenated
/// output is sample-identical to feeding strict hops directly.
class FrameAdapter {
public:
    explicit FrameAdapter(StreamingProcessor& proc);

    /// Feed any number of frames (rows); returns the output produced.
    Eigen::ArrayXXd push(const Eigen::Ref<const Eigen::ArrayXXd>& chunk);

    /// Zero-pad the partial hop, if any, and process it.
    Eigen::ArrayXXd flush();

    Index buffered() const { return fill_; }

private:
    StreamingProcessor& proc_;
    Eigen::ArrayXXd staging_;  // hop x channels
    Index fill_ = 0;
};

} // namespace tvolap
