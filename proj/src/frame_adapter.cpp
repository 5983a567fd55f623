#include "tvolap/frame_adapter.hpp"

#include <vector>

#include "tvolap/errors.hpp"

namespace tvolap {

FrameAdapter::FrameAdapter(StreamingProcessor& proc) : proc_(proc) {
    staging_ = Eigen::ArrayXXd::Zero(proc_.hop(), proc_.channels());
}

Eigen::ArrayXXd FrameAdapter::push(const Eigen::Ref<const Eigen::ArrayXXd>& chunk) {
    if (chunk.cols() != proc_.channels())
        throw InvalidInputError("adapter chunk channel count does not match the processor");
    const Index hop = proc_.hop();

    std::vector<Eigen::ArrayXXd> produced;
    Index consumed = 0;
    while (consumed < chunk.rows()) {
        const Index take = std::min(hop - fill_, chunk.rows() - consumed);
        staging_.middleRows(fill_, take) = chunk.middleRows(consumed, take);
        fill_ += take;
        consumed += take;
        if (fill_ == hop) {
            produced.push_back(proc_.process(staging_));
            fill_ = 0;
        }
    }

    Eigen::ArrayXXd out(static_cast<Index>(produced.size()) * hop, proc_.channels());
    for (std::size_t i = 0; i < produced.size(); ++i)
        out.middleRows(static_cast<Index>(i) * hop, hop) = produced[i];
    return out;
}

Eigen::ArrayXXd FrameAdapter::flush() {
    if (fill_ == 0)
        return Eigen::ArrayXXd(0, proc_.channels());
    staging_.bottomRows(proc_.hop() - fill_).setZero();
    fill_ = 0;
    return proc_.process(staging_);
}

} // namespace tvolap
