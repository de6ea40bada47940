#ifndef DFSIM_FIFO_TABLE_HPP
#define DFSIM_FIFO_TABLE_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dfsim/sim_graph.hpp"

namespace dfsim {

// Committed reads and writes of one FIFO, each bound to its graph node, plus
// the element values in flight. Occupancy is not bounded by the depth here;
// the depth only matters for timing.
class FifoTable {
public:
    explicit FifoTable(std::int64_t depth = 1) : depth_(depth) {}

    std::int64_t depth() const { return depth_; }

    std::int64_t record_write(NodeId node, std::int64_t value) {
        writes_.push_back(node);
        data_.push_back(value);
        return static_cast<std::int64_t>(writes_.size());
    }

    std::pair<std::int64_t, std::int64_t> record_read(NodeId node) {
        if (data_.empty()) throw std::logic_error("FIFO read without a matching write");
        reads_.push_back(node);
        std::int64_t v = data_.front();
        data_.pop_front();
        return {static_cast<std::int64_t>(reads_.size()), v};
    }

    std::optional<NodeId> nth_write(std::int64_t k) const { return nth(writes_, k); }
    std::optional<NodeId> nth_read(std::int64_t k) const { return nth(reads_, k); }

    std::int64_t write_count() const { return static_cast<std::int64_t>(writes_.size()); }
    std::int64_t read_count() const { return static_cast<std::int64_t>(reads_.size()); }
    std::size_t in_flight() const { return data_.size(); }
    const std::vector<NodeId>& writes() const { return writes_; }
    const std::vector<NodeId>& reads() const { return reads_; }

private:
    static std::optional<NodeId> nth(const std::vector<NodeId>& v, std::int64_t k) {
        if (k < 1 || k > static_cast<std::int64_t>(v.size())) return std::nullopt;
        return v[static_cast<std::size_t>(k - 1)];
    }

    std::int64_t depth_;
    std::vector<NodeId> writes_;
    std::vector<NodeId> reads_;
    std::deque<std::int64_t> data_;
};

}  // namespace dfsim

#endif  // DFSIM_FIFO_TABLE_HPP
