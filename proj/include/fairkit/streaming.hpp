#pragma once

#include <cstdint>
#include <vector>

#include "fairkit/core.hpp"
#include "fairkit/coreset.hpp"

namespace fairkit {

struct StreamConfig {
    std::size_t k = 2;
    double epsilon = 0.5;
    Objective objective = Objective::median;
    double b_c = 8.0;
    double lambda = 0.01;  // confidence, recorded only
    std::uint64_t seed = 0;
    CoresetConfig coreset;
};

struct StreamItem {
    std::vector<double> coords;
    std::size_t cls = 0;
    std::int64_t weight = 1;
};

struct Bucket {
    std::vector<StreamItem> items;
    std::int64_t represented = 0;  // raw points behind this bucket
    double rho = 0.0;              // error used to build it
    double confidence = 0.0;       // lambda / m^2 at build time
};

/// Merge-and-reduce state. The class universe (group-index sets) is fixed
/// when the stream opens.
class StreamState {
public:
    StreamState(std::size_t dim, std::vector<std::vector<std::size_t>> class_groups,
                std::size_t num_groups, StreamConfig cfg);

    /// Disjoint groups 0..l-1, one class per group.
    static StreamState disjoint(std::size_t dim, std::size_t num_groups, StreamConfig cfg);

    std::size_t dim() const { return dim_; }
    std::int64_t T() const { return T_; }
    std::int64_t seen() const { return seen_; }
    double rho(std::size_t j) const;
    const std::vector<Bucket>& buckets() const { return buckets_; }
    const StreamConfig& config() const { return cfg_; }
    const ClassStructure& classes() const { return classes_; }
    std::size_t class_of_groups(std::vector<std::size_t> groups) const;

    /// Reopens with a larger class universe; existing buckets are kept.
    void reset_classes(std::vector<std::vector<std::size_t>> class_groups, std::size_t num_groups);

    void insert(std::vector<double> coords, const std::vector<std::size_t>& groups);

private:
    void reduce_into(std::size_t r);

    std::size_t dim_;
    StreamConfig cfg_;
    ClassStructure classes_;
    std::int64_t T_ = 1;
    std::int64_t seen_ = 0;
    std::uint64_t reductions_ = 0;
    std::vector<Bucket> buckets_;  // buckets_[0] is Q_0
};

void stream_insert(StreamState& state, std::vector<double> coords, const std::vector<std::size_t>& groups);

struct StreamCoreset {
    Dataset points;   // one row per coreset item, groups from its class
    WeightedSet items;
};

StreamCoreset stream_coreset(const StreamState& state);

}  // namespace fairkit
