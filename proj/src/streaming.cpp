#include "fairkit/streaming.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fairkit/log.hpp"
#include "fairkit/random.hpp"

namespace fairkit {

StreamState::StreamState(std::size_t dim, std::vector<std::vector<std::size_t>> class_groups,
                         std::size_t num_groups, StreamConfig cfg)
    : dim_(dim), cfg_(std::move(cfg)) {
    if (dim == 0) throw InputError("stream: dimension must be >= 1");
    if (cfg_.k == 0) throw InputError("stream: k must be >= 1");
    if (!(cfg_.epsilon > 0.0 && cfg_.epsilon <= 1.0)) throw InputError("stream: epsilon must lie in (0, 1]");
    reset_classes(std::move(class_groups), num_groups);
    buckets_.resize(1);
}

StreamState StreamState::disjoint(std::size_t dim, std::size_t num_groups, StreamConfig cfg) {
    std::vector<std::vector<std::size_t>> cg;
    for (std::size_t q = 0; q < num_groups; ++q) cg.push_back({q});
    return StreamState(dim, std::move(cg), num_groups, std::move(cfg));
}

void StreamState::reset_classes(std::vector<std::vector<std::size_t>> class_groups, std::size_t num_groups) {
    if (class_groups.size() < classes_.num_classes())
        throw InputError("stream: the class universe can only grow");
    for (std::size_t t = 0; t < classes_.num_classes(); ++t) {
        auto g = class_groups[t];
        std::sort(g.begin(), g.end());
        if (g != classes_.class_groups[t]) throw InputError("stream: existing classes must keep their ids");
    }
    classes_ = build_equivalence_classes(class_groups, num_groups);
    if (classes_.num_classes() != class_groups.size()) throw InputError("stream: duplicate class in the universe");
    const double gamma = static_cast<double>(classes_.num_classes());
    const double k = static_cast<double>(cfg_.k);
    T_ = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(gamma * k * k / std::pow(cfg_.epsilon, 3) - 1e-9)));
}

double StreamState::rho(std::size_t j) const {
    const double jj = static_cast<double>(j + 1);
    return cfg_.epsilon / (cfg_.b_c * jj * jj);
}

std::size_t StreamState::class_of_groups(std::vector<std::size_t> groups) const {
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    if (groups.empty()) throw InputError("stream: point without groups");
    for (auto q : groups)
        if (q >= classes_.num_groups) throw InputError("stream: unknown group id " + std::to_string(q));
    for (std::size_t t = 0; t < classes_.num_classes(); ++t)
        if (classes_.class_groups[t] == groups) return t;
    throw InputError("stream: group set outside the declared class universe");
}

void StreamState::insert(std::vector<double> coords, const std::vector<std::size_t>& groups) {
    if (coords.size() != dim_) throw InputError("stream: point has the wrong dimension");
    const auto cls = class_of_groups(groups);
    ++seen_;
    buckets_[0].items.push_back({std::move(coords), cls, 1});
    ++buckets_[0].represented;
    if (buckets_[0].represented < T_) return;
    std::size_t r = 1;
    while (r < buckets_.size() && !buckets_[r].items.empty()) ++r;
    if (r == buckets_.size()) buckets_.emplace_back();
    reduce_into(r);
}

void StreamState::reduce_into(std::size_t r) {
    std::vector<double> coords;
    WeightedSet input;
    std::vector<const StreamItem*> src;
    std::int64_t represented = 0;
    for (std::size_t j = 0; j < r; ++j) {
        for (const auto& it : buckets_[j].items) {
            input.push_back({src.size(), it.cls, it.weight});
            coords.insert(coords.end(), it.coords.begin(), it.coords.end());
            src.push_back(&it);
        }
        represented += buckets_[j].represented;
    }
    const auto space = MetricSpace::euclidean(dim_, std::move(coords));
    const double rho_r = rho(r);
    auto cs = build_coreset(space, input, classes_.num_classes(), cfg_.k, std::min(1.0, rho_r),
                            cfg_.objective, derive_seed(cfg_.seed, "stream", reductions_++), cfg_.coreset);

    Bucket out;
    out.represented = represented;
    out.rho = rho_r;
    const double m = static_cast<double>(seen_);
    out.confidence = cfg_.lambda / (m * m);
    for (const auto& item : cs.items) {
        StreamItem s = *src[item.point];
        s.weight = item.weight;
        out.items.push_back(std::move(s));
    }
    log()->debug("stream: reduced {} items into Q_{} ({} items)", input.size(), r, out.items.size());
    for (std::size_t j = 0; j < r; ++j) buckets_[j] = Bucket{};
    buckets_[r] = std::move(out);
}

void stream_insert(StreamState& state, std::vector<double> coords, const std::vector<std::size_t>& groups) {
    state.insert(std::move(coords), groups);
}

StreamCoreset stream_coreset(const StreamState& state) {
    std::vector<double> coords;
    std::vector<std::vector<std::size_t>> groups;
    WeightedSet items;
    for (const auto& b : state.buckets())
        for (const auto& it : b.items) {
            items.push_back({groups.size(), it.cls, it.weight});
            groups.push_back(state.classes().class_groups[it.cls]);
            coords.insert(coords.end(), it.coords.begin(), it.coords.end());
        }
    StreamCoreset out{Dataset(MetricSpace::euclidean(state.dim(), std::move(coords)), std::move(groups),
                              state.classes().num_groups),
                      {}};
    // items carry the class ids of the fresh dataset (first appearance order)
    for (auto& it : items) it.cls = out.points.class_of(it.point);
    out.items = std::move(items);
    return out;
}

}  // namespace fairkit
