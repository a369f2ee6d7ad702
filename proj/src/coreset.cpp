#include "fairkit/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace fairkit {

SamplingPlan sample_size(std::int64_t n, std::size_t k, double epsilon, Objective obj,
                         Regime regime, std::size_t dim, const CoresetConfig& cfg) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InputError("coreset: epsilon must lie in (0, 1]");
    SamplingPlan plan;
    plan.objective = obj;
    plan.regime = regime;
    plan.c_med = cfg.c_med;
    plan.c_mean = cfg.c_mean;
    if (cfg.forced_s > 0) {
        plan.s = cfg.forced_s;
        return plan;
    }
    const double ln_n = std::log(static_cast<double>(std::max<std::int64_t>(n, 2)));
    double eps = epsilon;
    if (obj == Objective::means && cfg.strict_kmeans_rescale) eps /= static_cast<double>(k) * ln_n;
    double log_term = ln_n;
    if (regime == Regime::euclidean) log_term += static_cast<double>(dim) * std::log(1.0 / eps);
    const double c = obj == Objective::means ? cfg.c_mean : cfg.c_med;
    const double denom = obj == Objective::means ? std::pow(eps, 5) : std::pow(eps, 3);
    const double raw = c * static_cast<double>(k) * log_term / denom;
    // guard against ceil(1.0000000001)
    const double s = std::ceil(raw - 1e-9 * std::max(1.0, raw));
    plan.s = s >= 9e18 ? static_cast<std::size_t>(9e18) : std::max<std::size_t>(1, static_cast<std::size_t>(s));
    return plan;
}

int ring_index(double r, double mu) {
    if (r <= mu) return 0;
    int j = std::max(1, static_cast<int>(std::ceil(std::log2(r / mu))));
    while (r > std::ldexp(mu, j)) ++j;
    while (j > 1 && r <= std::ldexp(mu, j - 1)) --j;
    return j;
}

RingDecomposition ring_decompose(const WeightedSet& items, const BicriteriaSolution& bic,
                                 Objective obj) {
    RingDecomposition rd;
    rd.bicriteria = bic;
    const double n = static_cast<double>(total_weight(items));
    if (n <= 0.0) return rd;
    const double avg = bic.cost / (bic.nu * n);
    rd.mu = obj == Objective::means ? std::sqrt(avg) : avg;
    rd.max_ring = static_cast<int>(std::ceil(std::log2(bic.nu * n)));
    rd.ring_of.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const int j = rd.mu > 0.0 ? ring_index(bic.nearest_dist[i], rd.mu) : 0;
        rd.ring_of.push_back({bic.nearest[i], j});
    }
    return rd;
}

WeightedSet sample_ring_class(const WeightedSet& pts, std::size_t s, Rng& rng) {
    const std::int64_t total = total_weight(pts);
    if (pts.empty() || total == 0) return {};
    if (total <= static_cast<std::int64_t>(s)) return pts;
    std::vector<std::int64_t> prefix(pts.size());
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) prefix[i] = acc += pts[i].weight;

    const auto picks = sample_without_replacement(rng, static_cast<std::uint64_t>(total), s);
    const std::int64_t q = total / static_cast<std::int64_t>(s);
    const std::int64_t r = total % static_cast<std::int64_t>(s);
    WeightedSet out;
    std::map<std::size_t, std::size_t> slot;  // item -> position in out
    for (std::size_t m = 0; m < picks.size(); ++m) {
        const auto copy = static_cast<std::int64_t>(picks[m]);
        const auto it = std::upper_bound(prefix.begin(), prefix.end(), copy);
        const auto item = static_cast<std::size_t>(it - prefix.begin());
        const std::int64_t w = q + (static_cast<std::int64_t>(m) < r ? 1 : 0);
        auto [pos, inserted] = slot.try_emplace(item, out.size());
        if (inserted) {
            out.push_back(pts[item]);
            out.back().weight = w;
        } else {
            out[pos->second].weight += w;
        }
    }
    return out;
}

Coreset build_coreset(const MetricSpace& space, const WeightedSet& input, std::size_t num_classes,
                      std::size_t k, double epsilon, Objective obj, std::uint64_t seed,
                      const CoresetConfig& cfg) {
    Coreset cs;
    const std::int64_t n = total_weight(input);
    cs.plan = sample_size(n, k, epsilon, obj, cfg.regime, space.dim(), cfg);
    if (input.empty()) return cs;
    const std::size_t k_eff = std::min(k, input.size());
    auto bic = bicriteria_seed(space, input, k_eff, obj, cfg.beta_factor, derive_seed(seed, "seed"),
                               cfg.repetitions, cfg.nu);
    cs.rings = ring_decompose(input, bic, obj);
    if (n <= static_cast<std::int64_t>(cs.plan.s)) {
        // every cell holds at most s units, nothing to sample
        cs.items = input;
        cs.cells = cs.rings.ring_of;
        return cs;
    }

    // cells in (center, ring, class) order
    std::map<std::tuple<std::size_t, int, std::size_t>, WeightedSet> cells;
    for (std::size_t i = 0; i < input.size(); ++i) {
        const auto& rc = cs.rings.ring_of[i];
        if (input[i].cls >= num_classes) throw InputError("coreset: class id out of range");
        cells[{rc.center, rc.ring, input[i].cls}].push_back(input[i]);
    }
    for (const auto& [key, pts] : cells) {
        const auto& [center, ring, cls] = key;
        WeightedSet part;
        if (bic.cost == 0.0) {
            // every point sits on its bicriteria center: one representative per cell
            part.push_back(pts.front());
            part.back().weight = total_weight(pts);
        } else {
            Rng rng(derive_seed(seed, "cell", (static_cast<std::uint64_t>(center) << 16) ^
                                                  static_cast<std::uint64_t>(ring),
                                cls));
            part = sample_ring_class(pts, cs.plan.s, rng);
        }
        for (auto& item : part) {
            cs.items.push_back(item);
            cs.cells.push_back({center, ring});
        }
    }
    return cs;
}

WeightedSet build_universal_coreset(const Dataset& ds, std::size_t k, double epsilon, Objective obj,
                                    std::uint64_t seed, const CoresetConfig& cfg) {
    return build_coreset(ds.space(), unit_weights(ds), ds.num_classes(), k, epsilon, obj, seed, cfg)
        .items;
}

}  // namespace fairkit
