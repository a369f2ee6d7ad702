#include "fairkit/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "fairkit/log.hpp"
#include "fairkit/random.hpp"

namespace fairkit {

namespace {

double powered(double d, Objective obj) { return obj == Objective::means ? d * d : d; }

BicriteriaSolution seed_once(const MetricSpace& space, const WeightedSet& items, std::size_t count,
                             Objective obj, Rng& rng) {
    BicriteriaSolution sol;
    const std::size_t n = items.size();
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> owner(n, 0);
    std::vector<double> prob(n);
    for (std::size_t round = 0; round < count; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const double w = static_cast<double>(items[i].weight);
            prob[i] = round == 0 ? w : w * powered(best[i], obj);
        }
        const std::size_t pick = sample_proportional(rng, prob);
        const std::size_t c = items[pick].point;
        sol.centers.push_back(c);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = space.dist(items[i].point, c);
            if (d < best[i]) {
                best[i] = d;
                owner[i] = round;
            }
        }
    }
    sol.nearest = std::move(owner);
    sol.nearest_dist = std::move(best);
    for (std::size_t i = 0; i < n; ++i)
        sol.cost += static_cast<double>(items[i].weight) * objective_cost(sol.nearest_dist[i], obj);
    return sol;
}

}  // namespace

BicriteriaSolution bicriteria_seed(const MetricSpace& space, const WeightedSet& items, std::size_t k,
                                   Objective obj, double beta_factor, std::uint64_t seed,
                                   int repetitions, double nu) {
    if (k == 0) throw InputError("bicriteria: k must be >= 1");
    if (items.size() < k) throw InputError("bicriteria: fewer points than k");
    if (beta_factor < 1.0) throw InputError("bicriteria: beta_factor must be >= 1");
    const auto count = std::min<std::size_t>(
        items.size(), static_cast<std::size_t>(std::ceil(beta_factor * static_cast<double>(k) - 1e-9)));
    BicriteriaSolution best;
    bool have = false;
    for (int r = 0; r < std::max(1, repetitions); ++r) {
        Rng rng(derive_seed(seed, "bicriteria", static_cast<std::uint64_t>(r)));
        auto sol = seed_once(space, items, count, obj, rng);
        if (!have || sol.cost < best.cost) {
            best = std::move(sol);
            have = true;
        }
    }
    best.nu = nu;
    return best;
}

BicriteriaSolution bicriteria_seed(const Dataset& ds, std::size_t k, Objective obj,
                                   double beta_factor, std::uint64_t seed) {
    return bicriteria_seed(ds.space(), unit_weights(ds), k, obj, beta_factor, seed);
}

std::vector<std::size_t> gonzalez_kcenter(const Dataset& ds, std::size_t k, Objective obj) {
    if (k == 0) throw InputError("k-center: k must be >= 1");
    const std::size_t n = ds.size();
    std::vector<std::size_t> centers;
    if (n == 0) return centers;
    std::vector<double> far(n, std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    while (centers.size() < std::min(k, n)) {
        const std::size_t added = next;
        centers.push_back(added);
        double worst = -1.0;
        for (std::size_t p = 0; p < n; ++p) {
            far[p] = std::min(far[p], objective_cost(ds.space().dist(p, added), obj));
            if (far[p] > worst) {
                worst = far[p];
                next = p;
            }
        }
    }
    return centers;
}

double kcenter_radius(const Dataset& ds, const std::vector<std::size_t>& centers) {
    double radius = 0.0;
    for (std::size_t p = 0; p < ds.size(); ++p) {
        double d = std::numeric_limits<double>::infinity();
        for (auto c : centers) d = std::min(d, ds.space().dist(p, c));
        radius = std::max(radius, d);
    }
    return radius;
}

bool center_less(const Center& a, const Center& b) {
    if (a.index != b.index) return a.index < b.index;
    return a.coords < b.coords;
}

bool centers_less(const std::vector<Center>& a, const std::vector<Center>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), center_less);
}

// ---------------------------------------------------------------------------

namespace {

void for_each_subset(std::size_t n, std::size_t r, const auto& fn) {
    if (r > n || r == 0) return;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

CandidateList candidate_centers(const MetricSpace& space, const WeightedSet& points, std::size_t k,
                                double epsilon, Objective obj, std::uint64_t seed,
                                const CandidateOptions& opts) {
    if (space.kind() != MetricKind::euclidean) throw InputError("candidate centers need a Euclidean metric");
    if (k == 0) throw InputError("candidate centers: k must be >= 1");
    if (!(epsilon > 0.0)) throw InputError("candidate centers: epsilon must be > 0");
    CandidateList out;
    out.trials = opts.trials;
    if (points.empty()) return out;

    const auto pool_size = static_cast<std::size_t>(std::ceil(opts.c_pool / epsilon - 1e-9));
    const auto subset_size = static_cast<std::size_t>(std::ceil(1.0 / epsilon - 1e-9));
    const std::size_t dim = space.dim();
    std::set<std::vector<Center>, decltype(&centers_less)> seen(&centers_less);

    for (int trial = 0; trial < opts.trials && !out.truncated; ++trial) {
        Rng rng(derive_seed(seed, "candidates", static_cast<std::uint64_t>(trial)));
        std::vector<std::vector<Center>> partial{{}};
        for (std::size_t round = 0; round < k; ++round) {
            std::vector<std::vector<Center>> grown;
            for (const auto& base : partial) {
                std::vector<double> prob(points.size());
                for (std::size_t i = 0; i < points.size(); ++i) {
                    double w = static_cast<double>(points[i].weight);
                    if (!base.empty()) {
                        double d = std::numeric_limits<double>::infinity();
                        for (const auto& c : base) d = std::min(d, space.dist_to(points[i].point, c));
                        w *= obj == Objective::means ? d * d : d;
                    }
                    prob[i] = w;
                }
                std::vector<std::size_t> pool;
                for (std::size_t draw = 0; draw < pool_size; ++draw) {
                    const std::size_t pick = sample_proportional(rng, prob);
                    if (std::find(pool.begin(), pool.end(), pick) == pool.end()) pool.push_back(pick);
                }
                for (auto i : pool) {
                    auto next = base;
                    next.push_back(Center::at(points[i].point));
                    grown.push_back(std::move(next));
                }
                if (obj == Objective::means && subset_size >= 2) {
                    for_each_subset(pool.size(), subset_size, [&](const std::vector<std::size_t>& sub) {
                        std::vector<double> mean(dim, 0.0);
                        double total = 0.0;
                        for (auto s : sub) {
                            const auto& item = points[pool[s]];
                            const auto xs = space.coords(item.point);
                            const double w = static_cast<double>(item.weight);
                            for (std::size_t a = 0; a < dim; ++a) mean[a] += w * xs[a];
                            total += w;
                        }
                        for (auto& v : mean) v /= total;
                        auto next = base;
                        next.push_back(Center::point(std::move(mean)));
                        grown.push_back(std::move(next));
                    });
                }
                if (grown.size() >= opts.max_candidates) break;
            }
            if (grown.size() > opts.max_candidates) {
                grown.resize(opts.max_candidates);
                out.truncated = true;
            }
            partial = std::move(grown);
        }
        for (auto& set : partial) {
            if (out.sets.size() >= opts.max_candidates) {
                out.truncated = true;
                break;
            }
            if (seen.insert(set).second) out.sets.push_back(std::move(set));
        }
    }
    if (out.truncated)
        log()->warn("candidate list truncated at {} sets", opts.max_candidates);
    return out;
}

}  // namespace fairkit
