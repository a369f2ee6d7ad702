#include "fairkit/approx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "fairkit/flow.hpp"
#include "fairkit/log.hpp"
#include "fairkit/random.hpp"
#include "fairkit/seeding.hpp"

namespace fairkit {

Constraint Constraint::parse(const std::string& text) {
    if (text == "fair") return fair({});
    if (text == "chromatic") return chromatic();
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InputError("unknown constraint '" + text + "'");
    const auto head = text.substr(0, colon);
    std::int64_t value = 0;
    try {
        std::size_t used = 0;
        value = std::stoll(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw InputError("constraint parameter is not an integer: '" + text + "'");
    }
    if (value < 0) throw InputError("constraint parameter must be >= 0");
    if (head == "lower") return lower(value);
    if (head == "cap") return capacity(value);
    if (head == "div") {
        if (value < 1) throw InputError("diversity parameter must be >= 1");
        return diversity(value);
    }
    throw InputError("unknown constraint '" + text + "'");
}

std::string Constraint::to_string() const {
    switch (kind) {
        case Kind::fair: return "fair";
        case Kind::lower: return "lower:" + std::to_string(param);
        case Kind::capacity: return "cap:" + std::to_string(param);
        case Kind::diversity: return "div:" + std::to_string(param);
        case Kind::chromatic: return "chromatic";
    }
    return "fair";
}

FairnessSpec Constraint::fairness_for(std::size_t num_groups) const {
    if (kind == Kind::diversity) return FairnessSpec::diversity(num_groups, static_cast<std::size_t>(param));
    if (spec.alpha.empty() && spec.beta.empty()) return FairnessSpec::unconstrained(num_groups);
    return spec;
}

bool satisfies(const Constraint& c, const Assignment& asg, const Dataset& ds) {
    for (std::size_t p = 0; p < ds.size(); ++p)
        if (asg.point_weight(p) != 1) return false;
    const auto masses = asg.cluster_masses();
    switch (c.kind) {
        case Constraint::Kind::fair:
        case Constraint::Kind::diversity:
            return fairness_check(asg, ds, c.fairness_for(ds.num_groups())).empty();
        case Constraint::Kind::lower:
            return std::all_of(masses.begin(), masses.end(), [&](auto m) { return m >= c.param; });
        case Constraint::Kind::capacity:
            return std::all_of(masses.begin(), masses.end(), [&](auto m) { return m <= c.param; });
        case Constraint::Kind::chromatic: {
            std::set<std::pair<std::size_t, std::size_t>> seen;
            for (const auto& e : asg.entries)
                if (e.weight > 1 || !seen.insert({e.center, ds.class_of(e.point)}).second) return false;
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------

MetricSpace reduce_aspect_ratio(const MetricSpace& space, double D, std::size_t n, Objective obj,
                                double alpha_c) {
    if (!(D > 0.0)) return space;
    const double dn = static_cast<double>(std::max<std::size_t>(n, 1));
    const double scale = obj == Objective::means ? std::sqrt(D) : D;
    const double d_max = 2.0 * std::pow(dn, 10) * scale;
    const double d_min = alpha_c * scale / std::pow(dn, 3);
    return space.with_clip_shift(d_max, d_min);
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<Center> as_centers(const std::vector<std::size_t>& ids) {
    std::vector<Center> out;
    for (auto id : ids) out.push_back(Center::at(id));
    return out;
}

// Cost of the best constrained assignment of W, infinity when infeasible or
// not below the cutoff.
double evaluate(const MetricSpace& space, const ClassStructure& classes, const WeightedSet& W,
                const std::vector<Center>& centers, const Constraint& c, Objective obj, double cutoff) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    try {
        switch (c.kind) {
            case Constraint::Kind::fair:
            case Constraint::Kind::diversity: {
                MilpOptions mo;
                mo.cutoff = cutoff;
                const auto res = fair_assign_exact(space, classes, W, centers,
                                                   c.fairness_for(classes.num_groups), obj, mo);
                return res.status == AssignStatus::optimal ? res.cost : inf;
            }
            case Constraint::Kind::lower:
                return lower_bounded_assign(space, W, centers, c.param, 0.0, obj).cost;
            case Constraint::Kind::capacity:
                return capacitated_assign(space, W, centers, c.param, obj).cost;
            case Constraint::Kind::chromatic:
                return chromatic_assign(space, W, centers, obj).cost;
        }
    } catch (const InfeasibleError&) {
        return inf;
    }
    return inf;
}

struct Best {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<Center> centers;
};

bool better(const Best& a, const Best& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.centers.empty()) return false;
    if (b.centers.empty()) return true;
    return centers_less(a.centers, b.centers);
}

Best evaluate_all(const std::vector<std::vector<Center>>& sets,
                  const std::function<double(const std::vector<Center>&, double)>& eval, int threads) {
    auto run = [&](std::size_t lo, std::size_t hi) {
        Best best;
        for (std::size_t i = lo; i < hi; ++i) {
            const double cost = eval(sets[i], best.cost);
            Best cand{cost, sets[i]};
            if (std::isfinite(cost) && better(cand, best)) best = std::move(cand);
        }
        return best;
    };
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                        std::max<std::size_t>(sets.size(), 1));
    if (workers == 1) return run(0, sets.size());
    std::vector<std::future<Best>> parts;
    const std::size_t chunk = (sets.size() + workers - 1) / workers;
    for (std::size_t lo = 0; lo < sets.size(); lo += chunk)
        parts.push_back(std::async(std::launch::async, run, lo, std::min(sets.size(), lo + chunk)));
    Best best;
    for (auto& f : parts) {
        auto b = f.get();
        if (std::isfinite(b.cost) && better(b, best)) best = std::move(b);
    }
    return best;
}

std::uint64_t binomial_capped(std::size_t n, std::size_t r, std::uint64_t cap) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    long double acc = 1;
    for (std::size_t i = 1; i <= r; ++i) {
        acc = acc * static_cast<long double>(n - r + i) / static_cast<long double>(i);
        if (acc > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::uint64_t>(std::llround(acc));
}

struct GuessSpace {
    std::vector<std::vector<Center>> sets;
    bool exhaustive = true;
    std::size_t grid_size = 0;
    double full_size = 0.0;
};

// Leader/radius guessing reduced to the distinct center sets it can produce.
GuessSpace build_guesses(const MetricSpace& space, const WeightedSet& leaders,
                         const std::vector<std::size_t>& F, std::size_t k, double eps0,
                         std::uint64_t budget, std::uint64_t seed) {
    GuessSpace gs;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& l : leaders)
        for (auto c : F) {
            const double d = space.dist(l.point, c);
            if (d > 0.0) lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    const double step = std::log1p(eps0);
    auto slot = [&](double d) -> long {
        if (d <= 0.0) return -1;  // the radius-0 guess
        auto t = static_cast<long>(std::floor(std::log(d / lo) / step));
        t = std::max(0L, t);
        while (t > 0 && lo * std::pow(1.0 + eps0, static_cast<double>(t)) > d) --t;
        while (lo * std::pow(1.0 + eps0, static_cast<double>(t + 1)) <= d) ++t;
        return t;
    };
    gs.grid_size = 1 + (std::isfinite(lo) ? static_cast<std::size_t>(slot(hi)) + 1 : 0);

    std::set<std::size_t> achievable;
    for (const auto& l : leaders) {
        std::map<long, std::size_t> first;  // annulus -> lowest-index center
        for (auto c : F) {
            auto [it, ins] = first.try_emplace(slot(space.dist(l.point, c)), c);
            if (!ins && c < it->second) it->second = c;
        }
        for (const auto& [t, c] : first) achievable.insert(c);
    }
    gs.full_size = std::pow(static_cast<double>(leaders.size()) * static_cast<double>(gs.grid_size),
                            static_cast<double>(k));

    std::vector<std::size_t> S(achievable.begin(), achievable.end());
    if (S.size() < k) {
        for (auto c : F) {
            if (S.size() >= k) break;
            if (!achievable.count(c)) S.push_back(c);
        }
        std::sort(S.begin(), S.end());
    }
    const std::size_t r = std::min(k, S.size());
    const auto count = binomial_capped(S.size(), r, budget);
    if (count <= budget) {
        std::vector<std::size_t> idx(r);
        for (std::size_t i = 0; i < r; ++i) idx[i] = i;
        while (true) {
            std::vector<std::size_t> ids;
            for (auto i : idx) ids.push_back(S[i]);
            gs.sets.push_back(as_centers(ids));
            std::size_t i = r;
            while (i > 0 && idx[i - 1] == S.size() - r + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
        }
        return gs;
    }
    gs.exhaustive = false;
    log()->warn("guess space exceeds the budget of {}; sampling", budget);
    Rng rng(derive_seed(seed, "guesses"));
    std::set<std::vector<std::size_t>> seen;
    while (seen.size() < budget) {
        auto picks = sample_without_replacement(rng, S.size(), r);
        std::vector<std::size_t> ids;
        for (auto p : picks) ids.push_back(S[p]);
        std::sort(ids.begin(), ids.end());
        if (seen.insert(ids).second) gs.sets.push_back(as_centers(ids));
    }
    return gs;
}

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Solution finish(const Dataset& ds, const std::vector<Center>& centers, const Constraint& c,
                double epsilon, Objective obj, std::uint64_t seed, const CoresetConfig& cfg,
                SolutionMeta meta, Clock::time_point start) {
    auto sol = assign_centers(ds, centers, c, epsilon, obj, derive_seed(seed, "final"), cfg);
    meta.elapsed_ms = elapsed_ms(start);
    sol.meta = meta;
    return sol;
}

Solution metric_pipeline(const Dataset& ds, std::size_t k, double epsilon, Objective obj,
                         const Constraint& c, std::uint64_t seed, const ApproxOptions& opts,
                         const char* name) {
    const auto start = Clock::now();
    if (k == 0) throw InputError("k must be >= 1");
    if (!(epsilon > 0.0)) throw InputError("epsilon must be > 0");
    if (ds.size() == 0) throw InputError("empty dataset");
    const double eps0 = epsilon / 8.0;
    const auto F = ds.candidate_centers();

    SolutionMeta meta;
    meta.algorithm = name;
    meta.seed = seed;
    meta.epsilon = epsilon;

    MetricSpace space = ds.space();
    WeightedSet W = unit_weights(ds);
    if (c.kind != Constraint::Kind::chromatic) {
        meta.upper_bound = cost_upper_bound(ds, k, c, obj, derive_seed(seed, "upper"), opts.coreset);
        space = reduce_aspect_ratio(ds.space(), meta.upper_bound, ds.size(), obj, opts.alpha_c);
        W = build_coreset(space, W, ds.num_classes(), k, std::min(1.0, eps0), obj,
                          derive_seed(seed, "coreset"), opts.coreset)
                .items;
    }
    meta.coreset_size = W.size();

    const auto guesses = build_guesses(space, W, F, k, eps0, opts.guess_budget, seed);
    meta.grid_size = guesses.grid_size;
    meta.guess_space_exhaustive = guesses.exhaustive;
    meta.guess_space_size = guesses.full_size;
    meta.guesses_evaluated = guesses.sets.size();
    log()->info("{}: {} center sets, grid {}, coreset {}", name, guesses.sets.size(), guesses.grid_size,
                W.size());

    const auto best = evaluate_all(
        guesses.sets,
        [&](const std::vector<Center>& C, double cutoff) {
            return evaluate(space, ds.classes(), W, C, c, obj, cutoff);
        },
        opts.threads);
    if (best.centers.empty()) throw InfeasibleError("no center set admits a feasible assignment");
    return finish(ds, best.centers, c, epsilon, obj, seed, opts.coreset, meta, start);
}

Solution euclidean_pipeline(const Dataset& ds, std::size_t k, double epsilon, Objective obj,
                            const Constraint& c, std::uint64_t seed, const ApproxOptions& opts,
                            const char* name) {
    const auto start = Clock::now();
    if (ds.space().kind() != MetricKind::euclidean) throw InputError("Euclidean pipeline needs coordinates");
    if (k == 0) throw InputError("k must be >= 1");
    if (!(epsilon > 0.0)) throw InputError("epsilon must be > 0");
    if (ds.size() == 0) throw InputError("empty dataset");

    SolutionMeta meta;
    meta.algorithm = name;
    meta.seed = seed;
    meta.epsilon = epsilon;

    WeightedSet W = unit_weights(ds);
    if (c.kind != Constraint::Kind::chromatic) {
        auto cfg = opts.coreset;
        cfg.regime = Regime::euclidean;
        W = reduce_instance(ds, k, epsilon, obj, derive_seed(seed, "reduce"), cfg).W;
    }
    meta.coreset_size = W.size();

    CandidateOptions co;
    co.trials = opts.trials;
    const auto cands = candidate_centers(ds.space(), W, k, epsilon, obj, derive_seed(seed, "candidates"), co);
    meta.guess_space_exhaustive = !cands.truncated;
    meta.guess_space_size = static_cast<double>(cands.sets.size());
    meta.guesses_evaluated = cands.sets.size();

    const auto best = evaluate_all(
        cands.sets,
        [&](const std::vector<Center>& C, double cutoff) {
            return evaluate(ds.space(), ds.classes(), W, C, c, obj, cutoff);
        },
        opts.threads);
    if (best.centers.empty()) throw InfeasibleError("no candidate set admits a feasible assignment");
    return finish(ds, best.centers, c, epsilon, obj, seed, opts.coreset, meta, start);
}

}  // namespace

double cost_upper_bound(const Dataset& ds, std::size_t k, const Constraint& c, Objective obj,
                        std::uint64_t seed, const CoresetConfig& cfg) {
    constexpr double kConstantEps = 0.5;
    auto ids = gonzalez_kcenter(ds, k, obj);
    const auto F = ds.candidate_centers();
    if (!ds.space().candidate_centers().empty()) {
        // move each k-center pick onto its nearest allowed center
        std::set<std::size_t> mapped;
        for (auto p : ids) {
            std::size_t best = F.front();
            for (auto f : F)
                if (ds.space().dist(p, f) < ds.space().dist(p, best)) best = f;
            mapped.insert(best);
        }
        ids.assign(mapped.begin(), mapped.end());
    }
    const auto centers = as_centers(ids);
    WeightedSet W = unit_weights(ds);
    if (c.kind != Constraint::Kind::chromatic)
        W = build_coreset(ds.space(), W, ds.num_classes(), k, kConstantEps, obj, seed, cfg).items;
    const double cost = evaluate(ds.space(), ds.classes(), W, centers, c, obj,
                                 std::numeric_limits<double>::infinity());
    if (!std::isfinite(cost)) throw InfeasibleError("no feasible assignment for the given constraint");
    return cost;
}

double cost_upper_bound(const Dataset& ds, std::size_t k, const FairnessSpec& spec, Objective obj,
                        std::uint64_t seed) {
    return cost_upper_bound(ds, k, Constraint::fair(spec), obj, seed);
}

Solution assign_centers(const Dataset& ds, const std::vector<Center>& centers, const Constraint& c,
                        double epsilon, Objective obj, std::uint64_t seed, const CoresetConfig& cfg) {
    Solution sol;
    sol.centers = centers;
    const auto pts = unit_weights(ds);
    switch (c.kind) {
        case Constraint::Kind::fair:
        case Constraint::Kind::diversity: {
            auto res = fair_assign_approx(ds, centers, c.fairness_for(ds.num_groups()), epsilon / 8.0, obj,
                                          seed, cfg);
            if (res.status != AssignStatus::optimal) throw InfeasibleError("no fair assignment to these centers");
            sol.assignment = std::move(res.assignment);
            break;
        }
        case Constraint::Kind::lower:
            sol.assignment = lower_bounded_assign(ds.space(), pts, centers, c.param, 0.0, obj).assignment;
            break;
        case Constraint::Kind::capacity:
            sol.assignment = capacitated_assign(ds.space(), pts, centers, c.param, obj).assignment;
            break;
        case Constraint::Kind::chromatic:
            sol.assignment = chromatic_assign(ds.space(), pts, centers, obj).assignment;
            break;
    }
    sol.cost = clustering_cost(ds.space(), sol.assignment);
    return sol;
}

Solution fair_cluster_metric(const Dataset& ds, std::size_t k, const FairnessSpec& spec,
                             double epsilon, Objective obj, std::uint64_t seed,
                             const ApproxOptions& opts) {
    return metric_pipeline(ds, k, epsilon, obj, Constraint::fair(spec), seed, opts, "fair_cluster_metric");
}

Solution fair_cluster_euclidean(const Dataset& ds, std::size_t k, const FairnessSpec& spec,
                                double epsilon, Objective obj, std::uint64_t seed,
                                const ApproxOptions& opts) {
    return euclidean_pipeline(ds, k, epsilon, obj, Constraint::fair(spec), seed, opts,
                              "fair_cluster_euclidean");
}

Solution constrained_cluster(const Dataset& ds, std::size_t k, double epsilon, Objective obj,
                             const Constraint& c, Regime regime, std::uint64_t seed,
                             const ApproxOptions& opts) {
    if (regime == Regime::euclidean) return euclidean_pipeline(ds, k, epsilon, obj, c, seed, opts, "constrained_euclidean");
    return metric_pipeline(ds, k, epsilon, obj, c, seed, opts, "constrained_metric");
}

ReducedInstance reduce_instance(const Dataset& ds, std::size_t k, double epsilon, Objective obj,
                                std::uint64_t seed, const CoresetConfig& cfg) {
    ReducedInstance red;
    red.epsilon0 = split_epsilon(epsilon);
    red.W = build_coreset(ds.space(), unit_weights(ds), ds.num_classes(), k, std::min(1.0, red.epsilon0),
                          obj, seed, cfg)
                .items;
    return red;
}

Assignment lift_reduced(const Dataset& ds, const ReducedInstance& red, const ConstraintMatrix& g,
                        const std::vector<Center>& centers, Objective obj) {
    return restore_assignment(ds, g, centers, 3.0 * red.epsilon0, obj);
}

}  // namespace fairkit
