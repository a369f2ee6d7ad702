#include "fairkit/flow.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace fairkit {

std::size_t FlowNetwork::add_node(std::int64_t supply) {
    supply_.push_back(supply);
    return supply_.size() - 1;
}

std::size_t FlowNetwork::add_arc(std::size_t from, std::size_t to, std::int64_t capacity, double cost) {
    if (from >= supply_.size() || to >= supply_.size()) throw std::out_of_range("flow arc endpoint");
    if (capacity < 0) throw InputError("flow arc with negative capacity");
    if (!(cost >= 0.0) || !std::isfinite(cost)) throw InputError("flow arc with negative or non-finite cost");
    arcs_.push_back({from, to, capacity, cost});
    return arcs_.size() - 1;
}

namespace {

struct Edge {
    std::size_t to;
    std::size_t rev;
    std::int64_t cap;
    double cost;
    std::size_t arc;  // original arc id, or npos for super arcs
};

}  // namespace

FlowResult min_cost_flow(const FlowNetwork& net) {
    const std::size_t n = net.num_nodes();
    std::int64_t balance = 0, need = 0;
    for (auto s : net.supplies()) {
        balance += s;
        if (s > 0) need += s;
    }
    if (balance != 0) throw InputError("flow network is unbalanced");

    const std::size_t src = n, sink = n + 1, total = n + 2;
    std::vector<std::vector<Edge>> g(total);
    auto link = [&](std::size_t u, std::size_t v, std::int64_t cap, double cost, std::size_t arc) {
        g[u].push_back({v, g[v].size(), cap, cost, arc});
        g[v].push_back({u, g[u].size() - 1, 0, -cost, kNoIndex});
    };
    std::vector<std::pair<std::size_t, std::size_t>> where(net.arcs().size());
    for (std::size_t a = 0; a < net.arcs().size(); ++a) {
        const auto& arc = net.arcs()[a];
        where[a] = {arc.from, g[arc.from].size()};
        link(arc.from, arc.to, std::min(arc.capacity, kUnbounded), arc.cost, a);
    }
    for (std::size_t v = 0; v < n; ++v) {
        const auto s = net.supplies()[v];
        if (s > 0) link(src, v, s, 0.0, kNoIndex);
        if (s < 0) link(v, sink, -s, 0.0, kNoIndex);
    }

    std::vector<double> pot(total, 0.0);
    std::vector<double> dist(total);
    std::vector<std::size_t> prev_node(total), prev_edge(total);
    std::int64_t flowed = 0;
    const double inf = std::numeric_limits<double>::infinity();

    while (flowed < need) {
        std::fill(dist.begin(), dist.end(), inf);
        std::vector<char> done(total, 0);
        dist[src] = 0.0;
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0.0, src});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (done[u]) continue;
            done[u] = 1;
            for (std::size_t e = 0; e < g[u].size(); ++e) {
                const Edge& ed = g[u][e];
                if (ed.cap <= 0 || done[ed.to]) continue;
                // reduced costs are >= 0 up to rounding noise
                const double rc = std::max(0.0, ed.cost + pot[u] - pot[ed.to]);
                const double nd = d + rc;
                if (nd < dist[ed.to]) {
                    dist[ed.to] = nd;
                    prev_node[ed.to] = u;
                    prev_edge[ed.to] = e;
                    pq.push({nd, ed.to});
                }
            }
        }
        if (dist[sink] == inf) break;
        // capping at dist[sink] keeps reduced costs of unreached arcs valid
        for (std::size_t v = 0; v < total; ++v) pot[v] += std::min(dist[v], dist[sink]);
        std::int64_t push = need - flowed;
        for (std::size_t v = sink; v != src; v = prev_node[v])
            push = std::min(push, g[prev_node[v]][prev_edge[v]].cap);
        for (std::size_t v = sink; v != src; v = prev_node[v]) {
            Edge& ed = g[prev_node[v]][prev_edge[v]];
            ed.cap -= push;
            g[v][ed.rev].cap += push;
        }
        flowed += push;
    }

    FlowResult res;
    res.feasible = flowed == need;
    res.arc_flow.resize(net.arcs().size());
    for (std::size_t a = 0; a < net.arcs().size(); ++a) {
        const Edge& ed = g[where[a].first][where[a].second];
        const std::int64_t f = std::min(net.arcs()[a].capacity, kUnbounded) - ed.cap;
        res.arc_flow[a] = f;
        res.total_cost += static_cast<double>(f) * net.arcs()[a].cost;
    }
    return res;
}

bool flow_is_valid(const FlowNetwork& net, const FlowResult& res) {
    std::vector<std::int64_t> excess(net.supplies());
    for (std::size_t a = 0; a < net.arcs().size(); ++a) {
        const auto& arc = net.arcs()[a];
        const auto f = res.arc_flow[a];
        if (f < 0 || f > arc.capacity) return false;
        excess[arc.from] -= f;
        excess[arc.to] += f;
    }
    return std::all_of(excess.begin(), excess.end(), [](auto x) { return x == 0; });
}

std::vector<double> cost_rounding(const std::vector<double>& costs, const RoundingParams& params) {
    if (!(params.budget > 0.0)) return costs;
    if (!(params.epsilon0 > 0.0)) throw InputError("cost rounding: epsilon0 must be > 0");
    const double d_max = 2.0 * params.budget;
    const double d_min = params.epsilon0 * params.budget / (2.0 * static_cast<double>(std::max<std::int64_t>(1, params.count)));
    const double base = std::log1p(params.epsilon0);
    std::vector<double> out;
    out.reserve(costs.size());
    for (double c : costs) {
        double r;
        if (c >= d_max) {
            r = d_max;
        } else if (c <= d_min) {
            r = d_min;
        } else {
            auto q = static_cast<int>(std::ceil(std::log(c / d_min) / base));
            r = d_min * std::pow(1.0 + params.epsilon0, q);
            while (r < c) r = d_min * std::pow(1.0 + params.epsilon0, ++q);
            while (q > 0 && d_min * std::pow(1.0 + params.epsilon0, q - 1) >= c)
                r = d_min * std::pow(1.0 + params.epsilon0, --q);
            r = std::min(r, d_max);
        }
        out.push_back(r);
    }
    return out;
}

TransportResult class_transport(const MetricSpace& space, const WeightedSet& class_points,
                                const std::vector<Center>& centers,
                                const std::vector<std::int64_t>& g_row, Objective obj,
                                const std::optional<RoundingParams>& rounding) {
    const std::size_t k = centers.size();
    if (g_row.size() != k) throw InputError("class transport: g row has wrong length");
    std::int64_t demand = 0;
    for (auto g : g_row) {
        if (g < 0) throw InputError("class transport: negative demand");
        demand += g;
    }
    if (demand != total_weight(class_points))
        throw InputError("class transport: demands do not match the class weight");

    const auto true_costs = cost_table(space, class_points, centers, obj);
    const auto costs = rounding ? cost_rounding(true_costs, *rounding) : true_costs;

    FlowNetwork net;
    for (const auto& p : class_points) net.add_node(p.weight);
    for (std::size_t j = 0; j < k; ++j) net.add_node(-g_row[j]);
    const std::size_t m = class_points.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) net.add_arc(i, m + j, kUnbounded, costs[i * k + j]);
    const auto res = min_cost_flow(net);
    if (!res.feasible) throw InfeasibleError("class transport: no feasible flow");

    TransportResult out;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const auto f = res.arc_flow[i * k + j];
            if (f == 0) continue;
            out.entries.push_back({class_points[i].point, j, f});
            out.cost += static_cast<double>(f) * true_costs[i * k + j];
        }
    return out;
}

namespace {

std::size_t nearest_of(const std::vector<double>& costs, std::size_t i, std::size_t k) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j)
        if (costs[i * k + j] < costs[i * k + best]) best = j;
    return best;
}

VariantResult finish(const MetricSpace& space, const std::vector<Center>& centers, Objective obj,
                     Assignment asg) {
    asg.centers = centers;
    asg.objective = obj;
    asg.normalize();
    VariantResult out;
    out.cost = clustering_cost(space, asg);
    out.assignment = std::move(asg);
    return out;
}

std::vector<double> grid_round(const std::vector<double>& costs, double epsilon) {
    if (!(epsilon > 0.0)) return costs;
    double lo = std::numeric_limits<double>::infinity();
    for (double c : costs)
        if (c > 0.0) lo = std::min(lo, c);
    std::vector<double> out(costs);
    if (!std::isfinite(lo)) return out;
    for (auto& c : out) {
        if (c <= 0.0) continue;
        auto q = static_cast<int>(std::ceil(std::log(c / lo) / std::log1p(epsilon)));
        double r = lo * std::pow(1.0 + epsilon, q);
        while (r < c) r = lo * std::pow(1.0 + epsilon, ++q);
        c = r;
    }
    return out;
}

}  // namespace

VariantResult nearest_assign(const MetricSpace& space, const WeightedSet& pts,
                             const std::vector<Center>& centers, Objective obj) {
    const std::size_t k = centers.size();
    if (k == 0) throw InputError("assignment needs at least one center");
    const auto costs = cost_table(space, pts, centers, obj);
    Assignment asg;
    for (std::size_t i = 0; i < pts.size(); ++i) asg.add(pts[i].point, nearest_of(costs, i, k), pts[i].weight);
    return finish(space, centers, obj, std::move(asg));
}

VariantResult lower_bounded_assign(const MetricSpace& space, const WeightedSet& pts,
                                   const std::vector<Center>& centers, std::int64_t lower,
                                   double epsilon, Objective obj) {
    const std::size_t k = centers.size();
    if (k == 0) throw InputError("assignment needs at least one center");
    if (lower < 0) throw InputError("lower bound must be >= 0");
    const std::int64_t n = total_weight(pts);
    const std::int64_t reserved = lower * static_cast<std::int64_t>(k);
    if (n < reserved) throw InfeasibleError("lower bound: fewer points than k * L");

    const auto true_costs = cost_table(space, pts, centers, obj);
    const auto costs = grid_round(true_costs, epsilon);
    const std::size_t m = pts.size();
    FlowNetwork net;
    for (const auto& p : pts) net.add_node(p.weight);
    for (std::size_t j = 0; j < k; ++j) net.add_node(-lower);
    const std::size_t w = net.add_node(-(n - reserved));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) net.add_arc(i, m + j, kUnbounded, costs[i * k + j]);
        net.add_arc(i, w, kUnbounded, costs[i * k + nearest_of(costs, i, k)]);
    }
    const auto res = min_cost_flow(net);
    if (!res.feasible) throw InfeasibleError("lower bound: no feasible flow");

    Assignment asg;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t base = i * (k + 1);
        for (std::size_t j = 0; j < k; ++j) asg.add(pts[i].point, j, res.arc_flow[base + j]);
        // mass through w goes to the nearest center under the true costs
        asg.add(pts[i].point, nearest_of(true_costs, i, k), res.arc_flow[base + k]);
    }
    return finish(space, centers, obj, std::move(asg));
}

VariantResult capacitated_assign(const MetricSpace& space, const WeightedSet& pts,
                                 const std::vector<Center>& centers, std::int64_t upper,
                                 Objective obj) {
    const std::size_t k = centers.size();
    if (k == 0) throw InputError("assignment needs at least one center");
    if (upper < 0) throw InputError("capacity must be >= 0");
    const std::int64_t n = total_weight(pts);
    if (n > upper * static_cast<std::int64_t>(k)) throw InfeasibleError("capacity: more points than k * U");

    const auto costs = cost_table(space, pts, centers, obj);
    const std::size_t m = pts.size();
    FlowNetwork net;
    for (const auto& p : pts) net.add_node(p.weight);
    for (std::size_t j = 0; j < k; ++j) net.add_node(0);
    const std::size_t t = net.add_node(-n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) net.add_arc(i, m + j, kUnbounded, costs[i * k + j]);
    for (std::size_t j = 0; j < k; ++j) net.add_arc(m + j, t, upper, 0.0);
    const auto res = min_cost_flow(net);
    if (!res.feasible) throw InfeasibleError("capacity: no feasible flow");

    Assignment asg;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) asg.add(pts[i].point, j, res.arc_flow[i * k + j]);
    return finish(space, centers, obj, std::move(asg));
}

VariantResult chromatic_assign(const MetricSpace& space, const WeightedSet& pts,
                               const std::vector<Center>& centers, Objective obj) {
    const std::size_t k = centers.size();
    if (k == 0) throw InputError("assignment needs at least one center");
    std::size_t colors = 0;
    for (const auto& p : pts) {
        if (p.weight != 1) throw InputError("chromatic assignment needs unit weights");
        colors = std::max(colors, p.cls + 1);
    }
    std::vector<std::int64_t> per_color(colors, 0);
    for (const auto& p : pts) ++per_color[p.cls];
    for (std::size_t c = 0; c < colors; ++c)
        if (per_color[c] > static_cast<std::int64_t>(k)) {
            std::ostringstream os;
            os << "chromatic: color " << c << " has " << per_color[c] << " points but k = " << k;
            throw InfeasibleError(os.str());
        }

    const auto costs = cost_table(space, pts, centers, obj);
    const std::size_t m = pts.size();
    FlowNetwork net;
    for (std::size_t i = 0; i < m; ++i) net.add_node(1);
    const std::size_t slot0 = net.num_nodes();
    for (std::size_t c = 0; c < colors * k; ++c) net.add_node(0);
    const std::size_t t = net.add_node(-static_cast<std::int64_t>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j)
            net.add_arc(i, slot0 + pts[i].cls * k + j, 1, costs[i * k + j]);
    for (std::size_t c = 0; c < colors * k; ++c) net.add_arc(slot0 + c, t, 1, 0.0);
    const auto res = min_cost_flow(net);
    if (!res.feasible) throw InfeasibleError("chromatic: no feasible flow");

    Assignment asg;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) asg.add(pts[i].point, j, res.arc_flow[i * k + j]);
    return finish(space, centers, obj, std::move(asg));
}

}  // namespace fairkit
