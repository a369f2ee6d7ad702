#include "fairkit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "fairkit/approx.hpp"
#include "fairkit/coreset.hpp"
#include "fairkit/log.hpp"
#include "fairkit/oracle.hpp"
#include "fairkit/random.hpp"
#include "fairkit/sketch.hpp"
#include "fairkit/streaming.hpp"

namespace fairkit::cli {

using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

bool parse_index(const std::string& s, std::size_t& v) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return false;
    v = std::stoull(s);
    return true;
}

struct Line {
    std::size_t number;
    std::string text;
};

std::vector<Line> read_lines(std::istream& in) {
    std::vector<Line> out;
    std::string text;
    std::size_t no = 0;
    while (std::getline(in, text)) {
        ++no;
        const auto t = trim(text);
        if (t.empty() || t[0] == '#') continue;
        out.push_back({no, t});
    }
    return out;
}

[[noreturn]] void fail_at(const std::string& what, std::size_t line, const std::string& msg) {
    throw InputError(what + " line " + std::to_string(line) + ": " + msg);
}

std::vector<std::size_t> parse_group_list(const std::string& text, std::size_t line, const std::string& what) {
    std::vector<std::size_t> out;
    for (const auto& tok : split(text, ';')) {
        std::size_t g;
        if (!parse_index(tok, g)) fail_at(what, line, "bad group id '" + tok + "'");
        out.push_back(g);
    }
    if (out.empty()) fail_at(what, line, "point without groups");
    return out;
}

}  // namespace

Dataset ingest_streams(std::istream& points, std::istream* groups, const IngestOptions& opts) {
    auto lines = read_lines(points);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> numbers;
    for (const auto& l : lines) {
        rows.push_back(split(l.text, ','));
        numbers.push_back(l.number);
    }
    // optional header: first row with a non-numeric leading field
    if (!rows.empty()) {
        double tmp;
        if (!parse_double(rows[0][0], tmp)) {
            rows.erase(rows.begin());
            numbers.erase(numbers.begin());
        }
    }
    const std::size_t n = rows.size();
    std::vector<std::vector<std::size_t>> point_groups(n);
    if (opts.inline_groups) {
        for (std::size_t r = 0; r < n; ++r) {
            if (rows[r].size() < 2) fail_at("points", numbers[r], "missing inline group column");
            point_groups[r] = parse_group_list(rows[r].back(), numbers[r], "points");
            rows[r].pop_back();
        }
    }
    const std::size_t width = n ? rows[0].size() : 0;
    std::vector<double> values;
    values.reserve(n * width);
    for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != width)
            fail_at("points", numbers[r],
                    "expected " + std::to_string(width) + " columns, got " + std::to_string(rows[r].size()));
        for (const auto& tok : rows[r]) {
            double v;
            if (!parse_double(tok, v) || !std::isfinite(v)) fail_at("points", numbers[r], "bad number '" + tok + "'");
            if (opts.matrix && v < 0.0) fail_at("points", numbers[r], "negative distance");
            values.push_back(v);
        }
    }
    MetricSpace space = MetricSpace::euclidean(0, {});
    if (opts.matrix) {
        if (width != n) throw InputError("distance matrix must be square, got " + std::to_string(n) + "x" + std::to_string(width));
        space = MetricSpace::explicit_matrix(n, std::move(values), opts.check_triangle);
    } else {
        space = MetricSpace::euclidean(width, std::move(values));
    }

    if (groups && !opts.inline_groups) {
        const auto glines = read_lines(*groups);
        const bool membership = std::any_of(glines.begin(), glines.end(),
                                            [](const Line& l) { return l.text.find(',') != std::string::npos; });
        if (membership) {
            for (std::size_t i = 0; i < glines.size(); ++i) {
                const auto parts = split(glines[i].text, ',');
                std::size_t p, g;
                if (parts.size() != 2) fail_at("groups", glines[i].number, "expected point_id,group_id");
                if (!parse_index(parts[0], p) || !parse_index(parts[1], g)) {
                    if (i == 0) continue;  // header
                    fail_at("groups", glines[i].number, "bad membership row");
                }
                if (p >= n) fail_at("groups", glines[i].number, "unknown point id " + parts[0]);
                point_groups[p].push_back(g);
            }
        } else {
            if (glines.size() != n)
                throw InputError("groups file has " + std::to_string(glines.size()) + " rows for " +
                                 std::to_string(n) + " points");
            for (std::size_t i = 0; i < n; ++i)
                point_groups[i] = parse_group_list(glines[i].text, glines[i].number, "groups");
        }
    } else if (!opts.inline_groups) {
        for (auto& g : point_groups) g = {0};
    }
    for (std::size_t p = 0; p < n; ++p)
        if (point_groups[p].empty()) throw InputError("point " + std::to_string(p) + " belongs to no group");
    return Dataset(std::move(space), std::move(point_groups), opts.num_groups);
}

Dataset ingest(const std::string& points_path, const std::string& groups_path, const IngestOptions& opts) {
    std::ifstream pf;
    std::istream* pin = &std::cin;
    if (points_path != "-") {
        pf.open(points_path);
        if (!pf) throw InputError("cannot open points file '" + points_path + "'");
        pin = &pf;
    }
    std::ifstream gf;
    std::istream* gin = nullptr;
    if (!groups_path.empty()) {
        gf.open(groups_path);
        if (!gf) throw InputError("cannot open groups file '" + groups_path + "'");
        gin = &gf;
    }
    return ingest_streams(*pin, gin, opts);
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_points_csv(std::ostream& out, const Dataset& ds) {
    const auto& space = ds.space();
    const std::size_t n = ds.size();
    const std::size_t cols = space.kind() == MetricKind::euclidean ? space.dim() : n;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c) out << ',';
            out << fmt17(space.kind() == MetricKind::euclidean ? space.coords(p)[c] : space.dist(p, c));
        }
        out << '\n';
    }
}

void write_groups(std::ostream& out, const Dataset& ds) {
    for (std::size_t p = 0; p < ds.size(); ++p) {
        const auto& g = ds.groups_of(p);
        for (std::size_t i = 0; i < g.size(); ++i) out << (i ? ";" : "") << g[i];
        out << '\n';
    }
}

// ---------------------------------------------------------------------------

namespace {

struct RunConfig {
    std::string command;
    std::string points;
    std::string groups;
    bool inline_groups = false;
    bool matrix = false;
    bool no_triangle_check = false;
    std::size_t num_groups = 0;
    std::size_t k = 2;
    double epsilon = 0.5;
    std::string objective = "median";
    std::vector<double> alpha;
    std::vector<double> beta;
    std::string constraint = "fair";
    std::string regime = "metric";
    std::uint64_t seed = 0;
    std::uint64_t guess_budget = 1'000'000;
    bool strict_kmeans_rescale = false;
    int threads = 1;
    int trials = 32;
    std::string output = "-";
    bool timing = false;
    std::string centers_file;
    std::vector<std::size_t> center_ids;
    std::vector<std::size_t> candidates;
    std::string classes;
    bool free_centers = false;
    std::size_t oracle_max_points = 8;
    std::size_t oracle_max_k = 3;
    int repeats = 5;
};

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["points"] = c.points;
    j["groups"] = c.groups;
    j["inline_groups"] = c.inline_groups;
    j["matrix"] = c.matrix;
    j["k"] = c.k;
    j["epsilon"] = c.epsilon;
    j["objective"] = c.objective;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["constraint"] = c.constraint;
    j["regime"] = c.regime;
    j["seed"] = c.seed;
    j["guess_budget"] = c.guess_budget;
    j["strict_kmeans_rescale"] = c.strict_kmeans_rescale;
    j["threads"] = c.threads;
    j["trials"] = c.trials;
    if (!c.candidates.empty()) j["candidates"] = c.candidates;
    return j;
}

json center_json(const Dataset& ds, const Center& c) {
    json j;
    if (c.index != kNoIndex) j["index"] = c.index;
    if (ds.space().kind() == MetricKind::euclidean) j["coords"] = ds.space().center_coords(c);
    return j;
}

Center center_from_json(const json& j) {
    if (j.contains("index")) return Center::at(j["index"].get<std::size_t>());
    if (j.contains("coords")) return Center::point(j["coords"].get<std::vector<double>>());
    throw InputError("center entry needs an index or coordinates");
}

json matrix_json(const ConstraintMatrix& m) {
    json rows = json::array();
    for (std::size_t j = 0; j < m.rows(); ++j) {
        json row = json::array();
        for (std::size_t t = 0; t < m.cols(); ++t) row.push_back(m(j, t));
        rows.push_back(row);
    }
    return rows;
}

json assignment_json(const Assignment& asg) {
    json out = json::array();
    for (const auto& e : asg.entries) out.push_back({e.point, e.center, e.weight});
    return out;
}

json weighted_json(const WeightedSet& W) {
    json out = json::array();
    for (const auto& it : W) out.push_back({it.point, it.cls, it.weight});
    return out;
}

json classes_json(const ClassStructure& cs) {
    json out = json::array();
    for (const auto& g : cs.class_groups) out.push_back(g);
    return out;
}

json solution_json(const RunConfig& cfg, const Dataset& ds, const Solution& sol) {
    json j;
    j["config"] = config_json(cfg);
    j["centers"] = json::array();
    for (const auto& c : sol.centers) j["centers"].push_back(center_json(ds, c));
    j["assignment"] = assignment_json(sol.assignment);
    j["cost"] = sol.cost;
    j["constraint_matrix"] = matrix_json(constraint_matrix_of(sol.assignment, ds));
    json d;
    d["guess_space_exhaustive"] = sol.meta.guess_space_exhaustive;
    d["coreset_size"] = sol.meta.coreset_size;
    d["elapsed_ms"] = cfg.timing ? json(sol.meta.elapsed_ms) : json(nullptr);
    d["algorithm"] = sol.meta.algorithm;
    d["guesses_evaluated"] = sol.meta.guesses_evaluated;
    d["guess_space_size"] = sol.meta.guess_space_size;
    d["grid_size"] = sol.meta.grid_size;
    d["upper_bound"] = sol.meta.upper_bound;
    d["classes"] = classes_json(ds.classes());
    j["diagnostics"] = d;
    return j;
}

Dataset load(const RunConfig& cfg) {
    if (cfg.points.empty()) throw InputError("--points is required");
    IngestOptions io;
    io.matrix = cfg.matrix;
    io.inline_groups = cfg.inline_groups;
    io.check_triangle = !cfg.no_triangle_check;
    io.num_groups = cfg.num_groups;
    auto ds = ingest(cfg.points, cfg.groups, io);
    if (!cfg.candidates.empty()) {
        auto space = ds.space();
        space.set_candidate_centers(cfg.candidates);
        ds = ds.with_space(std::move(space));
    }
    return ds;
}

FairnessSpec spec_of(const RunConfig& cfg, const Dataset& ds) {
    const std::size_t ell = ds.num_groups();
    FairnessSpec spec;
    spec.alpha = cfg.alpha.empty() ? std::vector<double>(ell, 1.0) : cfg.alpha;
    spec.beta = cfg.beta.empty() ? std::vector<double>(ell, 0.0) : cfg.beta;
    spec.validate(ell);
    return spec;
}

Constraint constraint_of(const RunConfig& cfg, const Dataset& ds) {
    auto c = Constraint::parse(cfg.constraint);
    if (c.kind == Constraint::Kind::fair) c.spec = spec_of(cfg, ds);
    return c;
}

CoresetConfig coreset_cfg(const RunConfig& cfg) {
    CoresetConfig c;
    c.strict_kmeans_rescale = cfg.strict_kmeans_rescale;
    return c;
}

ApproxOptions approx_opts(const RunConfig& cfg) {
    ApproxOptions o;
    o.guess_budget = cfg.guess_budget;
    o.threads = cfg.threads;
    o.trials = cfg.trials;
    o.coreset = coreset_cfg(cfg);
    return o;
}

Regime regime_of(const RunConfig& cfg) {
    if (cfg.regime == "metric") return Regime::metric;
    if (cfg.regime == "euclidean") return Regime::euclidean;
    throw InputError("unknown regime '" + cfg.regime + "'");
}

std::vector<Center> centers_of(const RunConfig& cfg) {
    std::vector<Center> out;
    if (!cfg.centers_file.empty()) {
        std::ifstream in(cfg.centers_file);
        if (!in) throw InputError("cannot open centers file '" + cfg.centers_file + "'");
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw InputError(std::string("centers file: ") + e.what());
        }
        const json& list = j.is_array() ? j : j.at("centers");
        for (const auto& c : list) out.push_back(center_from_json(c));
    }
    for (auto id : cfg.center_ids) out.push_back(Center::at(id));
    if (out.empty()) throw InputError("assign needs --centers or --center-ids");
    return out;
}

void check_centers(const Dataset& ds, const std::vector<Center>& centers) {
    for (const auto& c : centers) {
        if (c.index != kNoIndex && c.index >= ds.space().size()) throw InputError("center index out of range");
        if (c.index == kNoIndex && (ds.space().kind() != MetricKind::euclidean || c.coords.size() != ds.space().dim()))
            throw InputError("center coordinates do not match the dataset");
    }
}

json cmd_coreset(const RunConfig& cfg) {
    const auto ds = load(cfg);
    const auto obj = parse_objective(cfg.objective);
    auto cc = coreset_cfg(cfg);
    cc.regime = regime_of(cfg);
    const auto start = std::chrono::steady_clock::now();
    const auto cs = build_coreset(ds.space(), unit_weights(ds), ds.num_classes(), cfg.k, std::min(1.0, cfg.epsilon),
                                  obj, cfg.seed, cc);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    json j;
    j["config"] = config_json(cfg);
    j["coreset"] = weighted_json(cs.items);
    j["classes"] = classes_json(ds.classes());
    json d;
    d["coreset_size"] = cs.items.size();
    d["sample_size"] = cs.plan.s;
    d["mu"] = cs.rings.mu;
    d["elapsed_ms"] = cfg.timing ? json(ms) : json(nullptr);
    j["diagnostics"] = d;
    return j;
}

json cmd_assign(const RunConfig& cfg) {
    const auto ds = load(cfg);
    const auto obj = parse_objective(cfg.objective);
    const auto centers = centers_of(cfg);
    check_centers(ds, centers);
    const auto start = std::chrono::steady_clock::now();
    auto sol = assign_centers(ds, centers, constraint_of(cfg, ds), cfg.epsilon, obj, derive_seed(cfg.seed, "final"),
                              coreset_cfg(cfg));
    sol.meta.algorithm = "assign";
    sol.meta.seed = cfg.seed;
    sol.meta.epsilon = cfg.epsilon;
    sol.meta.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return solution_json(cfg, ds, sol);
}

Solution cluster_once(const RunConfig& cfg, const Dataset& ds, std::uint64_t seed) {
    const auto obj = parse_objective(cfg.objective);
    const auto c = constraint_of(cfg, ds);
    return constrained_cluster(ds, cfg.k, cfg.epsilon, obj, c, regime_of(cfg), seed, approx_opts(cfg));
}

json cmd_cluster(const RunConfig& cfg) {
    const auto ds = load(cfg);
    return solution_json(cfg, ds, cluster_once(cfg, ds, cfg.seed));
}

json cmd_oracle(const RunConfig& cfg) {
    const auto ds = load(cfg);
    const auto obj = parse_objective(cfg.objective);
    const auto c = constraint_of(cfg, ds);
    OracleBudget budget;
    budget.max_points = cfg.oracle_max_points;
    budget.max_k = cfg.oracle_max_k;
    budget.max_candidates = std::max<std::size_t>(budget.max_candidates, cfg.oracle_max_points);
    OracleSolution os;
    if (cfg.free_centers) {
        if (c.kind != Constraint::Kind::fair && c.kind != Constraint::Kind::diversity)
            throw InputError("--free-centers supports fair and div constraints only");
        os = exact_fair_optimum_free(ds, cfg.k, c.fairness_for(ds.num_groups()), obj, budget);
    } else if (c.kind == Constraint::Kind::fair) {
        os = exact_fair_optimum(ds, cfg.k, c.spec, obj, {}, budget);
    } else {
        os = exact_variant_optimum(ds, cfg.k, c, obj, {}, budget);
    }
    if (!os.feasible) throw InfeasibleError("no feasible solution exists");
    Solution sol;
    sol.centers = os.centers;
    sol.assignment = os.assignment;
    sol.cost = os.cost;
    sol.meta.algorithm = cfg.free_centers ? "oracle_free_centers" : "oracle";
    return solution_json(cfg, ds, sol);
}

json cmd_reduce(const RunConfig& cfg) {
    const auto ds = load(cfg);
    const auto obj = parse_objective(cfg.objective);
    json j;
    j["config"] = config_json(cfg);
    if (obj == Objective::means && ds.space().kind() == MetricKind::euclidean) {
        const auto red = kmeans_reduce(ds, cfg.k, cfg.epsilon, cfg.seed, coreset_cfg(cfg));
        j["coreset"] = weighted_json(red.reduced.W);
        json sk;
        sk["m"] = red.sketch.m;
        sk["residual"] = red.sketch.residual;
        sk["Z"] = red.sketch.Z;
        j["sketch"] = sk;
        j["classes"] = classes_json(red.sketched.classes());
        j["epsilon0"] = red.reduced.epsilon0;
    } else {
        auto cc = coreset_cfg(cfg);
        cc.regime = ds.space().kind() == MetricKind::euclidean ? Regime::euclidean : Regime::metric;
        const auto red = reduce_instance(ds, cfg.k, cfg.epsilon, obj, cfg.seed, cc);
        j["coreset"] = weighted_json(red.W);
        j["classes"] = classes_json(ds.classes());
        j["epsilon0"] = red.epsilon0;
    }
    return j;
}

json cmd_stream(const RunConfig& cfg) {
    auto rc = cfg;
    rc.matrix = false;
    const auto ds = load(rc);
    if (ds.space().kind() != MetricKind::euclidean) throw InputError("stream needs coordinates");
    std::vector<std::vector<std::size_t>> universe;
    std::size_t ell = ds.num_groups();
    if (!cfg.classes.empty()) {
        for (const auto& part : split(cfg.classes, '|')) universe.push_back(parse_group_list(part, 0, "classes"));
        for (const auto& g : universe)
            for (auto q : g) ell = std::max(ell, q + 1);
    } else {
        universe = ds.classes().class_groups;
    }
    StreamConfig sc;
    sc.k = cfg.k;
    sc.epsilon = std::min(1.0, cfg.epsilon);
    sc.objective = parse_objective(cfg.objective);
    sc.seed = cfg.seed;
    sc.coreset = coreset_cfg(cfg);
    StreamState state(ds.space().dim(), universe, ell, sc);
    for (std::size_t p = 0; p < ds.size(); ++p) {
        const auto xs = ds.space().coords(p);
        stream_insert(state, {xs.begin(), xs.end()}, ds.groups_of(p));
    }
    const auto out = stream_coreset(state);
    json j;
    j["config"] = config_json(cfg);
    json items = json::array();
    for (const auto& it : out.items) {
        const auto xs = out.points.space().coords(it.point);
        items.push_back({{"coords", std::vector<double>(xs.begin(), xs.end())},
                         {"groups", out.points.groups_of(it.point)},
                         {"weight", it.weight}});
    }
    j["coreset"] = items;
    json buckets = json::array();
    for (std::size_t b = 0; b < state.buckets().size(); ++b) {
        const auto& bk = state.buckets()[b];
        if (bk.items.empty()) continue;
        buckets.push_back({{"level", b},
                           {"items", bk.items.size()},
                           {"represented", bk.represented},
                           {"rho", bk.rho},
                           {"confidence", bk.confidence}});
    }
    j["stream"] = {{"T", state.T()}, {"seen", state.seen()}, {"buckets", buckets}};
    return j;
}

json cmd_bench(const RunConfig& cfg, bool seed_given) {
    if (!seed_given) throw InputError("bench requires an explicit --seed");
    const auto ds = load(cfg);
    json runs = json::array();
    for (int r = 0; r < cfg.repeats; ++r) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
        const auto start = std::chrono::steady_clock::now();
        const auto sol = cluster_once(cfg, ds, seed);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        runs.push_back({{"seed", seed}, {"cost", sol.cost}, {"elapsed_ms", ms}});
    }
    json j;
    j["config"] = config_json(cfg);
    j["runs"] = runs;
    return j;
}

void add_common(CLI::App* app, RunConfig& c) {
    app->add_option("--points,-p", c.points, "points CSV (coordinates or distance matrix), - for stdin");
    app->add_option("--groups,-g", c.groups, "groups file: 'g1;g2' per row or point_id,group_id rows");
    app->add_flag("--inline-groups", c.inline_groups, "last points column holds the groups");
    app->add_flag("--matrix", c.matrix, "points file is an n x n distance matrix");
    app->add_flag("--no-triangle-check", c.no_triangle_check, "skip triangle-inequality validation");
    app->add_option("--num-groups", c.num_groups, "number of groups (default: inferred)");
    app->add_option("--candidates", c.candidates, "candidate center indices (default: all points)")->delimiter(',');
    app->add_option("--k", c.k, "number of centers")->check(CLI::PositiveNumber);
    app->add_option("--epsilon", c.epsilon, "error parameter")->check(CLI::PositiveNumber);
    app->add_option("--objective", c.objective, "median or means")->check(CLI::IsMember({"median", "means"}));
    app->add_option("--alpha", c.alpha, "per-group upper fractions")->delimiter(',');
    app->add_option("--beta", c.beta, "per-group lower fractions")->delimiter(',');
    app->add_option("--constraint", c.constraint, "fair, lower:L, cap:U, div:l or chromatic");
    app->add_option("--regime", c.regime, "metric or euclidean")->check(CLI::IsMember({"metric", "euclidean"}));
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--guess-budget", c.guess_budget, "max center sets evaluated by the metric algorithm");
    app->add_flag("--strict-kmeans-rescale", c.strict_kmeans_rescale, "apply the k log n rescale for means");
    app->add_option("--threads", c.threads, "worker threads (1: sequential)")->check(CLI::PositiveNumber);
    app->add_option("--trials", c.trials, "candidate trials (euclidean)")->check(CLI::PositiveNumber);
    app->add_option("--output,-o", c.output, "result file, - for stdout");
    app->add_flag("--timing", c.timing, "record elapsed time in diagnostics");
}

}  // namespace

int run(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"fair clustering with universal coresets"};
    app.require_subcommand(1);
    struct Cmd {
        const char* name;
        const char* help;
    };
    const Cmd cmds[] = {{"coreset", "build a universal coreset"},
                        {"assign", "assign points to fixed centers"},
                        {"cluster", "run a clustering pipeline"},
                        {"stream", "feed the points through the streaming coreset"},
                        {"reduce", "build a reduced instance"},
                        {"oracle", "brute-force optimum (small inputs)"},
                        {"bench", "repeat cluster over seeds"}};
    std::map<std::string, CLI::App*> subs;
    for (const auto& c : cmds) {
        auto* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, cfg);
        subs[c.name] = sub;
    }
    subs["assign"]->add_option("--centers", cfg.centers_file, "JSON file with a centers array (e.g. a cluster result)");
    subs["assign"]->add_option("--center-ids", cfg.center_ids, "center indices")->delimiter(',');
    subs["stream"]->add_option("--classes", cfg.classes, "class universe, e.g. '0|1|0;1'");
    subs["oracle"]->add_flag("--free-centers", cfg.free_centers, "unrestricted Euclidean centers");
    subs["oracle"]->add_option("--oracle-max-points", cfg.oracle_max_points, "enumeration limit on n");
    subs["oracle"]->add_option("--oracle-max-k", cfg.oracle_max_k, "enumeration limit on k");
    subs["bench"]->add_option("--repeats", cfg.repeats, "number of seeds")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) cfg.command = name;

    try {
        json result;
        if (cfg.command == "coreset") result = cmd_coreset(cfg);
        else if (cfg.command == "assign") result = cmd_assign(cfg);
        else if (cfg.command == "cluster") result = cmd_cluster(cfg);
        else if (cfg.command == "stream") result = cmd_stream(cfg);
        else if (cfg.command == "reduce") result = cmd_reduce(cfg);
        else if (cfg.command == "oracle") result = cmd_oracle(cfg);
        else result = cmd_bench(cfg, subs["bench"]->count("--seed") > 0);

        const std::string text = result.dump(2) + "\n";
        if (cfg.output == "-") {
            std::cout << text;
        } else {
            std::ofstream out(cfg.output, std::ios::binary);
            if (!out) throw InputError("cannot write '" + cfg.output + "'");
            out << text;
            std::cout << cfg.output << "\n";
        }
        return 0;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"fairkit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace fairkit::cli
