#include "fairkit/sketch.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fairkit/milp.hpp"

namespace fairkit {

Sketch truncated_svd_sketch(const std::vector<double>& A, std::size_t n, std::size_t d, std::size_t m) {
    if (m == 0) throw InputError("sketch: m must be >= 1");
    if (A.size() != n * d) throw InputError("sketch: matrix size mismatch");
    Sketch sk;
    sk.n = n;
    sk.d = d;
    sk.m = std::min(m, d);

    using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const Mat> a(A.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(a), Eigen::ComputeFullV);
    const Eigen::MatrixXd z = svd.matrixV().leftCols(static_cast<Eigen::Index>(sk.m));
    const Eigen::MatrixXd reduced = a * z;

    sk.Z.resize(d * sk.m);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < sk.m; ++j) sk.Z[i * sk.m + j] = z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    sk.reduced.resize(n * sk.m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < sk.m; ++j)
            sk.reduced[i * sk.m + j] = reduced(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) sk.singular_values.push_back(sv(i));
    for (std::size_t i = sk.m; i < sk.singular_values.size(); ++i)
        sk.residual += sk.singular_values[i] * sk.singular_values[i];
    return sk;
}

KmeansReduction kmeans_reduce(const Dataset& ds, std::size_t k, double epsilon, std::uint64_t seed,
                              const CoresetConfig& cfg) {
    const auto& space = ds.space();
    if (space.kind() != MetricKind::euclidean) throw InputError("k-means reduction needs coordinates");
    const double eps0 = split_epsilon(epsilon);
    const auto m = static_cast<std::size_t>(std::ceil(static_cast<double>(k) / eps0 - 1e-9));
    const std::size_t n = ds.size();
    std::vector<double> A(space.raw().begin(), space.raw().begin() + static_cast<std::ptrdiff_t>(n * space.dim()));

    KmeansReduction out;
    out.sketch = truncated_svd_sketch(A, n, space.dim(), m);
    out.sketched = Dataset(MetricSpace::euclidean(out.sketch.m, out.sketch.reduced), ds.point_groups(),
                           ds.num_groups());
    auto c = cfg;
    c.regime = Regime::euclidean;
    out.reduced = reduce_instance(out.sketched, k, epsilon, Objective::means, seed, c);
    return out;
}

Solution lift_solution(const Solution& sketched, const Dataset& original, Objective obj) {
    const auto& space = original.space();
    if (space.kind() != MetricKind::euclidean) throw InputError("lift needs coordinates");
    const std::size_t k = sketched.centers.size();
    const std::size_t dim = space.dim();
    std::vector<std::vector<double>> sum(k, std::vector<double>(dim, 0.0));
    std::vector<std::int64_t> mass(k, 0);
    for (const auto& e : sketched.assignment.entries) {
        const auto xs = space.coords(e.point);
        for (std::size_t a = 0; a < dim; ++a) sum[e.center][a] += static_cast<double>(e.weight) * xs[a];
        mass[e.center] += e.weight;
    }
    Solution out;
    out.meta = sketched.meta;
    std::vector<std::size_t> remap(k, kNoIndex);
    for (std::size_t j = 0; j < k; ++j) {
        if (mass[j] == 0) continue;
        for (auto& v : sum[j]) v /= static_cast<double>(mass[j]);
        remap[j] = out.centers.size();
        out.centers.push_back(Center::point(std::move(sum[j])));
    }
    out.assignment.centers = out.centers;
    out.assignment.objective = obj;
    for (const auto& e : sketched.assignment.entries) out.assignment.add(e.point, remap[e.center], e.weight);
    out.assignment.normalize();
    out.cost = clustering_cost(space, out.assignment);
    return out;
}

}  // namespace fairkit
