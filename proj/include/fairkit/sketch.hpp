#pragma once

#include <cstdint>
#include <vector>

#include "fairkit/approx.hpp"
#include "fairkit/core.hpp"

namespace fairkit {

struct Sketch {
    std::size_t n = 0, d = 0, m = 0;
    std::vector<double> Z;        // d x m, row-major, orthonormal columns
    std::vector<double> reduced;  // n x m, row-major: A Z
    std::vector<double> singular_values;  // all min(n, d) of them, descending
    double residual = 0.0;        // ||A - A Z Z^T||_F^2
};

/// Exact top-m right singular vectors of the n x d row-major matrix A.
/// m is clamped to d; extra directions beyond the rank are an arbitrary
/// orthonormal completion.
Sketch truncated_svd_sketch(const std::vector<double>& A, std::size_t n, std::size_t d, std::size_t m);

struct KmeansReduction {
    Dataset sketched;   // same points and groups in R^m
    Sketch sketch;
    ReducedInstance reduced;  // coreset of the sketched points
};

/// Sketch with m = ceil(k / eps0) (eps0 from the error split), then reduce.
KmeansReduction kmeans_reduce(const Dataset& ds, std::size_t k, double epsilon, std::uint64_t seed,
                              const CoresetConfig& cfg = {});

/// Replaces each center by the mean of its cluster in the original space.
/// Empty clusters are dropped (fewer than k centers).
Solution lift_solution(const Solution& sketched, const Dataset& original, Objective obj);

}  // namespace fairkit
