#include <algorithm>
#include <cmath>

#include "fairkit/milp.hpp"

namespace fairkit {

void LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
    if (coeffs.size() != num_vars) throw InputError("lp row has wrong width");
    rows.push_back({std::move(coeffs), sense, rhs});
}

namespace {

constexpr double kTol = 1e-9;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return a_[r * (n_ + 1) + c]; }
    double& rhs(std::size_t r) { return a_[r * (n_ + 1) + n_]; }
    double& obj(std::size_t c) { return a_[m_ * (n_ + 1) + c]; }

    void pivot(std::size_t r, std::size_t c) {
        const double p = at(r, c);
        for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= p;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            const double f = a_[i * (n_ + 1) + c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_; ++j) a_[i * (n_ + 1) + j] -= f * at(r, j);
            a_[i * (n_ + 1) + c] = 0.0;
        }
        basis[r] = c;
    }

    // Minimizes the objective row (stored as reduced costs, value in obj(n_)
    // negated). Returns false when unbounded.
    bool optimize(const std::vector<char>& allowed) {
        while (true) {
            std::size_t enter = n_;
            for (std::size_t c = 0; c < n_; ++c)
                if (allowed[c] && obj(c) < -kTol) {
                    enter = c;
                    break;
                }
            if (enter == n_) return true;
            std::size_t leave = m_;
            double best = 0.0;
            for (std::size_t r = 0; r < m_; ++r) {
                const double a = at(r, enter);
                if (a <= kTol) continue;
                const double ratio = rhs(r) / a;
                if (leave == m_ || ratio < best - kTol ||
                    (ratio <= best + kTol && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
    }

    void drop_row(std::size_t r) {
        std::vector<double> b;
        b.reserve(m_ * (n_ + 1));
        for (std::size_t i = 0; i <= m_; ++i)
            if (i != r) b.insert(b.end(), a_.begin() + i * (n_ + 1), a_.begin() + (i + 1) * (n_ + 1));
        a_ = std::move(b);
        basis.erase(basis.begin() + r);
        --m_;
    }

    std::size_t rows() const { return m_; }
    std::vector<std::size_t> basis;

private:
    std::size_t m_, n_;
    std::vector<double> a_;
};

}  // namespace

LpResult simplex_solve(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars;
    if (lp.objective.size() != n) throw InputError("lp objective has wrong width");
    const std::size_t m = lp.rows.size();

    // standard form with b >= 0
    std::vector<LpRow> rows = lp.rows;
    for (auto& row : rows) {
        if (row.coeffs.size() != n) throw InputError("lp row has wrong width");
        if (row.rhs < 0) {
            for (auto& v : row.coeffs) v = -v;
            row.rhs = -row.rhs;
            if (row.sense == RowSense::le) row.sense = RowSense::ge;
            else if (row.sense == RowSense::ge) row.sense = RowSense::le;
        }
    }
    std::size_t slacks = 0, artificials = 0;
    for (const auto& row : rows) {
        if (row.sense != RowSense::eq) ++slacks;
        if (row.sense != RowSense::le) ++artificials;
    }
    const std::size_t cols = n + slacks + artificials;
    Tableau t(m, cols);
    t.basis.assign(m, 0);
    std::size_t s = n, a = n + slacks;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) t.at(r, c) = rows[r].coeffs[c];
        t.rhs(r) = rows[r].rhs;
        if (rows[r].sense == RowSense::le) {
            t.at(r, s) = 1.0;
            t.basis[r] = s++;
        } else {
            if (rows[r].sense == RowSense::ge) t.at(r, s++) = -1.0;
            t.at(r, a) = 1.0;
            t.basis[r] = a++;
        }
    }

    std::vector<char> allowed(cols, 1);
    LpResult res;
    if (artificials > 0) {
        // phase 1: minimize the sum of artificials
        for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = 0.0;
        for (std::size_t c = n + slacks; c < cols; ++c) t.obj(c) = 1.0;
        for (std::size_t r = 0; r < m; ++r)
            if (t.basis[r] >= n + slacks)
                for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= t.at(r, c);
        t.optimize(allowed);
        double scale = 1.0;
        for (const auto& row : rows) scale = std::max(scale, std::abs(row.rhs));
        if (-t.obj(cols) > 1e-7 * scale) {
            res.status = LpStatus::infeasible;
            return res;
        }
        // drive remaining artificials out of the basis
        for (std::size_t r = 0; r < t.rows();) {
            if (t.basis[r] < n + slacks) {
                ++r;
                continue;
            }
            std::size_t c = 0;
            while (c < n + slacks && std::abs(t.at(r, c)) <= kTol) ++c;
            if (c < n + slacks) {
                t.pivot(r, c);
                ++r;
            } else {
                t.drop_row(r);  // redundant equality
            }
        }
        for (std::size_t c = n + slacks; c < cols; ++c) allowed[c] = 0;
    }

    // phase 2
    for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = 0.0;
    for (std::size_t c = 0; c < n; ++c) t.obj(c) = lp.objective[c];
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const double f = t.obj(t.basis[r]);
        if (f == 0.0) continue;
        for (std::size_t c = 0; c <= cols; ++c) t.obj(c) -= f * t.at(r, c);
    }
    if (!t.optimize(allowed)) {
        res.status = LpStatus::unbounded;
        return res;
    }
    res.status = LpStatus::optimal;
    res.x.assign(n, 0.0);
    for (std::size_t r = 0; r < t.rows(); ++r)
        if (t.basis[r] < n) res.x[t.basis[r]] = std::max(0.0, t.rhs(r));
    res.value = 0.0;
    for (std::size_t c = 0; c < n; ++c) res.value += lp.objective[c] * res.x[c];
    return res;
}

}  // namespace fairkit
