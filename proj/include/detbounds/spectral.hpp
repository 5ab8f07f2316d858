#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "detbounds/matrix.hpp"

namespace detbounds {

struct RowSumBracket {
    Rational min;
    Rational max;
};

/// Exact min/max row sums; for a nonnegative matrix they bracket the Perron root.
inline RowSumBracket row_sum_bracket(const RationalMatrix& f) {
    RowSumBracket b{0, 0};
    for (std::size_t i = 0; i < f.order(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < f.order(); ++j) s += f(i, j);
        if (i == 0 || s < b.min) b.min = s;
        if (i == 0 || s > b.max) b.max = s;
    }
    return b;
}

inline bool is_nonnegative(const RationalMatrix& f) {
    for (std::size_t i = 0; i < f.order(); ++i)
        for (std::size_t j = 0; j < f.order(); ++j)
            if (f(i, j).sign() < 0) return false;
    return true;
}

struct SpectralEstimate {
    double estimate = 0.0;
    /// Collatz–Wielandt bounds from the final iterate (floating point).
    double lower = 0.0;
    double upper = 0.0;
    RowSumBracket row_sums;
    std::size_t iterations = 0;
    bool converged = false;
};

struct PowerIterationOptions {
    double relative_tolerance = 1e-12;
    std::size_t max_iterations = 100000;
};

/// Perron root of a nonnegative matrix by power iteration from the all-ones
/// vector. Iterates on F + I (same eigenvectors, aperiodic) and stops once the
/// Collatz–Wielandt bracket is narrower than the tolerance.
inline SpectralEstimate spectral_radius_estimate(const RationalMatrix& f, double tol,
                                                 PowerIterationOptions opts = {}) {
    if (!is_nonnegative(f)) throw NotNonnegative("power iteration requires an entrywise nonnegative matrix");
    const std::size_t n = f.order();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = to_double(f(i, j)) + (i == j ? 1.0 : 0.0);

    SpectralEstimate out;
    out.row_sums = row_sum_bracket(f);
    std::vector<double> x(n, 1.0);
    std::vector<double> y(n);
    const double target = std::min(tol, opts.relative_tolerance * std::max(1.0, to_double(out.row_sums.max)));
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        double lo = INFINITY;
        double hi = 0.0;
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
            y[i] = s;
            const double ratio = s / x[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            norm = std::max(norm, s);
        }
        out.lower = std::max(0.0, lo - 1.0);
        out.upper = hi - 1.0;
        out.estimate = 0.5 * (out.lower + out.upper);
        out.iterations = it;
        if (out.upper - out.lower <= target) {
            out.converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
    }
    return out;
}

/// Fredholm expansion log det(I − E) = −Σ_k Tr(E^k)/k, truncated once the
/// geometric tail n·r^(K+1)/((K+1)(1−r)) drops below tol, where r is the
/// smaller of the max absolute row and column sums.
inline double fredholm_log_det(const RationalMatrix& e, double tol, std::size_t max_terms = 10000) {
    if (!(tol > 0.0)) throw Error("tolerance must be positive");
    const std::size_t n = e.order();
    const double r = std::min(to_double(max_row_abs_sum(e)), to_double(max_row_abs_sum(e.transpose())));
    if (r >= 1.0) throw NonConvergent("row/column sum bound " + std::to_string(r) + " does not certify convergence");
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = to_double(e(i, j));

    std::vector<double> power = a;
    std::vector<double> next(n * n);
    double sum = 0.0;
    double rk = r;
    for (std::size_t k = 1; k <= max_terms; ++k) {
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += power[i * n + i];
        sum -= trace / static_cast<double>(k);
        rk *= r;
        const double tail = static_cast<double>(n) * rk / (static_cast<double>(k + 1) * (1.0 - r));
        if (tail < tol) return sum;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t m = 0; m < n; ++m) s += power[i * n + m] * a[m * n + j];
                next[i * n + j] = s;
            }
        power.swap(next);
    }
    throw NonConvergent("tail bound above tolerance after " + std::to_string(max_terms) + " terms");
}

enum class CertificateStatus { Certified, Uncertified };

struct CertificateResult {
    CertificateStatus status = CertificateStatus::Uncertified;
    /// Meaningful when certified: whether ρ(F) ≤ 1.
    bool rho_le_one = false;
    std::string method;
    /// Violating principal minor of I − F, when one was found.
    std::optional<std::vector<std::size_t>> violating_minor;
    std::optional<Rational> violating_value;
    RowSumBracket row_sums;
    std::optional<SpectralEstimate> estimate;
};

inline constexpr std::size_t default_minor_limit = 12;

/// Decides ρ(F) ≤ 1 for nonnegative F. I − F is a Z-matrix, so ρ(F) ≤ 1 iff
/// every principal minor of I − F is nonnegative. Above `minor_limit` only the
/// sufficient row-sum test can certify.
inline CertificateResult certify_rho_le_one(const RationalMatrix& f, std::size_t minor_limit = default_minor_limit) {
    if (!is_nonnegative(f)) throw NotNonnegative("certificate requires an entrywise nonnegative matrix");
    const std::size_t n = f.order();
    CertificateResult out;
    out.row_sums = row_sum_bracket(f);
    if (n > minor_limit) {
        if (out.row_sums.max <= 1) {
            out.status = CertificateStatus::Certified;
            out.rho_le_one = true;
            out.method = "row-sum";
            return out;
        }
        if (out.row_sums.min > 1) {
            out.status = CertificateStatus::Certified;
            out.rho_le_one = false;
            out.method = "row-sum";
            return out;
        }
        out.method = "order too large for the minor test; row sums inconclusive";
        out.estimate = spectral_radius_estimate(f, 1e-12);
        return out;
    }
    const RationalMatrix a = RationalMatrix::identity(n) - f;
    out.status = CertificateStatus::Certified;
    out.method = "principal-minors";
    out.rho_le_one = true;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1U) idx.push_back(i);
        const Rational d = det_rational(a.principal_submatrix(idx));
        if (d.sign() < 0) {
            out.rho_le_one = false;
            out.violating_minor = idx;
            out.violating_value = d;
            break;
        }
    }
    return out;
}

}  // namespace detbounds
