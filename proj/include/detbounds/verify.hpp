#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "detbounds/bounds.hpp"
#include "detbounds/constructors.hpp"
#include "detbounds/spectral.hpp"

namespace detbounds {

/// SplitMix64 (Steele, Lea, Flood 2014). Trial t of a run with seed s draws
/// from the stream seeded by mix(s + (t + 1)·γ), so results do not depend on
/// how trials are partitioned.
class SplitMix64 {
public:
    static constexpr std::uint64_t gamma = 0x9e3779b97f4a7c15ULL;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31U);
    }

    static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial) {
        return SplitMix64(mix(seed + (trial + 1) * gamma));
    }

    std::uint64_t next() {
        state_ += gamma;
        return mix(state_);
    }

    /// Uniform integer in [lo, hi] by rejection.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return lo + static_cast<std::int64_t>(v % span);
    }

private:
    std::uint64_t state_;
};

inline constexpr int sample_denominator_bits = 16;
inline constexpr std::uint64_t default_seed = 0x5eed0f0dULL;

/// Uniform on the grid 2^-16·ℤ ∩ [lo, hi].
inline Rational sample_grid(SplitMix64& rng, const Rational& lo, const Rational& hi) {
    const Rational scale = pow2(sample_denominator_bits);
    const BigInt klo = -floor(-lo * scale);
    const BigInt khi = floor(hi * scale);
    if (khi < klo) throw Error("empty sampling interval");
    return Rational(rng.uniform(klo.convert_to<std::int64_t>(), khi.convert_to<std::int64_t>())) / scale;
}

enum class ReportStatus { Pass, Fail, Inapplicable };

inline const char* to_string(ReportStatus s) {
    switch (s) {
        case ReportStatus::Pass: return "pass";
        case ReportStatus::Fail: return "fail";
        case ReportStatus::Inapplicable: return "inapplicable";
    }
    return "";
}

struct Failure {
    std::string digest;
    std::string observed;
    std::string bound;
};

struct VerificationReport {
    std::string claim;
    std::string description;
    std::uint64_t trials = 0;
    std::vector<Failure> failures;
    ReportStatus status = ReportStatus::Inapplicable;
    std::optional<std::uint64_t> seed;
    /// Preconditions that did not hold; the corresponding legs were skipped.
    std::vector<std::string> violated_hypotheses;
    std::vector<std::string> notes;

    void finalize() { status = trials > 0 && failures.empty() ? ReportStatus::Pass : ReportStatus::Fail; }
    void inapplicable(std::string why) {
        status = ReportStatus::Inapplicable;
        notes.push_back(std::move(why));
    }
    [[nodiscard]] bool passed() const { return status == ReportStatus::Pass; }
};

/// FNV-1a of the matrix text, hex.
inline std::string matrix_digest(const RationalMatrix& m) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : format_matrix(m)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

inline std::string trial_digest(std::uint64_t t, const RationalMatrix& e) {
    return "trial " + std::to_string(t) + " E#" + matrix_digest(e);
}

inline bool sample_in_class(const RationalMatrix& e, MatrixClass c, const Rational& eps, const Rational& delta) {
    for (std::size_t i = 0; i < e.order(); ++i) {
        const Rational& d = e(i, i);
        switch (c) {
            case MatrixClass::ZeroDiagonal:
                if (d != 0) return false;
                break;
            case MatrixClass::FullBox:
                if (abs(d) > eps) return false;
                break;
            case MatrixClass::OneSidedDiagonal:
                if (d > delta) return false;
                break;
        }
    }
    return true;
}

}  // namespace detail

/// Draws E with |e_ij| ≤ ε off the diagonal and e_ii = 0 (zero_diag) or
/// e_ii ∈ [−1, δ], then checks every valid bound whose matrix class contains
/// that E against det(I − E).
inline VerificationReport sandwich_test(std::size_t n, const Rational& eps, const Rational& delta, bool zero_diag,
                                        std::uint64_t trials, std::uint64_t seed) {
    VerificationReport rep;
    rep.claim = "sandwich";
    rep.description = "valid lower bounds <= det(I-E) <= valid upper bounds";
    rep.seed = seed;
    if (trials == 0) throw Error("trials must be at least 1");

    const BoundTable table = bound_table(n, eps, delta);
    const auto ln = static_cast<long>(n);
    const bool lower_leg = delta + (ln - 1) * eps <= 1;
    if (!lower_leg) rep.violated_hypotheses.emplace_back("delta + (n-1)eps <= 1 (lower-bound leg skipped)");
    for (const auto& [name, entry] : table.entries)
        if (!entry.valid) rep.notes.push_back(name + " " + entry.violation);

    const RationalMatrix id = RationalMatrix::identity(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::for_trial(seed, t);
        RationalMatrix e(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    e(i, j) = sample_grid(rng, -eps, eps);
                } else if (!zero_diag) {
                    e(i, j) = sample_grid(rng, Rational(-1), delta);
                }
            }
        const Rational det = det_rational(id - e);
        for (const auto& [name, entry] : table.entries) {
            if (!entry.valid) continue;
            if (entry.kind == BoundKind::Lower && !lower_leg) continue;
            if (!detail::sample_in_class(e, entry.applies_to, eps, delta)) continue;
            const int c = compare(det, entry.value);
            const bool ok = entry.kind == BoundKind::Lower ? c >= 0 : c <= 0;
            if (!ok) rep.failures.push_back({detail::trial_digest(t, e), to_string(det), name + " = " + entry.value.to_string()});
        }
        ++rep.trials;
    }
    rep.finalize();
    return rep;
}

/// det(I − E) ≥ det(I − F) for sampled |e_ij| ≤ f_ij. Inapplicable unless
/// ρ(F) ≤ 1 is certified.
inline VerificationReport majorant_test(const RationalMatrix& f, std::uint64_t trials, std::uint64_t seed) {
    VerificationReport rep;
    rep.claim = "theorem1";
    rep.description = "det(I-E) >= det(I-F) whenever |e_ij| <= f_ij and rho(F) <= 1";
    rep.seed = seed;
    if (!is_nonnegative(f)) {
        rep.inapplicable("F has a negative entry");
        return rep;
    }
    const CertificateResult cert = certify_rho_le_one(f);
    if (cert.status != CertificateStatus::Certified || !cert.rho_le_one) {
        rep.violated_hypotheses.emplace_back("rho(F) <= 1 (" + cert.method + ")");
        rep.inapplicable(cert.status == CertificateStatus::Certified ? "certificate shows rho(F) > 1"
                                                                     : "rho(F) <= 1 could not be certified");
        return rep;
    }
    const std::size_t n = f.order();
    const RationalMatrix id = RationalMatrix::identity(n);
    const Rational bound = det_rational(id - f);
    for (std::uint64_t t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::for_trial(seed, t);
        RationalMatrix e(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) e(i, j) = sample_grid(rng, -f(i, j), f(i, j));
        const Rational det = det_rational(id - e);
        if (det < bound) rep.failures.push_back({detail::trial_digest(t, e), to_string(det), "det(I-F) = " + to_string(bound)});
        ++rep.trials;
    }
    rep.finalize();
    return rep;
}

/// E = I, F = φI: |e_ij| ≤ f_ij holds but det(I − E) = 0 < (1 − φ)^n for even
/// n and φ > 1. Pass means the violation was reproduced.
inline VerificationReport remark1_counterexample(std::size_t n, const Rational& phi = 2) {
    VerificationReport rep;
    rep.claim = "remark1";
    rep.description = "E = I, F = phi*I breaks det(I-E) >= det(I-F) once rho(F) > 1";
    const RationalMatrix id = RationalMatrix::identity(n);
    const RationalMatrix f = phi * id;
    const Rational lhs = det_rational(id - id);
    const Rational rhs = det_rational(id - f);
    const CertificateResult cert = certify_rho_le_one(f);
    rep.notes.push_back("det(I-E) = " + to_string(lhs) + ", det(I-F) = " + to_string(rhs));
    rep.notes.push_back(std::string("rho(F) <= 1 certificate: ") + (cert.rho_le_one ? "true" : "false"));
    rep.trials = 1;
    if (!(lhs < rhs)) rep.failures.push_back({"phi = " + to_string(phi), to_string(lhs), "not below det(I-F) = " + to_string(rhs)});
    rep.finalize();
    return rep;
}

/// det(I − toeplitz_F(n, δ, ε)) equals the closed form exactly.
inline VerificationReport sharpness_check(std::size_t n, const Rational& eps, const Rational& delta) {
    if (delta + (static_cast<long>(n) - 1) * eps > 1) throw HypothesisViolated("requires delta + (n-1)eps <= 1");
    VerificationReport rep;
    rep.claim = "sharpness";
    rep.description = "det(I - ((delta-eps)I + eps*J)) = (1-delta-(n-1)eps)(1-delta+eps)^(n-1)";
    const RationalMatrix a = RationalMatrix::identity(n) - toeplitz_F(n, delta, eps);
    const Rational det = det_rational(a);
    const Rational bound = toeplitz_lower_bound(n, eps, delta);
    rep.trials = 1;
    rep.notes.push_back("det = " + to_string(det));
    if (det != bound) rep.failures.push_back({matrix_digest(a), to_string(det), to_string(bound)});
    rep.finalize();
    return rep;
}

enum class Direction { Forward, Converse };

namespace detail {

inline void check_step(VerificationReport& rep, const std::string& step, bool ok, std::string observed,
                       std::string expected) {
    ++rep.trials;
    if (!ok) rep.failures.push_back({step, std::move(observed), std::move(expected)});
}

inline void require_polynomial_identity(std::size_t n) {
    if (n > 1 && n % 2 == 1) throw NotPolynomial("(1 + (n-1)e^2)^(n/2) is not a polynomial for odd n > 1");
}

}  // namespace detail

/// Converse: for skew-Hadamard H, det((1−ε)I + εH) = (1 + (n−1)ε²)^(n/2) and
/// AᵀA = (1 + (n−1)ε²)I, both symbolically.
inline VerificationReport skew_hadamard_converse(const SkewHadamard& h) {
    const std::size_t n = h.order();
    detail::require_polynomial_identity(n);
    VerificationReport rep;
    rep.claim = "theorem4";
    rep.description = "converse: skew-Hadamard H gives det((1-e)I + eH) = (1+(n-1)e^2)^(n/2)";
    const PolyMatrix a = perturb_identity_symbolic(h);
    const EpsPolynomial det = det_symbolic(a);
    const EpsPolynomial expected = sharp_upper_polynomial(n);
    detail::check_step(rep, "det polynomial", det == expected, det.to_string(), expected.to_string());

    const PolyMatrix gram = a.transpose() * a;
    const EpsPolynomial diag{1, 0, Rational(static_cast<long>(n) - 1)};
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = 0; j < n && ok; ++j) ok = gram(i, j) == (i == j ? diag : EpsPolynomial());
    detail::check_step(rep, "A^T A", ok, ok ? "(1+(n-1)e^2)I" : "differs", "(1+(n-1)e^2)I");
    rep.notes.push_back("H from " + h.derivation());
    rep.finalize();
    return rep;
}

/// Forward: runs each extraction step on a matrix with entries in [−1, 1]
/// and reports every one that fails. Steps: the identity itself, det(M) at
/// ε = 1, unit diagonal from the ε coefficient, h_ij + h_ji = 0 from the ε²
/// coefficient, then the skew-Hadamard definition.
inline VerificationReport skew_hadamard_forward(const RationalMatrix& m) {
    const std::size_t n = m.order();
    detail::require_polynomial_identity(n);
    VerificationReport rep;
    rep.claim = "theorem4";
    rep.description = "forward: det((1-e)I + eM) = (1+(n-1)e^2)^(n/2) forces M skew-Hadamard";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (abs(m(i, j)) > 1) {
                rep.inapplicable("entries must lie in [-1, 1]");
                return rep;
            }
    const EpsPolynomial p = det_symbolic(perturb_identity_symbolic(m));
    const EpsPolynomial expected = sharp_upper_polynomial(n);
    const auto ln = static_cast<long>(n);
    detail::check_step(rep, "identity", p == expected, p.to_string(), expected.to_string());

    const Rational det = det_rational(m);
    const Rational hadamard = pow(Rational(ln), static_cast<unsigned>(n / 2));
    detail::check_step(rep, "det(M) at e=1", det == hadamard, to_string(det), to_string(hadamard));

    bool unit = true;
    for (std::size_t i = 0; i < n; ++i) unit = unit && m(i, i) == 1;
    detail::check_step(rep, "e^1 coefficient", p.coeff(1) == 0 && unit, to_string(p.coeff(1)), "0 with diag(M) = I");

    const Rational e2 = Rational(ln * (ln - 1) / 2);
    detail::check_step(rep, "e^2 coefficient", p.coeff(2) == e2, to_string(p.coeff(2)), to_string(e2));

    const bool skew = verify_skew_hadamard(m);
    detail::check_step(rep, "skew-Hadamard", skew, skew ? "true" : "false", "true");
    rep.finalize();
    return rep;
}

inline VerificationReport skew_hadamard_check(const RationalMatrix& m, Direction d) {
    if (d == Direction::Forward) return skew_hadamard_forward(m);
    if (!verify_skew_hadamard(m)) {
        VerificationReport rep;
        rep.claim = "theorem4";
        rep.description = "converse: skew-Hadamard H gives det((1-e)I + eH) = (1+(n-1)e^2)^(n/2)";
        rep.inapplicable("input is not skew-Hadamard");
        return rep;
    }
    return skew_hadamard_converse(SkewHadamard::verified(m.map([](const Rational& v) { return v.sign(); }), "input"));
}

}  // namespace detbounds
