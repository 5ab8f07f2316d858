#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "detbounds/json_io.hpp"

namespace detbounds::cli {

enum ExitCode : int {
    ok = 0,
    internal_error = 1,
    hypothesis = 2,
    usage = 64,
};

struct Config {
    std::string subcommand;
    std::string emit = "text";
    std::string out;
    unsigned threads = 1;
    std::uint64_t seed = default_seed;
    bool random_seed = false;

    std::size_t n = 0;
    std::string eps = "0";
    std::string delta = "0";
    std::size_t grid = 0;

    std::string kind;
    bool inflate = false;

    std::string domain_hi = "2";
    bool all_witnesses = false;
    long deadline = 0;

    std::string claim;
    std::uint64_t trials = 0;
    bool zero_diag = false;
    std::string matrix;
    std::string direction = "converse";
    std::string phi = "2";

    double tol = 1e-12;
    std::size_t max_terms = 10000;
};

struct Outcome {
    int code = ok;
    json doc;
    std::string text;
};

namespace detail {

inline std::string fmt_double(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

inline RationalMatrix load_matrix(const std::string& path) {
    if (path == "-") return read_matrix(std::cin);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file '" + path + "'");
    return read_matrix(in);
}

inline std::string report_text(const VerificationReport& r) {
    std::ostringstream s;
    s << "claim: " << r.claim << "\n"
      << "description: " << r.description << "\n"
      << "status: " << to_string(r.status) << "\n"
      << "trials: " << r.trials << "\n"
      << "seed: " << (r.seed ? std::to_string(*r.seed) : "-") << "\n"
      << "failures: " << r.failures.size() << "\n";
    for (const auto& f : r.failures) s << "  " << f.digest << ": observed " << f.observed << ", bound " << f.bound << "\n";
    for (const auto& h : r.violated_hypotheses) s << "violated hypothesis: " << h << "\n";
    for (const auto& n : r.notes) s << "note: " << n << "\n";
    return s.str();
}

inline int report_code(const VerificationReport& r) {
    if (r.status == ReportStatus::Inapplicable || !r.violated_hypotheses.empty()) return hypothesis;
    return r.status == ReportStatus::Pass ? ok : internal_error;
}

inline Outcome bounds(const Config& c) {
    const Rational eps = parse_rational(c.eps);
    const Rational delta = parse_rational(c.delta);
    const BoundTable t = bound_table(c.n, eps, delta);
    Outcome o;
    o.doc = to_json(t);
    std::ostringstream s;
    s << "n = " << t.n << ", eps = " << to_string(t.eps) << ", delta = " << to_string(t.delta) << "\n";
    s << std::left << std::setw(24) << "name" << std::setw(7) << "kind" << std::setw(7) << "valid" << std::setw(28)
      << "exact" << std::setw(16) << "float"
      << "hypothesis; matrix class\n";
    for (const auto& [name, e] : t.entries) {
        s << std::setw(24) << name << std::setw(7) << to_string(e.kind) << std::setw(7) << (e.valid ? "yes" : "no")
          << std::setw(28) << e.value.to_string() << std::setw(16) << fmt_double(e.value.to_double()) << e.hypothesis
          << "; " << to_string(e.applies_to);
        if (!e.valid) s << "  [" << e.violation << "]";
        s << "\n";
    }
    if (c.grid > 0) {
        json grid = json::array();
        s << "grid:\n";
        for (std::size_t k = 1; k <= c.grid; ++k) {
            const Rational x = eps * Rational(static_cast<long>(k)) / Rational(static_cast<long>(c.grid));
            const BoundTable g = bound_table(c.n, x, delta);
            json row;
            row["eps"] = to_string(x);
            row["values"] = json::object();
            s << "  eps=" << to_string(x);
            for (const auto& [name, e] : g.entries) {
                row["values"][name] = e.valid ? json(e.value.to_double()) : json(nullptr);
                s << " " << name << "=" << (e.valid ? fmt_double(e.value.to_double()) : "invalid");
            }
            s << "\n";
            grid.push_back(row);
        }
        o.doc["grid"] = grid;
    }
    o.text = s.str();
    o.code = t.all_valid() ? ok : hypothesis;
    return o;
}

inline Outcome construct(const Config& c) {
    Outcome o;
    std::ostringstream s;
    o.doc["kind"] = c.kind;
    o.doc["n"] = c.n;
    const Rational eps = parse_rational(c.eps);
    const Rational delta = parse_rational(c.delta);
    if (c.kind == "toeplitz") {
        const RationalMatrix f = toeplitz_F(c.n, delta, eps);
        const Rational d = det_rational(RationalMatrix::identity(c.n) - f);
        o.doc["eps"] = to_string(eps);
        o.doc["delta"] = to_string(delta);
        o.doc["matrix"] = to_json(f);
        o.doc["det_I_minus_F"] = to_string(d);
        s << format_matrix(f) << "det(I-F) = " << to_string(d) << "\n";
    } else if (c.kind == "skew-tri") {
        const RationalMatrix m = skew_tri(c.n, eps, c.inflate);
        const EpsPolynomial p = skew_tri_det(c.n, c.inflate);
        o.doc["eps"] = to_string(eps);
        o.doc["inflate"] = c.inflate;
        o.doc["matrix"] = to_json(m);
        o.doc["det_poly"] = to_json(p);
        o.doc["det"] = to_string(det_rational(m));
        s << format_matrix(m) << "det poly = " << p.to_string() << "\ndet = " << to_string(det_rational(m)) << "\n";
    } else if (c.kind == "skew-hadamard") {
        const SkewHadamard h = skew_hadamard(c.n);
        o.doc["derivation"] = h.derivation();
        o.doc["matrix"] = to_json(h.rational());
        o.doc["rows"] = h.compact_rows();
        s << format_matrix(h.rational());
        for (const auto& r : h.compact_rows()) s << r << "\n";
        s << "derivation: " << h.derivation() << "\n";
    } else if (c.kind == "perturbed-hadamard") {
        const SkewHadamard h = skew_hadamard(c.n);
        const RationalMatrix a = perturb_identity(h, eps);
        const EpsPolynomial p = det_symbolic(perturb_identity_symbolic(h));
        o.doc["eps"] = to_string(eps);
        o.doc["derivation"] = h.derivation();
        o.doc["matrix"] = to_json(a);
        o.doc["det_poly"] = to_json(p);
        o.doc["det"] = to_string(det_rational(a));
        s << format_matrix(a) << "det poly = " << p.to_string() << "\ndet = " << to_string(det_rational(a)) << "\n";
    } else {
        throw ParseError("unknown --kind '" + c.kind + "'");
    }
    o.text = s.str();
    return o;
}

inline Outcome search(const Config& c, std::ostream& err) {
    if (c.n == 7) err << "warning: n = 7 scans 7*2^30 patterns; expect a very long run\n";
    const Rational hi = parse_rational(c.domain_hi);
    SearchOptions opts;
    opts.threads = c.threads;
    opts.all_witnesses = c.all_witnesses;
    if (c.deadline > 0) opts.deadline = std::chrono::seconds(c.deadline);
    const SearchResult r = search_maxdet(c.n, hi, opts);
    Outcome o;
    o.doc = to_json(r);
    std::ostringstream s;
    s << "n = " << r.n << ", patterns = " << r.patterns << ", distinct polynomials = " << r.distinct_polynomials << "\n";
    const Envelope& env = r.envelope;
    for (std::size_t i = 0; i < env.pieces.size(); ++i) {
        const auto& p = env.pieces[i];
        s << "(" << endpoint_label(env, i, false) << ", " << endpoint_label(env, i, true) << "]  " << p.poly.to_string()
          << "  " << p.poly.pretty() << "  witness " << p.witness.compact() << "\n";
        for (const auto& w : p.all_witnesses) s << "    " << w.compact() << "\n";
    }
    for (std::size_t b = 0; b < env.breakpoints.size(); ++b) {
        const auto& r2 = env.breakpoints[b];
        s << "root[" << b << "]: " << r2.polynomial.to_string() << " in [" << to_string(r2.lo) << ", " << to_string(r2.hi)
          << "]";
        if (r2.is_exact()) s << " exact " << to_string(*r2.exact_root);
        s << " ~ " << fmt_double(r2.approx()) << "\n";
    }
    s << "leading coefficient of last piece: " << to_string(env.pieces.back().poly.leading()) << "\n";
    for (const auto& w : r.warnings) s << "warning: " << w << "\n";
    o.text = s.str();
    return o;
}

inline Outcome verify(const Config& c) {
    const Rational eps = parse_rational(c.eps);
    const Rational delta = parse_rational(c.delta);
    VerificationReport r;
    if (c.claim == "sandwich") {
        r = sandwich_test(c.n, eps, delta, c.zero_diag, c.trials ? c.trials : 10000, c.seed);
    } else if (c.claim == "theorem1") {
        const RationalMatrix f = c.matrix.empty() ? toeplitz_F(c.n, delta, eps) : detail::load_matrix(c.matrix);
        r = majorant_test(f, c.trials ? c.trials : 1000, c.seed);
    } else if (c.claim == "remark1") {
        r = remark1_counterexample(c.n, parse_rational(c.phi));
    } else if (c.claim == "sharpness") {
        r = sharpness_check(c.n, eps, delta);
    } else if (c.claim == "theorem4") {
        const Direction d = c.direction == "forward" ? Direction::Forward : Direction::Converse;
        if (c.direction != "forward" && c.direction != "converse") throw ParseError("--direction must be forward or converse");
        if (c.matrix.empty() && d == Direction::Converse) {
            r = skew_hadamard_converse(skew_hadamard(c.n));
        } else {
            const RationalMatrix m = c.matrix.empty() ? skew_hadamard(c.n).rational() : detail::load_matrix(c.matrix);
            r = skew_hadamard_check(m, d);
        }
    } else {
        throw ParseError("unknown --claim '" + c.claim + "'");
    }
    Outcome o;
    o.doc = to_json(r);
    o.text = report_text(r);
    o.code = report_code(r);
    return o;
}

inline Outcome fredholm(const Config& c) {
    const RationalMatrix e = detail::load_matrix(c.matrix);
    const double log_det = fredholm_log_det(e, c.tol, c.max_terms);
    const Rational exact = det_rational(RationalMatrix::identity(e.order()) - e);
    Outcome o;
    o.doc["n"] = e.order();
    o.doc["tol"] = c.tol;
    o.doc["log_det"] = log_det;
    o.doc["det_exact"] = to_string(exact);
    o.doc["det_float"] = to_double(exact);
    std::ostringstream s;
    s << "log det(I-E) = " << std::setprecision(17) << log_det << "\n"
      << "exp(log det) = " << std::exp(log_det) << "\n"
      << "det(I-E) exact = " << to_string(exact) << "\n";
    o.text = s.str();
    return o;
}

}  // namespace detail

/// Parses and runs one command; output goes to `out` (or --out), diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Config c;
    CLI::App app{"Exact determinant bounds for perturbed identity matrices", "detbounds"};
    app.require_subcommand(1);
    app.add_option("--emit", c.emit, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", c.out, "Write the report to this path");
    app.add_option("--threads", c.threads, "Search worker threads")->check(CLI::Range(1U, 1024U));
    app.add_option("--seed", c.seed, "Seed for all sampling");
    app.add_flag("--random-seed", c.random_seed, "Draw the seed from the system entropy source");

    auto* b = app.add_subcommand("bounds", "Catalogue of lower and upper bounds at (n, eps, delta)");
    b->add_option("--n", c.n, "Order")->required()->check(CLI::PositiveNumber);
    b->add_option("--eps", c.eps, "Off-diagonal bound, p/q or integer")->required();
    b->add_option("--delta", c.delta, "Diagonal bound (default 0)");
    b->add_option("--grid", c.grid, "Also sample every bound at k*eps/K, k = 1..K");

    auto* k = app.add_subcommand("construct", "Build a named matrix");
    k->add_option("--kind", c.kind, "Construction")
        ->required()
        ->check(CLI::IsMember({"toeplitz", "skew-tri", "skew-hadamard", "perturbed-hadamard"}));
    k->add_option("--n", c.n, "Order")->required()->check(CLI::PositiveNumber);
    k->add_option("--eps", c.eps, "eps, p/q or integer");
    k->add_option("--delta", c.delta, "delta, p/q or integer");
    k->add_flag("--inflate", c.inflate, "Use (1+eps)I on the diagonal (skew-tri)");

    auto* s = app.add_subcommand("search", "Exhaustive maximal-determinant envelope");
    s->add_option("--n", c.n, "Order (at most 7)")->required()->check(CLI::PositiveNumber);
    s->add_option("--domain-hi", c.domain_hi, "Right end of the eps domain (0, hi]");
    s->add_flag("--all-witnesses", c.all_witnesses, "List every canonical witness per piece (n <= 4)");
    s->add_option("--deadline", c.deadline, "Give up after this many seconds");

    auto* v = app.add_subcommand("verify", "Check a claim on constructed or sampled instances");
    v->add_option("--claim", c.claim, "Claim to check")
        ->required()
        ->check(CLI::IsMember({"sandwich", "theorem1", "theorem4", "remark1", "sharpness"}));
    v->add_option("--n", c.n, "Order")->check(CLI::PositiveNumber);
    v->add_option("--eps", c.eps, "eps, p/q or integer");
    v->add_option("--delta", c.delta, "delta, p/q or integer");
    v->add_option("--trials", c.trials, "Number of sampled trials");
    v->add_flag("--zero-diag", c.zero_diag, "Sample E with zero diagonal (sandwich)");
    v->add_option("--matrix", c.matrix, "Matrix file in the text format, '-' for stdin");
    v->add_option("--direction", c.direction, "forward or converse (theorem4)")
        ->check(CLI::IsMember({"forward", "converse"}));
    v->add_option("--phi", c.phi, "phi for remark1 (default 2)");

    auto* f = app.add_subcommand("fredholm", "log det(I - E) from the trace series");
    f->add_option("--matrix", c.matrix, "Matrix file E in the text format, '-' for stdin")->required();
    f->add_option("--tol", c.tol, "Truncation tolerance")->check(CLI::PositiveNumber);
    f->add_option("--max-terms", c.max_terms, "Series term limit");

    for (auto* sub : {b, k, s, v, f}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return usage;
    }
    for (auto* sub : {b, k, s, v, f})
        if (sub->parsed()) c.subcommand = sub->get_name();
    if ((c.subcommand == "verify" && c.claim != "theorem4" && c.n == 0) ||
        (c.subcommand == "verify" && c.claim == "theorem4" && c.n == 0 && c.matrix.empty())) {
        err << "error: --n is required for this claim\n";
        return usage;
    }
    if (c.random_seed) {
        std::random_device rd;
        c.seed = (static_cast<std::uint64_t>(rd()) << 32U) | rd();
    }

    Outcome o;
    try {
        if (c.subcommand == "bounds") o = detail::bounds(c);
        if (c.subcommand == "construct") o = detail::construct(c);
        if (c.subcommand == "search") o = detail::search(c, err);
        if (c.subcommand == "verify") o = detail::verify(c);
        if (c.subcommand == "fredholm") o = detail::fredholm(c);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const Timeout& e) {
        err << "error: " << e.what() << "; partial results are unusable\n";
        return internal_error;
    } catch (const HypothesisViolated& e) {
        o.code = hypothesis;
        o.doc = {{"error", "hypothesis violated"}, {"detail", e.what()}};
        o.text = std::string("hypothesis violated: ") + e.what() + "\n";
    } catch (const Error& e) {
        // Remaining library errors are precondition failures on the input.
        o.code = hypothesis;
        o.doc = {{"error", "precondition"}, {"detail", e.what()}};
        o.text = std::string("precondition not met: ") + e.what() + "\n";
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return internal_error;
    }

    const std::string body = c.emit == "json" ? o.doc.dump(2) + "\n" : o.text;
    if (c.out.empty()) {
        out << body;
    } else {
        std::ofstream file(c.out);
        if (!file) {
            err << "error: cannot write '" << c.out << "'\n";
            return internal_error;
        }
        file << body;
    }
    return o.code;
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<const char*> argv{"detbounds"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace detbounds::cli
