#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "detbounds/bounds.hpp"
#include "detbounds/constructors.hpp"
#include "detbounds/search.hpp"
#include "detbounds/verify.hpp"

namespace detbounds {

using json = nlohmann::json;

/// Integers that fit in int64 are numbers, anything else a "p/q" string.
inline json to_json(const Rational& r) {
    if (denom(r) == 1) {
        const BigInt& v = numer(r);
        if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
            return v.convert_to<std::int64_t>();
    }
    return to_string(r);
}

inline json to_json(const EpsPolynomial& p) {
    json a = json::array();
    for (const auto& c : p.coefficients()) a.push_back(to_json(c));
    return a;
}

inline json to_json(const RationalMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.order(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.order(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const BoundEntry& e) {
    json j;
    j["exact"] = e.value.to_string();
    j["float"] = e.value.to_double();
    j["kind"] = to_string(e.kind);
    j["valid"] = e.valid;
    j["hypothesis"] = e.hypothesis;
    j["applies_to"] = to_string(e.applies_to);
    if (!e.valid) j["violation"] = e.violation;
    return j;
}

inline json to_json(const BoundTable& t) {
    json j;
    j["n"] = t.n;
    j["eps"] = to_string(t.eps);
    j["delta"] = to_string(t.delta);
    j["entries"] = json::object();
    for (const auto& [name, e] : t.entries) j["entries"][name] = to_json(e);
    return j;
}

/// Rational endpoint, or "root[i]" naming breakpoint i when it is irrational.
inline std::string endpoint_label(const Envelope& env, std::size_t piece, bool right) {
    if (!right && piece == 0) return to_string(env.lo);
    if (right && piece + 1 == env.pieces.size()) return to_string(env.hi);
    const std::size_t b = right ? piece : piece - 1;
    const RootBracket& r = env.breakpoints[b];
    return r.is_exact() ? to_string(*r.exact_root) : "root[" + std::to_string(b) + "]";
}

inline json to_json(const RootBracket& r) {
    json j;
    j["cubic_or_poly"] = to_json(r.polynomial);
    j["bracket"] = {to_string(r.lo), to_string(r.hi)};
    j["exact"] = r.is_exact() ? json(to_string(*r.exact_root)) : json(nullptr);
    j["approx"] = r.approx();
    return j;
}

inline json to_json(const Envelope& env) {
    json j;
    j["domain"] = {to_string(env.lo), to_string(env.hi)};
    j["pieces"] = json::array();
    for (std::size_t i = 0; i < env.pieces.size(); ++i) {
        const auto& p = env.pieces[i];
        json pj;
        pj["interval"] = {endpoint_label(env, i, false), endpoint_label(env, i, true)};
        pj["poly"] = to_json(p.poly);
        pj["witness"] = p.witness.compact();
        if (!p.all_witnesses.empty()) {
            pj["all_witnesses"] = json::array();
            for (const auto& w : p.all_witnesses) pj["all_witnesses"].push_back(w.compact());
        }
        j["pieces"].push_back(pj);
    }
    j["breakpoints"] = json::array();
    for (const auto& b : env.breakpoints) j["breakpoints"].push_back(to_json(b));
    return j;
}

inline json to_json(const SearchResult& r) {
    json j = to_json(r.envelope);
    j["n"] = r.n;
    j["patterns"] = r.patterns;
    j["distinct_polynomials"] = r.distinct_polynomials;
    j["leading_coefficient"] = to_json(r.envelope.pieces.back().poly.leading());
    j["warnings"] = r.warnings;
    return j;
}

inline json to_json(const VerificationReport& r) {
    json j;
    j["claim"] = r.claim;
    j["description"] = r.description;
    j["trials"] = r.trials;
    j["status"] = to_string(r.status);
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    j["failures"] = json::array();
    for (const auto& f : r.failures) j["failures"].push_back({{"digest", f.digest}, {"observed", f.observed}, {"bound", f.bound}});
    j["violated_hypotheses"] = r.violated_hypotheses;
    j["notes"] = r.notes;
    return j;
}

}  // namespace detbounds
