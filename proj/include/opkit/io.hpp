#pragma once

#include "opkit/atoms.hpp"
#include "opkit/invariants.hpp"
#include "opkit/kato.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace opkit {

using json = nlohmann::json;

// Structural problems with an input document: exit code 2 territory.
struct FileParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Well-formed documents describing something invalid: exit code 3 territory.
struct FileSemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Rat rat_from_json(const json& j, const std::string& where) {
    try {
        if (j.is_string()) return parse_rat(j.get<std::string>());
        if (j.is_number_integer()) return Rat(Int(j.get<std::int64_t>()));
    } catch (const std::invalid_argument& e) {
        throw FileParseError(where + ": " + e.what());
    }
    throw FileParseError(where + ": expected a rational literal string");
}

inline std::uint64_t uint_from_json(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
        throw FileParseError(where + ": expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

inline RatMatrix matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw FileParseError(where + ": 'entries' must be a nonempty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw FileParseError(where + ": matrix rows must be nonempty arrays");
    const std::size_t cols = j[0].size();
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw FileParseError(where + ": matrix rows have inconsistent lengths");
        for (std::size_t c = 0; c < cols; ++c)
            m.at(i, c) = rat_from_json(j[i][c], where + ".entries[" + std::to_string(i) + "][" +
                                                     std::to_string(c) + "]");
    }
    return m;
}

inline json matrix_to_json(const RatMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_to_string(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

// Operator documents: a tree of typed nodes. A bare "matrix" (or the
// "nilpotent_jordan" sugar) at top level is the finite-model fast path.
inline AtomTree parse_operator_node(const json& j, const std::string& where) {
    if (!j.is_object()) throw FileParseError(where + ": operator node must be an object");
    if (!j.contains("type") || !j["type"].is_string())
        throw FileParseError(where + ": missing 'type'");
    const std::string type = j["type"].get<std::string>();
    const auto need = [&](const char* field) -> const json& {
        if (!j.contains(field))
            throw FileParseError(where + " (" + type + "): missing '" + field + "'");
        return j[field];
    };
    if (type == "matrix") {
        RatMatrix m = detail::matrix_from_json(need("entries"), where);
        if (!m.square())
            throw FileSemanticError(where + ": operator matrix must be square (got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                    ")");
        return AtomTree::finite(std::move(m));
    }
    if (type == "nilpotent_jordan") {
        const std::uint64_t size = detail::uint_from_json(need("size"), where + ".size");
        if (size == 0) throw FileSemanticError(where + ": jordan block size must be >= 1");
        return AtomTree::finite(RatMatrix::jordan_block(size));
    }
    if (type == "forward_shift" || type == "backward_shift") {
        const std::uint64_t power = detail::uint_from_json(need("power"), where + ".power");
        if (power == 0) throw FileSemanticError(where + ": shift power must be >= 1");
        return type == "forward_shift" ? AtomTree::forward_shift(power)
                                       : AtomTree::backward_shift(power);
    }
    if (type == "zero_inf") return AtomTree::zero_inf();
    if (type == "identity_inf") return AtomTree::identity_inf();
    if (type == "direct_sum") {
        const json& s = need("summands");
        if (!s.is_array() || s.empty())
            throw FileSemanticError(where + ": direct_sum needs at least one summand");
        std::vector<AtomTree> children;
        for (std::size_t i = 0; i < s.size(); ++i)
            children.push_back(
                parse_operator_node(s[i], where + ".summands[" + std::to_string(i) + "]"));
        return AtomTree::direct_sum(std::move(children));
    }
    if (type == "power") {
        const std::uint64_t e = detail::uint_from_json(need("exponent"), where + ".exponent");
        if (e == 0) throw FileSemanticError(where + ": power exponent must be >= 1");
        return AtomTree::power(parse_operator_node(need("base"), where + ".base"), e);
    }
    throw FileParseError(where + ": unknown node type '" + type + "'");
}

struct OperatorSpec {
    AtomTree tree;        // as written (not normalized)
    bool finite_fast_path; // top-level matrix / nilpotent_jordan node
};

inline OperatorSpec parse_operator_document(const json& doc) {
    if (!doc.is_object()) throw FileParseError("top-level: operator document must be an object");
    const std::string type =
        doc.contains("type") && doc["type"].is_string() ? doc["type"].get<std::string>() : "";
    OperatorSpec spec{parse_operator_node(doc, "top-level"),
                      type == "matrix" || type == "nilpotent_jordan"};
    return spec;
}

inline OperatorSpec parse_operator_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FileParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_operator_document(doc);
}

// --- report serialization -------------------------------------------------

inline json extnat_to_json(const ExtNat& v) {
    return v.is_infinite() ? json("inf") : json(v.finite_value());
}

inline ExtNat extnat_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return ExtNat::infinity();
        throw FileParseError(where + ": expected a count or \"inf\"");
    }
    return ExtNat(detail::uint_from_json(j, where));
}

inline json extint_to_json(const ExtInt& v) {
    if (v.is_plus_infinity()) return json("inf");
    if (v.is_minus_infinity()) return json("-inf");
    return json(v.finite_value());
}

inline ExtInt extint_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return ExtInt::plus_infinity();
        if (s == "-inf") return ExtInt::minus_infinity();
        throw FileParseError(where + ": expected an integer, \"inf\" or \"-inf\"");
    }
    if (!j.is_number_integer()) throw FileParseError(where + ": expected an integer");
    return ExtInt(j.get<std::int64_t>());
}

inline json ecseq_to_json(const EcSeq& s) {
    json arr = json::array();
    for (const ExtNat& v : s.values()) arr.push_back(extnat_to_json(v));
    return arr;
}

inline EcSeq ecseq_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw FileParseError(where + ": expected a nonempty sequence");
    std::vector<ExtNat> vals;
    for (std::size_t i = 0; i < j.size(); ++i)
        vals.push_back(extnat_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return EcSeq(std::move(vals));
}

inline json flags_to_json(const ClassificationFlags& f) {
    return json{{"semi_regular", f.semi_regular},
                {"quasi_fredholm", f.quasi_fredholm},
                {"upper_semi_fredholm", f.upper_semi_fredholm},
                {"lower_semi_fredholm", f.lower_semi_fredholm},
                {"upper_semi_b_fredholm", f.upper_semi_b_fredholm},
                {"lower_semi_b_fredholm", f.lower_semi_b_fredholm},
                {"semi_b_fredholm", f.semi_b_fredholm},
                {"b_fredholm", f.b_fredholm},
                {"fredholm", f.fredholm},
                {"drazin_invertible", f.drazin_invertible},
                {"nilpotent", f.nilpotent},
                {"ranges_closed", f.ranges_closed}};
}

inline ClassificationFlags flags_from_json(const json& j) {
    ClassificationFlags f;
    const auto get = [&](const char* name) -> bool {
        if (!j.contains(name) || !j[name].is_boolean())
            throw FileParseError(std::string("flags.") + name + ": expected a boolean");
        return j[name].get<bool>();
    };
    f.semi_regular = get("semi_regular");
    f.quasi_fredholm = get("quasi_fredholm");
    f.upper_semi_fredholm = get("upper_semi_fredholm");
    f.lower_semi_fredholm = get("lower_semi_fredholm");
    f.upper_semi_b_fredholm = get("upper_semi_b_fredholm");
    f.lower_semi_b_fredholm = get("lower_semi_b_fredholm");
    f.semi_b_fredholm = get("semi_b_fredholm");
    f.b_fredholm = get("b_fredholm");
    f.fredholm = get("fredholm");
    f.drazin_invertible = get("drazin_invertible");
    f.nilpotent = get("nilpotent");
    f.ranges_closed = get("ranges_closed");
    return f;
}

inline json report_to_json(const InvariantReport& r) {
    json j{{"kind", r.kind == ReportKind::finite ? "finite" : "symbolic"},
           {"alpha", ecseq_to_json(r.alpha)},
           {"beta", ecseq_to_json(r.beta)},
           {"dis", extnat_to_json(r.dis)},
           {"v", extnat_to_json(r.v)},
           {"m_T", extnat_to_json(r.m_t)},
           {"a_e", extnat_to_json(r.a_e)},
           {"d_e", extnat_to_json(r.d_e)},
           {"ascent", extnat_to_json(r.ascent)},
           {"descent", extnat_to_json(r.descent)},
           {"jump", r.jump ? extnat_to_json(*r.jump) : json(nullptr)},
           {"index", r.index ? extint_to_json(*r.index) : json(nullptr)},
           {"flags", flags_to_json(r.flags)}};
    json ks = json::array();
    for (const ExtNat& v : r.k) ks.push_back(extnat_to_json(v));
    j["k"] = std::move(ks);
    if (r.kind == ReportKind::finite) j["dim"] = r.dim;
    return j;
}

inline InvariantReport report_from_json(const json& j) {
    InvariantReport r;
    const auto need = [&](const char* field) -> const json& {
        if (!j.contains(field))
            throw FileParseError(std::string("report: missing '") + field + "'");
        return j[field];
    };
    const std::string kind = need("kind").get<std::string>();
    r.kind = kind == "finite" ? ReportKind::finite : ReportKind::symbolic;
    r.alpha = ecseq_from_json(need("alpha"), "alpha");
    r.beta = ecseq_from_json(need("beta"), "beta");
    for (std::size_t i = 0; i < need("k").size(); ++i)
        r.k.push_back(extnat_from_json(j["k"][i], "k[" + std::to_string(i) + "]"));
    r.dis = extnat_from_json(need("dis"), "dis");
    r.v = extnat_from_json(need("v"), "v");
    r.m_t = extnat_from_json(need("m_T"), "m_T");
    r.a_e = extnat_from_json(need("a_e"), "a_e");
    r.d_e = extnat_from_json(need("d_e"), "d_e");
    r.ascent = extnat_from_json(need("ascent"), "ascent");
    r.descent = extnat_from_json(need("descent"), "descent");
    if (!need("jump").is_null()) r.jump = extnat_from_json(j["jump"], "jump");
    if (!need("index").is_null()) r.index = extint_from_json(j["index"], "index");
    r.flags = flags_from_json(need("flags"));
    if (r.kind == ReportKind::finite) r.dim = detail::uint_from_json(need("dim"), "dim");
    return r;
}

// --- certificate serialization --------------------------------------------

inline json subspace_to_json(const RatSubspace& s) {
    json rows = json::array();
    for (const RatVec& b : s.basis()) {
        json row = json::array();
        for (const Rat& v : b) row.push_back(rat_to_string(v));
        rows.push_back(std::move(row));
    }
    return rows;
}

// Basis rows are canonicalized on ingest, mirroring gcd reduction of
// rational literals.
inline RatSubspace subspace_from_json(const json& j, std::size_t ambient,
                                      const std::string& where) {
    if (!j.is_array()) throw FileParseError(where + ": expected an array of basis rows");
    std::vector<RatVec> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& rj = j[i];
        if (!rj.is_array() || rj.size() != ambient)
            throw FileParseError(where + ": basis rows must have the ambient length");
        RatVec row(ambient);
        for (std::size_t c = 0; c < ambient; ++c)
            row[c] = detail::rat_from_json(rj[c], where + "[" + std::to_string(i) + "][" +
                                                      std::to_string(c) + "]");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return RatSubspace::zero(ambient);
    return RatSubspace::span(rows, ambient);
}

inline json certificate_to_json(const KatoCertificate& cert) {
    json trace = json::array();
    for (const KatoIterationRecord& rec : cert.trace) {
        json seed = json::array();
        for (const Rat& v : rec.seed) seed.push_back(rat_to_string(v));
        json functional = json::array();
        for (const Rat& v : rec.functional) functional.push_back(rat_to_string(v));
        trace.push_back(json{{"seed", std::move(seed)},
                             {"functional", std::move(functional)},
                             {"projection_rank", rec.projection_rank},
                             {"degree", rec.degree}});
    }
    return json{{"kind", "kato_certificate"},
                {"ambient_dim", cert.ambient_dim},
                {"d", cert.d},
                {"k", cert.k},
                {"M_basis", subspace_to_json(cert.core)},
                {"N_basis", subspace_to_json(cert.nilpotent)},
                {"trace", std::move(trace)}};
}

inline KatoCertificate certificate_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || j["kind"] != "kato_certificate")
        throw FileParseError("certificate: expected a kato_certificate document");
    const auto need = [&](const char* field) -> const json& {
        if (!j.contains(field))
            throw FileParseError(std::string("certificate: missing '") + field + "'");
        return j[field];
    };
    KatoCertificate cert;
    cert.ambient_dim = detail::uint_from_json(need("ambient_dim"), "ambient_dim");
    cert.d = detail::uint_from_json(need("d"), "d");
    cert.k = detail::uint_from_json(need("k"), "k");
    cert.core = subspace_from_json(need("M_basis"), cert.ambient_dim, "M_basis");
    cert.nilpotent = subspace_from_json(need("N_basis"), cert.ambient_dim, "N_basis");
    const json& trace = need("trace");
    if (!trace.is_array()) throw FileParseError("certificate: 'trace' must be an array");
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const json& tj = trace[i];
        KatoIterationRecord rec;
        const std::string where = "trace[" + std::to_string(i) + "]";
        if (!tj.is_object() || !tj.contains("seed") || !tj.contains("functional") ||
            !tj.contains("projection_rank") || !tj.contains("degree"))
            throw FileParseError(where + ": malformed iteration record");
        for (std::size_t c = 0; c < tj["seed"].size(); ++c)
            rec.seed.push_back(detail::rat_from_json(tj["seed"][c], where + ".seed"));
        for (std::size_t c = 0; c < tj["functional"].size(); ++c)
            rec.functional.push_back(
                detail::rat_from_json(tj["functional"][c], where + ".functional"));
        rec.projection_rank = detail::uint_from_json(tj["projection_rank"], where);
        rec.degree = detail::uint_from_json(tj["degree"], where);
        cert.trace.push_back(std::move(rec));
    }
    return cert;
}

// Structural decomposition of an atom tree, written when decompose is asked
// for a symbolic operator.
inline json symbolic_kato_to_json(const SymbolicKatoReport& rep) {
    json parts = json::array();
    for (const SymbolicKatoPart& p : rep.parts) {
        json pj{{"leaf", p.leaf_index},
                {"assignment", p.assignment == KatoPartKind::core        ? "core"
                               : p.assignment == KatoPartKind::nilpotent ? "nilpotent"
                                                                         : "split"},
                {"nilpotent_dim", extnat_to_json(p.nilpotent_dim)},
                {"degree", p.degree}};
        if (p.finite_cert) pj["certificate"] = certificate_to_json(*p.finite_cert);
        parts.push_back(std::move(pj));
    }
    return json{{"kind", "symbolic_kato_report"},
                {"d", rep.d},
                {"dim_N", extnat_to_json(rep.nilpotent_dim)},
                {"dim_N_finite", rep.dim_n_finite},
                {"index", extint_to_json(rep.index_total)},
                {"index_core", extint_to_json(rep.index_core)},
                {"parts", std::move(parts)}};
}

inline json matrix_document(const RatMatrix& m) {
    return json{{"type", "matrix"}, {"entries", detail::matrix_to_json(m)}};
}

} // namespace opkit
