#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bpb/certificate.hpp"
#include "bpb/instance.hpp"

namespace bpb {

using Json = nlohmann::ordered_json;

// Complex scalars serialize as two-element [re, im] arrays everywhere.

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(where + ": expected a two-element [re, im] array");
    const Complex z{j[0].get<double>(), j[1].get<double>()};
    if (!is_finite(z)) throw ParseError(where + ": non-finite value");
    return z;
}

inline Json vec_to_json(const ComplexVec& v) {
    Json a = Json::array();
    for (const Complex& z : v) a.push_back(complex_to_json(z));
    return a;
}

inline ComplexVec vec_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": expected an array");
    ComplexVec v;
    v.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k)
        v.push_back(complex_from_json(j[k], where + "[" + std::to_string(k) + "]"));
    return v;
}

inline Json space_to_json(const SpaceDescriptor& s) {
    Json j;
    j["type"] = "lp";
    if (s.is_inf())
        j["p"] = "inf";
    else
        j["p"] = s.p;
    j["dim"] = s.dim;
    return j;
}

inline SpaceDescriptor space_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected a space object");
    if (!j.contains("type") || !j["type"].is_string() || j["type"] != "lp")
        throw ParseError(where + ".type: unknown space kind (expected \"lp\")");
    double p = 0.0;
    if (!j.contains("p")) throw ParseError(where + ".p: missing");
    if (j["p"].is_string()) {
        if (j["p"] != "inf") throw ParseError(where + ".p: expected a number or \"inf\"");
        p = std::numeric_limits<double>::infinity();
    } else if (j["p"].is_number()) {
        p = j["p"].get<double>();
        if (!(p >= 1.0)) throw ParseError(where + ".p: need p >= 1");
    } else {
        throw ParseError(where + ".p: expected a number or \"inf\"");
    }
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw ParseError(where + ".dim: expected a positive integer");
    return SpaceDescriptor{p, j["dim"].get<int>()};
}

inline Json operator_to_json(const CKOperator& t) {
    Json j;
    Json cols = Json::array();
    for (const ComplexVec& c : t.columns) cols.push_back(vec_to_json(c));
    j["columns"] = cols;
    j["range"] = space_to_json(t.range);
    return j;
}

inline CKOperator operator_from_json(const Json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("columns") || !j.contains("range"))
        throw ParseError(where + ": expected {columns, range}");
    CKOperator t;
    t.range = space_from_json(j["range"], where + ".range");
    const Json& cols = j["columns"];
    if (!cols.is_array() || cols.empty())
        throw ParseError(where + ".columns: expected a non-empty array");
    for (std::size_t k = 0; k < cols.size(); ++k)
        t.columns.push_back(vec_from_json(cols[k], where + ".columns[" + std::to_string(k) + "]"));
    t.validate();
    return t;
}

inline Json instance_to_json(const Instance& inst) {
    Json j;
    j["n"] = inst.n;
    j["space"] = space_to_json(inst.space);
    j["T"] = operator_to_json(inst.T);
    j["f0"] = vec_to_json(inst.f0);
    j["epsilon"] = inst.epsilon;
    j["mode"] = mode_name(inst.mode);
    j["seed"] = inst.seed;
    return j;
}

inline Instance instance_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("instance: expected an object");
    Instance inst;
    for (const char* key : {"n", "space", "T", "f0", "epsilon", "mode"})
        if (!j.contains(key)) throw ParseError(std::string("instance.") + key + ": missing");
    if (!j["n"].is_number_integer() || j["n"].get<int>() < 1)
        throw ParseError("instance.n: expected a positive integer");
    inst.n = j["n"].get<int>();
    inst.space = space_from_json(j["space"], "instance.space");
    inst.T = operator_from_json(j["T"], "instance.T");
    inst.f0 = vec_from_json(j["f0"], "instance.f0");
    if (!j["epsilon"].is_number()) throw ParseError("instance.epsilon: expected a number");
    inst.epsilon = j["epsilon"].get<double>();
    if (!j["mode"].is_string()) throw ParseError("instance.mode: expected a string");
    inst.mode = mode_from_name(j["mode"].get<std::string>());
    inst.seed = j.value("seed", std::uint64_t{0});
    if (inst.T.domain_dim() != inst.n)
        throw ParseError("instance.T.columns: expected n = " + std::to_string(inst.n) +
                         " columns");
    if (static_cast<int>(inst.f0.size()) != inst.n)
        throw ParseError("instance.f0: expected length n");
    if (!(inst.T.range == inst.space))
        throw ParseError("instance.space: does not match instance.T.range");
    return inst;
}

inline Json certificate_to_json(const Certificate& cert) {
    Json j;
    Json meta;
    meta["epsilon"] = cert.epsilon;
    meta["seed"] = cert.seed;
    meta["profile"] = cert.profile;
    meta["mode"] = cert.mode;
    j["meta"] = meta;
    Json entries = Json::array();
    for (const CertEntry& e : cert.entries) {
        Json je;
        je["label"] = e.label;
        je["lhs"] = e.lhs;
        je["rhs"] = e.rhs;
        je["relation"] = relation_symbol(e.relation);
        je["slack"] = e.slack;
        je["holds"] = e.holds;
        je["guaranteed"] = e.guaranteed;
        entries.push_back(je);
    }
    j["entries"] = entries;
    Json out;
    out["S"] = cert.outputs.S.columns.empty() ? Json(nullptr) : operator_to_json(cert.outputs.S);
    out["f3"] = vec_to_json(cert.outputs.f3);
    out["dist_op"] = cert.outputs.dist_op;
    out["dist_fn"] = cert.outputs.dist_fn;
    out["norm_S"] = cert.outputs.norm_S;
    out["attained_value"] = cert.outputs.attained_value;
    j["outputs"] = out;
    j["oracle_gap"] = cert.oracle_gap;
    return j;
}

inline Certificate certificate_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("meta") || !j.contains("entries"))
        throw ParseError("certificate: expected {meta, entries, outputs, oracle_gap}");
    Certificate cert;
    const Json& meta = j["meta"];
    cert.epsilon = meta.value("epsilon", 0.0);
    cert.seed = meta.value("seed", std::uint64_t{0});
    cert.profile = meta.value("profile", std::string{});
    cert.mode = meta.value("mode", std::string{"strict"});
    for (std::size_t k = 0; k < j["entries"].size(); ++k) {
        const Json& je = j["entries"][k];
        const std::string where = "certificate.entries[" + std::to_string(k) + "]";
        CertEntry e;
        if (!je.contains("label") || !je["label"].is_string())
            throw ParseError(where + ".label: expected a string");
        e.label = je["label"].get<std::string>();
        e.lhs = je.value("lhs", 0.0);
        e.rhs = je.value("rhs", 0.0);
        const std::string rel = je.value("relation", std::string{"<="});
        if (rel == "<")
            e.relation = Relation::less;
        else if (rel == "<=")
            e.relation = Relation::leq;
        else
            throw ParseError(where + ".relation: expected \"<\" or \"<=\"");
        e.slack = je.value("slack", e.rhs - e.lhs);
        e.holds = je.value("holds", false);
        e.guaranteed = je.value("guaranteed", true);
        cert.entries.push_back(std::move(e));
    }
    if (j.contains("outputs") && j["outputs"].is_object()) {
        const Json& out = j["outputs"];
        if (out.contains("S") && out["S"].is_object())
            cert.outputs.S = operator_from_json(out["S"], "certificate.outputs.S");
        if (out.contains("f3"))
            cert.outputs.f3 = vec_from_json(out["f3"], "certificate.outputs.f3");
        cert.outputs.dist_op = out.value("dist_op", 0.0);
        cert.outputs.dist_fn = out.value("dist_fn", 0.0);
        cert.outputs.norm_S = out.value("norm_S", 0.0);
        cert.outputs.attained_value = out.value("attained_value", 0.0);
    }
    cert.oracle_gap = j.value("oracle_gap", 0.0);
    return cert;
}

/// Canonical text form used for every emitted JSON document.
inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot open file for writing");
    out << text;
}

} // namespace bpb
