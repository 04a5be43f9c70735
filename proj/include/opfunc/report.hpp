#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "opfunc/certify.hpp"
#include "opfunc/construct.hpp"
#include "opfunc/opineq.hpp"
#include "opfunc/parse.hpp"
#include "opfunc/repr.hpp"
#include "opfunc/version.hpp"

namespace opfunc {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// primitives
// ---------------------------------------------------------------------------

inline json interval_to_json(const Interval& j) {
    json o;
    o["lo"] = j.lo_finite() ? json(j.lo()) : json("-inf");
    o["hi"] = j.hi_finite() ? json(j.hi()) : json("inf");
    o["lo_closed"] = j.lo_closed();
    o["hi_closed"] = j.hi_closed();
    o["text"] = j.str();
    return o;
}

inline Interval interval_from_json(const json& o) {
    if (o.is_string()) return parse_interval(o.get<std::string>());
    auto endpoint = [](const json& v, double fallback) {
        if (v.is_string()) return v.get<std::string>() == "-inf" ? -kInf : kInf;
        if (v.is_number()) return v.get<double>();
        return fallback;
    };
    return Interval(endpoint(o.at("lo"), -kInf), endpoint(o.at("hi"), kInf),
                    o.value("lo_closed", false), o.value("hi_closed", false));
}

inline json matrix_to_json(const SymMatrix& m) {
    json o;
    o["n"] = m.dim();
    o["data"] = m.rowmajor();
    return o;
}

inline SymMatrix matrix_from_json(const json& o) {
    return SymMatrix::from_rowmajor(o.at("n").get<int>(), o.at("data").get<std::vector<double>>());
}

inline json config_to_json(const CertifyConfig& c) {
    return json{{"grid_sizes", c.grid_sizes}, {"retreat", c.retreat},   {"cap", c.cap},
                {"psd_tol", c.psd_tol},       {"t0_probes", c.t0_probes}, {"random_grids", c.random_grids},
                {"max_order", c.max_order},   {"seed", c.seed}};
}

inline json config_to_json(const FalsifyConfig& c) {
    return json{{"trials", c.trials}, {"max_dim", c.max_dim}, {"seed", c.seed},
                {"lambda", c.lambda}, {"psd_tol", c.psd_tol}, {"retreat", c.retreat},
                {"cap", c.cap}};
}

// ---------------------------------------------------------------------------
// verdicts
// ---------------------------------------------------------------------------

inline json grid_witness_to_json(const GridWitness& w) {
    json o;
    o["check"] = w.check;
    o["grid"] = w.grid;
    if (w.t0) o["t0"] = *w.t0;
    if (w.order) o["order"] = *w.order;
    if (w.point) o["point"] = *w.point;
    if (w.value) o["value"] = *w.value;
    o["min_eigenvalue"] = w.min_eigenvalue;
    o["witness_vector"] = w.witness_vector;
    return o;
}

inline json verdict_to_json(const Verdict& v) {
    json o;
    o["status"] = status_name(v.status);
    o["class"] = v.klass;
    o["function"] = v.function_text;
    o["interval"] = v.interval_text;
    if (!v.reason.empty()) o["reason"] = v.reason;
    o["config"] = config_to_json(v.config);
    if (v.witness) o["witness"] = grid_witness_to_json(*v.witness);
    if (!v.probes.empty()) o["probes"] = v.probes;
    if (!v.notes.empty()) o["notes"] = v.notes;
    return o;
}

inline json halfline_to_json(const HalflineReport& r) {
    json o;
    o["soc_cg"] = verdict_to_json(r.soc_cg);
    o["pos_opdec"] = verdict_to_json(r.pos_opdec);
    if (r.cm) o["cm"] = verdict_to_json(*r.cm);
    o["consistent_prop23"] = r.consistent_prop23;
    o["consistent_cm"] = r.consistent_cm;
    return o;
}

// ---------------------------------------------------------------------------
// scenes and witnesses
// ---------------------------------------------------------------------------

inline json scene_to_json(const SpectralScene& sc) {
    json o;
    o["n"] = sc.n;
    o["interval"] = interval_to_json(sc.j);
    o["a"] = sc.a.rowmajor();
    o["b"] = sc.b.rowmajor();
    o["p"] = sc.p.rowmajor();
    o["rank"] = sc.rank;
    std::vector<double> basis;
    for (int i = 0; i < sc.basis.rows(); ++i)
        for (int k = 0; k < sc.basis.cols(); ++k) basis.push_back(sc.basis(i, k));
    o["basis"] = basis;
    std::vector<double> s;
    for (int i = 0; i < sc.s_mat.rows(); ++i)
        for (int k = 0; k < sc.s_mat.cols(); ++k) s.push_back(sc.s_mat(i, k));
    o["s_matrix"] = s;
    o["s"] = sc.s;
    o["lambda"] = sc.lambda;
    o["seed"] = sc.seed;
    return o;
}

inline SpectralScene scene_from_json(const json& o) {
    SpectralScene sc;
    sc.n = o.at("n").get<int>();
    sc.j = interval_from_json(o.at("interval"));
    sc.a = SymMatrix::from_rowmajor(sc.n, o.at("a").get<std::vector<double>>());
    sc.b = SymMatrix::from_rowmajor(sc.n, o.at("b").get<std::vector<double>>());
    sc.p = SymMatrix::from_rowmajor(sc.n, o.at("p").get<std::vector<double>>());
    sc.rank = o.at("rank").get<int>();
    const auto basis = o.at("basis").get<std::vector<double>>();
    sc.basis = Eigen::MatrixXd(sc.n, sc.rank);
    for (int i = 0; i < sc.n; ++i)
        for (int k = 0; k < sc.rank; ++k)
            sc.basis(i, k) = basis[std::size_t(i) * std::size_t(sc.rank) + std::size_t(k)];
    const auto s = o.at("s_matrix").get<std::vector<double>>();
    sc.s_mat = Eigen::MatrixXd(sc.n, sc.n);
    for (int i = 0; i < sc.n; ++i)
        for (int k = 0; k < sc.n; ++k)
            sc.s_mat(i, k) = s[std::size_t(i) * std::size_t(sc.n) + std::size_t(k)];
    sc.s = o.at("s").get<double>();
    sc.lambda = o.at("lambda").get<double>();
    sc.seed = o.value("seed", std::uint64_t(0));
    return sc;
}

inline json witness_to_json(const Witness& w) {
    json o;
    o["scene"] = scene_to_json(w.scene);
    o["inequality"] = w.inequality;
    o["claim"] = w.claim;
    o["function"] = w.function_text;
    o["lambda"] = w.lambda;
    o["margin"] = w.margin;
    o["residual"] = matrix_to_json(w.residual);
    return o;
}

inline Witness witness_from_json(const json& o) {
    Witness w;
    w.scene = scene_from_json(o.at("scene"));
    w.inequality = o.at("inequality").get<std::string>();
    w.claim = o.value("claim", std::string());
    w.function_text = o.at("function").get<std::string>();
    w.lambda = o.at("lambda").get<double>();
    w.margin = o.at("margin").get<double>();
    w.residual = matrix_from_json(o.at("residual"));
    return w;
}

inline json falsify_to_json(const FalsifyOutcome& out) {
    json o;
    o["claim"] = out.claim;
    o["function"] = out.function_text;
    o["scenes_run"] = out.scenes_run;
    o["scenes_discarded"] = out.scenes_discarded;
    o["min_margin_seen"] = out.min_margin_seen;
    o["config"] = config_to_json(out.config);
    if (out.witness) o["witness"] = witness_to_json(*out.witness);
    return o;
}

// ---------------------------------------------------------------------------
// construction traces
// ---------------------------------------------------------------------------

inline json labeled_to_json(const LabeledFunc& f) {
    json o;
    o["function"] = f.text();
    o["interval"] = interval_to_json(f.interval);
    o["label"] = label_name(f.label);
    json prov = json::array();
    for (const auto& p : f.provenance) {
        json st;
        st["op"] = p.op;
        if (p.point) st["point"] = *p.point;
        if (p.shift) st["shift"] = *p.shift;
        if (p.endpoint) st["endpoint"] = true;
        prov.push_back(st);
    }
    o["provenance"] = prov;
    return o;
}

inline json trace_to_json(const ProcessTrace& tr) {
    json o;
    json steps = json::array();
    for (const auto& st : tr.steps) {
        json s = labeled_to_json(st.func);
        if (st.check) s["check"] = verdict_to_json(*st.check);
        if (st.degree) s["degree"] = {st.degree->first, st.degree->second};
        steps.push_back(s);
    }
    o["steps"] = steps;
    o["terminated"] = tr.terminated;
    o["reason"] = tr.reason;
    return o;
}

// ---------------------------------------------------------------------------
// representation files
// ---------------------------------------------------------------------------

inline DiscreteMeasure measure_from_json(const json& arr) {
    DiscreteMeasure m;
    for (const auto& a : arr) m.atoms.push_back({a.at("x").get<double>(), a.at("w").get<double>()});
    return m;
}

inline json measure_to_json(const DiscreteMeasure& m) {
    json arr = json::array();
    for (const auto& a : m.atoms) arr.push_back({{"x", a.x}, {"w", a.w}});
    return arr;
}

inline PickRepr pick_from_json(const json& o) {
    PickRepr r;
    r.alpha = o.value("alpha", 0.0);
    r.beta = o.value("beta", 0.0);
    r.t0 = o.at("t0").get<double>();
    r.j = interval_from_json(o.at("interval"));
    if (o.contains("nu")) r.nu = measure_from_json(o.at("nu"));
    return r;
}

inline SOCRepr soc_from_json(const json& o) {
    SOCRepr r;
    r.alpha = o.value("alpha", 0.0);
    r.j = interval_from_json(o.at("interval"));
    if (o.contains("nu_minus")) r.nu_minus = measure_from_json(o.at("nu_minus"));
    if (o.contains("nu_plus")) r.nu_plus = measure_from_json(o.at("nu_plus"));
    return r;
}

inline json pick_to_json(const PickRepr& r) {
    return json{{"alpha", r.alpha},
                {"beta", r.beta},
                {"t0", r.t0},
                {"interval", interval_to_json(r.j)},
                {"nu", measure_to_json(r.nu)}};
}

inline json soc_repr_to_json(const SOCRepr& r) {
    return json{{"alpha", r.alpha},
                {"interval", interval_to_json(r.j)},
                {"nu_minus", measure_to_json(r.nu_minus)},
                {"nu_plus", measure_to_json(r.nu_plus)}};
}

// ---------------------------------------------------------------------------
// the report envelope
// ---------------------------------------------------------------------------

inline json make_report(const std::string& command, const std::string& status, int exit_code,
                        std::uint64_t seed, json result) {
    json o;
    o["tool"] = {{"name", "opfunc"}, {"version", version()}};
    o["command"] = command;
    o["status"] = status;
    o["exit_code"] = exit_code;
    o["seed"] = seed;
    o["result"] = std::move(result);
    return o;
}

}  // namespace opfunc
