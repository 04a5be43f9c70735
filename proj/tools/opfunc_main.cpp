// Command-line front end: certify / falsify / construct / repr / plotdata /
// replay, with JSON reports and CSV plot data.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "opfunc/opfunc.hpp"

using namespace opfunc;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("OPFUNC_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
        }
    }
    return 0;
}

void write_output(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream os(out_path);
        if (!os) throw Error("cannot open output file " + out_path);
        os << report.dump(2) << "\n";
    }
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open output file " + path);
    os << text;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string tok = text.substr(pos, comma - pos);
        if (!tok.empty()) {
            FuncExpr e = parse_function(tok);
            auto v = constant_value(e);
            if (!v) throw ParseError("expected a constant", pos);
            out.push_back(*v);
        }
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return out;
}

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    return json::parse(is);
}

struct CommonArgs {
    std::string func, interval, klass, out;
    std::uint64_t seed = default_seed();
};

int run_certify(const CommonArgs& c, CertifyConfig cfg, const std::string& kernel_csv,
                std::optional<double> t0) {
    const FuncExpr f = parse_function(c.func);
    const Interval j = parse_interval(c.interval);
    cfg.seed = c.seed;
    Verdict v;
    if (c.klass == "om")
        v = certify_operator_monotone(f, j, cfg);
    else if (c.klass == "oc")
        v = certify_operator_convex(f, j, cfg);
    else if (c.klass == "soc")
        v = certify_strongly_operator_convex(f, j, cfg);
    else if (c.klass == "cm")
        v = certify_completely_monotone(f, make_grid(j, 16, cfg.retreat, cfg.cap), cfg.max_order,
                                        cfg.psd_tol);
    else if (c.klass == "bernstein")
        v = certify_bernstein(f, make_grid(j, 16, cfg.retreat, cfg.cap), cfg.max_order, cfg.psd_tol);
    else
        throw PreconditionError("unknown class '" + c.klass + "'");
    if (v.interval_text.empty()) v.interval_text = j.str();

    if (!kernel_csv.empty() && (c.klass == "om" || c.klass == "soc" || c.klass == "oc")) {
        const int n = cfg.grid_sizes.empty() ? 8 : cfg.grid_sizes.back();
        const Grid grid = make_grid(j, n, cfg.retreat, cfg.cap);
        auto [lo, hi] = j.retreated_core(cfg.retreat, cfg.cap);
        const double base = t0 ? *t0 : 0.5 * (lo + hi);
        const KernelMatrix k = (c.klass == "om") ? loewner_matrix(f, grid) : cg_matrix(f, base, grid);
        write_text(kernel_to_csv(k), kernel_csv);
    }

    const int code = v.certified() ? 0 : (v.refuted() ? 1 : 2);
    json rep = make_report("certify", status_name(v.status), code, c.seed, verdict_to_json(v));
    rep["function"] = c.func;
    rep["interval"] = j.str();
    rep["class"] = c.klass;
    rep["config"] = config_to_json(cfg);
    write_output(rep, c.out);
    return code;
}

int run_falsify(const CommonArgs& c, FalsifyConfig cfg, const std::string& witness_path) {
    const FuncExpr f = parse_function(c.func);
    const Interval j = parse_interval(c.interval);
    cfg.seed = c.seed;
    FalsifyOutcome out = falsify(f, c.klass, j, cfg);
    const bool found = out.witness.has_value();
    const int code = found ? 1 : 0;
    if (found && !witness_path.empty()) write_output(witness_to_json(*out.witness), witness_path);
    json rep = make_report("falsify", found ? "witness" : "no-counterexample", code, c.seed,
                           falsify_to_json(out));
    rep["function"] = c.func;
    rep["interval"] = j.str();
    rep["class"] = c.klass;
    rep["config"] = config_to_json(cfg);
    write_output(rep, c.out);
    return code;
}

int run_replay(const std::string& path, const std::string& out, std::uint64_t seed) {
    json o = load_json(path);
    if (o.contains("result") && o["result"].contains("witness")) o = o["result"]["witness"];
    if (o.contains("witness")) o = o["witness"];
    Witness w = witness_from_json(o);
    const FuncExpr f = parse_function(w.function_text);
    SymMatrix residual = replay_witness(f, w);
    const double margin = residual.dim() ? residual.min_eigenvalue() : 0.0;
    const bool reproduced = std::abs(margin - w.margin) <= 1e-10 * (1.0 + std::abs(w.margin));
    const int code = reproduced ? 1 : 2;  // a reproduced witness is a refutation
    json result{{"stored_margin", w.margin},
                {"replayed_margin", margin},
                {"reproduced", reproduced},
                {"inequality", w.inequality},
                {"function", w.function_text}};
    json rep = make_report("replay", reproduced ? "witness" : "error", code, seed, result);
    rep["function"] = w.function_text;
    rep["class"] = w.claim;
    write_output(rep, out);
    return code;
}

int run_construct(const std::string& mode, const CommonArgs& c, const std::string& points_text,
                  const std::string& shifts_text, int steps, bool check, CertifyConfig cfg) {
    const FuncExpr f = parse_function(c.func);
    const Interval j = parse_interval(c.interval);
    cfg.seed = c.seed;
    const std::vector<double> points = parse_number_list(points_text);
    const std::vector<double> shifts = parse_number_list(shifts_text);
    ProcessTrace tr;
    if (mode == "forward")
        tr = forward_process(f, j, points, steps, cfg, check);
    else if (mode == "star")
        tr = star_process(f, j, points, steps, cfg, check);
    else if (mode == "backward")
        tr = backward_process(f, j, points, shifts, steps, cfg, check);
    else
        throw PreconditionError("unknown construct mode '" + mode + "'");
    const bool seed_failed = tr.reason.find("seed is not certified") != std::string::npos;
    const int code = seed_failed ? 2 : 0;
    json rep = make_report("construct", seed_failed ? "error" : "ok", code, c.seed, trace_to_json(tr));
    rep["function"] = c.func;
    rep["interval"] = j.str();
    rep["config"] = config_to_json(cfg);
    write_output(rep, c.out);
    return code;
}

int run_repr(const std::string& mode, const std::string& repr_path, std::string kind, double ginf,
             bool check, const CommonArgs& c, CertifyConfig cfg) {
    cfg.seed = c.seed;
    json o = load_json(repr_path);
    if (kind.empty()) {
        if (o.contains("nu") || o.contains("beta") || o.contains("t0"))
            kind = "pick";
        else if (o.contains("ginf"))
            kind = "halfline";
        else
            kind = "soc";
    }
    json result;
    int code = 0;
    if (mode == "build") {
        FuncExpr f;
        Interval j{0.0, 1.0};
        std::string klass;
        if (kind == "pick") {
            PickRepr r = pick_from_json(o);
            f = build_pick(r);
            j = r.j;
            klass = "om";
        } else if (kind == "halfline") {
            SOCRepr r = soc_from_json(o);
            f = build_halfline(r, o.value("ginf", ginf));
            j = r.j;
            klass = "soc";
        } else {
            SOCRepr r = soc_from_json(o);
            f = build_soc(r);
            j = r.j;
            klass = "soc";
        }
        result["function"] = f.str();
        result["interval"] = j.str();
        result["class"] = klass;
        if (check) {
            Verdict v = (klass == "om") ? certify_operator_monotone(f, j, cfg)
                                        : certify_strongly_operator_convex(f, j, cfg);
            result["check"] = verdict_to_json(v);
            code = v.certified() ? 0 : (v.refuted() ? 1 : 2);
        }
    } else if (mode == "split") {
        SOCRepr r = soc_from_json(o);
        auto [gp, gm] = split_soc(r);
        result["g_plus"] = gp.str();
        result["g_minus"] = gm.str();
        result["interval_plus"] = Interval(r.j.lo(), kInf).str();
        result["interval_minus"] = Interval(-kInf, r.j.hi()).str();
        if (check) {
            Verdict vp = certify_strongly_operator_convex(gp, Interval(r.j.lo(), kInf), cfg);
            Verdict vm = certify_strongly_operator_convex(gm, Interval(-kInf, r.j.hi()), cfg);
            result["check_plus"] = verdict_to_json(vp);
            result["check_minus"] = verdict_to_json(vm);
            code = (vp.certified() && vm.certified()) ? 0 : 2;
        }
    } else {
        throw PreconditionError("unknown repr mode '" + mode + "'");
    }
    json rep = make_report("repr", code == 0 ? "ok" : (code == 1 ? "refuted" : "inconclusive"),
                           code, c.seed, result);
    write_output(rep, c.out);
    return code;
}

int run_plotdata(const CommonArgs& c, int n, double retreat, double cap) {
    const FuncExpr f = parse_function(c.func);
    const Interval j = parse_interval(c.interval);
    const Grid grid = make_grid(j, n, retreat, cap);
    std::ostringstream os;
    os.precision(17);
    long skipped = 0;
    for (double t : grid) {
        try {
            const double v = f.eval(t);
            os << t << "," << v << "\n";
        } catch (const DomainError&) {
            ++skipped;
        }
    }
    if (skipped > 0) os << "# skipped " << skipped << " rows (domain errors)\n";
    if (c.out.empty())
        std::cout << os.str();
    else
        write_text(os.str(), c.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for operator monotone, operator convex, and strongly "
                 "operator convex functions"};
    app.require_subcommand(1);

    CommonArgs args;
    CertifyConfig ccfg;
    FalsifyConfig fcfg;
    std::string kernel_csv, witness_path, replay_path, points_text = "0,0", shifts_text;
    std::string construct_mode, repr_mode, repr_path, repr_kind;
    std::optional<double> t0_opt;
    double t0_value = 0.0, ginf = 0.0;
    int steps = 3, plot_n = 64;
    bool check = false;

    auto add_common = [&](CLI::App* cmd, bool need_func) {
        cmd->add_option("--func", args.func, "function text")->required(need_func);
        cmd->add_option("--interval", args.interval, "interval text, e.g. \"(0, inf)\"")
            ->required(need_func);
        cmd->add_option("--seed", args.seed, "random seed (default: OPFUNC_SEED or 0)");
        cmd->add_option("--out", args.out, "write the JSON report here (default: stdout)");
    };

    CLI::App* certify = app.add_subcommand("certify", "kernel-based class certification");
    add_common(certify, true);
    certify->add_option("--class", args.klass, "om | oc | soc | cm | bernstein")->required();
    certify->add_option("--grid", ccfg.grid_sizes, "grid sizes")->delimiter(',');
    certify->add_option("--tol", ccfg.psd_tol, "PSD tolerance");
    certify->add_option("--retreat", ccfg.retreat, "endpoint retreat");
    certify->add_option("--cap", ccfg.cap, "magnitude cap for infinite sides");
    certify->add_option("--probes", ccfg.t0_probes, "number of t0 probes");
    certify->add_option("--order", ccfg.max_order, "max derivative order (cm/bernstein)");
    certify->add_option("--kernel-csv", kernel_csv, "also export a kernel matrix as CSV");
    certify->add_option("--t0", t0_value, "base point for the exported C_g kernel");

    CLI::App* falsify_cmd = app.add_subcommand("falsify", "randomized matrix falsification");
    falsify_cmd->add_option("--func", args.func, "function text");
    falsify_cmd->add_option("--interval", args.interval, "interval text");
    falsify_cmd->add_option("--seed", args.seed, "random seed");
    falsify_cmd->add_option("--out", args.out, "write the JSON report here");
    falsify_cmd->add_option("--class", args.klass,
                            "om | oc | soc | brown | davis | prop21_ii | prop21_iii | prop21_iv | eq2");
    falsify_cmd->add_option("--trials", fcfg.trials, "total scene budget");
    falsify_cmd->add_option("--dims", fcfg.max_dim, "maximum matrix dimension");
    falsify_cmd->add_option("--lambda", fcfg.lambda, "shift for the shifted criteria");
    falsify_cmd->add_option("--tol", fcfg.psd_tol, "PSD tolerance");
    falsify_cmd->add_option("--witness", witness_path, "write a found witness to this file");
    falsify_cmd->add_option("--replay", replay_path, "re-check a stored witness file instead");

    CLI::App* construct = app.add_subcommand("construct", "iterated class-to-class constructions");
    construct->add_option("mode", construct_mode, "forward | star | backward")->required();
    add_common(construct, true);
    construct->add_option("--points", points_text, "comma-separated base points t_i");
    construct->add_option("--shifts", shifts_text, "comma-separated shifts c_i (backward)");
    construct->add_option("--steps", steps, "maximum number of transform steps");
    construct->add_flag("--check", check, "certify every iterate's label");
    construct->add_option("--grid", ccfg.grid_sizes, "grid sizes")->delimiter(',');
    construct->add_option("--tol", ccfg.psd_tol, "PSD tolerance");

    CLI::App* repr = app.add_subcommand("repr", "build or split integral representations");
    repr->add_option("mode", repr_mode, "build | split")->required();
    repr->add_option("--repr", repr_path, "representation JSON file")->required();
    repr->add_option("--kind", repr_kind, "pick | soc | halfline (default: inferred)");
    repr->add_option("--ginf", ginf, "limit at infinity for the half-line form");
    repr->add_flag("--check", check, "certify the built function(s)");
    repr->add_option("--seed", args.seed, "random seed");
    repr->add_option("--out", args.out, "write the JSON report here");

    CLI::App* plotdata = app.add_subcommand("plotdata", "two-column CSV samples of a function");
    add_common(plotdata, true);
    plotdata->add_option("-n,--n", plot_n, "number of grid points");
    plotdata->add_option("--retreat", ccfg.retreat, "endpoint retreat");
    plotdata->add_option("--cap", ccfg.cap, "magnitude cap");

    CLI::App* replay = app.add_subcommand("replay", "re-check a stored witness file");
    replay->add_option("file", replay_path, "witness JSON file")->required();
    replay->add_option("--out", args.out, "write the JSON report here");
    replay->add_option("--seed", args.seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (certify->parsed()) {
            if (certify->count("--t0")) t0_opt = t0_value;
            return run_certify(args, ccfg, kernel_csv, t0_opt);
        }
        if (falsify_cmd->parsed()) {
            if (!replay_path.empty()) return run_replay(replay_path, args.out, args.seed);
            if (args.func.empty() || args.interval.empty() || args.klass.empty())
                throw PreconditionError("falsify needs --func, --interval, and --class");
            return run_falsify(args, fcfg, witness_path);
        }
        if (construct->parsed())
            return run_construct(construct_mode, args, points_text, shifts_text, steps, check, ccfg);
        if (repr->parsed()) return run_repr(repr_mode, repr_path, repr_kind, ginf, check, args, ccfg);
        if (plotdata->parsed()) return run_plotdata(args, plot_n, ccfg.retreat, ccfg.cap);
        if (replay->parsed()) return run_replay(replay_path, args.out, args.seed);
    } catch (const Error& e) {
        json rep = make_report("error", "error", 2, args.seed, json{{"error", e.what()}});
        std::cerr << rep.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
