#include "fracode/cli.hpp"

#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracode/algrel.hpp"
#include "fracode/codes.hpp"
#include "fracode/fractalizer.hpp"
#include "fracode/lca.hpp"
#include "fracode/subsystem.hpp"
#include "fracode/textio.hpp"
#include "fracode/threading.hpp"
#include "fracode/threestep.hpp"

namespace fracode {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitBudget = 3;

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty())
        std::cout << text;
    else
        write_file(cfg.output, text);
}

void emit_json(const RunConfig& cfg, const json& j) { emit(cfg, j.dump(2) + "\n"); }

Boundary boundary_from(const RunConfig& cfg, std::size_t dims) {
    if (cfg.sizes.size() != dims)
        throw std::invalid_argument("expected " + std::to_string(dims) + " sizes via --L");
    Boundary bc = torus(cfg.sizes);
    for (auto ax : cfg.open_axes) {
        if (ax < 0 || static_cast<std::size_t>(ax) >= dims)
            throw std::invalid_argument("--open axis index out of range");
        bc[static_cast<std::size_t>(ax)].periodic = false;
    }
    return bc;
}

CodeSpec load_spec(const RunConfig& cfg) {
    if (!cfg.input.empty()) return spec_from_file(cfg.input);
    if (!cfg.model.empty()) return build_model(cfg.model, Prime(cfg.p));
    throw std::invalid_argument("need --in <spec file> or --model <name>");
}

LcaRuleSet rules_from(const RunConfig& cfg, std::size_t dims) {
    if (!cfg.rules_file.empty()) {
        LcaRuleSet rs = ruleset_from_file(cfg.rules_file);
        if (rs.dims != dims) throw std::invalid_argument("rule set arity does not match the model");
        return rs;
    }
    if (cfg.rule_texts.size() != dims)
        throw std::invalid_argument("need one --f per original axis (" + std::to_string(dims) + ")");
    Prime p(cfg.p);
    std::vector<LaurentPoly> fs;
    for (const auto& t : cfg.rule_texts) fs.push_back(parse_poly(t, p, cfg.new_dims));
    return LcaRuleSet::first_order(p, std::move(fs));
}

int cmd_model(const RunConfig& cfg) {
    CodeSpec spec = build_model(cfg.model, Prime(cfg.p));
    emit(cfg, spec_to_string(spec));
    return kExitOk;
}

int cmd_fractalize(const RunConfig& cfg) {
    CodeSpec spec = load_spec(cfg);
    LcaRuleSet rules = rules_from(cfg, spec.dims);
    emit(cfg, spec_to_string(fractalize_code(spec, rules)));
    return kExitOk;
}

int cmd_params(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    CodeSpec spec = load_spec(cfg);
    InstantiatedCode inst = instantiate(spec, boundary_from(cfg, spec.dims));
    json rep;
    rep["model"] = cfg.model.empty() ? ("file:" + cfg.input) : cfg.model;
    rep["p"] = spec.p;
    rep["sizes"] = cfg.sizes;
    rep["n"] = inst.n;
    rep["k"] = logical_count(inst);
    rep["wmax"] = cfg.wmax;
    rep["d"] = nullptr;
    int code = kExitOk;
    if (cfg.wmax > 0) {
        try {
            DistanceResult dr = distance_bruteforce(inst, cfg.wmax);
            if (dr.d) rep["d"] = *dr.d;
            if (dr.dx) rep["dx"] = *dr.dx;
            if (dr.dz) rep["dz"] = *dr.dz;
        } catch (const budget_error& e) {
            rep["partial"] = true;
            rep["error"] = e.what();
            code = kExitBudget;
        }
    }
    if (!cfg.export_hx.empty()) write_file(cfg.export_hx, export_sparse(inst.Hx));
    if (!cfg.export_hz.empty()) write_file(cfg.export_hz, export_sparse(inst.Hz));
    auto t1 = std::chrono::steady_clock::now();
    rep["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    emit_json(cfg, rep);
    return code;
}

int cmd_lca_run(const RunConfig& cfg) {
    Prime p(cfg.p);
    LaurentPoly rule = parse_poly(cfg.rule_text, p, 1);
    LaurentPoly c0 = cfg.c0_text.empty() ? LaurentPoly::constant(p, 1, 1) : parse_poly(cfg.c0_text, p, 1);
    Boundary bc = cfg.sizes.empty() ? Boundary{Axis::open(0)} : torus({cfg.sizes[0]});
    auto traj = lca_run(rule, c0, cfg.steps, bc);
    emit(cfg, render_pbm(traj));
    return kExitOk;
}

int cmd_lca_hausdorff(const RunConfig& cfg) {
    Prime p(cfg.p);
    LaurentPoly rule = parse_poly(cfg.rule_text, p, 1);
    json rep;
    rep["rule"] = poly_to_string(rule);
    rep["steps"] = cfg.steps;
    rep["d_f"] = hausdorff_estimate(rule, cfg.steps);
    emit_json(cfg, rep);
    return kExitOk;
}

int cmd_lca_invert(const RunConfig& cfg) {
    Prime p(cfg.p);
    LaurentPoly rule = parse_poly(cfg.rule_text, p, 1);
    if (cfg.sizes.empty()) throw std::invalid_argument("lca invert: need --L");
    auto inv = lca_reversible(rule, cfg.sizes);
    json rep;
    rep["rule"] = poly_to_string(rule);
    rep["sizes"] = cfg.sizes;
    rep["reversible"] = inv.has_value();
    if (inv) rep["inverse"] = poly_to_string(*inv);
    emit_json(cfg, rep);
    return kExitOk;
}

int cmd_algrel(const RunConfig& cfg) {
    Prime p(cfg.p);
    std::vector<LaurentPoly> fs;
    std::string cur;
    std::istringstream is(cfg.polys_text);
    while (std::getline(is, cur, ','))
        if (!cur.empty()) fs.push_back(parse_poly(cur, p, 1));
    auto witness = related_multi(fs, cfg.bound);
    json rep;
    rep["bound"] = cfg.bound;
    if (witness) {
        rep["related"] = true;
        json w;
        w["exponents"] = witness->exponents;
        w["constant"] = witness->constant;
        w["lhs"] = witness->lhs;
        rep["witness"] = w;
    } else {
        rep["related"] = "unknown";
    }
    emit_json(cfg, rep);
    return kExitOk;
}

int cmd_threestep_verify(const RunConfig& cfg) {
    CodeSpec spec = load_spec(cfg);
    std::size_t D = spec.dims, m = cfg.new_dims;
    if (cfg.sizes.size() != D + m)
        throw std::invalid_argument("threestep-verify: need --L with D + m sizes");
    LcaRuleSet rules = rules_from(cfg, D);
    Boundary full = boundary_from(cfg, D + m);
    Boundary rbc(full.begin(), full.begin() + D);
    std::vector<std::int32_t> ysizes(cfg.sizes.begin() + D, cfg.sizes.end());
    FpMat direct = symplectic_rows(instantiate(fractalize_code(spec, rules), full));
    FpMat stepped = three_step_fractalize(spec, rules, rbc, ysizes);
    json rep;
    rep["equal"] = groups_equal(stepped, direct);
    emit_json(cfg, rep);
    return kExitOk;
}

int cmd_subsystem(const RunConfig& cfg) {
    Prime p(cfg.p);
    auto build = [&](const std::vector<std::int32_t>& L) -> GaugeCode {
        if (cfg.model == "bs") {
            if (L.size() != 2) throw std::invalid_argument("bs: need --L L1 L2");
            return build_bacon_shor(L[0], L[1], p);
        }
        LaurentPoly f1 = parse_poly(cfg.f1_text.empty() ? "1" : cfg.f1_text, p, 1);
        LaurentPoly f2 = parse_poly(cfg.f2_text.empty() ? "1" : cfg.f2_text, p, 1);
        if (cfg.model == "fbs") {
            if (L.size() != 3) throw std::invalid_argument("fbs: need --L L1 L2 L3");
            return build_fbs(L[0], L[1], L[2], f1, f2, p, cfg.pad);
        }
        if (cfg.model == "bbs" || cfg.model == "fbbs") {
            if (cfg.kmatrix_file.empty()) throw std::invalid_argument(cfg.model + ": need --K file");
            FpMat K = kmatrix_from_file(cfg.kmatrix_file, p);
            if (cfg.model == "bbs") return build_bbs(K, p);
            if (L.size() != 1 && L.size() != 3)
                throw std::invalid_argument("fbbs: need --L L3 (or --L L1 L2 L3)");
            return build_fbbs(K, L.back(), f1, f2, p, cfg.pad);
        }
        throw std::invalid_argument("subsystem: unknown model '" + cfg.model + "'");
    };

    GaugeCode g = build(cfg.sizes);
    int code = kExitOk;
    SubsystemReport rep = subsystem_report(g, cfg.wmax);
    if (rep.partial) code = kExitBudget;
    if (!cfg.eta_sizes.empty()) {
        std::vector<std::pair<std::int32_t, std::optional<std::size_t>>> pts;
        for (auto L : cfg.eta_sizes) {
            std::vector<std::int32_t> Ls;
            if (cfg.model == "bs")
                Ls = {L, L};
            else
                Ls = {L, L, L};
            try {
                pts.emplace_back(L, dressed_distance(build(Ls), cfg.wmax).d);
            } catch (const budget_error&) {
                pts.emplace_back(L, std::nullopt);
                rep.partial = true;
                code = kExitBudget;
            }
        }
        auto eta = eta_estimate(pts);
        rep.eta = eta.eta;
    }
    json j;
    j["model"] = rep.model;
    j["p"] = rep.p;
    j["sizes"] = rep.sizes;
    j["n"] = rep.n;
    j["k"] = rep.k;
    j["wmax"] = rep.wmax;
    j["d"] = nullptr;
    if (rep.d) j["d"] = *rep.d;
    if (rep.eta)
        j["eta"] = *rep.eta;
    else if (!cfg.eta_sizes.empty())
        j["eta"] = "inconclusive";
    j["bound_ratio"] = rep.bound_ratio;
    j["pad"] = cfg.pad;
    if (rep.partial) j["partial"] = true;
    emit_json(cfg, j);
    return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"fractalized CSS/subsystem code toolkit"};
    app.set_config("--config");
    app.allow_config_extras(false);
    app.require_subcommand(1);
    app.add_option("--threads", cfg.threads, "worker thread cap for enumeration loops");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.output, "output path (default stdout)");
        sub->add_option("--p", cfg.p, "qudit prime dimension")->check(CLI::PositiveNumber);
    };

    auto* model = app.add_subcommand("model", "write a zoo model spec");
    model->add_option("--name", cfg.model, "model name")->required();
    add_common(model);

    auto* frac = app.add_subcommand("fractalize", "fractalize a spec with LCA rules");
    frac->add_option("--in", cfg.input, "input spec file");
    frac->add_option("--model", cfg.model, "zoo model name instead of --in");
    frac->add_option("--f", cfg.rule_texts, "first-order rule polynomial, one per axis");
    frac->add_option("--rules", cfg.rules_file, "rule-set file (for higher order)");
    frac->add_option("--m", cfg.new_dims, "number of new dimensions");
    add_common(frac);

    auto* params = app.add_subcommand("params", "report [n,k,d] for an instantiated spec");
    params->add_option("--in", cfg.input, "input spec file");
    params->add_option("--model", cfg.model, "zoo model name instead of --in");
    params->add_option("--L", cfg.sizes, "lattice sizes")->expected(-1);
    params->add_option("--open", cfg.open_axes, "axes with open boundaries")->expected(-1);
    params->add_option("--wmax", cfg.wmax, "distance search cutoff (0 = skip)");
    params->add_option("--export-hx", cfg.export_hx, "write Hx as sparse coordinate text");
    params->add_option("--export-hz", cfg.export_hz, "write Hz as sparse coordinate text");
    add_common(params);

    auto* lca = app.add_subcommand("lca", "linear cellular automaton tools");
    auto* lrun = lca->add_subcommand("run", "render a trajectory as PBM");
    lrun->add_option("--rule", cfg.rule_text, "rule polynomial")->required();
    lrun->add_option("--steps", cfg.steps, "number of steps")->required();
    lrun->add_option("--c0", cfg.c0_text, "initial state (default 1)");
    lrun->add_option("--L", cfg.sizes, "periodic size (default open)")->expected(-1);
    add_common(lrun);
    auto* lhaus = lca->add_subcommand("hausdorff", "fractal dimension estimate");
    lhaus->add_option("--rule", cfg.rule_text, "rule polynomial")->required();
    lhaus->add_option("--steps", cfg.steps, "number of steps")->required();
    add_common(lhaus);
    auto* linv = lca->add_subcommand("invert", "reversibility check / inverse rule");
    linv->add_option("--rule", cfg.rule_text, "rule polynomial")->required();
    linv->add_option("--L", cfg.sizes, "periodic sizes")->expected(-1);
    add_common(linv);

    auto* algrel_cmd = app.add_subcommand("algrel", "bounded algebraic-relation search");
    algrel_cmd->add_option("--polys", cfg.polys_text, "comma-separated polynomials")->required();
    algrel_cmd->add_option("--bound", cfg.bound, "exponent bound");
    add_common(algrel_cmd);

    auto* tsv = app.add_subcommand("threestep-verify", "three-step vs direct fractalization");
    tsv->add_option("--in", cfg.input, "input spec file");
    tsv->add_option("--model", cfg.model, "zoo model name instead of --in");
    tsv->add_option("--f", cfg.rule_texts, "first-order rule polynomial, one per axis");
    tsv->add_option("--m", cfg.new_dims, "number of new dimensions");
    tsv->add_option("--L", cfg.sizes, "lattice sizes (original axes then new axes)")->expected(-1);
    tsv->add_option("--open", cfg.open_axes, "axes with open boundaries")->expected(-1);
    add_common(tsv);

    auto* subsys = app.add_subcommand("subsystem", "Bacon-Shor family reports");
    subsys->add_option("--model", cfg.model, "bs | fbs | bbs | fbbs")->required();
    subsys->add_option("--L", cfg.sizes, "lattice sizes")->expected(-1);
    subsys->add_option("--f1", cfg.f1_text, "row rule");
    subsys->add_option("--f2", cfg.f2_text, "column rule");
    subsys->add_option("--wmax", cfg.wmax, "dressed-distance cutoff (0 = skip)");
    subsys->add_flag("--pad", cfg.pad, "boundary padding 2 dL along the new axis");
    subsys->add_option("--K", cfg.kmatrix_file, "K matrix file for bbs/fbbs");
    subsys->add_option("--eta-sizes", cfg.eta_sizes, "sizes for the eta regression")->expected(-1);
    add_common(subsys);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    set_thread_cap(cfg.threads);
    try {
        if (model->parsed()) return cmd_model(cfg);
        if (frac->parsed()) return cmd_fractalize(cfg);
        if (params->parsed()) return cmd_params(cfg);
        if (lca->parsed()) {
            if (lrun->parsed()) return cmd_lca_run(cfg);
            if (lhaus->parsed()) return cmd_lca_hausdorff(cfg);
            if (linv->parsed()) return cmd_lca_invert(cfg);
            throw std::invalid_argument("lca: need a subcommand (run | hausdorff | invert)");
        }
        if (algrel_cmd->parsed()) return cmd_algrel(cfg);
        if (tsv->parsed()) return cmd_threestep_verify(cfg);
        if (subsys->parsed()) return cmd_subsystem(cfg);
        throw std::invalid_argument("no command given");
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    }
}

}  // namespace fracode
