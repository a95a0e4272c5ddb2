#include <iostream>
#include <set>

#include <CLI11.hpp>

#include <gaussopt/gaussopt.hpp>

using namespace gaussopt;

namespace {

const char* version = "gaussopt 0.1.0";

// Exit status for module errors: 10 + the error code's position.
int exit_status(ErrorCode c) { return 10 + static_cast<int>(c); }

const std::set<std::string> common_keys = {"model", "N", "mass", "J", "h", "kind", "hamiltonian", "offset",
                                           "state", "starts", "seed", "seeds", "spread", "optimizer"};

const std::map<std::string, std::set<std::string>> command_keys = {
    {"convert", {"kind", "from", "to", "in"}},
    {"ground-state", {}},
    {"eop", {"d", "blocks"}},
    {"cop", {"nA", "ancilla"}},
    {"exact-eop", {"d", "blocks", "parity_preserving"}},
    {"flow", {"dt", "steps"}},
};

json defaults(const std::string& cmd)
{
    json j = {{"model", "kg"}, {"N", 100}, {"mass", 0.1}, {"J", 1.0}, {"h", 1.0}, {"starts", 16}, {"seed", 1}};
    if (cmd == "ground-state") {
        j["N"] = 8;
        j["starts"] = 8;
    } else if (cmd == "eop") {
        j["d"] = {10, 30, 50, 70, 90};
        j["blocks"] = json::parse(
            "[[1,1,1,1],[1,2,1,2],[1,2,2,1],[1,3,1,3],[1,3,2,2],[1,3,3,1],[2,2,1,3],[2,2,2,2],[2,2,3,1]]");
    } else if (cmd == "cop") {
        j["nA"] = 1;
        j["ancilla"] = {1, 2, 3};
    } else if (cmd == "exact-eop") {
        j["model"] = "ising";
        j["d"] = {10, 30, 50, 70, 90};
        j["blocks"] = {1, 1, 1, 1};
        j["parity_preserving"] = true;
    } else if (cmd == "flow") {
        j["N"] = 4;
        j["dt"] = 1e-3;
        j["steps"] = 1000;
        j["spread"] = 0.3;
    } else if (cmd == "convert") {
        j = json::object();
        j["kind"] = "boson";
    }
    return j;
}

void validate_keys(const std::string& cmd, const json& cfg)
{
    require(cfg.is_object(), ErrorCode::InvalidConfig, "config must be a JSON object");
    const auto& extra = command_keys.at(cmd);
    for (auto& [k, v] : cfg.items())
        require(common_keys.count(k) || extra.count(k), ErrorCode::InvalidConfig,
                "unknown key '" + k + "' for " + cmd);
}

OptimizerConfig optimizer_from(const json& cfg)
{
    OptimizerConfig o;
    o.starts = cfg.at("starts").get<int>();
    o.base_seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("seeds"))
        o.seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
    if (cfg.contains("optimizer")) {
        const json& p = cfg.at("optimizer");
        static const std::set<std::string> keys = {"initial_step", "min_step",  "grad_tol", "value_tol",
                                                   "max_iters",    "halvings",  "prune_period",
                                                   "prune_keep_fraction", "exact_exponential", "threads"};
        for (auto& [k, v] : p.items())
            require(keys.count(k), ErrorCode::InvalidConfig, "unknown optimizer key '" + k + "'");
        o.initial_step = p.value("initial_step", o.initial_step);
        o.min_step = p.value("min_step", o.min_step);
        o.grad_tol = p.value("grad_tol", o.grad_tol);
        o.value_tol = p.value("value_tol", o.value_tol);
        o.max_iters = p.value("max_iters", o.max_iters);
        o.halvings_per_iter = p.value("halvings", o.halvings_per_iter);
        o.prune_period = p.value("prune_period", o.prune_period);
        o.prune_keep_fraction = p.value("prune_keep_fraction", o.prune_keep_fraction);
        o.exact_exponential = p.value("exact_exponential", o.exact_exponential);
        o.threads = p.value("threads", o.threads);
    }
    o.validate();
    return o;
}

json optimizer_json(const OptimizerConfig& o)
{
    return {{"initial_step", o.initial_step},
            {"min_step", o.min_step},
            {"grad_tol", o.grad_tol},
            {"value_tol", o.value_tol},
            {"max_iters", o.max_iters},
            {"halvings", o.halvings_per_iter},
            {"prune_period", o.prune_period},
            {"prune_keep_fraction", o.prune_keep_fraction},
            {"exact_exponential", o.exact_exponential},
            {"seeds", o.seed_list()}};
}

json runs_json(const MultiStartResult& r)
{
    json a = json::array();
    for (auto& f : r.finals)
        a.push_back({{"seed", f.seed},
                     {"value", f.final_value},
                     {"grad_norm", f.final_grad_norm},
                     {"iterations", f.iterations},
                     {"stop_reason", f.pruned ? "Pruned" : to_string(f.stop_reason)},
                     {"monotone", f.monotone}});
    return {{"best_seed", r.best.seed}, {"runs", a}};
}

// Chain models or a covariance file; returns the full-system J and its kind.
struct SystemState {
    Kind kind;
    Mat J;
};

ChainModel chain_from(const json& cfg)
{
    const std::string model = cfg.at("model");
    const int N = cfg.at("N");
    if (model == "kg")
        return klein_gordon_chain(N, cfg.at("mass").get<double>());
    if (model == "ising")
        return ising_chain(N, cfg.at("J").get<double>(), cfg.at("h").get<double>());
    throw Error(ErrorCode::InvalidConfig, "model must be kg, ising or file");
}

SystemState system_from(const json& cfg)
{
    if (cfg.at("model") == "file") {
        require(cfg.contains("state") && cfg.contains("kind"), ErrorCode::InvalidConfig,
                "file model needs 'state' and 'kind'");
        Kind kind = parse_kind(cfg.at("kind"));
        GaussianState s = make_state(kind, read_csv_file(cfg.at("state")));
        return {kind, s.J};
    }
    ChainModel c = chain_from(cfg);
    return {c.H.kind, complex_structure(c.H.kind, c.gamma)};
}

QuadraticHamiltonian hamiltonian_from(const json& cfg, double* exact)
{
    if (cfg.at("model") == "file") {
        require(cfg.contains("hamiltonian") && cfg.contains("kind"), ErrorCode::InvalidConfig,
                "file model needs 'hamiltonian' and 'kind'");
        QuadraticHamiltonian H{parse_kind(cfg.at("kind")), cfg.value("offset", 0.0), read_csv_file(cfg.at("hamiltonian"))};
        *exact = ground_energy(H);
        return H;
    }
    ChainModel c = chain_from(cfg);
    *exact = c.E0;
    return c.H;
}

std::string block_label(const std::vector<int>& b)
{
    std::string s;
    for (size_t i = 0; i < b.size(); ++i)
        s += (i ? "_" : "") + std::to_string(b[i]);
    return s;
}

struct Output {
    std::string csv;
    json meta;
};

Output run_convert(const json& cfg)
{
    require(cfg.contains("from") && cfg.contains("to") && cfg.contains("in"), ErrorCode::InvalidConfig,
            "convert needs --from, --to and --in");
    Kind kind = parse_kind(cfg.at("kind"));
    Rep from = parse_rep(cfg.at("from")), to = parse_rep(cfg.at("to"));
    Mat gamma = rep_to_covariance(from, kind, read_file(cfg.at("in")));
    return {covariance_to_rep(to, kind, gamma), json::object()};
}

Output run_ground_state(const json& cfg)
{
    double exact = 0.0;
    QuadraticHamiltonian H = hamiltonian_from(cfg, &exact);
    OptimizerConfig o = optimizer_from(cfg);
    GroundStateResult r = variational_ground_state(H, o, cfg.value("spread", 0.5));
    std::string csv = "N,energy,exact,relative_error\n";
    csv += std::to_string(H.modes()) + "," + format_number(r.energy) + "," + format_number(exact) + "," +
           format_number(std::abs(r.energy - exact) / std::max(1.0, std::abs(exact))) + "\n";
    return {csv, {{"optimizer", optimizer_json(o)}, {"result", runs_json(r.runs)}}};
}

Output run_eop(const json& cfg)
{
    OptimizerConfig o = optimizer_from(cfg);
    SystemState sys = system_from(cfg);
    EopOptions opt{o, cfg.value("spread", -1.0)};
    auto ds = cfg.at("d").get<std::vector<int>>();
    auto blocks = cfg.at("blocks").get<std::vector<std::vector<int>>>();
    for (auto& b : blocks)
        require(b.size() == 4, ErrorCode::InvalidConfig, "blocks are [nA, nB, nA', nB']");
    std::string csv = "d";
    for (auto& b : blocks)
        csv += "," + block_label(b);
    csv += "\n";
    json cells = json::array();
    for (int d : ds) {
        csv += std::to_string(d);
        for (auto& b : blocks) {
            Mat J = restrict_modes(sys.J, two_block_sites(b[0], b[1], d));
            EopResult r = gaussian_eop(build_problem(J, b[0], b[1], b[2], b[3], sys.kind), opt);
            csv += "," + format_number(r.value);
            json cell = runs_json(r.runs);
            cell["d"] = d;
            cell["blocks"] = b;
            cell["value"] = r.value;
            cell["hashing_bound"] = r.hashing;
            cell["hashing_ok"] = r.hashing_ok;
            cells.push_back(cell);
        }
        csv += "\n";
    }
    return {csv, {{"optimizer", optimizer_json(o)}, {"cells", cells}}};
}

Output run_cop(const json& cfg)
{
    OptimizerConfig o = optimizer_from(cfg);
    SystemState sys = system_from(cfg);
    EopOptions opt{o, cfg.value("spread", -1.0)};
    const int nA = cfg.at("nA");
    Mat J_A = restrict_modes(sys.J, range(0, nA));
    std::string csv = "n_ancilla,cop\n";
    json rows = json::array();
    for (int na : cfg.at("ancilla").get<std::vector<int>>()) {
        CopResult r = cop(J_A, na, sys.kind, opt);
        csv += std::to_string(na) + "," + format_number(r.value) + "\n";
        json row = runs_json(r.runs);
        row["n_ancilla"] = na;
        row["value"] = r.value;
        rows.push_back(row);
    }
    return {csv, {{"optimizer", optimizer_json(o)}, {"rows", rows}}};
}

Output run_exact_eop(const json& cfg)
{
    OptimizerConfig o = optimizer_from(cfg);
    SystemState sys = system_from(cfg);
    require(sys.kind == Kind::fermion, ErrorCode::InvalidConfig, "exact-eop needs a fermionic model");
    EopOptions opt{o, cfg.value("spread", -1.0)};
    auto b = cfg.at("blocks").get<std::vector<int>>();
    require(b.size() == 4, ErrorCode::InvalidConfig, "blocks are [nA, nB, nA', nB']");
    const bool parity = cfg.at("parity_preserving").get<bool>();
    std::string csv = "d,non_gaussian,gaussian\n";
    json rows = json::array();
    for (int d : cfg.at("d").get<std::vector<int>>()) {
        Mat J = restrict_modes(sys.J, two_block_sites(b[0], b[1], d));
        EopResult g = gaussian_eop(build_problem(J, b[0], b[1], b[2], b[3], sys.kind), opt);
        FockRep rep(b[0] + b[1]);
        ExactEopResult e = exact_eop(gaussian_density(J, rep), b[0], b[1], b[2], b[3], opt, parity);
        csv += std::to_string(d) + "," + format_number(e.value) + "," + format_number(g.value) + "\n";
        rows.push_back({{"d", d},
                        {"non_gaussian", runs_json(e.runs)},
                        {"gaussian", runs_json(g.runs)},
                        {"hashing_bound", g.hashing}});
    }
    return {csv, {{"optimizer", optimizer_json(o)}, {"rows", rows}}};
}

// Real-time flow of the energy from a random pure state; the energy should stay put.
Output run_flow(const json& cfg)
{
    double exact = 0.0;
    QuadraticHamiltonian H = hamiltonian_from(cfg, &exact);
    const int n = H.modes();
    const double dt = cfg.at("dt");
    const int steps = cfg.at("steps");
    require(dt > 0 && steps > 0, ErrorCode::InvalidConfig, "dt and steps must be positive");
    const Mat gamma0 = standard_vacuum(H.kind, n);
    TangentFrame frame = pure_state_frame(H.kind, n);
    Objective f = energy_objective(H, gamma0, frame);
    const std::uint64_t seed = cfg.at("seed");
    Mat M = sample_group(H.kind, n, seed, cfg.at("spread").get<double>());
    std::string csv = "step,time,energy\n";
    const double E_start = f.value(M);
    double drift = 0.0;
    for (int k = 0; k <= steps; ++k) {
        const double E = f.value(M);
        drift = std::max(drift, std::abs(E - E_start));
        csv += std::to_string(k) + "," + format_number(k * dt) + "," + format_number(E) + "\n";
        if (k < steps)
            M = hamiltonian_flow_step(f, M, frame, dt);
    }
    return {csv, {{"seed", seed}, {"max_energy_drift", drift}, {"group_defect", group_defect(H.kind, M)}}};
}

Output execute(const std::string& cmd, const json& cfg)
{
    if (cmd == "convert")
        return run_convert(cfg);
    if (cmd == "ground-state")
        return run_ground_state(cfg);
    if (cmd == "eop")
        return run_eop(cfg);
    if (cmd == "cop")
        return run_cop(cfg);
    if (cmd == "exact-eop")
        return run_exact_eop(cfg);
    return run_flow(cfg);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gaussian state conversions and manifold optimization"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    struct Options {
        std::string config, out, meta, from, to, in, kind;
        std::optional<std::uint64_t> seed;
        std::optional<int> starts;
        std::optional<double> tol;
    };
    std::map<std::string, Options> opts;
    for (auto& [name, keys] : command_keys) {
        auto* sub = app.add_subcommand(name);
        Options& o = opts[name];
        sub->add_option("--config", o.config, "JSON run descriptor");
        sub->add_option("--out", o.out, "CSV output path (stdout if omitted)");
        sub->add_option("--meta", o.meta, "metadata JSON path (default <out>.json)");
        if (name == "convert") {
            sub->add_option("--from", o.from, "covariance, J, generator, squeezing, bogoliubov, thermal, wavefunction");
            sub->add_option("--to", o.to, "target representation");
            sub->add_option("--in", o.in, "input file");
            sub->add_option("--kind", o.kind, "boson or fermion");
        } else {
            sub->add_option("--seed", o.seed, "base seed");
            sub->add_option("--starts", o.starts, "number of random starts");
            sub->add_option("--tol", o.tol, "optimizer gradient tolerance");
        }
    }
    CLI11_PARSE(app, argc, argv);

    const std::string cmd = app.get_subcommands().front()->get_name();
    const Options& o = opts[cmd];
    try {
        json cfg = defaults(cmd);
        if (!o.config.empty()) {
            json user = parse_json(read_file(o.config));
            validate_keys(cmd, user);
            cfg.merge_patch(user);
        }
        if (!o.from.empty())
            cfg["from"] = o.from;
        if (!o.to.empty())
            cfg["to"] = o.to;
        if (!o.in.empty())
            cfg["in"] = o.in;
        if (!o.kind.empty())
            cfg["kind"] = o.kind;
        if (o.seed)
            cfg["seed"] = *o.seed;
        if (o.starts)
            cfg["starts"] = *o.starts;
        if (o.tol)
            cfg["optimizer"]["grad_tol"] = *o.tol;

        Output res;
        try {
            res = execute(cmd, cfg);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidConfig, e.what());
        }
        if (o.out.empty())
            std::cout << res.csv;
        else
            write_file(o.out, res.csv);

        const std::string meta_path = !o.meta.empty() ? o.meta : (o.out.empty() ? "" : o.out + ".json");
        if (!meta_path.empty() && cmd != "convert") {
            json meta = {{"command", cmd},
                         {"version", version},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                       "." + std::to_string(EIGEN_MINOR_VERSION)},
                         {"config", cfg}};
            meta.update(res.meta);
            write_file(meta_path, meta.dump(2) + "\n");
        }
    } catch (const Error& e) {
        json err = {{"error", to_string(e.code())}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return exit_status(e.code());
    }
    return 0;
}
