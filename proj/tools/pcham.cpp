// Command-line front end: verification, solvers, generators, and experiment
// sweeps over the pcham library.

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

#include "pcham/connecting.hpp"
#include "pcham/exact.hpp"
#include "pcham/generators.hpp"
#include "pcham/pipeline.hpp"

using namespace pcham;

namespace {

constexpr int kExitFound = 0;
constexpr int kExitNegative = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInput = 3;

ColoredKGraph load_instance(const std::string& path) {
    if (path == "-") return parse_instance(std::cin);
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    return parse_instance(in);
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

std::vector<Vertex> parse_vertex_list(const std::string& s) {
    std::vector<Vertex> out;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

Coloring parse_coloring(const std::string& s) {
    if (s == "rainbow") return Coloring::rainbow();
    if (s == "monochromatic" || s == "mono") return Coloring::monochromatic();
    auto colon = s.find(':');
    if (colon != std::string::npos) {
        std::string kind = s.substr(0, colon);
        int arg = std::stoi(s.substr(colon + 1));
        if (kind == "random_bounded") return Coloring::random_bounded(arg);
        if (kind == "adversarial") return Coloring::adversarial_link(arg);
    }
    throw CLI::ValidationError("coloring", "unknown coloring scheme: " + s);
}

Variant parse_variant(const std::string& s) {
    if (s == "auto") return Variant::Auto;
    if (s == "tight") return Variant::Tight;
    if (s == "ell") return Variant::Ell;
    if (s == "loose") return Variant::Loose;
    throw CLI::ValidationError("variant", "unknown variant: " + s);
}

// flat key=value config file; unknown keys rejected
void apply_config_file(PipelineConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "gamma") cfg.gamma = std::stod(val);
        else if (key == "c") cfg.c = std::stod(val);
        else if (key == "lambda") cfg.lambda = std::stod(val);
        else if (key == "rho") cfg.rho = std::stod(val);
        else if (key == "delta") cfg.delta = std::stod(val);
        else if (key == "alpha") cfg.alpha = std::stod(val);
        else if (key == "t") cfg.t = std::stoi(val);
        else if (key == "q") cfg.q = std::stoi(val);
        else if (key == "g") cfg.g = std::stoi(val);
        else if (key == "pc_threshold") cfg.pc_threshold = std::stoul(val);
        else if (key == "retries") cfg.retries = std::stoi(val);
        else if (key == "segments") cfg.segments = std::stoi(val);
        else if (key == "max_absorb_fraction") cfg.max_absorb_fraction = std::stod(val);
        else if (key == "variant") cfg.variant = parse_variant(val);
        else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key " + key);
    }
}

std::string hash_hex(const std::string& s) {
    std::ostringstream out;
    out << std::hex << std::hash<std::string>{}(s);
    return out.str();
}

// ---------------------------------------------------------------------------
// experiment sweep
// ---------------------------------------------------------------------------

struct Plan {
    std::vector<int> ns{};
    int k = 3;
    std::vector<int> ells{};
    std::vector<std::string> colorings{};
    std::vector<std::uint64_t> seeds{};
    std::vector<std::string> solvers{};
    std::string preset = "complete";
    std::string removal = "random";
    double gamma = 0.1;
    std::string variant = "auto";
};

Plan parse_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan file: " + path);
    Plan plan;
    std::string line;
    int lineno = 0;
    auto split = [](const std::string& v) {
        std::vector<std::string> out;
        std::stringstream ss(v);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) out.push_back(tok);
        return out;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("plan line " + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "n")
            for (auto& t : split(val)) plan.ns.push_back(std::stoi(t));
        else if (key == "k") plan.k = std::stoi(val);
        else if (key == "ell")
            for (auto& t : split(val)) plan.ells.push_back(std::stoi(t));
        else if (key == "coloring") plan.colorings = split(val);
        else if (key == "seeds")
            for (auto& t : split(val)) plan.seeds.push_back(std::stoull(t));
        else if (key == "solvers") plan.solvers = split(val);
        else if (key == "preset") plan.preset = val;
        else if (key == "removal") plan.removal = val;
        else if (key == "gamma") plan.gamma = std::stod(val);
        else if (key == "variant") plan.variant = val;
        else throw std::runtime_error("plan line " + std::to_string(lineno) + ": unknown key " + key);
    }
    if (plan.colorings.empty()) plan.colorings = {"rainbow"};
    if (plan.seeds.empty()) plan.seeds = {0};
    if (plan.solvers.empty()) plan.solvers = {"exact"};
    return plan;
}

struct Cell {
    std::size_t index = 0;
    int n = 0, ell = 0;
    std::string coloring;
    std::uint64_t seed = 0;
};

struct CellRows {
    std::vector<std::string> rows;  // without the wall-time column
    std::vector<double> wall_ms;
};

CellRows run_cell(const Plan& plan, const Cell& cell, std::uint64_t master) {
    CellRows out;
    std::uint64_t cell_seed = derive_seed(derive_seed(master, cell.seed), cell.index);
    std::string prefix;
    {
        std::ostringstream p;
        p << cell.index << ',' << cell.n << ',' << plan.k << ',' << cell.ell << ',' << cell.coloring
          << ',' << cell.seed << ',';
        prefix = p.str();
    }
    std::optional<ColoredKGraph> H;
    std::string gen_error;
    try {
        Coloring scheme = parse_coloring(cell.coloring);
        if (plan.preset == "complete")
            H = gen_complete(cell.n, plan.k, scheme, cell_seed);
        else if (plan.preset == "dirac")
            H = gen_dirac(cell.n, plan.k, plan.gamma,
                          plan.removal == "structured" ? Removal::Structured : Removal::Random, scheme,
                          cell_seed)
                    .H;
        else if (plan.preset == "loose")
            H = gen_loose_host(cell.n, plan.gamma, scheme, cell_seed).H;
        else
            throw std::runtime_error("unknown preset: " + plan.preset);
    } catch (const std::exception& e) {
        gen_error = e.what();
    }

    bool run_exact = std::find(plan.solvers.begin(), plan.solvers.end(), "exact") != plan.solvers.end();
    bool run_absorb =
        std::find(plan.solvers.begin(), plan.solvers.end(), "absorbing") != plan.solvers.end();
    std::optional<bool> exact_found, absorb_found;

    auto emit = [&](const std::string& solver, const std::string& outcome, const std::string& hash,
                    double ms) {
        std::string agreement;
        if (run_exact && run_absorb && exact_found && absorb_found)
            agreement = (!*absorb_found || *exact_found) ? "true" : "false";
        // agreement is only known once both solvers ran; rewrite below
        out.rows.push_back(prefix + solver + ',' + outcome + ',' + hash + ',' + agreement);
        out.wall_ms.push_back(ms);
    };

    auto timed = [&](auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };

    if (run_exact) {
        std::string outcome = "error:" + gen_error, hash;
        double ms = 0;
        if (H) {
            ms = timed([&] {
                try {
                    auto r = find_pc_hamilton_exact(*H, cell.ell);
                    if (r.status == SolveStatus::Found) {
                        outcome = "found";
                        hash = hash_hex(format_certificate(*r.cycle));
                        exact_found = true;
                    } else if (r.status == SolveStatus::None) {
                        outcome = "none";
                        exact_found = false;
                    } else {
                        outcome = "budget";
                    }
                } catch (const std::exception& e) {
                    outcome = std::string("error:") + e.what();
                }
            });
        }
        emit("exact", outcome, hash, ms);
    }
    if (run_absorb) {
        std::string outcome = "error:" + gen_error, hash;
        double ms = 0;
        if (H) {
            ms = timed([&] {
                try {
                    PipelineConfig cfg;
                    cfg.seed = cell_seed;
                    // the plan-level variant key only disambiguates k=3 ell=1
                    cfg.variant =
                        (cell.ell == plan.k - 1) ? Variant::Auto : parse_variant(plan.variant);
                    if (plan.k == 3 && cell.ell == 1 && cfg.variant == Variant::Auto)
                        throw std::runtime_error(
                            "k=3 ell=1 needs an explicit variant (plan key variant=ell|loose)");
                    auto r = find_pc_hamilton_absorbing(*H, cell.ell, cfg);
                    if (r.success()) {
                        outcome = "found";
                        hash = hash_hex(format_certificate(*r.cycle));
                        absorb_found = true;
                    } else {
                        outcome = "none:" + r.stages.back().stage;
                        absorb_found = false;
                    }
                } catch (const std::exception& e) {
                    outcome = std::string("error:") + e.what();
                }
            });
        }
        emit("absorbing", outcome, hash, ms);
    }
    // patch the agreement column now that both outcomes are known
    if (run_exact && run_absorb && exact_found.has_value() && absorb_found.has_value()) {
        std::string agreement = (!*absorb_found || *exact_found) ? "true" : "false";
        for (auto& row : out.rows) {
            auto last = row.rfind(',');
            row = row.substr(0, last + 1) + agreement;
        }
    }
    return out;
}

int cmd_experiment(const std::string& plan_path, const std::string& out_path, std::uint64_t master,
                   int workers) {
    Plan plan = parse_plan(plan_path);
    std::vector<Cell> cells;
    std::size_t idx = 0;
    for (int n : plan.ns)
        for (int ell : plan.ells)
            for (const auto& col : plan.colorings)
                for (std::uint64_t s : plan.seeds) cells.push_back({idx++, n, ell, col, s});

    std::vector<CellRows> results(cells.size());
    if (workers < 1) workers = 1;
    for (std::size_t base = 0; base < cells.size(); base += workers) {
        std::vector<std::future<CellRows>> batch;
        for (std::size_t i = base; i < std::min(base + workers, cells.size()); ++i)
            batch.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async,
                                       [&, i] { return run_cell(plan, cells[i], master); }));
        for (std::size_t i = base; i < std::min(base + workers, cells.size()); ++i)
            results[i] = batch[i - base].get();
    }

    std::ofstream file;
    auto& out = open_out(out_path, file);
    out << "cell,n,k,ell,coloring,seed,solver,outcome,cert_hash,agreement,wall_ms\n";
    for (std::size_t i = 0; i < results.size(); ++i)
        for (std::size_t j = 0; j < results[i].rows.size(); ++j)
            out << results[i].rows[j] << ',' << results[i].wall_ms[j] << "\n";
    return kExitFound;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"properly colored Hamilton (k,l)-cycle toolkit"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out_path;
    app.add_option("--seed", seed, "master seed");
    app.add_option("--workers", workers, "parallel cells in experiment sweeps");
    app.add_option("--out", out_path, "output file (default stdout)");

    std::string instance, certificate, config, plan_path, variant = "auto", mode, coloring = "rainbow";
    std::string preset = "complete", removal = "random";
    int ell = 2, n = 0, k = 3, q = 12, g = 8, max_len = 0, min_edges = 2, cap = 0, retries = 64;
    int target = -1;
    bool count = false, paper_constants = false;
    double p = 0.1, delta = 0.05, gamma = 0.1;
    std::uint64_t max_nodes = 100'000'000;
    double time_limit = 120.0;
    std::string from_s, to_s, avoid_s, forbid_s, pair_s;

    auto* verify = app.add_subcommand("verify", "validate a certificate against an instance");
    verify->add_option("--instance", instance)->required();
    verify->add_option("--certificate", certificate, "certificate file ('-' for stdin)")->required();

    auto* solve_exact = app.add_subcommand("solve-exact", "exhaustive search for a pc Hamilton cycle");
    solve_exact->add_option("--instance", instance)->required();
    solve_exact->add_option("--ell", ell)->required();
    solve_exact->add_flag("--count", count, "count all distinct cycles instead");
    solve_exact->add_option("--max-nodes", max_nodes);
    solve_exact->add_option("--time-limit", time_limit);

    auto* solve_absorb = app.add_subcommand("solve-absorb", "absorbing-method solver");
    solve_absorb->add_option("--instance", instance)->required();
    solve_absorb->add_option("--ell", ell)->required();
    solve_absorb->add_option("--config", config, "key=value config file");
    solve_absorb->add_option("--variant", variant, "auto|tight|ell|loose");
    solve_absorb->add_flag("--paper-constants", paper_constants);

    auto* connect = app.add_subcommand("connect", "connect two path ends inside a host");
    connect->add_option("--instance", instance)->required();
    connect->add_option("--mode", mode, "tight|ell|loose")->required();
    connect->add_option("--ell", ell);
    connect->add_option("--from", from_s, "comma-separated end tuple / set / vertex")->required();
    connect->add_option("--to", to_s)->required();
    connect->add_option("--avoid", avoid_s, "comma-separated vertices to avoid");
    connect->add_option("--forbid-colors", forbid_s, "cx,cy end-color bans (ell/loose)");
    connect->add_option("--max-len", max_len, "tight: maximum path length");

    auto* cover = app.add_subcommand("cover", "greedy disjoint pc path cover");
    cover->add_option("--instance", instance)->required();
    cover->add_option("--ell", ell)->required();
    cover->add_option("--delta", delta);
    cover->add_option("--q", q);
    cover->add_option("--min-edges", min_edges);

    auto* count_abs = app.add_subcommand("count-absorbers", "absorber census (CSV)");
    count_abs->add_option("--instance", instance)->required();
    count_abs->add_option("--target", target, "tight census for one vertex (default: all)");
    count_abs->add_option("--pair", pair_s, "x,y pair-absorber census instead");
    count_abs->add_option("--cap", cap, "stop after this many pc absorbers (0 = exhaustive)");

    auto* sample_res = app.add_subcommand("sample-reservoir", "verified Bernoulli reservoir");
    sample_res->add_option("--n", n)->required();
    sample_res->add_option("--p", p);
    sample_res->add_option("--retries", retries);

    auto* gen = app.add_subcommand("gen", "seeded instance generators");
    gen->add_option("--preset", preset, "complete|dirac|loose");
    gen->add_option("--n", n)->required();
    gen->add_option("--k", k);
    gen->add_option("--gamma", gamma);
    gen->add_option("--coloring", coloring);
    gen->add_option("--removal", removal, "random|structured");

    auto* experiment = app.add_subcommand("experiment", "sweep a plan file into a CSV");
    experiment->add_option("--plan", plan_path)->required();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    std::ofstream out_file;
    try {
        if (*verify) {
            auto H = load_instance(instance);
            std::string line;
            if (certificate == "-") {
                std::getline(std::cin, line);
            } else {
                std::ifstream cin_(certificate);
                if (!cin_) throw ParseError("cannot open certificate file: " + certificate);
                std::getline(cin_, line);
            }
            Certificate cert = parse_certificate(line);
            bool ok;
            try {
                if (cert.is_cycle)
                    ok = is_hamilton(H, cert.cycle) && is_properly_colored(H, cert.cycle);
                else
                    ok = cert.path.structurally_valid() && is_properly_colored(H, cert.path);
            } catch (const MissingEdgeError&) {
                ok = false;
            }
            auto& out = open_out(out_path, out_file);
            out << (ok ? "valid" : "invalid") << "\n";
            return ok ? kExitFound : kExitNegative;
        }

        if (*solve_exact) {
            auto H = load_instance(instance);
            SearchBudget budget{max_nodes, time_limit};
            auto& out = open_out(out_path, out_file);
            if (count) {
                auto r = count_pc_hamilton(H, ell, budget);
                if (r.status == SolveStatus::BudgetExhausted) return kExitBudget;
                out << r.count << "\n";
                return r.count > 0 ? kExitFound : kExitNegative;
            }
            auto r = find_pc_hamilton_exact(H, ell, budget);
            if (r.status == SolveStatus::BudgetExhausted) return kExitBudget;
            if (r.status == SolveStatus::None) {
                out << "none\n";
                return kExitNegative;
            }
            out << format_certificate(*r.cycle) << "\n";
            return kExitFound;
        }

        if (*solve_absorb) {
            auto H = load_instance(instance);
            PipelineConfig cfg;
            cfg.seed = seed;
            if (!config.empty()) apply_config_file(cfg, config);
            if (solve_absorb->count("--variant")) cfg.variant = parse_variant(variant);
            cfg.paper_constants = paper_constants;
            if (H.k() == 3 && ell == 1 && cfg.variant == Variant::Auto)
                throw std::invalid_argument(
                    "k=3 ell=1: both the codegree and vertex-degree theorems apply; pass an explicit "
                    "--variant ell|loose");
            auto r = find_pc_hamilton_absorbing(H, ell, cfg);
            auto& out = open_out(out_path, out_file);
            out << "stage,outcome,size_A,size_R,uncovered,used_Q,detail\n";
            for (const auto& st : r.stages)
                out << st.stage << ',' << (st.success ? "ok" : "fail") << ',' << st.size_A << ','
                    << st.size_R << ',' << st.uncovered << ',' << st.used_Q << ",\"" << st.detail
                    << "\"\n";
            if (!r.success()) return kExitNegative;
            out << format_certificate(*r.cycle) << "\n";
            return kExitFound;
        }

        if (*connect) {
            auto H = load_instance(instance);
            auto from = parse_vertex_list(from_s), to = parse_vertex_list(to_s);
            auto avoid = parse_vertex_list(avoid_s);
            auto forbid = parse_vertex_list(forbid_s);
            std::optional<KLPath> P;
            if (mode == "tight") {
                int L = max_len > 0 ? max_len : default_tight_connect_bound(H);
                P = connect_tight(H, from, to, avoid, L);
            } else if (mode == "ell") {
                ColorId cx = forbid.size() > 0 ? forbid[0] : 0;
                ColorId cy = forbid.size() > 1 ? forbid[1] : 0;
                P = connect_ell(H, ell, from, to, cx, cy, avoid);
            } else if (mode == "loose") {
                if (from.size() != 1 || to.size() != 1)
                    throw std::invalid_argument("connect loose: --from/--to take one vertex each");
                ColorId cx = forbid.size() > 0 ? forbid[0] : 0;
                ColorId cy = forbid.size() > 1 ? forbid[1] : 0;
                P = connect_loose(H, from[0], to[0], cx, cy, avoid);
            } else {
                throw std::invalid_argument("connect: unknown --mode " + mode);
            }
            auto& out = open_out(out_path, out_file);
            if (!P) {
                out << "none\n";
                return kExitNegative;
            }
            out << format_certificate(*P) << "\n";
            return kExitFound;
        }

        if (*cover) {
            auto H = load_instance(instance);
            auto res = greedy_path_cover(H, ell, delta, q, seed, min_edges);
            auto& out = open_out(out_path, out_file);
            for (const auto& path : res.paths) out << format_certificate(path) << "\n";
            out << "uncovered";
            for (Vertex v : res.uncovered) out << ' ' << v;
            out << "\n";
            return res.shortfall ? kExitNegative : kExitFound;
        }

        if (*count_abs) {
            auto H = load_instance(instance);
            EnumOptions all_opts, pc_opts;
            all_opts.pc_only = false;
            if (cap > 0) all_opts.cap = pc_opts.cap = static_cast<std::size_t>(cap);
            auto& out = open_out(out_path, out_file);
            out << "instance,target,total,pc\n";
            if (!pair_s.empty()) {
                auto xy = parse_vertex_list(pair_s);
                if (xy.size() != 2) throw std::invalid_argument("--pair needs x,y");
                auto total = enumerate_pair_absorbers(H, xy[0], xy[1], all_opts).size();
                auto pc = enumerate_pair_absorbers(H, xy[0], xy[1], pc_opts).size();
                out << instance << ",(" << xy[0] << ' ' << xy[1] << ")," << total << ',' << pc << "\n";
            } else {
                std::vector<Vertex> targets =
                    target >= 0 ? std::vector<Vertex>{target} : H.vertices();
                for (Vertex v : targets) {
                    auto total = enumerate_tight_absorbers(H, v, all_opts).size();
                    auto pc = enumerate_tight_absorbers(H, v, pc_opts).size();
                    out << instance << ',' << v << ',' << total << ',' << pc << "\n";
                }
            }
            return kExitFound;
        }

        if (*sample_res) {
            std::vector<Vertex> V(n);
            for (int i = 0; i < n; ++i) V[i] = i;
            ReservoirSpec spec;
            spec.p = p;
            spec.retries = retries;
            try {
                auto R = sample_reservoir(V, spec, seed);
                auto& out = open_out(out_path, out_file);
                for (std::size_t i = 0; i < R.size(); ++i) out << (i ? " " : "") << R[i];
                out << "\n";
                return kExitFound;
            } catch (const SamplingFailureError& e) {
                std::cerr << e.what() << "\n";
                return kExitBudget;
            }
        }

        if (*gen) {
            Coloring scheme = parse_coloring(coloring);
            ColoredKGraph H(k, k);
            std::string note;
            if (preset == "complete") {
                H = gen_complete(n, k, scheme, seed);
            } else if (preset == "dirac") {
                auto r = gen_dirac(n, k, gamma,
                                   removal == "structured" ? Removal::Structured : Removal::Random,
                                   scheme, seed);
                H = r.H;
                note = r.note;
            } else if (preset == "loose") {
                auto r = gen_loose_host(n, gamma, scheme, seed);
                H = r.H;
                note = r.note;
            } else {
                throw std::invalid_argument("gen: unknown --preset " + preset);
            }
            std::ofstream file;
            auto& out = open_out(out_path, file);
            write_instance(out, H);
            if (!note.empty()) std::cerr << "note: " << note << "\n";
            return kExitFound;
        }

        if (*experiment) return cmd_experiment(plan_path, out_path, seed, workers);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    }
    return kExitInput;
}
