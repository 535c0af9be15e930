// Command-line entry point. One JSON config per run plus flag overrides
// (flags win); every output embeds the resolved config. All randomness flows
// from the single 64-bit seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "sphartree/confinement.hpp"
#include "sphartree/evolution.hpp"
#include "sphartree/fields.hpp"
#include "sphartree/instability.hpp"
#include "sphartree/operators.hpp"
#include "sphartree/resonance.hpp"
#include "sphartree/sht.hpp"

using namespace sphartree;
using nlohmann::json;

namespace {

constexpr int kExitBadConfig = 2;
constexpr int kExitDiverged = 3;

// Config file values become defaults; explicitly passed flags override them.
json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            std::ifstream is(argv[i + 1]);
            if (!is) throw std::runtime_error(std::string("cannot open config ") + argv[i + 1]);
            return json::parse(is);
        }
    return json::object();
}

template <typename T>
void from_config(const json& cfg, const char* key, T& value) {
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

struct SelftestCheck {
    std::string name;
    bool ok;
};

int run_selftest(int bandlimit, bool inject_poisson_fault) {
    std::vector<SelftestCheck> checks;
    const int L = std::min(bandlimit, 32);

    {
        const SphereGrid g = make_grid(L);
        const SpectralField f = random_field(L, 1u, 2.0);
        const SpectralField back = analyze(synthesize(f, g), L);
        double err = 0.0;
        for (std::size_t i = 0; i < f.a.size(); ++i)
            err = std::max(err, std::abs(back.a[i] - f.a[i]));
        checks.push_back({"transform round-trip", err < 1e-10});

        const double parseval =
            std::abs(synthesize(f, g).integral_of_abs2() - f.norm_sq()) / f.norm_sq();
        checks.push_back({"Parseval", parseval < 1e-10});
    }

    {
        const SphereGrid g = make_grid(16);
        bool ok = true;
        for (int l : {0, 3, 9, 16}) {
            SpectralField e(16);
            e.at(l, 0) = 1.0;
            const SpatialField pot = poisson_potential(synthesize(e, g));
            const SpectralField c = analyze(pot, 16);
            double mult = 1.0 / (2.0 * l + 1.0);
            if (inject_poisson_fault) mult *= 1.0 + 1e-6;   // test hook
            if (std::abs(c.at(l, 0) - mult) > 1e-12) ok = false;
        }
        checks.push_back({"poisson eigenvalue", ok});
    }

    {
        const int Le = bandlimit;
        const SpectralField u0 = random_field(Le, 2u, 1.0, Le / 4, Le / 8.0);
        const TrajectoryRecord rec = evolve(u0, default_dt(Le), 50 * default_dt(Le));
        checks.push_back({"mass conservation (50 steps)", rec.mass_drift() < 1e-11});
    }

    bool all = true;
    for (const SelftestCheck& c : checks) {
        std::printf("%-32s %s\n", c.name.c_str(), c.ok ? "pass" : "FAIL");
        all = all && c.ok;
    }
    if (!all) {
        for (const SelftestCheck& c : checks)
            if (!c.ok) std::printf("selftest failed: %s\n", c.name.c_str());
    }
    return all ? 0 : 1;
}

SpectralField initial_field(const std::string& kind, int L, std::uint64_t seed) {
    if (kind == "uniform") {
        SpectralField one(L);
        one.at(0, 0) = std::sqrt(4.0 * std::numbers::pi);
        return one;
    }
    if (kind == "random-smooth") return random_field(L, seed, 1.0, L / 4, L / 8.0);
    if (kind == "random-full") return random_field(L, seed, 1.0);
    throw CLI::ValidationError("init", "unknown initial data kind " + kind);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schrodinger-Poisson simulation and verification on the unit sphere"};
    app.require_subcommand(1);
    app.fallthrough();   // --seed/--out/--config may follow the subcommand

    json cfg;
    try {
        cfg = load_config(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadConfig;
    }

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 12345;
    from_config(cfg, "seed", seed);
    from_config(cfg, "out", out_dir);
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--seed", seed, "seed for all randomness");
    app.add_option("--out", out_dir, "output directory");

    // selftest ----------------------------------------------------------
    auto* selftest = app.add_subcommand("selftest", "fast invariant suite");
    int st_bandlimit = 64;
    bool st_fault = false;
    from_config(cfg, "bandlimit", st_bandlimit);
    selftest->add_option("--bandlimit", st_bandlimit, "evolution bandlimit for the mass check");
    selftest->add_flag("--inject-poisson-fault", st_fault,
                       "corrupt the poisson multiplier (fault-injection hook)");

    // evolve -------------------------------------------------------------
    auto* evolve_cmd = app.add_subcommand("evolve", "integrate a single field");
    int ev_bandlimit = 32, ev_snapshot = 0;
    double ev_dt = 0.0, ev_t_end = 1.0;
    std::string ev_init = "random-smooth";
    from_config(cfg, "bandlimit", ev_bandlimit);
    from_config(cfg, "dt", ev_dt);
    from_config(cfg, "t_end", ev_t_end);
    from_config(cfg, "snapshot_every", ev_snapshot);
    from_config(cfg, "init", ev_init);
    evolve_cmd->add_option("--bandlimit", ev_bandlimit, "spectral truncation L");
    evolve_cmd->add_option("--dt", ev_dt, "time step (0: default 0.5/L(L+1))");
    evolve_cmd->add_option("--t-end", ev_t_end, "final time");
    evolve_cmd->add_option("--snapshot-every", ev_snapshot, "SPH1 snapshot stride (0: none)");
    evolve_cmd->add_option("--init", ev_init, "uniform | random-smooth | random-full");

    // instability ----------------------------------------------------------
    auto* inst = app.add_subcommand("instability", "two-solution separation experiment");
    int in_n = 64, in_K = 32, in_max_iter = 200000;
    double in_delta0 = 1.0, in_tol = 1e-9;
    bool in_solver = false;
    from_config(cfg, "n", in_n);
    from_config(cfg, "K", in_K);
    from_config(cfg, "delta0", in_delta0);
    from_config(cfg, "tol", in_tol);
    from_config(cfg, "max_iter", in_max_iter);
    from_config(cfg, "use_solver", in_solver);
    inst->add_option("--n", in_n, "sectoral order");
    inst->add_option("--K", in_K, "subspace truncation depth");
    inst->add_option("--delta0", in_delta0, "L2 norm of the first minimizer");
    inst->add_option("--tol", in_tol, "minimizer tolerance");
    inst->add_option("--max-iter", in_max_iter, "minimizer iteration cap");
    inst->add_flag("--use-solver", in_solver, "cross-check the separation by evolution");

    // confine --------------------------------------------------------------
    auto* confine = app.add_subcommand("confine", "limit-system run with radial basis");
    int cf_bandlimit = 16, cf_n_r = 2000, cf_n_modes = 4;
    double cf_eps = 0.1, cf_r_max = 2.0, cf_dt = 0.0, cf_t_end = 0.5;
    std::string cf_profile = "quartic";
    from_config(cfg, "bandlimit", cf_bandlimit);
    from_config(cfg, "eps", cf_eps);
    from_config(cfg, "r_max", cf_r_max);
    from_config(cfg, "n_r", cf_n_r);
    from_config(cfg, "n_modes", cf_n_modes);
    from_config(cfg, "dt", cf_dt);
    from_config(cfg, "t_end", cf_t_end);
    from_config(cfg, "profile", cf_profile);
    confine->add_option("--bandlimit", cf_bandlimit, "spectral truncation L");
    confine->add_option("--eps", cf_eps, "confinement width");
    confine->add_option("--r-max", cf_r_max, "radial domain truncation");
    confine->add_option("--n-r", cf_n_r, "radial grid points");
    confine->add_option("--n-modes", cf_n_modes, "retained radial modes P");
    confine->add_option("--dt", cf_dt, "time step (0: default)");
    confine->add_option("--t-end", cf_t_end, "final time");
    confine->add_option("--profile", cf_profile, "quartic | harmonic");

    // count ------------------------------------------------------------------
    auto* count = app.add_subcommand("count", "two-squares representation count");
    long long ct_M = 25, ct_N = 3;
    int ct_sigma = 1;
    from_config(cfg, "M", ct_M);
    from_config(cfg, "sigma", ct_sigma);
    from_config(cfg, "N", ct_N);
    count->add_option("--M", ct_M, "target integer");
    count->add_option("--sigma", ct_sigma, "+1 or -1");
    count->add_option("--N", ct_N, "window start (N <= k1 <= 2N)");

    // lambda -----------------------------------------------------------------
    auto* lambda = app.add_subcommand("lambda", "resonance set enumeration / growth table");
    std::vector<int> lm_N = {8, 8, 8, 8};
    long long lm_k = 0;
    std::vector<int> lm_growth;
    from_config(cfg, "N4", lm_N);
    from_config(cfg, "k", lm_k);
    from_config(cfg, "growth", lm_growth);
    lambda->add_option("--N4", lm_N, "four dyadic bounds N1 N2 N3 N4")->expected(4);
    lambda->add_option("--k", lm_k, "target integer");
    lambda->add_option("--growth", lm_growth, "emit sup_k #Lambda(k) table for these N");

    // transform-bench -----------------------------------------------------------
    auto* bench = app.add_subcommand("transform-bench", "time synthesize/analyze");
    int tb_bandlimit = 64, tb_repeat = 5;
    from_config(cfg, "bandlimit", tb_bandlimit);
    from_config(cfg, "repeat", tb_repeat);
    bench->add_option("--bandlimit", tb_bandlimit, "bandlimit L");
    bench->add_option("--repeat", tb_repeat, "repetitions");

    CLI11_PARSE(app, argc, argv);

    json resolved = {{"seed", seed}, {"out", out_dir}};

    try {
        if (selftest->parsed()) {
            resolved["command"] = "selftest";
            resolved["bandlimit"] = st_bandlimit;
            return run_selftest(st_bandlimit, st_fault);
        }

        if (evolve_cmd->parsed()) {
            if (ev_bandlimit < 0) throw CLI::ValidationError("bandlimit", "must be >= 0");
            if (ev_t_end < 0) throw CLI::ValidationError("t_end", "must be >= 0");
            const double dt = ev_dt > 0.0 ? ev_dt : default_dt(ev_bandlimit);
            if (dt <= 0.0) throw CLI::ValidationError("dt", "must be > 0");
            resolved["command"] = "evolve";
            resolved["bandlimit"] = ev_bandlimit;
            resolved["dt"] = dt;
            resolved["t_end"] = ev_t_end;
            resolved["snapshot_every"] = ev_snapshot;
            resolved["init"] = ev_init;

            const SpectralField u0 = initial_field(ev_init, ev_bandlimit, seed);
            const TrajectoryRecord rec = evolve(u0, dt, ev_t_end, ev_snapshot);
            rec.write_csv(out_path(out_dir, "evolve.csv"), resolved.dump());
            for (const auto& [step, state] : rec.snapshots)
                write_sph1(out_path(out_dir, "snapshot_" + std::to_string(step) + ".sph1"),
                           state.components.front());
            std::printf("evolve: %zu steps, mass drift %.3e, energy drift %.3e\n",
                        rec.times.size() - 1, rec.mass_drift(), rec.energy_drift());
            if (ev_init == "uniform") {
                const cplx want = std::polar(std::sqrt(4.0 * std::numbers::pi),
                                             -rec.times.back());
                const cplx got = rec.final_state.components[0].at(0, 0);
                std::printf("evolve: uniform-state phase error %.3e\n", std::abs(got - want));
            }
            return 0;
        }

        if (inst->parsed()) {
            if (in_n < 3) throw CLI::ValidationError("n", "must be >= 3");
            if (!(in_delta0 > 0.0 && in_delta0 <= 1.0))
                throw CLI::ValidationError("delta0", "must be in (0, 1]");
            if (in_K < 1) throw CLI::ValidationError("K", "must be >= 1");
            resolved["command"] = "instability";
            resolved["n"] = in_n;
            resolved["K"] = in_K;
            resolved["delta0"] = in_delta0;
            resolved["tol"] = in_tol;
            resolved["max_iter"] = in_max_iter;
            resolved["use_solver"] = in_solver;

            const SeparationReport rep =
                instability_experiment(in_n, in_delta0, in_K, in_solver, in_tol, in_max_iter);
            std::ofstream os(out_path(out_dir, "instability_report.json"));
            os << to_json(rep, resolved.dump()) << "\n";
            std::printf("instability: n=%d s0=%.4f sep(t_n)=%.4f t_n=%.4f\n", rep.n, rep.s0,
                        rep.separation_analytic, rep.t_n);
            return 0;
        }

        if (confine->parsed()) {
            if (cf_n_modes < 1) throw CLI::ValidationError("n_modes", "must be >= 1");
            const RadialProblem prob = cf_profile == "harmonic"
                                           ? make_harmonic_problem(cf_eps, cf_r_max, cf_n_r)
                                           : make_quartic_problem(cf_eps, cf_r_max, cf_n_r);
            const double dt = cf_dt > 0.0 ? cf_dt : default_dt(cf_bandlimit);
            resolved["command"] = "confine";
            resolved["bandlimit"] = cf_bandlimit;
            resolved["eps"] = cf_eps;
            resolved["r_max"] = cf_r_max;
            resolved["n_r"] = cf_n_r;
            resolved["n_modes"] = cf_n_modes;
            resolved["dt"] = dt;
            resolved["t_end"] = cf_t_end;
            resolved["profile"] = prob.profile_name;

            const RadialEigenbasis basis = radial_eigensolve(prob, cf_n_modes);
            write_basis_csv(out_path(out_dir, "radial_basis.csv"), basis, resolved.dump());
            write_energies_json(out_path(out_dir, "radial_energies.json"), basis,
                                resolved.dump());

            std::vector<double> gauss(basis.r.size());
            for (std::size_t j = 0; j < gauss.size(); ++j) {
                const double z = (basis.r[j] - 1.0) / cf_eps;
                gauss[j] = std::exp(-0.5 * z * z);
            }
            const SpectralField sph =
                random_field(cf_bandlimit, seed, 1.0, cf_bandlimit / 4, cf_bandlimit / 8.0);
            const ConfinedState st = project_initial(gauss, sph, basis, cf_n_modes);
            const TrajectoryRecord rec = evolve_limit(st, dt, cf_t_end);
            rec.write_csv(out_path(out_dir, "confine.csv"), resolved.dump());
            std::printf(
                "confine: %zu steps, discarded mass %.3e, mass drift %.3e, energy drift %.3e\n",
                rec.times.size() - 1, st.discarded_mass, rec.mass_drift(), rec.energy_drift());
            return 0;
        }

        if (count->parsed()) {
            if (ct_N < 1) throw CLI::ValidationError("N", "must be >= 1");
            if (ct_sigma != 1 && ct_sigma != -1)
                throw CLI::ValidationError("sigma", "must be +1 or -1");
            std::printf("%lld\n", count_representations(ct_M, ct_sigma, ct_N));
            return 0;
        }

        if (lambda->parsed()) {
            resolved["command"] = "lambda";
            if (!lm_growth.empty()) {
                resolved["growth"] = lm_growth;
                const std::vector<GrowthRow> rows = lambda_growth_table(lm_growth);
                write_growth_csv(out_path(out_dir, "lambda_growth.csv"), rows,
                                 resolved.dump());
                for (const GrowthRow& r : rows)
                    std::printf("N=%d sup_k #Lambda(k)=%lld at k=%lld\n", r.N, r.sup_count,
                                r.argmax_k);
                return 0;
            }
            ResonanceQuery q;
            for (int i = 0; i < 4; ++i) {
                if (lm_N[i] < 1) throw CLI::ValidationError("N4", "bounds must be >= 1");
                q.N[i] = lm_N[i];
            }
            q.k = lm_k;
            const auto tuples = enumerate_lambda(q);
            std::printf("%zu tuples\n", tuples.size());
            for (const auto& t : tuples)
                std::printf("%d %d %d %d\n", t[0], t[1], t[2], t[3]);
            return 0;
        }

        if (bench->parsed()) {
            const SphereGrid g = make_grid(tb_bandlimit);
            const SpectralField f = random_field(tb_bandlimit, seed);
            const auto t0 = std::chrono::steady_clock::now();
            SpectralField back = f;
            for (int r = 0; r < tb_repeat; ++r) back = analyze(synthesize(back, g), tb_bandlimit);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            double err = 0.0;
            for (std::size_t i = 0; i < f.a.size(); ++i)
                err = std::max(err, std::abs(back.a[i] - f.a[i]));
            std::printf("transform-bench: L=%d, %d round trips, %.3f s each, drift %.2e\n",
                        tb_bandlimit, tb_repeat, secs / tb_repeat, err);
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return kExitBadConfig;
    } catch (const DivergedError& e) {
        std::fprintf(stderr, "diverged: %s\n", e.what());
        return kExitDiverged;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
