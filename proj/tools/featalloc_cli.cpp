// featalloc command-line tool: simulate feature-allocation data, fit the
// marked-DPP model, and emit posterior summaries as CSV/PGM files.

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "featalloc/errors.hpp"
#include "featalloc/fit.hpp"
#include "featalloc/infer_crm.hpp"
#include "featalloc/infer_dpp.hpp"
#include "featalloc/io.hpp"
#include "featalloc/simulate.hpp"

namespace fs = std::filesystem;
using namespace featalloc;

namespace {

constexpr const char* kVersion = "featalloc 1.0.0";

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string mode;  // "", "exact", "lecam"
    std::string out_dir = ".";
    std::optional<int> ngrid;
};

Rect region_from(const KvConfig& cfg) {
    return Rect({cfg.get_double_or("region.x0", 0.0),
                 cfg.get_double_or("region.y0", 0.0)},
                cfg.get_double_or("region.len_x", 1.0),
                cfg.get_double_or("region.len_y", 1.0));
}

struct Run {
    KvConfig cfg;
    std::string family;
    Rect region = Rect::unit_square();
    int ng = 50;
    int n = 0;
    std::uint64_t seed = 0;
    DppMode mode = DppMode::exact;
    fs::path out;
};

Run load_run(const CommonOpts& opts) {
    Run run;
    run.cfg = KvConfig::parse_file(opts.config_path);
    run.family = run.cfg.get("family");
    if (run.family != "poisson" && run.family != "mixed_poisson" &&
        run.family != "mixed_binomial" && run.family != "dpp" &&
        run.family != "random_alpha") {
        throw ConfigError("unknown family: " + run.family);
    }
    run.region = region_from(run.cfg);
    run.ng = opts.ngrid.value_or(run.cfg.get_int_or("ng", 50));
    run.n = run.cfg.get_int_or("n", 0);
    run.seed = opts.seed.value_or(run.cfg.get_u64_or("seed", 0));
    const std::string mode_str =
        opts.mode.empty() ? run.cfg.get_or("mode", "exact") : opts.mode;
    if (mode_str == "exact") {
        run.mode = DppMode::exact;
    } else if (mode_str == "lecam") {
        run.mode = DppMode::lecam;
    } else {
        throw ConfigError("mode must be exact or lecam, got: " + mode_str);
    }
    run.out = opts.out_dir;
    fs::create_directories(run.out);
    // fold resolved values back in so the recorded hash covers them
    run.cfg.set("seed", std::to_string(run.seed));
    run.cfg.set("ng", std::to_string(run.ng));
    run.cfg.set("mode", mode_str);
    return run;
}

std::vector<std::string> provenance(const Run& run) {
    return {kVersion, "config_hash=" + std::to_string(run.cfg.hash()),
            "seed=" + std::to_string(run.seed)};
}

BetaLevy levy_from(const Run& run) {
    return BetaLevy(run.cfg.get_double("levy.gamma"),
                    run.cfg.get_double_or("levy.alpha", 0.0),
                    run.cfg.get_double_or("levy.beta", 1.0), run.region);
}

BetaMarkLaw mark_from(const Run& run) {
    return BetaMarkLaw(run.cfg.get_double("mark.a"), run.cfg.get_double("mark.b"));
}

GammaMixing mixing_from(const Run& run) {
    return GammaMixing(run.cfg.get_double("mixing.shape"),
                       run.cfg.get_double("mixing.rate"));
}

CountLaw count_law_from(const Run& run) {
    const std::string type = run.cfg.get("count.type");
    if (type == "poisson") return PoissonCount{run.cfg.get_double("count.lambda")};
    if (type == "negbin") {
        return NegBinCount{run.cfg.get_double("count.r"),
                           run.cfg.get_double("count.p")};
    }
    throw ConfigError("count.type must be poisson or negbin, got: " + type);
}

DppModel dpp_model_from(const Run& run) {
    return DppModel(GaussianDppKernel(run.cfg.get_double("dpp.rho"),
                                      run.cfg.get_double("dpp.alpha"), run.region),
                    mark_from(run), run.ng);
}

FeatureSample load_sample(const Run& run, const std::string& obs_path) {
    FeatureSample sample = feature_sample_from_observations(read_csv(obs_path));
    if (run.n > 0) sample.n = run.n;  // n may exceed the ids present
    for (const auto& f : sample.features) {
        if (!run.region.contains(f.location)) {
            throw DataError("observed feature outside the configured region");
        }
    }
    return sample;
}

void write_pmf_csv(const Run& run, const std::string& name, const Pmf& pmf,
                   const std::vector<std::string>& extra_comments = {}) {
    std::vector<std::string> comments = provenance(run);
    comments.insert(comments.end(), extra_comments.begin(), extra_comments.end());
    std::vector<std::vector<double>> rows;
    rows.reserve(pmf.probs.size());
    for (std::size_t i = 0; i < pmf.probs.size(); ++i) {
        rows.push_back({static_cast<double>(pmf.support_offset) +
                            static_cast<double>(i),
                        pmf.probs[i]});
    }
    write_csv((run.out / name).string(), comments, {"count", "probability"}, rows);
}

int cmd_simulate(const CommonOpts& opts) {
    const Run run = load_run(opts);
    Rng rng(run.seed);
    PsiRealization psi;
    if (run.family == "dpp") {
        if (run.cfg.has("data.points_csv")) {
            // ingest mode: external (x, y) points get fresh Beta marks
            const auto pts = points_from_csv(read_csv(run.cfg.get("data.points_csv")));
            const BetaMarkLaw mark = mark_from(run);
            std::gamma_distribution<double> ga(mark.a, 1.0), gb(mark.b, 1.0);
            for (const auto& p : pts) {
                if (!run.region.contains(p)) {
                    throw DataError("ingested point outside the configured region");
                }
                const double u = ga(rng), v = gb(rng);
                psi.atoms.push_back({p, u / (u + v)});
            }
        } else {
            psi = sample_dpp_psi(GaussianDppKernel(run.cfg.get_double("dpp.rho"),
                                                   run.cfg.get_double("dpp.alpha"),
                                                   run.region),
                                 mark_from(run), run.ng, rng);
        }
    } else if (run.family == "mixed_binomial") {
        psi = sample_mb_psi(count_law_from(run), mark_from(run), run.region, rng);
    } else if (run.family == "mixed_poisson") {
        psi = sample_mixed_psi(levy_from(run), mixing_from(run),
                               run.cfg.get_double_or("sim.eps", 1e-4), rng);
    } else {
        psi = sample_poisson_psi(levy_from(run),
                                 run.cfg.get_double_or("sim.eps", 1e-4), rng);
    }

    std::vector<std::vector<double>> truth_rows;
    for (const auto& a : psi.atoms) {
        truth_rows.push_back({a.location.x, a.location.y, a.weight});
    }
    write_csv((run.out / "truth.csv").string(), provenance(run),
              {"x", "y", "weight"}, truth_rows);

    const auto observations = sample_observations(psi, run.n, rng);
    std::vector<std::vector<double>> obs_rows;
    for (std::size_t i = 0; i < observations.size(); ++i) {
        for (std::size_t id : observations[i].feature_ids) {
            obs_rows.push_back({static_cast<double>(i + 1),
                                psi.atoms[id].location.x,
                                psi.atoms[id].location.y});
        }
    }
    write_csv((run.out / "observations.csv").string(), provenance(run),
              {"obs_id", "x", "y"}, obs_rows);
    std::cout << "simulate: " << psi.atoms.size() << " latent features, " << run.n
              << " observations, " << obs_rows.size() << " display events\n";
    return 0;
}

int cmd_fit(const CommonOpts& opts, const std::string& obs_path) {
    const Run run = load_run(opts);
    const FeatureSample sample = load_sample(run, obs_path);
    FitInit init;
    init.a = run.cfg.get_double_or("fit.init_a", init.a);
    init.b = run.cfg.get_double_or("fit.init_b", init.b);
    init.rho = run.cfg.get_double_or("fit.init_rho", init.rho);
    init.alpha = run.cfg.get_double_or("fit.init_alpha", init.alpha);
    init.fix_marks = run.cfg.get_bool_or("fit.fix_marks", false);
    const int budget = run.cfg.get_int_or("fit.budget", 400);
    const FitResult res =
        fit_empirical_bayes(sample, run.region, run.ng, init, budget);

    std::ofstream out(run.out / "fit.txt");
    if (!out) throw DataError("cannot open for writing: fit.txt");
    out.precision(12);
    for (const auto& c : provenance(run)) out << "# " << c << '\n';
    out << "a=" << res.a << "\nb=" << res.b << "\nrho=" << res.rho
        << "\nalpha=" << res.alpha << "\nlog_marginal=" << res.log_marginal
        << "\nconverged=" << (res.converged ? 1 : 0)
        << "\niterations=" << res.iterations << "\nn=" << sample.n
        << "\nk=" << sample.k() << '\n';
    std::cout << "fit: a=" << res.a << " b=" << res.b << " rho=" << res.rho
              << " alpha=" << res.alpha << " log_marginal=" << res.log_marginal
              << (res.converged ? " (converged)" : " (budget exhausted)") << '\n';
    return 0;
}

int cmd_count_posterior(const CommonOpts& opts, const std::string& obs_path) {
    const Run run = load_run(opts);
    if (run.family != "dpp") {
        throw ConfigError("count-posterior requires family=dpp");
    }
    const Run* rp = &run;
    const FeatureSample sample = load_sample(*rp, obs_path);
    const DppModel model = dpp_model_from(run);
    const CountPosterior cp = dpp_count_posterior(model, sample, run.mode);
    write_pmf_csv(run, "count_posterior.csv", cp.pmf,
                  {std::string("mode=") +
                   (cp.mode_used == DppMode::exact ? "exact" : "lecam")});
    std::cout << "count-posterior: k=" << sample.k()
              << " E[M'+k]=" << expected_total_count(cp) << '\n';
    return 0;
}

int cmd_intensity_map(const CommonOpts& opts, const std::string& obs_path) {
    const Run run = load_run(opts);
    if (run.family != "dpp") {
        throw ConfigError("intensity-map requires family=dpp");
    }
    const FeatureSample sample = load_sample(run, obs_path);
    const DppModel model = dpp_model_from(run);
    const IntensityMap map = unseen_intensity_map(model, sample, run.mode);

    std::vector<std::vector<double>> rows;
    rows.reserve(map.values.size());
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        rows.push_back({map.grid.points[i].x, map.grid.points[i].y, map.values[i]});
    }
    write_csv((run.out / "intensity.csv").string(), provenance(run),
              {"x", "y", "intensity"}, rows);

    // grid points are laid out x-major; PGM rows scan y for a fixed x band,
    // so transpose into image order (row = y from the top)
    const int ng = map.grid.ng;
    std::vector<double> img(map.values.size());
    for (int i = 0; i < ng; ++i) {
        for (int j = 0; j < ng; ++j) {
            img[static_cast<std::size_t>(ng - 1 - j) * ng + i] =
                map.values[static_cast<std::size_t>(i) * ng + j];
        }
    }
    write_pgm((run.out / "intensity.pgm").string(), ng, ng, img,
              (run.out / "intensity.pgm.txt").string());

    std::vector<std::vector<double>> anchor_rows;
    for (const auto& f : sample.features) {
        anchor_rows.push_back({f.location.x, f.location.y,
                               static_cast<double>(f.count)});
    }
    write_csv((run.out / "anchors.csv").string(), provenance(run),
              {"x", "y", "count"}, anchor_rows);
    double total = 0.0;
    for (double v : map.values) total += v;
    std::cout << "intensity-map: integral=" << total * map.grid.cell_area << '\n';
    return 0;
}

int cmd_predict_new(const CommonOpts& opts, const std::string& obs_path) {
    const Run run = load_run(opts);
    const FeatureSample sample = load_sample(run, obs_path);
    NewFeatureLaw law;
    if (run.family == "poisson") {
        law = crm_predictive_new(levy_from(run), sample.n);
    } else if (run.family == "mixed_poisson") {
        law = mp_predictive_new(mixing_from(run), levy_from(run), sample.n,
                                sample.k());
    } else if (run.family == "mixed_binomial") {
        law = mb_predictive_new(count_law_from(run), mark_from(run), sample.n,
                                sample.k());
    } else if (run.family == "random_alpha") {
        Rng rng(run.seed);
        const BetaLevy levy = levy_from(run);
        const AlphaChain chain = alpha_metropolis(
            sample, levy.gamma, levy.beta, [](double) { return 1.0; },
            run.cfg.get_int_or("alpha.iterations", 20000),
            run.cfg.get_double_or("alpha.step", 0.8), rng);
        law = random_alpha_predictive(chain, levy, sample.n);
        std::cout << "predict-new: acceptance_rate=" << chain.acceptance_rate
                  << '\n';
    } else {
        throw ConfigError("predict-new: unsupported family " + run.family);
    }
    write_pmf_csv(run, "predict_new.csv", law.count_law,
                  {"depends_on: " + law.depends_on,
                   "location_law: " + law.location_law});
    std::cout << "predict-new: mean=" << law.count_law.mean()
              << " depends_on=" << law.depends_on << '\n';
    return 0;
}

void add_common(CLI::App* sub, CommonOpts& opts, bool need_config = true) {
    auto* c = sub->add_option("--config", opts.config_path, "configuration file");
    if (need_config) c->required();
    sub->add_option("--seed", opts.seed, "RNG seed (overrides config)");
    sub->add_option("--mode", opts.mode, "exact or lecam (overrides config)")
        ->check(CLI::IsMember({"exact", "lecam"}));
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--ngrid", opts.ngrid, "grid side length (overrides config)");
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("FEATALLOC_THREADS")) {
        const int t = std::atoi(threads);
        if (t > 0) Eigen::setNbThreads(t);
    }

    CLI::App app{"Bayesian feature allocation: simulation, fitting, posteriors"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOpts opts;
    std::string obs_path;

    auto* sim = app.add_subcommand("simulate", "draw a latent process and surveys");
    add_common(sim, opts);

    auto* fit = app.add_subcommand("fit", "empirical-Bayes fit of the DPP model");
    add_common(fit, opts);
    fit->add_option("observations", obs_path, "observations CSV")->required();

    auto* cnt = app.add_subcommand("count-posterior",
                                   "posterior of the total feature count");
    add_common(cnt, opts);
    cnt->add_option("observations", obs_path, "observations CSV")->required();

    auto* imap = app.add_subcommand("intensity-map",
                                    "unseen-feature intensity heatmap");
    add_common(imap, opts);
    imap->add_option("observations", obs_path, "observations CSV")->required();

    auto* pred = app.add_subcommand("predict-new",
                                    "new-feature count law at step n+1");
    add_common(pred, opts);
    pred->add_option("observations", obs_path, "observations CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(opts);
        if (fit->parsed()) return cmd_fit(opts, obs_path);
        if (cnt->parsed()) return cmd_count_posterior(opts, obs_path);
        if (imap->parsed()) return cmd_intensity_map(opts, obs_path);
        if (pred->parsed()) return cmd_predict_new(opts, obs_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
