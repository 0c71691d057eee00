// vesim: command-line front end for the ves library.
//
// Subcommands: simulate | sweep | table1 | phases | montecarlo | fit.
// Every run is configured by an optional JSON document (--config) whose
// fields share names with the CLI flags; flags win over the file. All
// output is deterministic for a fixed configuration (and seed, where one
// applies).
//
// Exit codes: 0 success (including model-infeasible fits), 2 config or
// validation failure, 3 I/O failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ves/calibration.hpp"
#include "ves/ces.hpp"
#include "ves/dynamics.hpp"
#include "ves/io.hpp"
#include "ves/montecarlo.hpp"
#include "ves/powerlaw.hpp"
#include "ves/rng.hpp"
#include "ves/version.hpp"

using nlohmann::json;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // scenario
    double alpha = 0.001;
    double price0 = 0.5;
    double g = 1.5;
    double d = 0.5;
    double delta = 0.15;
    double sigma0 = 0.0;
    double k = 1.0;
    double xi = 1.0;
    // grid
    double t_end = 30.0;
    int steps = 301;
    // classification
    double epsilon = 1e-6;
    double sigma_tol = 1e-9;
    // stochastic runs
    std::uint64_t seed = 1;
    std::size_t n = 1000;
    std::size_t threads = 1;
    std::vector<double> quantiles{0.05, 0.5, 0.95};
    std::string sigma0_dist;
    std::string phi_dist;
    // sweep grid
    std::vector<double> sweep_g{0.5, 1.5};
    std::vector<double> sweep_d{0.5, 1.5};
    std::vector<double> sweep_delta{0.05, 0.15};
    // io
    std::string config_path;
    std::string out;
    std::string format = "csv";
    std::string observations;

    double phi() const { return delta * g; }
    bool generalized() const { return sigma0 != 0.0 || k != 1.0 || xi != 1.0; }
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("write to '" + path + "' failed");
}

ves::DistributionSpec parse_dist_string(const std::string& text) {
    const auto colon = text.find(':');
    const std::string family = text.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            double v = 0.0;
            if (!ves::parse_double(tok, v))
                throw std::invalid_argument("bad distribution parameter '" + tok + "'");
            args.push_back(v);
        }
    }
    auto need = [&](std::size_t count) {
        if (args.size() != count)
            throw std::invalid_argument("distribution '" + family + "' takes " +
                                        std::to_string(count) + " parameter(s)");
    };
    if (family == "point") {
        need(1);
        return ves::DistributionSpec::point(args[0]);
    }
    if (family == "exponential") {
        need(1);
        return ves::DistributionSpec::exponential(args[0]);
    }
    if (family == "lognormal") {
        need(2);
        return ves::DistributionSpec::lognormal(args[0], args[1]);
    }
    if (family == "truncated-normal") {
        need(2);
        return ves::DistributionSpec::truncated_normal(args[0], args[1]);
    }
    throw std::invalid_argument("unknown distribution family '" + family + "'");
}

std::string dist_to_string(const ves::DistributionSpec& spec) {
    using ves::DistFamily;
    switch (spec.family) {
        case DistFamily::point:
            return "point:" + ves::format_double(spec.p1);
        case DistFamily::exponential:
            return "exponential:" + ves::format_double(spec.p1);
        case DistFamily::lognormal:
            return "lognormal:" + ves::format_double(spec.p1) + "," +
                   ves::format_double(spec.p2);
        case DistFamily::truncated_normal:
            return "truncated-normal:" + ves::format_double(spec.p1) + "," +
                   ves::format_double(spec.p2);
    }
    return {};
}

json dist_to_json(const ves::DistributionSpec& spec) {
    using ves::DistFamily;
    switch (spec.family) {
        case DistFamily::point:
            return {{"family", "point"}, {"value", spec.p1}};
        case DistFamily::exponential:
            return {{"family", "exponential"}, {"rate", spec.p1}};
        case DistFamily::lognormal:
            return {{"family", "lognormal"}, {"location", spec.p1}, {"scale", spec.p2}};
        case DistFamily::truncated_normal:
            return {{"family", "truncated-normal"}, {"mean", spec.p1}, {"sd", spec.p2}};
    }
    return {};
}

ves::DistributionSpec dist_from_json(const json& j) {
    if (j.is_string()) return parse_dist_string(j.get<std::string>());
    const std::string family = j.at("family").get<std::string>();
    if (family == "point")
        return ves::DistributionSpec::point(j.at("value").get<double>());
    if (family == "exponential")
        return ves::DistributionSpec::exponential(j.at("rate").get<double>());
    if (family == "lognormal")
        return ves::DistributionSpec::lognormal(j.at("location").get<double>(),
                                                j.at("scale").get<double>());
    if (family == "truncated-normal")
        return ves::DistributionSpec::truncated_normal(j.at("mean").get<double>(),
                                                       j.at("sd").get<double>());
    throw std::invalid_argument("unknown distribution family '" + family + "'");
}

// Fields not given on the command line fall back to the config document.
template <typename T>
void merge_field(const CLI::App* cmd, const json& cfg, const char* flag,
                 const char* key, T& dst) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) return;
    if (cfg.contains(key)) dst = cfg.at(key).get<T>();
}

void apply_config(const CLI::App* cmd, Options& o) {
    if (o.config_path.empty()) return;
    std::ifstream f(o.config_path);
    if (!f) throw IoError("cannot open config '" + o.config_path + "'");
    json cfg = json::parse(f);  // parse_error propagates as config failure

    merge_field(cmd, cfg, "--alpha", "alpha", o.alpha);
    merge_field(cmd, cfg, "--price0", "price0", o.price0);
    merge_field(cmd, cfg, "--g", "g", o.g);
    merge_field(cmd, cfg, "--d", "d", o.d);
    merge_field(cmd, cfg, "--delta", "delta", o.delta);
    merge_field(cmd, cfg, "--sigma0", "sigma0", o.sigma0);
    merge_field(cmd, cfg, "--k", "k", o.k);
    merge_field(cmd, cfg, "--xi", "xi", o.xi);
    merge_field(cmd, cfg, "--t-end", "t_end", o.t_end);
    merge_field(cmd, cfg, "--steps", "steps", o.steps);
    merge_field(cmd, cfg, "--epsilon", "epsilon", o.epsilon);
    merge_field(cmd, cfg, "--sigma-tol", "sigma_tol", o.sigma_tol);
    merge_field(cmd, cfg, "--seed", "seed", o.seed);
    merge_field(cmd, cfg, "--n", "n", o.n);
    merge_field(cmd, cfg, "--threads", "threads", o.threads);
    merge_field(cmd, cfg, "--quantiles", "quantiles", o.quantiles);
    merge_field(cmd, cfg, "--sweep-g", "sweep_g", o.sweep_g);
    merge_field(cmd, cfg, "--sweep-d", "sweep_d", o.sweep_d);
    merge_field(cmd, cfg, "--sweep-delta", "sweep_delta", o.sweep_delta);
    merge_field(cmd, cfg, "--out", "out", o.out);
    merge_field(cmd, cfg, "--format", "format", o.format);
    merge_field(cmd, cfg, "--observations", "observations", o.observations);

    const CLI::Option* sd = cmd->get_option_no_throw("--sigma0-dist");
    if ((sd == nullptr || sd->count() == 0) && cfg.contains("sigma0_dist"))
        o.sigma0_dist = cfg.at("sigma0_dist").is_string()
                            ? cfg.at("sigma0_dist").get<std::string>()
                            : dist_to_string(dist_from_json(cfg.at("sigma0_dist")));
    const CLI::Option* pd = cmd->get_option_no_throw("--phi-dist");
    if ((pd == nullptr || pd->count() == 0) && cfg.contains("phi_dist"))
        o.phi_dist = cfg.at("phi_dist").is_string()
                         ? cfg.at("phi_dist").get<std::string>()
                         : dist_to_string(dist_from_json(cfg.at("phi_dist")));
}

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed)
        if (o.format == f) return;
    throw std::invalid_argument("format '" + o.format + "' not supported here");
}

// Uniform time grid including both endpoints.
std::vector<double> time_grid(double t_end, int steps) {
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    if (steps < 2) throw std::invalid_argument("steps must be >= 2");
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        g[static_cast<std::size_t>(i)] =
            t_end * static_cast<double>(i) / static_cast<double>(steps - 1);
    return g;
}

ves::Trajectory general_trajectory(const ves::GenScenario& gs, double t_end, int steps) {
    ves::Trajectory tr;
    for (double t : time_grid(t_end, steps)) {
        const ves::AffineX ax = ves::affine_x(gs, t);
        tr.times.push_back(t);
        tr.sigma.push_back(ves::sigma_pl(gs, t));
        tr.price.push_back(ves::price_pl(gs, t));
        tr.exponent.push_back(ax.value);
        tr.share.push_back(ves::logistic(-ax.value));
        tr.logit_share.push_back(-ax.value);
    }
    return tr;
}

ves::GenScenario gen_scenario(const Options& o) {
    return ves::GenScenario(o.alpha, o.price0, o.d, o.xi, o.sigma0, o.phi(), o.k);
}

json scenario_json(const Options& o) {
    return {{"alpha", o.alpha}, {"price0", o.price0}, {"g", o.g},
            {"d", o.d},         {"delta", o.delta},   {"phi", o.phi()},
            {"sigma0", o.sigma0}, {"k", o.k},         {"xi", o.xi}};
}

// --- commands ---------------------------------------------------------

int cmd_table1(const Options& o) {
    require_format(o, {"csv"});
    std::string out = "g,d,delta,phi,t_star,r_a10,r_a30\n";
    for (double g : {0.5, 1.5})
        for (double d : {0.5, 1.5})
            for (double delta : {0.05, 0.15}) {
                const ves::Scenario s(0.001, 0.5, g, d, delta);
                out += ves::format_fixed(g, 1) + ",";
                out += ves::format_fixed(d, 1) + ",";
                out += ves::format_fixed(delta, 2) + ",";
                out += ves::format_fixed(s.phi, 3) + ",";
                out += ves::format_fixed(ves::t_star(s.phi), 3) + ",";
                out += ves::format_fixed(ves::share_at(s, 10.0).value, 6) + ",";
                out += ves::format_fixed(ves::share_at(s, 30.0).value, 6) + "\n";
            }
    write_output(o.out, out);
    return 0;
}

int cmd_simulate(const Options& o) {
    require_format(o, {"csv", "json", "svg"});
    ves::Trajectory tr;
    std::optional<double> circle_t;  // sigma = 1
    std::optional<double> cross_t;   // sigma = 2
    if (o.generalized()) {
        const ves::GenScenario gs = gen_scenario(o);
        tr = general_trajectory(gs, o.t_end, o.steps);
        if (auto ts = ves::t_star_general(gs)) circle_t = *ts;
        if (gs.sigma0 < 2.0)
            cross_t = std::pow((2.0 - gs.sigma0) / gs.phi, 1.0 / gs.k);
    } else {
        const ves::Scenario s(o.alpha, o.price0, o.g, o.d, o.delta);
        tr = trajectory(s, o.t_end, o.steps);
        circle_t = ves::t_star(s.phi);
        cross_t = 2.0 * *circle_t;
    }

    if (o.format == "csv") {
        write_output(o.out, ves::trajectory_csv(tr));
    } else if (o.format == "svg") {
        auto share_on_curve = [&](double t) {
            if (o.generalized()) return ves::share_pl(gen_scenario(o), t).value;
            return ves::share_at(ves::Scenario(o.alpha, o.price0, o.g, o.d, o.delta), t)
                .value;
        };
        std::optional<std::pair<double, double>> circle, cross;
        if (circle_t) circle = {*circle_t, share_on_curve(*circle_t)};
        if (cross_t) cross = {*cross_t, share_on_curve(*cross_t)};
        write_output(o.out, ves::svg_share_chart(tr, circle, cross));
    } else {
        json j{{"model_version", std::string(ves::model_version)},
               {"scenario", scenario_json(o)},
               {"t", tr.times},
               {"sigma", tr.sigma},
               {"price", tr.price},
               {"share", tr.share},
               {"logit_share", tr.logit_share}};
        write_output(o.out, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_sweep(const Options& o) {
    require_format(o, {"csv"});
    std::string out = "g,d,delta,phi,t,sigma,price,share,logit_share\n";
    for (double g : o.sweep_g)
        for (double d : o.sweep_d)
            for (double delta : o.sweep_delta) {
                const ves::Scenario s(o.alpha, o.price0, g, d, delta);
                const ves::Trajectory tr = trajectory(s, o.t_end, o.steps);
                for (std::size_t i = 0; i < tr.times.size(); ++i) {
                    out += ves::format_double(g) + ",";
                    out += ves::format_double(d) + ",";
                    out += ves::format_double(delta) + ",";
                    out += ves::format_double(s.phi) + ",";
                    out += ves::format_double(tr.times[i]) + ",";
                    out += ves::format_double(tr.sigma[i]) + ",";
                    out += ves::format_double(tr.price[i]) + ",";
                    out += ves::format_double(tr.share[i]) + ",";
                    out += ves::format_double(tr.logit_share[i]) + "\n";
                }
            }
    write_output(o.out, out);
    return 0;
}

int cmd_phases(const Options& o) {
    if (!(o.epsilon > 0.0) || !(o.epsilon < 0.5))
        throw std::invalid_argument("epsilon must lie in (0,0.5)");

    std::optional<double> ts, t2;
    bool already_crossed = false;
    double sigma_start = 0.0;
    ves::Trajectory tr;
    if (o.generalized()) {
        const ves::GenScenario gs = gen_scenario(o);
        sigma_start = gs.sigma0;
        if (auto t = ves::t_star_general(gs))
            ts = *t;
        else
            already_crossed = true;
        if (gs.sigma0 < 2.0) t2 = std::pow((2.0 - gs.sigma0) / gs.phi, 1.0 / gs.k);
        tr = general_trajectory(gs, o.t_end, o.steps);
    } else {
        const ves::Scenario s(o.alpha, o.price0, o.g, o.d, o.delta);
        ts = ves::t_star(s.phi);
        t2 = 2.0 * *ts;
        tr = trajectory(s, o.t_end, o.steps);
    }

    std::optional<double> t_sat;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        if (tr.share[i] >= 1.0 - o.epsilon) {
            t_sat = tr.times[i];
            break;
        }
    }

    // Entry times, truncated at saturation (the classifier reports phase 5
    // from there on no matter where sigma stands).
    std::vector<std::pair<int, double>> bounds;
    if (already_crossed) {
        bounds.emplace_back(sigma_start < 2.0 ? 3 : 4, 0.0);
    } else {
        bounds.emplace_back(1, 0.0);
        if (ts && *ts <= o.t_end) {
            bounds.emplace_back(2, *ts);
            bounds.emplace_back(3, *ts);
        }
    }
    if (t2 && *t2 <= o.t_end && sigma_start < 2.0) bounds.emplace_back(4, *t2);
    if (t_sat) {
        std::erase_if(bounds, [&](const auto& b) { return b.second >= *t_sat && b.first != 1; });
        bounds.emplace_back(5, *t_sat);
    }

    json j{{"model_version", std::string(ves::model_version)},
           {"scenario", scenario_json(o)},
           {"epsilon", o.epsilon},
           {"sigma_tolerance", o.sigma_tol},
           {"horizon", {{"t_end", o.t_end}, {"steps", o.steps}}},
           {"already_crossed", already_crossed},
           {"t_star", ts ? json(*ts) : json(nullptr)},
           {"t_2star", t2 ? json(*t2) : json(nullptr)},
           {"t_saturation", t_sat ? json(*t_sat) : json(nullptr)}};
    if (!t_sat) j["note"] = "saturation not reached within horizon";
    json jb = json::array();
    for (const auto& [phase, t_enter] : bounds)
        jb.push_back({{"phase", phase}, {"t_enter", t_enter}});
    j["phase_boundaries"] = jb;
    write_output(o.out, j.dump(2) + "\n");
    return 0;
}

int cmd_montecarlo(const Options& o) {
    require_format(o, {"csv", "json"});
    const ves::GenScenario gs = gen_scenario(o);
    const ves::DistributionSpec sigma0_spec = o.sigma0_dist.empty()
                                                  ? ves::DistributionSpec::point(o.sigma0)
                                                  : parse_dist_string(o.sigma0_dist);
    const ves::DistributionSpec phi_spec = o.phi_dist.empty()
                                               ? ves::DistributionSpec::point(o.phi())
                                               : parse_dist_string(o.phi_dist);
    const std::vector<double> grid = time_grid(o.t_end, o.steps);
    const ves::McResult res = ves::propagate(gs, sigma0_spec, phi_spec, grid, o.n,
                                             o.seed, o.threads, o.quantiles);

    json tstar{{"finite", res.tstar_samples.size()},
               {"already_crossed", res.already_crossed},
               {"never", res.never_crossed}};
    if (!res.tstar_samples.empty()) {
        std::vector<double> sorted = res.tstar_samples;
        std::sort(sorted.begin(), sorted.end());
        tstar["median"] = ves::quantile_nearest_rank(sorted, 0.5);
        tstar["q25"] = ves::quantile_nearest_rank(sorted, 0.25);
        tstar["q75"] = ves::quantile_nearest_rank(sorted, 0.75);
    } else {
        tstar["median"] = nullptr;
        tstar["q25"] = nullptr;
        tstar["q75"] = nullptr;
    }
    json summary{{"model_version", std::string(ves::model_version)},
                 {"rng", std::string(ves::rng::id)},
                 {"seed", res.seed},
                 {"n", res.n},
                 {"threads", o.threads},
                 {"scenario", scenario_json(o)},
                 {"sigma0_dist", dist_to_json(sigma0_spec)},
                 {"phi_dist", dist_to_json(phi_spec)},
                 {"quantiles", res.quantile_probs},
                 {"t_star_general", tstar}};

    if (o.format == "json") {
        summary["t"] = res.times;
        summary["share_mean"] = res.share_mean;
        json q = json::object();
        for (std::size_t i = 0; i < res.quantile_probs.size(); ++i)
            q["q" + ves::format_double(res.quantile_probs[i])] = res.share_quantiles[i];
        summary["share_quantiles"] = q;
        summary["x_mean"] = res.x_mean;
        summary["x_var"] = res.x_var;
        write_output(o.out, summary.dump(2) + "\n");
        return 0;
    }

    std::string csv = "t,share_mean";
    for (double p : res.quantile_probs) csv += ",q" + ves::format_double(p);
    csv += ",x_mean,x_var\n";
    for (std::size_t j = 0; j < res.times.size(); ++j) {
        csv += ves::format_double(res.times[j]);
        csv += ',' + ves::format_double(res.share_mean[j]);
        for (std::size_t q = 0; q < res.quantile_probs.size(); ++q)
            csv += ',' + ves::format_double(res.share_quantiles[q][j]);
        csv += ',' + ves::format_double(res.x_mean[j]);
        csv += ',' + ves::format_double(res.x_var[j]);
        csv += '\n';
    }
    write_output(o.out, csv);
    // Fan chart in the file, run metadata on stdout.
    if (!o.out.empty()) std::fputs((summary.dump(2) + "\n").c_str(), stdout);
    return 0;
}

int cmd_fit(const Options& o) {
    require_format(o, {"json"});
    if (o.observations.empty())
        throw std::invalid_argument("fit requires --observations FILE");
    std::ifstream f(o.observations, std::ios::binary);
    if (!f) throw IoError("cannot open observations '" + o.observations + "'");
    const std::vector<ves::Observation> obs = ves::read_observations_csv(f);

    const ves::FitResult res = ves::fit_scenario(obs, o.price0);
    json j{{"model_version", std::string(ves::model_version)},
           {"price0", o.price0},
           {"n_obs", res.n_obs},
           {"noise_model", "logit-gaussian"},
           {"coeffs", {{"a", res.coeffs.a}, {"b", res.coeffs.b}, {"c", res.coeffs.c}}},
           {"rss", res.rss}};
    if (res.structural) {
        j["structural"] = {{"alpha", res.structural->alpha},
                           {"d", res.structural->decay_d},
                           {"phi", res.structural->phi}};
    } else {
        j["structural"] = nullptr;
        j["infeasible_reason"] = res.infeasible_reason;
        std::fputs(("warning: " + res.infeasible_reason + "\n").c_str(), stderr);
    }
    write_output(o.out, j.dump(2) + "\n");
    return 0;
}

void add_common_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "JSON config; flags override its fields");
    cmd->add_option("--out", o.out, "output path (default: stdout)");
    cmd->add_option("--format", o.format, "csv|json|svg (command-dependent)");
}

void add_scenario_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--alpha", o.alpha, "preference weight, in (0,1)");
    cmd->add_option("--price0", o.price0, "initial price ratio, in (0,1)");
    cmd->add_option("--g", o.g, "compute growth rate per year");
    cmd->add_option("--d", o.d, "price decay rate per year");
    cmd->add_option("--delta", o.delta, "scaling sensitivity (phi = delta*g)");
    cmd->add_option("--sigma0", o.sigma0, "baseline elasticity (generalized model)");
    cmd->add_option("--k", o.k, "quality exponent, in (0,1]");
    cmd->add_option("--xi", o.xi, "price exponent, in (0,1]");
}

void add_grid_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--t-end", o.t_end, "horizon in years");
    cmd->add_option("--steps", o.steps, "grid points including both endpoints");
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"CES/VES market-share dynamics"};
    app.require_subcommand(1);

    CLI::App* simulate = app.add_subcommand("simulate", "trajectory of one scenario");
    add_common_options(simulate, o);
    add_scenario_options(simulate, o);
    add_grid_options(simulate, o);

    CLI::App* sweep = app.add_subcommand("sweep", "cross-product of scenario grids");
    add_common_options(sweep, o);
    add_scenario_options(sweep, o);
    add_grid_options(sweep, o);
    sweep->add_option("--sweep-g", o.sweep_g, "growth-rate grid")->delimiter(',');
    sweep->add_option("--sweep-d", o.sweep_d, "decay-rate grid")->delimiter(',');
    sweep->add_option("--sweep-delta", o.sweep_delta, "sensitivity grid")->delimiter(',');

    CLI::App* table1 = app.add_subcommand("table1", "canonical eight-scenario table");
    add_common_options(table1, o);

    CLI::App* phases = app.add_subcommand("phases", "phase boundaries and saturation");
    add_common_options(phases, o);
    add_scenario_options(phases, o);
    add_grid_options(phases, o);
    phases->add_option("--epsilon", o.epsilon, "saturation tolerance");
    phases->add_option("--sigma-tol", o.sigma_tol, "knife-edge window around sigma = 1");

    CLI::App* mc = app.add_subcommand("montecarlo", "propagate (sigma0, phi) uncertainty");
    add_common_options(mc, o);
    add_scenario_options(mc, o);
    add_grid_options(mc, o);
    mc->add_option("--seed", o.seed, "rng seed");
    mc->add_option("--n", o.n, "number of draws");
    mc->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    mc->add_option("--quantiles", o.quantiles, "fan probabilities")->delimiter(',');
    mc->add_option("--sigma0-dist", o.sigma0_dist,
                   "family:params, e.g. exponential:10 (default point:sigma0)");
    mc->add_option("--phi-dist", o.phi_dist,
                   "family:params, e.g. lognormal:-2.6,0.3 (default point:phi)");

    CLI::App* fit = app.add_subcommand("fit", "recover (alpha, d, phi) from observations");
    add_common_options(fit, o);
    fit->add_option("--observations", o.observations, "CSV with t and share columns");
    fit->add_option("--price0", o.price0, "known initial price ratio, in (0,1)");

    // Phases defaults to JSON, fit emits JSON only.
    phases->parse_complete_callback([&] {
        if (phases->get_option("--format")->count() == 0) o.format = "json";
    });
    fit->parse_complete_callback([&] {
        if (fit->get_option("--format")->count() == 0) o.format = "json";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        apply_config(active, o);
        if (active == simulate) return cmd_simulate(o);
        if (active == sweep) return cmd_sweep(o);
        if (active == table1) return cmd_table1(o);
        if (active == phases) return cmd_phases(o);
        if (active == mc) return cmd_montecarlo(o);
        if (active == fit) return cmd_fit(o);
        return 2;
    } catch (const IoError& e) {
        std::fputs((std::string("error: ") + e.what() + "\n").c_str(), stderr);
        return 3;
    } catch (const ves::CsvParseError& e) {
        std::fputs((std::string("error: ") + o.observations + ": " + e.what() + "\n").c_str(),
                   stderr);
        return 3;
    } catch (const json::exception& e) {
        std::fputs((std::string("config error: ") + e.what() + "\n").c_str(), stderr);
        return 2;
    } catch (const std::exception& e) {
        std::fputs((std::string("config error: ") + e.what() + "\n").c_str(), stderr);
        return 2;
    }
}
