// Batch CLI for the Rosen continued fraction toolkit.
//
// Exit codes: 0 success, 1 usage or domain errors (including a degenerate
// variance), 2 iteration caps hit before convergence, 3 a checked
// inequality failed.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rosen/io.hpp"
#include "rosen/rosen.hpp"

using nlohmann::json;

namespace {

struct Common {
    int q = 3;
    long bins = 4096;
    long a_max = 10000;
    std::uint64_t seed = 42;
    long n = 10000;
    long trials = 10000;
    std::string out;
    std::string format = "json";
    int workers = 1;
};

void emit(const Common& c, const json& j, const rosen::CsvBuilder& csv) {
    rosen::write_text(c.out, c.format == "csv" ? csv.str() : rosen::json_dump(j));
}

int run_expand(const Common& c, double x, long n_digits) {
    rosen::RosenParams p = rosen::make_params(c.q);
    rosen::Expansion e = rosen::expand(p, x, static_cast<int>(n_digits));
    json j;
    j["command"] = "expand";
    j["q"] = c.q;
    j["lambda"] = p.lambda;
    j["sigma"] = p.sigma;
    j["x"] = x;
    j["digits_requested"] = n_digits;
    json digits = json::array();
    for (const rosen::Digit& d : e.digits) digits.push_back({d.sign, d.a});
    j["digits"] = digits;
    j["orbit"] = e.orbit;
    double err = 0.0, cf = 0.0;
    if (!e.digits.empty()) {
        cf = rosen::evaluate_cf(p, e.digits);
        err = std::fabs(x - cf);
    }
    j["cf_value"] = cf;
    j["abs_err"] = err;
    j["reconstruction_bound"] =
        p.lambda * std::pow(p.sigma * p.sigma, static_cast<double>(e.digits.size()));

    rosen::CsvBuilder csv({"k", "sign", "a", "orbit"});
    for (std::size_t k = 0; k < e.orbit.size(); ++k) {
        std::vector<std::string> cells(4);
        cells[0] = std::to_string(k);
        if (k < e.digits.size()) {
            cells[1] = std::to_string(e.digits[k].sign);
            cells[2] = std::to_string(e.digits[k].a);
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", e.orbit[k]);
        cells[3] = buf;
        csv.raw_row(cells);
    }
    emit(c, j, csv);
    return 0;
}

int run_density(const Common& c, double tol) {
    rosen::RosenParams p = rosen::make_params(c.q);
    rosen::UlamOperator U = rosen::build_ulam(p, c.bins, c.a_max);
    rosen::DensityResult dens = rosen::invariant_density(U, tol);
    rosen::SpectralReport spec = rosen::spectral_gap(U, dens, c.seed);
    json j;
    j["command"] = "density";
    j["q"] = c.q;
    j["bins"] = c.bins;
    j["a_max"] = c.a_max;
    j["residual"] = dens.residual;
    j["iterations"] = dens.iterations;
    j["lambda2_abs"] = spec.lambda2_abs;
    j["spectral_gap"] = spec.gap;
    j["lambda2_method"] = spec.method;
    j["lambda2_iterations"] = spec.iterations;
    json centers = json::array(), vals = json::array();
    for (long i = 0; i < U.n; ++i) {
        centers.push_back(U.bin_center(i));
        vals.push_back(dens.density[static_cast<std::size_t>(i)]);
    }
    j["bin_centers"] = centers;
    j["density"] = vals;

    rosen::CsvBuilder csv({"center", "density"});
    for (long i = 0; i < U.n; ++i)
        csv.row({U.bin_center(i), dens.density[static_cast<std::size_t>(i)]});
    emit(c, j, csv);
    return 0;
}

int run_ly(const Common& c, long samples, long pieces, long grid, long a_expl) {
    rosen::RosenParams p = rosen::make_params(c.q);
    rosen::LYConstants consts = rosen::ly_constants(p);
    std::vector<rosen::LYReport> reports(static_cast<std::size_t>(samples));
    rosen::parallel_for(samples, c.workers, [&](long i) {
        rosen::Stream rng(c.seed, 1000 + static_cast<std::uint64_t>(i));
        rosen::PiecewiseFn f = rosen::random_staircase(p, rng, static_cast<int>(pieces));
        reports[static_cast<std::size_t>(i)] = rosen::ly_check(p, f, grid, a_expl);
    });
    bool all_hold = true;
    double worst_margin = 1e300;
    for (const auto& r : reports) {
        all_hold = all_hold && r.holds;
        worst_margin = std::min(worst_margin, r.rhs + r.budget - r.lhs_var);
    }
    json j;
    j["command"] = "ly";
    j["q"] = c.q;
    j["samples"] = samples;
    j["pieces"] = pieces;
    j["grid"] = grid;
    j["constants"] = {{"k", consts.k},     {"rho", consts.rho}, {"slope", consts.slope},
                      {"M0", consts.M0},   {"M", consts.M},     {"C", consts.C},
                      {"D", consts.D},     {"eps", consts.eps}};
    j["all_hold"] = all_hold;
    j["worst_margin"] = worst_margin;
    json arr = json::array();
    for (const auto& r : reports)
        arr.push_back({{"var_f", r.var_f},
                       {"l1_f", r.l1_f},
                       {"lhs_var", r.lhs_var},
                       {"rhs", r.rhs},
                       {"budget", r.budget},
                       {"holds", r.holds}});
    j["checks"] = arr;

    rosen::CsvBuilder csv({"sample", "var_f", "l1_f", "lhs_var", "rhs", "budget", "holds"});
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        csv.row({static_cast<double>(i), r.var_f, r.l1_f, r.lhs_var, r.rhs, r.budget,
                 r.holds ? 1.0 : 0.0});
    }
    emit(c, j, csv);
    if (!all_hold) {
        std::cerr << "ly: variation inequality violated on " << samples << " samples\n";
        return 3;
    }
    return 0;
}

int run_mixing(const Common& c, double lo, double hi, long count, double min_len,
               long n_cap) {
    rosen::RosenParams p = rosen::make_params(c.q);
    std::vector<rosen::Interval> intervals;
    if (!std::isnan(lo) || !std::isnan(hi)) {
        if (std::isnan(lo) || std::isnan(hi))
            throw std::invalid_argument("mixing: give both --lo and --hi or neither");
        intervals.push_back({lo, hi});
    } else {
        rosen::Stream rng(c.seed, 3000);
        for (long i = 0; i < count; ++i) {
            double len = min_len * std::pow(10.0, rng.uniform(0.0, 2.0));
            len = std::min(len, p.lambda / 4.0);
            double a = rng.uniform(-p.sigma, p.sigma - len);
            intervals.push_back({a, a + len});
        }
    }
    json arr = json::array();
    rosen::CsvBuilder csv({"interval", "step", "state_lo", "state_hi", "kind", "bad",
                           "ratio_raw", "ratio_folded"});
    long max_steps = 0;
    double min_ratio = 1e300;
    for (std::size_t idx = 0; idx < intervals.size(); ++idx) {
        rosen::MixingTrace tr = rosen::iterate_until_full(p, intervals[idx], n_cap);
        rosen::GrowthReport gr = rosen::growth_factor_check(p, tr);
        max_steps = std::max(max_steps, tr.steps_to_full);
        min_ratio = std::min(min_ratio, gr.min_ratio);
        json steps = json::array();
        for (std::size_t s = 0; s < tr.steps.size(); ++s) {
            const rosen::MixingStep& st = tr.steps[s];
            steps.push_back({{"state_lo", st.state.lo},
                             {"state_hi", st.state.hi},
                             {"kind", rosen::step_kind_name(st.kind)},
                             {"bad", st.bad == rosen::BadType::none
                                         ? "none"
                                         : (st.bad == rosen::BadType::type_c ? "c" : "d")},
                             {"ratio_raw", st.ratio_raw},
                             {"ratio_folded", st.ratio_folded}});
            csv.raw_row({std::to_string(idx), std::to_string(s),
                         std::to_string(st.state.lo), std::to_string(st.state.hi),
                         rosen::step_kind_name(st.kind),
                         st.bad == rosen::BadType::none
                             ? "none"
                             : (st.bad == rosen::BadType::type_c ? "c" : "d"),
                         std::to_string(st.ratio_raw), std::to_string(st.ratio_folded)});
        }
        arr.push_back({{"lo", intervals[idx].lo},
                       {"hi", intervals[idx].hi},
                       {"steps_to_full", tr.steps_to_full},
                       {"steps", steps},
                       {"growth",
                        {{"min_ratio", gr.min_ratio},
                         {"min_single_ratio", gr.min_single_ratio},
                         {"min_bad_folded", gr.min_bad_folded},
                         {"single_bound", gr.single_bound},
                         {"bad_bound", gr.bad_bound},
                         {"bounds_ok", gr.ok}}}});
    }
    json j;
    j["command"] = "mixing";
    j["q"] = c.q;
    j["n_cap"] = n_cap;
    j["epsilon_star"] = rosen::epsilon_star(p);
    j["intervals"] = arr;
    j["max_steps_to_full"] = max_steps;
    j["min_folded_ratio"] = min_ratio;
    emit(c, j, csv);
    return 0;
}

int run_clt(const Common& c, const std::string& cost_name, double cap, double ind_lo,
            double ind_hi, double scale, bool condition_h) {
    rosen::RosenParams p = rosen::make_params(c.q);
    rosen::Cost cost;
    if (cost_name == "digit-capped")
        cost.kind = rosen::CostKind::digit_capped;
    else if (cost_name == "constant")
        cost.kind = rosen::CostKind::constant;
    else if (cost_name == "indicator")
        cost.kind = rosen::CostKind::indicator;
    else if (cost_name == "coboundary")
        cost.kind = rosen::CostKind::coboundary;
    else if (cost_name == "const-except-leftmost")
        cost.kind = rosen::CostKind::const_except_leftmost;
    else
        throw std::invalid_argument("clt: unknown cost " + cost_name);
    cost.cap = cap;
    cost.box = {ind_lo, ind_hi};
    cost.scale = scale;

    rosen::UlamOperator U = rosen::build_ulam(p, c.bins, c.a_max);
    rosen::DensityResult dens = rosen::invariant_density(U);

    if (condition_h) {
        rosen::ConditionHReport rep =
            rosen::condition_h_check(p, cost, U, dens, 2000, 2000, c.seed);
        json j;
        j["command"] = "clt";
        j["mode"] = "condition-h";
        j["q"] = c.q;
        j["cost"] = cost.name();
        j["label"] = rep.label;
        j["mean_hat"] = rep.mean_hat;
        j["sigma2_batch"] = rep.sigma2_batch;
        j["degenerate_threshold"] = rep.threshold;
        json ws = json::array();
        for (const auto& w : rep.witnesses)
            ws.push_back({{"sign", w.digit.sign},
                          {"a", w.digit.a},
                          {"x", w.x},
                          {"f_value", w.f_value},
                          {"diff", w.diff},
                          {"clearance", w.clearance},
                          {"clear", w.clear}});
        j["witnesses"] = ws;
        rosen::CsvBuilder csv({"sign", "a", "x", "f_value", "diff", "clearance", "clear"});
        for (const auto& w : rep.witnesses)
            csv.row({static_cast<double>(w.digit.sign), static_cast<double>(w.digit.a), w.x,
                     w.f_value, w.diff, w.clearance, w.clear ? 1.0 : 0.0});
        emit(c, j, csv);
        return 0;
    }

    rosen::CltReport rep =
        rosen::clt_experiment(p, cost, U, dens, c.n, c.trials, c.seed, c.workers);
    json j;
    j["command"] = "clt";
    j["mode"] = "experiment";
    j["q"] = c.q;
    j["cost"] = cost.name();
    j["n"] = rep.n_steps;
    j["trials"] = rep.trials;
    j["seed"] = c.seed;
    j["mean_hat"] = rep.mean_hat;
    j["step_var_hat"] = rep.step_var_hat;
    j["sigma2_batch"] = rep.sigma2_batch;
    j["sigma2_acv"] = rep.sigma2_acv;
    j["degenerate_threshold"] = rep.degenerate_threshold;
    j["ks_d"] = rep.ks_d;
    j["ks_p"] = rep.ks_p;
    j["discarded"] = rep.discarded;
    rosen::CsvBuilder csv({"trial", "standardized"});
    for (std::size_t i = 0; i < rep.standardized.size(); ++i)
        csv.row({static_cast<double>(i), rep.standardized[i]});
    emit(c, j, csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for Rosen continued fractions"};
    app.require_subcommand(1);
    Common c;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--q", c.q, "index q of the map, q >= 3")->capture_default_str();
        cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
        cmd->add_option("--out", c.out, "output path (default stdout)");
        cmd->add_option("--format", c.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        cmd->add_option("--workers", c.workers, "worker threads")->capture_default_str();
    };

    CLI::App* expand_cmd = app.add_subcommand("expand", "digit expansion of a point");
    double x_in = 0.0;
    long n_digits = 25;
    expand_cmd->add_option("--x", x_in, "point to expand")->required();
    expand_cmd->add_option("--n", n_digits, "number of digits")->capture_default_str();
    add_common(expand_cmd);

    CLI::App* density_cmd =
        app.add_subcommand("density", "invariant density and spectral data");
    double tol = 1e-10;
    density_cmd->add_option("--bins", c.bins, "Ulam bins (even)")->capture_default_str();
    density_cmd->add_option("--a-max", c.a_max, "digit truncation")->capture_default_str();
    density_cmd->add_option("--tol", tol, "power iteration residual target")
        ->capture_default_str();
    add_common(density_cmd);

    CLI::App* ly_cmd = app.add_subcommand("ly", "variation inequality spot checks");
    long samples = 100, pieces = 10, grid = 1 << 16, a_expl = 128;
    ly_cmd->add_option("--samples", samples, "random staircases")->capture_default_str();
    ly_cmd->add_option("--pieces", pieces, "pieces per staircase")->capture_default_str();
    ly_cmd->add_option("--grid", grid, "grid for iterated transfer values")
        ->capture_default_str();
    ly_cmd->add_option("--a-expl", a_expl, "explicit branches in iterated applications")
        ->capture_default_str();
    add_common(ly_cmd);

    CLI::App* mixing_cmd = app.add_subcommand("mixing", "interval image iteration");
    double mix_lo = std::nan(""), mix_hi = std::nan("");
    long count = 1, n_cap = 1000;
    double min_len = 1e-4;
    mixing_cmd->add_option("--lo", mix_lo, "interval left endpoint");
    mixing_cmd->add_option("--hi", mix_hi, "interval right endpoint");
    mixing_cmd->add_option("--count", count, "random intervals when --lo/--hi absent")
        ->capture_default_str();
    mixing_cmd->add_option("--min-len", min_len, "shortest random interval")
        ->capture_default_str();
    mixing_cmd->add_option("--n-cap", n_cap, "iteration cap")->capture_default_str();
    add_common(mixing_cmd);

    CLI::App* clt_cmd = app.add_subcommand("clt", "Birkhoff sum CLT experiment");
    std::string cost_name = "digit-capped";
    double cap = 5.0, ind_lo = 0.1, ind_hi = 0.3;
    bool condition_h = false;
    clt_cmd->add_option("--n", c.n, "orbit length per trial")->capture_default_str();
    clt_cmd->add_option("--trials", c.trials, "independent trials")->capture_default_str();
    clt_cmd->add_option("--bins", c.bins, "Ulam bins for the initial law")
        ->capture_default_str();
    clt_cmd->add_option("--a-max", c.a_max, "digit truncation")->capture_default_str();
    clt_cmd
        ->add_option("--cost", cost_name,
                     "digit-capped | constant | indicator | coboundary | "
                     "const-except-leftmost")
        ->capture_default_str();
    clt_cmd->add_option("--cap", cap, "digit cap for digit-capped")->capture_default_str();
    clt_cmd->add_option("--ind-lo", ind_lo, "indicator support left")->capture_default_str();
    clt_cmd->add_option("--ind-hi", ind_hi, "indicator support right")
        ->capture_default_str();
    double scale = 1.0;
    clt_cmd->add_option("--scale", scale, "multiplies the observable")
        ->capture_default_str();
    clt_cmd->add_flag("--condition-h", condition_h, "fixed point coboundary check");
    add_common(clt_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (expand_cmd->parsed()) return run_expand(c, x_in, n_digits);
        if (density_cmd->parsed()) return run_density(c, tol);
        if (ly_cmd->parsed()) return run_ly(c, samples, pieces, grid, a_expl);
        if (mixing_cmd->parsed()) return run_mixing(c, mix_lo, mix_hi, count, min_len, n_cap);
        if (clt_cmd->parsed())
            return run_clt(c, cost_name, cap, ind_lo, ind_hi, scale, condition_h);
    } catch (const rosen::degenerate_variance_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const rosen::theorem_violation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const rosen::convergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
