#include "tollbound/cli.hpp"

#include "tollbound/equilibrium.hpp"
#include "tollbound/numerics.hpp"
#include "tollbound/text_format.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tollbound {

namespace {

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width)
        s.append(width - s.size(), ' ');
    return s;
}

std::string table_row(const std::string& cell, const std::string& info, const std::string& policy,
                      double bound)
{
    return pad(cell, 6) + pad(info, 30) + pad(policy, 42) + format_fixed(bound, 4) + "\n";
}

void write_output(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::invalid_argument("cannot open output file '" + path + "'");
    f << text;
}

std::string optional_line(const char* name, const std::optional<double>& v)
{
    return v ? std::string(name) + " = " + format_significant(*v, 12) + "\n" : std::string();
}

} // namespace

std::string cmd_table(const SensitivityBounds& bounds)
{
    // Only scale-free quantities are printed (k sL, sbar/sL), so bounds that
    // differ by a common factor print the same table.
    const double sl = bounds.lower();
    const double ka = k_regime_A(bounds).value();
    const WorstMean wb = worst_case_over_mean(bounds, Regime::B);
    const WorstMean wd = worst_case_over_mean(bounds, Regime::D);
    const double kb = k_regime_B(bounds, wb.sbar).value();

    std::string out = "price-of-anarchy guarantees, sU/sL = " + format_fixed(bounds.spread(), 4) + "\n";
    out += pad("cell", 6) + pad("information", 30) + pad("toll", 42) + "PoA\n";
    out += table_row("-", "untolled", "k = 0", 4.0 / 3.0);
    out += table_row("A", "network-, mean-agnostic", "k sL = " + format_fixed(ka * sl, 4),
                     poa_bound_A(bounds));
    out += table_row("B", "network-agnostic, mean-aware",
                     "worst sbar/sL = " + format_fixed(wb.sbar / sl, 4) +
                         ", k sL = " + format_fixed(kb * sl, 4),
                     wb.bound);
    out += table_row("C", "network-aware, mean-agnostic", "k sqrt(sL sU) = 1, or k = 0",
                     poa_bound_C(bounds));
    out += table_row("D", "network-, mean-aware",
                     "worst sbar/sL = " + format_fixed(wd.sbar / sl, 4) + ", k fixed point",
                     wd.bound);
    return out;
}

std::string cmd_sweep(const SensitivityBounds& bounds, int n_points)
{
    if (n_points < 2)
        throw std::invalid_argument("--points must be at least 2");
    const double a = poa_bound_A(bounds);
    const double c = poa_bound_C(bounds);
    std::string out = "sbar,bound_A,bound_B,bound_C,bound_D\n";
    for (int i = 0; i < n_points; ++i) {
        const double s = i == n_points - 1
                             ? bounds.upper()
                             : bounds.lower() + (bounds.upper() - bounds.lower()) * i / (n_points - 1);
        out += format_fixed(s, 6) + "," + format_fixed(a, 6) + "," +
               format_fixed(poa_bound_B(bounds, s), 6) + "," + format_fixed(c, 6) + "," +
               format_fixed(poa_bound_D(bounds, s), 6) + "\n";
    }
    return out;
}

std::string cmd_toll(Regime regime, const SensitivityBounds& bounds, std::optional<double> sbar,
                     std::optional<Network> network)
{
    const RegimeResult r = design_toll(regime, bounds, sbar, network);
    const Diagnostics& d = r.diagnostics;
    std::string out = std::string("regime ") + regime_letter(regime) + "\n";
    out += "k = " + format_significant(r.k.value(), 12) + "\n";
    out += "poa_bound = " + format_significant(r.poa_bound, 12) + "\n";
    out += optional_line("R", d.R);
    out += optional_line("alpha", d.alpha);
    out += optional_line("beta", d.beta);
    out += optional_line("gamma", d.gamma);
    out += optional_line("k_avg_residual", d.k_avg_residual);
    if (d.iterations)
        out += "fixed_point_iterations = " + std::to_string(*d.iterations) + "\n";
    out += optional_line("S_l1", d.s_l1);
    out += optional_line("S_u2", d.s_u2);
    return out;
}

std::string cmd_nash(const Network& input, const SensitivityDistribution& dist, TollScale k)
{
    const Network net = normalize(input);
    const NashOutcome nash = nash_flow(net, dist, k);
    const Flow& f = nash.flow;
    std::string out;
    if (!(net == input))
        out += "note: links swapped so that b1 <= b2\n";
    out += "flow = (" + format_significant(f.first(), 12) + ", " + format_significant(f.second(), 12) + ")\n";
    for (const Edge e : {Edge::first, Edge::second}) {
        const std::string id = e == Edge::first ? "1" : "2";
        out += "link " + id + ": latency " + format_significant(net.edge(e)(f.on(e)), 12) +
               ", toll " + format_significant(k.toll(net.edge(e), f.on(e)), 12) + "\n";
    }
    out += "S_ind = " + (nash.indifferent ? format_significant(*nash.indifferent, 12) : std::string("none")) + "\n";
    out += "total_latency = " + format_significant(total_latency(net, f), 12) + "\n";
    out += "optimal_latency = " + format_significant(optimal_latency(net), 12) + "\n";
    out += "poa = " + format_fixed(price_of_anarchy(net, f), 4) + "\n";
    return out;
}

AdversaryOutput cmd_adversary(Regime regime, const SensitivityBounds& bounds,
                              std::optional<double> sbar, const GridSpec& grid)
{
    if (needs_mean(regime) && !sbar)
        throw std::invalid_argument(std::string("regime ") + regime_letter(regime) + " requires --sbar");
    if (!needs_mean(regime))
        sbar.reset();
    AdversaryOutput o{empirical_poa_regime(regime, bounds, sbar, grid), false, false, {}, {}};
    const AdversaryReport& r = o.report;
    o.sound = r.empirical_poa <= r.theoretical_bound + soundness_tolerance;
    o.tight = r.empirical_poa >= r.theoretical_bound - tightness_tolerance;
    o.csv = AdversaryReport::csv_header() + "\n" + r.csv_row() + "\n";
    std::ostringstream s;
    s << "regime " << regime_letter(regime) << ": bound " << format_fixed(r.theoretical_bound, 6)
      << ", empirical " << format_fixed(r.empirical_poa, 6) << " (gamma " << format_fixed(r.gamma_witness, 6)
      << ", types " << format_fixed(r.s1, 6) << "/" << format_fixed(r.s2, 6) << ", mass1 "
      << format_fixed(r.mass1, 6) << ", " << r.evaluations << " evaluations)\n";
    s << "soundness " << (o.sound ? "PASS" : "FAIL") << "\n";
    s << "tightness " << (o.tight ? "PASS" : "FAIL") << "\n";
    o.summary = s.str();
    return o;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Scaled marginal-cost tolls and price-of-anarchy bounds on two-link networks"};
    app.require_subcommand(1);

    double sl = 1.0;
    double su = 10.0;
    std::optional<double> sbar;
    std::string regime_text;
    std::string network_text;
    std::string dist_text;
    double k = 0.0;
    int points = 101;
    GridSpec grid;
    std::string out_path;
    std::uint64_t seed = default_seed;
    int lemma_samples = 0;

    auto add_bounds = [&](CLI::App* sub) {
        sub->add_option("--sl", sl, "lower sensitivity bound")->capture_default_str();
        sub->add_option("--su", su, "upper sensitivity bound")->capture_default_str();
    };

    CLI::App* table = app.add_subcommand("table", "guarantees of the four information regimes");
    add_bounds(table);

    CLI::App* sweep = app.add_subcommand("sweep", "bounds as a function of the mean sensitivity (CSV)");
    add_bounds(sweep);
    sweep->add_option("--points", points, "number of sbar samples")->capture_default_str();
    sweep->add_option("--out", out_path, "write CSV here instead of stdout");

    CLI::App* toll = app.add_subcommand("toll", "optimal toll scale for one regime");
    add_bounds(toll);
    toll->add_option("--regime", regime_text, "A, B, C or D")->required();
    toll->add_option("--sbar", sbar, "mean sensitivity (B, D)");
    toll->add_option("--network", network_text, "\"a1,b1,a2,b2\" (C, D)");

    CLI::App* nash = app.add_subcommand("nash", "Nash flow for a network and distribution");
    nash->add_option("--network", network_text, "\"a1,b1,a2,b2\"")->required();
    nash->add_option("--dist", dist_text, "\"s:mass;...\"")->required();
    nash->add_option("--k", k, "toll scale")->required();

    CLI::App* adv = app.add_subcommand("adversary", "brute-force worst case against the bound");
    add_bounds(adv);
    adv->add_option("--regime", regime_text, "A, B, C or D")->required();
    adv->add_option("--sbar", sbar, "mean sensitivity (B, D)");
    adv->add_option("--grid-gamma", grid.n_gamma, "linear-constant networks")->capture_default_str();
    adv->add_option("--grid-types", grid.n_types, "sensitivity grid points")->capture_default_str();
    adv->add_option("--grid-mass", grid.n_mass, "mass splits")->capture_default_str();
    adv->add_option("--out", out_path, "write the report CSV here instead of stdout");
    adv->add_option("--lemma-samples", lemma_samples, "also run randomized lemma checks")
        ->capture_default_str();
    adv->add_option("--seed", seed, "seed for the lemma checks")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        const SensitivityBounds bounds(sl, su);
        if (*table) {
            out << cmd_table(bounds);
        } else if (*sweep) {
            write_output(cmd_sweep(bounds, points), out_path, out);
        } else if (*toll) {
            const Regime r = parse_regime(regime_text);
            std::optional<Network> net;
            if (!network_text.empty())
                net = parse_network(network_text);
            if (needs_mean(r) && !sbar)
                throw std::invalid_argument(std::string("regime ") + regime_letter(r) + " requires --sbar");
            if (needs_network(r) && !net)
                throw std::invalid_argument(std::string("regime ") + regime_letter(r) + " requires --network");
            out << cmd_toll(r, bounds, sbar, net);
        } else if (*nash) {
            out << cmd_nash(parse_network(network_text), parse_distribution(dist_text), TollScale(k));
        } else if (*adv) {
            const Regime r = parse_regime(regime_text);
            const AdversaryOutput o = cmd_adversary(r, bounds, sbar, grid);
            write_output(o.csv, out_path, out);
            out << o.summary;
            if (lemma_samples > 0) {
                const double s = needs_mean(r) ? *sbar : 0.5 * (sl + su);
                const LemmaReport lr = lemma_checks(bounds, s, o.report.k_witness, lemma_samples, seed);
                out << "lemma checks (seed " << lr.seed << ", " << lr.samples << " samples, k "
                    << format_significant(o.report.k_witness, 12) << "): bimodal " << lr.bimodal_failures
                    << ", reduction " << lr.glc_failures << ", extremal " << lr.extremal_failures
                    << " counterexamples\n";
                if (lr.first_counterexample)
                    out << "first counterexample: " << *lr.first_counterexample << "\n";
            }
        }
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const DegenerateNetwork& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_ok;
}

} // namespace tollbound
