// Command-line front end: evolve a two-qubit state under a damping reservoir,
// report disentanglement times, simulate the two read-out protocols, and run
// the built-in oracle suite. Emits deterministic CSV/JSON.

#include <array>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "esd/esd.hpp"

namespace {

struct StateFlags {
    double alpha2 = -1.0;
    double beta2 = -1.0;
    double c0 = -1.0;
    std::string branch = "finite";
    double theta = 0.0;

    void add_to(CLI::App* cmd) {
        auto* a = cmd->add_option("--alpha2", alpha2, "population of |00> (normalized with beta2)");
        auto* b = cmd->add_option("--beta2", beta2, "population of |11>");
        auto* c = cmd->add_option(
            "--c0", c0, "initial concurrence; populations solve 2 sqrt(p(1-p)) = c0");
        cmd->add_option("--branch", branch,
                        "which c0 root to use: finite (|beta|>|alpha|) or asymptotic")
            ->check(CLI::IsMember({"finite", "asymptotic"}));
        cmd->add_option("--theta", theta, "preparation phase (radians)");
        c->excludes(a);
        c->excludes(b);
    }

    esd::InitialState resolve() const {
        double a2;
        if (c0 >= 0.0) {
            if (c0 > 1.0) throw esd::InvalidParams("--c0 must lie in [0, 1]");
            const double disc = std::sqrt(1.0 - c0 * c0);
            a2 = branch == "finite" ? (1.0 - disc) / 2.0 : (1.0 + disc) / 2.0;
        } else if (alpha2 >= 0.0 && beta2 >= 0.0) {
            const double total = alpha2 + beta2;
            if (total <= 0.0) throw esd::InvalidParams("--alpha2 + --beta2 must be positive");
            a2 = alpha2 / total;
        } else if (alpha2 >= 0.0) {
            a2 = alpha2;
        } else if (beta2 >= 0.0) {
            a2 = 1.0 - beta2;
        } else {
            a2 = 0.5;
        }
        if (a2 < 0.0 || a2 > 1.0) throw esd::InvalidParams("populations must lie in [0, 1]");
        return esd::InitialState{std::sqrt(a2), std::sqrt(1.0 - a2), theta};
    }
};

struct Row {
    std::vector<std::string> cells;
};

void emit_table(const std::vector<std::string>& header, const std::vector<Row>& rows,
                const std::string& out_path, const std::string& format) {
    std::ostringstream text;
    if (format == "csv") {
        for (std::size_t i = 0; i < header.size(); ++i) {
            text << (i ? "," : "") << header[i];
        }
        text << "\n";
        for (const Row& r : rows) {
            for (std::size_t i = 0; i < r.cells.size(); ++i) {
                text << (i ? "," : "") << r.cells[i];
            }
            text << "\n";
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const Row& r : rows) {
            nlohmann::json obj;
            for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = r.cells[i];
            arr.push_back(obj);
        }
        text << arr.dump(2) << "\n";
    }
    if (out_path.empty()) {
        std::cout << text.str();
    } else {
        esd::write_text_file(out_path, text.str());
    }
}

int cmd_evolve(const StateFlags& state, double gamma, double tmax, int samples,
               const std::string& reservoir, const std::string& out_path,
               const std::string& format, const std::string& dump_final) {
    const esd::InitialState s0 = state.resolve();
    const esd::XStateParams p0 = esd::initial_state_xparams(s0);

    std::optional<esd::EvolutionResult> numeric;
    if (reservoir == "diffusive") {
        numeric = esd::integrate(esd::initial_state_density(s0), esd::diffusive_reservoir(gamma),
                                 tmax, 1e-3 / gamma);
    }

    const std::vector<std::string> header{"tau", "w", "x", "y", "|z|", "P", "C", "W"};
    std::vector<Row> rows;
    rows.reserve(static_cast<std::size_t>(samples));
    std::optional<esd::DensityMatrix> last_state;
    for (int k = 0; k < samples; ++k) {
        const double t = tmax * k / (samples - 1);
        const double tau = gamma * t;
        esd::XStateParams p;
        esd::DensityMatrix rho = [&] {
            if (numeric) {
                const auto idx = static_cast<std::size_t>(
                    std::min<double>(std::round(t / (1e-3 / gamma)),
                                     static_cast<double>(numeric->states.size() - 1)));
                return numeric->states[idx];
            }
            return esd::xstate_to_density(esd::evolve_analytic(p0, gamma, t));
        }();
        p = esd::density_to_xstate(rho);
        const double prob = esd::probability_phi(rho, state.theta);
        const double conc = esd::concurrence(rho);
        Row r;
        r.cells = {esd::format_number(tau),          esd::format_number(p.w),
                   esd::format_number(p.x),          esd::format_number(p.y),
                   esd::format_number(std::abs(p.z)), esd::format_number(prob),
                   esd::format_number(conc),         esd::format_number(1.0 - 2.0 * prob)};
        rows.push_back(std::move(r));
        last_state = std::move(rho);
    }
    emit_table(header, rows, out_path, format);
    if (!dump_final.empty() && last_state) {
        esd::write_text_file(dump_final, esd::density_matrix_to_json(*last_state).dump(2) + "\n");
    }
    return 0;
}

int cmd_ts(const StateFlags& state, double gamma) {
    const esd::InitialState s0 = state.resolve();
    std::optional<double> formula;
    try {
        formula = esd::disentanglement_time(s0, gamma);
    } catch (const esd::NotEntangledInitially&) {
        std::cout << "verdict: NotEntangledInitially (alpha or beta vanishes, C(0) = 0)\n";
        return 0;
    }
    const std::optional<double> oracle = esd::disentanglement_time_bisection(s0, gamma);
    if (!formula) {
        std::cout << "verdict: Asymptotic (|alpha| >= |beta|, no finite separation time)\n";
        std::cout << "bisection: " << (oracle ? esd::format_number(*oracle) : "Asymptotic")
                  << "\n";
        return 0;
    }
    std::cout << "verdict: FiniteTime\n";
    std::cout << "t_s: " << esd::format_number(*formula) << "\n";
    std::cout << "bisection: " << (oracle ? esd::format_number(*oracle) : "Asymptotic") << "\n";
    if (oracle) {
        std::cout << "difference: " << esd::format_number(std::abs(*formula - *oracle)) << "\n";
    }
    return 0;
}

int cmd_protocol(const StateFlags& state, double gamma, double tmax, int samples,
                 const std::string& kind, std::vector<double> deltas, bool invert,
                 const std::string& out_path, const std::string& format) {
    const esd::InitialState s0 = state.resolve();
    const esd::XStateParams p0 = esd::initial_state_xparams(s0);
    const bool auto_delta = deltas.empty();
    if (auto_delta) deltas.push_back(esd::choose_delta(state.theta));
    if (invert && deltas.size() < 3) {
        throw esd::InvalidParams("--invert needs at least three --delta values");
    }

    auto run = [&](const esd::XStateParams& p, double delta) {
        return kind == "ion" ? esd::ion_protocol(p, state.theta, delta)
                             : esd::cavity_measure(p, state.theta, delta);
    };

    std::vector<std::string> header;
    std::vector<Row> rows;
    if (invert) {
        header = {"tau", "x", "|z|", "theta"};
    } else {
        header = {"tau", "delta", "probability", "eta_scaled_concurrence", "true_concurrence"};
    }
    for (int k = 0; k < samples; ++k) {
        const double t = tmax * k / (samples - 1);
        const double tau = gamma * t;
        const esd::XStateParams p = esd::evolve_analytic(p0, gamma, t);
        if (invert) {
            const std::array<esd::ProtocolOutcome, 3> readings{run(p, deltas[0]),
                                                               run(p, deltas[1]),
                                                               run(p, deltas[2])};
            const esd::InversionResult inv = esd::three_phase_inversion(readings);
            Row r;
            r.cells = {esd::format_number(tau), esd::format_number(inv.x),
                       esd::format_number(inv.z_mag), esd::format_number(inv.theta)};
            rows.push_back(std::move(r));
        } else {
            const double conc = esd::concurrence(esd::xstate_to_density(p));
            for (double delta : deltas) {
                const esd::ProtocolOutcome o = run(p, delta);
                const double eta_scaled =
                    std::max(0.0, (2.0 * o.probability - 1.0) / o.eta);
                Row r;
                r.cells = {esd::format_number(tau), esd::format_number(o.delta),
                           esd::format_number(o.probability), esd::format_number(eta_scaled),
                           esd::format_number(conc)};
                rows.push_back(std::move(r));
            }
        }
    }
    emit_table(header, rows, out_path, format);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit disentanglement toolkit"};
    app.require_subcommand(1);

    // evolve
    auto* evolve = app.add_subcommand("evolve", "evolve an initial state and emit (tau, w, x, y, "
                                                "|z|, P, C, W) rows");
    StateFlags evolve_state;
    evolve_state.add_to(evolve);
    double gamma = 1.0, tmax = 3.0;
    int samples = 501;
    std::string reservoir = "amplitude", out_path, format = "csv", dump_final;
    evolve->add_option("--gamma", gamma, "decay rate (1/time)")->check(CLI::PositiveNumber);
    evolve->add_option("--tmax", tmax, "final time; the tau column is gamma*t")
        ->check(CLI::PositiveNumber);
    evolve->add_option("--samples", samples, "number of rows")->check(CLI::Range(2, 1000000));
    evolve->add_option("--reservoir", reservoir, "amplitude (analytic) or diffusive (integrated)")
        ->check(CLI::IsMember({"amplitude", "diffusive"}));
    evolve->add_option("--out", out_path, "output path (stdout if omitted)");
    evolve->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    evolve->add_option("--dump-final", dump_final, "write the final density matrix as JSON here");

    // ts
    auto* ts = app.add_subcommand("ts", "report the disentanglement-time verdict and t_s");
    StateFlags ts_state;
    ts_state.add_to(ts);
    double ts_gamma = 1.0;
    ts->add_option("--gamma", ts_gamma, "decay rate (1/time)")->check(CLI::PositiveNumber);

    // protocol
    auto* protocol = app.add_subcommand("protocol", "simulate a read-out protocol over time");
    StateFlags protocol_state;
    protocol_state.add_to(protocol);
    double pr_gamma = 1.0, pr_tmax = 3.0;
    int pr_samples = 501;
    std::string kind, pr_out, pr_format = "csv";
    std::vector<double> deltas;
    bool invert = false;
    protocol->add_option("--kind", kind, "ion or cavity")
        ->check(CLI::IsMember({"ion", "cavity"}))
        ->required();
    protocol->add_option("--gamma", pr_gamma, "decay rate (1/time)")->check(CLI::PositiveNumber);
    protocol->add_option("--tmax", pr_tmax, "final time")->check(CLI::PositiveNumber);
    protocol->add_option("--samples", pr_samples, "number of time samples")
        ->check(CLI::Range(2, 1000000));
    protocol->add_option("--delta", deltas,
                         "control phases; defaults to choose_delta(theta) when omitted");
    protocol->add_flag("--invert", invert,
                       "recover (x, |z|, theta) from the first three deltas per time sample");
    protocol->add_option("--out", pr_out, "output path (stdout if omitted)");
    protocol->add_option("--format", pr_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run the full oracle suite");
    std::optional<double> corrupt_eta;
    selftest
        ->add_option("--corrupt-eta", corrupt_eta,
                     "test hook: override the eta constant the protocol suite checks against")
        ->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (evolve->parsed()) {
            return cmd_evolve(evolve_state, gamma, tmax, samples, reservoir, out_path, format,
                              dump_final);
        }
        if (ts->parsed()) return cmd_ts(ts_state, ts_gamma);
        if (protocol->parsed()) {
            return cmd_protocol(protocol_state, pr_gamma, pr_tmax, pr_samples, kind, deltas,
                                invert, pr_out, pr_format);
        }
        if (selftest->parsed()) return esd::run_selftest(std::cout, corrupt_eta) ? 0 : 1;
    } catch (const esd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
