#include "cli.hpp"

#include <fiipnn/certify.hpp>
#include <fiipnn/equilibrium.hpp>
#include <fiipnn/errors.hpp>
#include <fiipnn/fde.hpp>
#include <fiipnn/scenarios.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fiipnn::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string scenario;
    std::string selector = "lower";
    std::uint64_t seed = 0;
    std::string weights;
    double t_end = 20.0;
    std::size_t steps = 4000;
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    double slack = 0.05;
    std::size_t samples = 50;
    std::string output;
    std::string x0;
    std::string y0;
    unsigned jobs = 0;
};

struct Problem {
    std::string label;
    ValidatedSystem sys;
    std::optional<Weights> weights;
    std::string weights_origin;
    std::optional<StateVector> initial;
};

// Shortest representation that reads back to the same double.
std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string list(const Vector& v) {
    std::string s;
    for (Index i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += num(v(i));
    }
    return s;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string::npos) end = text.size();
        std::string item = text.substr(pos, end - pos);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        double v = 0.0;
        auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
            throw UsageError(std::string("invalid number in ") + what + ": '" + item + "'");
        }
        out.push_back(v);
        pos = end + 1;
    }
    return out;
}

Vector to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::uint64_t env_seed() {
    const char* s = std::getenv("FPDS_SEED");
    if (!s || !*s) return 0;
    std::uint64_t v = 0;
    const char* end = s + std::char_traits<char>::length(s);
    auto res = std::from_chars(s, end, v);
    if (res.ec != std::errc() || res.ptr != end) throw UsageError(std::string("invalid FPDS_SEED: ") + s);
    return v;
}

Problem load_problem(const std::string& name) {
    try {
        const ScenarioName sn = parse_scenario_name(name);
        return {name, validate_system(builtin_scenario(sn)), builtin_weights(sn), "builtin",
                builtin_initial_state(sn)};
    } catch (const ValidationError&) {
        // not a builtin name; fall through to files
    }
    std::error_code ec;
    if (!std::filesystem::is_regular_file(name, ec)) {
        throw InputError("unknown scenario or missing spec file: " + name);
    }
    std::ifstream in(name);
    if (!in) throw InputError("cannot open spec file: " + name);
    try {
        SpecDocument doc = load_spec(in);
        return {name, std::move(doc.system), std::move(doc.weights), "spec file", std::move(doc.initial)};
    } catch (const ParseError& e) {
        throw InputError(name + ": " + e.what());
    } catch (const ValidationError& e) {
        throw InputError(name + ": " + e.what());
    }
}

std::pair<Weights, std::string> resolve_weights(const Problem& p, const RunConfig& cfg) {
    const Index n = p.sys.n();
    const Index m = p.sys.m();
    if (!cfg.weights.empty()) {
        auto v = parse_list(cfg.weights, "--weights");
        if (static_cast<Index>(v.size()) != n + m) {
            throw UsageError("--weights needs " + std::to_string(n + m) + " values (mu then tau), got " +
                             std::to_string(v.size()));
        }
        Vector all = to_vector(v);
        if ((all.array() <= 0.0).any()) throw UsageError("--weights must be positive");
        return {Weights{all.head(n), all.tail(m)}, "given"};
    }
    if (p.weights) return {*p.weights, p.weights_origin};
    if (auto w = find_weights(p.sys)) return {*w, "search"};
    return {Weights::unit(n, m), "unit (search found none)"};
}

StateVector resolve_initial(const Problem& p, const RunConfig& cfg) {
    StateVector z = p.initial ? *p.initial
                              : StateVector{p.sys->box1.midpoint(), p.sys->box2.midpoint()};
    if (!cfg.x0.empty()) z.x = to_vector(parse_list(cfg.x0, "--x0"));
    if (!cfg.y0.empty()) z.y = to_vector(parse_list(cfg.y0, "--y0"));
    if (z.x.size() != p.sys.n()) throw UsageError("--x0 needs " + std::to_string(p.sys.n()) + " values");
    if (z.y.size() != p.sys.m()) throw UsageError("--y0 needs " + std::to_string(p.sys.m()) + " values");
    if (!z.x.allFinite() || !z.y.allFinite()) throw UsageError("initial state must be finite");
    return z;
}

Selector resolve_selector(const RunConfig& cfg) {
    try {
        return Selector::parse(cfg.selector, cfg.seed);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
}

void print_weights(std::ostream& out, const Weights& w, const std::string& origin) {
    out << "weights: mu=" << list(w.mu) << " tau=" << list(w.tau) << " (" << origin << ")\n";
}

void print_certificate(std::ostream& out, const Certificate& c) {
    out << "a2_margins: " << list(c.a2_margins) << "\n";
    out << "a3_margins: " << list(c.a3_margins) << "\n";
    out << "xi: " << list(c.xi) << "\n";
    out << "zeta: " << list(c.zeta) << "\n";
    out << "kappa: " << num(c.kappa) << "\n";
    out << "theta: " << num(c.theta) << "\n";
    out << "certificate: " << (c.pass ? "pass" : "fail") << "\n";
    if (c.gains_warning) out << "note: gains are not covered by the certificate\n";
}

void write_csv(std::ostream& out, const Trajectory& traj) {
    const Index n = traj.states.front().x.size();
    const Index m = traj.states.front().y.size();
    out << "t";
    for (Index i = 0; i < n; ++i) out << ",x" << i + 1;
    for (Index j = 0; j < m; ++j) out << ",y" << j + 1;
    out << "\n";
    char buf[32];
    std::string line;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        line.clear();
        std::snprintf(buf, sizeof buf, "%.17g", traj.times[k]);
        line += buf;
        for (const Vector* v : {&traj.states[k].x, &traj.states[k].y}) {
            for (Index i = 0; i < v->size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", (*v)(i));
                line += ',';
                line += buf;
            }
        }
        line += '\n';
        out << line;
    }
}

PicardOptions picard_options(const RunConfig& cfg) {
    PicardOptions opt;
    opt.tol = cfg.tol;
    opt.max_iter = cfg.max_iter;
    return opt;
}

void check_numeric_options(const RunConfig& cfg) {
    if (!(cfg.t_end > 0.0)) throw UsageError("--t-end must be positive");
    if (cfg.steps < 1) throw UsageError("--steps must be at least 1");
    if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
    if (cfg.max_iter < 1) throw UsageError("--max-iter must be at least 1");
    if (!(cfg.slack >= 0.0)) throw UsageError("--slack must be nonnegative");
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
    Problem p = load_problem(cfg.scenario);
    auto [w, origin] = resolve_weights(p, cfg);
    Certificate c = certificate(p.sys, w);
    out << "scenario: " << p.label << "\n";
    print_weights(out, w, origin);
    print_certificate(out, c);
    return c.pass ? exit_pass : exit_fail;
}

int cmd_equilibrium(const RunConfig& cfg, std::ostream& out) {
    Problem p = load_problem(cfg.scenario);
    auto [w, origin] = resolve_weights(p, cfg);
    Selector sel = resolve_selector(cfg);
    Realization r = sample_realization(p.sys, sel);
    Equilibrium eq = picard_solve(p.sys, r, w, picard_options(cfg));
    out << "scenario: " << p.label << "\n";
    out << "selector: " << sel.to_string() << "\n";
    print_weights(out, w, origin);
    out << "x*: " << list(eq.point.x) << "\n";
    out << "y*: " << list(eq.point.y) << "\n";
    out << "residual: " << num(eq.residual) << "\n";
    out << "iterations: " << eq.iterations << "\n";
    out << "kappa: " << num(eq.kappa) << "\n";
    out << "converged: " << (eq.converged ? "yes" : "no") << "\n";
    if (!eq.converged) throw NumericalError("Picard iteration hit --max-iter without converging");
    return exit_pass;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Problem p = load_problem(cfg.scenario);
    Selector sel = resolve_selector(cfg);
    StateVector z0 = resolve_initial(p, cfg);
    Realization r = sample_realization(p.sys, sel);
    Trajectory traj = integrate(p.sys, r, z0, cfg.t_end, cfg.steps);
    if (cfg.output.empty()) {
        write_csv(out, traj);
    } else {
        std::ofstream file(cfg.output);
        if (!file) throw InputError("cannot write " + cfg.output);
        write_csv(file, traj);
        if (!file) throw InputError("error writing " + cfg.output);
        err << "wrote " << traj.times.size() << " rows to " << cfg.output << "\n";
    }
    return exit_pass;
}

struct EnvelopeOutcome {
    Equilibrium eq;
    EnvelopeReport report;
};

EnvelopeOutcome run_envelope(const Problem& p, const Realization& r, const Weights& w,
                             const Certificate& c, const StateVector& z0, const RunConfig& cfg) {
    Equilibrium eq = picard_solve(p.sys, r, w, picard_options(cfg));
    if (!eq.converged) throw NumericalError("Picard iteration hit --max-iter without converging");
    Trajectory traj = integrate(p.sys, r, z0, cfg.t_end, cfg.steps);
    EnvelopeReport rep = envelope_check(traj, eq, w, c.theta, cfg.slack);
    return {std::move(eq), std::move(rep)};
}

int cmd_envelope(const RunConfig& cfg, std::ostream& out) {
    Problem p = load_problem(cfg.scenario);
    auto [w, origin] = resolve_weights(p, cfg);
    Selector sel = resolve_selector(cfg);
    StateVector z0 = resolve_initial(p, cfg);
    Certificate c = certificate(p.sys, w);
    out << "scenario: " << p.label << "\n";
    out << "selector: " << sel.to_string() << "\n";
    print_weights(out, w, origin);
    out << "kappa: " << num(c.kappa) << "\n";
    out << "theta: " << num(c.theta) << "\n";
    out << "certificate: " << (c.pass ? "pass" : "fail") << "\n";
    if (!c.pass) {
        out << "verdict: fail (no certified decay rate)\n";
        return exit_fail;
    }
    Realization r = sample_realization(p.sys, sel);
    auto [eq, rep] = run_envelope(p, r, w, c, z0, cfg);
    out << "x*: " << list(eq.point.x) << "\n";
    out << "y*: " << list(eq.point.y) << "\n";
    out << "v0: " << num(rep.v0) << "\n";
    out << "v_final: " << num(rep.distance.back()) << "\n";
    out << "max_ratio: " << num(rep.max_ratio) << "\n";
    out << "worst_t: " << num(cfg.t_end * static_cast<double>(rep.worst_index) / static_cast<double>(cfg.steps)) << "\n";
    out << "slack: " << num(rep.slack) << "\n";
    out << "violations: " << rep.violations << "\n";
    out << "verdict: " << (rep.pass ? "pass" : "fail") << "\n";
    return rep.pass ? exit_pass : exit_fail;
}

Selector sweep_selector(std::size_t index, std::uint64_t seed) {
    if (index == 0) return Selector::lower();
    if (index == 1) return Selector::upper();
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return Selector::random((static_cast<std::uint64_t>(words[0]) << 32) | words[1]);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    if (cfg.samples < 1) throw UsageError("--samples must be at least 1");
    Problem p = load_problem(cfg.scenario);
    auto [w, origin] = resolve_weights(p, cfg);
    StateVector z0 = resolve_initial(p, cfg);
    Certificate c = certificate(p.sys, w);
    out << "scenario: " << p.label << "\n";
    print_weights(out, w, origin);
    out << "kappa: " << num(c.kappa) << "\n";
    out << "theta: " << num(c.theta) << "\n";
    out << "certificate: " << (c.pass ? "pass" : "fail") << " (shared by every realization)\n";
    if (!c.pass) {
        out << "verdict: fail (no certified decay rate)\n";
        return exit_fail;
    }

    std::vector<std::string> lines(cfg.samples);
    std::vector<char> passed(cfg.samples, 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.samples; i = next++) {
            const Selector sel = sweep_selector(i, cfg.seed);
            std::ostringstream line;
            line << "sample " << i << " " << sel.to_string() << ": ";
            try {
                Realization r = sample_realization(p.sys, sel);
                auto [eq, rep] = run_envelope(p, r, w, c, z0, cfg);
                line << "max_ratio=" << num(rep.max_ratio) << " violations=" << rep.violations
                     << " " << (rep.pass ? "pass" : "fail");
                passed[i] = rep.pass ? 1 : 0;
            } catch (const NumericalError& e) {
                line << "error: " << e.what();
            }
            lines[i] = line.str();
        }
    };
    unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, cfg.samples));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    const auto ok = static_cast<std::size_t>(std::count(passed.begin(), passed.end(), 1));
    for (const auto& l : lines) out << l << "\n";
    out << "summary: " << ok << "/" << cfg.samples << " pass\n";
    out << "verdict: " << (ok == cfg.samples ? "pass" : "fail") << "\n";
    return ok == cfg.samples ? exit_pass : exit_fail;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("scenario", cfg.scenario, "builtin name (example-4.1, example-4.2, traffic-gstm) or spec file")
        ->required();
}

void add_weights(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--weights", cfg.weights, "comma-separated mu then tau");
}

void add_selector(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--selector", cfg.selector, "lower, upper, midpoint or random")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for random selection (default $FPDS_SEED or 0)");
}

void add_picard(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--tol", cfg.tol, "equilibrium tolerance")->capture_default_str();
    sub->add_option("--max-iter", cfg.max_iter, "Picard iteration limit")->capture_default_str();
}

void add_integration(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--t-end", cfg.t_end, "final time")->capture_default_str();
    sub->add_option("--steps", cfg.steps, "uniform steps")->capture_default_str();
    sub->add_option("--x0", cfg.x0, "initial x, comma-separated");
    sub->add_option("--y0", cfg.y0, "initial y, comma-separated");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Fractional interval projection networks: certificates, equilibria, trajectories"};
    app.name("fiipnn");
    app.require_subcommand(1);

    auto* certify = app.add_subcommand("certify", "stability certificate");
    add_common(certify, cfg);
    add_weights(certify, cfg);

    auto* equilibrium = app.add_subcommand("equilibrium", "equilibrium of one realization");
    add_common(equilibrium, cfg);
    add_weights(equilibrium, cfg);
    add_selector(equilibrium, cfg);
    add_picard(equilibrium, cfg);

    auto* simulate = app.add_subcommand("simulate", "trajectory as CSV");
    add_common(simulate, cfg);
    add_selector(simulate, cfg);
    add_integration(simulate, cfg);
    simulate->add_option("-o,--output", cfg.output, "CSV path (default stdout)");

    auto* envelope = app.add_subcommand("envelope", "check the Mittag-Leffler decay envelope");
    add_common(envelope, cfg);
    add_weights(envelope, cfg);
    add_selector(envelope, cfg);
    add_picard(envelope, cfg);
    add_integration(envelope, cfg);
    envelope->add_option("--slack", cfg.slack, "relative slack on the envelope")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "envelope check over vertex and random realizations");
    add_common(sweep, cfg);
    add_weights(sweep, cfg);
    sweep->add_option("--seed", cfg.seed, "seed for random realizations (default $FPDS_SEED or 0)");
    add_picard(sweep, cfg);
    add_integration(sweep, cfg);
    sweep->add_option("--slack", cfg.slack, "relative slack on the envelope")->capture_default_str();
    sweep->add_option("--samples", cfg.samples, "realizations; the first two are the vertices")
        ->capture_default_str();
    sweep->add_option("--jobs", cfg.jobs, "worker threads (default: hardware)");

    try {
        cfg.seed = env_seed();
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return exit_usage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        check_numeric_options(cfg);
        if (certify->parsed()) return cmd_certify(cfg, out);
        if (equilibrium->parsed()) return cmd_equilibrium(cfg, out);
        if (simulate->parsed()) return cmd_simulate(cfg, out, err);
        if (envelope->parsed()) return cmd_envelope(cfg, out);
        if (sweep->parsed()) return cmd_sweep(cfg, out);
        err << "usage error: no command\n";
        return exit_usage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::domain_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const ValidationError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }
}

}  // namespace fiipnn::cli
