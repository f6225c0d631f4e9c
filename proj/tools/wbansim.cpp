// wbansim: command-line front end for the WBAN routing simulator.
//
// Exit codes: 0 success, 1 I/O failure, 2 bad usage / scenario / validation,
// 3 topology unreachable, 4 internal invariant violation.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wban/config.hpp"
#include "wban/engine.hpp"
#include "wban/metrics.hpp"
#include "wban/sweep.hpp"
#include "wban/topology.hpp"

namespace fs = std::filesystem;
using namespace wban;

namespace {

enum Exit { ok = 0, io_error = 1, usage = 2, unreachable = 3, internal = 4 };

struct Common {
    std::string scenario;
    std::vector<std::string> sets;
    std::vector<std::string> protocols;
    int seeds = 1;
    std::string out;
    std::string format = "summary";
    bool verbose = false;
    unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--scenario", c.scenario, "scenario file (key = value lines)");
    app->add_option("--set", c.sets, "override one scenario key, key=value (repeatable)");
    app->add_option("--protocol", c.protocols, "proposed | ensa_ban | p_aodv | rrls (repeatable)");
    app->add_option("--seeds", c.seeds, "number of consecutive seeds starting at rng_seed")->check(CLI::PositiveNumber);
    app->add_option("--out", c.out, "directory for report files");
    app->add_option("--format", c.format, "table | summary | series");
    app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    app->add_flag("--verbose", c.verbose, "write the event log");
}

ScenarioConfig load(const Common& c)
{
    ScenarioConfig cfg;
    if (!c.scenario.empty()) {
        std::ifstream in(c.scenario);
        if (!in)
            throw std::ios_base::failure("cannot read " + c.scenario);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_scenario(ss.str());
    }
    for (const auto& kv : c.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ParseError("--set expects key=value, got '" + kv + "'");
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate(cfg);
    return cfg;
}

std::vector<ProtocolKind> protocols(const Common& c, const ScenarioConfig& cfg, bool all_by_default)
{
    std::vector<ProtocolKind> out;
    for (const auto& p : c.protocols)
        out.push_back(parse_protocol(p));
    if (out.empty()) {
        if (all_by_default)
            out = {ProtocolKind::proposed, ProtocolKind::ensa_ban, ProtocolKind::p_aodv, ProtocolKind::rrls};
        else
            out.push_back(cfg.protocol);
    }
    return out;
}

std::vector<ScenarioConfig> seeded(ScenarioConfig cfg, int seeds)
{
    std::vector<ScenarioConfig> out;
    const auto base = cfg.rng_seed;
    for (int s = 0; s < seeds; ++s) {
        cfg.rng_seed = base + static_cast<std::uint64_t>(s);
        out.push_back(cfg);
    }
    return out;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f || !(f << text))
        throw std::ios_base::failure("cannot write " + path.string());
}

void emit(const std::vector<MetricsReport>& reports, const Common& c, const std::string& x_axis)
{
    const ReportFormat format = parse_format(c.format);
    if (c.out.empty()) {
        std::cout << emit_report(reports, format);
        return;
    }
    fs::create_directories(c.out);
    if (format == ReportFormat::series) {
        std::map<ProtocolKind, std::vector<MetricsReport>> by_protocol;
        for (const auto& r : reports)
            by_protocol[r.protocol].push_back(r);
        for (const auto& [p, rs] : by_protocol)
            for (const char* m : {"throughput_kbps", "mean_delay_ms", "energy_consumed_j", "nrl"})
                write_file(fs::path(c.out) / (std::string(to_string(p)) + "_" + m + "_vs_" + x_axis + ".dat"),
                           emit_series(rs, m, x_axis));
    } else {
        for (const auto& r : reports)
            write_file(fs::path(c.out) / (report_basename(r) + (format == ReportFormat::table ? ".tsv" : ".txt")),
                       emit_report({r}, format));
    }
    write_file(fs::path(c.out) / "reports.tsv", emit_table(reports));
    std::cout << "wrote " << reports.size() << " report(s) to " << c.out << '\n';
}

int cmd_run(const Common& c)
{
    const ScenarioConfig base = load(c);
    std::vector<ScenarioConfig> jobs;
    for (ProtocolKind p : protocols(c, base, false)) {
        ScenarioConfig cfg = base;
        cfg.protocol = p;
        for (auto& s : seeded(cfg, c.seeds))
            jobs.push_back(s);
    }
    std::vector<MetricsReport> reports;
    if (c.verbose) {
        for (const auto& cfg : jobs) {
            RunOptions opts;
            std::ofstream log_file;
            if (!c.out.empty()) {
                fs::create_directories(c.out);
                MetricsReport tag;
                tag.protocol = cfg.protocol;
                tag.n_nodes = cfg.n_nodes;
                tag.rate_pkts_per_s = cfg.rate_pkts_per_s;
                tag.seed = cfg.rng_seed;
                log_file.open(fs::path(c.out) / (report_basename(tag) + ".events"));
                opts.event_log = &log_file;
            } else {
                opts.event_log = &std::cerr;
            }
            reports.push_back(run(cfg, std::move(opts)).metrics);
        }
    } else {
        reports = run_all(jobs, c.threads);
    }
    emit(reports, c, "n_nodes");
    return ok;
}

int cmd_compare(const Common& c)
{
    const ScenarioConfig base = load(c);
    const auto kinds = protocols(c, base, true);
    if (kinds.size() < 2) {
        std::cerr << "compare needs at least two protocols\n";
        return usage;
    }
    std::vector<ScenarioConfig> jobs;
    for (ProtocolKind p : kinds) {
        ScenarioConfig cfg = base;
        cfg.protocol = p;
        for (auto& s : seeded(cfg, c.seeds))
            jobs.push_back(s);
    }
    const auto reports = run_all(jobs, c.threads);
    std::vector<std::pair<ProtocolKind, MetricsReport>> means;
    std::vector<MetricsReport> table;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        std::vector<MetricsReport> group(reports.begin() + static_cast<std::ptrdiff_t>(k * c.seeds),
                                         reports.begin() + static_cast<std::ptrdiff_t>((k + 1) * c.seeds));
        means.emplace_back(kinds[k], mean_report(group));
        table.push_back(means.back().second);
    }
    emit(table, c, "n_nodes");
    bool has_proposed = false;
    for (auto k : kinds)
        has_proposed = has_proposed || k == ProtocolKind::proposed;
    if (has_proposed)
        std::cout << format_comparison(compare_runs(means));
    return ok;
}

int cmd_sweep(const Common& c, const std::vector<int>& nodes, const std::vector<double>& rates)
{
    const ScenarioConfig base = load(c);
    const auto kinds = protocols(c, base, true);
    const std::vector<int> ns = nodes.empty() ? std::vector<int>{base.n_nodes} : nodes;
    const std::vector<double> rs = rates.empty() ? std::vector<double>{base.rate_pkts_per_s} : rates;
    std::vector<ScenarioConfig> jobs;
    for (ProtocolKind p : kinds)
        for (int n : ns)
            for (double r : rs) {
                ScenarioConfig cfg = base;
                cfg.protocol = p;
                cfg.n_nodes = n;
                cfg.rate_pkts_per_s = r;
                validate(cfg);
                for (auto& s : seeded(cfg, c.seeds))
                    jobs.push_back(s);
            }
    const auto reports = run_all(jobs, c.threads);
    std::vector<MetricsReport> means;
    for (std::size_t k = 0; k < reports.size(); k += static_cast<std::size_t>(c.seeds))
        means.push_back(mean_report({reports.begin() + static_cast<std::ptrdiff_t>(k),
                                     reports.begin() + static_cast<std::ptrdiff_t>(k + c.seeds)}));
    emit(means, c, rs.size() > 1 && ns.size() == 1 ? "rate_pkts_per_s" : "n_nodes");
    return ok;
}

int cmd_validate(const Common& c)
{
    const ScenarioConfig cfg = load(c);
    std::cout << serialize_scenario(cfg);
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"WBAN thermal-aware routing simulator"};
    app.require_subcommand(1);

    Common run_opts, compare_opts, sweep_opts, validate_opts;
    std::vector<int> sweep_nodes;
    std::vector<double> sweep_rates;

    auto* run_cmd = app.add_subcommand("run", "run one scenario per protocol and seed");
    add_common(run_cmd, run_opts);
    auto* compare_cmd = app.add_subcommand("compare", "seed-averaged comparison of protocols");
    add_common(compare_cmd, compare_opts);
    compare_opts.format = "table";
    auto* sweep_cmd = app.add_subcommand("sweep", "grid over node counts and data rates");
    add_common(sweep_cmd, sweep_opts);
    sweep_opts.format = "table";
    sweep_cmd->add_option("--nodes", sweep_nodes, "sensor counts")->delimiter(',');
    sweep_cmd->add_option("--rates", sweep_rates, "packets per second per sensor")->delimiter(',');
    auto* validate_cmd = app.add_subcommand("validate", "parse and validate a scenario, print it back");
    add_common(validate_cmd, validate_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*run_cmd)
            return cmd_run(run_opts);
        if (*compare_cmd)
            return cmd_compare(compare_opts);
        if (*sweep_cmd)
            return cmd_sweep(sweep_opts, sweep_nodes, sweep_rates);
        if (*validate_cmd)
            return cmd_validate(validate_opts);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const ValidationError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return usage;
    } catch (const TopologyUnreachable& e) {
        std::cerr << "topology: " << e.what() << '\n';
        return unreachable;
    } catch (const InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return internal;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o: " << e.what() << '\n';
        return io_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}
