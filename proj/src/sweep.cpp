#include "wban/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "wban/engine.hpp"

namespace wban {

namespace {

template <class Result, class Fn>
std::vector<Result> parallel_runs(const std::vector<ScenarioConfig>& jobs, unsigned threads, Fn fn)
{
    std::vector<Result> out(jobs.size());
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                out[k] = fn(jobs[k]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = jobs.size();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

}  // namespace

std::vector<MetricsReport> run_all(const std::vector<ScenarioConfig>& jobs, unsigned threads)
{
    return parallel_runs<MetricsReport>(jobs, threads, [](const ScenarioConfig& c) { return run(c).metrics; });
}

std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& jobs, unsigned threads)
{
    return parallel_runs<RunResult>(jobs, threads, [](const ScenarioConfig& c) { return run(c); });
}

MetricsReport mean_report(const std::vector<MetricsReport>& reports)
{
    if (reports.empty())
        throw std::invalid_argument("no reports to average");
    MetricsReport m = reports.front();
    auto average = [&](auto get) {
        double total = 0.0;
        int n = 0;
        for (const auto& r : reports)
            if (const std::optional<double> v = get(r)) {
                total += *v;
                ++n;
            }
        return n > 0 ? std::optional<double>(total / n) : std::nullopt;
    };
    m.throughput_kbps = *average([](const MetricsReport& r) -> std::optional<double> { return r.throughput_kbps; });
    m.energy_consumed_j = *average([](const MetricsReport& r) -> std::optional<double> { return r.energy_consumed_j; });
    m.max_temperature_c = *average([](const MetricsReport& r) -> std::optional<double> { return r.max_temperature_c; });
    m.mean_delay_ms = average([](const MetricsReport& r) { return r.mean_delay_ms; });
    m.nrl = average([](const MetricsReport& r) { return r.nrl; });
    for (std::size_t k = 0; k < kClasses; ++k)
        m.class_delay_ms[k] = average([k](const MetricsReport& r) { return r.class_delay_ms[k]; });
    m.originated = m.delivered = m.dropped = m.in_flight = m.control_tx = 0;
    m.drops_by_cause = {};
    for (const auto& r : reports) {
        m.originated += r.originated;
        m.delivered += r.delivered;
        m.dropped += r.dropped;
        m.in_flight += r.in_flight;
        m.control_tx += r.control_tx;
        for (std::size_t i = 0; i < kDropCauses; ++i)
            m.drops_by_cause[i] += r.drops_by_cause[i];
    }
    return m;
}

}  // namespace wban
