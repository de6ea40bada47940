#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <random>
#include <semaphore>
#include <thread>

#include "engine_internal.hpp"

namespace dfsim {

std::string_view to_string(QueryKind k) {
    switch (k) {
        case QueryKind::NbWrite: return "nb_write";
        case QueryKind::NbRead: return "nb_read";
        case QueryKind::CanRead: return "can_read";
        case QueryKind::CanWrite: return "can_write";
    }
    return "?";
}

std::optional<QueryKind> query_kind_from_string(std::string_view s) {
    for (auto k : {QueryKind::NbWrite, QueryKind::NbRead, QueryKind::CanRead, QueryKind::CanWrite}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

bool evaluate_constraint(const Constraint& c, const SimulationGraph& g, const AccessIndex& idx, const Depths& depths) {
    const auto f = static_cast<std::size_t>(c.fifo);
    const std::int64_t source = g.node_cycle(c.anchor) + c.offset;
    const std::vector<NodeId>* list = nullptr;
    std::int64_t k = 0;
    if (is_write_side(c.kind)) {
        if (c.ordinal <= depths[f]) return true;
        list = &idx.reads[f];
        k = c.ordinal - depths[f];
    } else {
        list = &idx.writes[f];
        k = c.ordinal;
    }
    if (k > static_cast<std::int64_t>(list->size())) return false;
    NodeId target = (*list)[static_cast<std::size_t>(k - 1)];
    if (target == kNoNode) return false;
    return g.node_cycle(target) < source;
}

namespace {

using namespace detail;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::uint64_t agent_seed(std::uint64_t seed, std::size_t agent) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(agent)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

// One thread per functional agent; the coordinator runs on the caller's
// thread. The task tracker counts agents that are running.
class ThreadedScheduler final : public RequestSink {
public:
    ThreadedScheduler(const ElaboratedDesign& d, const Depths& depths, const EngineOptions& options)
        : options_(options), slots_(d.modules.size()) {
        for (std::size_t a = 0; a < d.modules.size(); ++a) {
            agents_.emplace_back(static_cast<std::int32_t>(a), d.modules[a], options_);
            agents_.back().set_abort_flag(&abort_);
            rngs_.emplace_back(agent_seed(options.jitter_seed.value_or(0), a));
        }
        coordinator_.emplace(d, depths, options_, [this](std::int32_t a, const Reply& r) { resume(a, r); });
    }

    void submit(Request r, bool pause) override {
        if (options_.jitter_seed) jitter(static_cast<std::size_t>(r.agent));
        {
            std::lock_guard lk(mutex_);
            queue_.push_back(std::move(r));
            if (pause) --active_;
        }
        cv_.notify_one();
    }

    EngineResult run() {
        active_ = static_cast<int>(agents_.size());
        std::vector<std::thread> threads;
        threads.reserve(agents_.size());
        for (std::size_t a = 0; a < agents_.size(); ++a) {
            threads.emplace_back([this, a] { agent_main(a); });
        }
        auto step = Coordinator::Step::Progress;
        std::vector<Request> batch;
        for (;;) {
            bool quiet = false;
            {
                std::unique_lock lk(mutex_);
                cv_.wait(lk, [&] { return !queue_.empty() || active_ == 0; });
                batch.swap(queue_);
                quiet = batch.empty() && active_ == 0;
            }
            if (quiet) {
                step = coordinator_->quiesce();
                if (step != Coordinator::Step::Progress || coordinator_->stopped()) break;
                continue;
            }
            for (auto& r : batch) {
                coordinator_->accept(std::move(r));
                if (coordinator_->stopped()) break;
            }
            batch.clear();
            if (coordinator_->stopped()) break;
        }
        abort_.store(true);
        for (auto& s : slots_) s.release();
        for (auto& t : threads) t.join();
        if (coordinator_->fault()) throw SimulationError(*coordinator_->fault());
        return coordinator_->finish(step);
    }

private:
    struct Slot {
        std::counting_semaphore<> sem{0};
        Reply reply;
        void release() { sem.release(); }
    };

    void agent_main(std::size_t a) {
        Agent& agent = agents_[a];
        for (;;) {
            if (agent.run(*this) == Agent::Yield::Finished) return;
            slots_[a].sem.acquire();
            if (abort_.load()) return;
            agent.deliver(slots_[a].reply);
        }
    }

    void resume(std::int32_t a, const Reply& r) {
        {
            std::lock_guard lk(mutex_);
            ++active_;
        }
        auto& slot = slots_[static_cast<std::size_t>(a)];
        slot.reply = r;
        slot.release();
    }

    void jitter(std::size_t a) {
        auto& rng = rngs_[a];
        auto roll = rng() % 16;
        if (roll < 4) {
            std::this_thread::yield();
        } else if (roll == 4) {
            std::this_thread::sleep_for(std::chrono::microseconds(1 + rng() % 50));
        }
    }

    EngineOptions options_;
    std::deque<Agent> agents_;
    std::deque<Slot> slots_;
    std::vector<std::mt19937_64> rngs_;
    std::optional<Coordinator> coordinator_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::vector<Request> queue_;
    int active_ = 0;
    std::atomic<bool> abort_{false};
};

// Single-threaded schedule: agents run to their next pause point one at a
// time. Jitter permutes which agent runs next and when queued requests are
// handed to the coordinator.
class CooperativeScheduler final : public RequestSink {
public:
    CooperativeScheduler(const ElaboratedDesign& d, const Depths& depths, const EngineOptions& options)
        : options_(options), inbox_(d.modules.size()), rng_(options.jitter_seed.value_or(0)) {
        for (std::size_t a = 0; a < d.modules.size(); ++a) {
            agents_.emplace_back(static_cast<std::int32_t>(a), d.modules[a], options_);
            runnable_.push_back(static_cast<std::int32_t>(a));
        }
        coordinator_.emplace(d, depths, options_, [this](std::int32_t a, const Reply& r) {
            inbox_[static_cast<std::size_t>(a)] = r;
            runnable_.push_back(a);
        });
    }

    void submit(Request r, bool) override { queue_.push_back(std::move(r)); }

    EngineResult run() {
        auto step = Coordinator::Step::Progress;
        while (!coordinator_->stopped()) {
            bool jitter = options_.jitter_seed.has_value();
            if (!queue_.empty() && (runnable_.empty() || !jitter || rng_() % 2 == 0)) {
                std::vector<Request> batch;
                batch.swap(queue_);
                for (auto& r : batch) {
                    coordinator_->accept(std::move(r));
                    if (coordinator_->stopped()) break;
                }
            } else if (!runnable_.empty()) {
                std::size_t pick = jitter ? rng_() % runnable_.size() : 0;
                auto a = static_cast<std::size_t>(runnable_[pick]);
                runnable_.erase(runnable_.begin() + static_cast<std::ptrdiff_t>(pick));
                if (inbox_[a]) {
                    agents_[a].deliver(*inbox_[a]);
                    inbox_[a].reset();
                }
                agents_[a].run(*this);
            } else {
                step = coordinator_->quiesce();
                if (step != Coordinator::Step::Progress) break;
            }
        }
        if (coordinator_->fault()) throw SimulationError(*coordinator_->fault());
        return coordinator_->finish(step);
    }

private:
    EngineOptions options_;
    std::deque<Agent> agents_;
    std::vector<std::optional<Reply>> inbox_;
    std::vector<std::int32_t> runnable_;
    std::vector<Request> queue_;
    std::mt19937_64 rng_;
    std::optional<Coordinator> coordinator_;
};

}  // namespace

EngineResult run_simulation(const ElaboratedDesign& d, const Depths& depths, const EngineOptions& options) {
    if (depths.size() != d.fifo_names.size()) throw std::invalid_argument("depths do not cover every FIFO");
    for (auto s : depths) {
        if (s < 1) throw std::invalid_argument("FIFO depths must be >= 1");
    }
    auto t0 = Clock::now();
    EngineResult r;
    if (options.mode == ScheduleMode::Threaded) {
        ThreadedScheduler s(d, depths, options);
        r = s.run();
    } else {
        CooperativeScheduler s(d, depths, options);
        r = s.run();
    }
    r.engine_ms = ms_since(t0);
    return r;
}

}  // namespace dfsim
