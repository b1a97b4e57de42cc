#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace parrep {

/// Persistent worker pool with a blocking parallel-for.  Work items are
/// claimed dynamically through an atomic counter; the calling thread
/// participates, so a pool of size 1 runs everything inline with no
/// synchronization cost.  Results must not depend on which thread runs
/// which item.
class ThreadPool {
public:
    explicit ThreadPool(int n_workers) : size_(n_workers < 1 ? 1 : n_workers) {
        for (int i = 0; i < size_ - 1; ++i) {
            threads_.emplace_back([this] { worker_loop(); });
        }
    }

    ~ThreadPool() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            stop_ = true;
        }
        cv_start_.notify_all();
        for (auto& t : threads_) t.join();
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    int size() const { return size_; }

    /// Runs fn(i) for every i in [0, n); blocks until all items finished.
    /// The first exception thrown by fn is rethrown here.
    void parallel_for_each(std::size_t n, const std::function<void(std::size_t)>& fn) {
        if (n == 0) return;
        if (size_ == 1 || n == 1) {
            for (std::size_t i = 0; i < n; ++i) fn(i);
            return;
        }
        {
            std::lock_guard<std::mutex> lock(mu_);
            fn_ = &fn;
            total_ = n;
            next_.store(0, std::memory_order_relaxed);
            pending_ = n;
            ++generation_;
        }
        cv_start_.notify_all();
        run_items();
        {
            std::unique_lock<std::mutex> lock(mu_);
            cv_done_.wait(lock, [this] { return pending_ == 0; });
            fn_ = nullptr;
        }
        if (error_) {
            auto e = error_;
            error_ = nullptr;
            std::rethrow_exception(e);
        }
    }

private:
    void run_items() {
        const std::function<void(std::size_t)>* fn = fn_;
        std::size_t done = 0;
        while (true) {
            const std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
            if (i >= total_) break;
            try {
                (*fn)(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu_);
                if (!error_) error_ = std::current_exception();
            }
            ++done;
        }
        if (done > 0) {
            std::lock_guard<std::mutex> lock(mu_);
            pending_ -= done;
            if (pending_ == 0) cv_done_.notify_all();
        }
    }

    void worker_loop() {
        std::uint64_t seen = 0;
        while (true) {
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_start_.wait(lock, [this, seen] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            run_items();
        }
    }

    const int size_;
    std::vector<std::thread> threads_;
    std::mutex mu_;
    std::condition_variable cv_start_;
    std::condition_variable cv_done_;
    const std::function<void(std::size_t)>* fn_ = nullptr;
    std::size_t total_ = 0;
    std::atomic<std::size_t> next_{0};
    std::size_t pending_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

}  // namespace parrep
