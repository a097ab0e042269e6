#pragma once

#include <chrono>
#include <cstdint>

namespace polyopt {

/// Elapsed-time source for budgets and limits. Wall mode reads the steady
/// clock. Ticks mode counts abstract work units (LP pivots, ADMM iterations,
/// propagation sweeps) and converts them to seconds at a fixed rate, which
/// makes every time-dependent decision, and thus entire solver runs,
/// reproducible bit for bit.
class WorkClock {
 public:
  enum class Mode { Wall, Ticks };

  static constexpr double kSecondsPerTick = 1e-5;

  explicit WorkClock(Mode mode = Mode::Wall) : mode_(mode) { reset(); }

  Mode mode() const { return mode_; }

  void reset() {
    ticks_ = 0;
    start_ = std::chrono::steady_clock::now();
  }

  void add_ticks(std::int64_t n) { ticks_ += n; }

  double elapsed() const {
    if (mode_ == Mode::Ticks) return static_cast<double>(ticks_) * kSecondsPerTick;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  Mode mode_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t ticks_ = 0;
};

}  // namespace polyopt
