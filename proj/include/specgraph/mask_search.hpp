#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

namespace specgraph {

enum class Sense { minimize, maximize };

/// Score of one candidate mask; aux carries a secondary witness (e.g. the
/// second set of a pair) chosen by the evaluator.
struct MaskScore {
  double value = 0.0;
  std::uint64_t aux = 0;
};

struct MaskExtremum {
  double value = 0.0;
  std::uint64_t mask = 0;
  std::uint64_t aux = 0;
  std::uint64_t examined = 0;
};

namespace detail {

template <class Fn>
void run_chunks(std::uint64_t begin, std::uint64_t end, unsigned threads, Fn&& fn) {
  const std::uint64_t span = end > begin ? end - begin : 0;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, span));
  const std::uint64_t step = (span + chunks - 1) / chunks;
  if (chunks == 1) {
    fn(0, begin, end);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t lo = begin + c * step;
    const std::uint64_t hi = std::min(end, lo + step);
    pool.emplace_back([&fn, c, lo, hi] { fn(c, lo, hi); });
  }
}

}  // namespace detail

/// Extremum of eval(mask) over masks in [begin, end), skipping masks for
/// which eval returns nullopt.
///
/// The first pass takes the exact floating-point min/max, which does not
/// depend on evaluation order. The second pass returns the smallest mask
/// whose value lies within tie_tolerance (relative, with a 1e-15 absolute
/// floor) of that extremum. Both passes are independent of the thread
/// count, so the witness is identical for any number of threads.
template <class Eval>
std::optional<MaskExtremum> mask_extremum(std::uint64_t begin, std::uint64_t end, Sense sense, Eval&& eval,
                                          unsigned threads = 1, double tie_tolerance = 1e-12) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunk_limit = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, end - begin));
  struct ChunkBest {
    std::optional<double> value;
    std::uint64_t examined = 0;
  };
  std::vector<ChunkBest> firsts(chunk_limit);
  const bool minimize = sense == Sense::minimize;

  detail::run_chunks(begin, end, threads, [&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
    ChunkBest best;
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      std::optional<MaskScore> s = eval(mask);
      if (!s) continue;
      ++best.examined;
      if (!best.value || (minimize ? s->value < *best.value : s->value > *best.value)) best.value = s->value;
    }
    firsts[c] = best;
  });

  std::optional<double> extremum;
  std::uint64_t examined = 0;
  for (const auto& c : firsts) {
    examined += c.examined;
    if (c.value && (!extremum || (minimize ? *c.value < *extremum : *c.value > *extremum))) extremum = c.value;
  }
  if (!extremum) return std::nullopt;

  const double slack = tie_tolerance * std::fabs(*extremum) + 1e-15;
  std::vector<std::optional<MaskExtremum>> hits(chunk_limit);
  detail::run_chunks(begin, end, threads, [&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      std::optional<MaskScore> s = eval(mask);
      if (!s) continue;
      const bool tied = minimize ? s->value <= *extremum + slack : s->value >= *extremum - slack;
      if (tied) {
        hits[c] = MaskExtremum{*extremum, mask, s->aux, 0};
        return;
      }
    }
  });
  for (auto& h : hits) {
    if (h) {
      h->examined = examined;
      return h;
    }
  }
  return std::nullopt;
}

}  // namespace specgraph
