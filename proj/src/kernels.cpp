#include "exalm/kernels.hpp"

#include <atomic>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace exalm::kern {

namespace {

std::atomic<bool> g_parallel{true};

// Work below this size is not worth spawning a team for.
constexpr std::size_t kParallelThreshold = 1 << 14;

inline bool go_parallel(std::size_t work) {
#ifdef _OPENMP
  return g_parallel.load(std::memory_order_relaxed) && work >= kParallelThreshold &&
         omp_get_max_threads() > 1;
#else
  (void)work;
  return false;
#endif
}

// Fixed chunk size for deterministic reductions: partial sums are formed per
// chunk and combined in chunk order regardless of the thread count.
constexpr std::size_t kChunk = 4096;

}  // namespace

bool set_parallel(bool on) { return g_parallel.exchange(on); }
bool parallel_enabled() { return g_parallel.load(); }

// ---------------------------------------------------------------------------

void scan_cells_to_nodes_serial(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                                double h, double* out) {
  for (std::size_t p = 0; p < pre; ++p) {
    const double* ip = in + p * n * post;
    double* op = out + p * (n + 1) * post;
    for (std::size_t q = 0; q < post; ++q) {
      double acc = 0.0;
      op[q] = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += h * ip[k * post + q];
        op[(k + 1) * post + q] = acc;
      }
    }
  }
}

void scan_cells_to_nodes(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                         double h, double* out) {
  if (!go_parallel(pre * n * post)) {
    scan_cells_to_nodes_serial(in, pre, n, post, h, out);
    return;
  }
#ifdef _OPENMP
  const std::size_t lines = pre * post;
#pragma omp parallel for schedule(static)
  for (long long li = 0; li < static_cast<long long>(lines); ++li) {
    const std::size_t p = static_cast<std::size_t>(li) / post;
    const std::size_t q = static_cast<std::size_t>(li) % post;
    const double* ip = in + p * n * post;
    double* op = out + p * (n + 1) * post;
    double acc = 0.0;
    op[q] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += h * ip[k * post + q];
      op[(k + 1) * post + q] = acc;
    }
  }
#endif
}

void adjacent_average_serial(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                             double* out) {
  for (std::size_t p = 0; p < pre; ++p) {
    const double* ip = in + p * n * post;
    double* op = out + p * (n - 1) * post;
    for (std::size_t k = 0; k + 1 < n; ++k)
      for (std::size_t q = 0; q < post; ++q)
        op[k * post + q] = 0.5 * (ip[k * post + q] + ip[(k + 1) * post + q]);
  }
}

void adjacent_average(const double* in, std::size_t pre, std::size_t n, std::size_t post, double* out) {
  if (!go_parallel(pre * n * post)) {
    adjacent_average_serial(in, pre, n, post, out);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(pre); ++p) {
    const double* ip = in + static_cast<std::size_t>(p) * n * post;
    double* op = out + static_cast<std::size_t>(p) * (n - 1) * post;
    for (std::size_t k = 0; k + 1 < n; ++k)
      for (std::size_t q = 0; q < post; ++q)
        op[k * post + q] = 0.5 * (ip[k * post + q] + ip[(k + 1) * post + q]);
  }
#endif
}

void forward_difference_serial(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                               double h, double* out) {
  const double inv = 1.0 / h;
  for (std::size_t p = 0; p < pre; ++p) {
    const double* ip = in + p * n * post;
    double* op = out + p * (n - 1) * post;
    for (std::size_t k = 0; k + 1 < n; ++k)
      for (std::size_t q = 0; q < post; ++q)
        op[k * post + q] = (ip[(k + 1) * post + q] - ip[k * post + q]) * inv;
  }
}

void forward_difference(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                        double h, double* out) {
  if (!go_parallel(pre * n * post)) {
    forward_difference_serial(in, pre, n, post, h, out);
    return;
  }
#ifdef _OPENMP
  const double inv = 1.0 / h;
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < static_cast<long long>(pre); ++p) {
    const double* ip = in + static_cast<std::size_t>(p) * n * post;
    double* op = out + static_cast<std::size_t>(p) * (n - 1) * post;
    for (std::size_t k = 0; k + 1 < n; ++k)
      for (std::size_t q = 0; q < post; ++q)
        op[k * post + q] = (ip[(k + 1) * post + q] - ip[k * post + q]) * inv;
  }
#endif
}

void tail_midpoint_serial(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                          double h, double* out) {
  for (std::size_t p = 0; p < pre; ++p) {
    const double* ip = in + p * n * post;
    double* op = out + p * n * post;
    for (std::size_t q = 0; q < post; ++q) {
      double acc = 0.0;
      for (std::size_t k = n; k-- > 0;) {
        op[k * post + q] = h * (0.5 * ip[k * post + q] + acc);
        acc += ip[k * post + q];
      }
    }
  }
}

void tail_midpoint(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                   double h, double* out) {
  if (!go_parallel(pre * n * post)) {
    tail_midpoint_serial(in, pre, n, post, h, out);
    return;
  }
#ifdef _OPENMP
  const std::size_t lines = pre * post;
#pragma omp parallel for schedule(static)
  for (long long li = 0; li < static_cast<long long>(lines); ++li) {
    const std::size_t p = static_cast<std::size_t>(li) / post;
    const std::size_t q = static_cast<std::size_t>(li) % post;
    const double* ip = in + p * n * post;
    double* op = out + p * n * post;
    double acc = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      op[k * post + q] = h * (0.5 * ip[k * post + q] + acc);
      acc += ip[k * post + q];
    }
  }
#endif
}

void subtract_line_mean_serial(double* data, std::size_t pre, std::size_t n, std::size_t post) {
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t p = 0; p < pre; ++p) {
    double* dp = data + p * n * post;
    for (std::size_t q = 0; q < post; ++q) {
      double mean = 0.0;
      for (std::size_t k = 0; k < n; ++k) mean += dp[k * post + q];
      mean *= inv;
      for (std::size_t k = 0; k < n; ++k) dp[k * post + q] -= mean;
    }
  }
}

void subtract_line_mean(double* data, std::size_t pre, std::size_t n, std::size_t post) {
  if (!go_parallel(pre * n * post)) {
    subtract_line_mean_serial(data, pre, n, post);
    return;
  }
#ifdef _OPENMP
  const double inv = 1.0 / static_cast<double>(n);
  const std::size_t lines = pre * post;
#pragma omp parallel for schedule(static)
  for (long long li = 0; li < static_cast<long long>(lines); ++li) {
    const std::size_t p = static_cast<std::size_t>(li) / post;
    const std::size_t q = static_cast<std::size_t>(li) % post;
    double* dp = data + p * n * post;
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) mean += dp[k * post + q];
    mean *= inv;
    for (std::size_t k = 0; k < n; ++k) dp[k * post + q] -= mean;
  }
#endif
}

double max_abs_line_integral_serial(const double* in, std::size_t pre, std::size_t n,
                                    std::size_t post, double h) {
  double worst = 0.0;
  for (std::size_t p = 0; p < pre; ++p) {
    const double* ip = in + p * n * post;
    for (std::size_t q = 0; q < post; ++q) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += ip[k * post + q];
      worst = std::max(worst, std::abs(h * s));
    }
  }
  return worst;
}

double max_abs_line_integral(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                             double h) {
  if (!go_parallel(pre * n * post)) return max_abs_line_integral_serial(in, pre, n, post, h);
#ifdef _OPENMP
  double worst = 0.0;
  const std::size_t lines = pre * post;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (long long li = 0; li < static_cast<long long>(lines); ++li) {
    const std::size_t p = static_cast<std::size_t>(li) / post;
    const std::size_t q = static_cast<std::size_t>(li) % post;
    const double* ip = in + p * n * post;
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += ip[k * post + q];
    worst = std::max(worst, std::abs(h * s));
  }
  return worst;
#else
  return 0.0;
#endif
}

// ---------------------------------------------------------------------------

namespace {

template <class ChunkSum>
double chunked_reduce(std::size_t n, bool parallel, ChunkSum&& chunk_sum) {
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  if (nchunks <= 1 || !parallel) {
    double total = 0.0;
    for (std::size_t c = 0; c < nchunks; ++c)
      total += chunk_sum(c * kChunk, std::min(n, (c + 1) * kChunk));
    return total;
  }
  std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    partial[static_cast<std::size_t>(c)] = chunk_sum(lo, std::min(n, lo + kChunk));
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace

double dot_serial(const double* a, const double* b, std::size_t n) {
  return chunked_reduce(n, false, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double dot(const double* a, const double* b, std::size_t n) {
  return chunked_reduce(n, go_parallel(n), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double dot_weighted_serial(const double* a, const double* b, const double* w, std::size_t n) {
  return chunked_reduce(n, false, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i] * w[i];
    return s;
  });
}

double dot_weighted(const double* a, const double* b, const double* w, std::size_t n) {
  return chunked_reduce(n, go_parallel(n), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i] * w[i];
    return s;
  });
}

}  // namespace exalm::kern
