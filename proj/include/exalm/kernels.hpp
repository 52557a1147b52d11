#pragma once

#include <cstddef>

namespace exalm::kern {

// Low-level array passes behind the grid operators. Every kernel views its
// input as a dense [pre][n][post] block (row-major, post fastest) and
// transforms each of the pre*post lines of length n independently.
//
// Each kernel ships in two variants: a *_serial reference implementation and
// an OpenMP one. The parallel variants split work only across independent
// lines (or fixed-size chunks for reductions), so they are bitwise identical
// to the serial reference for any thread count. Tests assert that parity.

/// Globally enable/disable the OpenMP variants (used by tests and the
/// kernel benchmark). Returns the previous setting.
bool set_parallel(bool on);
bool parallel_enabled();

// --- line transforms (dispatching wrappers + serial references) ---

/// Cells -> nodes cumulative sum: out[0] = 0, out[k+1] = out[k] + h*in[k].
void scan_cells_to_nodes(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                         double h, double* out);
void scan_cells_to_nodes_serial(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                                double h, double* out);

/// Nodes -> cells midpoint average: out[k] = (in[k] + in[k+1])/2. Line length n nodes -> n-1 cells.
void adjacent_average(const double* in, std::size_t pre, std::size_t n, std::size_t post, double* out);
void adjacent_average_serial(const double* in, std::size_t pre, std::size_t n, std::size_t post, double* out);

/// Nodes -> cells forward difference: out[k] = (in[k+1] - in[k])/h.
void forward_difference(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                        double h, double* out);
void forward_difference_serial(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                               double h, double* out);

/// Cells -> cells midpoint tail sum: out[j] = h*(in[j]/2 + sum_{k>j} in[k]).
/// Discrete adjoint of the midpoint cumulative integral; realizes tail
/// integrals int_x^b at cell centers.
void tail_midpoint(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                   double h, double* out);
void tail_midpoint_serial(const double* in, std::size_t pre, std::size_t n, std::size_t post,
                          double h, double* out);

/// Subtract the line mean in place (projection onto zero-mean lines).
void subtract_line_mean(double* data, std::size_t pre, std::size_t n, std::size_t post);
void subtract_line_mean_serial(double* data, std::size_t pre, std::size_t n, std::size_t post);

/// max over lines of |h * sum_k in[k]|.
double max_abs_line_integral(const double* in, std::size_t pre, std::size_t n, std::size_t post, double h);
double max_abs_line_integral_serial(const double* in, std::size_t pre, std::size_t n, std::size_t post, double h);

// --- reductions (fixed-chunk partial sums; order independent of thread count) ---

double dot(const double* a, const double* b, std::size_t n);
double dot_serial(const double* a, const double* b, std::size_t n);

/// sum_i a[i]*b[i]*w[i]
double dot_weighted(const double* a, const double* b, const double* w, std::size_t n);
double dot_weighted_serial(const double* a, const double* b, const double* w, std::size_t n);

}  // namespace exalm::kern
