#pragma once

// Data-parallel inner loops used by the supra operator and the eigensolver.
//
// Every kernel exists twice: a plain serial loop kept as the reference
// implementation, and an OpenMP version. Both compute each output element
// with the same operation order, so spmv and coupling agree bit for bit.
// Reductions (dot, norm) use fixed per-thread chunks combined in thread
// order: deterministic for a given thread count, though not bitwise equal
// to the serial sum.

#include <span>

#include "perron/csr.hpp"

namespace perron::kernels {

enum class Exec { serial, parallel };

/// out = A * in
void spmv(Exec exec, const CsrMatrix& a, std::span<const double> in, std::span<double> out);

/// out[k*n + i] += gamma * (sum_m in[m*n + i] - in[k*n + i]) for every layer k.
/// This is the product with gamma * (1 1^T (x) I_n - I).
void add_uniform_coupling(Exec exec, int n, int layers, double gamma,
                          std::span<const double> in, std::span<double> out);

double dot(Exec exec, std::span<const double> a, std::span<const double> b);
double norm2(Exec exec, std::span<const double> a);

/// y += alpha * x
void axpy(Exec exec, double alpha, std::span<const double> x, std::span<double> y);
/// x *= alpha
void scale(Exec exec, double alpha, std::span<double> x);

/// Number of threads the parallel path would use.
int max_threads();

} // namespace perron::kernels
