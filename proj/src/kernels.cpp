#include "perron/kernels.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace perron::kernels {

namespace {

using Index = std::ptrdiff_t;

double row_product(const CsrMatrix& a, std::span<const double> in, int r) {
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto va = a.values();
    double acc = 0.0;
    for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) {
        acc += va[p] * in[ci[p]];
    }
    return acc;
}

void spmv_serial(const CsrMatrix& a, std::span<const double> in, std::span<double> out) {
    for (int r = 0; r < a.rows(); ++r) {
        out[r] = row_product(a, in, r);
    }
}

void spmv_parallel(const CsrMatrix& a, std::span<const double> in, std::span<double> out) {
    const int rows = a.rows();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < rows; ++r) {
        out[r] = row_product(a, in, r);
    }
}

double copy_sum(int n, int layers, std::span<const double> in, int i) {
    double s = 0.0;
    for (int m = 0; m < layers; ++m) {
        s += in[static_cast<std::size_t>(m) * n + i];
    }
    return s;
}

void coupling_serial(int n, int layers, double gamma, std::span<const double> in,
                     std::span<double> out) {
    for (int i = 0; i < n; ++i) {
        const double s = copy_sum(n, layers, in, i);
        for (int k = 0; k < layers; ++k) {
            const auto a = static_cast<std::size_t>(k) * n + i;
            out[a] += gamma * (s - in[a]);
        }
    }
}

void coupling_parallel(int n, int layers, double gamma, std::span<const double> in,
                       std::span<double> out) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double s = copy_sum(n, layers, in, i);
        for (int k = 0; k < layers; ++k) {
            const auto a = static_cast<std::size_t>(k) * n + i;
            out[a] += gamma * (s - in[a]);
        }
    }
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double dot_parallel(std::span<const double> a, std::span<const double> b) {
    const Index n = static_cast<Index>(a.size());
    std::vector<double> partial(static_cast<std::size_t>(max_threads()), 0.0);
#pragma omp parallel
    {
#ifdef _OPENMP
        const int t = omp_get_thread_num();
        const int nt = omp_get_num_threads();
#else
        const int t = 0;
        const int nt = 1;
#endif
        const Index chunk = (n + nt - 1) / nt;
        const Index lo = std::min(n, chunk * t);
        const Index hi = std::min(n, lo + chunk);
        double acc = 0.0;
        for (Index i = lo; i < hi; ++i) {
            acc += a[i] * b[i];
        }
        partial[t] = acc;
    }
    double sum = 0.0;
    for (double p : partial) {
        sum += p;
    }
    return sum;
}

} // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void spmv(Exec exec, const CsrMatrix& a, std::span<const double> in, std::span<double> out) {
    assert(in.size() == static_cast<std::size_t>(a.cols()));
    assert(out.size() == static_cast<std::size_t>(a.rows()));
    if (exec == Exec::parallel) {
        spmv_parallel(a, in, out);
    } else {
        spmv_serial(a, in, out);
    }
}

void add_uniform_coupling(Exec exec, int n, int layers, double gamma,
                          std::span<const double> in, std::span<double> out) {
    if (gamma == 0.0 || layers < 2) {
        return;
    }
    if (exec == Exec::parallel) {
        coupling_parallel(n, layers, gamma, in, out);
    } else {
        coupling_serial(n, layers, gamma, in, out);
    }
}

double dot(Exec exec, std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return exec == Exec::parallel ? dot_parallel(a, b) : dot_serial(a, b);
}

double norm2(Exec exec, std::span<const double> a) { return std::sqrt(dot(exec, a, a)); }

void axpy(Exec exec, double alpha, std::span<const double> x, std::span<double> y) {
    const Index n = static_cast<Index>(x.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (Index i = 0; i < n; ++i) {
            y[i] += alpha * x[i];
        }
    } else {
        for (Index i = 0; i < n; ++i) {
            y[i] += alpha * x[i];
        }
    }
}

void scale(Exec exec, double alpha, std::span<double> x) {
    const Index n = static_cast<Index>(x.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (Index i = 0; i < n; ++i) {
            x[i] *= alpha;
        }
    } else {
        for (Index i = 0; i < n; ++i) {
            x[i] *= alpha;
        }
    }
}

} // namespace perron::kernels
