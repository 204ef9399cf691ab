#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cgolab::kernels {

using cplx = std::complex<double>;

// Every kernel below exists in an OpenMP-parallel and a serial variant.
// Reductions accumulate per fixed-size block and combine the block partials
// in index order, so serial and parallel runs produce bitwise-identical
// results for any thread count. The serial variant is the reference the
// tests compare against; the bench tool times both.
enum class ExecMode { serial, parallel };

ExecMode mode();
void set_mode(ExecMode m);
int worker_count();
void set_worker_count(int workers);

inline constexpr std::size_t kBlock = 8192;

namespace detail {
inline std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }
}  // namespace detail

// body(i) for i in [0, count); no reduction, so the partition is free and a
// plain static schedule is used.
template <class Body>
void for_each(std::size_t count, Body&& body, ExecMode m = mode()) {
    if (m == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) body(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < count; ++i) body(i);
    }
}

// sum of term(i); deterministic blocked accumulation
template <class Term>
double sum(std::size_t count, Term&& term, ExecMode m = mode()) {
    const std::size_t nb = detail::block_count(count);
    std::vector<double> partial(nb, 0.0);
    if (m == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
            const std::size_t hi = lo + kBlock < count ? lo + kBlock : count;
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += term(i);
            partial[static_cast<std::size_t>(b)] = s;
        }
    } else {
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t lo = b * kBlock;
            const std::size_t hi = lo + kBlock < count ? lo + kBlock : count;
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += term(i);
            partial[b] = s;
        }
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

template <class Term>
cplx sum_cplx(std::size_t count, Term&& term, ExecMode m = mode()) {
    const std::size_t nb = detail::block_count(count);
    std::vector<cplx> partial(nb, cplx(0.0, 0.0));
    if (m == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
            const std::size_t hi = lo + kBlock < count ? lo + kBlock : count;
            cplx s(0.0, 0.0);
            for (std::size_t i = lo; i < hi; ++i) s += term(i);
            partial[static_cast<std::size_t>(b)] = s;
        }
    } else {
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t lo = b * kBlock;
            const std::size_t hi = lo + kBlock < count ? lo + kBlock : count;
            cplx s(0.0, 0.0);
            for (std::size_t i = lo; i < hi; ++i) s += term(i);
            partial[b] = s;
        }
    }
    cplx total(0.0, 0.0);
    for (const cplx& p : partial) total += p;
    return total;
}

// max of term(i) with smallest-index tie break
template <class Term>
double max(std::size_t count, Term&& term, std::size_t* argmax = nullptr, ExecMode m = mode()) {
    const std::size_t nb = detail::block_count(count);
    std::vector<double> pmax(nb, 0.0);
    std::vector<std::size_t> pidx(nb, 0);
    auto block_scan = [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = lo + kBlock < count ? lo + kBlock : count;
        double best = term(lo);
        std::size_t besti = lo;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            const double v = term(i);
            if (v > best) {
                best = v;
                besti = i;
            }
        }
        pmax[b] = best;
        pidx[b] = besti;
    };
    if (count == 0) return 0.0;
    if (m == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) block_scan(static_cast<std::size_t>(b));
    } else {
        for (std::size_t b = 0; b < nb; ++b) block_scan(b);
    }
    double best = pmax[0];
    std::size_t besti = pidx[0];
    for (std::size_t b = 1; b < nb; ++b) {
        if (pmax[b] > best) {
            best = pmax[b];
            besti = pidx[b];
        }
    }
    if (argmax) *argmax = besti;
    return best;
}

// Row-structured reductions: term(row) does the contiguous inner work and
// returns the row's contribution. One partial per row keeps the combination
// order fixed, so results are identical for any thread count.
template <class RowTerm>
double sum_rows(std::size_t rows, RowTerm&& term, ExecMode m = mode()) {
    std::vector<double> partial(rows, 0.0);
    if (m == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r)
            partial[static_cast<std::size_t>(r)] = term(static_cast<std::size_t>(r));
    } else {
        for (std::size_t r = 0; r < rows; ++r) partial[r] = term(r);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

template <class RowTerm>
double max_rows(std::size_t rows, RowTerm&& term, ExecMode m = mode()) {
    if (rows == 0) return 0.0;
    std::vector<double> partial(rows, 0.0);
    if (m == ExecMode::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r)
            partial[static_cast<std::size_t>(r)] = term(static_cast<std::size_t>(r));
    } else {
        for (std::size_t r = 0; r < rows; ++r) partial[r] = term(r);
    }
    double best = partial[0];
    for (std::size_t r = 1; r < rows; ++r)
        if (partial[r] > best) best = partial[r];
    return best;
}

}  // namespace cgolab::kernels
