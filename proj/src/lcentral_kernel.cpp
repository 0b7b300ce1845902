#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <immintrin.h>
#include <numeric>

#include "ltail/errors.hpp"
#include "ltail/lcentral.hpp"

namespace ltail {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr std::size_t kBatch = 16;

struct Job {
    std::size_t index;
    std::int64_t d;
    std::uint64_t period;
    std::uint64_t n_max;
    double k;
};

// sum_{i<len} b[i] chi[i] w0 r^i
// gcc scalarizes int8 -> double vector conversions, so the wide paths use intrinsics
inline double chunk_sum(const double* __restrict b, const std::int8_t* __restrict chi, std::size_t len, double w0,
                        double r) {
    alignas(64) double wl[32];
    wl[0] = w0;
    for (int l = 1; l < 32; ++l) wl[l] = wl[l - 1] * r;
    std::size_t i = 0;
    double head = 0;
#if defined(__AVX512F__)
    __m512d w[4], acc[4];
    for (int j = 0; j < 4; ++j) {
        w[j] = _mm512_load_pd(wl + 8 * j);
        acc[j] = _mm512_setzero_pd();
    }
    const __m512d step = _mm512_set1_pd(wl[31] * r / w0);
    for (; i + 32 <= len; i += 32) {
        for (int j = 0; j < 4; ++j) {
            __m128i c8 = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(chi + i + 8 * j));
            __m512d c = _mm512_cvtepi32_pd(_mm256_cvtepi8_epi32(c8));
            acc[j] = _mm512_fmadd_pd(_mm512_mul_pd(_mm512_loadu_pd(b + i + 8 * j), c), w[j], acc[j]);
            w[j] = _mm512_mul_pd(w[j], step);
        }
    }
    head = _mm512_reduce_add_pd(_mm512_add_pd(_mm512_add_pd(acc[0], acc[1]), _mm512_add_pd(acc[2], acc[3])));
#elif defined(__AVX2__) && defined(__FMA__)
    __m256d w[4], acc[4];
    for (int j = 0; j < 4; ++j) {
        w[j] = _mm256_load_pd(wl + 4 * j);
        acc[j] = _mm256_setzero_pd();
    }
    const __m256d step = _mm256_set1_pd(wl[15] * r / w0);
    for (; i + 16 <= len; i += 16) {
        for (int j = 0; j < 4; ++j) {
            std::int32_t raw;
            std::memcpy(&raw, chi + i + 4 * j, 4);
            __m256d c = _mm256_cvtepi32_pd(_mm_cvtepi8_epi32(_mm_cvtsi32_si128(raw)));
            acc[j] = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(b + i + 4 * j), c), w[j], acc[j]);
            w[j] = _mm256_mul_pd(w[j], step);
        }
    }
    __m256d a = _mm256_add_pd(_mm256_add_pd(acc[0], acc[1]), _mm256_add_pd(acc[2], acc[3]));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, a);
    head = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
#endif
    // i is a multiple of the vector stride here; restart the weight from w0 r^i
    double wt = w0 * std::pow(r, static_cast<double>(i));
    double tail = 0;
    for (; i < len; ++i) {
        tail += b[i] * static_cast<double>(chi[i]) * wt;
        wt *= r;
    }
    return head + tail;
}

void run_batch(const SeriesCoefficients& coeffs, const Job* jobs, std::size_t nj, std::vector<CentralValue>& out,
               std::vector<std::vector<std::int8_t>>& tables) {
    const EllipticCurve& c = coeffs.curve();
    std::uint64_t top = 0;
    std::uint64_t off[kBatch];
    double total[kBatch];
    for (std::size_t t = 0; t < nj; ++t) {
        fill_character_table(jobs[t].d, kChunk, tables[t]);
        top = std::max(top, jobs[t].n_max);
        off[t] = 1 % jobs[t].period;
        total[t] = 0;
    }
    const double* b = coeffs.data();
    for (std::uint64_t n0 = 1; n0 <= top; n0 += kChunk) {
        for (std::size_t t = 0; t < nj; ++t) {
            const Job& J = jobs[t];
            if (n0 > J.n_max) continue;
            std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, J.n_max - n0 + 1));
            double w0 = std::exp(-J.k * static_cast<double>(n0));
            total[t] += chunk_sum(b + n0, tables[t].data() + off[t], len, w0, std::exp(-J.k));
            off[t] = (off[t] + kChunk) % J.period;
        }
    }
    for (std::size_t t = 0; t < nj; ++t) {
        const Job& J = jobs[t];
        CentralValue& v = out[J.index];
        v.d = J.d;
        v.value = 2.0 * total[t];
        v.n_max = J.n_max;
        v.tail_bound = tail_bound(c, J.d, J.n_max);
    }
}

}  // namespace

std::vector<CentralValue> sweep_parallel(const SeriesCoefficients& coeffs, const std::vector<std::int64_t>& ds,
                                         double rel_tol) {
    const EllipticCurve& c = coeffs.curve();
    std::vector<CentralValue> out(ds.size());
    std::vector<Job> jobs;
    jobs.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::int64_t d = ds[i];
        if (d == 0 || !is_fundamental(d)) fail(Errc::NonFundamental, "d=" + std::to_string(d));
        if (root_number(c, d) == -1) {
            out[i] = CentralValue{d, 0.0, 0, 0.0};
            continue;
        }
        Job J{i, d, static_cast<std::uint64_t>(std::llabs(d)), truncation_length(c, d, rel_tol), series_decay(c, d)};
        if (J.n_max > coeffs.limit())
            fail(Errc::TableTooSmall,
                 "need " + std::to_string(J.n_max) + " coefficients, have " + std::to_string(coeffs.limit()));
        jobs.push_back(J);
    }
    std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
        return a.n_max != b.n_max ? a.n_max < b.n_max : a.index < b.index;
    });
    const std::int64_t nb = static_cast<std::int64_t>((jobs.size() + kBatch - 1) / kBatch);
#pragma omp parallel
    {
        std::vector<std::vector<std::int8_t>> tables(kBatch);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t bi = nb - 1; bi >= 0; --bi) {
            std::size_t lo = static_cast<std::size_t>(bi) * kBatch;
            std::size_t nj = std::min(kBatch, jobs.size() - lo);
            run_batch(coeffs, jobs.data() + lo, nj, out, tables);
        }
    }
    return out;
}

CentralValue central_value_entry(const SeriesCoefficients& coeffs, std::int64_t d, double rel_tol) {
    return sweep_parallel(coeffs, std::vector<std::int64_t>{d}, rel_tol).front();
}

std::vector<CentralValue> sweep_serial(const SeriesCoefficients& coeffs, const std::vector<std::int64_t>& ds,
                                       double rel_tol) {
    std::vector<CentralValue> out;
    out.reserve(ds.size());
    for (auto d : ds) out.push_back(central_value_reference(coeffs, d, rel_tol));
    return out;
}

}  // namespace ltail
