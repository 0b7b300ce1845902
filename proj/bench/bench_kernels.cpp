#include <benchmark/benchmark.h>

#include "ltail/family.hpp"
#include "ltail/lcentral.hpp"
#include "ltail/walk.hpp"

using namespace ltail;

namespace {

// family |d| <= 2e4 with coefficients to the longest truncation
struct Fixture {
    EllipticCurve c = registry_curve("11a1");
    TwistFamily fam = enumerate_union(c, 1, 20000);
    std::uint64_t need = required_coefficients(c, fam, kDefaultRelTol);
    HeckeTable t = HeckeTable::build(c, need);
    SeriesCoefficients coeffs{t, need};
};

const Fixture& fx() {
    static Fixture f;
    return f;
}

void BM_HeckeBuild(benchmark::State& st) {
    auto c = registry_curve("11a1");
    for (auto _ : st) benchmark::DoNotOptimize(HeckeTable::build(c, static_cast<std::uint64_t>(st.range(0))));
}
BENCHMARK(BM_HeckeBuild)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_SweepSerial(benchmark::State& st) {
    auto& f = fx();
    for (auto _ : st) benchmark::DoNotOptimize(sweep_serial(f.coeffs, f.fam.discriminants));
    st.counters["twists"] = static_cast<double>(f.fam.size());
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

void BM_SweepParallel(benchmark::State& st) {
    auto& f = fx();
    for (auto _ : st) benchmark::DoNotOptimize(sweep_parallel(f.coeffs, f.fam.discriminants));
    st.counters["twists"] = static_cast<double>(f.fam.size());
}
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

void BM_CharacterTable(benchmark::State& st) {
    std::int64_t d = -19999;  // 4 |d| period
    for (auto _ : st) benchmark::DoNotOptimize(CharacterTable(d));
}
BENCHMARK(BM_CharacterTable)->Unit(benchmark::kMicrosecond);

void BM_KroneckerLoop(benchmark::State& st) {
    std::int64_t d = -19999;
    for (auto _ : st) {
        int s = 0;
        for (std::int64_t n = 1; n <= 4 * 19999; ++n) s += kronecker(d, n);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_KroneckerLoop)->Unit(benchmark::kMicrosecond);

void BM_TraceFamily(benchmark::State& st) {
    auto& f = fx();
    auto s = build_schedule(1e6, 0.3, EffectiveConstants::desk());
    for (auto _ : st) benchmark::DoNotOptimize(trace_family(f.t, s, f.fam));
}
BENCHMARK(BM_TraceFamily)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
