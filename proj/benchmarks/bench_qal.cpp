#include <qal/profile.hpp>

#include <benchmark/benchmark.h>

using namespace qal;

static void BM_DyadicMul(benchmark::State& state) {
    Dyadic a = dy_round(Dyadic::parse_rounded("-1.754877666246692760049508896", 400), static_cast<int>(state.range(0)),
                        Rounding::nearest);
    for (auto _ : state) benchmark::DoNotOptimize(a * a);
}
BENCHMARK(BM_DyadicMul)->Arg(64)->Arg(256)->Arg(1024);

static void BM_CriticalOrbit(benchmark::State& state) {
    ParamOracle o = superstable_center(3);
    DyadicInterval C = o.enclose(64);
    Precision p(working_precision(64));
    for (auto _ : state) benchmark::DoNotOptimize(critical_orbit(C, static_cast<int>(state.range(0)), p));
}
BENCHMARK(BM_CriticalOrbit)->Arg(16)->Arg(256);

static void BM_ApproximateAttracting(benchmark::State& state) {
    for (auto _ : state) {
        ParamOracle o = oracle_exact(Dyadic::ratio(-1, 1));
        benchmark::DoNotOptimize(approximate(o, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_ApproximateAttracting)->Arg(8)->Arg(16)->Arg(32);

static void BM_ApproximateParabolic(benchmark::State& state) {
    Hints h;
    h.period = 3;
    h.case_tag = CaseTag::c1c;
    for (auto _ : state) {
        ParamOracle o = oracle_exact(Dyadic::ratio(-7, 2));
        benchmark::DoNotOptimize(approximate(o, static_cast<int>(state.range(0)), h));
    }
}
BENCHMARK(BM_ApproximateParabolic)->Arg(8)->Arg(16);

static void BM_PixelQuery(benchmark::State& state) {
    ParamOracle o = superstable_center(3);
    AttractorCertificate cert = *certify_attractor(o, 12).certificate;
    long i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(pixel_query(cert, 12, Dyadic::ratio(i++ % 16384 - 8192, 12)));
}
BENCHMARK(BM_PixelQuery);

static void BM_WindowEndpoints(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(window_endpoints(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_WindowEndpoints)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_SuperstableCenters(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(superstable_centers(static_cast<int>(state.range(0)), 100));
}
BENCHMARK(BM_SuperstableCenters)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_DetectRenormalization(benchmark::State& state) {
    for (auto _ : state) {
        ParamOracle o = superstable_center(3);
        benchmark::DoNotOptimize(detect_renormalization(o, 4));
    }
}
BENCHMARK(BM_DetectRenormalization)->Unit(benchmark::kMillisecond);

static void BM_EscapeTime(benchmark::State& state) {
    Dyadic eps = dy_pow2(-state.range(0));
    DyadicInterval gate(Dyadic::ratio(-1, 1), Dyadic::ratio(1, 1));
    for (auto _ : state) benchmark::DoNotOptimize(escape_time(eps, gate));
}
BENCHMARK(BM_EscapeTime)->Arg(10)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
