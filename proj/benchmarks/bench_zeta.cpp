#include <benchmark/benchmark.h>

#include "latcert/certify.hpp"
#include "latcert/energy.hpp"
#include "latcert/lattice.hpp"
#include "latcert/zeta.hpp"

namespace {

void BM_EpsteinPartial(benchmark::State& state) {
    const latcert::DomainPoint p{0.24, 0.97};
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(latcert::epstein_partial(p, 6.0, {N}));
    }
    state.SetItemsProcessed(state.iterations() * latcert::term_count({N}));
}
BENCHMARK(BM_EpsteinPartial)->Arg(40)->Arg(100)->Arg(200)->Arg(400);

void BM_EpsteinCertified(benchmark::State& state) {
    const latcert::DomainPoint p{0.24, 0.97};
    const double tol = 1e-8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(latcert::epstein_certified(p, 6.0, tol));
    }
}
BENCHMARK(BM_EpsteinCertified);

void BM_QuotientQ(benchmark::State& state) {
    const latcert::DomainPoint p{0.24, 0.97};
    const latcert::ExponentPair e{12.0, 6.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(latcert::quotient_Q(p, e, 1e-8));
    }
}
BENCHMARK(BM_QuotientQ);

void BM_LocalLipschitz(benchmark::State& state) {
    latcert::Cell cell;
    cell.x_lo = 0.24;
    cell.x_hi = 0.25;
    cell.y_lo = 0.97;
    cell.y_hi = 0.98;
    const latcert::ExponentPair e{12.0, 6.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(latcert::local_lipschitz(cell, e, 1e-8));
    }
}
BENCHMARK(BM_LocalLipschitz);

}  // namespace

BENCHMARK_MAIN();
