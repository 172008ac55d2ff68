#include <benchmark/benchmark.h>

#include "sgred/integrator.hpp"
#include "sgred/reductions.hpp"
#include "sgred/reduced_systems.hpp"
#include "sgred/sg2d.hpp"

using namespace sgred;

namespace {

ReducedConstants tri_constants() {
    ReducedConstants c;
    c.nu = {1.0, 0.0};
    c.k = {1.0, 0.0};
    c.K5 = {0.3, 0.0};
    c.K6 = {0.2, 0.0};
    return c;
}

void BM_Jet3Product(benchmark::State& state) {
    Rng rng(1);
    Jet3 a = Jet3::constant(rng.box(), {});
    Jet3 b = Jet3::constant(rng.box(), {});
    for (int m = 1; m < 8; ++m) {
        a[m] = rng.box();
        b[m] = rng.box();
    }
    for (auto _ : state) {
        Jet3 c = a * b;
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_Jet3Product);

void BM_Jet3Log(benchmark::State& state) {
    Rng rng(2);
    Jet3 a = Jet3::constant(Cx{1.5, 0.2}, {});
    for (int m = 1; m < 8; ++m) a[m] = rng.box();
    for (auto _ : state) {
        Jet3 c = log(a);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_Jet3Log);

void BM_ReducedRhsTri(benchmark::State& state) {
    ReducedConstants c = tri_constants();
    ReducedState s{Cx{0.8, 0.2}, {0.4, 0.1}, {-0.2, 0.3}, {0.5, -0.1}, {0.1, 0.2}};
    for (auto _ : state) {
        auto r = reduced_rhs(ReducedCase::tri, c, s);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_ReducedRhsTri);

void BM_IntegrateTriUnitPath(benchmark::State& state) {
    ReducedConstants c = tri_constants();
    Cx xi0{0.8, 0.0};
    ReducedState s0{xi0, {0.4, 0.1}, {-0.2, 0.3}, {0.5, -0.1}, {0.1, 0.2}};
    ComplexPath path({xi0, xi0 + Cx{1.0, 0.2}});
    for (auto _ : state) {
        Trajectory tr = integrate_reduced(ReducedCase::tri, c, s0, path, 1e-10);
        benchmark::DoNotOptimize(tr.max_drift2());
    }
}
BENCHMARK(BM_IntegrateTriUnitPath);

void BM_AdmissibilityGenericExample(benchmark::State& state) {
    ReducedConstants c;
    c.nu = {1.3, -0.2};
    c.k = {1.0, 0.0};
    c.K5 = {0.0, 1.0};
    c.K7 = {0.3, 0.1};
    c.K6 = 2.0 * c.K5 * c.K7;
    TimeFunctions tf;
    auto rv = build_reduction(ReductionCaseSpec::generic_example, tf, c);
    for (auto _ : state) {
        auto r = admissibility_residuals(rv, {1.1, 0.31}, {2.3, -0.22}, {0.25, 0.13});
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_AdmissibilityGenericExample);

void BM_FuchsIndices(benchmark::State& state) {
    Cx nu{1.7, 0.4};
    for (auto _ : state) {
        auto idx = fuchs_indices(nu);
        benchmark::DoNotOptimize(idx);
    }
}
BENCHMARK(BM_FuchsIndices);

}  // namespace

BENCHMARK_MAIN();
