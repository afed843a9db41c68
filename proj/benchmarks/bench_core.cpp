#include <benchmark/benchmark.h>

#include "bgc/canonical.hpp"
#include "bgc/complex.hpp"

namespace {

void BM_Canonicalize(benchmark::State& state) {
    bgc::GraphCatalog catalog;
    const auto& graphs = catalog.admissible(5, 0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        for (const bgc::Multigraph& g : graphs) benchmark::DoNotOptimize(bgc::canonicalize(g));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * graphs.size()));
}
BENCHMARK(BM_Canonicalize)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_BuildBasis(benchmark::State& state) {
    const bgc::SliceKey key{bgc::Flavor::Odd, bgc::VariantSpec::parse("full"), 5, 1,
                            static_cast<int>(state.range(0))};
    for (auto _ : state) {
        bgc::GraphCatalog catalog;
        benchmark::DoNotOptimize(bgc::build_basis(key, catalog));
    }
}
BENCHMARK(BM_BuildBasis)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_DifferentialRank(benchmark::State& state) {
    bgc::SliceStore store;
    const bgc::SliceKey key{bgc::Flavor::Even, bgc::VariantSpec::parse("full"), 5, 0,
                            static_cast<int>(state.range(0))};
    const bgc::SparseIntMatrix& d = store.differential(key);
    for (auto _ : state) benchmark::DoNotOptimize(bgc::rank_consensus(d).rank);
    state.counters["rows"] = d.rows();
    state.counters["cols"] = d.cols();
}
BENCHMARK(BM_DifferentialRank)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
