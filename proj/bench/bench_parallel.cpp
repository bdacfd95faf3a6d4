// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "oracle.hpp"
#include "specnova/batch.hpp"
#include "specnova/massindex.hpp"
#include "specnova/synth.hpp"

using namespace specnova;

namespace {

std::vector<msio::ProteinRecord> proteins(std::size_t n) {
    oracle::Rng rng(7);
    std::vector<msio::ProteinRecord> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::string seq;
        for (int j = 0; j < 20; ++j) seq += rng.tryptic(6, 20);
        out.push_back({"B" + std::to_string(i), "", seq});
    }
    return out;
}

massindex::BuildOptions build_options() {
    massindex::BuildOptions o;
    o.mods.fixed = chem::parse_mod_specs("C:cam");
    o.mods.variable = chem::parse_mod_specs("M:ox,NQ:deam");
    return o;
}

struct Workload {
    massindex::MassIndex index;
    std::vector<msio::SpectrumRecord> spectra;
    search::KnapsackTable knapsack;
    scoring::IonEvidenceScorer scorer;
};

const Workload& workload() {
    static const Workload w = [] {
        Workload w;
        w.index = massindex::build_index(proteins(200), build_options());
        oracle::Rng rng(8);
        double max_mass = 0;
        for (int i = 0; i < 64; ++i) {
            const auto& e = w.index.entries()[static_cast<std::size_t>(rng.uniform_int(0, int(w.index.size()) - 1))];
            cli::SynthOptions o;
            o.id = "b" + std::to_string(i);
            o.noise_peaks = 20;
            o.noise_seed = static_cast<std::uint64_t>(i);
            w.spectra.push_back(cli::synth_spectrum(e.peptide, o));
            max_mass = std::max(max_mass, e.neutral_mass);
        }
        w.knapsack = search::KnapsackTable::build(std::span<const chem::ResidueToken>(chem::all_tokens()), max_mass + 1);
        return w;
    }();
    return w;
}

void set_threads(benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
}

void BM_BuildIndexSerial(benchmark::State& state) {
    const auto p = proteins(500);
    for (auto _ : state) benchmark::DoNotOptimize(massindex::build_index_serial(p, build_options()));
}

void BM_BuildIndexParallel(benchmark::State& state) {
    set_threads(state);
    const auto p = proteins(500);
    for (auto _ : state) benchmark::DoNotOptimize(massindex::build_index(p, build_options()));
}

template <search::Engine E, bool Parallel>
void BM_Batch(benchmark::State& state) {
    if (Parallel) set_threads(state);
    const auto& w = workload();
    search::BatchRequest r{w.spectra, &w.scorer, &w.index, &w.knapsack, {}, E};
    for (auto _ : state) {
        benchmark::DoNotOptimize(Parallel ? search::search_batch(r) : search::search_batch_serial(r));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.spectra.size()));
}

}  // namespace

BENCHMARK(BM_BuildIndexSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BuildIndexParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Batch<search::Engine::db, false>)->Name("BM_DbSearchSerial")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Batch<search::Engine::db, true>)->Name("BM_DbSearchParallel")->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Batch<search::Engine::denovo, false>)->Name("BM_DenovoSerial")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Batch<search::Engine::denovo, true>)->Name("BM_DenovoParallel")->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
