#pragma once

// Per-spectrum search fanned out over OpenMP threads. search_batch_serial is
// the reference loop; both return outcomes in input order and must agree
// exactly for any thread count.

#include <optional>
#include <span>
#include <vector>

#include "specnova/massindex.hpp"
#include "specnova/msio.hpp"
#include "specnova/scorer.hpp"
#include "specnova/search.hpp"

namespace specnova::search {

enum class Engine { db, denovo, hybrid };

struct BatchRequest {
    std::span<const msio::SpectrumRecord> spectra;
    const scoring::StepScorer* scorer = nullptr;
    const massindex::MassIndex* index = nullptr;  // db, hybrid
    const KnapsackTable* knapsack = nullptr;      // denovo, hybrid
    SearchConfig config;
    Engine engine = Engine::db;
};

struct SpectrumOutcome {
    std::vector<msio::PsmRecord> psms;
    std::vector<Diagnostic> diagnostics;
    std::optional<HybridDecision> decision;
};

std::vector<SpectrumOutcome> search_batch(const BatchRequest& request);
std::vector<SpectrumOutcome> search_batch_serial(const BatchRequest& request);

}  // namespace specnova::search
