#include "specnova/batch.hpp"

#include "specnova/errors.hpp"

namespace specnova::search {

namespace {

void check(const BatchRequest& r) {
    if (!r.scorer) throw InvalidInput("batch search needs a scorer");
    if (r.engine != Engine::denovo && !r.index) throw InvalidInput("database search needs an index");
    if (r.engine != Engine::db && !r.knapsack) throw InvalidInput("de novo search needs a knapsack table");
    r.config.validate();
}

SpectrumOutcome search_one(const BatchRequest& r, const msio::SpectrumRecord& spectrum) {
    SpectrumOutcome out;
    const double mass = msio::precursor_neutral_mass(spectrum);
    switch (r.engine) {
        case Engine::db: {
            auto s = db_search(spectrum, mass, *r.index, *r.scorer, r.config);
            out.psms = std::move(s.psms);
            out.diagnostics = std::move(s.diagnostics);
            break;
        }
        case Engine::denovo: {
            auto s = denovo_beam_search(spectrum, mass, *r.scorer, *r.knapsack, r.config);
            out.psms = std::move(s.psms);
            out.diagnostics = std::move(s.diagnostics);
            break;
        }
        case Engine::hybrid: {
            auto d = hybrid_identify(spectrum, mass, *r.index, *r.scorer, *r.knapsack, r.config);
            if (const auto* chosen = d.chosen_psm()) out.psms.push_back(*chosen);
            out.diagnostics = d.diagnostics;
            out.decision = std::move(d);
            break;
        }
    }
    return out;
}

}  // namespace

std::vector<SpectrumOutcome> search_batch_serial(const BatchRequest& request) {
    check(request);
    std::vector<SpectrumOutcome> out;
    out.reserve(request.spectra.size());
    for (const auto& s : request.spectra) out.push_back(search_one(request, s));
    return out;
}

std::vector<SpectrumOutcome> search_batch(const BatchRequest& request) {
    check(request);
    const auto n = static_cast<std::ptrdiff_t>(request.spectra.size());
    std::vector<SpectrumOutcome> out(request.spectra.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = search_one(request, request.spectra[i]);
        } catch (...) {
#pragma omp critical(specnova_batch_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace specnova::search
