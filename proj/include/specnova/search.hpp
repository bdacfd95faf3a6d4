#pragma once

// Identification engines: database search, de novo beam search constrained
// by a residue-mass knapsack table, hybrid arbitration, and target-decoy
// q-value estimation.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specnova/chem.hpp"
#include "specnova/massindex.hpp"
#include "specnova/msio.hpp"
#include "specnova/scorer.hpp"

namespace specnova::search {

/// Which residue-only masses (no water) are sums of residue masses.
///
/// Reachability is computed exactly on a 1e-5 Da grid (every residue mass is
/// a multiple of that quantum) and then projected onto bins of width
/// `resolution`: bin k is feasible iff some multiset of residues sums to
/// within ±resolution of k·resolution.
class KnapsackTable {
public:
    KnapsackTable() = default;

    /// Throws InvalidInput for resolution below the mass quantum or max_mass <= 0.
    static KnapsackTable build(std::span<const double> residue_masses, double max_mass,
                               double resolution = 0.0005);

    /// Over the given residue tokens.
    static KnapsackTable build(std::span<const chem::ResidueToken> alphabet, double max_mass,
                               double resolution = 0.0005);

    double resolution() const noexcept { return resolution_; }
    double max_mass() const noexcept { return max_mass_; }
    std::size_t bin_count() const noexcept { return bins_; }

    bool feasible_bin(std::size_t k) const noexcept {
        return k < bins_ && ((bits_[k >> 6] >> (k & 63)) & 1u);
    }

    /// Bin round(mass / resolution).
    bool feasible(double mass) const noexcept;

    /// True when any bin in [round(lo/res), round(hi/res)] is feasible.
    bool any_feasible(double lo, double hi) const noexcept;

private:
    std::vector<std::uint64_t> bits_;
    std::size_t bins_ = 0;
    double resolution_ = 0.0;
    double max_mass_ = 0.0;
};

struct SearchConfig {
    chem::Tolerance precursor_tolerance = chem::Tolerance::ppm(20.0);
    int beam_width = 10;
    int max_length = 50;
    double knapsack_resolution = 0.0005;
    double fdr_threshold = 0.01;
    /// Ranked db candidates kept per spectrum.
    int db_top_k = 2;
    /// Residue tokens de novo may emit.
    std::vector<chem::ResidueToken> alphabet{chem::all_tokens().begin(), chem::all_tokens().end()};

    void validate() const;
};

struct Diagnostic {
    std::string spectrum_id;
    std::string code;
    std::string detail;
};

struct SearchOutcome {
    std::vector<msio::PsmRecord> psms;
    std::vector<Diagnostic> diagnostics;
};

SearchOutcome denovo_beam_search(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                                 const scoring::StepScorer& scorer, const KnapsackTable& knapsack,
                                 const SearchConfig& cfg);

SearchOutcome db_search(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                        const massindex::MassIndex& index, const scoring::StepScorer& scorer,
                        const SearchConfig& cfg);

enum class HybridChoice { db, denovo, none };

struct HybridDecision {
    std::optional<msio::PsmRecord> db_best;
    std::optional<msio::PsmRecord> denovo_best;
    HybridChoice chosen = HybridChoice::none;
    /// denovo − db when both are present.
    std::optional<double> margin;
    std::vector<Diagnostic> diagnostics;

    const msio::PsmRecord* chosen_psm() const noexcept;
};

/// De novo wins only with a strictly higher score; ties go to the database.
HybridDecision hybrid_identify(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                               const massindex::MassIndex& index, const scoring::StepScorer& scorer,
                               const KnapsackTable& knapsack, const SearchConfig& cfg);

/// Target-decoy competition over rank-1 PSMs. Records with rank != 1 are
/// returned unchanged. q-values are capped at 1.
std::vector<msio::PsmRecord> estimate_fdr(std::vector<msio::PsmRecord> psms);

/// Targets with q_value <= threshold, input order preserved.
std::vector<msio::PsmRecord> filter_at_fdr(const std::vector<msio::PsmRecord>& psms, double threshold);

/// Tie-break for equal scores: lexicographic on the canonical token string.
bool ranks_before(const msio::PsmRecord& a, const msio::PsmRecord& b);

}  // namespace specnova::search
