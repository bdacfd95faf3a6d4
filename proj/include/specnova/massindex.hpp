#pragma once

// Mass-sorted peptide store for precursor-window candidate lookup.
//
// build_index digests proteins in parallel (OpenMP) and merges the results
// deterministically; build_index_serial is the single-threaded reference
// kept for equivalence testing and benchmarking.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "specnova/chem.hpp"
#include "specnova/digest.hpp"
#include "specnova/msio.hpp"

namespace specnova::massindex {

struct Origin {
    std::string accession;
    bool is_decoy = false;

    friend auto operator<=>(const Origin&, const Origin&) = default;
};

struct PeptideEntry {
    chem::Peptide peptide;
    double neutral_mass = 0.0;
    std::vector<Origin> origins;
    std::string sequence_key;

    /// A sequence seen in target space is always a target.
    bool is_decoy() const noexcept { return !origins.empty() && origins.front().is_decoy; }

    friend bool operator==(const PeptideEntry&, const PeptideEntry&) = default;
};

struct ModificationConfig {
    std::vector<chem::ModSpec> fixed;
    std::vector<chem::ModSpec> variable;
    int max_variable = 3;
};

struct BuildOptions {
    digest::EnzymeRule enzyme = digest::EnzymeRule::trypsin();
    digest::DigestConfig digest;
    ModificationConfig mods;
    bool with_decoys = true;
};

class MassIndex {
public:
    MassIndex() = default;

    /// Takes entries already sorted by (neutral_mass, sequence_key).
    MassIndex(std::vector<PeptideEntry> entries, std::size_t protein_count);

    std::span<const PeptideEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t protein_count() const noexcept { return protein_count_; }

    /// Entries whose mass lies inside ppm_window(neutral_mass, tol), found by
    /// binary search on both bounds. Ascending by mass.
    std::span<const PeptideEntry> query(double neutral_mass, chem::Tolerance tol) const;

    friend bool operator==(const MassIndex&, const MassIndex&) = default;

private:
    std::vector<PeptideEntry> entries_;
    std::size_t protein_count_ = 0;
};

struct IndexStats {
    std::size_t n_entries = 0;
    std::size_t n_targets = 0;
    std::size_t n_decoys = 0;
    double min_mass = 0.0;
    double max_mass = 0.0;
};

IndexStats index_stats(const MassIndex& index);

/// Digest, decoys, modification expansion, mass, dedupe, sort.
MassIndex build_index(std::span<const msio::ProteinRecord> proteins, const BuildOptions& options);
MassIndex build_index_serial(std::span<const msio::ProteinRecord> proteins, const BuildOptions& options);

/// Binary cache, see docs/index_format.md. Throws std::ios_base::failure on
/// I/O errors; load throws FormatError on a bad header or a mass-table
/// fingerprint that differs from this build's.
void save_index(const MassIndex& index, std::ostream& out);
MassIndex load_index(std::istream& in);

inline constexpr std::uint32_t kIndexFormatVersion = 1;

}  // namespace specnova::massindex
