#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "specnova/msio.hpp"

namespace specnova::digest {

struct EnzymeRule {
    std::string name;
    std::string cleave_after;
    bool proline_exception = false;

    /// Cleaves after K and R.
    static EnzymeRule trypsin(bool proline_exception = false);
};

/// "trypsin", "trypsin_p" (no cleavage before P), "lysc", "argc".
EnzymeRule enzyme_by_name(std::string_view name);

struct DigestConfig {
    int max_missed_cleavages = 2;
    int min_length = 6;
    int max_length = 50;

    /// Throws InvalidInput when bounds are inconsistent.
    void validate() const;
};

struct DigestedPeptide {
    std::string sequence;
    int missed_cleavages;
    std::string accession;
    std::size_t start;  // 0-based offset in the protein

    friend bool operator==(const DigestedPeptide&, const DigestedPeptide&) = default;
};

/// 1-based positions i such that the bond between residue i and i+1 is
/// cleaved. The C-terminal end of the sequence is never reported.
std::vector<std::size_t> cleavage_sites(std::string_view sequence, const EnzymeRule& rule);

/// Fragments between consecutive sites merged across up to
/// max_missed_cleavages internal sites, ordered by (start, length).
/// Peptides containing ambiguous residues are dropped.
std::vector<DigestedPeptide> digest(const msio::ProteinRecord& protein, const EnzymeRule& rule,
                                    const DigestConfig& cfg);

/// Pseudo-reversed decoy: all residues but the last are reversed, the
/// C-terminal residue stays in place. PEPTIDEK -> EDITPEPK.
std::string decoy_peptide(std::string_view peptide);

}  // namespace specnova::digest
