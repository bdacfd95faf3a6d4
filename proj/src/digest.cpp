#include "specnova/digest.hpp"

#include <algorithm>

#include "specnova/errors.hpp"

namespace specnova::digest {

EnzymeRule EnzymeRule::trypsin(bool proline_exception) {
    return {proline_exception ? "trypsin_p" : "trypsin", "KR", proline_exception};
}

EnzymeRule enzyme_by_name(std::string_view name) {
    if (name == "trypsin") return EnzymeRule::trypsin(false);
    if (name == "trypsin_p") return EnzymeRule::trypsin(true);
    if (name == "lysc") return {"lysc", "K", false};
    if (name == "argc") return {"argc", "R", false};
    throw InvalidInput("unknown enzyme '" + std::string(name) + "'");
}

void DigestConfig::validate() const {
    if (max_missed_cleavages < 0) throw InvalidInput("max_missed_cleavages must be >= 0");
    if (min_length < 1) throw InvalidInput("min_length must be >= 1");
    if (min_length > max_length) throw InvalidInput("min_length must not exceed max_length");
}

std::vector<std::size_t> cleavage_sites(std::string_view sequence, const EnzymeRule& rule) {
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
        if (rule.cleave_after.find(sequence[i]) == std::string::npos) continue;
        if (rule.proline_exception && sequence[i + 1] == 'P') continue;
        sites.push_back(i + 1);
    }
    return sites;
}

std::vector<DigestedPeptide> digest(const msio::ProteinRecord& protein, const EnzymeRule& rule,
                                    const DigestConfig& cfg) {
    cfg.validate();
    const std::string_view seq = protein.sequence;
    std::vector<DigestedPeptide> out;
    if (seq.empty()) return out;

    std::vector<std::size_t> bounds{0};
    const auto sites = cleavage_sites(seq, rule);
    bounds.insert(bounds.end(), sites.begin(), sites.end());
    bounds.push_back(seq.size());

    for (std::size_t a = 0; a + 1 < bounds.size(); ++a) {
        for (int m = 0; m <= cfg.max_missed_cleavages; ++m) {
            const auto b = a + static_cast<std::size_t>(m) + 1;
            if (b >= bounds.size()) break;
            const auto len = bounds[b] - bounds[a];
            if (len > static_cast<std::size_t>(cfg.max_length)) break;
            if (len < static_cast<std::size_t>(cfg.min_length)) continue;
            const auto piece = seq.substr(bounds[a], len);
            if (std::any_of(piece.begin(), piece.end(), msio::is_wildcard_residue)) continue;
            out.push_back({std::string(piece), m, protein.accession, bounds[a]});
        }
    }
    return out;
}

std::string decoy_peptide(std::string_view peptide) {
    std::string out(peptide);
    if (out.size() > 1) std::reverse(out.begin(), out.end() - 1);
    return out;
}

}  // namespace specnova::digest
