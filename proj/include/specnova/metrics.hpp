#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "specnova/chem.hpp"

namespace specnova::cli {

/// Number of target positions matched by the prediction. A pair of
/// positions matches when the residue masses agree to 1e-4 Da and the
/// masses of everything before them agree to within fragment_tol.
std::size_t match_positions(const chem::Peptide& target, const chem::Peptide& predicted,
                            chem::Tolerance fragment_tol = chem::Tolerance::da(0.5));

struct LengthBreakdown {
    std::size_t length = 0;
    std::size_t n_targets = 0;
    std::size_t n_predicted = 0;
    std::size_t matched_aa = 0;
    std::size_t total_aa = 0;
    std::size_t fully_correct = 0;
};

struct EvalReport {
    double aa_recall = 0.0;
    double peptide_recall = 0.0;
    std::size_t n_spectra = 0;
    std::size_t n_predicted = 0;
    std::size_t matched_aa = 0;
    std::size_t total_aa = 0;
    std::size_t fully_correct = 0;
    /// False when there was nothing to evaluate (zero denominators).
    bool valid = false;
    std::vector<LengthBreakdown> by_length;
};

using EvalPair = std::pair<chem::Peptide, std::optional<chem::Peptide>>;

EvalReport evaluate(std::span<const EvalPair> pairs, chem::Tolerance fragment_tol = chem::Tolerance::da(0.5));

void write_eval_tsv(const EvalReport& report, std::ostream& out);

}  // namespace specnova::cli
