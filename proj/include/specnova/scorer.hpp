#pragma once

// Step-conditional sequence scoring.
//
// A StepScorer predicts a distribution over the next token given the
// spectrum and the tokens emitted so far. A sequence scores as the sum of
// its per-step log-probabilities plus a terminating END step, divided by
// the number of residues. Search engines only ever talk to StepScorer, so
// a learned model can replace the ion-evidence rule without touching them.

#include <array>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "specnova/chem.hpp"
#include "specnova/msio.hpp"

namespace specnova::scoring {

/// 24 residue tokens followed by END.
inline constexpr std::size_t kVocabSize = chem::kTokenCount + 1;
inline constexpr std::size_t kEndIndex = chem::kTokenCount;

enum class Direction { forward, backward };

struct StepDistribution {
    std::array<double, kVocabSize> log_probs{};
    /// Set when the scorer had no evidence at all and returned a flat distribution.
    bool uniform_fallback = false;

    double log_prob(chem::ResidueToken token) const { return log_probs[chem::token_index(token)]; }
    double end_log_prob() const noexcept { return log_probs[kEndIndex]; }

    static StepDistribution uniform();
};

class StepScorer {
public:
    virtual ~StepScorer() = default;

    /// Distribution over the next token. For Direction::backward the prefix
    /// holds residues read from the C-terminus inwards.
    virtual StepDistribution step(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                                  std::span<const chem::ResidueToken> prefix, Direction direction) const = 0;
};

struct IonEvidenceParams {
    chem::Tolerance fragment_tolerance = chem::Tolerance::da(0.5);
    double smoothing_epsilon = 0.01;
    double b_weight = 1.0;
    double y_weight = 1.0;
    chem::Tolerance end_mass_tolerance = chem::Tolerance::ppm(20.0);

    /// Throws InvalidInput.
    void validate() const;
};

/// Evidence for residue r is b_weight * I_b + y_weight * I_y, where I_b and
/// I_y are the strongest max-normalised peak intensities within tolerance of
/// the N-terminal and C-terminal fragment ions produced by appending r.
/// END gets evidence 1 when the prefix already matches the precursor mass.
/// P(t) = (e(t) + eps) / sum(e + eps).
StepDistribution ion_evidence_step(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                                   std::span<const chem::ResidueToken> prefix, Direction direction,
                                   const IonEvidenceParams& params);

class IonEvidenceScorer final : public StepScorer {
public:
    explicit IonEvidenceScorer(IonEvidenceParams params = {});

    StepDistribution step(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                          std::span<const chem::ResidueToken> prefix, Direction direction) const override;

    const IonEvidenceParams& params() const noexcept { return params_; }

private:
    IonEvidenceParams params_;
};

/// Scorer registry. Only "ion_evidence" is built in.
std::unique_ptr<StepScorer> make_scorer(std::string_view name, const IonEvidenceParams& params);

struct SequenceScore {
    double total = 0.0;
    /// log P(token_i | tokens before i) for each residue, in the order fed.
    std::vector<double> per_position;
    double end_log_prob = 0.0;
};

/// Scores the tokens in the order given. For Direction::backward pass the
/// peptide already reversed.
SequenceScore sequence_score(const StepScorer& scorer, const msio::SpectrumRecord& spectrum,
                             double precursor_neutral_mass, const chem::Peptide& peptide, Direction direction);

struct BidirectionalScore {
    double total = 0.0;
    SequenceScore forward;
    SequenceScore backward;  // positions in C-to-N order

    /// forward[i] + backward[n-1-i], aligned to the peptide's own positions.
    std::vector<double> combined_per_position() const;
};

BidirectionalScore bidirectional_score(const StepScorer& scorer, const msio::SpectrumRecord& spectrum,
                                       double precursor_neutral_mass, const chem::Peptide& peptide);

}  // namespace specnova::scoring
