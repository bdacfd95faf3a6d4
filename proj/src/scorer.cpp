#include "specnova/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specnova/errors.hpp"

namespace specnova::scoring {

namespace {

// Strongest peak intensity within tol of target, 0 when none.
double strongest_near(std::span<const msio::Peak> peaks, double target, const chem::Tolerance& tol) {
    const double w = tol.width_at(target);
    auto it = std::lower_bound(peaks.begin(), peaks.end(), target - w,
                               [](const msio::Peak& p, double m) { return p.mz < m; });
    double best = 0.0;
    for (; it != peaks.end() && it->mz <= target + w; ++it) best = std::max(best, it->intensity);
    return best;
}

}  // namespace

StepDistribution StepDistribution::uniform() {
    StepDistribution d;
    d.log_probs.fill(-std::log(static_cast<double>(kVocabSize)));
    d.uniform_fallback = true;
    return d;
}

void IonEvidenceParams::validate() const {
    if (!(smoothing_epsilon > 0.0)) throw InvalidInput("smoothing epsilon must be > 0");
    if (b_weight < 0.0 || y_weight < 0.0) throw InvalidInput("ion weights must be >= 0");
    if (b_weight == 0.0 && y_weight == 0.0) throw InvalidInput("b and y weights cannot both be 0");
}

StepDistribution ion_evidence_step(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                                   std::span<const chem::ResidueToken> prefix, Direction direction,
                                   const IonEvidenceParams& params) {
    const std::span<const msio::Peak> peaks = spectrum.peaks;
    double max_intensity = 0.0;
    for (const auto& p : peaks) max_intensity = std::max(max_intensity, p.intensity);
    if (peaks.empty() || !(max_intensity > 0.0)) return StepDistribution::uniform();

    const auto& table = chem::ResidueTable::standard();
    const double proton = table.proton();
    const double water = table.water();
    const double prefix_sum = chem::residue_sum(prefix);
    const auto masses = table.masses();

    std::array<double, kVocabSize> evidence{};
    for (std::size_t t = 0; t < chem::kTokenCount; ++t) {
        const double r = prefix_sum + masses[t];
        // Forward: the prefix is the N-terminal piece (b ion), the rest the y ion.
        // Backward: the prefix is the C-terminal piece (y ion), the rest the b ion.
        const double b_target = direction == Direction::forward ? r + proton
                                                                : precursor_neutral_mass - water - r + proton;
        const double y_target = direction == Direction::forward ? precursor_neutral_mass - r + proton
                                                                : r + water + proton;
        const double ib = params.b_weight > 0.0
                              ? strongest_near(peaks, b_target, params.fragment_tolerance) / max_intensity
                              : 0.0;
        const double iy = params.y_weight > 0.0
                              ? strongest_near(peaks, y_target, params.fragment_tolerance) / max_intensity
                              : 0.0;
        evidence[t] = params.b_weight * ib + params.y_weight * iy;
    }
    const double end_delta = std::abs(prefix_sum + water - precursor_neutral_mass);
    evidence[kEndIndex] = end_delta <= params.end_mass_tolerance.width_at(precursor_neutral_mass) ? 1.0 : 0.0;

    double z = 0.0;
    for (double e : evidence) z += e + params.smoothing_epsilon;
    const double log_z = std::log(z);

    StepDistribution d;
    for (std::size_t t = 0; t < kVocabSize; ++t) {
        d.log_probs[t] = std::log(evidence[t] + params.smoothing_epsilon) - log_z;
    }
    return d;
}

IonEvidenceScorer::IonEvidenceScorer(IonEvidenceParams params) : params_(params) { params_.validate(); }

StepDistribution IonEvidenceScorer::step(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                                         std::span<const chem::ResidueToken> prefix,
                                         Direction direction) const {
    return ion_evidence_step(spectrum, precursor_neutral_mass, prefix, direction, params_);
}

std::unique_ptr<StepScorer> make_scorer(std::string_view name, const IonEvidenceParams& params) {
    if (name == "ion_evidence") return std::make_unique<IonEvidenceScorer>(params);
    throw InvalidInput("unknown scorer '" + std::string(name) + "'");
}

SequenceScore sequence_score(const StepScorer& scorer, const msio::SpectrumRecord& spectrum,
                             double precursor_neutral_mass, const chem::Peptide& peptide, Direction direction) {
    if (peptide.empty()) throw InvalidInput("cannot score an empty peptide");
    const auto tokens = peptide.tokens();
    SequenceScore s;
    s.per_position.reserve(tokens.size());
    double sum = 0.0;
    for (std::size_t i = 0; i <= tokens.size(); ++i) {
        StepDistribution d;
        try {
            d = scorer.step(spectrum, precursor_neutral_mass, tokens.first(i), direction);
        } catch (const std::exception& e) {
            throw std::runtime_error("scorer failed at position " + std::to_string(i) + " of " +
                                     peptide.to_string() + ": " + e.what());
        }
        if (i < tokens.size()) {
            const double lp = d.log_prob(tokens[i]);
            s.per_position.push_back(lp);
            sum += lp;
        } else {
            s.end_log_prob = d.end_log_prob();
            sum += s.end_log_prob;
        }
    }
    s.total = sum / static_cast<double>(tokens.size());
    return s;
}

std::vector<double> BidirectionalScore::combined_per_position() const {
    const auto n = forward.per_position.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = forward.per_position[i] + backward.per_position[n - 1 - i];
    return out;
}

BidirectionalScore bidirectional_score(const StepScorer& scorer, const msio::SpectrumRecord& spectrum,
                                       double precursor_neutral_mass, const chem::Peptide& peptide) {
    BidirectionalScore b;
    b.forward = sequence_score(scorer, spectrum, precursor_neutral_mass, peptide, Direction::forward);
    b.backward = sequence_score(scorer, spectrum, precursor_neutral_mass, peptide.reversed(), Direction::backward);
    b.total = b.forward.total + b.backward.total;
    return b;
}

}  // namespace specnova::scoring
