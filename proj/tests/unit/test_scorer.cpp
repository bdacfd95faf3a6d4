#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracle.hpp"
#include "spectra.hpp"
#include "specnova/errors.hpp"
#include "specnova/scorer.hpp"

using namespace specnova;
using chem::Peptide;
using scoring::Direction;
using scoring::IonEvidenceParams;
using testing_support::perfect_spectrum;
using testing_support::UniformScorer;

namespace {

double mass_of(const std::string& s) { return oracle::peptide_mass(s); }

std::size_t argmax(const scoring::StepDistribution& d) {
    return static_cast<std::size_t>(std::max_element(d.log_probs.begin(), d.log_probs.end()) - d.log_probs.begin());
}

double total_prob(const scoring::StepDistribution& d) {
    double s = 0.0;
    for (double lp : d.log_probs) s += std::exp(lp);
    return s;
}

msio::SpectrumRecord random_spectrum(oracle::Rng& rng) {
    msio::SpectrumRecord s;
    s.id = "r";
    s.charge = rng.uniform_int(1, 3);
    s.precursor_mz = rng.uniform(300, 1500);
    double mz = 50;
    for (int k = rng.uniform_int(1, 80); k > 0; --k) {
        mz += rng.uniform(0.001, 30);
        s.peaks.push_back({mz, rng.uniform(0, 1000)});
    }
    s.peaks.back().intensity += 1.0;
    return s;
}

/// Independent evaluation of the evidence rule for one token.
double oracle_evidence(const msio::SpectrumRecord& s, double M, double prefix_sum, double residue, bool forward,
                       double tol) {
    double maxi = 0.0;
    for (const auto& p : s.peaks) maxi = std::max(maxi, p.intensity);
    const double r = prefix_sum + residue;
    const double b = forward ? r + oracle::kProton : M - oracle::kWater - r + oracle::kProton;
    const double y = forward ? M - r + oracle::kProton : r + oracle::kWater + oracle::kProton;
    double ib = 0.0, iy = 0.0;
    for (const auto& p : s.peaks) {
        if (std::abs(p.mz - b) <= tol) ib = std::max(ib, p.intensity / maxi);
        if (std::abs(p.mz - y) <= tol) iy = std::max(iy, p.intensity / maxi);
    }
    return ib + iy;
}

}  // namespace

TEST(IonEvidenceStep, EmptySpectrumIsFlaggedUniform) {
    msio::SpectrumRecord s;
    s.precursor_mz = 500;
    const auto d = scoring::ion_evidence_step(s, 998.0, {}, Direction::forward, {});
    EXPECT_TRUE(d.uniform_fallback);
    for (double lp : d.log_probs) EXPECT_NEAR(lp, std::log(1.0 / 25.0), 1e-12);
}

TEST(IonEvidenceStep, PerfectSpectrumPicksNextResidue) {
    const auto s = perfect_spectrum("PEPTIDEK");
    const auto prefix = Peptide::parse("PEP");
    const auto d = scoring::ion_evidence_step(s, mass_of("PEPTIDEK"), prefix.tokens(), Direction::forward, {});
    EXPECT_EQ(argmax(d), chem::token_index({'T'}));
    EXPECT_FALSE(d.uniform_fallback);
}

TEST(IonEvidenceStep, BackwardPerfectSpectrumPicksNextResidueFromCTerminus) {
    const auto s = perfect_spectrum("PEPTIDEK");
    const auto prefix = Peptide::parse("KED");  // read from the C-terminus
    const auto d = scoring::ion_evidence_step(s, mass_of("PEPTIDEK"), prefix.tokens(), Direction::backward,
                                              {chem::Tolerance::da(0.01)});
    const auto best = chem::token_at(argmax(d));
    EXPECT_EQ(chem::isobaric_representative(best).symbol, 'L');
}

TEST(IonEvidenceStep, EndProbabilityClosedForm) {
    const auto s = perfect_spectrum("PEPTIDEK");
    const auto full = Peptide::parse("PEPTIDEK");
    const auto d = scoring::ion_evidence_step(s, mass_of("PEPTIDEK"), full.tokens(), Direction::forward, {});
    EXPECT_NEAR(std::exp(d.end_log_prob()), 1.01 / (1.01 + 24 * 0.01), 1e-12);
    for (std::size_t t = 0; t < chem::kTokenCount; ++t) EXPECT_GT(d.end_log_prob(), d.log_probs[t]);
}

TEST(IonEvidenceStep, MatchesOracleFormula) {
    oracle::Rng rng(51);
    IonEvidenceParams params;
    for (int trial = 0; trial < 300; ++trial) {
        const auto s = random_spectrum(rng);
        const double M = msio::precursor_neutral_mass(s);
        const auto prefix_text = rng.modified_peptide(static_cast<std::size_t>(rng.uniform_int(0, 6)));
        const auto prefix = prefix_text.empty() ? Peptide{} : Peptide::parse(prefix_text);
        const bool forward = rng.coin();
        const auto d = scoring::ion_evidence_step(s, M, prefix.tokens(), forward ? Direction::forward : Direction::backward,
                                                  params);
        const double psum = prefix_text.empty() ? 0.0 : oracle::residues(oracle::tokens(prefix_text));
        std::vector<double> e(25);
        for (std::size_t t = 0; t < 24; ++t) {
            e[t] = oracle_evidence(s, M, psum, oracle::residue(chem::to_string(chem::token_at(t))), forward, 0.5);
        }
        e[24] = std::abs(psum + oracle::kWater - M) <= M * 20e-6 ? 1.0 : 0.0;
        double z = 0.0;
        for (double v : e) z += v + 0.01;
        for (std::size_t t = 0; t < 25; ++t) EXPECT_NEAR(d.log_probs[t], std::log((e[t] + 0.01) / z), 1e-9);
    }
}

TEST(IonEvidenceStepProperty, DistributionsNormalise) {
    oracle::Rng rng(52);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto s = random_spectrum(rng);
        IonEvidenceParams p;
        p.fragment_tolerance = chem::Tolerance::da(rng.uniform(0, 1));
        p.smoothing_epsilon = rng.uniform(1e-6, 1);
        p.b_weight = rng.uniform(0, 2);
        p.y_weight = rng.uniform(0.01, 2);
        const auto prefix = Peptide::parse(rng.modified_peptide(static_cast<std::size_t>(rng.uniform_int(1, 8))));
        const auto d = scoring::ion_evidence_step(s, msio::precursor_neutral_mass(s), prefix.tokens(),
                                                  rng.coin() ? Direction::forward : Direction::backward, p);
        EXPECT_NEAR(total_prob(d), 1.0, 1e-6);
        for (double lp : d.log_probs) EXPECT_TRUE(std::isfinite(lp));
    }
}

TEST(IonEvidenceStepProperty, InvariantUnderIntensityScaling) {
    oracle::Rng rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        auto s = random_spectrum(rng);
        const double M = msio::precursor_neutral_mass(s);
        const auto prefix = Peptide::parse(rng.modified_peptide(static_cast<std::size_t>(rng.uniform_int(1, 5))));
        const auto a = scoring::ion_evidence_step(s, M, prefix.tokens(), Direction::forward, {});
        const double k = std::pow(2.0, rng.uniform_int(-10, 10));
        for (auto& p : s.peaks) p.intensity *= k;
        const auto b = scoring::ion_evidence_step(s, M, prefix.tokens(), Direction::forward, {});
        for (std::size_t t = 0; t < 25; ++t) EXPECT_NEAR(a.log_probs[t], b.log_probs[t], 1e-12);
    }
}

// Adding a peak at a residue's b-ion never lowers its probability, provided
// the new peak does not also support some other residue.
TEST(IonEvidenceStepProperty, AddingSupportingPeakIsMonotone) {
    oracle::Rng rng(54);
    const double tol = 0.02;
    IonEvidenceParams params;
    params.fragment_tolerance = chem::Tolerance::da(tol);
    int checked = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        auto s = random_spectrum(rng);
        const double M = msio::precursor_neutral_mass(s);
        const auto prefix = Peptide::parse(rng.modified_peptide(static_cast<std::size_t>(rng.uniform_int(0, 4)) + 1));
        const double psum = chem::residue_sum(prefix.tokens());
        const std::size_t r = static_cast<std::size_t>(rng.uniform_int(0, 23));
        const double target = psum + chem::residue_mass(chem::token_at(r)) + oracle::kProton;
        bool clashes = false;
        for (std::size_t t = 0; t < 24 && !clashes; ++t) {
            if (t == r) continue;
            const double rt = psum + chem::residue_mass(chem::token_at(t));
            clashes = std::abs(rt + oracle::kProton - target) <= 2 * tol ||
                      std::abs(M - rt + oracle::kProton - target) <= 2 * tol;
        }
        if (clashes) continue;
        ++checked;
        const auto before = scoring::ion_evidence_step(s, M, prefix.tokens(), Direction::forward, params);
        const double intensity = rng.uniform(0, 2000);
        s.peaks.push_back({target, intensity});
        std::sort(s.peaks.begin(), s.peaks.end(), [](const auto& a, const auto& b) { return a.mz < b.mz; });
        const auto after = scoring::ion_evidence_step(s, M, prefix.tokens(), Direction::forward, params);
        EXPECT_GE(after.log_probs[r], before.log_probs[r] - 1e-12);
    }
    EXPECT_GT(checked, 1000);
}

TEST(IonEvidenceParams, Validation) {
    IonEvidenceParams p;
    EXPECT_NO_THROW(p.validate());
    p.smoothing_epsilon = 0;
    EXPECT_THROW(p.validate(), InvalidInput);
    p = {};
    p.b_weight = 0;
    p.y_weight = 0;
    EXPECT_THROW(p.validate(), InvalidInput);
    p = {};
    p.b_weight = -1;
    EXPECT_THROW(p.validate(), InvalidInput);
    EXPECT_THROW(scoring::make_scorer("cnn", {}), InvalidInput);
    EXPECT_NE(scoring::make_scorer("ion_evidence", {}), nullptr);
}

TEST(SequenceScore, UniformClosedForm) {
    UniformScorer u;
    const auto s = perfect_spectrum("PEPTIDE");
    const auto r = scoring::sequence_score(u, s, mass_of("PEPTIDE"), Peptide::parse("PEPTIDE"), Direction::forward);
    EXPECT_NEAR(r.total, std::log(1.0 / 25.0) * 8.0 / 7.0, 1e-12);
    ASSERT_EQ(r.per_position.size(), 7u);
}

TEST(SequenceScore, LengthOne) {
    const auto s = perfect_spectrum("PEPTIDEK");
    scoring::IonEvidenceScorer scorer;
    const auto p = Peptide::parse("K");
    const auto r = scoring::sequence_score(scorer, s, 500.0, p, Direction::forward);
    const auto d0 = scorer.step(s, 500.0, {}, Direction::forward);
    const auto d1 = scorer.step(s, 500.0, p.tokens(), Direction::forward);
    EXPECT_NEAR(r.total, d0.log_prob({'K'}) + d1.end_log_prob(), 1e-12);
}

TEST(SequenceScore, FactorisesIntoConditionals) {
    const auto s = perfect_spectrum("PEPTIDE");
    scoring::IonEvidenceScorer scorer;
    const auto p = Peptide::parse("PEPTIDE");
    const double M = mass_of("PEPTIDE");
    const auto r = scoring::sequence_score(scorer, s, M, p, Direction::forward);
    ASSERT_EQ(r.per_position.size(), 7u);
    double product = 1.0;
    for (std::size_t i = 0; i < 7; ++i) {
        const auto d = scorer.step(s, M, p.tokens().first(i), Direction::forward);
        EXPECT_DOUBLE_EQ(r.per_position[i], d.log_prob(p[i]));
        product *= std::exp(d.log_prob(p[i]));
    }
    const double sum = std::accumulate(r.per_position.begin(), r.per_position.end(), 0.0);
    EXPECT_NEAR(std::exp(sum) / product, 1.0, 1e-9);
    const auto end = scorer.step(s, M, p.tokens(), Direction::forward);
    EXPECT_DOUBLE_EQ(r.end_log_prob, end.end_log_prob());
    EXPECT_NEAR(r.total, (sum + r.end_log_prob) / 7.0, 1e-12);
}

TEST(SequenceScoreProperty, UniformScoreDependsOnlyOnLength) {
    UniformScorer u;
    oracle::Rng rng(55);
    const auto s = perfect_spectrum("GAG");
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 50));
        const auto p = Peptide::parse(rng.modified_peptide(n));
        const double expect = std::log(1.0 / 25.0) * (double(n) + 1) / double(n);
        EXPECT_NEAR(scoring::sequence_score(u, s, 1000.0, p, Direction::forward).total, expect, 1e-12);
        EXPECT_NEAR(scoring::bidirectional_score(u, s, 1000.0, p).total, 2 * expect, 1e-12);
    }
}

TEST(SequenceScore, EmptyPeptideRejected) {
    UniformScorer u;
    EXPECT_THROW(scoring::sequence_score(u, perfect_spectrum("GAG"), 100.0, Peptide{}, Direction::forward),
                 InvalidInput);
}

// Depends only on the mass already consumed, whichever terminus it came from.
class PrefixMassScorer final : public scoring::StepScorer {
public:
    scoring::StepDistribution step(const msio::SpectrumRecord&, double, std::span<const chem::ResidueToken> prefix,
                                   Direction) const override {
        const double consumed = chem::residue_sum(prefix);
        std::array<double, scoring::kVocabSize> w{};
        double z = 0;
        for (std::size_t i = 0; i < scoring::kVocabSize; ++i) {
            w[i] = 1.0 + std::fmod(consumed * 0.37 + static_cast<double>(i) * 1.7, 5.0);
            z += w[i];
        }
        scoring::StepDistribution d;
        for (std::size_t i = 0; i < scoring::kVocabSize; ++i) d.log_probs[i] = std::log(w[i] / z);
        return d;
    }
};

TEST(BidirectionalScore, PalindromeIsSymmetric) {
    PrefixMassScorer scorer;
    oracle::Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        auto half = rng.modified_peptide(static_cast<std::size_t>(rng.uniform_int(1, 10)));
        auto toks = oracle::tokens(half);
        std::string pal = half;
        if (rng.coin()) toks.pop_back();
        for (auto it = toks.rbegin(); it != toks.rend(); ++it) pal += *it;
        const auto b = scoring::bidirectional_score(scorer, perfect_spectrum(pal), mass_of(pal), Peptide::parse(pal));
        EXPECT_NEAR(b.forward.total, b.backward.total, 1e-12) << pal;
    }
}

TEST(BidirectionalScore, CombinedPositionsAlign) {
    const auto s = perfect_spectrum("PEPTIDEK");
    scoring::IonEvidenceScorer scorer;
    const auto b = scoring::bidirectional_score(scorer, s, mass_of("PEPTIDEK"), Peptide::parse("PEPTIDEK"));
    const auto c = b.combined_per_position();
    ASSERT_EQ(c.size(), 8u);
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_DOUBLE_EQ(c[i], b.forward.per_position[i] + b.backward.per_position[7 - i]);
    }
    EXPECT_DOUBLE_EQ(b.total, b.forward.total + b.backward.total);
}

TEST(BidirectionalScore, TrueSequenceBeatsSingleSubstitutions) {
    const std::string truth = "PEPTIDEK";
    const auto s = perfect_spectrum(truth);
    const double M = mass_of(truth);
    scoring::IonEvidenceScorer scorer({chem::Tolerance::da(0.01)});
    const auto true_pep = Peptide::parse(truth);
    const double best = scoring::bidirectional_score(scorer, s, M, true_pep).total;
    int equal_mass = 0;
    for (std::size_t pos = 0; pos < true_pep.size(); ++pos) {
        for (const auto& t : chem::all_tokens()) {
            if (t == true_pep[pos]) continue;
            auto toks = std::vector<chem::ResidueToken>(true_pep.tokens().begin(), true_pep.tokens().end());
            toks[pos] = t;
            const Peptide variant(toks);
            const double score = scoring::bidirectional_score(scorer, s, M, variant).total;
            const bool isobaric =
                chem::isobaric_representative(t) == chem::isobaric_representative(true_pep[pos]);
            if (std::abs(chem::peptide_mass(variant) - M) <= M * 20e-6) ++equal_mass;
            if (isobaric) {
                EXPECT_NEAR(score, best, 1e-12) << variant.to_string();
            } else {
                EXPECT_LT(score, best) << variant.to_string();
            }
        }
    }
    EXPECT_GT(equal_mass, 0);
}
