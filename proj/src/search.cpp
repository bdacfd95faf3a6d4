#include "specnova/search.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <unordered_set>

#include "specnova/constants.hpp"
#include "specnova/errors.hpp"

namespace specnova::search {

namespace {

using Bits = std::vector<std::uint64_t>;

// True when any bit in [lo, hi] is set; both bounds inclusive and in range.
bool any_bit(const Bits& bits, std::size_t lo, std::size_t hi) {
    const std::size_t wlo = lo >> 6;
    const std::size_t whi = hi >> 6;
    const std::uint64_t mlo = ~0ULL << (lo & 63);
    const std::uint64_t mhi = ~0ULL >> (63 - (hi & 63));
    if (wlo == whi) return (bits[wlo] & mlo & mhi) != 0;
    if (bits[wlo] & mlo) return true;
    for (std::size_t w = wlo + 1; w < whi; ++w) {
        if (bits[w]) return true;
    }
    return (bits[whi] & mhi) != 0;
}

// 64 bits starting at bit `start` (may be negative; missing bits read as 0).
std::uint64_t window64(const Bits& bits, std::int64_t start) {
    if (start <= -64) return 0;
    if (start < 0) return bits[0] << static_cast<unsigned>(-start);
    const auto q = static_cast<std::size_t>(start >> 6);
    const auto r = static_cast<unsigned>(start & 63);
    std::uint64_t v = q < bits.size() ? bits[q] >> r : 0;
    if (r && q + 1 < bits.size()) v |= bits[q + 1] << (64 - r);
    return v;
}

std::int64_t quantize(double mass) { return std::llround(mass / constants::kMassQuantum); }

std::string isobaric_key(std::span<const chem::ResidueToken> tokens) {
    std::string key;
    key.reserve(tokens.size() + 4);
    for (const auto& t : tokens) key += chem::to_string(chem::isobaric_representative(t));
    return key;
}

struct BeamState {
    std::vector<chem::ResidueToken> prefix;
    double acc_logprob = 0.0;
    double prefix_mass = 0.0;
    std::string key;
};

struct Completion {
    chem::Peptide peptide;
    std::string key;
};

void beam_pass(const msio::SpectrumRecord& spectrum, double precursor, const scoring::StepScorer& scorer,
               const KnapsackTable& knapsack, const SearchConfig& cfg, scoring::Direction direction,
               std::vector<Completion>& completed) {
    const auto& table = chem::ResidueTable::standard();
    const double target = precursor - table.water();
    const double tol = cfg.precursor_tolerance.width_at(precursor);

    std::vector<double> alphabet_mass;
    for (const auto& t : cfg.alphabet) alphabet_mass.push_back(table.mass(t));

    std::vector<BeamState> live(1);
    while (!live.empty()) {
        std::vector<BeamState> next;
        for (const auto& s : live) {
            const auto dist = scorer.step(spectrum, precursor, s.prefix, direction);
            if (!s.prefix.empty() && std::abs(s.prefix_mass - target) <= tol) {
                auto tokens = s.prefix;
                if (direction == scoring::Direction::backward) std::reverse(tokens.begin(), tokens.end());
                chem::Peptide p(std::move(tokens));
                auto key = p.to_string();
                completed.push_back({std::move(p), std::move(key)});
            }
            if (static_cast<int>(s.prefix.size()) >= cfg.max_length) continue;
            for (std::size_t a = 0; a < cfg.alphabet.size(); ++a) {
                const double mass = s.prefix_mass + alphabet_mass[a];
                const double remaining = target - mass;
                if (remaining < -tol) continue;
                if (!knapsack.any_feasible(remaining - tol, remaining + tol)) continue;
                BeamState n;
                n.prefix.reserve(s.prefix.size() + 1);
                n.prefix = s.prefix;
                n.prefix.push_back(cfg.alphabet[a]);
                n.acc_logprob = s.acc_logprob + dist.log_prob(cfg.alphabet[a]);
                n.prefix_mass = mass;
                n.key = s.key + chem::to_string(cfg.alphabet[a]);
                next.push_back(std::move(n));
            }
        }
        std::sort(next.begin(), next.end(), [](const BeamState& a, const BeamState& b) {
            if (a.acc_logprob != b.acc_logprob) return a.acc_logprob > b.acc_logprob;
            return a.key < b.key;
        });
        // Isobaric variants (I/L, N(deam)/D, Q(deam)/E) carry identical
        // evidence; keep one so they do not crowd out real alternatives.
        std::unordered_set<std::string> seen;
        live.clear();
        for (auto& n : next) {
            if (static_cast<int>(live.size()) >= cfg.beam_width) break;
            if (!seen.insert(isobaric_key(n.prefix)).second) continue;
            live.push_back(std::move(n));
        }
    }
}

}  // namespace

KnapsackTable KnapsackTable::build(std::span<const double> residue_masses, double max_mass, double resolution) {
    if (!(max_mass > 0.0)) throw InvalidInput("knapsack max_mass must be > 0");
    const auto res_units = quantize(resolution);
    if (res_units < 1 || std::abs(resolution - res_units * constants::kMassQuantum) > 1e-12) {
        throw InvalidInput(fmt::format("knapsack resolution must be a positive multiple of {} Da",
                                       constants::kMassQuantum));
    }
    std::vector<std::int64_t> units;
    for (double m : residue_masses) {
        if (!(m > 0.0)) throw InvalidInput("residue masses must be > 0");
        units.push_back(quantize(m));
    }
    std::sort(units.begin(), units.end());
    units.erase(std::unique(units.begin(), units.end()), units.end());

    KnapsackTable t;
    t.resolution_ = resolution;
    t.max_mass_ = max_mass;
    t.bins_ = static_cast<std::size_t>(std::floor(max_mass / resolution)) + 1;

    // Exact reachability on the quantum grid, up to one bin past the last.
    const auto top = static_cast<std::int64_t>(t.bins_) * res_units + res_units;
    Bits fine(static_cast<std::size_t>(top / 64 + 1), 0);
    fine[0] = 1;
    for (const auto u : units) {
        if (u < 64) throw InvalidInput("residue mass too small for the knapsack grid");
        // Every source bit of word w lies in an earlier word already updated
        // by this residue, so one ascending sweep gives unbounded reuse.
        for (std::size_t w = 0; w < fine.size(); ++w) {
            const auto start = static_cast<std::int64_t>(w) * 64 - u;
            if (start <= -64) continue;
            fine[w] |= window64(fine, start);
        }
    }
    const auto last_bit = static_cast<std::size_t>(fine.size() * 64 - 1);

    t.bits_.assign((t.bins_ + 63) / 64, 0);
    const auto n_words = static_cast<std::ptrdiff_t>(t.bits_.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t w = 0; w < n_words; ++w) {
        std::uint64_t word = 0;
        for (std::size_t b = 0; b < 64; ++b) {
            const auto k = static_cast<std::size_t>(w) * 64 + b;
            if (k >= t.bins_) break;
            const auto centre = static_cast<std::int64_t>(k) * res_units;
            const auto lo = static_cast<std::size_t>(std::max<std::int64_t>(0, centre - res_units));
            const auto hi = std::min(static_cast<std::size_t>(centre + res_units), last_bit);
            if (any_bit(fine, lo, hi)) word |= 1ULL << b;
        }
        t.bits_[w] = word;
    }
    return t;
}

KnapsackTable KnapsackTable::build(std::span<const chem::ResidueToken> alphabet, double max_mass,
                                   double resolution) {
    std::vector<double> masses;
    for (const auto& t : alphabet) masses.push_back(chem::residue_mass(t));
    return build(masses, max_mass, resolution);
}

bool KnapsackTable::feasible(double mass) const noexcept {
    if (bins_ == 0 || mass < -0.5 * resolution_) return false;
    return feasible_bin(static_cast<std::size_t>(std::llround(mass / resolution_)));
}

bool KnapsackTable::any_feasible(double lo, double hi) const noexcept {
    if (bins_ == 0 || hi < lo) return false;
    const auto klo = std::max<std::int64_t>(0, std::llround(lo / resolution_));
    const auto khi = std::min<std::int64_t>(static_cast<std::int64_t>(bins_) - 1, std::llround(hi / resolution_));
    if (khi < klo) return false;
    return any_bit(bits_, static_cast<std::size_t>(klo), static_cast<std::size_t>(khi));
}

void SearchConfig::validate() const {
    if (beam_width < 1) throw InvalidInput("beam_width must be >= 1");
    if (max_length < 1) throw InvalidInput("max_length must be >= 1");
    if (db_top_k < 1) throw InvalidInput("db_top_k must be >= 1");
    if (!(fdr_threshold >= 0.0 && fdr_threshold <= 1.0)) throw InvalidInput("fdr threshold must lie in [0, 1]");
    if (alphabet.empty()) throw InvalidInput("de novo alphabet is empty");
}

bool ranks_before(const msio::PsmRecord& a, const msio::PsmRecord& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.peptide.to_string() < b.peptide.to_string();
}

SearchOutcome denovo_beam_search(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                                 const scoring::StepScorer& scorer, const KnapsackTable& knapsack,
                                 const SearchConfig& cfg) {
    cfg.validate();
    SearchOutcome out;
    const double water = chem::ResidueTable::standard().water();
    if (!(precursor_neutral_mass > water)) {
        out.diagnostics.push_back({spectrum.id, "invalid_precursor",
                                   fmt::format("precursor neutral mass {:.6f} leaves no residue mass",
                                               precursor_neutral_mass)});
        return out;
    }
    const double residue_target = precursor_neutral_mass - water;
    if (knapsack.max_mass() < residue_target) {
        out.diagnostics.push_back({spectrum.id, "knapsack_too_small",
                                   fmt::format("knapsack covers {:.3f} Da, need {:.3f} Da", knapsack.max_mass(),
                                               residue_target)});
        return out;
    }

    std::vector<Completion> completed;
    beam_pass(spectrum, precursor_neutral_mass, scorer, knapsack, cfg, scoring::Direction::forward, completed);
    beam_pass(spectrum, precursor_neutral_mass, scorer, knapsack, cfg, scoring::Direction::backward, completed);

    std::sort(completed.begin(), completed.end(), [](const Completion& a, const Completion& b) { return a.key < b.key; });
    completed.erase(std::unique(completed.begin(), completed.end(),
                                [](const Completion& a, const Completion& b) { return a.key == b.key; }),
                    completed.end());

    struct Scored {
        msio::PsmRecord psm;
        std::string key;
    };
    std::vector<Scored> scored;
    scored.reserve(completed.size());
    for (auto& c : completed) {
        const auto s = scoring::bidirectional_score(scorer, spectrum, precursor_neutral_mass, c.peptide);
        msio::PsmRecord r;
        r.spectrum_id = spectrum.id;
        r.peptide = std::move(c.peptide);
        r.score = s.total;
        r.source = msio::PsmSource::denovo;
        r.per_position_scores = s.combined_per_position();
        scored.push_back({std::move(r), std::move(c.key)});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.psm.score != b.psm.score) return a.psm.score > b.psm.score;
        return a.key < b.key;
    });
    std::unordered_set<std::string> seen;
    for (auto& s : scored) {
        if (static_cast<int>(out.psms.size()) >= cfg.beam_width) break;
        if (!seen.insert(isobaric_key(s.psm.peptide.tokens())).second) continue;
        s.psm.rank = static_cast<int>(out.psms.size()) + 1;
        out.psms.push_back(std::move(s.psm));
    }
    if (out.psms.empty()) {
        out.diagnostics.push_back({spectrum.id, "no_completion", "beam search found no mass-matching sequence"});
    }
    return out;
}

SearchOutcome db_search(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                        const massindex::MassIndex& index, const scoring::StepScorer& scorer,
                        const SearchConfig& cfg) {
    cfg.validate();
    SearchOutcome out;
    const auto candidates = index.query(precursor_neutral_mass, cfg.precursor_tolerance);
    if (candidates.empty()) {
        out.diagnostics.push_back({spectrum.id, "empty_window",
                                   fmt::format("no candidate within tolerance of {:.6f} Da", precursor_neutral_mass)});
        return out;
    }
    std::vector<std::pair<msio::PsmRecord, const std::string*>> scored;
    scored.reserve(candidates.size());
    for (const auto& entry : candidates) {
        const auto s = scoring::bidirectional_score(scorer, spectrum, precursor_neutral_mass, entry.peptide);
        msio::PsmRecord r;
        r.spectrum_id = spectrum.id;
        r.peptide = entry.peptide;
        r.score = s.total;
        r.is_decoy = entry.is_decoy();
        r.source = msio::PsmSource::db;
        r.per_position_scores = s.combined_per_position();
        scored.emplace_back(std::move(r), &entry.sequence_key);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first.score != b.first.score) return a.first.score > b.first.score;
        return *a.second < *b.second;
    });
    const auto keep = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(cfg.db_top_k));
    for (std::size_t i = 0; i < keep; ++i) {
        scored[i].first.rank = static_cast<int>(i) + 1;
        out.psms.push_back(std::move(scored[i].first));
    }
    return out;
}

const msio::PsmRecord* HybridDecision::chosen_psm() const noexcept {
    switch (chosen) {
        case HybridChoice::db: return db_best ? &*db_best : nullptr;
        case HybridChoice::denovo: return denovo_best ? &*denovo_best : nullptr;
        case HybridChoice::none: return nullptr;
    }
    return nullptr;
}

HybridDecision hybrid_identify(const msio::SpectrumRecord& spectrum, double precursor_neutral_mass,
                               const massindex::MassIndex& index, const scoring::StepScorer& scorer,
                               const KnapsackTable& knapsack, const SearchConfig& cfg) {
    auto db = db_search(spectrum, precursor_neutral_mass, index, scorer, cfg);
    auto dn = denovo_beam_search(spectrum, precursor_neutral_mass, scorer, knapsack, cfg);

    HybridDecision d;
    if (!db.psms.empty()) d.db_best = std::move(db.psms.front());
    if (!dn.psms.empty()) d.denovo_best = std::move(dn.psms.front());
    d.diagnostics = std::move(db.diagnostics);
    std::move(dn.diagnostics.begin(), dn.diagnostics.end(), std::back_inserter(d.diagnostics));

    if (d.db_best && d.denovo_best) {
        d.margin = d.denovo_best->score - d.db_best->score;
        d.chosen = d.denovo_best->score > d.db_best->score ? HybridChoice::denovo : HybridChoice::db;
    } else if (d.db_best) {
        d.chosen = HybridChoice::db;
    } else if (d.denovo_best) {
        d.chosen = HybridChoice::denovo;
    }
    return d;
}

std::vector<msio::PsmRecord> estimate_fdr(std::vector<msio::PsmRecord> psms) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < psms.size(); ++i) {
        if (psms[i].rank == 1) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return psms[a].score > psms[b].score; });

    // FDR at each distinct score threshold, then a running minimum from the
    // lowest threshold upwards gives the q-value.
    std::vector<double> fdr(order.size());
    std::size_t targets = 0;
    std::size_t decoys = 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        for (; j < order.size() && psms[order[j]].score == psms[order[i]].score; ++j) {
            (psms[order[j]].is_decoy ? decoys : targets)++;
        }
        const double value = static_cast<double>(decoys) / static_cast<double>(std::max<std::size_t>(1, targets));
        for (std::size_t k = i; k < j; ++k) fdr[k] = value;
        i = j;
    }
    double running = 1.0;
    for (std::size_t k = order.size(); k-- > 0;) {
        running = std::min(running, fdr[k]);
        psms[order[k]].q_value = running;
    }
    return psms;
}

std::vector<msio::PsmRecord> filter_at_fdr(const std::vector<msio::PsmRecord>& psms, double threshold) {
    std::vector<msio::PsmRecord> out;
    for (const auto& p : psms) {
        if (!p.is_decoy && p.q_value && *p.q_value <= threshold) out.push_back(p);
    }
    return out;
}

}  // namespace specnova::search
