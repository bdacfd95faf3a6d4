#include "specnova/metrics.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "specnova/msio.hpp"

namespace specnova::cli {

namespace {

struct MassProfile {
    std::vector<double> residue;
    std::vector<double> before;  // mass of all residues preceding position i
};

MassProfile profile(const chem::Peptide& p) {
    MassProfile m;
    double acc = 0.0;
    for (const auto& t : p.tokens()) {
        const double r = chem::residue_mass(t);
        m.residue.push_back(r);
        m.before.push_back(acc);
        acc += r;
    }
    return m;
}

}  // namespace

std::size_t match_positions(const chem::Peptide& target, const chem::Peptide& predicted,
                            chem::Tolerance fragment_tol) {
    const auto t = profile(target);
    const auto p = profile(predicted);
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t matched = 0;
    while (i < t.residue.size() && j < p.residue.size()) {
        const double delta = t.before[i] - p.before[j];
        if (std::abs(delta) <= fragment_tol.width_at(t.before[i])) {
            if (std::abs(t.residue[i] - p.residue[j]) < 1e-4) ++matched;
            ++i;
            ++j;
        } else if (delta < 0.0) {
            ++i;
        } else {
            ++j;
        }
    }
    return matched;
}

EvalReport evaluate(std::span<const EvalPair> pairs, chem::Tolerance fragment_tol) {
    EvalReport r;
    std::map<std::size_t, LengthBreakdown> lengths;
    for (const auto& [target, predicted] : pairs) {
        auto& row = lengths[target.size()];
        row.length = target.size();
        row.n_targets++;
        row.total_aa += target.size();
        r.n_spectra++;
        r.total_aa += target.size();
        if (!predicted || predicted->empty()) continue;
        row.n_predicted++;
        r.n_predicted++;
        const auto m = match_positions(target, *predicted, fragment_tol);
        row.matched_aa += m;
        r.matched_aa += m;
        if (m == target.size() && predicted->size() == target.size()) {
            row.fully_correct++;
            r.fully_correct++;
        }
    }
    r.valid = r.n_spectra > 0 && r.total_aa > 0;
    if (r.valid) {
        r.aa_recall = static_cast<double>(r.matched_aa) / static_cast<double>(r.total_aa);
        r.peptide_recall = static_cast<double>(r.fully_correct) / static_cast<double>(r.n_spectra);
    }
    for (auto& [len, row] : lengths) r.by_length.push_back(row);
    return r;
}

void write_eval_tsv(const EvalReport& report, std::ostream& out) {
    out << "scope\tlength\tn_targets\tn_predicted\tmatched_aa\ttotal_aa\taa_recall\tpeptide_recall\n";
    auto row = [&](std::string_view scope, std::string length, std::size_t n, std::size_t np, std::size_t m,
                   std::size_t total, std::size_t full) {
        const double aa = total ? static_cast<double>(m) / static_cast<double>(total) : 0.0;
        const double pep = n ? static_cast<double>(full) / static_cast<double>(n) : 0.0;
        out << scope << '\t' << length << '\t' << n << '\t' << np << '\t' << m << '\t' << total << '\t'
            << msio::format_fixed6(aa) << '\t' << msio::format_fixed6(pep) << '\n';
    };
    row("all", "*", report.n_spectra, report.n_predicted, report.matched_aa, report.total_aa, report.fully_correct);
    for (const auto& b : report.by_length) {
        row("length", std::to_string(b.length), b.n_targets, b.n_predicted, b.matched_aa, b.total_aa, b.fully_correct);
    }
}

}  // namespace specnova::cli
