#include "specnova/synth.hpp"

#include <algorithm>
#include <random>

#include "specnova/errors.hpp"

namespace specnova::cli {

msio::SpectrumRecord synth_spectrum(const chem::Peptide& peptide, const SynthOptions& options) {
    if (options.charge < 1) throw InvalidInput("synthetic precursor charge must be >= 1");
    if (options.dropout < 0.0 || options.dropout > 1.0) throw InvalidInput("dropout must lie in [0, 1]");
    if (options.noise_peaks < 0) throw InvalidInput("noise peak count must be >= 0");

    const double proton = chem::ResidueTable::standard().proton();
    msio::SpectrumRecord s;
    s.id = options.id;
    s.charge = options.charge;
    s.precursor_mz = (chem::peptide_mass(peptide) + options.charge * proton) / options.charge;

    std::mt19937_64 drop_rng(options.dropout_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& ion : chem::fragment_mzs(peptide, options.kinds, 1)) {
        if (options.dropout > 0.0 && unit(drop_rng) < options.dropout) continue;
        const double intensity = options.intensity ? options.intensity(ion) : 1.0;
        s.peaks.push_back({ion.mz, intensity});
    }

    std::mt19937_64 noise_rng(options.noise_seed);
    const double lo = std::min(100.0, s.precursor_mz);
    const double hi = std::max(100.0, s.precursor_mz);
    std::uniform_real_distribution<double> mz(lo, hi);
    for (int i = 0; i < options.noise_peaks; ++i) {
        const double m = mz(noise_rng);
        s.peaks.push_back({m, unit(noise_rng)});
    }

    std::sort(s.peaks.begin(), s.peaks.end(), [](const msio::Peak& a, const msio::Peak& b) { return a.mz < b.mz; });
    std::vector<msio::Peak> merged;
    for (const auto& p : s.peaks) {
        if (!merged.empty() && merged.back().mz == p.mz) {
            merged.back().intensity = std::max(merged.back().intensity, p.intensity);
        } else {
            merged.push_back(p);
        }
    }
    s.peaks = std::move(merged);
    return s;
}

}  // namespace specnova::cli
