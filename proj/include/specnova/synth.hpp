#pragma once

// Synthetic spectra with known ground truth, for self-identification runs.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "specnova/chem.hpp"
#include "specnova/msio.hpp"

namespace specnova::cli {

struct SynthOptions {
    std::string id;
    int charge = 2;  // precursor charge; fragments are singly charged
    std::vector<chem::IonKind> kinds{chem::IonKind::b, chem::IonKind::y};
    /// Intensity per theoretical ion; constant 1.0 when empty.
    std::function<double(const chem::FragmentIon&)> intensity;
    int noise_peaks = 0;
    std::uint64_t noise_seed = 0;
    double dropout = 0.0;
    std::uint64_t dropout_seed = 0;
};

/// Peaks at every requested fragment m/z, minus seeded random dropout, plus
/// seeded uniform noise peaks in [100, precursor m/z].
msio::SpectrumRecord synth_spectrum(const chem::Peptide& peptide, const SynthOptions& options);

}  // namespace specnova::cli
