#pragma once

// Spectrum, protein and PSM records plus their text interchange formats:
// MGF (read/write), FASTA (read), PSM TSV (read/write).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specnova/chem.hpp"

namespace specnova::msio {

struct Peak {
    double mz;
    double intensity;

    friend bool operator==(const Peak&, const Peak&) = default;
};

/// One MS/MS spectrum. Peaks are strictly ascending by m/z.
struct SpectrumRecord {
    std::string id;
    double precursor_mz = 0.0;
    int charge = 2;
    std::optional<double> retention_seconds;
    std::vector<Peak> peaks;
};

/// precursor_mz * charge - charge * proton. Throws InvalidInput for charge < 1.
double precursor_neutral_mass(double precursor_mz, int charge);

inline double precursor_neutral_mass(const SpectrumRecord& s) {
    return precursor_neutral_mass(s.precursor_mz, s.charge);
}

/// Issue found while parsing, tied to a record and a line.
struct ParseIssue {
    std::size_t line;
    std::string record;
    std::string message;
};

struct MgfParseResult {
    std::vector<SpectrumRecord> spectra;
    std::vector<ParseIssue> errors;
    std::vector<ParseIssue> warnings;
};

/// Streaming MGF reader. A malformed block is reported and skipped; the
/// parser resumes at the next BEGIN IONS.
MgfParseResult parse_mgf(std::istream& in);

void write_mgf(std::ostream& out, const std::vector<SpectrumRecord>& spectra);

struct ProteinRecord {
    std::string accession;
    std::string description;
    std::string sequence;
};

/// What to do with ambiguous residue letters (B, J, O, U, X, Z).
enum class WildcardPolicy { split, skip_protein };

bool is_wildcard_residue(char c) noexcept;

struct FastaParseResult {
    std::vector<ProteinRecord> proteins;
    std::vector<ParseIssue> errors;
};

FastaParseResult parse_fasta(std::istream& in, WildcardPolicy policy = WildcardPolicy::split);

enum class PsmSource { db, denovo, hybrid };

std::string_view to_string(PsmSource source);
PsmSource parse_psm_source(std::string_view text);

struct PsmRecord {
    std::string spectrum_id;
    chem::Peptide peptide;
    double score = 0.0;
    int rank = 1;
    bool is_decoy = false;
    std::optional<double> q_value;
    PsmSource source = PsmSource::db;
    std::vector<double> per_position_scores;
};

/// Writes the PSM TSV (header + one row per record) and returns the number
/// of data rows. Throws std::ios_base::failure on stream errors.
std::size_t write_psms(const std::vector<PsmRecord>& records, std::ostream& out);

/// Reads a PSM TSV. Only spectrum_id and sequence are required columns.
std::vector<PsmRecord> read_psms(std::istream& in);

/// Fixed-point text with six decimals, as used in every TSV column.
std::string format_fixed6(double value);

}  // namespace specnova::msio
