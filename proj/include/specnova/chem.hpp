#pragma once

// Residue vocabulary, monoisotopic mass arithmetic and theoretical fragment
// ions. Everything here is immutable and free of shared state.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace specnova::chem {

enum class Mod : std::uint8_t { none, carbamidomethyl, oxidation, deamidation };

/// Short tag used in token strings: "cam", "ox", "deam" ("" for none).
std::string_view mod_tag(Mod mod);

/// Accepts short tags and full names, case-insensitive.
Mod parse_mod(std::string_view text);

/// One residue of a peptide: a standard amino acid letter plus an optional
/// modification on its host residue.
struct ResidueToken {
    char symbol = 'G';
    Mod mod = Mod::none;

    friend auto operator<=>(const ResidueToken&, const ResidueToken&) = default;
};

/// 20 standard residues + C(cam) + M(ox) + N(deam) + Q(deam).
inline constexpr std::size_t kTokenCount = 24;

bool is_standard_residue(char symbol) noexcept;
bool is_valid(ResidueToken token) noexcept;

/// Stable index into [0, kTokenCount). Throws InvalidInput for invalid tokens.
std::size_t token_index(ResidueToken token);
ResidueToken token_at(std::size_t index);
const std::array<ResidueToken, kTokenCount>& all_tokens();

/// "M(ox)", "C(cam)", "K".
std::string to_string(ResidueToken token);

/// Representative of the token's isobaric class: I -> L, N(deam) -> D,
/// Q(deam) -> E. Fragment masses cannot tell members of a class apart.
ResidueToken isobaric_representative(ResidueToken token) noexcept;

class ResidueTable {
public:
    static const ResidueTable& standard();

    /// Base mass plus modification delta. Throws InvalidInput.
    double mass(ResidueToken token) const;
    double water() const noexcept { return water_; }
    double proton() const noexcept { return proton_; }

    /// Masses ordered by token_index.
    std::span<const double, kTokenCount> masses() const noexcept { return masses_; }

    /// Stable 64-bit hash of every constant in the table.
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

private:
    ResidueTable();

    std::array<double, kTokenCount> masses_{};
    double water_;
    double proton_;
    std::uint64_t fingerprint_;
};

double residue_mass(ResidueToken token);

/// Sum of residue masses, no termini.
double residue_sum(std::span<const ResidueToken> tokens);

class Peptide {
public:
    Peptide() = default;
    explicit Peptide(std::vector<ResidueToken> tokens);

    /// Parses "PEPTIDEK", "AC(cam)K", "M(ox)K"; empty text gives an empty peptide. Throws InvalidInput.
    static Peptide parse(std::string_view text);

    std::span<const ResidueToken> tokens() const noexcept { return tokens_; }
    std::size_t size() const noexcept { return tokens_.size(); }
    bool empty() const noexcept { return tokens_.empty(); }
    const ResidueToken& operator[](std::size_t i) const { return tokens_[i]; }

    Peptide reversed() const;

    /// Canonical token string, also the sequence key for sorting and dedupe.
    std::string to_string() const;

    /// Residue letters only, modifications dropped.
    std::string letters() const;

    friend bool operator==(const Peptide&, const Peptide&) = default;

private:
    std::vector<ResidueToken> tokens_;
};

/// Neutral monoisotopic mass: residues + water. Throws InvalidInput if empty.
double peptide_mass(const Peptide& peptide);

enum class IonKind : std::uint8_t { b, y };

struct FragmentIon {
    IonKind kind;
    int index;
    int charge;
    double mz;
};

/// b_1..b_{n-1} and y_1..y_{n-1} at the given charge, sorted by (kind, index).
std::vector<FragmentIon> fragment_mzs(const Peptide& peptide, std::span<const IonKind> kinds,
                                      int charge = 1);

enum class ToleranceUnit : std::uint8_t { ppm, da };

struct Tolerance {
    double value = 0.0;
    ToleranceUnit unit = ToleranceUnit::ppm;

    static Tolerance ppm(double v);
    static Tolerance da(double v);

    /// Half-width in Daltons around the reference mass.
    double width_at(double mass) const noexcept {
        return unit == ToleranceUnit::ppm ? mass * value * 1e-6 : value;
    }
};

struct MassWindow {
    double lo;
    double hi;

    bool contains(double mass) const noexcept { return mass >= lo && mass <= hi; }
};

/// mass ± tolerance. Throws InvalidInput for non-positive mass.
MassWindow ppm_window(double mass, Tolerance tol);

/// A modification applied to a set of host residues, e.g. "NQ:deam".
struct ModSpec {
    Mod mod;
    std::string residues;
};

ModSpec parse_mod_spec(std::string_view text);

/// Comma-separated list; empty text gives an empty list.
std::vector<ModSpec> parse_mod_specs(std::string_view text);
std::string format_mod_specs(std::span<const ModSpec> specs);

/// Applies fixed modifications to every eligible site and enumerates all
/// subsets of variable sites with at most max_variable modifications.
/// The unmodified-variable form is always first; no duplicates.
std::vector<Peptide> expand_modifications(const Peptide& peptide, std::span<const ModSpec> fixed,
                                          std::span<const ModSpec> variable, int max_variable);

}  // namespace specnova::chem
