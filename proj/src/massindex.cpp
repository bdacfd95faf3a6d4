#include "specnova/massindex.hpp"

#include <algorithm>
#include <bit>
#include <array>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <set>

#include "specnova/constants.hpp"
#include "specnova/errors.hpp"

namespace specnova::massindex {

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'P', 'N', 'V', 'I', 'D', 'X', '\0'};

struct RawEntry {
    std::string key;
    chem::Peptide peptide;
    double mass;
    Origin origin;
};

// Everything one protein contributes, before cross-protein merging.
std::vector<RawEntry> expand_protein(const msio::ProteinRecord& protein, const BuildOptions& options) {
    std::vector<RawEntry> out;
    const auto& mods = options.mods;
    auto add = [&](const std::string& sequence, Origin origin) {
        const auto base = chem::Peptide::parse(sequence);
        for (auto& variant : chem::expand_modifications(base, mods.fixed, mods.variable, mods.max_variable)) {
            auto key = variant.to_string();
            const double mass = chem::peptide_mass(variant);
            out.push_back({std::move(key), std::move(variant), mass, origin});
        }
    };
    for (const auto& piece : digest::digest(protein, options.enzyme, options.digest)) {
        add(piece.sequence, {protein.accession, false});
        if (options.with_decoys) {
            const auto decoy = digest::decoy_peptide(piece.sequence);
            if (decoy != piece.sequence) add(decoy, {"DECOY_" + protein.accession, true});
        }
    }
    return out;
}

MassIndex merge(std::vector<std::vector<RawEntry>> per_protein, std::size_t protein_count) {
    std::vector<RawEntry> raw;
    std::size_t total = 0;
    for (const auto& v : per_protein) total += v.size();
    raw.reserve(total);
    for (auto& v : per_protein) std::move(v.begin(), v.end(), std::back_inserter(raw));

    std::sort(raw.begin(), raw.end(), [](const RawEntry& a, const RawEntry& b) {
        if (a.key != b.key) return a.key < b.key;
        return a.origin < b.origin;
    });

    std::vector<PeptideEntry> entries;
    for (std::size_t i = 0; i < raw.size();) {
        std::size_t j = i;
        PeptideEntry e{std::move(raw[i].peptide), raw[i].mass, {}, raw[i].key};
        bool has_target = false;
        for (; j < raw.size() && raw[j].key == e.sequence_key; ++j) {
            has_target = has_target || !raw[j].origin.is_decoy;
            if (e.origins.empty() || e.origins.back() != raw[j].origin) e.origins.push_back(raw[j].origin);
        }
        if (has_target) {
            std::erase_if(e.origins, [](const Origin& o) { return o.is_decoy; });
        }
        // Targets sort before decoys; keep that order explicit.
        std::stable_sort(e.origins.begin(), e.origins.end(),
                         [](const Origin& a, const Origin& b) { return a.is_decoy < b.is_decoy; });
        entries.push_back(std::move(e));
        i = j;
    }
    std::sort(entries.begin(), entries.end(), [](const PeptideEntry& a, const PeptideEntry& b) {
        if (a.neutral_mass != b.neutral_mass) return a.neutral_mass < b.neutral_mass;
        return a.sequence_key < b.sequence_key;
    });
    return MassIndex(std::move(entries), protein_count);
}

std::size_t distinct_accessions(std::span<const msio::ProteinRecord> proteins) {
    std::set<std::string_view> seen;
    for (const auto& p : proteins) seen.insert(p.accession);
    return seen.size();
}

template <typename T>
void put(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw FormatError("truncated index file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

MassIndex::MassIndex(std::vector<PeptideEntry> entries, std::size_t protein_count)
    : entries_(std::move(entries)), protein_count_(protein_count) {}

std::span<const PeptideEntry> MassIndex::query(double neutral_mass, chem::Tolerance tol) const {
    if (!(neutral_mass > 0.0)) return {};
    const auto window = chem::ppm_window(neutral_mass, tol);
    const auto lo = std::lower_bound(entries_.begin(), entries_.end(), window.lo,
                                     [](const PeptideEntry& e, double m) { return e.neutral_mass < m; });
    const auto hi = std::upper_bound(lo, entries_.end(), window.hi,
                                     [](double m, const PeptideEntry& e) { return m < e.neutral_mass; });
    return {lo, hi};
}

IndexStats index_stats(const MassIndex& index) {
    IndexStats s;
    const auto entries = index.entries();
    s.n_entries = entries.size();
    for (const auto& e : entries) (e.is_decoy() ? s.n_decoys : s.n_targets)++;
    if (!entries.empty()) {
        s.min_mass = entries.front().neutral_mass;
        s.max_mass = entries.back().neutral_mass;
    }
    return s;
}

MassIndex build_index_serial(std::span<const msio::ProteinRecord> proteins, const BuildOptions& options) {
    options.digest.validate();
    std::vector<std::vector<RawEntry>> per_protein(proteins.size());
    for (std::size_t i = 0; i < proteins.size(); ++i) per_protein[i] = expand_protein(proteins[i], options);
    return merge(std::move(per_protein), distinct_accessions(proteins));
}

MassIndex build_index(std::span<const msio::ProteinRecord> proteins, const BuildOptions& options) {
    options.digest.validate();
    const auto n = static_cast<std::ptrdiff_t>(proteins.size());
    std::vector<std::vector<RawEntry>> per_protein(proteins.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) per_protein[i] = expand_protein(proteins[i], options);
    return merge(std::move(per_protein), distinct_accessions(proteins));
}

void save_index(const MassIndex& index, std::ostream& out) {
    const auto& table = chem::ResidueTable::standard();
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kIndexFormatVersion);
    put<std::uint32_t>(out, constants::kConstantsVersion);
    put<std::uint64_t>(out, table.fingerprint());
    put<std::uint64_t>(out, index.protein_count());
    put<std::uint64_t>(out, index.size());
    for (const auto& e : index.entries()) {
        put<std::uint16_t>(out, static_cast<std::uint16_t>(e.peptide.size()));
        for (const auto& t : e.peptide.tokens()) put<std::uint8_t>(out, static_cast<std::uint8_t>(chem::token_index(t)));
        put<double>(out, e.neutral_mass);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(e.origins.size()));
        for (const auto& o : e.origins) {
            put<std::uint8_t>(out, o.is_decoy ? 1 : 0);
            put<std::uint32_t>(out, static_cast<std::uint32_t>(o.accession.size()));
            out.write(o.accession.data(), static_cast<std::streamsize>(o.accession.size()));
        }
    }
    if (!out) throw std::ios_base::failure("failed writing index");
}

MassIndex load_index(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw FormatError("not a specnova index file");
    const auto version = get<std::uint32_t>(in);
    if (version != kIndexFormatVersion) {
        throw FormatError("unsupported index format version " + std::to_string(version));
    }
    const auto constants_version = get<std::uint32_t>(in);
    const auto fingerprint = get<std::uint64_t>(in);
    if (constants_version != constants::kConstantsVersion ||
        fingerprint != chem::ResidueTable::standard().fingerprint()) {
        throw FormatError("index was built with a different mass table; rebuild it");
    }
    const auto protein_count = get<std::uint64_t>(in);
    const auto n = get<std::uint64_t>(in);

    std::vector<PeptideEntry> entries;
    entries.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 24)));
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto len = get<std::uint16_t>(in);
        std::vector<chem::ResidueToken> tokens;
        tokens.reserve(len);
        for (std::uint16_t k = 0; k < len; ++k) {
            const auto idx = get<std::uint8_t>(in);
            if (idx >= chem::kTokenCount) throw FormatError("corrupt residue token in index");
            tokens.push_back(chem::token_at(idx));
        }
        PeptideEntry e;
        e.peptide = chem::Peptide(std::move(tokens));
        e.neutral_mass = get<double>(in);
        if (e.peptide.empty() || std::abs(chem::peptide_mass(e.peptide) - e.neutral_mass) > 1e-9) {
            throw FormatError("corrupt peptide entry in index");
        }
        e.sequence_key = e.peptide.to_string();
        const auto n_origins = get<std::uint32_t>(in);
        for (std::uint32_t k = 0; k < n_origins; ++k) {
            Origin o;
            o.is_decoy = get<std::uint8_t>(in) != 0;
            const auto acc_len = get<std::uint32_t>(in);
            o.accession.resize(acc_len);
            if (!in.read(o.accession.data(), acc_len)) throw FormatError("truncated index file");
            e.origins.push_back(std::move(o));
        }
        if (e.origins.empty()) throw FormatError("index entry without origin");
        entries.push_back(std::move(e));
    }
    return MassIndex(std::move(entries), static_cast<std::size_t>(protein_count));
}

}  // namespace specnova::massindex
