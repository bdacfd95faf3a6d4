#include "specnova/msio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "specnova/errors.hpp"

namespace specnova::msio {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const auto start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

std::vector<std::string_view> split_tabs(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto tab = s.find('\t', start);
        out.push_back(s.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return out;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::optional<int> parse_charge(std::string_view value) {
    value = trim(value);
    // "2+", "2", "2+ and 3+": the first listed state wins.
    std::size_t end = 0;
    while (end < value.size() && std::isdigit(static_cast<unsigned char>(value[end]))) ++end;
    if (end == 0) return std::nullopt;
    int z = 0;
    std::from_chars(value.data(), value.data() + end, z);
    if (end < value.size() && value[end] == '-') return std::nullopt;
    return z;
}

struct BlockState {
    SpectrumRecord record;
    std::size_t begin_line = 0;
    bool has_pepmass = false;
    bool has_charge = false;
    bool unsorted = false;
    std::optional<std::string> error;
    std::size_t error_line = 0;
};

}  // namespace

double precursor_neutral_mass(double precursor_mz, int charge) {
    if (charge < 1) throw InvalidInput("precursor charge must be >= 1");
    return precursor_mz * charge - charge * chem::ResidueTable::standard().proton();
}

MgfParseResult parse_mgf(std::istream& in) {
    MgfParseResult result;
    std::optional<BlockState> block;
    std::size_t ordinal = 0;
    std::size_t line_no = 0;
    std::string line;

    auto fail = [&](std::string msg) {
        if (block && !block->error) {
            block->error = std::move(msg);
            block->error_line = line_no;
        }
    };

    auto finish = [&] {
        auto& b = *block;
        const std::string name = b.record.id;
        if (!b.error) {
            if (!b.has_pepmass) {
                b.error = "missing PEPMASS";
                b.error_line = b.begin_line;
            } else if (b.record.peaks.empty()) {
                b.error = "spectrum has no peaks";
                b.error_line = b.begin_line;
            } else if (!(b.record.precursor_mz > 0.0)) {
                b.error = "PEPMASS must be positive";
                b.error_line = b.begin_line;
            }
        }
        if (b.error) {
            result.errors.push_back({b.error_line, name, *b.error});
        } else {
            auto& peaks = b.record.peaks;
            std::stable_sort(peaks.begin(), peaks.end(),
                             [](const Peak& x, const Peak& y) { return x.mz < y.mz; });
            // Strict ordering: coincident m/z values collapse to the most intense.
            std::vector<Peak> merged;
            merged.reserve(peaks.size());
            bool collapsed = false;
            for (const auto& p : peaks) {
                if (!merged.empty() && merged.back().mz == p.mz) {
                    merged.back().intensity = std::max(merged.back().intensity, p.intensity);
                    collapsed = true;
                } else {
                    merged.push_back(p);
                }
            }
            peaks = std::move(merged);
            if (collapsed) result.warnings.push_back({b.begin_line, name, "duplicate peak m/z values merged"});
            if (!b.has_charge) result.warnings.push_back({b.begin_line, name, "CHARGE missing, assuming 2+"});
            result.spectra.push_back(std::move(b.record));
        }
        block.reset();
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;

        if (upper(text) == "BEGIN IONS") {
            if (block) {
                fail("BEGIN IONS inside an open block (missing END IONS)");
                finish();
            }
            block.emplace();
            block->begin_line = line_no;
            block->record.id = std::to_string(++ordinal);
            continue;
        }
        if (upper(text) == "END IONS") {
            if (block) {
                finish();
            } else {
                result.errors.push_back({line_no, "", "END IONS without BEGIN IONS"});
            }
            continue;
        }
        if (!block) continue;  // global parameters outside blocks
        if (block->error) continue;

        const auto eq = text.find('=');
        if (eq != std::string_view::npos && std::isalpha(static_cast<unsigned char>(text.front()))) {
            const auto key = upper(trim(text.substr(0, eq)));
            const auto value = trim(text.substr(eq + 1));
            if (key == "TITLE") {
                if (!value.empty()) block->record.id = std::string(value);
            } else if (key == "PEPMASS") {
                const auto fields = split_ws(value);
                const auto mz = fields.empty() ? std::nullopt : to_double(fields[0]);
                if (!mz) {
                    fail("non-numeric PEPMASS");
                } else {
                    block->record.precursor_mz = *mz;
                    block->has_pepmass = true;
                }
            } else if (key == "CHARGE") {
                const auto z = parse_charge(value);
                if (!z || *z < 1) {
                    fail("invalid CHARGE '" + std::string(value) + "'");
                } else {
                    block->record.charge = *z;
                    block->has_charge = true;
                }
            } else if (key == "RTINSECONDS") {
                const auto rt = to_double(value);
                if (!rt) {
                    fail("non-numeric RTINSECONDS");
                } else {
                    block->record.retention_seconds = *rt;
                }
            }
            continue;
        }

        const auto fields = split_ws(text);
        const auto mz = fields.size() >= 2 ? to_double(fields[0]) : std::nullopt;
        const auto intensity = fields.size() >= 2 ? to_double(fields[1]) : std::nullopt;
        if (!mz || !intensity) {
            fail("malformed peak line '" + std::string(text) + "'");
        } else if (*intensity < 0.0 || *mz <= 0.0) {
            fail("negative intensity or non-positive m/z");
        } else {
            block->record.peaks.push_back({*mz, *intensity});
        }
    }
    if (block) {
        const auto begin = block->begin_line;
        result.errors.push_back({begin, block->record.id, "unterminated block (missing END IONS)"});
    }
    return result;
}

void write_mgf(std::ostream& out, const std::vector<SpectrumRecord>& spectra) {
    for (const auto& s : spectra) {
        out << "BEGIN IONS\n";
        out << "TITLE=" << s.id << '\n';
        out << fmt::format("PEPMASS={:.6f}\n", s.precursor_mz);
        out << "CHARGE=" << s.charge << "+\n";
        if (s.retention_seconds) out << fmt::format("RTINSECONDS={:.3f}\n", *s.retention_seconds);
        for (const auto& p : s.peaks) out << fmt::format("{:.6f} {:.6f}\n", p.mz, p.intensity);
        out << "END IONS\n\n";
    }
}

bool is_wildcard_residue(char c) noexcept {
    switch (c) {
        case 'B': case 'J': case 'O': case 'U': case 'X': case 'Z': return true;
        default: return false;
    }
}

FastaParseResult parse_fasta(std::istream& in, WildcardPolicy policy) {
    FastaParseResult result;
    std::optional<ProteinRecord> current;
    std::size_t header_line = 0;
    std::size_t line_no = 0;
    std::string line;
    std::optional<std::string> record_error;

    auto finish = [&] {
        if (!current) return;
        if (!record_error && current->sequence.empty()) record_error = "empty sequence";
        if (!record_error && policy == WildcardPolicy::skip_protein &&
            std::any_of(current->sequence.begin(), current->sequence.end(), is_wildcard_residue)) {
            record_error = "ambiguous residue present; protein skipped";
        }
        if (record_error) {
            result.errors.push_back({header_line, current->accession, *record_error});
        } else {
            result.proteins.push_back(std::move(*current));
        }
        current.reset();
        record_error.reset();
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto text = trim(line);
        if (text.empty()) continue;
        if (text.front() == '>') {
            finish();
            current.emplace();
            header_line = line_no;
            const auto header = trim(text.substr(1));
            const auto ws = header.find_first_of(" \t");
            current->accession = std::string(header.substr(0, ws));
            if (ws != std::string_view::npos) current->description = std::string(trim(header.substr(ws)));
            continue;
        }
        if (!current) {
            result.errors.push_back({line_no, "", "sequence line before any '>' header"});
            continue;
        }
        if (record_error) continue;
        for (char c : text) {
            const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (chem::is_standard_residue(u) || is_wildcard_residue(u)) {
                current->sequence += u;
            } else if (c == '*') {
                continue;  // translation stop
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                record_error = fmt::format("illegal residue character '{}' at line {}", c, line_no);
                break;
            }
        }
    }
    finish();
    return result;
}

std::string_view to_string(PsmSource source) {
    switch (source) {
        case PsmSource::db: return "db";
        case PsmSource::denovo: return "denovo";
        case PsmSource::hybrid: return "hybrid";
    }
    return "db";
}

PsmSource parse_psm_source(std::string_view text) {
    if (text == "db") return PsmSource::db;
    if (text == "denovo") return PsmSource::denovo;
    if (text == "hybrid") return PsmSource::hybrid;
    throw InvalidInput("unknown PSM source '" + std::string(text) + "'");
}

std::string format_fixed6(double value) {
    auto s = fmt::format("{:.6f}", value);
    if (s == "-0.000000") s.erase(0, 1);
    return s;
}

std::size_t write_psms(const std::vector<PsmRecord>& records, std::ostream& out) {
    out << "spectrum_id\tsequence\tscore\trank\tsource\tis_decoy\tq_value\tper_position_scores\n";
    for (const auto& r : records) {
        std::string positions;
        for (std::size_t i = 0; i < r.per_position_scores.size(); ++i) {
            if (i) positions += ',';
            positions += format_fixed6(r.per_position_scores[i]);
        }
        out << r.spectrum_id << '\t' << r.peptide.to_string() << '\t' << format_fixed6(r.score) << '\t'
            << r.rank << '\t' << to_string(r.source) << '\t' << (r.is_decoy ? 1 : 0) << '\t'
            << (r.q_value ? format_fixed6(*r.q_value) : std::string()) << '\t' << positions << '\n';
    }
    if (!out) throw std::ios_base::failure("failed writing PSM table");
    return records.size();
}

std::vector<PsmRecord> read_psms(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) return {};
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_tabs(line);
    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto c_id = column("spectrum_id");
    const auto c_seq = column("sequence");
    if (!c_id || !c_seq) throw ParseError("PSM table needs spectrum_id and sequence columns", 1);
    const auto c_score = column("score");
    const auto c_rank = column("rank");
    const auto c_source = column("source");
    const auto c_decoy = column("is_decoy");
    const auto c_q = column("q_value");
    const auto c_pos = column("per_position_scores");

    std::vector<PsmRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto f = split_tabs(line);
        auto field = [&](std::optional<std::size_t> c) -> std::string_view {
            return c && *c < f.size() ? trim(f[*c]) : std::string_view{};
        };
        auto number = [&](std::optional<std::size_t> c, const char* name) -> std::optional<double> {
            const auto text = field(c);
            if (text.empty()) return std::nullopt;
            const auto v = to_double(text);
            if (!v) throw ParseError(std::string("non-numeric ") + name, line_no);
            return v;
        };

        PsmRecord r;
        r.spectrum_id = std::string(field(c_id));
        try {
            r.peptide = chem::Peptide::parse(field(c_seq));
        } catch (const InvalidInput& e) {
            throw ParseError(e.what(), line_no);
        }
        r.score = number(c_score, "score").value_or(0.0);
        r.rank = static_cast<int>(number(c_rank, "rank").value_or(1.0));
        if (const auto src = field(c_source); !src.empty()) {
            try {
                r.source = parse_psm_source(src);
            } catch (const InvalidInput& e) {
                throw ParseError(e.what(), line_no);
            }
        }
        r.is_decoy = field(c_decoy) == "1";
        r.q_value = number(c_q, "q_value");
        auto positions = field(c_pos);
        while (!positions.empty()) {
            const auto comma = positions.find(',');
            const auto v = to_double(positions.substr(0, comma));
            if (!v) throw ParseError("non-numeric per-position score", line_no);
            r.per_position_scores.push_back(*v);
            if (comma == std::string_view::npos) break;
            positions.remove_prefix(comma + 1);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace specnova::msio
