#include "specnova/chem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "specnova/constants.hpp"
#include "specnova/errors.hpp"

namespace specnova::chem {

namespace {

constexpr std::string_view kStandard = "ACDEFGHIKLMNPQRSTVWY";

constexpr std::array<ResidueToken, kTokenCount> kTokens = [] {
    std::array<ResidueToken, kTokenCount> out{};
    for (std::size_t i = 0; i < kStandard.size(); ++i) out[i] = {kStandard[i], Mod::none};
    out[20] = {'C', Mod::carbamidomethyl};
    out[21] = {'M', Mod::oxidation};
    out[22] = {'N', Mod::deamidation};
    out[23] = {'Q', Mod::deamidation};
    return out;
}();

double base_mass(char symbol) {
    namespace k = constants;
    switch (symbol) {
        case 'G': return k::kGly;
        case 'A': return k::kAla;
        case 'S': return k::kSer;
        case 'P': return k::kPro;
        case 'V': return k::kVal;
        case 'T': return k::kThr;
        case 'C': return k::kCys;
        case 'L': return k::kLeu;
        case 'I': return k::kIle;
        case 'N': return k::kAsn;
        case 'D': return k::kAsp;
        case 'Q': return k::kGln;
        case 'K': return k::kLys;
        case 'E': return k::kGlu;
        case 'M': return k::kMet;
        case 'H': return k::kHis;
        case 'F': return k::kPhe;
        case 'R': return k::kArg;
        case 'Y': return k::kTyr;
        case 'W': return k::kTrp;
        default: break;
    }
    throw InvalidInput(std::string("unknown residue symbol '") + symbol + "'");
}

double mod_delta(Mod mod) {
    switch (mod) {
        case Mod::none: return 0.0;
        case Mod::carbamidomethyl: return constants::kCarbamidomethyl;
        case Mod::oxidation: return constants::kOxidation;
        case Mod::deamidation: return constants::kDeamidation;
    }
    return 0.0;
}

bool mod_allowed_on(Mod mod, char symbol) noexcept {
    switch (mod) {
        case Mod::none: return true;
        case Mod::carbamidomethyl: return symbol == 'C';
        case Mod::oxidation: return symbol == 'M';
        case Mod::deamidation: return symbol == 'N' || symbol == 'Q';
    }
    return false;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string_view mod_tag(Mod mod) {
    switch (mod) {
        case Mod::none: return "";
        case Mod::carbamidomethyl: return "cam";
        case Mod::oxidation: return "ox";
        case Mod::deamidation: return "deam";
    }
    return "";
}

Mod parse_mod(std::string_view text) {
    const auto t = lowercase(trim(text));
    if (t == "cam" || t == "carbamidomethyl" || t == "carbamidomethylation") return Mod::carbamidomethyl;
    if (t == "ox" || t == "oxidation") return Mod::oxidation;
    if (t == "deam" || t == "deamidation" || t == "deamidated") return Mod::deamidation;
    throw InvalidInput("unknown modification '" + std::string(text) + "'");
}

bool is_standard_residue(char symbol) noexcept {
    return kStandard.find(symbol) != std::string_view::npos;
}

bool is_valid(ResidueToken token) noexcept {
    return is_standard_residue(token.symbol) && mod_allowed_on(token.mod, token.symbol);
}

std::size_t token_index(ResidueToken token) {
    const auto it = std::find(kTokens.begin(), kTokens.end(), token);
    if (it == kTokens.end()) {
        throw InvalidInput("invalid residue token '" + std::string(1, token.symbol) + "(" +
                           std::string(mod_tag(token.mod)) + ")'");
    }
    return static_cast<std::size_t>(it - kTokens.begin());
}

ResidueToken token_at(std::size_t index) {
    if (index >= kTokenCount) throw InvalidInput("token index out of range");
    return kTokens[index];
}

const std::array<ResidueToken, kTokenCount>& all_tokens() { return kTokens; }

std::string to_string(ResidueToken token) {
    std::string out(1, token.symbol);
    if (token.mod != Mod::none) {
        out += '(';
        out += mod_tag(token.mod);
        out += ')';
    }
    return out;
}

ResidueToken isobaric_representative(ResidueToken token) noexcept {
    if (token.symbol == 'I') return {'L', Mod::none};
    if (token.mod == Mod::deamidation) return {token.symbol == 'N' ? 'D' : 'E', Mod::none};
    return token;
}

ResidueTable::ResidueTable() : water_(constants::kWater), proton_(constants::kProton) {
    std::string canon = "v" + std::to_string(constants::kConstantsVersion);
    char buf[64];
    for (std::size_t i = 0; i < kTokenCount; ++i) {
        masses_[i] = base_mass(kTokens[i].symbol) + mod_delta(kTokens[i].mod);
        std::snprintf(buf, sizeof buf, ";%s=%.9f", to_string(kTokens[i]).c_str(), masses_[i]);
        canon += buf;
    }
    std::snprintf(buf, sizeof buf, ";water=%.9f;proton=%.9f", water_, proton_);
    canon += buf;
    fingerprint_ = fnv1a(canon);
}

const ResidueTable& ResidueTable::standard() {
    static const ResidueTable table;
    return table;
}

double ResidueTable::mass(ResidueToken token) const { return masses_[token_index(token)]; }

double residue_mass(ResidueToken token) { return ResidueTable::standard().mass(token); }

double residue_sum(std::span<const ResidueToken> tokens) {
    const auto& table = ResidueTable::standard();
    double sum = 0.0;
    for (const auto& t : tokens) sum += table.mass(t);
    return sum;
}

Peptide::Peptide(std::vector<ResidueToken> tokens) : tokens_(std::move(tokens)) {
    for (const auto& t : tokens_) token_index(t);
}

Peptide Peptide::parse(std::string_view text) {
    std::vector<ResidueToken> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
        if (!is_standard_residue(c)) {
            throw InvalidInput("invalid residue '" + std::string(1, text[i]) + "' in peptide '" +
                               std::string(text) + "'");
        }
        ResidueToken token{c, Mod::none};
        ++i;
        if (i < text.size() && text[i] == '(') {
            const auto close = text.find(')', i);
            if (close == std::string_view::npos) {
                throw InvalidInput("unterminated modification in '" + std::string(text) + "'");
            }
            token.mod = parse_mod(text.substr(i + 1, close - i - 1));
            i = close + 1;
        }
        if (!is_valid(token)) {
            throw InvalidInput("modification '" + std::string(mod_tag(token.mod)) +
                               "' not allowed on residue " + std::string(1, c));
        }
        tokens.push_back(token);
    }
    Peptide p;
    p.tokens_ = std::move(tokens);
    return p;
}

Peptide Peptide::reversed() const {
    Peptide p;
    p.tokens_.assign(tokens_.rbegin(), tokens_.rend());
    return p;
}

std::string Peptide::to_string() const {
    std::string out;
    out.reserve(tokens_.size() + 4);
    for (const auto& t : tokens_) out += chem::to_string(t);
    return out;
}

std::string Peptide::letters() const {
    std::string out;
    out.reserve(tokens_.size());
    for (const auto& t : tokens_) out += t.symbol;
    return out;
}

double peptide_mass(const Peptide& peptide) {
    if (peptide.empty()) throw InvalidInput("peptide_mass of an empty peptide");
    return residue_sum(peptide.tokens()) + ResidueTable::standard().water();
}

std::vector<FragmentIon> fragment_mzs(const Peptide& peptide, std::span<const IonKind> kinds,
                                      int charge) {
    if (peptide.empty()) throw InvalidInput("fragment_mzs of an empty peptide");
    if (charge < 1) throw InvalidInput("fragment charge must be >= 1");
    const auto& table = ResidueTable::standard();
    const auto n = peptide.size();
    const double z = charge;
    const double proton_part = z * table.proton();

    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + table.mass(peptide[i]);

    const bool want_b = std::find(kinds.begin(), kinds.end(), IonKind::b) != kinds.end();
    const bool want_y = std::find(kinds.begin(), kinds.end(), IonKind::y) != kinds.end();

    std::vector<FragmentIon> ions;
    ions.reserve(2 * (n - 1));
    if (want_b) {
        for (std::size_t i = 1; i < n; ++i) {
            ions.push_back({IonKind::b, static_cast<int>(i), charge, (prefix[i] + proton_part) / z});
        }
    }
    if (want_y) {
        for (std::size_t j = 1; j < n; ++j) {
            const double suffix = prefix[n] - prefix[n - j];
            ions.push_back(
                {IonKind::y, static_cast<int>(j), charge, (suffix + table.water() + proton_part) / z});
        }
    }
    return ions;
}

Tolerance Tolerance::ppm(double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("tolerance must be >= 0");
    return {v, ToleranceUnit::ppm};
}

Tolerance Tolerance::da(double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("tolerance must be >= 0");
    return {v, ToleranceUnit::da};
}

MassWindow ppm_window(double mass, Tolerance tol) {
    if (!(mass > 0.0)) throw InvalidInput("mass window requires a positive mass");
    const double w = tol.width_at(mass);
    return {mass - w, mass + w};
}

ModSpec parse_mod_spec(std::string_view text) {
    const auto t = trim(text);
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidInput("modification spec '" + std::string(text) + "' must look like RESIDUES:mod");
    }
    ModSpec spec{parse_mod(t.substr(colon + 1)), {}};
    for (char c : trim(t.substr(0, colon))) {
        const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (!mod_allowed_on(spec.mod, u) || !is_standard_residue(u)) {
            throw InvalidInput("modification '" + std::string(mod_tag(spec.mod)) +
                               "' cannot be placed on residue " + std::string(1, c));
        }
        if (spec.residues.find(u) == std::string::npos) spec.residues += u;
    }
    if (spec.residues.empty()) throw InvalidInput("modification spec '" + std::string(text) + "' names no residue");
    return spec;
}

std::vector<ModSpec> parse_mod_specs(std::string_view text) {
    std::vector<ModSpec> out;
    while (!trim(text).empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        if (!trim(item).empty()) out.push_back(parse_mod_spec(item));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_mod_specs(std::span<const ModSpec> specs) {
    std::string out;
    for (const auto& s : specs) {
        if (!out.empty()) out += ',';
        out += s.residues + ":" + std::string(mod_tag(s.mod));
    }
    return out;
}

std::vector<Peptide> expand_modifications(const Peptide& peptide, std::span<const ModSpec> fixed,
                                          std::span<const ModSpec> variable, int max_variable) {
    if (max_variable < 0) throw InvalidInput("max_variable must be >= 0");

    std::vector<ResidueToken> base(peptide.tokens().begin(), peptide.tokens().end());
    for (auto& t : base) {
        if (t.mod != Mod::none) continue;
        for (const auto& spec : fixed) {
            if (spec.residues.find(t.symbol) != std::string::npos) {
                t.mod = spec.mod;
                break;
            }
        }
    }

    // Per site, the distinct variable modifications that may sit there.
    std::vector<std::pair<std::size_t, std::vector<Mod>>> sites;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i].mod != Mod::none) continue;
        std::vector<Mod> choices;
        for (const auto& spec : variable) {
            if (spec.residues.find(base[i].symbol) != std::string::npos &&
                std::find(choices.begin(), choices.end(), spec.mod) == choices.end()) {
                choices.push_back(spec.mod);
            }
        }
        if (!choices.empty()) sites.emplace_back(i, std::move(choices));
    }

    std::vector<Peptide> out;
    std::vector<ResidueToken> work = base;
    auto recurse = [&](auto&& self, std::size_t site, int used) -> void {
        if (site == sites.size()) {
            out.emplace_back(work);
            return;
        }
        self(self, site + 1, used);
        if (used >= max_variable) return;
        auto& [pos, choices] = sites[site];
        for (Mod m : choices) {
            work[pos].mod = m;
            self(self, site + 1, used + 1);
            work[pos].mod = Mod::none;
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

}  // namespace specnova::chem
