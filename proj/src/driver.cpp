#include "specnova/driver.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "specnova/assembly.hpp"
#include "specnova/batch.hpp"
#include "specnova/chem.hpp"
#include "specnova/digest.hpp"
#include "specnova/errors.hpp"
#include "specnova/massindex.hpp"
#include "specnova/metrics.hpp"
#include "specnova/msio.hpp"
#include "specnova/scorer.hpp"
#include "specnova/search.hpp"
#include "specnova/synth.hpp"
#include "specnova/uniprot.hpp"

namespace specnova::cli {

namespace {

// Defaults mirror a typical high-resolution tryptic experiment: 20 ppm
// precursor, 0.5 Da fragments, two missed cleavages, fixed C
// carbamidomethylation, variable M oxidation and N/Q deamidation, 1% FDR.
struct RunConfig {
    std::string mgf;
    std::string fasta;
    std::string index_path;
    int taxonomy = 0;
    bool all_entries = false;
    std::string cache_dir = ".";
    std::string uniprot_url = msio::FetchOptions{}.endpoint;

    std::string enzyme = "trypsin";
    int missed_cleavages = 2;
    int min_length = 6;
    int max_length = 50;
    std::string fixed_mods = "C:cam";
    std::string var_mods = "M:ox,NQ:deam";
    int max_var_mods = 3;
    bool no_decoys = false;

    double precursor_ppm = 20.0;
    double fragment_tol_da = 0.5;
    std::string scorer = "ion_evidence";
    double epsilon = 0.01;
    double b_weight = 1.0;
    double y_weight = 1.0;
    int beam = 10;
    int top_k = 2;
    double fdr = 0.01;

    std::string psms;
    int kmer = 6;
    double min_weight = 0.0;

    std::string truth;
    std::string predicted;

    std::string peptides;
    int charge = 2;
    int noise_peaks = 0;
    double dropout = 0.0;
    std::uint64_t seed = 1;
    std::string truth_out;

    int threads = 0;
    std::string output;
};

struct Context {
    RunConfig& cfg;
    std::ostream& out;
    std::ostream& err;
};

std::ifstream open_input(const std::string& path, const char* key) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput(fmt::format("--{}: cannot open '{}'", key, path));
    return in;
}

// Output is staged in memory so a failed run never leaves a partial file.
void emit(Context& ctx, const std::string& text) {
    if (ctx.cfg.output.empty()) {
        ctx.out << text;
        return;
    }
    std::ofstream f(ctx.cfg.output, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidInput(fmt::format("--output: cannot write '{}'", ctx.cfg.output));
    f << text;
    if (!f) throw std::ios_base::failure("failed writing " + ctx.cfg.output);
}

void report_issues(Context& ctx, const char* what, const std::vector<msio::ParseIssue>& issues, const char* level) {
    for (const auto& i : issues) {
        ctx.err << fmt::format("{}\t{}\tline={}\trecord={}\t{}\n", level, what, i.line, i.record, i.message);
    }
}

std::vector<msio::ProteinRecord> load_proteins(Context& ctx) {
    auto& c = ctx.cfg;
    if (!c.fasta.empty()) {
        auto in = open_input(c.fasta, "fasta");
        auto parsed = msio::parse_fasta(in);
        report_issues(ctx, "fasta", parsed.errors, "warning");
        ctx.err << fmt::format("specnova: read {} proteins from {}\n", parsed.proteins.size(), c.fasta);
        return std::move(parsed.proteins);
    }
    if (c.taxonomy > 0) {
        auto transport = msio::make_curl_transport();
        msio::FetchOptions options;
        options.endpoint = c.uniprot_url;
        options.cache_dir = c.cache_dir;
        auto result = msio::fetch_proteome(c.taxonomy, !c.all_entries, *transport, options);
        for (const auto& w : result.warnings) ctx.err << "warning\tuniprot\t" << w << '\n';
        ctx.err << fmt::format("specnova: {} proteins for taxonomy {} ({})\n", result.proteins.size(), c.taxonomy,
                               result.from_cache ? "cache" : "download");
        return std::move(result.proteins);
    }
    throw InvalidInput("one of --fasta or --taxonomy is required");
}

massindex::BuildOptions build_options(const RunConfig& c) {
    massindex::BuildOptions o;
    o.enzyme = digest::enzyme_by_name(c.enzyme);
    o.digest = {c.missed_cleavages, c.min_length, c.max_length};
    o.mods.fixed = chem::parse_mod_specs(c.fixed_mods);
    o.mods.variable = chem::parse_mod_specs(c.var_mods);
    o.mods.max_variable = c.max_var_mods;
    o.with_decoys = !c.no_decoys;
    return o;
}

massindex::MassIndex obtain_index(Context& ctx) {
    auto& c = ctx.cfg;
    if (!c.index_path.empty()) {
        auto in = open_input(c.index_path, "index");
        return massindex::load_index(in);
    }
    const auto proteins = load_proteins(ctx);
    if (proteins.empty()) ctx.err << "warning\tindex\tno proteins; the index is empty\n";
    const auto options = build_options(c);
    return c.threads == 1 ? massindex::build_index_serial(proteins, options)
                          : massindex::build_index(proteins, options);
}

std::vector<msio::SpectrumRecord> load_spectra(Context& ctx) {
    if (ctx.cfg.mgf.empty()) throw InvalidInput("--mgf is required");
    auto in = open_input(ctx.cfg.mgf, "mgf");
    auto parsed = msio::parse_mgf(in);
    report_issues(ctx, "mgf", parsed.errors, "error");
    report_issues(ctx, "mgf", parsed.warnings, "warning");
    ctx.err << fmt::format("specnova: read {} spectra ({} blocks rejected)\n", parsed.spectra.size(),
                           parsed.errors.size());
    return std::move(parsed.spectra);
}

std::unique_ptr<scoring::StepScorer> make_configured_scorer(const RunConfig& c) {
    scoring::IonEvidenceParams p;
    p.fragment_tolerance = chem::Tolerance::da(c.fragment_tol_da);
    p.smoothing_epsilon = c.epsilon;
    p.b_weight = c.b_weight;
    p.y_weight = c.y_weight;
    p.end_mass_tolerance = chem::Tolerance::ppm(c.precursor_ppm);
    return scoring::make_scorer(c.scorer, p);
}

search::SearchConfig search_config(const RunConfig& c) {
    search::SearchConfig s;
    s.precursor_tolerance = chem::Tolerance::ppm(c.precursor_ppm);
    s.beam_width = c.beam;
    s.max_length = c.max_length;
    s.fdr_threshold = c.fdr;
    s.db_top_k = c.top_k;
    s.validate();
    return s;
}

search::KnapsackTable knapsack_for(const std::vector<msio::SpectrumRecord>& spectra, const search::SearchConfig& s) {
    double top = 100.0;
    for (const auto& sp : spectra) top = std::max(top, msio::precursor_neutral_mass(sp));
    return search::KnapsackTable::build(std::span<const chem::ResidueToken>(s.alphabet), top + 1.0,
                                        s.knapsack_resolution);
}

void sort_psms(std::vector<msio::PsmRecord>& psms) {
    std::stable_sort(psms.begin(), psms.end(), [](const msio::PsmRecord& a, const msio::PsmRecord& b) {
        if (a.spectrum_id != b.spectrum_id) return a.spectrum_id < b.spectrum_id;
        return a.rank < b.rank;
    });
}

std::string psm_table(const std::vector<msio::PsmRecord>& psms) {
    std::ostringstream ss;
    msio::write_psms(psms, ss);
    return ss.str();
}

void report_diagnostics(Context& ctx, const std::vector<search::SpectrumOutcome>& outcomes,
                        const std::vector<msio::SpectrumRecord>& spectra) {
    std::vector<const search::Diagnostic*> all;
    for (const auto& o : outcomes) {
        for (const auto& d : o.diagnostics) all.push_back(&d);
    }
    std::stable_sort(all.begin(), all.end(), [](const auto* a, const auto* b) { return a->spectrum_id < b->spectrum_id; });
    for (const auto* d : all) {
        ctx.err << fmt::format("diagnostic\tspectrum={}\tcode={}\t{}\n", d->spectrum_id, d->code, d->detail);
    }
    ctx.err << fmt::format("specnova: searched {} spectra\n", spectra.size());
}

std::vector<search::SpectrumOutcome> run_batch(const RunConfig& c, search::BatchRequest& request) {
    return c.threads == 1 ? search::search_batch_serial(request) : search::search_batch(request);
}

int cmd_digest(Context& ctx) {
    const auto proteins = load_proteins(ctx);
    const auto options = build_options(ctx.cfg);
    std::ostringstream ss;
    ss << "accession\tstart\tpeptide\tmissed_cleavages\tneutral_mass\n";
    for (const auto& p : proteins) {
        for (const auto& d : digest::digest(p, options.enzyme, options.digest)) {
            ss << d.accession << '\t' << d.start << '\t' << d.sequence << '\t' << d.missed_cleavages << '\t'
               << msio::format_fixed6(chem::peptide_mass(chem::Peptide::parse(d.sequence))) << '\n';
        }
    }
    emit(ctx, ss.str());
    return kSuccess;
}

int cmd_index(Context& ctx) {
    if (ctx.cfg.output.empty()) throw InvalidInput("--output is required for index");
    const auto index = obtain_index(ctx);
    const auto stats = massindex::index_stats(index);
    std::ostringstream ss;
    massindex::save_index(index, ss);
    emit(ctx, ss.str());
    ctx.err << fmt::format("specnova: index entries={} targets={} decoys={} mass=[{:.4f}, {:.4f}]\n",
                           stats.n_entries, stats.n_targets, stats.n_decoys, stats.min_mass, stats.max_mass);
    return kSuccess;
}

int cmd_search(Context& ctx, search::Engine engine) {
    const auto& c = ctx.cfg;
    const auto spectra = load_spectra(ctx);
    const auto scorer = make_configured_scorer(c);

    search::BatchRequest request;
    request.spectra = spectra;
    request.scorer = scorer.get();
    request.config = search_config(c);
    request.engine = engine;

    massindex::MassIndex index;
    search::KnapsackTable knapsack;
    if (engine != search::Engine::denovo) {
        index = obtain_index(ctx);
        request.index = &index;
    }
    if (engine != search::Engine::db) {
        knapsack = knapsack_for(spectra, request.config);
        request.knapsack = &knapsack;
    }

    const auto outcomes = run_batch(c, request);
    report_diagnostics(ctx, outcomes, spectra);

    std::vector<msio::PsmRecord> psms;
    if (engine == search::Engine::hybrid) {
        std::vector<msio::PsmRecord> db_best;
        std::size_t chose_db = 0, chose_denovo = 0, chose_none = 0;
        for (const auto& o : outcomes) {
            const auto& d = *o.decision;
            if (d.db_best) db_best.push_back(*d.db_best);
            switch (d.chosen) {
                case search::HybridChoice::db: ++chose_db; break;
                case search::HybridChoice::denovo: ++chose_denovo; break;
                case search::HybridChoice::none: ++chose_none; break;
            }
        }
        std::map<std::string, double> q_by_spectrum;
        for (const auto& r : search::estimate_fdr(std::move(db_best))) q_by_spectrum[r.spectrum_id] = *r.q_value;
        for (const auto& o : outcomes) {
            for (auto r : o.psms) {
                if (r.source == msio::PsmSource::db) r.q_value = q_by_spectrum.at(r.spectrum_id);
                psms.push_back(std::move(r));
            }
        }
        ctx.err << fmt::format("specnova: hybrid chose db={} denovo={} none={}\n", chose_db, chose_denovo, chose_none);
    } else {
        for (const auto& o : outcomes) psms.insert(psms.end(), o.psms.begin(), o.psms.end());
        if (engine == search::Engine::db) {
            psms = search::estimate_fdr(std::move(psms));
            std::size_t accepted = 0;
            for (const auto& r : psms) {
                if (r.rank == 1 && !r.is_decoy && r.q_value && *r.q_value <= c.fdr) ++accepted;
            }
            ctx.err << fmt::format("specnova: {} target PSMs accepted at FDR {}\n", accepted, c.fdr);
        }
    }
    sort_psms(psms);
    emit(ctx, psm_table(psms));
    return kSuccess;
}

int cmd_assemble(Context& ctx) {
    const auto& c = ctx.cfg;
    if (c.psms.empty()) throw InvalidInput("--psms is required for assemble");
    auto in = open_input(c.psms, "psms");
    const auto psms = msio::read_psms(in);

    std::vector<assembly::ScoredPeptide> peptides;
    for (const auto& r : psms) {
        if (r.rank != 1 || r.is_decoy) continue;
        if (r.q_value && *r.q_value > c.fdr) continue;
        peptides.push_back({r.spectrum_id, r.peptide.to_string(), assembly::confidence_from_score(r.score)});
    }
    const auto graph = assembly::build_graph(peptides, c.kmer);
    if (!graph.too_short.empty()) {
        ctx.err << fmt::format("warning\tassemble\t{} peptides shorter than k={} left out\n", graph.too_short.size(),
                               c.kmer);
    }
    const auto contigs = assembly::extract_contigs(graph, c.min_weight);
    std::ostringstream ss;
    assembly::write_contigs_fasta(contigs, ss);
    emit(ctx, ss.str());
    ctx.err << fmt::format("specnova: {} peptides, {} k-mers, {} contigs\n", peptides.size(), graph.edges.size(),
                           contigs.size());
    return kSuccess;
}

int cmd_eval(Context& ctx) {
    const auto& c = ctx.cfg;
    if (c.truth.empty() || c.predicted.empty()) throw InvalidInput("eval needs --truth and --predicted");
    auto tin = open_input(c.truth, "truth");
    auto pin = open_input(c.predicted, "predicted");
    const auto truth = msio::read_psms(tin);
    const auto predicted = msio::read_psms(pin);

    std::map<std::string, chem::Peptide> best;
    for (const auto& r : predicted) {
        if (r.rank == 1 && !best.count(r.spectrum_id)) best.emplace(r.spectrum_id, r.peptide);
    }
    std::map<std::string, chem::Peptide> targets;
    for (const auto& r : truth) targets.emplace(r.spectrum_id, r.peptide);

    std::vector<EvalPair> pairs;
    for (const auto& [id, target] : targets) {
        const auto it = best.find(id);
        pairs.emplace_back(target, it == best.end() ? std::nullopt : std::optional<chem::Peptide>(it->second));
    }
    const auto report = evaluate(pairs, chem::Tolerance::da(c.fragment_tol_da));
    std::ostringstream ss;
    write_eval_tsv(report, ss);
    emit(ctx, ss.str());
    if (!report.valid) ctx.err << "warning\teval\tno target peptides; recalls undefined\n";
    ctx.err << fmt::format("specnova: {} spectra, {} predicted, aa_recall={:.4f}, peptide_recall={:.4f}\n",
                           report.n_spectra, report.n_predicted, report.aa_recall, report.peptide_recall);
    return kSuccess;
}

int cmd_synth(Context& ctx) {
    const auto& c = ctx.cfg;
    if (c.peptides.empty()) throw InvalidInput("--peptides is required for synth");
    auto in = open_input(c.peptides, "peptides");
    std::vector<msio::SpectrumRecord> spectra;
    std::vector<msio::PsmRecord> truth;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::string id = fmt::format("synth_{:06d}", n + 1);
        std::string seq = line;
        if (const auto tab = line.find('\t'); tab != std::string::npos) {
            id = line.substr(0, tab);
            seq = line.substr(tab + 1);
        }
        const auto peptide = chem::Peptide::parse(seq);
        SynthOptions o;
        o.id = id;
        o.charge = c.charge;
        o.noise_peaks = c.noise_peaks;
        o.noise_seed = c.seed + 2 * n;
        o.dropout = c.dropout;
        o.dropout_seed = c.seed + 2 * n + 1;
        spectra.push_back(synth_spectrum(peptide, o));
        msio::PsmRecord t;
        t.spectrum_id = id;
        t.peptide = peptide;
        truth.push_back(std::move(t));
        ++n;
    }
    std::ostringstream ss;
    msio::write_mgf(ss, spectra);
    emit(ctx, ss.str());
    if (!c.truth_out.empty()) {
        std::ofstream t(c.truth_out, std::ios::binary | std::ios::trunc);
        if (!t) throw InvalidInput(fmt::format("--truth-out: cannot write '{}'", c.truth_out));
        msio::write_psms(truth, t);
    }
    ctx.err << fmt::format("specnova: wrote {} synthetic spectra\n", spectra.size());
    return kSuccess;
}

void add_output(CLI::App* sub, RunConfig& c) {
    sub->add_option("--output,-o", c.output, "Output file (default: standard output)");
    sub->add_option("--threads", c.threads, "Worker threads (0 = all available, 1 = fully serial)")
        ->check(CLI::NonNegativeNumber);
}

void add_protein_source(CLI::App* sub, RunConfig& c) {
    auto* fasta = sub->add_option("--fasta", c.fasta, "Protein FASTA file");
    auto* tax = sub->add_option("--taxonomy", c.taxonomy, "UniProt taxonomy id to download")->check(CLI::PositiveNumber);
    fasta->excludes(tax);
    sub->add_flag("--all-entries", c.all_entries, "Include unreviewed (TrEMBL) entries when downloading");
    sub->add_option("--cache-dir", c.cache_dir, "Directory for downloaded proteomes");
    sub->add_option("--uniprot-url", c.uniprot_url, "UniProt stream endpoint");
}

void add_digest_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--enzyme", c.enzyme, "trypsin | trypsin_p | lysc | argc");
    sub->add_option("--missed-cleavages", c.missed_cleavages, "Maximum missed cleavages")->check(CLI::NonNegativeNumber);
    sub->add_option("--min-length", c.min_length, "Minimum peptide length")->check(CLI::PositiveNumber);
    sub->add_option("--max-length", c.max_length, "Maximum peptide length")->check(CLI::PositiveNumber);
}

void add_index_options(CLI::App* sub, RunConfig& c) {
    add_protein_source(sub, c);
    add_digest_options(sub, c);
    sub->add_option("--fixed-mods", c.fixed_mods, "Fixed modifications, e.g. C:cam");
    sub->add_option("--var-mods", c.var_mods, "Variable modifications, e.g. M:ox,NQ:deam");
    sub->add_option("--max-var-mods", c.max_var_mods, "Maximum variable modifications per peptide")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--no-decoys", c.no_decoys, "Do not add pseudo-reversed decoys");
}

void add_scoring_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--mgf", c.mgf, "Input spectra (MGF)")->required();
    sub->add_option("--precursor-ppm", c.precursor_ppm, "Precursor tolerance in ppm")->check(CLI::NonNegativeNumber);
    sub->add_option("--fragment-tol-da", c.fragment_tol_da, "Fragment tolerance in Da")->check(CLI::NonNegativeNumber);
    sub->add_option("--scorer", c.scorer, "Step scorer name");
    sub->add_option("--epsilon", c.epsilon, "Scorer smoothing epsilon");
    sub->add_option("--b-weight", c.b_weight, "Weight of b-ion evidence");
    sub->add_option("--y-weight", c.y_weight, "Weight of y-ion evidence");
    sub->add_option("--fdr", c.fdr, "FDR threshold")->check(CLI::Range(0.0, 1.0));
}

void add_db_source(CLI::App* sub, RunConfig& c) {
    add_index_options(sub, c);
    auto* idx = sub->add_option("--index", c.index_path, "Prebuilt index file");
    idx->excludes(sub->get_option("--fasta"));
    idx->excludes(sub->get_option("--taxonomy"));
    sub->add_option("--top-k", c.top_k, "Ranked database candidates per spectrum")->check(CLI::PositiveNumber);
}

void add_denovo_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--beam", c.beam, "Beam width")->check(CLI::PositiveNumber);
    if (!sub->get_option_no_throw("--max-length")) {
        sub->add_option("--max-length", c.max_length, "Maximum peptide length")->check(CLI::PositiveNumber);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"specnova: peptide identification by database search, de novo sequencing and assembly",
                 "specnova"};
    app.set_config("--config", "", "Configuration file ([subcommand] sections of key = value)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();

    auto* digest_cmd = app.add_subcommand("digest", "Digest proteins into a peptide table");
    add_protein_source(digest_cmd, cfg);
    add_digest_options(digest_cmd, cfg);
    add_output(digest_cmd, cfg);

    auto* index_cmd = app.add_subcommand("index", "Build and save a peptide mass index");
    add_index_options(index_cmd, cfg);
    add_output(index_cmd, cfg);

    auto* db_cmd = app.add_subcommand("dbsearch", "Database search with target-decoy q-values");
    add_scoring_options(db_cmd, cfg);
    add_db_source(db_cmd, cfg);
    add_output(db_cmd, cfg);

    auto* denovo_cmd = app.add_subcommand("denovo", "De novo sequencing by beam search");
    add_scoring_options(denovo_cmd, cfg);
    add_denovo_options(denovo_cmd, cfg);
    add_output(denovo_cmd, cfg);

    auto* hybrid_cmd = app.add_subcommand("hybrid", "Database search arbitrated against de novo");
    add_scoring_options(hybrid_cmd, cfg);
    add_db_source(hybrid_cmd, cfg);
    add_denovo_options(hybrid_cmd, cfg);
    add_output(hybrid_cmd, cfg);

    auto* assemble_cmd = app.add_subcommand("assemble", "Assemble accepted PSMs into contigs (FASTA)");
    assemble_cmd->add_option("--psms", cfg.psms, "PSM table")->required();
    assemble_cmd->add_option("--kmer", cfg.kmer, "k-mer length")->check(CLI::Range(3, 1000));
    assemble_cmd->add_option("--min-weight", cfg.min_weight, "Drop k-mers lighter than this");
    assemble_cmd->add_option("--fdr", cfg.fdr, "q-value cutoff for database PSMs")->check(CLI::Range(0.0, 1.0));
    add_output(assemble_cmd, cfg);

    auto* eval_cmd = app.add_subcommand("eval", "Amino-acid and peptide recall against ground truth");
    eval_cmd->add_option("--truth", cfg.truth, "Ground-truth PSM table")->required();
    eval_cmd->add_option("--predicted", cfg.predicted, "Predicted PSM table")->required();
    eval_cmd->add_option("--fragment-tol-da", cfg.fragment_tol_da, "Prefix-mass tolerance in Da");
    add_output(eval_cmd, cfg);

    auto* synth_cmd = app.add_subcommand("synth", "Synthesize spectra for a list of peptides (MGF)");
    synth_cmd->add_option("--peptides", cfg.peptides, "One peptide per line, optionally 'id<TAB>peptide'")->required();
    synth_cmd->add_option("--charge", cfg.charge, "Precursor charge")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--noise-peaks", cfg.noise_peaks, "Random noise peaks per spectrum")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--dropout", cfg.dropout, "Fraction of true peaks removed")->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--seed", cfg.seed, "Random seed");
    synth_cmd->add_option("--truth-out", cfg.truth_out, "Also write the ground truth as a PSM table");
    add_output(synth_cmd, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "specnova: " << e.what() << "\n\n" << app.help();
        return kInputError;
    }

    Context ctx{cfg, out, err};
    try {
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
        if (*digest_cmd) return cmd_digest(ctx);
        if (*index_cmd) return cmd_index(ctx);
        if (*db_cmd) return cmd_search(ctx, search::Engine::db);
        if (*denovo_cmd) return cmd_search(ctx, search::Engine::denovo);
        if (*hybrid_cmd) return cmd_search(ctx, search::Engine::hybrid);
        if (*assemble_cmd) return cmd_assemble(ctx);
        if (*eval_cmd) return cmd_eval(ctx);
        if (*synth_cmd) return cmd_synth(ctx);
    } catch (const InvalidInput& e) {
        err << "specnova: error: " << e.what() << '\n';
        return kInputError;
    } catch (const ParseError& e) {
        err << "specnova: parse error: " << e.what() << '\n';
        return kInputError;
    } catch (const FormatError& e) {
        err << "specnova: error: " << e.what() << '\n';
        return kInputError;
    } catch (const FetchError& e) {
        err << "specnova: fetch error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "specnova: internal error: " << e.what() << '\n';
        return kInternalError;
    }
    err << app.help();
    return kInputError;
}

}  // namespace specnova::cli
