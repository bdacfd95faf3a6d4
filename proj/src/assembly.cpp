#include "specnova/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "specnova/errors.hpp"
#include "specnova/msio.hpp"

namespace specnova::assembly {

std::string canonicalize(std::string_view peptide) {
    std::string out;
    out.reserve(peptide.size());
    bool in_mod = false;
    for (char c : peptide) {
        if (c == '(') {
            in_mod = true;
        } else if (c == ')') {
            in_mod = false;
        } else if (!in_mod) {
            const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            out += u == 'I' ? 'L' : u;
        }
    }
    return out;
}

double confidence_from_score(double score) {
    const double c = std::exp(score);
    if (!(c > 0.0)) return std::numeric_limits<double>::min();
    return std::min(c, 1.0);
}

double DBGraph::total_weight() const {
    double w = 0.0;
    for (const auto& [kmer, e] : edges) w += e.weight;
    return w;
}

DBGraph build_graph(std::span<const ScoredPeptide> peptides, int k) {
    if (k < 3) throw InvalidInput("k-mer length must be >= 3");
    DBGraph g;
    g.k = k;
    const auto ku = static_cast<std::size_t>(k);
    std::set<std::string> nodes;
    for (std::size_t i = 0; i < peptides.size(); ++i) {
        const auto& p = peptides[i];
        if (!(p.confidence > 0.0)) throw InvalidInput("peptide confidence must be > 0 (" + p.id + ")");
        g.peptide_ids.push_back(p.id);
        const auto seq = canonicalize(p.sequence);
        if (seq.size() < ku) {
            g.too_short.push_back(i);
            continue;
        }
        for (std::size_t j = 0; j + ku <= seq.size(); ++j) {
            auto& e = g.edges[seq.substr(j, ku)];
            e.weight += p.confidence;
            e.support += 1;
            if (e.peptides.empty() || e.peptides.back() != i) e.peptides.push_back(i);
            nodes.insert(seq.substr(j, ku - 1));
            nodes.insert(seq.substr(j + 1, ku - 1));
        }
    }
    g.nodes.assign(nodes.begin(), nodes.end());
    return g;
}

std::vector<Contig> extract_contigs(const DBGraph& graph, double min_weight) {
    const auto km1 = static_cast<std::size_t>(graph.k - 1);

    std::map<std::string, std::vector<const std::string*>> out_edges;  // sorted by node, then edge
    std::unordered_map<std::string, std::size_t> in_degree;
    std::set<std::string> nodes;
    for (const auto& [kmer, e] : graph.edges) {
        if (e.weight < min_weight) continue;
        out_edges[kmer.substr(0, km1)].push_back(&kmer);
        in_degree[kmer.substr(1)]++;
        nodes.insert(kmer.substr(0, km1));
        nodes.insert(kmer.substr(1));
    }
    auto out_degree = [&](const std::string& v) -> std::size_t {
        const auto it = out_edges.find(v);
        return it == out_edges.end() ? 0 : it->second.size();
    };
    auto in_deg = [&](const std::string& v) -> std::size_t {
        const auto it = in_degree.find(v);
        return it == in_degree.end() ? 0 : it->second;
    };
    auto one_in_one_out = [&](const std::string& v) { return in_deg(v) == 1 && out_degree(v) == 1; };

    std::set<std::string> used;
    std::vector<Contig> contigs;

    auto emit = [&](const std::vector<const std::string*>& path, bool cycle) {
        Contig c;
        c.is_cycle = cycle;
        c.sequence = path.front()->substr(0, km1);
        double sum = 0.0;
        std::set<std::size_t> ids;
        for (const auto* kmer : path) {
            c.sequence += kmer->back();
            const auto& e = graph.edges.at(*kmer);
            sum += e.weight;
            ids.insert(e.peptides.begin(), e.peptides.end());
            used.insert(*kmer);
        }
        c.mean_weight = sum / static_cast<double>(path.size());
        for (auto id : ids) c.support.push_back(graph.peptide_ids[id]);
        contigs.push_back(std::move(c));
    };

    for (const auto& v : nodes) {
        if (one_in_one_out(v)) continue;
        const auto it = out_edges.find(v);
        if (it == out_edges.end()) continue;
        for (const auto* first : it->second) {
            std::vector<const std::string*> path{first};
            std::string w = first->substr(1);
            while (one_in_one_out(w)) {
                const auto* next = out_edges.at(w).front();
                path.push_back(next);
                w = next->substr(1);
            }
            emit(path, false);
        }
    }

    // Whatever is left forms isolated cycles of 1-in-1-out nodes.
    for (const auto& [node, edges] : out_edges) {
        const auto* start = edges.front();
        if (used.count(*start)) continue;
        std::vector<const std::string*> cycle{start};
        for (std::string w = start->substr(1); w != node; w = cycle.back()->substr(1)) {
            cycle.push_back(out_edges.at(w).front());
        }
        // `node` is the smallest unvisited node, hence the smallest of its cycle.
        emit(cycle, true);
    }

    std::sort(contigs.begin(), contigs.end(), [](const Contig& a, const Contig& b) {
        if (a.sequence != b.sequence) return a.sequence < b.sequence;
        return a.is_cycle < b.is_cycle;
    });
    return contigs;
}

void write_contigs_fasta(std::span<const Contig> contigs, std::ostream& out) {
    for (std::size_t i = 0; i < contigs.size(); ++i) {
        const auto& c = contigs[i];
        out << fmt::format(">contig_{} len={} mean_weight={} support={}{}\n", i + 1, c.sequence.size(),
                           msio::format_fixed6(c.mean_weight), c.support.size(), c.is_cycle ? " cycle" : "");
        out << c.sequence << '\n';
    }
    if (!out) throw std::ios_base::failure("failed writing contigs");
}

}  // namespace specnova::assembly
