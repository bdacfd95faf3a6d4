#pragma once

// Confidence-weighted de Bruijn assembly of identified peptides into
// contigs. Nodes are (k-1)-mers, edges are k-mers; contigs are the maximal
// non-branching paths of the graph after weight filtering.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace specnova::assembly {

/// I -> L, modification suffixes stripped: "M(ox)PEPTIDE" -> "MPEPTLDE".
std::string canonicalize(std::string_view peptide);

/// exp(score) clamped to (0, 1].
double confidence_from_score(double score);

struct ScoredPeptide {
    std::string id;
    std::string sequence;
    double confidence = 1.0;
};

struct EdgeInfo {
    double weight = 0.0;
    std::size_t support = 0;
    /// Indices into the peptide list the graph was built from, ascending.
    std::vector<std::size_t> peptides;
};

struct DBGraph {
    int k = 6;
    std::map<std::string, EdgeInfo> edges;  // k-mer -> weight
    std::vector<std::string> nodes;         // sorted (k-1)-mers
    std::vector<std::string> peptide_ids;   // same order as the input
    /// Indices of peptides shorter than k, left out of the graph.
    std::vector<std::size_t> too_short;

    double total_weight() const;
};

/// Throws InvalidInput for k < 3 or a non-positive confidence.
DBGraph build_graph(std::span<const ScoredPeptide> peptides, int k = 6);

struct Contig {
    std::string sequence;
    std::vector<std::string> support;  // contributing peptide ids, input order
    double mean_weight = 0.0;
    bool is_cycle = false;
};

/// Edges below min_weight are dropped first. Output sorted by sequence.
/// A cycle with no branching node is cut at its lexicographically smallest node.
std::vector<Contig> extract_contigs(const DBGraph& graph, double min_weight = 0.0);

/// ">contig_<n> len=<L> mean_weight=<w> support=<m>" records.
void write_contigs_fasta(std::span<const Contig> contigs, std::ostream& out);

}  // namespace specnova::assembly
