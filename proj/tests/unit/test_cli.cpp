#include <gtest/gtest.h>

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracle.hpp"
#include "specnova/driver.hpp"
#include "specnova/msio.hpp"

using namespace specnova;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int saved = omp_get_max_threads();
    const int code = cli::run(args, out, err);
    omp_set_num_threads(saved);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("specnova_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    // Ten tryptic peptides concatenated into two proteins, plus their spectra.
    std::vector<std::string> write_workload() {
        oracle::Rng rng(101);
        std::vector<std::string> peps;
        std::string fasta, list;
        for (int p = 0; p < 2; ++p) {
            std::string seq;
            for (int i = 0; i < 5; ++i) {
                auto s = rng.tryptic(7, 14);
                for (auto& ch : s) {
                    if (ch == 'C' || ch == 'M' || ch == 'N' || ch == 'Q') ch = 'A';
                }
                seq += s;
                peps.push_back(s);
                list += s + "\n";
            }
            fasta += ">sp|P" + std::to_string(p) + "|TEST\n" + seq + "\n";
        }
        spit(path("db.fasta"), fasta);
        spit(path("peptides.txt"), list);
        const auto r = run({"synth", "--peptides", path("peptides.txt"), "--output", path("spectra.mgf"),
                            "--truth-out", path("truth.tsv")});
        EXPECT_EQ(r.code, 0) << r.err;
        return peps;
    }

private:
    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SynthThenDbsearchIdentifiesEveryPeptide) {
    const auto peps = write_workload();
    const auto r = run({"dbsearch", "--mgf", path("spectra.mgf"), "--fasta", path("db.fasta"), "--var-mods", "",
                        "--output", path("psms.tsv")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(path("psms.tsv"));
    const auto psms = msio::read_psms(in);
    std::map<std::string, std::string> top;
    for (const auto& p : psms) {
        if (p.rank == 1 && !p.is_decoy) top[p.spectrum_id] = p.peptide.to_string();
    }
    ASSERT_EQ(top.size(), 10u);
    std::size_t i = 0;
    for (const auto& [id, seq] : top) EXPECT_EQ(seq, peps[i++]) << id;
}

TEST_F(CliTest, EvalOnIdenticalFilesIsPerfect) {
    write_workload();
    const auto r = run({"eval", "--truth", path("truth.tsv"), "--predicted", path("truth.tsv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("all\t*\t10\t10"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("1.000000\t1.000000"), std::string::npos) << r.out;
}

TEST_F(CliTest, UnknownSubcommandPrintsUsage) {
    const auto r = run({"frobnicate"});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find("dbsearch"), std::string::npos);
}

TEST_F(CliTest, NoSubcommandFails) {
    EXPECT_EQ(run({}).code, cli::kInputError);
}

TEST_F(CliTest, HelpSucceeds) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, cli::kSuccess);
    EXPECT_NE(r.out.find("hybrid"), std::string::npos);
}

TEST_F(CliTest, MissingInputFileIsFatal) {
    const auto r = run({"denovo", "--mgf", path("absent.mgf")});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find("absent.mgf"), std::string::npos);
}

TEST_F(CliTest, MissingRequiredOptionNamesIt) {
    const auto r = run({"denovo"});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find("--mgf"), std::string::npos);
}

TEST_F(CliTest, FastaAndTaxonomyContradict) {
    write_workload();
    const auto r = run({"dbsearch", "--mgf", path("spectra.mgf"), "--fasta", path("db.fasta"), "--taxonomy", "9606"});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find("--taxonomy"), std::string::npos);
}

TEST_F(CliTest, DbsearchWithoutProteinSourceFails) {
    write_workload();
    const auto r = run({"dbsearch", "--mgf", path("spectra.mgf")});
    EXPECT_EQ(r.code, cli::kInputError);
}

TEST_F(CliTest, ConfigFileSuppliesOptions) {
    write_workload();
    spit(path("run.ini"), "[dbsearch]\nfasta = \"" + path("db.fasta") + "\"\nvar-mods = \"\"\nprecursor-ppm = 10\n");
    const auto a = run({"dbsearch", "--config", path("run.ini"), "--mgf", path("spectra.mgf")});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto b = run({"dbsearch", "--mgf", path("spectra.mgf"), "--fasta", path("db.fasta"), "--var-mods", "",
                        "--precursor-ppm", "10"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, UnknownConfigKeyIsFatalAndNamed) {
    write_workload();
    spit(path("bad.ini"), "[dbsearch]\nbeem = 4\n");
    const auto r = run({"dbsearch", "--config", path("bad.ini"), "--mgf", path("spectra.mgf"), "--fasta",
                        path("db.fasta")});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find("beem"), std::string::npos);
}

TEST_F(CliTest, SavedIndexGivesSameResults) {
    write_workload();
    ASSERT_EQ(run({"index", "--fasta", path("db.fasta"), "--output", path("db.idx")}).code, 0);
    const auto a = run({"dbsearch", "--mgf", path("spectra.mgf"), "--index", path("db.idx")});
    const auto b = run({"dbsearch", "--mgf", path("spectra.mgf"), "--fasta", path("db.fasta")});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run({"dbsearch", "--mgf", path("spectra.mgf"), "--index", path("db.idx"), "--fasta", path("db.fasta")})
                  .code,
              cli::kInputError);
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutput) {
    write_workload();
    for (const std::string cmd : {"dbsearch", "hybrid"}) {
        const auto one = run({cmd, "--mgf", path("spectra.mgf"), "--fasta", path("db.fasta"), "--threads", "1"});
        const auto four = run({cmd, "--mgf", path("spectra.mgf"), "--fasta", path("db.fasta"), "--threads", "4"});
        ASSERT_EQ(one.code, 0) << one.err;
        EXPECT_EQ(one.out, four.out) << cmd;
    }
}

TEST_F(CliTest, SynthIsSeedDeterministic) {
    spit(path("p.txt"), "x1\tPEPTIDEK\nLHAVTLNNVAEANFFK\n");
    auto synth = [&](const std::string& seed, const std::string& out) {
        return run({"synth", "--peptides", path("p.txt"), "--noise-peaks", "20", "--dropout", "0.2", "--seed", seed,
                    "--output", path(out)})
            .code;
    };
    ASSERT_EQ(synth("7", "a.mgf"), 0);
    ASSERT_EQ(synth("7", "b.mgf"), 0);
    ASSERT_EQ(synth("8", "c.mgf"), 0);
    EXPECT_EQ(slurp(path("a.mgf")), slurp(path("b.mgf")));
    EXPECT_NE(slurp(path("a.mgf")), slurp(path("c.mgf")));
    EXPECT_NE(slurp(path("a.mgf")).find("TITLE=x1"), std::string::npos);
    EXPECT_NE(slurp(path("a.mgf")).find("TITLE=synth_000002"), std::string::npos);
}

TEST_F(CliTest, SynthRejectsInvalidPeptide) {
    spit(path("p.txt"), "PEPTIDEK\nPEP1TIDE\n");
    const auto r = run({"synth", "--peptides", path("p.txt")});
    EXPECT_EQ(r.code, cli::kInputError);
}

TEST_F(CliTest, DigestWritesTable) {
    spit(path("d.fasta"), ">sp|P1|X\nMKRPEPTIDEKAR\n");
    const auto r = run({"digest", "--fasta", path("d.fasta"), "--missed-cleavages", "0", "--min-length", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("PEPTIDEK"), std::string::npos);
    EXPECT_NE(r.out.find("\tMK\t"), std::string::npos) << r.out;
}

TEST_F(CliTest, DenovoThenAssemble) {
    spit(path("p.txt"), "LHAVTLNNVAEANFFK\nTLNNVAEANFFKGAPR\n");
    ASSERT_EQ(run({"synth", "--peptides", path("p.txt"), "--output", path("s.mgf")}).code, 0);
    const auto dn = run({"denovo", "--mgf", path("s.mgf"), "--fragment-tol-da", "0.02", "--output", path("dn.tsv")});
    ASSERT_EQ(dn.code, 0) << dn.err;
    const auto as = run({"assemble", "--psms", path("dn.tsv"), "--kmer", "6"});
    ASSERT_EQ(as.code, 0) << as.err;
    EXPECT_EQ(as.out.rfind(">contig_1", 0), 0u) << as.out;
}
