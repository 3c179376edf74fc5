#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "msbench/rng.hpp"
#include "msbench/spectra/binning.hpp"
#include "msbench/spectra/entropy.hpp"
#include "msbench/spectra/formats.hpp"
#include "support/test_util.hpp"

namespace {

using namespace msbench::spectra;

Spectrum spectrum_of(std::vector<Peak> peaks) { return Spectrum(std::move(peaks)); }

// Count declared by a "# key: N" header line.
std::size_t header_count(const std::string& name, const std::string& key) {
  std::ifstream in(msbench::testing::data_path(name));
  std::string line;
  const std::string prefix = "# " + key + ": ";
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) return std::stoul(line.substr(prefix.size()));
  }
  throw std::runtime_error("no '" + key + "' header in " + name);
}

TEST(Spectrum, SortsAndMergesEqualMz) {
  const Spectrum s({{200, 1}, {100, 2}, {200, 3}});
  ASSERT_EQ(s.size(), 2U);
  EXPECT_EQ(s.peaks()[0], (Peak{100, 2}));
  EXPECT_EQ(s.peaks()[1], (Peak{200, 4}));
  EXPECT_THROW(Spectrum({{0, 1}}), msbench::DataError);
  EXPECT_THROW(Spectrum({{10, -1}}), msbench::DataError);
  EXPECT_THROW(Spectrum({{10, 1}}, -5.0), msbench::DataError);
}

TEST(Binning, Examples) {
  const auto a = bin_spectrum(spectrum_of({{100.4, 2.0}, {100.6, 3.0}}), 1, 1000);
  ASSERT_EQ(a.size(), 1000U);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.values[i], i == 100 ? 5.0 : 0.0);

  const auto b = bin_spectrum(spectrum_of({{1500.0, 1.0}}), 1, 1000);
  EXPECT_EQ(std::accumulate(b.values.begin(), b.values.end(), 0.0), 0.0);
  EXPECT_EQ(b.dropped_peak_count, 1U);

  const auto c = bin_spectrum(spectrum_of({{0.5, 1}, {1.5, 1}, {9.5, 1}}), 5, 10);
  EXPECT_EQ(c.values, (std::vector<double>{2.0, 1.0}));
}

TEST(Binning, EdgesAndLengths) {
  // A peak exactly on an edge goes to the higher bin; max_mz itself is dropped.
  const auto b = bin_spectrum(spectrum_of({{5.0, 1}, {10.0, 1}}), 5, 10);
  EXPECT_EQ(b.values, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(b.dropped_peak_count, 1U);
  EXPECT_EQ(bin_count(1, 1000), 1000U);
  EXPECT_EQ(bin_count(0.1, 1000), 10000U);
  EXPECT_EQ(bin_count(3, 10), 4U);
  for (double res : {1.0, 2.0, 4.0, 5.0, 10.0}) EXPECT_EQ(bin_count(res, 1000), std::size_t(std::ceil(1000 / res)));
  EXPECT_THROW(bin_count(0, 1000), msbench::UsageError);
  EXPECT_THROW(bin_count(1, -1), msbench::UsageError);
}

Spectrum random_spectrum(msbench::Rng& rng, double max_mz, std::size_t peaks) {
  std::vector<Peak> out;
  for (std::size_t i = 0; i < peaks; ++i) {
    out.push_back({0.01 + rng.uniform01() * max_mz * 1.2, rng.uniform01() * 1000});
  }
  return Spectrum(std::move(out));
}

TEST(Binning, ConservesIntensity) {
  msbench::Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = random_spectrum(rng, 1000, 1 + rng.uniform_index(200));
    const double res = std::vector<double>{0.5, 1, 2, 4, 5, 10}[rng.uniform_index(6)];
    const auto b = bin_spectrum(s, res, 1000);
    const double binned = std::accumulate(b.values.begin(), b.values.end(), 0.0);
    const double total = s.total_intensity();
    ASSERT_NEAR(binned + b.dropped_intensity, total, 1e-12 * std::max(1.0, total));
    std::size_t over = 0;
    for (const auto& p : s.peaks()) over += p.mz >= 1000;
    ASSERT_EQ(b.dropped_peak_count, over);
  }
}

TEST(Binning, CoarseningMatchesDirectBinning) {
  msbench::Rng rng(6);
  int checked = 0;
  while (checked < 300) {
    const auto s = random_spectrum(rng, 1000, 1 + rng.uniform_index(100));
    bool near_edge = false;
    for (const auto& p : s.peaks()) {
      near_edge |= std::abs(p.mz - std::round(p.mz)) < 1e-9;
    }
    if (near_edge) continue;
    const auto fine = bin_spectrum(s, 1, 1000);
    const auto coarse = bin_spectrum(s, 5, 1000);
    ASSERT_EQ(coarse.size() * 5, fine.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      double sum = 0;
      for (std::size_t j = 0; j < 5; ++j) sum += fine.values[i * 5 + j];
      ASSERT_NEAR(coarse.values[i], sum, 1e-9);
    }
    ++checked;
  }
}

TEST(Preprocess, Examples) {
  const auto v = preprocess(std::vector<double>{0, std::exp(1.0) - 1, 0}, Norm::L1);
  EXPECT_NEAR(v[0], 0, 0);
  EXPECT_NEAR(v[1], 1, 1e-15);
  EXPECT_EQ(v[2], 0);

  const std::vector<double> raw = {3, 0, 7, 1};
  const auto l1 = preprocess(raw, Norm::L1);
  const auto l2 = preprocess(raw, Norm::L2);
  double norm = 0;
  for (double x : l2) norm += x * x;
  EXPECT_NEAR(norm, 1.0, 1e-15);
  const double scale = l2[0] / l1[0];
  for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_NEAR(l2[i], l1[i] * scale, 1e-15);

  EXPECT_EQ(preprocess(std::vector<double>(5, 0.0), Norm::L2), std::vector<double>(5, 0.0));
  EXPECT_EQ(preprocess(std::vector<double>(5, 0.0), Norm::L1), std::vector<double>(5, 0.0));
}

TEST(Entropy, Examples) {
  EXPECT_EQ(spectral_entropy(spectrum_of({{100, 5}})), 0.0);
  EXPECT_NEAR(spectral_entropy(spectrum_of({{100, 3}, {200, 3}})), 0.693147, 1e-6);
  EXPECT_NEAR(spectral_entropy(spectrum_of({{1, 1}, {2, 1}, {3, 1}, {4, 1}})), 1.386294, 1e-6);
  EXPECT_EQ(spectral_entropy(spectrum_of({{100, 5}, {150, 0}})), 0.0);
  EXPECT_THROW(spectral_entropy(spectrum_of({{100, 0}})), msbench::DomainError);
  EXPECT_THROW(spectral_entropy(Spectrum()), msbench::DomainError);
}

TEST(Entropy, BoundedByLogPeakCount) {
  msbench::Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto s = random_spectrum(rng, 1000, 1 + rng.uniform_index(50));
    if (!s.has_signal()) continue;
    const double h = spectral_entropy(s);
    ASSERT_GE(h, 0.0);
    ASSERT_LE(h, std::log(static_cast<double>(s.size())) + 1e-12);
  }
}

TEST(Mgf, Records) {
  std::ifstream in(msbench::testing::data_path("spectra/library.mgf"));
  const auto result = parse_mgf(in);
  ASSERT_EQ(result.records.size(), header_count("spectra/library.mgf", "records"));
  EXPECT_EQ(result.skipped, header_count("spectra/library.mgf", "skipped"));

  const auto& caffeine = result.records[0];
  EXPECT_EQ(caffeine.spectrum.record_id(), "caffeine_hcd20");
  EXPECT_EQ(caffeine.spectrum.precursor_mz(), 195.0877);
  EXPECT_EQ(caffeine.spectrum.size(), 3U);
  EXPECT_EQ(caffeine.spectrum.peaks()[0].mz, 110.0713);
  EXPECT_EQ(find_field(caffeine.fields, "SMILES"), "Cn1c(=O)c2c(ncn2C)n(C)c1=O");
  EXPECT_EQ(find_field(caffeine.fields, "COLLISION_ENERGY"), "20");
  EXPECT_EQ(find_field(caffeine.fields, "CHARGE"), "1+");

  EXPECT_EQ(result.records[1].spectrum.size(), 2U);
  const auto& untitled = result.records[2];
  EXPECT_EQ(untitled.spectrum.record_id(), "record4");
  EXPECT_EQ(find_field(untitled.fields, "CHARGE"), "2+");
  ASSERT_EQ(untitled.spectrum.size(), 2U);
  EXPECT_EQ(untitled.spectrum.peaks()[1], (Peak{75.0, 3.0}));
  EXPECT_TRUE(result.records[3].spectrum.empty());

  ASSERT_FALSE(result.diagnostics.empty());
  EXPECT_NE(result.diagnostics[0].message.find("line 24"), std::string::npos);
}

TEST(Mgf, TwoPeakBlockAndEmptyStream) {
  std::istringstream block("BEGIN IONS\nPEPMASS=250.5\n100.0 1.0\n200.0 2.0\nEND IONS\n");
  const auto result = parse_mgf(block);
  ASSERT_EQ(result.records.size(), 1U);
  EXPECT_EQ(result.records[0].spectrum.size(), 2U);
  EXPECT_EQ(result.records[0].spectrum.precursor_mz(), 250.5);

  std::istringstream empty("");
  EXPECT_TRUE(parse_mgf(empty).records.empty());
}

TEST(Mgf, UnterminatedBlockNamesStartLine) {
  std::istringstream in("BEGIN IONS\nTITLE=a\n1 1\nEND IONS\n\nBEGIN IONS\nTITLE=b\n100 1\n");
  try {
    parse_mgf(in);
    FAIL() << "expected ParseError";
  } catch (const msbench::ParseError& e) {
    EXPECT_EQ(e.line(), 6U);
    EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos);
  }
  std::istringstream nested("BEGIN IONS\n1 1\nBEGIN IONS\n1 1\nEND IONS\n");
  EXPECT_THROW(parse_mgf(nested), msbench::ParseError);
}

TEST(Msp, Records) {
  std::ifstream in(msbench::testing::data_path("spectra/library.msp"));
  const auto result = parse_msp(in);
  ASSERT_EQ(result.records.size(), header_count("spectra/library.msp", "records"));
  EXPECT_EQ(result.skipped, header_count("spectra/library.msp", "skipped"));
  EXPECT_EQ(result.records[0].spectrum.record_id(), "Glycine");
  EXPECT_EQ(result.records[0].spectrum.precursor_mz(), 76.0393);
  EXPECT_EQ(find_field(result.records[0].fields, "Precursor_type"), "[M+H]+");
  ASSERT_EQ(result.records[1].spectrum.size(), 4U);
  EXPECT_EQ(result.records[1].spectrum.peaks()[3], (Peak{57.2, 1}));
  EXPECT_EQ(result.records[2].spectrum.precursor_mz(), 101.5);
}

TEST(Msp, TwoPeakRecord) {
  std::istringstream in("Name: x\nNum Peaks: 2\n100 1\n200 2\n");
  const auto result = parse_msp(in);
  ASSERT_EQ(result.records.size(), 1U);
  EXPECT_EQ(result.records[0].spectrum.size(), 2U);
}

TEST(Tsv, Records) {
  std::ifstream in(msbench::testing::data_path("spectra/dataset.tsv"));
  const auto result = parse_tsv(in);
  ASSERT_EQ(result.records.size(), header_count("spectra/dataset.tsv", "records"));
  EXPECT_EQ(result.skipped, header_count("spectra/dataset.tsv", "skipped"));
  const auto& r1 = result.records[0];
  EXPECT_EQ(r1.spectrum.record_id(), "r1");
  EXPECT_EQ(r1.spectrum.size(), 2U);
  EXPECT_EQ(find_field(r1.fields, "smiles"), "CCO");
  EXPECT_EQ(find_field(r1.fields, "nce"), "NA");
  EXPECT_FALSE(result.records[2].spectrum.precursor_mz().has_value());
  bool reported = false;
  for (const auto& d : result.diagnostics) reported |= d.message.find("100.0;1.0") != std::string::npos;
  EXPECT_TRUE(reported);
}

TEST(Tsv, ColumnMapAndPeakList) {
  std::istringstream in("id\tspectrum\nq1\t100.0:1.0 200.0:2.0\n");
  ColumnMap map;
  map.header_for = {{"record_id", "id"}, {"peaks", "spectrum"}};
  const auto result = parse_tsv(in, map);
  ASSERT_EQ(result.records.size(), 1U);
  EXPECT_EQ(result.records[0].spectrum.size(), 2U);

  std::istringstream missing("id\tpeaks\nq1\t1:1\n");
  EXPECT_THROW(parse_tsv(missing), msbench::ParseError);
  ColumnMap bad;
  bad.header_for = {{"colour", "x"}};
  std::istringstream any("record_id\tpeaks\n");
  EXPECT_THROW(parse_tsv(any, bad), msbench::UsageError);

  try {
    parse_peak_list("1:1 100.0;1.0");
    FAIL();
  } catch (const msbench::ParseError& e) {
    EXPECT_EQ(e.column(), 4U);
  }
  const Spectrum s(parse_peak_list("200:2 100.5:1"));
  EXPECT_EQ(format_peak_list(s), "100.5:1 200:2");
}

}  // namespace
