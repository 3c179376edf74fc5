#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "msbench/fingerprint/morgan.hpp"
#include "msbench/fingerprint/scaffold.hpp"
#include "msbench/mol/smiles_parser.hpp"
#include "support/test_util.hpp"

namespace {

using msbench::fp::FingerprintBits;
using msbench::fp::morgan_fingerprint;
using msbench::fp::murcko_scaffold;
using msbench::fp::tanimoto;
using msbench::mol::canonical_form;
using msbench::mol::parse_smiles;

FingerprintBits bits_of(std::size_t length, std::initializer_list<std::size_t> on) {
  FingerprintBits fp(length);
  for (auto b : on) fp.set(b);
  return fp;
}

TEST(FingerprintBits, RejectsNonPowerOfTwo) {
  EXPECT_THROW(FingerprintBits(0), msbench::UsageError);
  EXPECT_THROW(FingerprintBits(1000), msbench::UsageError);
  EXPECT_NO_THROW(FingerprintBits(1));
  EXPECT_NO_THROW(FingerprintBits(4096));
}

TEST(FingerprintBits, PopcountAndHex) {
  auto fp = bits_of(16, {0, 3, 15});
  EXPECT_EQ(fp.popcount(), 3U);
  fp.set(3);
  EXPECT_EQ(fp.popcount(), 3U);
  EXPECT_EQ(fp.to_hex(), "8009");
  EXPECT_EQ(FingerprintBits::from_hex("8009"), fp);
  EXPECT_THROW(FingerprintBits::from_hex("80g9"), msbench::DataError);
}

TEST(Tanimoto, Examples) {
  const auto f = bits_of(64, {1, 2, 3});
  EXPECT_DOUBLE_EQ(tanimoto(f, f), 1.0);
  EXPECT_DOUBLE_EQ(tanimoto(bits_of(64, {1, 2}), bits_of(64, {3, 4})), 0.0);
  // a = 4, b = 6, c = 2 -> 2 / 8
  EXPECT_DOUBLE_EQ(tanimoto(bits_of(64, {0, 1, 2, 3}), bits_of(64, {2, 3, 10, 11, 12, 13})), 0.25);
  EXPECT_DOUBLE_EQ(tanimoto(FingerprintBits(64), FingerprintBits(64)), 0.0);
  EXPECT_THROW(tanimoto(FingerprintBits(64), FingerprintBits(128)), msbench::UsageError);
}

TEST(Tanimoto, RandomPairProperties) {
  msbench::Rng rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t length = std::size_t{1} << (3 + rng.uniform_index(8));
    FingerprintBits a(length), b(length);
    const double density = rng.uniform01();
    for (std::size_t i = 0; i < length; ++i) {
      if (rng.uniform01() < density) a.set(i);
      if (rng.uniform01() < density) b.set(i);
    }
    const double t = tanimoto(a, b);
    ASSERT_GE(t, 0.0);
    ASSERT_LE(t, 1.0);
    ASSERT_EQ(t, tanimoto(b, a));
    if (!a.empty()) ASSERT_EQ(tanimoto(a, a), 1.0);
    // Recount by brute force.
    std::size_t na = 0, nb = 0, nc = 0;
    for (std::size_t i = 0; i < length; ++i) {
      na += a.test(i);
      nb += b.test(i);
      nc += a.test(i) && b.test(i);
    }
    ASSERT_EQ(a.popcount(), na);
    const double expected = na + nb - nc == 0 ? 0.0 : double(nc) / double(na + nb - nc);
    ASSERT_EQ(t, expected);
  }
}

TEST(Morgan, EthanolRadiusZeroHasThreeEnvironments) {
  const auto m = parse_smiles("CCO");
  // (element, degree, H, charge, in_ring, aromatic) per heavy atom.
  std::set<std::tuple<int, int, int, int, bool, bool>> tuples;
  for (int a = 0; a < m.atom_count(); ++a) {
    const auto& atom = m.atom(a);
    tuples.emplace(atom.element, m.degree(a), m.hydrogen_count(a), atom.formal_charge, atom.in_ring,
                   atom.aromatic);
  }
  ASSERT_EQ(tuples.size(), 3U);
  EXPECT_EQ(morgan_fingerprint(m, 0).popcount(), tuples.size());
}

TEST(Morgan, MethaneHasOneBitAtAnyRadius) {
  for (int r = 0; r <= 4; ++r) {
    EXPECT_EQ(morgan_fingerprint(parse_smiles("C"), r).popcount(), 1U);
  }
}

TEST(Morgan, SymmetricAtomsShareIdentifiers) {
  // Benzene: one environment per round.
  EXPECT_EQ(msbench::fp::morgan_identifiers(parse_smiles("c1ccccc1"), 3).size(), 4U);
  // Propane: ends and centre differ at r=0.
  EXPECT_EQ(msbench::fp::morgan_identifiers(parse_smiles("CCC"), 0).size(), 2U);
}

TEST(Morgan, IdentifierSetsGrowWithRadius) {
  for (const auto& line : msbench::testing::read_lines("random_order_smiles.tsv")) {
    const auto m = parse_smiles(msbench::testing::split_tabs(line)[1]);
    auto previous = msbench::fp::morgan_identifiers(m, 0);
    for (int r = 1; r <= 3; ++r) {
      const auto current = msbench::fp::morgan_identifiers(m, r);
      ASSERT_TRUE(std::includes(current.begin(), current.end(), previous.begin(), previous.end()));
      ASSERT_LE(morgan_fingerprint(m, r - 1).popcount(), morgan_fingerprint(m, r).popcount());
      previous = current;
    }
  }
}

TEST(Morgan, UsesLargestFragment) {
  EXPECT_EQ(morgan_fingerprint(parse_smiles("CCN.Cl")), morgan_fingerprint(parse_smiles("NCC")));
  EXPECT_EQ(morgan_fingerprint(parse_smiles("[Na+].OC(=O)c1ccccc1")),
            morgan_fingerprint(parse_smiles("c1ccccc1C(=O)O")));
}

TEST(Morgan, GoldenDrugFingerprints) {
  const auto rows = msbench::testing::read_lines("golden_fingerprints.tsv");
  ASSERT_EQ(rows.size(), 10U);
  for (const auto& row : rows) {
    const auto fields = msbench::testing::split_tabs(row);
    SCOPED_TRACE(fields[0]);
    ASSERT_EQ(fields.size(), 3U);
    EXPECT_EQ(morgan_fingerprint(parse_smiles(fields[1]), 2, 2048).to_hex(), fields[2]);
  }
}

TEST(Murcko, Examples) {
  const auto acyclic = murcko_scaffold(parse_smiles("CCCC"));
  EXPECT_TRUE(acyclic.is_acyclic);
  EXPECT_TRUE(acyclic.key.empty());

  const std::string benzene = canonical_form(parse_smiles("c1ccccc1"));
  EXPECT_EQ(murcko_scaffold(parse_smiles("CCc1ccccc1")).key, benzene);
  EXPECT_EQ(murcko_scaffold(parse_smiles("c1ccccc1")).key, benzene);
  EXPECT_FALSE(murcko_scaffold(parse_smiles("c1ccccc1")).is_acyclic);

  // Linkers stay, side chains go, exocyclic double bonds stay.
  EXPECT_EQ(murcko_scaffold(parse_smiles("Cc1ccc(CCc2ccccc2)cc1")).key,
            canonical_form(parse_smiles("c1ccc(CCc2ccccc2)cc1")));
  EXPECT_EQ(murcko_scaffold(parse_smiles("CCC1CCC(=O)CC1")).key, canonical_form(parse_smiles("O=C1CCCCC1")));
  EXPECT_EQ(murcko_scaffold(parse_smiles("CC(=O)C1CCCC1")).key, canonical_form(parse_smiles("C1CCCC1")));
}

TEST(Murcko, MatchesReferenceFrameworks) {
  int compared = 0;
  for (const auto& row : msbench::testing::read_lines("murcko_reference.tsv")) {
    const auto fields = msbench::testing::split_tabs(row);
    SCOPED_TRACE(fields[0]);
    const auto key = murcko_scaffold(parse_smiles(fields[0]));
    if (fields[1].empty()) {
      EXPECT_TRUE(key.is_acyclic);
      EXPECT_TRUE(key.key.empty());
    } else {
      EXPECT_FALSE(key.is_acyclic);
      EXPECT_EQ(key.key, canonical_form(parse_smiles(fields[1])));
    }
    ++compared;
  }
  EXPECT_EQ(compared, 150);
}

TEST(Murcko, Idempotent) {
  for (const auto& row : msbench::testing::read_lines("murcko_reference.tsv")) {
    const auto key = murcko_scaffold(parse_smiles(msbench::testing::split_tabs(row)[0]));
    if (key.is_acyclic) continue;
    EXPECT_EQ(murcko_scaffold(parse_smiles(key.key)), key);
  }
}

TEST(Invariance, FingerprintAndScaffoldIgnoreAtomOrder) {
  msbench::Rng rng(3);
  for (const auto& line : msbench::testing::read_lines("random_order_smiles.tsv")) {
    const auto fields = msbench::testing::split_tabs(line);
    const auto first = parse_smiles(fields[1]);
    const auto fp = morgan_fingerprint(first);
    const auto scaffold = murcko_scaffold(first);
    for (std::size_t i = 2; i < fields.size(); ++i) {
      SCOPED_TRACE(fields[1] + " vs " + fields[i]);
      const auto other = parse_smiles(fields[i]);
      ASSERT_EQ(morgan_fingerprint(other), fp);
      ASSERT_EQ(murcko_scaffold(other), scaffold);
    }
    ASSERT_EQ(morgan_fingerprint(msbench::testing::permute_atoms(first, rng)), fp);
  }
}

}  // namespace
