// Parse a few SMILES, print canonical keys, scaffolds and pairwise Tanimoto.

#include <cstdio>
#include <string>
#include <vector>

#include "msbench/fingerprint/morgan.hpp"
#include "msbench/fingerprint/scaffold.hpp"
#include "msbench/mol/canonical.hpp"
#include "msbench/mol/smiles_parser.hpp"

int main(int argc, char** argv) {
  using namespace msbench;
  std::vector<std::string> smiles = {"CC(=O)Oc1ccccc1C(=O)O", "OC(=O)c1ccccc1OC(C)=O",
                                     "Cn1cnc2c1c(=O)n(C)c(=O)n2C", "CC(C)Cc1ccc(cc1)C(C)C(=O)O"};
  if (argc > 1) smiles.assign(argv + 1, argv + argc);

  std::vector<fp::FingerprintBits> fps;
  for (const auto& s : smiles) {
    const auto m = mol::parse_smiles(s);
    const auto scaffold = fp::murcko_scaffold(m);
    std::printf("%-30s key=%s scaffold=%s\n", s.c_str(), mol::canonical_form(m).c_str(),
                scaffold.is_acyclic ? "(acyclic)" : scaffold.key.c_str());
    fps.push_back(fp::morgan_fingerprint(m));
  }
  std::printf("\nTanimoto (Morgan r=2, 2048 bits)\n");
  for (std::size_t i = 0; i < fps.size(); ++i) {
    for (std::size_t j = 0; j < fps.size(); ++j) std::printf(" %.3f", fp::tanimoto(fps[i], fps[j]));
    std::printf("\n");
  }
}
