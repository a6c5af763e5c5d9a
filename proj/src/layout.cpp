#include "lasucc/layout.hpp"

#include <fstream>

#include "lasucc/errors.hpp"

namespace lasucc {

FragmentLayout::FragmentLayout(std::vector<Fragment> fragments, int m)
    : fragments_(std::move(fragments)), m_(m) {
  if (fragments_.empty()) throw LayoutError("layout has no fragments");
  if (m_ < 1 || m_ > n_fragments())
    throw LayoutError("correlator locality m must satisfy 1 <= m <= n_f");
  int max_orb = -1;
  int count = 0;
  for (const auto &f : fragments_) {
    if (f.orbitals.empty()) throw LayoutError("fragment with no orbitals");
    const int nk = static_cast<int>(f.orbitals.size());
    if (f.sector.n_alpha < 0 || f.sector.n_beta < 0 || f.sector.n_alpha > nk ||
        f.sector.n_beta > nk)
      throw LayoutError("fragment electron counts exceed its orbital count");
    for (int p : f.orbitals) {
      if (p < 0) throw LayoutError("negative orbital index in layout");
      max_orb = std::max(max_orb, p);
    }
    count += nk;
  }
  norb_ = max_orb + 1;
  if (count != norb_)
    throw LayoutError("fragments must partition orbitals 0..norb-1");
  owner_.assign(norb_, -1);
  for (int k = 0; k < n_fragments(); ++k)
    for (int p : fragments_[k].orbitals) {
      if (owner_[p] != -1)
        throw LayoutError("orbital " + std::to_string(p) +
                          " appears in more than one fragment");
      owner_[p] = k;
    }
}

SectorSpec FragmentLayout::total_sector() const {
  SectorSpec s;
  for (const auto &f : fragments_) {
    s.n_alpha += f.sector.n_alpha;
    s.n_beta += f.sector.n_beta;
  }
  return s;
}

bool FragmentLayout::is_chain() const {
  int next = 0;
  for (const auto &f : fragments_)
    for (int p : f.orbitals)
      if (p != next++) return false;
  return true;
}

void FragmentLayout::validate_against(int norb, SectorSpec total) const {
  if (norb != norb_)
    throw LayoutError("layout covers " + std::to_string(norb_) +
                      " orbitals but the Hamiltonian has " +
                      std::to_string(norb));
  if (total_sector() != total)
    throw LayoutError("fragment electron counts do not sum to the total");
}

FragmentLayout FragmentLayout::chain(int n_fragments, int orbitals_per_fragment,
                                     SectorSpec per_fragment, int m) {
  std::vector<Fragment> frags;
  int p = 0;
  for (int k = 0; k < n_fragments; ++k) {
    Fragment f;
    for (int i = 0; i < orbitals_per_fragment; ++i) f.orbitals.push_back(p++);
    f.sector = per_fragment;
    frags.push_back(std::move(f));
  }
  return FragmentLayout(std::move(frags), m);
}

FragmentLayout layout_from_json(const nlohmann::json &doc) {
  try {
    std::vector<Fragment> frags;
    for (const auto &f : doc.at("fragments")) {
      Fragment frag;
      frag.orbitals = f.at("orbitals").get<std::vector<int>>();
      frag.sector.n_alpha = f.at("nalpha").get<int>();
      frag.sector.n_beta = f.at("nbeta").get<int>();
      frags.push_back(std::move(frag));
    }
    const int m = doc.value("m", 1);
    return FragmentLayout(std::move(frags), m);
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("invalid layout document: ") + e.what());
  }
}

nlohmann::json layout_to_json(const FragmentLayout &layout) {
  nlohmann::json frags = nlohmann::json::array();
  for (const auto &f : layout.fragments())
    frags.push_back({{"orbitals", f.orbitals},
                     {"nalpha", f.sector.n_alpha},
                     {"nbeta", f.sector.n_beta}});
  return {{"fragments", frags}, {"m", layout.m()}};
}

FragmentLayout read_layout(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError("cannot open layout file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception &e) {
    throw ParseError("layout file is not valid JSON: " + std::string(e.what()));
  }
  return layout_from_json(doc);
}

}  // namespace lasucc
