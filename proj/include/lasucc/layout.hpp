#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lasucc {

/// Particle counts per spin.
struct SectorSpec {
  int n_alpha = 0;
  int n_beta = 0;
  auto operator<=>(const SectorSpec &) const = default;
};

struct Fragment {
  std::vector<int> orbitals;  ///< spatial orbitals, in fragment-local order
  SectorSpec sector;
};

/// Partition of the spatial orbitals into fragments, plus the correlator
/// locality m (fragments per window).
class FragmentLayout {
 public:
  FragmentLayout() = default;
  FragmentLayout(std::vector<Fragment> fragments, int m);

  const std::vector<Fragment> &fragments() const { return fragments_; }
  const Fragment &fragment(int k) const { return fragments_.at(k); }
  int n_fragments() const { return static_cast<int>(fragments_.size()); }
  int m() const { return m_; }
  int norb() const { return norb_; }
  int n_spin_orbitals() const { return 2 * norb_; }
  int fragment_norb(int k) const {
    return static_cast<int>(fragments_.at(k).orbitals.size());
  }
  SectorSpec total_sector() const;
  /// Fragment owning spatial orbital p.
  int fragment_of(int p) const { return owner_.at(p); }

  /// Fragments listed in order, each a contiguous ascending block of spatial
  /// orbitals, following on from the previous fragment.
  bool is_chain() const;

  /// Checks the layout against an integral set's orbital and electron counts.
  void validate_against(int norb, SectorSpec total) const;

  /// `n_f` fragments of `orbitals_per_fragment` orbitals each, ascending.
  static FragmentLayout chain(int n_fragments, int orbitals_per_fragment,
                              SectorSpec per_fragment, int m);

 private:
  std::vector<Fragment> fragments_;
  std::vector<int> owner_;
  int m_ = 1;
  int norb_ = 0;
};

FragmentLayout layout_from_json(const nlohmann::json &doc);
nlohmann::json layout_to_json(const FragmentLayout &layout);
FragmentLayout read_layout(const std::string &path);

}  // namespace lasucc
