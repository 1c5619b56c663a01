#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fockherald {

enum class Polarization : std::uint8_t { H, V };

/// A bosonic mode: a spatial path, optionally split into H and V polarizations.
///
/// Ordering is canonical: by path, then unpolarized < H < V.
struct ModeLabel {
    int path = 0;
    std::optional<Polarization> polarization;

    friend auto operator<=>(const ModeLabel &, const ModeLabel &) = default;
    friend bool operator==(const ModeLabel &, const ModeLabel &) = default;

    /// "3" for an unpolarized path, "H2" / "V2" for polarized modes.
    std::string str() const;
};

inline ModeLabel path_mode(int path) { return ModeLabel{path, std::nullopt}; }
inline ModeLabel h_mode(int path) { return ModeLabel{path, Polarization::H}; }
inline ModeLabel v_mode(int path) { return ModeLabel{path, Polarization::V}; }

/// Canonically ordered set of mode labels.
///
/// Invariants: labels are unique, paths are nonnegative, and on each path
/// either every mode carries a polarization or none does.
class ModeSet {
   public:
    ModeSet() = default;
    explicit ModeSet(std::vector<ModeLabel> labels);

    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    std::span<const ModeLabel> labels() const { return labels_; }
    const ModeLabel &operator[](std::size_t i) const { return labels_[i]; }

    std::optional<std::size_t> find(const ModeLabel &label) const;
    bool contains(const ModeLabel &label) const { return find(label).has_value(); }
    /// Throws std::invalid_argument when the label is absent.
    std::size_t index_of(const ModeLabel &label) const;

    std::string str() const;

    friend bool operator==(const ModeSet &, const ModeSet &) = default;

   private:
    std::vector<ModeLabel> labels_;
};

}  // namespace fockherald
