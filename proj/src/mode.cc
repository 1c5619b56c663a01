#include "fockherald/mode.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fockherald {

std::string ModeLabel::str() const {
    std::string out;
    if (polarization.has_value()) {
        out += *polarization == Polarization::H ? "H" : "V";
    }
    out += std::to_string(path);
    return out;
}

ModeSet::ModeSet(std::vector<ModeLabel> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end()) {
        throw std::invalid_argument("duplicate mode label in mode set");
    }
    std::map<int, bool> path_polarized;
    for (const auto &label : labels_) {
        if (label.path < 0) {
            throw std::invalid_argument("mode path must be nonnegative, got " + std::to_string(label.path));
        }
        bool polarized = label.polarization.has_value();
        auto [it, inserted] = path_polarized.emplace(label.path, polarized);
        if (!inserted && it->second != polarized) {
            throw std::invalid_argument(
                "path " + std::to_string(label.path) + " mixes polarized and unpolarized modes");
        }
    }
}

std::optional<std::size_t> ModeSet::find(const ModeLabel &label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t ModeSet::index_of(const ModeLabel &label) const {
    auto idx = find(label);
    if (!idx) {
        throw std::invalid_argument("mode " + label.str() + " is not in mode set " + str());
    }
    return *idx;
}

std::string ModeSet::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (i) out += ",";
        out += labels_[i].str();
    }
    out += "}";
    return out;
}

}  // namespace fockherald
