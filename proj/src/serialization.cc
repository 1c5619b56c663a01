#include "fockherald/serialization.h"

#include <stdexcept>
#include <string>

namespace fockherald {

using nlohmann::json;

json state_to_json(const PureState &state) {
    json modes = json::array();
    for (const auto &label : state.modes().labels()) {
        json pol = nullptr;
        if (label.polarization) {
            pol = *label.polarization == Polarization::H ? "H" : "V";
        }
        modes.push_back({{"path", label.path}, {"pol", pol}});
    }
    json terms = json::array();
    for (const auto &[occupation, amplitude] : state.terms()) {
        terms.push_back({{"occ", occupation}, {"re", amplitude.real()}, {"im", amplitude.imag()}});
    }
    return json{
        {"modes", std::move(modes)},
        {"cutoff", state.cutoff()},
        {"leaked_norm", state.leaked_norm()},
        {"terms", std::move(terms)},
    };
}

PureState state_from_json(const json &j) {
    try {
        std::vector<ModeLabel> labels;
        for (const auto &m : j.at("modes")) {
            ModeLabel label{m.at("path").get<int>(), std::nullopt};
            const auto &pol = m.at("pol");
            if (!pol.is_null()) {
                auto p = pol.get<std::string>();
                if (p == "H") {
                    label.polarization = Polarization::H;
                } else if (p == "V") {
                    label.polarization = Polarization::V;
                } else {
                    throw std::invalid_argument("unknown polarization '" + p + "'");
                }
            }
            labels.push_back(label);
        }
        ModeSet modes(labels);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (modes[i] != labels[i]) {
                throw std::invalid_argument("modes are not in canonical order");
            }
        }
        PureState::TermMap terms;
        for (const auto &t : j.at("terms")) {
            auto occupation = t.at("occ").get<OccupationVector>();
            Amplitude amplitude{t.at("re").get<double>(), t.at("im").get<double>()};
            if (!terms.emplace(std::move(occupation), amplitude).second) {
                throw std::invalid_argument("duplicate occupation vector in terms");
            }
        }
        return PureState::from_terms(
            std::move(modes), j.at("cutoff").get<int>(), std::move(terms), j.at("leaked_norm").get<double>());
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("malformed state JSON: ") + e.what());
    }
}

json result_to_json(const ProtocolResult &result) {
    json claimed = nullptr;
    if (result.claimed_probability) {
        claimed = *result.claimed_probability;
    }
    return json{
        {"protocol", std::string(protocol_name(result.protocol))},
        {"gamma1", result.params.gamma1},
        {"gamma2", result.params.gamma2},
        {"success_probability", result.success_probability},
        {"paper_claimed_probability", claimed},
        {"fidelity", result.fidelity},
        {"leaked_norm", result.leaked_norm},
        {"output_state", state_to_json(result.output_state)},
    };
}

}  // namespace fockherald
