#ifndef TETRA_SERIALIZE_HPP
#define TETRA_SERIALIZE_HPP

#include <json.hpp>

#include <tetra/ecalle_eval.hpp>
#include <tetra/format.hpp>
#include <tetra/series_engine.hpp>

namespace tetra
{

inline nlohmann::json to_json(const PowerSeries &s)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto &c : s.coefficients()) {
        a.push_back(to_fraction_string(c));
    }
    return a;
}

inline nlohmann::json to_json(const Polynomial &p)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto &c : p.coefficients()) {
        a.push_back(to_fraction_string(c));
    }
    return a;
}

inline nlohmann::json to_json(const AbelExpansion &a)
{
    return {
        {"pole_coefficient", to_fraction_string(a.pole_coefficient)},
        {"log_coefficient", to_fraction_string(a.log_coefficient)},
        {"constant", to_fraction_string(a.constant)},
        {"tail", to_json(a.tail)},
        {"truncation_order", a.truncation_order},
    };
}

// P_1..P_M, each as ascending coefficients of t.
inline nlohmann::json to_json(const SuperExpExpansion &s)
{
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t m = 1; m <= s.order; ++m) {
        a.push_back(to_json(s[m]));
    }
    return a;
}

inline PowerSeries power_series_from_json(const nlohmann::json &a)
{
    std::vector<Rational> c;
    for (const auto &s : a) {
        c.push_back(parse_rational(s.get<std::string>()));
    }
    return PowerSeries(std::move(c));
}

inline nlohmann::json to_json(const CalibrationConstants &cc)
{
    return {
        {"precision_bits", cc.bits},
        {"x1", format_mp(cc.x1)},
        {"x3", format_mp(cc.x3)},
        {"a1_norm", format_mp(cc.a1_norm)},
        {"a3_norm", format_mp(cc.a3_norm)},
        {"period_t1_im", format_mp(cc.period_t1.im)},
    };
}

inline CalibrationConstants constants_from_json(const nlohmann::json &j)
{
    CalibrationConstants cc;
    cc.bits = j.at("precision_bits").get<long>();
    const long bits = std::max(cc.bits, 53L);
    auto rd = [&](const char *key) { return MpReal::from_string(j.at(key).get<std::string>(), bits); };
    cc.x1 = rd("x1");
    cc.x3 = rd("x3");
    cc.a1_norm = rd("a1_norm");
    cc.a3_norm = rd("a3_norm");
    cc.period_t1 = ComplexMp(MpReal(0, bits), rd("period_t1_im"));
    return cc;
}

} // namespace tetra

#endif
