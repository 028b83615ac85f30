#pragma once

// JSON views of the library's value types. Field order is fixed by
// construction (ordered_json) and nothing time-dependent is ever emitted, so
// identical inputs serialize byte-identically.

#include <string>
#include <vector>

#include <json.hpp>
#include <phg/unitroot.hpp>

namespace phg {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& q) { return q.get_str(); }

inline Json to_json(const Triple& t) {
    return Json::array({to_json(t.a1), to_json(t.a2), to_json(t.a3)});
}

/// {valuation, digits (base-p little-endian, one per known digit), precision};
/// an exact zero has no finite precision and is marked instead.
inline Json to_json(const PadicNumber& x) {
    Json j;
    if (x.is_exact_zero()) {
        j["exact_zero"] = true;
        return j;
    }
    j["valuation"] = x.valuation();
    j["digits"] = x.unit_digits();
    j["precision"] = x.abs_precision();
    return j;
}

inline Json to_json(const PiElement& x) {
    Json j = to_json(x.coeff());
    j["pi_exponent"] = x.pi_exp();
    return j;
}

inline Json to_json(const SeriesQ& s) {
    Json coeffs = Json::array();
    for (long k = s.lo(); k <= s.hi(); ++k) coeffs.push_back(to_json(s.coeff(k)));
    return Json{{"chart", chart_name(s.chart())}, {"lo", s.lo()}, {"coeffs", coeffs}};
}

inline Json to_json(const SeriesP& s) {
    Json coeffs = Json::array();
    for (long k = s.lo(); k <= s.hi(); ++k) coeffs.push_back(to_json(s.coeff(k)));
    return Json{{"chart", chart_name(s.chart())}, {"lo", s.lo()}, {"coeffs", coeffs}};
}

inline Json to_json(const ConditionReport& c) {
    Json j;
    j["pass"] = c.pass;
    if (!c.pass) {
        j["failing_index"] = c.failing_index;
        j["reason"] = c.reason;
    }
    j["preperiod"] = c.preperiod;
    j["period"] = c.period;
    return j;
}

inline Json to_json(const RatioCertificate& cert) {
    Json levels = Json::array();
    for (size_t i = 0; i < cert.level_s.size(); ++i)
        levels.push_back(Json{{"s", cert.level_s[i]}, {"padic", to_json(cert.levels[i])}});
    Json j;
    j["prime"] = cert.p;
    j["lambda0"] = to_json(cert.lambda0);
    j["levels"] = levels;
    j["agreements"] = cert.agreements;
    j["agreement_exponent"] = cert.agreement_exponent;
    j["certified_value"] = to_json(cert.certified_value);
    return j;
}

inline Json to_json(const SpecialValueReport& rep) {
    Json members = Json::array();
    for (const MemberCheck& m : rep.members)
        members.push_back(Json{{"triple", to_json(m.triple)},
                               {"certified_value", to_json(m.ratio.certified_value)},
                               {"level_agreements", m.ratio.agreements},
                               {"rhs", to_json(m.rhs)},
                               {"agreement", m.agreement}});
    Json j;
    j["prime"] = rep.p;
    j["triple"] = to_json(rep.triple);
    j["lambda0"] = to_json(rep.lambda0);
    j["conditions"] = to_json(rep.conditions);
    if (rep.intro_checked) j["conditions_weak"] = to_json(rep.intro);
    j["members"] = members;
    j["composite_agreement"] = rep.composite_agreement;
    j["threshold"] = rep.threshold;
    j["verdict"] = to_string(rep.verdict);
    if (!rep.error.empty()) j["error"] = rep.error;
    return j;
}

inline Json to_json(const XiRatioReport& rep) {
    Json chain = Json::array();
    for (const ChainStep& st : rep.chain)
        chain.push_back(Json{{"step", st.name}, {"agreement", st.agreement}});
    Json j;
    j["prime"] = rep.p;
    j["triple"] = to_json(rep.triple);
    j["mu"] = rep.mu;
    j["conditions"] = Json{{"splitting", rep.t2_pass}, {"digits", rep.kd_pass}};
    j["pi_exponent"] = rep.pi_exponent;
    j["values"] = Json{{"xi_ratio", to_json(rep.xi_ratio_value)},
                       {"special_value", to_json(rep.kd_value)},
                       {"analytic_ratio", to_json(rep.dwork_value)}};
    j["agreements"] = Json{{"chain", chain},
                           {"xi_vs_special", rep.agree_xi_kd},
                           {"analytic_vs_special", rep.agree_dwork_kd},
                           {"analytic_vs_xi", rep.agree_dwork_xi},
                           {"analytic_certificate", rep.dwork_agreement}};
    j["verdict"] = rep.verdict ? "pass" : "fail";
    return j;
}

inline Json to_json(const FrobeniusMatrix& fm) {
    Json j;
    j["mu"] = fm.mu;
    j["certified_precision"] = fm.certified;
    j["xi"] = Json::array({to_json(fm.xi1), to_json(fm.xi2)});
    j["matrix"] = Json{{"a", to_json(fm.T.a)},
                       {"b", to_json(fm.T.b)},
                       {"c", to_json(fm.T.c)},
                       {"d", to_json(fm.T.d)}};
    return j;
}

inline Json to_json(const FixedPointTable& table) {
    Json samples = Json::array();
    for (size_t i = 0; i < table.points.size(); ++i)
        samples.push_back(
            Json{{"point", to_json(table.points[i])}, {"value", to_json(table.values[i])}});
    Json j;
    j["omega"] = to_json(table.omega);
    j["samples"] = samples;
    j["iterations"] = table.iterations;
    j["step_gains"] = table.step_gains;
    return j;
}

}  // namespace phg
