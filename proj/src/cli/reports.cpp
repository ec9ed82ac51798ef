#include "rci/cli/reports.hpp"

#include "rci/cli/config.hpp"

namespace rci::cli {

using nlohmann::json;

json indicator_report_to_json(const IndicatorReport& r) {
    json j{{"a_k0", matrix_to_json(r.a_k0)},
           {"eig_real_parts", r.eig_real_parts},
           {"hurwitz", r.hurwitz},
           {"lf_plant", r.lf_plant},
           {"lf_ak0", r.lf_ak0}};
    if (r.certified) {
        const auto& c = *r.certified;
        j["q_star"] = matrix_to_json(c.q_star.matrix());
        j["gamma_star"] = c.gamma_star;
        j["r_k"] = c.r_k;
        j["i_k"] = c.i_k;
        j["sigma_min_ak"] = c.sigma_min_ak;
        j["tau_qstar"] = c.tau_qstar;
    }
    return j;
}

IndicatorReport indicator_report_from_json(const json& j) {
    IndicatorReport r;
    r.a_k0 = matrix_from_json(j.at("a_k0"));
    j.at("eig_real_parts").get_to(r.eig_real_parts);
    j.at("hurwitz").get_to(r.hurwitz);
    j.at("lf_plant").get_to(r.lf_plant);
    j.at("lf_ak0").get_to(r.lf_ak0);
    if (j.contains("r_k")) {
        CertifiedIndicators c;
        c.q_star = SymmetricMatrix(matrix_from_json(j.at("q_star")));
        j.at("gamma_star").get_to(c.gamma_star);
        j.at("r_k").get_to(c.r_k);
        j.at("i_k").get_to(c.i_k);
        j.at("sigma_min_ak").get_to(c.sigma_min_ak);
        j.at("tau_qstar").get_to(c.tau_qstar);
        r.certified = std::move(c);
    }
    return r;
}

json gains_to_json(const GainPair& g) { return {{"kp", matrix_to_json(g.kp)}, {"ki", matrix_to_json(g.ki)}}; }

GainPair gains_from_json(const json& j) { return {matrix_from_json(j.at("kp")), matrix_from_json(j.at("ki"))}; }

json tuning_result_to_json(const TuningResult& r) {
    return {{"best", gains_to_json(r.best)},
            {"best_fitness", r.best_fitness},
            {"feasible", r.feasible},
            {"history", r.history},
            {"report", indicator_report_to_json(r.report)}};
}

TuningResult tuning_result_from_json(const json& j) {
    TuningResult r;
    r.best = gains_from_json(j.at("best"));
    j.at("best_fitness").get_to(r.best_fitness);
    j.at("feasible").get_to(r.feasible);
    j.at("history").get_to(r.history);
    r.report = indicator_report_from_json(j.at("report"));
    return r;
}

json metrics_to_json(const MetricsReport& r) {
    return {{"itae", r.itae},
            {"peak_time", r.peak_time},
            {"max_overshoot", r.max_overshoot},
            {"mean_settled", r.mean_settled},
            {"std_settled", r.std_settled},
            {"composite_mean_settled", r.composite_mean_settled},
            {"composite_std_settled", r.composite_std_settled}};
}

MetricsReport metrics_from_json(const json& j) {
    MetricsReport r;
    j.at("itae").get_to(r.itae);
    j.at("peak_time").get_to(r.peak_time);
    j.at("max_overshoot").get_to(r.max_overshoot);
    j.at("mean_settled").get_to(r.mean_settled);
    j.at("std_settled").get_to(r.std_settled);
    j.at("composite_mean_settled").get_to(r.composite_mean_settled);
    j.at("composite_std_settled").get_to(r.composite_std_settled);
    return r;
}

json duffing_verification_to_json(const DuffingVerification& v) {
    json j{{"dominated", v.verdict.dominated},
           {"final_quarter_max", v.verdict.final_quarter_max},
           {"max_ratio", v.verdict.max_ratio},
           {"envelope", {{"alpha", v.verdict.envelope.alpha},
                         {"beta", v.verdict.envelope.beta},
                         {"v0_sqrt", v.verdict.envelope.v0_sqrt}}},
           {"rate", v.rate},
           {"radius", v.radius},
           {"beta", v.beta},
           {"lf", v.lf},
           {"ld", v.ld},
           {"slack", v.slack}};
    j["first_violation_time"] = v.verdict.first_violation_time ? json(*v.verdict.first_violation_time) : json(nullptr);
    return j;
}

DuffingVerification duffing_verification_from_json(const json& j) {
    DuffingVerification v;
    j.at("dominated").get_to(v.verdict.dominated);
    j.at("final_quarter_max").get_to(v.verdict.final_quarter_max);
    j.at("max_ratio").get_to(v.verdict.max_ratio);
    const json& e = j.at("envelope");
    e.at("alpha").get_to(v.verdict.envelope.alpha);
    e.at("beta").get_to(v.verdict.envelope.beta);
    e.at("v0_sqrt").get_to(v.verdict.envelope.v0_sqrt);
    if (!j.at("first_violation_time").is_null()) v.verdict.first_violation_time = j.at("first_violation_time").get<double>();
    j.at("rate").get_to(v.rate);
    j.at("radius").get_to(v.radius);
    j.at("beta").get_to(v.beta);
    j.at("lf").get_to(v.lf);
    j.at("ld").get_to(v.ld);
    j.at("slack").get_to(v.slack);
    return v;
}

} // namespace rci::cli
