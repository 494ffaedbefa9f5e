#include "noveltree/eval/report.hpp"

#include "noveltree/pddl/parser.hpp"

#include <cstdio>

namespace noveltree::eval {

std::string ScoreReport::score() const { return std::to_string(passed) + "/" + std::to_string(total); }

void ScoreReport::aggregate() {
    passed = 0;
    total = verdicts.size();
    std::size_t optimal = 0;
    bool any_optimal = false;
    std::int64_t tokens = 0;
    estimated_tokens = false;
    for (const auto &v : verdicts) {
        passed += v.pass ? 1 : 0;
        if (v.optimal) {
            any_optimal = true;
            optimal += *v.optimal ? 1 : 0;
        }
        tokens += v.usage.total();
        estimated_tokens = estimated_tokens || v.usage.estimated;
    }
    optimal_passed = any_optimal || subtask == SubTask::action_gen_single ? std::optional(optimal) : std::nullopt;
    atu = total ? static_cast<double>(tokens) / static_cast<double>(total) : 0.0;
}

namespace {

nlohmann::json usage_json(const TokenUsage &u) {
    return {{"prompt", u.prompt}, {"completion", u.completion}, {"reasoning", u.reasoning}, {"estimated", u.estimated}};
}

TokenUsage usage_from(const nlohmann::json &j) {
    TokenUsage u;
    u.prompt = j.at("prompt").get<std::int64_t>();
    u.completion = j.at("completion").get<std::int64_t>();
    u.reasoning = j.at("reasoning").get<std::int64_t>();
    u.estimated = j.at("estimated").get<bool>();
    return u;
}

} // namespace

nlohmann::json to_json(const ScoreReport &report) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto &v : report.verdicts) {
        nlohmann::json e = {{"id", v.id}, {"pass", v.pass}, {"reason", v.reason}, {"usage", usage_json(v.usage)}};
        e["optimal"] = v.optimal ? nlohmann::json(*v.optimal) : nlohmann::json(nullptr);
        e["duplicate"] = v.duplicate ? nlohmann::json(*v.duplicate) : nlohmann::json(nullptr);
        verdicts.push_back(std::move(e));
    }
    nlohmann::json j = {{"subtask", to_string(report.subtask)},
                        {"style", report.style},
                        {"thinking", report.thinking},
                        {"respondent", report.respondent},
                        {"passed", report.passed},
                        {"total", report.total},
                        {"score", report.score()},
                        {"atu", report.atu},
                        {"estimated_tokens", report.estimated_tokens},
                        {"verdicts", verdicts}};
    j["optimal_passed"] = report.optimal_passed ? nlohmann::json(*report.optimal_passed) : nlohmann::json(nullptr);
    return j;
}

ScoreReport report_from_json(const nlohmann::json &j) {
    ScoreReport r;
    r.subtask = subtask_from_string(j.at("subtask").get<std::string>());
    r.style = j.at("style").get<std::string>();
    r.thinking = j.at("thinking").get<bool>();
    r.respondent = j.at("respondent").get<std::string>();
    r.passed = j.at("passed").get<std::size_t>();
    r.total = j.at("total").get<std::size_t>();
    if (!j.at("optimal_passed").is_null()) r.optimal_passed = j["optimal_passed"].get<std::size_t>();
    r.atu = j.at("atu").get<double>();
    r.estimated_tokens = j.at("estimated_tokens").get<bool>();
    for (const auto &e : j.at("verdicts")) {
        InstanceVerdict v;
        v.id = e.at("id").get<std::string>();
        v.pass = e.at("pass").get<bool>();
        v.reason = e.at("reason").get<std::string>();
        if (!e.at("optimal").is_null()) v.optimal = e["optimal"].get<bool>();
        if (!e.at("duplicate").is_null()) v.duplicate = e["duplicate"].get<bool>();
        v.usage = usage_from(e.at("usage"));
        r.verdicts.push_back(std::move(v));
    }
    return r;
}

std::string csv_header() { return "subtask,style,thinking,respondent,passed,total,optimal_passed,atu,estimated_tokens"; }

std::string csv_row(const ScoreReport &r) {
    char atu[64];
    std::snprintf(atu, sizeof atu, "%.4f", r.atu);
    return std::string(to_string(r.subtask)) + "," + r.style + "," + (r.thinking ? "on" : "off") + "," +
           r.respondent + "," + std::to_string(r.passed) + "," + std::to_string(r.total) + "," +
           (r.optimal_passed ? std::to_string(*r.optimal_passed) : "") + "," + atu + "," +
           (r.estimated_tokens ? "yes" : "no");
}

void write_report(const std::filesystem::path &dir, const ScoreReport &report) {
    const std::string stem = std::string(to_string(report.subtask)) + "-" + report.style;
    pddl::write_file(dir / (stem + ".json"), to_json(report).dump(2) + "\n");
    pddl::write_file(dir / (stem + ".csv"), csv_header() + "\n" + csv_row(report) + "\n");
}

ScoreReport read_report(const std::filesystem::path &json_path) {
    return report_from_json(nlohmann::json::parse(pddl::read_file(json_path)));
}

} // namespace noveltree::eval
