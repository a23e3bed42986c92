#include "dgcc/run_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dgcc/error.hpp"

namespace dgcc {

using json = nlohmann::json;

namespace {

const char* mode_name(EvalMode mode) { return mode == EvalMode::context ? "context" : "isolated"; }

EvalMode mode_from(const std::string& s) {
    if (s == "context") return EvalMode::context;
    if (s == "isolated") return EvalMode::isolated;
    throw Error("config: eval_mode must be \"context\" or \"isolated\", got \"" + s + "\"");
}

const char* policy_name(ReferencePolicy p) { return p == ReferencePolicy::fixed ? "fixed" : "adaptive"; }

ReferencePolicy policy_from(const std::string& s) {
    if (s == "fixed") return ReferencePolicy::fixed;
    if (s == "adaptive") return ReferencePolicy::adaptive;
    throw Error("config: ref_policy must be \"fixed\" or \"adaptive\", got \"" + s + "\"");
}

// Non-finite values have no JSON literal; they are written as strings.
json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

} // namespace

RunConfig parse_run_config(const std::string& json_text, RunConfig cfg) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error("config: top level must be an object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "n") cfg.n = v.get<std::size_t>();
            else if (key == "p_m") cfg.p_m = v.get<double>();
            else if (key == "p_z") cfg.p_z = v.get<double>();
            else if (key == "alpha_ctrl") cfg.alpha_ctrl = v.get<double>();
            else if (key == "theta") cfg.theta = v.get<double>();
            else if (key == "M") cfg.slots_per_day = v.get<int>();
            else if (key == "D") cfg.total_days = v.get<int>();
            else if (key == "L") cfg.adjust_period = v.get<int>();
            else if (key == "I_bas") cfg.basic_fes = v.get<long>();
            else if (key == "I_add") cfg.additional_fes = v.get<long>();
            else if (key == "MaxFEs") cfg.max_fes = v.get<long>();
            else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
            else if (key == "eval_mode") cfg.eval_mode = mode_from(v.get<std::string>());
            else if (key == "count_interday_edges") cfg.count_interday_edges = v.get<bool>();
            else if (key == "ref_policy") cfg.ref_policy = policy_from(v.get<std::string>());
            else if (key == "ref_coords") cfg.ref_coords = v.get<std::array<double, 3>>();
            else if (key == "ref_margin") cfg.ref_margin = v.get<double>();
            else if (key == "delta_const") cfg.delta_const = v.get<double>();
            else if (key == "preserve_intermediate_days") cfg.preserve_intermediate_days = v.get<bool>();
            else if (key == "order") cfg.order = v.get<std::vector<int>>();
            else if (key == "archive_capacity") {
                if (v.is_null()) cfg.archive_capacity.reset();
                else cfg.archive_capacity = v.get<std::size_t>();
            } else if (key == "ablations") {
                for (const auto& [name, flag] : v.items()) {
                    const bool on = flag.get<bool>();
                    if (name == "no_structure_adjustment") cfg.ablations.no_structure_adjustment = on;
                    else if (name == "no_resource_allocation") cfg.ablations.no_resource_allocation = on;
                    else if (name == "no_population_inheritance") cfg.ablations.no_population_inheritance = on;
                    else throw Error("config: unknown ablation \"" + name + "\"");
                }
            } else {
                throw Error("config: unknown field \"" + key + "\"");
            }
        }
    } catch (const json::exception& e) {
        throw Error(std::string("config: wrong value type: ") + e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
    return parse_run_config(read_text_file(path), std::move(base));
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["n"] = cfg.n;
    j["p_m"] = cfg.p_m;
    j["p_z"] = cfg.p_z;
    j["alpha_ctrl"] = cfg.alpha_ctrl;
    j["theta"] = cfg.theta;
    j["M"] = cfg.slots_per_day;
    j["D"] = cfg.total_days;
    j["L"] = cfg.adjust_period;
    j["I_bas"] = cfg.basic_fes;
    j["I_add"] = cfg.additional_fes;
    j["MaxFEs"] = cfg.max_fes;
    j["seed"] = cfg.seed;
    j["eval_mode"] = mode_name(cfg.eval_mode);
    j["count_interday_edges"] = cfg.count_interday_edges;
    j["ref_policy"] = policy_name(cfg.ref_policy);
    j["ref_coords"] = cfg.ref_coords;
    j["ref_margin"] = cfg.ref_margin;
    j["delta_const"] = cfg.delta_const;
    j["preserve_intermediate_days"] = cfg.preserve_intermediate_days;
    j["order"] = cfg.order;
    j["archive_capacity"] = cfg.archive_capacity ? json(*cfg.archive_capacity) : json(nullptr);
    j["ablations"] = {{"no_structure_adjustment", cfg.ablations.no_structure_adjustment},
                      {"no_resource_allocation", cfg.ablations.no_resource_allocation},
                      {"no_population_inheritance", cfg.ablations.no_population_inheritance}};
    return j.dump(2);
}

std::string history_to_jsonl(const std::vector<RoundSnapshot>& history) {
    std::string out;
    for (const RoundSnapshot& s : history) {
        json j;
        j["round"] = s.round;
        j["d"] = s.days;
        j["C"] = numbers(s.hv);
        j["delta"] = numbers(s.delta);
        j["P"] = numbers(s.potential);
        j["I_avl"] = s.allocated;
        j["used"] = s.used;
        j["stagnant"] = s.stagnant;
        j["U"] = s.active;
        j["B"] = number(s.balance);
        j["FEs"] = s.fes;
        j["context_hv_contrib"] = number(s.context_hv_contrib);
        j["adjusted"] = s.adjusted;
        j["complete"] = s.complete;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string summary_to_json(const RunResult& result, const RunConfig& cfg, const RunSummaryInfo& info) {
    json j;
    j["instance"] = info.instance;
    j["algorithm"] = info.algorithm;
    j["seed"] = cfg.seed;
    std::size_t clipped = 0;
    const auto pts = result.archive.objectives();
    j["final_hv"] = number(hypervolume(pts, result.ref, &clipped));
    j["clipped"] = clipped;
    j["reference"] = {number(result.ref.coords[0]), number(result.ref.coords[1]), number(result.ref.coords[2])};
    j["fes_total"] = result.fes_total;
    j["max_fes"] = result.max_fes;
    j["rounds"] = result.history.size();
    j["archive_size"] = result.archive.size();
    j["final_days"] = result.plan.days;
    j["wall_ms"] = info.wall_ms;
    json dec = json::array();
    for (const auto& r : result.decomposability) dec.push_back(json::parse(report_to_json(r)));
    j["decomposability"] = std::move(dec);
    j["warnings"] = result.warnings;
    return j.dump(2);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_run_outputs(const std::filesystem::path& dir, const RunResult& result, const RunConfig& cfg,
                       const RunSummaryInfo& info) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / "archive.csv", result.archive.to_csv());
    write_text_file(dir / "history.jsonl", history_to_jsonl(result.history));
    write_text_file(dir / "summary.json", summary_to_json(result, cfg, info) + "\n");
}

} // namespace dgcc
