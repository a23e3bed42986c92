#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dgcc/error.hpp"
#include "dgcc/harness.hpp"
#include "dgcc/instance.hpp"
#include "dgcc/run_io.hpp"

namespace {

std::vector<int> parse_order(const std::string& text) {
    std::vector<int> out;
    for (double v : dgcc::parse_value_list(text)) out.push_back(static_cast<int>(v));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative coevolution for multi-day itinerary planning on clustered graphs"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "Generate a synthetic clustered instance");
    std::string gen_spec, gen_out;
    std::uint64_t gen_seed = 1;
    gen->add_option("--spec", gen_spec, "Generator spec (JSON)")->required()->check(CLI::ExistingFile);
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--out", gen_out, "Output instance file")->required();

    auto* check = app.add_subcommand("check", "Report weak decomposability");
    std::string check_path, check_channel;
    check->add_option("instance", check_path, "Instance file")->required()->check(CLI::ExistingFile);
    check->add_option("--channel", check_channel, "time or cost (default: both)")
        ->check(CLI::IsMember({"time", "cost"}));

    auto* run = app.add_subcommand("run", "Run the optimizer on one instance");
    std::string run_instance, run_config, run_out, run_baseline, run_order;
    int run_days = 0;
    std::uint64_t run_seed = 0;
    std::vector<std::string> run_ablations;
    run->add_option("--instance", run_instance, "Instance file")->required()->check(CLI::ExistingFile);
    run->add_option("--days", run_days, "Total travel days D")->required()->check(CLI::PositiveNumber);
    run->add_option("--config", run_config, "Run configuration (JSON)")->check(CLI::ExistingFile);
    auto* seed_opt = run->add_option("--seed", run_seed, "Random seed");
    run->add_option("--ablation", run_ablations, "Disable a mechanism (repeatable)")
        ->check(CLI::IsMember({"structure", "resources", "inheritance"}));
    run->add_option("--baseline", run_baseline, "Run a baseline instead")->check(CLI::IsMember({"global-nsga2"}));
    run->add_option("--order", run_order, "Component visiting order, e.g. 2,0,1");
    run->add_option("--out", run_out, "Output directory")->required();

    auto* bench = app.add_subcommand("bench", "Run an experiment specification");
    std::string bench_spec, bench_out;
    unsigned bench_threads = 0;
    bool bench_no_timing = false;
    bench->add_option("--spec", bench_spec, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", bench_out, "Output directory")->required();
    bench->add_option("--threads", bench_threads, "Worker threads (0 = all cores)");
    bench->add_flag("--no-timing", bench_no_timing, "Write wall_ms = 0 for reproducible files");

    auto* sweep = app.add_subcommand("sweep", "Sweep L or Q over an experiment specification");
    std::string sweep_spec, sweep_out, sweep_param, sweep_values;
    unsigned sweep_threads = 0;
    bool sweep_no_timing = false;
    sweep->add_option("--spec", sweep_spec, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    sweep->add_option("--param", sweep_param, "Swept parameter")->required()->check(CLI::IsMember({"L", "Q"}));
    sweep->add_option("--values", sweep_values, "Values: 1..30, 10..200:10 or 1,5,10")->required();
    sweep->add_option("--out", sweep_out, "Output directory")->required();
    sweep->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");
    sweep->add_flag("--no-timing", sweep_no_timing, "Write wall_ms = 0 for reproducible files");

    auto* report = app.add_subcommand("report", "Print the aggregate table of an experiment directory");
    std::string report_dir;
    report->add_option("dir", report_dir, "Directory holding summary.csv")->required()->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const auto spec = dgcc::parse_generator_spec(dgcc::read_text_file(gen_spec));
            dgcc::save_instance(dgcc::generate_instance(spec, gen_seed), gen_out);
        } else if (*check) {
            const auto instance = dgcc::load_instance(check_path);
            std::vector<dgcc::Channel> channels{dgcc::Channel::time, dgcc::Channel::cost};
            if (!check_channel.empty()) channels = {dgcc::channel_from_string(check_channel)};
            bool all = true;
            for (auto ch : channels) {
                const auto r = dgcc::check_weak_decomposability(instance, ch);
                all = all && r.satisfied;
                std::cout << dgcc::report_to_json(r) << '\n';
            }
            return all ? 0 : 2;
        } else if (*run) {
            const auto instance = dgcc::load_instance(run_instance);
            dgcc::RunConfig cfg;
            if (!run_config.empty()) cfg = dgcc::load_run_config(run_config);
            cfg.total_days = run_days;
            if (*seed_opt) cfg.seed = run_seed;
            for (const auto& a : run_ablations) {
                if (a == "structure") cfg.ablations.no_structure_adjustment = true;
                if (a == "resources") cfg.ablations.no_resource_allocation = true;
                if (a == "inheritance") cfg.ablations.no_population_inheritance = true;
            }
            if (!run_order.empty()) cfg.order = parse_order(run_order);
            const bool baseline = !run_baseline.empty();
            const auto t0 = std::chrono::steady_clock::now();
            const auto result = baseline ? dgcc::run_global_nsga2(instance, cfg) : dgcc::run_dgcc(instance, cfg);
            const auto t1 = std::chrono::steady_clock::now();
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
            const dgcc::RunSummaryInfo info{instance.name(), baseline ? "global-nsga2" : "dgcc",
                                            std::chrono::duration<double, std::milli>(t1 - t0).count()};
            dgcc::write_run_outputs(run_out, result, cfg.resolved(instance.cluster_count()), info);
            std::cout << dgcc::summary_to_json(result, cfg.resolved(instance.cluster_count()), info) << '\n';
        } else if (*bench || *sweep) {
            auto spec = dgcc::load_experiment_spec(*bench ? bench_spec : sweep_spec);
            if (*sweep) {
                dgcc::SweepSpec sw;
                sw.parameter = sweep_param == "L" ? dgcc::SweepParameter::L : dgcc::SweepParameter::Q;
                sw.values = dgcc::parse_value_list(sweep_values);
                if (sw.values.size() < 2) throw dgcc::Error("a sweep needs at least 2 values");
                spec.sweep = std::move(sw);
                spec.validate();
            }
            const unsigned threads = *bench ? bench_threads : sweep_threads;
            if (threads) spec.threads = threads;
            if (*bench ? bench_no_timing : sweep_no_timing) spec.record_wall_time = false;
            const auto result = dgcc::run_experiment(spec);
            for (const auto& e : result.errors) std::cerr << "error: " << e << '\n';
            const std::string out = *bench ? bench_out : sweep_out;
            dgcc::write_experiment_outputs(out, result);
            std::cout << dgcc::format_report(result.aggregates);
            if (!result.errors.empty()) return 1;
        } else if (*report) {
            const auto rows =
                dgcc::aggregates_from_csv(dgcc::read_text_file(std::filesystem::path(report_dir) / "summary.csv"));
            std::cout << dgcc::format_report(rows);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
