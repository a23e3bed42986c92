#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dgcc/framework.hpp"

namespace dgcc {

// Variants are named "dgcc", "dgcc-ablation-structure",
// "dgcc-ablation-resources", "dgcc-ablation-inheritance" and "global-nsga2".
enum class Variant { dgcc, no_structure, no_resources, no_inheritance, global_nsga2 };

const char* to_string(Variant v) noexcept;
Variant variant_from_string(const std::string& name);

struct InstanceSource {
    std::string path;                       // instance file, or empty
    std::optional<GeneratorSpec> generator; // used when path is empty
    std::uint64_t generator_seed = 0;
};

enum class SweepParameter { L, Q };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::L;
    std::vector<double> values;
};

struct ExperimentSpec {
    std::vector<InstanceSource> instances;
    std::vector<int> durations;
    int repeats = 1;
    std::vector<Variant> variants{Variant::dgcc};
    std::optional<SweepSpec> sweep;
    RunConfig base;
    std::uint64_t seed_base = 1;
    unsigned threads = 0;           // 0 = hardware concurrency
    bool record_wall_time = true;   // false writes wall_ms = 0 for byte-stable output

    void validate() const;
};

ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

// Parses "1..30", "10..200:10" or "1,5,10".
std::vector<double> parse_value_list(const std::string& text);

struct ResultRow {
    std::string instance;
    int days = 0;
    std::string variant;
    std::optional<double> value;  // sweep value
    std::uint64_t seed = 0;
    double hv = 0.0;
    long fes = 0;
    double wall_ms = 0.0;
};

struct AggregateRow {
    std::string instance;
    int days = 0;
    std::string variant;
    std::optional<double> value;
    std::size_t runs = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single run
    double median = 0.0;
    std::size_t rank = 0; // 1 = highest mean among variants of the same cell
};

struct ExperimentResult {
    std::vector<ResultRow> rows;            // canonical cell order
    std::vector<AggregateRow> aggregates;
    std::vector<std::string> errors;        // instances that could not be loaded
    std::vector<std::array<double, 3>> references;  // per instance and duration
};

// Deterministic per-cell seed; the variant is deliberately not part of the key
// so every variant of a cell starts from the same initial populations.
std::uint64_t cell_seed(std::uint64_t seed_base, std::size_t instance, int days, std::size_t value_index, int repeat);

// Shared reference point for one instance and duration: component-wise max of
// 10n random genomes drawn like initial populations, times the margin.
ReferencePoint shared_reference(const ClusteredInstance& instance, const RunConfig& cfg, std::uint64_t seed);

// Applies a variant and a sweep value to a run configuration.
RunConfig configure_cell(const RunConfig& base, Variant variant, const std::optional<SweepSpec>& sweep,
                         std::size_t value_index);

ExperimentResult run_experiment(const ExperimentSpec& spec);

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows);

std::string results_to_csv(const std::vector<ResultRow>& rows);
std::string aggregates_to_csv(const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> aggregates_from_csv(const std::string& text);

struct CurvePoint {
    double value = 0.0;
    double normalized_hv = 0.0;
};

struct Curve {
    std::string instance;
    int days = 0;
    std::string variant;
    std::vector<CurvePoint> points;
};

// Min-max normalization of mean HV across sweep values; a zero range maps to 0.
std::vector<Curve> sweep_normalized_hv(const std::vector<AggregateRow>& aggregates);
std::vector<double> min_max_normalize(const std::vector<double>& values);

// Writes results.csv, summary.csv and, for sweeps, one two-column .dat file per
// curve.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result);

// Aligned text table of summary.csv.
std::string format_report(const std::vector<AggregateRow>& rows);

} // namespace dgcc
