#include "dgcc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dgcc/error.hpp"
#include "dgcc/run_io.hpp"

namespace dgcc {

using json = nlohmann::json;

namespace {

std::string shortest(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw Error("cannot parse " + what + " \"" + s + "\"");
    return v;
}

} // namespace

const char* to_string(Variant v) noexcept {
    switch (v) {
    case Variant::dgcc: return "dgcc";
    case Variant::no_structure: return "dgcc-ablation-structure";
    case Variant::no_resources: return "dgcc-ablation-resources";
    case Variant::no_inheritance: return "dgcc-ablation-inheritance";
    case Variant::global_nsga2: return "global-nsga2";
    }
    return "?";
}

Variant variant_from_string(const std::string& name) {
    for (Variant v : {Variant::dgcc, Variant::no_structure, Variant::no_resources, Variant::no_inheritance,
                      Variant::global_nsga2}) {
        if (name == to_string(v)) return v;
    }
    throw Error("unknown variant \"" + name + "\"");
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        for (const auto& part : split(text, ',')) out.push_back(to_double(part, "sweep value"));
        return out;
    }
    const double lo = to_double(text.substr(0, dots), "range start");
    std::string rest = text.substr(dots + 2);
    double step = 1.0;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
        step = to_double(rest.substr(colon + 1), "range step");
        rest = rest.substr(0, colon);
    }
    const double hi = to_double(rest, "range end");
    if (!(step > 0.0)) throw Error("range step must be positive");
    if (hi < lo) throw Error("range end below start");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

void ExperimentSpec::validate() const {
    if (instances.empty()) throw Error("experiment: no instances");
    if (durations.empty()) throw Error("experiment: no durations");
    if (repeats < 1) throw Error("experiment: repeats must be >= 1");
    if (variants.empty()) throw Error("experiment: no variants");
    if (sweep) {
        if (sweep->values.empty()) throw Error("experiment: sweep has no values");
        for (double v : sweep->values) {
            if (!(v > 0.0)) throw Error("experiment: sweep values must be positive");
            if (sweep->parameter == SweepParameter::L && v != std::floor(v)) {
                throw Error("experiment: L values must be integers");
            }
            if (sweep->parameter == SweepParameter::Q && v * static_cast<double>(base.n) / 2.0 < static_cast<double>(base.n)) {
                throw Error("experiment: Q must be at least 2 so that I_bas >= n");
            }
        }
    }
}

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
    ExperimentSpec spec;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("experiment: invalid JSON: ") + e.what());
    }
    try {
        for (const auto& item : j.at("instances")) {
            InstanceSource src;
            if (item.is_string()) {
                src.path = item.get<std::string>();
            } else {
                src.generator = parse_generator_spec(item.at("generator").dump());
                src.generator_seed = item.value("seed", std::uint64_t{0});
            }
            spec.instances.push_back(std::move(src));
        }
        spec.durations = j.at("durations").get<std::vector<int>>();
        spec.repeats = j.value("repeats", 1);
        if (j.contains("variants")) {
            spec.variants.clear();
            for (const auto& v : j.at("variants")) spec.variants.push_back(variant_from_string(v.get<std::string>()));
        }
        if (j.contains("config")) spec.base = parse_run_config(j.at("config").dump());
        spec.seed_base = j.value("seed_base", std::uint64_t{1});
        spec.threads = j.value("threads", 0u);
        spec.record_wall_time = j.value("record_wall_time", true);
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            SweepSpec sw;
            const auto p = s.at("parameter").get<std::string>();
            if (p == "L") sw.parameter = SweepParameter::L;
            else if (p == "Q") sw.parameter = SweepParameter::Q;
            else throw Error("experiment: sweep parameter must be L or Q");
            const auto& vals = s.at("values");
            sw.values = vals.is_string() ? parse_value_list(vals.get<std::string>()) : vals.get<std::vector<double>>();
            spec.sweep = std::move(sw);
        }
    } catch (const json::exception& e) {
        throw Error(std::string("experiment: ") + e.what());
    }
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
    auto spec = parse_experiment_spec(read_text_file(path));
    // Relative instance paths are resolved against the spec file.
    for (auto& src : spec.instances) {
        if (!src.path.empty() && std::filesystem::path(src.path).is_relative()) {
            src.path = (path.parent_path() / src.path).string();
        }
    }
    return spec;
}

std::uint64_t cell_seed(std::uint64_t seed_base, std::size_t instance, int days, std::size_t value_index, int repeat) {
    return seed_base + derive_seed(0x5EEDULL, {instance, static_cast<std::uint64_t>(days), value_index,
                                               static_cast<std::uint64_t>(repeat)});
}

ReferencePoint shared_reference(const ClusteredInstance& instance, const RunConfig& input, std::uint64_t seed) {
    const std::size_t m = instance.cluster_count();
    const RunConfig cfg = input.resolved(m);
    const EvalConfig ev = cfg.eval_config();
    const DecompositionPlan plan = initial_decomposition(m, cfg.total_days, cfg.slots_per_day, cfg.order);
    const std::size_t samples = 10 * cfg.n;
    std::vector<ObjectiveVector> pts;
    pts.reserve(samples);
    Genome g;
    for (std::size_t k = 0; k < samples; ++k) {
        g.slots.clear();
        for (std::size_t p = 0; p < m; ++p) {
            RandomStream rng(seed, StreamTag::reference, {k, p});
            const auto seg = random_segment(plan.order[p], plan.segment_length(p), cfg.p_z, instance, rng);
            g.slots.insert(g.slots.end(), seg.begin(), seg.end());
        }
        pts.push_back(evaluate_full(g, plan, instance, ev));
    }
    return choose_reference_point(pts, ReferencePolicy::adaptive, {}, cfg.ref_margin);
}

RunConfig configure_cell(const RunConfig& base, Variant variant, const std::optional<SweepSpec>& sweep,
                         std::size_t value_index) {
    RunConfig cfg = base;
    switch (variant) {
    case Variant::no_structure: cfg.ablations.no_structure_adjustment = true; break;
    case Variant::no_resources: cfg.ablations.no_resource_allocation = true; break;
    case Variant::no_inheritance: cfg.ablations.no_population_inheritance = true; break;
    default: break;
    }
    if (sweep) {
        const double v = sweep->values.at(value_index);
        if (sweep->parameter == SweepParameter::L) {
            cfg.adjust_period = static_cast<int>(v);
        } else {
            const long half = std::lround(v * static_cast<double>(cfg.n) / 2.0);
            cfg.basic_fes = half;
            cfg.additional_fes = half;
        }
    }
    return cfg;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentResult result;

    struct Cell {
        std::size_t instance;
        int days;
        std::size_t value_index;
        Variant variant;
        int repeat;
        std::size_t ref_index;
    };

    std::vector<ClusteredInstance> instances(spec.instances.size());
    std::vector<bool> loaded(spec.instances.size(), false);
    for (std::size_t i = 0; i < spec.instances.size(); ++i) {
        const auto& src = spec.instances[i];
        try {
            instances[i] = src.path.empty() ? generate_instance(*src.generator, src.generator_seed)
                                            : load_instance(src.path);
            loaded[i] = true;
        } catch (const std::exception& e) {
            result.errors.push_back("instance " + std::to_string(i) + ": " + e.what());
        }
    }

    const std::size_t value_count = spec.sweep ? spec.sweep->values.size() : 1;
    std::vector<Cell> cells;
    std::vector<ReferencePoint> refs;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (!loaded[i]) continue;
        for (int d : spec.durations) {
            RunConfig base = spec.base;
            base.total_days = d;
            refs.push_back(shared_reference(instances[i], base, derive_seed(spec.seed_base, {i, static_cast<std::uint64_t>(d)})));
            result.references.push_back(refs.back().coords);
            for (std::size_t v = 0; v < value_count; ++v) {
                for (Variant var : spec.variants) {
                    for (int r = 0; r < spec.repeats; ++r) cells.push_back({i, d, v, var, r, refs.size() - 1});
                }
            }
        }
    }

    result.rows.resize(cells.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(cells.size());
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            const Cell& c = cells[k];
            ResultRow& row = result.rows[k];
            row.instance = instances[c.instance].name();
            row.days = c.days;
            row.variant = to_string(c.variant);
            if (spec.sweep) row.value = spec.sweep->values[c.value_index];
            row.seed = cell_seed(spec.seed_base, c.instance, c.days, c.value_index, c.repeat);
            try {
                RunConfig cfg = configure_cell(spec.base, c.variant, spec.sweep, c.value_index);
                cfg.total_days = c.days;
                cfg.seed = row.seed;
                const auto t0 = std::chrono::steady_clock::now();
                const RunResult run = c.variant == Variant::global_nsga2 ? run_global_nsga2(instances[c.instance], cfg)
                                                                         : run_dgcc(instances[c.instance], cfg);
                const auto t1 = std::chrono::steady_clock::now();
                row.hv = hypervolume(run.archive.objectives(), refs[c.ref_index]);
                row.fes = run.fes_total;
                if (spec.record_wall_time) row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            } catch (const std::exception& e) {
                failures[k] = e.what();
            }
        }
    };
    unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(cells.size(), 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& f : failures) {
        if (!f.empty()) throw Error("experiment cell failed: " + f);
    }
    result.aggregates = aggregate(result.rows);
    return result;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, int, std::string, std::optional<double>>;
    std::vector<Key> order;
    std::map<Key, std::vector<double>> groups;
    for (const auto& r : rows) {
        Key key{r.instance, r.days, r.variant, r.value};
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) order.push_back(key);
        it->second.push_back(r.hv);
    }
    std::vector<AggregateRow> out;
    for (const Key& key : order) {
        const auto& hv = groups[key];
        AggregateRow a;
        std::tie(a.instance, a.days, a.variant, a.value) = key;
        a.runs = hv.size();
        double sum = 0.0;
        for (double h : hv) sum += h;
        a.mean = sum / static_cast<double>(hv.size());
        if (hv.size() > 1) {
            double ss = 0.0;
            for (double h : hv) ss += (h - a.mean) * (h - a.mean);
            a.stddev = std::sqrt(ss / static_cast<double>(hv.size() - 1));
        }
        std::vector<double> sorted = hv;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t mid = sorted.size() / 2;
        a.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
        out.push_back(std::move(a));
    }
    // Rank variants within each (instance, days, value) cell; equal means share a rank.
    for (auto& a : out) {
        std::size_t better = 0;
        for (const auto& b : out) {
            if (b.instance == a.instance && b.days == a.days && b.value == a.value && b.mean > a.mean) ++better;
        }
        a.rank = better + 1;
    }
    return out;
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "instance,D,variant,value,seed,hv,fes,wall_ms\n";
    for (const auto& r : rows) {
        out += r.instance + ',' + std::to_string(r.days) + ',' + r.variant + ',' + (r.value ? shortest(*r.value) : "") +
               ',' + std::to_string(r.seed) + ',' + format_double(r.hv) + ',' + std::to_string(r.fes) + ',' +
               shortest(std::round(r.wall_ms * 1000.0) / 1000.0) + '\n';
    }
    return out;
}

std::string aggregates_to_csv(const std::vector<AggregateRow>& rows) {
    std::string out = "instance,D,variant,value,runs,mean_hv,std_hv,median_hv,rank\n";
    for (const auto& a : rows) {
        out += a.instance + ',' + std::to_string(a.days) + ',' + a.variant + ',' + (a.value ? shortest(*a.value) : "") +
               ',' + std::to_string(a.runs) + ',' + format_double(a.mean) + ',' + format_double(a.stddev) + ',' +
               format_double(a.median) + ',' + std::to_string(a.rank) + '\n';
    }
    return out;
}

std::vector<AggregateRow> aggregates_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (line.rfind("instance,D,variant", 0) != 0) throw Error("summary.csv: unexpected header");
    std::vector<AggregateRow> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 9) throw Error("summary.csv: expected 9 columns in \"" + line + "\"");
        AggregateRow a;
        a.instance = f[0];
        a.days = static_cast<int>(to_double(f[1], "D"));
        a.variant = f[2];
        if (!f[3].empty()) a.value = to_double(f[3], "value");
        a.runs = static_cast<std::size_t>(to_double(f[4], "runs"));
        a.mean = to_double(f[5], "mean");
        a.stddev = to_double(f[6], "std");
        a.median = to_double(f[7], "median");
        a.rank = static_cast<std::size_t>(to_double(f[8], "rank"));
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<double> min_max_normalize(const std::vector<double>& values) {
    if (values.empty()) return {};
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    std::vector<double> out(values.size(), 0.0);
    if (!(range > 0.0)) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
    return out;
}

std::vector<Curve> sweep_normalized_hv(const std::vector<AggregateRow>& aggregates) {
    std::vector<Curve> curves;
    for (const auto& a : aggregates) {
        if (!a.value) throw Error("sweep_normalized_hv: results contain no sweep values");
        auto it = std::find_if(curves.begin(), curves.end(), [&](const Curve& c) {
            return c.instance == a.instance && c.days == a.days && c.variant == a.variant;
        });
        if (it == curves.end()) {
            curves.push_back({a.instance, a.days, a.variant, {}});
            it = curves.end() - 1;
        }
        it->points.push_back({*a.value, a.mean});
    }
    for (auto& c : curves) {
        if (c.points.size() < 2) throw Error("sweep_normalized_hv: fewer than 2 sweep values for " + c.instance);
        std::vector<double> means;
        for (const auto& p : c.points) means.push_back(p.normalized_hv);
        const auto norm = min_max_normalize(means);
        for (std::size_t i = 0; i < norm.size(); ++i) c.points[i].normalized_hv = norm[i];
    }
    return curves;
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentResult& result) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / "results.csv", results_to_csv(result.rows));
    write_text_file(dir / "summary.csv", aggregates_to_csv(result.aggregates));
    if (!result.aggregates.empty() && result.aggregates.front().value) {
        for (const Curve& c : sweep_normalized_hv(result.aggregates)) {
            std::string text = "# value normalized_hv\n";
            for (const auto& p : c.points) text += shortest(p.value) + ' ' + format_double(p.normalized_hv) + '\n';
            write_text_file(dir / ("curve_" + c.instance + "_D" + std::to_string(c.days) + "_" + c.variant + ".dat"),
                            text);
        }
    }
}

std::string format_report(const std::vector<AggregateRow>& rows) {
    std::vector<std::vector<std::string>> table{{"instance", "D", "variant", "value", "runs", "mean_hv", "std_hv",
                                                 "median_hv", "rank"}};
    char buf[64];
    auto sci = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    for (const auto& a : rows) {
        table.push_back({a.instance, std::to_string(a.days), a.variant, a.value ? shortest(*a.value) : "-",
                         std::to_string(a.runs), sci(a.mean), sci(a.stddev), sci(a.median), std::to_string(a.rank)});
    }
    std::vector<std::size_t> width(table.front().size(), 0);
    for (const auto& row : table) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : table) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) out += std::string(width[c] - row[c].size() + 2, ' ');
        }
        out += '\n';
    }
    return out;
}

} // namespace dgcc
