// Command-line front end: infer / generate / bench.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "../src/engine.h"
#include "../src/generator.h"

namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lve::ModelError("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw lve::ModelError("cannot write " + path);
    return out;
}

int parse_path_length(const std::string& s) {
    if (s == "inf") return lve::kInfinitePathLength;
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used == s.size() && v >= 0) return v;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--path-length", "expected a non-negative integer or 'inf'");
}

void parse_minibuckets(const std::string& s, lve::EngineParams& p) {
    if (s == "off") {
        p.use_minibuckets = false;
        return;
    }
    auto colon = s.find(':');
    std::string mode = s.substr(0, colon);
    if ((mode == "args" || mode == "merge") && colon != std::string::npos) {
        try {
            std::size_t used = 0;
            int bound = std::stoi(s.substr(colon + 1), &used);
            if (used == s.size() - colon - 1 && bound > 0) {
                p.use_minibuckets = true;
                p.minibuckets.mode = mode == "args"
                                         ? lve::MiniBucketSpec::Mode::Args
                                         : lve::MiniBucketSpec::Mode::Merge;
                p.minibuckets.bound = bound;
                return;
            }
        } catch (const std::exception&) {
        }
    }
    throw CLI::ValidationError("--minibuckets", "expected off, args:<i>, or merge:<m>");
}

template <typename T>
std::vector<T> parse_list(const std::string& csv, T (*one)(const std::string&)) {
    std::vector<T> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(one(item));
    return out;
}

std::string minibuckets_string(const lve::EngineParams& p) {
    if (!p.use_minibuckets) return "off";
    return (p.minibuckets.mode == lve::MiniBucketSpec::Mode::Args ? "args:"
                                                                  : "merge:") +
           std::to_string(p.minibuckets.bound);
}

json stats_json(const lve::InferenceResult& r, const lve::EngineParams& p) {
    json j;
    j["wall_ms"] = r.stats.wall_ms;
    j["mults"] = r.stats.ops.mults;
    j["adds"] = r.stats.ops.adds;
    j["intermediate_factors"] = r.stats.intermediate_factors;
    j["blocks"] = r.stats.blocks;
    j["vertices"] = r.stats.vertices;
    j["lift"] = p.use_bisimulation;
    j["path_length"] = p.path_length == lve::kInfinitePathLength
                           ? json("inf")
                           : json(p.path_length);
    j["epsilon"] = p.epsilon;
    j["minibuckets"] = minibuckets_string(p);
    if (r.has_z) j["z"] = r.z;
    return j;
}

void write_marginals(std::ostream& out, const lve::InferenceResult& r,
                     const lve::Model& m) {
    out.precision(17);
    for (std::size_t i = 0; i < r.queries.size(); ++i) {
        out << r.queries[i] << ' ' << m.cardinalities[r.queries[i]];
        for (double p : r.marginals[i]) out << ' ' << p;
        out << '\n';
    }
}

struct InferConfig {
    std::string model_path, queries_path, evidence_path, order_path;
    std::string order_direction = "last-to-first";
    std::string marginals_out, stats_out;
    std::string compare_mode;  // "", "brute", "ground"
    lve::EngineParams params;
};

int cmd_infer(const InferConfig& cfg) {
    auto in = open_input(cfg.model_path);
    lve::Model m = lve::load_model(in);
    lve::QuerySet queries;
    {
        auto qin = open_input(cfg.queries_path);
        queries = lve::load_queries(qin);
    }
    lve::Evidence evidence;
    if (!cfg.evidence_path.empty()) {
        auto ein = open_input(cfg.evidence_path);
        evidence = lve::load_evidence(ein);
    }
    std::optional<std::vector<lve::VariableId>> order;
    if (!cfg.order_path.empty()) {
        auto oin = open_input(cfg.order_path);
        std::vector<lve::VariableId> vars;
        lve::VariableId v;
        while (oin >> v) vars.push_back(v);
        if (cfg.order_direction == "last-to-first")
            std::reverse(vars.begin(), vars.end());
        order = std::move(vars);
    }

    lve::InferenceResult r = lve::run(m, queries, evidence, cfg.params,
                                      order ? &*order : nullptr);

    if (cfg.marginals_out.empty()) {
        write_marginals(std::cout, r, m);
    } else {
        auto out = open_output(cfg.marginals_out);
        write_marginals(out, r, m);
    }
    json stats = stats_json(r, cfg.params);

    if (!cfg.compare_mode.empty()) {
        std::vector<std::vector<double>> reference;
        if (cfg.compare_mode == "brute") {
            lve::Model reduced = lve::apply_evidence(m, evidence, queries);
            reference = lve::brute_force_marginals(reduced, queries);
        } else {
            lve::EngineParams ground = cfg.params;
            ground.use_bisimulation = false;
            ground.epsilon = 0.0;
            ground.path_length = lve::kInfinitePathLength;
            reference = lve::run(m, queries, evidence, ground,
                                 order ? &*order : nullptr)
                            .marginals;
        }
        lve::ErrorReport rep = lve::compare(r, reference, queries);
        stats["compare"] = {{"reference", cfg.compare_mode},
                            {"incorrect", rep.incorrect},
                            {"total_entries", rep.total_entries},
                            {"fraction", rep.fraction},
                            {"max_abs_error", rep.max_abs_error}};
    }

    if (cfg.stats_out.empty()) {
        std::cerr << stats.dump(2) << '\n';
    } else {
        auto out = open_output(cfg.stats_out);
        out << stats.dump(2) << '\n';
    }
    return 0;
}

struct GenerateConfig {
    lve::GeneratorConfig gen;
    std::string layers_csv = "10,5";
    std::string model_out = "model.uai";
    std::string queries_out = "queries.txt";
};

int cmd_generate(GenerateConfig& cfg) {
    cfg.gen.layer_sizes = parse_list<int>(cfg.layers_csv, [](const std::string& s) {
        return std::stoi(s);
    });
    auto [m, queries] = lve::generate_layered_bn(cfg.gen);
    {
        auto out = open_output(cfg.model_out);
        lve::save_model(m, out);
    }
    {
        auto out = open_output(cfg.queries_out);
        for (std::size_t i = 0; i < queries.size(); ++i)
            out << queries[i] << (i + 1 < queries.size() ? " " : "\n");
    }
    // structural summary: distinct prior tables and per-layer CPT sharing
    int priors = cfg.gen.layer_sizes[0];
    int distinct_priors = 0;
    for (int i = 0; i < priors; ++i) {
        bool fresh = true;
        for (int j = 0; j < i && fresh; ++j)
            if (lve::is_shared(m.factors[i], m.factors[j])) fresh = false;
        if (fresh) ++distinct_priors;
    }
    std::cout << "variables " << m.num_vars() << '\n'
              << "factors " << m.factors.size() << '\n'
              << "distinct_prior_tables " << distinct_priors << '\n';
    int offset = priors;
    for (std::size_t l = 1; l < cfg.gen.layer_sizes.size(); ++l) {
        int count = cfg.gen.layer_sizes[l];
        int distinct = 0;
        for (int i = 0; i < count; ++i) {
            bool fresh = true;
            for (int j = 0; j < i && fresh; ++j)
                if (lve::is_shared(m.factors[offset + i], m.factors[offset + j]))
                    fresh = false;
            if (fresh) ++distinct;
        }
        std::cout << "layer_" << l << "_distinct_cpt_tables " << distinct << '\n';
        offset += count;
    }
    return 0;
}

struct BenchConfig {
    GenerateConfig gen;
    std::string path_lengths_csv = "inf";
    std::string epsilons_csv;
    int reps = 3;
    std::string out_path;
};

int cmd_bench(BenchConfig& cfg) {
    cfg.gen.gen.layer_sizes =
        parse_list<int>(cfg.gen.layers_csv,
                        [](const std::string& s) { return std::stoi(s); });
    auto [m, queries] = lve::generate_layered_bn(cfg.gen.gen);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!cfg.out_path.empty()) {
        file = open_output(cfg.out_path);
        out = &file;
    }
    *out << "sweep,value,reps,mean_wall_ms,mults,adds,blocks,"
            "intermediate_factors,incorrect,error_fraction,max_abs_error\n";

    lve::EngineParams exact;
    lve::InferenceResult reference = lve::run(m, queries, {}, exact);

    auto row = [&](const std::string& sweep, const std::string& value,
                   const lve::EngineParams& params) {
        double total_ms = 0.0;
        lve::InferenceResult r;
        for (int i = 0; i < cfg.reps; ++i) {
            r = lve::run(m, queries, {}, params);
            total_ms += r.stats.wall_ms;
        }
        lve::ErrorReport rep = lve::compare(r, reference.marginals, queries);
        out->precision(17);
        *out << sweep << ',' << value << ',' << cfg.reps << ','
             << total_ms / cfg.reps << ',' << r.stats.ops.mults << ','
             << r.stats.ops.adds << ',' << r.stats.blocks << ','
             << r.stats.intermediate_factors << ',' << rep.incorrect << ','
             << rep.fraction << ',' << rep.max_abs_error << '\n';
    };

    for (int pl : parse_list<int>(cfg.path_lengths_csv, parse_path_length)) {
        lve::EngineParams p;
        p.path_length = pl;
        row("path_length", pl == lve::kInfinitePathLength ? "inf" : std::to_string(pl), p);
    }
    for (double eps : parse_list<double>(cfg.epsilons_csv, +[](const std::string& s) {
             return std::stod(s);
         })) {
        lve::EngineParams p;
        p.epsilon = eps;
        row("epsilon", std::to_string(eps), p);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lifted variable-elimination engine for discrete graphical models"};
    app.require_subcommand(1);

    InferConfig ic;
    std::string path_length = "inf";
    std::string minibuckets = "off";
    auto* infer = app.add_subcommand("infer", "Compute all query marginals");
    infer->add_option("--model", ic.model_path, "Model file")->required();
    infer->add_option("--queries", ic.queries_path, "Query variable file")->required();
    infer->add_option("--evidence", ic.evidence_path, "Evidence file");
    infer->add_option("--order", ic.order_path, "Elimination order file");
    infer->add_option("--order-direction", ic.order_direction,
                      "Order file convention")
        ->check(CLI::IsMember({"last-to-first", "first-to-last"}));
    auto* lift = infer->add_flag("--lift", "Enable bisimulation lifting (default)");
    infer->add_flag("--no-lift", "Ground variable elimination")->excludes(lift);
    infer->add_option("--path-length", path_length,
                      "Bisimulation path length, integer or 'inf'");
    infer->add_option("--epsilon", ic.params.epsilon, "Factor-binning threshold");
    infer->add_option("--minibuckets", minibuckets, "off | args:<i> | merge:<m>");
    infer->add_option("--marginals-out", ic.marginals_out, "Marginal output path");
    infer->add_option("--stats-out", ic.stats_out, "Stats output path");
    infer->add_option("--compare", ic.compare_mode, "Error report reference")
        ->check(CLI::IsMember({"brute", "ground"}));

    GenerateConfig gc;
    auto* gen = app.add_subcommand("generate", "Generate a layered synthetic model");
    gen->add_option("--layers", gc.layers_csv, "Comma-separated layer sizes");
    gen->add_option("--domain", gc.gen.domain_size, "Variable domain size");
    gen->add_option("--parents", gc.gen.parents_per_child, "Parents per child");
    gen->add_option("--period", gc.gen.prior_share_period,
                    "Variables sharing one prior table");
    gen->add_option("--fanout", gc.gen.max_parent_fanout, "Max children per parent");
    gen->add_option("--noise", gc.gen.noise_std, "Gaussian table noise std dev");
    gen->add_option("--seed", gc.gen.seed, "RNG seed");
    gen->add_option("--model-out", gc.model_out, "Model output path");
    gen->add_option("--queries-out", gc.queries_out, "Query output path");

    BenchConfig bc;
    auto* bench = app.add_subcommand("bench", "Sweep parameters on a generated model");
    bench->add_option("--layers", bc.gen.layers_csv, "Comma-separated layer sizes");
    bench->add_option("--domain", bc.gen.gen.domain_size, "Variable domain size");
    bench->add_option("--parents", bc.gen.gen.parents_per_child, "Parents per child");
    bench->add_option("--period", bc.gen.gen.prior_share_period,
                      "Variables sharing one prior table");
    bench->add_option("--fanout", bc.gen.gen.max_parent_fanout,
                      "Max children per parent");
    bench->add_option("--noise", bc.gen.gen.noise_std, "Gaussian table noise std dev");
    bench->add_option("--seed", bc.gen.gen.seed, "RNG seed");
    bench->add_option("--path-lengths", bc.path_lengths_csv,
                      "Comma-separated path lengths ('' to skip)");
    bench->add_option("--epsilons", bc.epsilons_csv,
                      "Comma-separated epsilon values ('' to skip)");
    bench->add_option("--reps", bc.reps, "Repetitions per configuration")
        ->check(CLI::PositiveNumber);
    bench->add_option("--out", bc.out_path, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (infer->parsed()) {
            ic.params.use_bisimulation = infer->count("--no-lift") == 0;
            ic.params.path_length = parse_path_length(path_length);
            parse_minibuckets(minibuckets, ic.params);
            return cmd_infer(ic);
        }
        if (gen->parsed()) return cmd_generate(gc);
        return cmd_bench(bc);
    } catch (const lve::ModelError& e) {
        std::cerr << "error [parse]: " << e.what() << '\n';
    } catch (const lve::GeneratorError& e) {
        std::cerr << "error [generate]: " << e.what() << '\n';
    } catch (const lve::GraphError& e) {
        std::cerr << "error [build]: " << e.what() << '\n';
    } catch (const lve::PartitionError& e) {
        std::cerr << "error [partition]: " << e.what() << '\n';
    } catch (const lve::EngineError& e) {
        std::cerr << "error [evaluate]: " << e.what() << '\n';
    } catch (const lve::FactorError& e) {
        std::cerr << "error [evaluate]: " << e.what() << '\n';
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error [parse]: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 1;
}
