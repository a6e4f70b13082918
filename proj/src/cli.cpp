#include "mmsbkit/cli.hpp"

#include "mmsbkit/error.hpp"
#include "mmsbkit/evaluation.hpp"
#include "mmsbkit/io.hpp"
#include "mmsbkit/recovery.hpp"
#include "mmsbkit/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mmsb {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Sweep config

[[noreturn]] void bad_config(const std::string& source, const std::string& what) {
    throw InvalidInput(source + ": " + what);
}

void reject_unknown_keys(const Json& object, std::initializer_list<std::string_view> allowed, const std::string& source,
                         const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            bad_config(source, "unknown key '" + key + "' in " + where);
        }
    }
}

Index json_index(const Json& v, const std::string& source, const std::string& key) {
    if (!v.is_number_integer()) bad_config(source, "'" + key + "' must hold integers");
    return v.get<Index>();
}

double json_double(const Json& v, const std::string& source, const std::string& key) {
    if (!v.is_number()) bad_config(source, "'" + key + "' must hold numbers");
    return v.get<double>();
}

// A scalar or a non-empty array of scalars.
template <typename F>
auto json_list(const Json& v, const std::string& source, const std::string& key, F convert) {
    std::vector<decltype(convert(v))> out;
    if (v.is_array()) {
        if (v.empty()) bad_config(source, "'" + key + "' must not be empty");
        for (const auto& e : v) out.push_back(convert(e));
    } else {
        out.push_back(convert(v));
    }
    return out;
}

std::optional<double> json_tau(const Json& v, const std::string& source) {
    if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
    if (!v.is_number()) bad_config(source, "'tau' entries must be \"auto\" or numbers");
    return v.get<double>();
}

MixingProfile parse_profile(std::string_view name, const std::string& source) {
    if (name == "four-profiles") return MixingProfile::FourProfiles;
    if (name == "uniform") return MixingProfile::Uniform;
    if (name == "random-half") return MixingProfile::RandomHalf;
    bad_config(source, "unknown profile '" + std::string(name) + "'");
}

ConnectivitySpec parse_connectivity(const Json& v, const std::string& source) {
    if (!v.is_object()) bad_config(source, "'connectivity' must be an object");
    ConnectivitySpec spec;
    const std::string kind = v.contains("kind") && v["kind"].is_string() ? v["kind"].get<std::string>() : "";
    if (kind == "constant") {
        reject_unknown_keys(v, {"kind", "diagonal", "off_diagonal"}, source, "connectivity");
        spec.kind = ConnectivitySpec::Kind::Constant;
        if (v.contains("diagonal")) spec.diagonal = json_double(v["diagonal"], source, "diagonal");
        if (v.contains("off_diagonal")) spec.off_diagonal = json_double(v["off_diagonal"], source, "off_diagonal");
    } else if (kind == "lambda-sweep") {
        reject_unknown_keys(v, {"kind", "index"}, source, "connectivity");
        spec.kind = ConnectivitySpec::Kind::LambdaSweep;
        if (!v.contains("index")) bad_config(source, "lambda-sweep connectivity needs 'index'");
        spec.index = static_cast<int>(json_index(v["index"], source, "index"));
    } else if (kind == "custom") {
        reject_unknown_keys(v, {"kind", "matrix"}, source, "connectivity");
        spec.kind = ConnectivitySpec::Kind::Custom;
        const Json& m = v.contains("matrix") ? v["matrix"] : Json();
        if (!m.is_array() || m.empty()) bad_config(source, "custom connectivity needs a non-empty 'matrix'");
        const Index k = static_cast<Index>(m.size());
        spec.custom.resize(k, k);
        for (Index i = 0; i < k; ++i) {
            const Json& row = m[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Index>(row.size()) != k) bad_config(source, "'matrix' must be square");
            for (Index j = 0; j < k; ++j) spec.custom(i, j) = json_double(row[static_cast<std::size_t>(j)], source, "matrix");
        }
    } else {
        bad_config(source, "connectivity 'kind' must be constant, lambda-sweep or custom");
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Shared helpers

std::optional<double> parse_tau_flag(const std::string& text) {
    if (text == "auto") return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !(value >= 0.0)) {
        throw CLI::ValidationError("--tau", "expected 'auto' or a nonnegative number, got '" + text + "'");
    }
    return value;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path + " for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error("write to " + path + " failed");
}

std::string optional_text(const std::optional<Index>& v) { return v ? std::to_string(*v) : std::string(); }
std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

// ---------------------------------------------------------------------------
// Subcommands

struct GenerateArgs {
    Index n = 0;
    Index k = 3;
    Index n0 = 0;
    std::string profile = "four-profiles";
    double p_diag = 1.0;
    double p_off = 0.5;
    int p_index = 0;
    double rho = 1.0;
    std::uint64_t seed = 1;
    std::string out;
};

int run_generate(const GenerateArgs& a, bool quiet, std::ostream& err) {
    const std::string source = "--profile";
    const MixingProfile profile = parse_profile(a.profile, source);
    const Matrix raw = a.p_index > 0 ? lambda_sweep_connectivity(a.p_index) : constant_connectivity(a.k, a.p_diag, a.p_off);
    if (raw.rows() != a.k) throw InvalidInput("--p-index selects a 3 x 3 connectivity matrix; use --k 3");
    const BlockModel block = BlockModel::from_unnormalized(raw, a.rho);
    const MembershipMatrix pi = planted_memberships(a.n, a.k, a.n0, profile, a.seed);
    const Graph graph = sample_adjacency(build_population_matrix(pi, block), a.seed);

    write_edge_list(graph, a.out + ".edges.txt");
    write_matrix_csv(pi.matrix(), std::filesystem::path(a.out + ".pi.csv"));
    if (!quiet) {
        const NetworkStats s = network_stats(graph, &pi);
        err << "generated n=" << a.n << " K=" << a.k << " edges=" << graph.edge_count()
            << " avg_degree=" << s.average_degree << " pure=" << (a.n - pi.mixed_count()) << "\n"
            << "wrote " << a.out << ".edges.txt and " << a.out << ".pi.csv\n";
    }
    return kExitOk;
}

struct ClusterArgs {
    std::string edges;
    Index k = 0;
    std::optional<Index> n;
    std::vector<std::string> methods{"srsc"};
    std::string tau = "auto";
    std::uint64_t seed = KMeansOptions{}.seed;
    std::string out;
};

int run_cluster(const ClusterArgs& a, bool quiet, std::ostream& err) {
    const std::optional<double> tau_flag = parse_tau_flag(a.tau);
    std::vector<Method> methods;
    for (const auto& name : a.methods) {
        const Method m = *parse_method(name);
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
    }

    const Graph graph = read_edge_list(a.edges, a.n);
    const double tau = tau_flag.value_or(default_tau(graph.n()));
    const RegularizedLaplacian lap = regularized_laplacian(graph, tau);
    const SpectralBasis basis = leading_eigenpairs(lap, a.k);
    RecoveryOptions options;
    options.svm_cone.kmeans.seed = a.seed;

    OrderedJson summary;
    summary["edges"] = a.edges;
    summary["n"] = graph.n();
    summary["k"] = a.k;
    summary["tau"] = tau;
    summary["tau_auto"] = !tau_flag.has_value();
    summary["eigenvalues"] = std::vector<double>(basis.values.data(), basis.values.data() + basis.values.size());
    summary["runs"] = OrderedJson::array();
    for (Method m : methods) {
        const RecoveryResult r = recover_from_basis(lap, basis, m, options);
        const std::string file = a.out + "." + std::string(to_string(m)) + ".csv";
        write_matrix_csv(r.pi_hat.matrix(), std::filesystem::path(file));
        OrderedJson run;
        run["method"] = to_string(m);
        run["corner_method"] = to_string(r.corners.method);
        run["corners"] = std::vector<Index>(r.corners.indices.begin(), r.corners.indices.end());
        run["clipped_rows"] = r.clipped_rows;
        run["zero_row_fallbacks"] = r.zero_row_fallbacks;
        run["memberships"] = file;
        summary["runs"].push_back(std::move(run));
        if (!quiet) {
            err << to_string(m) << ": corners";
            for (Index c : r.corners.indices) err << ' ' << c;
            err << ", clipped rows " << r.clipped_rows << ", zero-row fallbacks " << r.zero_row_fallbacks << ", wrote "
                << file << "\n";
        }
    }
    write_text_file(a.out + ".summary.json", summary.dump(2) + "\n");
    if (!quiet) {
        err << "n=" << graph.n() << " edges=" << graph.edge_count() << " tau=" << format_double(tau)
            << (tau_flag ? "" : " (auto)") << "\n";
    }
    return kExitOk;
}

struct EvaluateArgs {
    std::string estimate;
    std::string truth;
    bool normalize = false;
};

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
    const MembershipMatrix pi_hat = read_memberships(a.estimate, false);
    const MembershipMatrix pi = read_memberships(a.truth, a.normalize);
    const ErrorReport report = mixed_hamming_error(pi_hat, pi);
    out << "error";
    for (std::size_t c = 0; c < report.permutation.size(); ++c) out << ",perm_" << c;
    out << "\n" << format_double(report.error);
    for (int p : report.permutation) out << ',' << p;
    out << "\n";
    return kExitOk;
}

struct SweepArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<unsigned> threads;
};

int run_sweep_command(const SweepArgs& a, bool quiet, std::ostream& out, std::ostream& err) {
    SweepConfig config = parse_sweep_config(read_text_file(a.config), a.config);
    if (a.seed) config.seed = *a.seed;
    if (a.reps) config.repetitions = *a.reps;
    if (a.threads) config.threads = *a.threads;
    const SweepResult result = run_sweep(config);
    if (a.out.empty() || a.out == "-") {
        write_sweep_csv(result, out);
    } else {
        write_sweep_csv(result, std::filesystem::path(a.out));
    }
    if (!quiet) {
        std::size_t failures = 0;
        for (const auto& p : result.points) {
            failures += static_cast<std::size_t>(p.failures);
            if (!p.problem.empty()) {
                err << "n=" << p.point.n << " K=" << p.point.k << " n0=" << p.point.n0 << " rho=" << p.point.rho
                    << " " << to_string(p.point.method) << ": " << p.problem << "\n";
            }
        }
        err << result.points.size() << " rows, " << config.repetitions << " repetitions per point, " << failures
            << " failed repetitions\n";
    }
    return kExitOk;
}

struct StatsArgs {
    std::string edges;
    std::optional<Index> n;
    std::string memberships;
    bool normalize = false;
};

int run_stats(const StatsArgs& a, std::ostream& out) {
    const Graph graph = read_edge_list(a.edges, a.n);
    std::optional<MembershipMatrix> pi;
    if (!a.memberships.empty()) pi = read_memberships(a.memberships, a.normalize);
    const NetworkStats s = network_stats(graph, pi ? &*pi : nullptr);
    out << "n,K,avg_degree,density,overlap\n"
        << s.n << ',' << optional_text(s.k) << ',' << format_double(s.average_degree) << ','
        << format_double(s.density) << ',' << optional_text(s.overlap) << "\n";
    return kExitOk;
}

}  // namespace

SweepConfig parse_sweep_config(std::string_view json_text, const std::string& source) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        bad_config(source, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) bad_config(source, "top level must be an object");
    reject_unknown_keys(doc,
                        {"n", "k", "n0", "rho", "tau", "profile", "connectivity", "methods", "repetitions", "seed",
                         "threads"},
                        source, "sweep config");

    SweepConfig c;
    auto as_index = [&](const char* key) {
        return [&, key](const Json& v) { return json_index(v, source, key); };
    };
    if (doc.contains("n")) c.n = json_list(doc["n"], source, "n", as_index("n"));
    if (doc.contains("k")) c.k = json_list(doc["k"], source, "k", as_index("k"));
    if (doc.contains("n0")) c.n0 = json_list(doc["n0"], source, "n0", as_index("n0"));
    if (doc.contains("rho")) {
        c.rho = json_list(doc["rho"], source, "rho", [&](const Json& v) { return json_double(v, source, "rho"); });
    }
    if (doc.contains("tau")) c.tau = json_list(doc["tau"], source, "tau", [&](const Json& v) { return json_tau(v, source); });
    if (doc.contains("profile")) {
        if (!doc["profile"].is_string()) bad_config(source, "'profile' must be a string");
        c.profile = parse_profile(doc["profile"].get<std::string>(), source);
    }
    if (doc.contains("connectivity")) c.connectivity = parse_connectivity(doc["connectivity"], source);
    if (doc.contains("methods")) {
        c.methods = json_list(doc["methods"], source, "methods", [&](const Json& v) {
            if (!v.is_string()) bad_config(source, "'methods' must hold strings");
            const auto m = parse_method(v.get<std::string>());
            if (!m || is_ideal_method(*m)) bad_config(source, "unknown method '" + v.get<std::string>() + "'");
            return *m;
        });
    }
    if (doc.contains("repetitions")) {
        const Index r = json_index(doc["repetitions"], source, "repetitions");
        if (r < 1) bad_config(source, "'repetitions' must be at least 1");
        c.repetitions = static_cast<int>(r);
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) bad_config(source, "'seed' must be a nonnegative integer");
        c.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("threads")) {
        if (!doc["threads"].is_number_unsigned()) bad_config(source, "'threads' must be a nonnegative integer");
        c.threads = doc["threads"].get<unsigned>();
    }
    return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Regularized-Laplacian spectral clustering for mixed-membership networks", "mmsbkit"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Suppress the human-readable summary on standard error");
    app.fallthrough();

    const std::vector<std::string> method_names{"srsc", "crsc", "srsc-eq", "crsc-eq"};
    const std::vector<std::string> profile_names{"four-profiles", "uniform", "random-half"};

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Sample a network and its ground-truth memberships");
    generate->add_option("--n", gen.n, "Number of nodes")->required()->check(CLI::Range(Index{2}, Index{1} << 40));
    generate->add_option("--k", gen.k, "Number of communities")->capture_default_str()->check(CLI::PositiveNumber);
    generate->add_option("--n0", gen.n0, "Pure nodes per community")->required()->check(CLI::PositiveNumber);
    generate->add_option("--profile", gen.profile, "Mixing profile of the mixed nodes")
        ->capture_default_str()
        ->check(CLI::IsMember(profile_names));
    generate->add_option("--p-diag", gen.p_diag, "Connectivity diagonal")->capture_default_str()->check(CLI::NonNegativeNumber);
    generate->add_option("--p-off", gen.p_off, "Connectivity off-diagonal")->capture_default_str()->check(CLI::NonNegativeNumber);
    generate->add_option("--p-index", gen.p_index, "Use the 3 x 3 family with (2,3) entry 0.075 * i")
        ->check(CLI::Range(1, 1000));
    generate->add_option("--rho", gen.rho, "Sparsity parameter")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    generate->add_option("--out", gen.out, "Output prefix")->required();

    ClusterArgs clu;
    auto* cluster = app.add_subcommand("cluster", "Estimate memberships from an edge list");
    cluster->add_option("--edges", clu.edges, "Edge-list file")->required();
    cluster->add_option("--k", clu.k, "Number of communities")->required()->check(CLI::PositiveNumber);
    cluster->add_option("--n", clu.n, "Node count (default: file header or 1 + largest id)")
        ->check(CLI::PositiveNumber);
    cluster->add_option("--method", clu.methods, "One or more of srsc, crsc, srsc-eq, crsc-eq")
        ->capture_default_str()
        ->check(CLI::IsMember(method_names));
    cluster->add_option("--tau", clu.tau, "Regularizer: 'auto' (0.1 ln n) or a value")->capture_default_str();
    cluster->add_option("--seed", clu.seed, "k-means seed of the cone pipelines")->capture_default_str();
    cluster->add_option("--out", clu.out, "Output prefix")->required();

    EvaluateArgs eva;
    auto* evaluate = app.add_subcommand("evaluate", "Mixed-Hamming error of an estimate against ground truth");
    evaluate->add_option("--estimate", eva.estimate, "Estimated membership CSV")->required();
    evaluate->add_option("--truth", eva.truth, "Ground-truth membership CSV")->required();
    evaluate->add_flag("--normalize", eva.normalize, "Divide each ground-truth row by its l1 norm");

    SweepArgs swe;
    auto* sweep = app.add_subcommand("sweep", "Run a seeded parameter sweep from a JSON grid");
    sweep->add_option("--config", swe.config, "JSON grid config")->required();
    sweep->add_option("--out", swe.out, "Output CSV (default: standard output)");
    sweep->add_option("--seed", swe.seed, "Override the base seed");
    sweep->add_option("--reps", swe.reps, "Override the repetition count")->check(CLI::PositiveNumber);
    sweep->add_option("--threads", swe.threads, "Worker threads (default: MMSBKIT_THREADS or all cores)");

    StatsArgs sta;
    auto* stats = app.add_subcommand("stats", "Print n, K, average degree, density and overlap as CSV");
    stats->add_option("--edges", sta.edges, "Edge-list file")->required();
    stats->add_option("--n", sta.n, "Node count")->check(CLI::PositiveNumber);
    stats->add_option("--memberships", sta.memberships, "Membership CSV for K and overlap");
    stats->add_flag("--normalize", sta.normalize, "Divide each membership row by its l1 norm");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (generate->parsed()) return run_generate(gen, quiet, err);
        if (cluster->parsed()) return run_cluster(clu, quiet, err);
        if (evaluate->parsed()) return run_evaluate(eva, out);
        if (sweep->parsed()) return run_sweep_command(swe, quiet, out, err);
        if (stats->parsed()) return run_stats(sta, out);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace mmsb
