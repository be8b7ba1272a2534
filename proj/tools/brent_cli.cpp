#include "brent/algorithms.hpp"
#include "brent/batch.hpp"
#include "brent/brent_system.hpp"
#include "brent/io.hpp"
#include "brent/rank.hpp"
#include "brent/structure.hpp"
#include "brent/symmetry.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

namespace {

using namespace brent;

RankResult compute_rank(const SparseRationalMatrix& jac, const std::string& method, int primes,
                        const std::string& tol, std::uint64_t seed) {
    const RankMethod m = rank_method_from_string(method);
    switch (m) {
        case RankMethod::exact: return rank_exact(jac);
        case RankMethod::modular: return rank_modular(jac, primes, seed);
        default: {
            TolerancePolicy policy = TolerancePolicy::automatic();
            if (tol != "auto") {
                try {
                    policy = TolerancePolicy::fixed(std::stod(tol));
                } catch (const std::exception&) {
                    throw ValueError("--tol must be 'auto' or a floating point value");
                }
            }
            return rank_numeric(jac, policy);
        }
    }
}

nlohmann::ordered_json certificate_json(const RankResult& result) {
    nlohmann::ordered_json c;
    if (const auto* exact = std::get_if<ExactCertificate>(&result.certificate)) {
        c["pivot_columns"] = exact->pivot_columns;
    } else if (const auto* modular = std::get_if<ModularCertificate>(&result.certificate)) {
        c["primes"] = modular->primes;
        c["per_prime_ranks"] = modular->per_prime_ranks;
    } else if (const auto* numeric = std::get_if<NumericCertificate>(&result.certificate)) {
        c["tolerance"] = numeric->tolerance;
        c["gap_ratio"] = numeric->gap_ratio;
        c["spectrum_head"] = std::vector<double>(
            numeric->spectrum.begin(),
            numeric->spectrum.begin() + std::min<std::size_t>(numeric->spectrum.size(), 8));
    }
    return c;
}

int run_verify(const std::string& file) {
    const Algorithm q = parse_algorithm_file(file);
    const ResidualVector res = residual(q);
    Index violated = 0;
    for (Index i = 0; i < res.size(); ++i)
        if (!res(i).is_zero()) ++violated;
    if (violated == 0) {
        std::cout << "solution: residual is exactly zero for format " << q.format.str()
                  << " with " << q.length() << " terms\n";
        return 0;
    }
    std::cout << "not a solution: " << violated << " of " << res.size()
              << " equations have nonzero residual\n";
    return 1;
}

int run_rank(const std::string& file, const std::string& method, int primes,
             const std::string& tol, std::uint64_t seed) {
    const Algorithm q = parse_algorithm_file(file);
    const RankResult result = compute_rank(jacobian(q), method, primes, tol, seed);
    nlohmann::ordered_json j;
    j["rank"] = result.rank;
    j["method"] = to_string(result.method);
    j["certificate"] = certificate_json(result);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_bounds(const std::string& file) {
    const Algorithm q = parse_algorithm_file(file);
    const BoundReport report = bound_report(q, rank_exact(jacobian(q)));
    std::cout << bound_report_to_json(report) << "\n";
    return 0;
}

int run_props(const std::string& file) {
    const Algorithm q = parse_algorithm_file(file);
    nlohmann::ordered_json j;
    for (FactorRole role : {FactorRole::U, FactorRole::V, FactorRole::W}) {
        const std::string name = to_string(role);
        try {
            j["d_property"][name] =
                nlohmann::ordered_json::parse(d_property_verdict_to_json(d_property_check(q, role)));
        } catch (const DeficientSpan& e) {
            j["d_property"][name] = {{"status", "deficient_span"}, {"detail", e.what()}};
        }
        j["weak_d"][name] = weak_d_check(q, role);
        j["unit_basis_containment"]["literal"][name] =
            unit_basis_containment(q, role, ContainmentMode::literal);
        j["unit_basis_containment"]["up_to_scalar"][name] =
            unit_basis_containment(q, role, ContainmentMode::up_to_scalar);
    }
    j["d_property"]["algorithm"] = to_string(d_property_check(q).status);
    j["weak_d"]["algorithm"] = weak_d_check(q);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_transform(const std::string& file, const std::string& action, std::uint64_t seed) {
    const Algorithm q = parse_algorithm_file(file);
    std::mt19937_64 rng(seed);
    GroupElement g = TriadSymmetry{};
    if (action == "sandwich")
        g = random_sandwich(rng, q.format);
    else if (action == "scale")
        g = random_term_scale(rng, q.length());
    else if (action == "permute")
        g = random_term_permutation(rng, q.length());
    else if (action == "cyclic")
        g = TriadSymmetry{TriadSymmetry::Kind::cyclic};
    else if (action == "transpose")
        g = TriadSymmetry{TriadSymmetry::Kind::transpose};
    else
        throw ValueError("unknown action: " + action);
    const Algorithm image = apply_element(g, q);
    std::cerr << "applied " << group_element_to_json(g) << "\n";
    std::cout << serialize_algorithm(image, AlgorithmFormat::json);
    return 0;
}

int run_orbit(const std::string& file, int samples, std::uint64_t seed) {
    const Algorithm q = parse_algorithm_file(file);
    const OrbitExperimentReport report = orbit_rank_experiment(q, samples, seed);
    nlohmann::ordered_json j;
    j["base_rank"] = report.base_rank;
    j["all_equal"] = report.all_equal;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const OrbitSample& s : report.samples)
        rows.push_back({{"element", nlohmann::ordered_json::parse(s.element)}, {"rank", s.rank}});
    j["samples"] = std::move(rows);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_batch(const std::string& dir, const std::string& out, int jobs, const std::string& method,
              int primes, std::uint64_t seed) {
    BatchOptions options;
    options.method = rank_method_from_string(method);
    options.prime_count = primes;
    options.seed = seed;
    options.jobs = jobs;
    const BatchReport report = batch_analyze(dir, options);
    std::ofstream sink(out, std::ios::binary);
    if (!sink) throw ValueError("cannot open output file: " + out);
    sink << batch_report_to_json(report);
    std::cout << report.records.size() << " files, " << report.parsed_count << " parsed, "
              << report.solution_count << " solutions, weak-D " << report.weak_d_count
              << "; report written to " << out << "\n";
    return 0;
}

int run_report(const std::string& path, const std::string& format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValueError("cannot open report: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const BatchReport report = batch_report_from_json(text);
    std::cout << histogram_report(report, report_format_from_string(format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for tensor decompositions of the matrix multiplication tensor"};
    app.require_subcommand(1);

    std::string file, method = "exact", batch_method = "modular", tol = "auto";
    std::string action, dir, out, format;
    int primes = 3, samples = 0, jobs = 1;
    std::uint64_t seed = 0;

    CLI::App* verify = app.add_subcommand("verify", "check the Brent equations exactly");
    verify->add_option("file", file)->required();

    CLI::App* rank = app.add_subcommand("rank", "Jacobian rank at the algorithm");
    rank->add_option("file", file)->required();
    rank->add_option("--method", method)->check(CLI::IsMember({"exact", "modular", "numeric"}));
    rank->add_option("--primes", primes);
    rank->add_option("--tol", tol);
    rank->add_option("--seed", seed);

    CLI::App* bounds = app.add_subcommand("bounds", "dimension bounds and gaps");
    bounds->add_option("file", file)->required();

    CLI::App* props = app.add_subcommand("props", "D-property and weak-D-property checks");
    props->add_option("file", file)->required();

    CLI::App* transform = app.add_subcommand("transform", "apply an isotropy group element");
    transform->add_option("file", file)->required();
    transform->add_option("--action", action)
        ->required()
        ->check(CLI::IsMember({"sandwich", "scale", "permute", "cyclic", "transpose"}));
    transform->add_option("--seed", seed);

    CLI::App* orbit = app.add_subcommand("orbit", "rank statistics over random sandwiches");
    orbit->add_option("file", file)->required();
    orbit->add_option("--samples", samples)->required();
    orbit->add_option("--seed", seed)->required();

    CLI::App* batch = app.add_subcommand("batch", "analyze a directory of algorithm files");
    batch->add_option("dir", dir)->required();
    batch->add_option("--out", out)->required();
    batch->add_option("--jobs", jobs);
    batch->add_option("--method", batch_method)
        ->check(CLI::IsMember({"exact", "modular", "numeric"}));
    batch->add_option("--primes", primes);
    batch->add_option("--seed", seed);

    CLI::App* report = app.add_subcommand("report", "render a batch report histogram");
    report->add_option("path", file)->required();
    report->add_option("--format", format)
        ->required()
        ->check(CLI::IsMember({"csv", "json", "table"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) return run_verify(file);
        if (rank->parsed()) return run_rank(file, method, primes, tol, seed);
        if (bounds->parsed()) return run_bounds(file);
        if (props->parsed()) return run_props(file);
        if (transform->parsed()) return run_transform(file, action, seed);
        if (orbit->parsed()) return run_orbit(file, samples, seed);
        if (batch->parsed()) return run_batch(dir, out, jobs, batch_method, primes, seed);
        if (report->parsed()) return run_report(file, format);
    } catch (const NotASolution& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
