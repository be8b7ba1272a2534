#include "brent/batch.hpp"

#include "brent/brent_system.hpp"
#include "brent/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

namespace brent {

namespace {

std::uint64_t file_seed(std::uint64_t base, const std::string& name) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h ^ base;
}

constexpr std::array<FactorRole, 3> kRoles{FactorRole::U, FactorRole::V, FactorRole::W};

FileRecord analyze_file(const std::filesystem::path& path, const BatchOptions& options) {
    FileRecord rec;
    rec.filename = path.filename().string();
    rec.rank_method = options.method;
    try {
        const Algorithm q = parse_algorithm_file(path);
        rec.parsed = true;
        rec.is_solution = is_solution(q);
        if (!rec.is_solution) return rec;

        const SparseRationalMatrix jac = jacobian(q);
        RankResult rank;
        switch (options.method) {
            case RankMethod::exact: rank = rank_exact(jac); break;
            case RankMethod::numeric: rank = rank_numeric(jac); break;
            default:
                rank = rank_modular(jac, options.prime_count,
                                    file_seed(options.seed, rec.filename));
                break;
        }
        rec.rank = rank.rank;
        rec.rank_method = rank.method;
        rec.bounds = bound_report(q, rank);
        rec.d_property = rec.bounds.d_property;
        rec.weak_d = rec.bounds.weak_d;
        for (std::size_t i = 0; i < kRoles.size(); ++i) {
            try {
                rec.d_property_roles[i] = d_property_check(q, kRoles[i]).status;
            } catch (const DeficientSpan&) {
                rec.d_property_roles[i] = DPropertyStatus::proven_no_for_canonical_basis;
            }
            rec.weak_d_roles[i] = weak_d_check(q, kRoles[i]);
        }
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

DPropertyStatus d_property_status_from_string(const std::string& name) {
    if (name == "proven_yes") return DPropertyStatus::proven_yes;
    if (name == "proven_no_for_canonical_basis")
        return DPropertyStatus::proven_no_for_canonical_basis;
    if (name == "unknown") return DPropertyStatus::unknown;
    throw ValueError("unknown D-property status: " + name);
}

}  // namespace

BatchReport batch_analyze(const std::filesystem::path& directory, const BatchOptions& options) {
    if (!std::filesystem::is_directory(directory))
        throw ValueError("not a directory: " + directory.string());
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(directory))
        if (entry.is_regular_file()) paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });

    BatchReport report;
    report.records.resize(paths.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= paths.size()) return;
            report.records[i] = analyze_file(paths[i], options);
        }
    };
    const int jobs = std::max(1, options.jobs);
    if (jobs == 1 || paths.size() < 2) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const std::size_t spawn = std::min(static_cast<std::size_t>(jobs), paths.size());
        for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::map<Index, HistogramRow> rows;
    for (const FileRecord& rec : report.records) {
        if (rec.parsed) ++report.parsed_count;
        if (!rec.is_solution) continue;
        ++report.solution_count;
        if (rec.weak_d) ++report.weak_d_count;
        auto [it, fresh] = rows.try_emplace(rec.rank, HistogramRow{rec.rank, rec.bounds.u, 0});
        (void)fresh;
        ++it->second.count;
    }
    for (auto& [rank, row] : rows) report.histogram.push_back(row);
    return report;
}

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    if (name == "table") return ReportFormat::table;
    throw ValueError("unknown report format: " + name);
}

std::string histogram_report(const BatchReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::csv: {
            std::string out = "rank,u,count\n";
            for (const HistogramRow& row : report.histogram)
                out += std::to_string(row.rank) + "," + std::to_string(row.u) + "," +
                       std::to_string(row.count) + "\n";
            return out;
        }
        case ReportFormat::json: {
            nlohmann::ordered_json j;
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (const HistogramRow& row : report.histogram)
                rows.push_back({{"rank", row.rank}, {"u", row.u}, {"count", row.count}});
            j["rows"] = std::move(rows);
            j["solutions"] = report.solution_count;
            j["weak_d"] = report.weak_d_count;
            return j.dump(2) + "\n";
        }
        default: {
            std::ostringstream out;
            out << std::setw(8) << "rank" << std::setw(8) << "u" << std::setw(10) << "count"
                << "\n";
            for (const HistogramRow& row : report.histogram)
                out << std::setw(8) << row.rank << std::setw(8) << row.u << std::setw(10)
                    << row.count << "\n";
            return out.str();
        }
    }
}

std::string batch_report_to_json(const BatchReport& report) {
    nlohmann::ordered_json j;
    j["parsed_count"] = report.parsed_count;
    j["solution_count"] = report.solution_count;
    j["weak_d_count"] = report.weak_d_count;
    nlohmann::ordered_json histogram = nlohmann::ordered_json::array();
    for (const HistogramRow& row : report.histogram)
        histogram.push_back({{"rank", row.rank}, {"u", row.u}, {"count", row.count}});
    j["histogram"] = std::move(histogram);
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const FileRecord& rec : report.records) {
        nlohmann::ordered_json r;
        r["filename"] = rec.filename;
        r["parsed"] = rec.parsed;
        r["error"] = rec.error;
        r["is_solution"] = rec.is_solution;
        r["rank"] = rec.rank;
        r["rank_method"] = to_string(rec.rank_method);
        r["d_property"] = to_string(rec.d_property);
        r["d_property_roles"] = {to_string(rec.d_property_roles[0]),
                                 to_string(rec.d_property_roles[1]),
                                 to_string(rec.d_property_roles[2])};
        r["weak_d"] = rec.weak_d;
        r["weak_d_roles"] = {rec.weak_d_roles[0], rec.weak_d_roles[1], rec.weak_d_roles[2]};
        if (rec.is_solution)
            r["bounds"] = nlohmann::ordered_json::parse(bound_report_to_json(rec.bounds));
        else
            r["bounds"] = nullptr;
        records.push_back(std::move(r));
    }
    j["records"] = std::move(records);
    return j.dump(2) + "\n";
}

BatchReport batch_report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        throw ParseError("invalid batch report JSON", 1, 1);
    }
    BatchReport report;
    report.parsed_count = j.value("parsed_count", 0ll);
    report.solution_count = j.value("solution_count", 0ll);
    report.weak_d_count = j.value("weak_d_count", 0ll);
    for (const auto& row : j.value("histogram", nlohmann::json::array()))
        report.histogram.push_back(
            {row.at("rank").get<Index>(), row.at("u").get<Index>(), row.at("count").get<long long>()});
    for (const auto& r : j.value("records", nlohmann::json::array())) {
        FileRecord rec;
        rec.filename = r.value("filename", "");
        rec.parsed = r.value("parsed", false);
        rec.error = r.value("error", "");
        rec.is_solution = r.value("is_solution", false);
        rec.rank = r.value("rank", Index(-1));
        rec.rank_method = rank_method_from_string(r.value("rank_method", "modular"));
        rec.d_property = d_property_status_from_string(r.value("d_property", "unknown"));
        if (r.contains("d_property_roles"))
            for (std::size_t i = 0; i < 3; ++i)
                rec.d_property_roles[i] =
                    d_property_status_from_string(r["d_property_roles"].at(i).get<std::string>());
        rec.weak_d = r.value("weak_d", false);
        if (r.contains("weak_d_roles"))
            for (std::size_t i = 0; i < 3; ++i) rec.weak_d_roles[i] = r["weak_d_roles"].at(i).get<bool>();
        if (rec.is_solution && r.contains("bounds") && !r["bounds"].is_null()) {
            const auto& b = r["bounds"];
            rec.bounds.r = b.value("r", 0);
            rec.bounds.k = b.value("k", Index(0));
            rec.bounds.rank = b.value("rank", Index(0));
            rec.bounds.u = b.value("u", Index(0));
            rec.bounds.l = b.value("l", Index(0));
            rec.bounds.l_prime = b.value("l_prime", Index(0));
            rec.bounds.l_dprime = b.value("l_dprime", Index(0));
            rec.bounds.g = b.value("g", Index(0));
            rec.bounds.g_prime = b.value("g_prime", Index(0));
            rec.bounds.g_dprime = b.value("g_dprime", Index(0));
        }
        report.records.push_back(std::move(rec));
    }
    return report;
}

}  // namespace brent
