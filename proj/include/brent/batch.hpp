#ifndef BRENT_BATCH_HPP
#define BRENT_BATCH_HPP

#include "brent/rank.hpp"
#include "brent/structure.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace brent {

struct BatchOptions {
    RankMethod method = RankMethod::modular;
    int prime_count = 3;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct FileRecord {
    std::string filename;
    bool parsed = false;
    std::string error;
    bool is_solution = false;
    Index rank = -1;
    RankMethod rank_method = RankMethod::modular;
    BoundReport bounds;
    std::array<DPropertyStatus, 3> d_property_roles{DPropertyStatus::unknown,
                                                    DPropertyStatus::unknown,
                                                    DPropertyStatus::unknown};
    DPropertyStatus d_property = DPropertyStatus::unknown;
    std::array<bool, 3> weak_d_roles{false, false, false};
    bool weak_d = false;
};

struct HistogramRow {
    Index rank = 0;
    Index u = 0;
    long long count = 0;
};

struct BatchReport {
    std::vector<FileRecord> records;
    std::vector<HistogramRow> histogram;
    long long parsed_count = 0;
    long long solution_count = 0;
    long long weak_d_count = 0;
};

/// Analyzes every regular file in the directory: parse, verify, Jacobian
/// rank, bounds and structure checks. Records are ordered by filename and
/// per-file seeds depend only on the filename and the base seed, so the
/// report is byte-identical for any jobs count. Per-file failures land in
/// the record's error field; the batch never aborts.
BatchReport batch_analyze(const std::filesystem::path& directory,
                          const BatchOptions& options = {});

enum class ReportFormat { csv, json, table };

ReportFormat report_format_from_string(const std::string& name);

/// Rank histogram over the verified solutions, one row per observed rank in
/// ascending order with the upper bound u = k - rank.
std::string histogram_report(const BatchReport& report, ReportFormat format);

std::string batch_report_to_json(const BatchReport& report);
BatchReport batch_report_from_json(const std::string& text);

}  // namespace brent

#endif
