#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tausim {

enum class OutputFormat { csv, jsonl };

OutputFormat parse_format(const std::string& name);
const char* to_string(OutputFormat format);

/// Result of one scenario run. The column set is fixed per scenario kind and
/// rows are in time order. Exported files contain only the deterministic
/// header + rows (floats at 17 significant digits, round-trip exact), so
/// identical config + seed give byte-identical files; metadata stays on the
/// record and in the CLI summary.
struct RunRecord {
    std::string scenario;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> config_echo;
    std::string version;
    std::string rng_algorithm;  // empty when the run drew no samples
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

/// Writes CSV (single header row, comma separator, '.' decimal point, LF
/// endings) or JSON lines (one object per row, keys in column order).
void export_series(const RunRecord& record, const std::filesystem::path& path,
                   OutputFormat format);

/// Reads a previously exported series (.csv or .jsonl, by extension) back
/// into a record. Only columns and rows are recoverable from a series file.
RunRecord read_record(const std::filesystem::path& path);

}  // namespace tausim
