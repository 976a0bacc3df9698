#include "tausim/record.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tausim {

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

void write_csv(const RunRecord& record, std::ostream& os) {
    for (std::size_t c = 0; c < record.columns.size(); ++c) {
        if (c) os << ',';
        os << record.columns[c];
    }
    os << '\n';
    for (const auto& row : record.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << format_value(row[c]);
        }
        os << '\n';
    }
}

void write_jsonl(const RunRecord& record, std::ostream& os) {
    for (const auto& row : record.rows) {
        os << '{';
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << '"' << json_escape(record.columns[c]) << "\":" << format_value(row[c]);
        }
        os << "}\n";
    }
}

RunRecord read_csv(std::istream& is, const std::string& context) {
    RunRecord record;
    std::string line;
    if (!std::getline(is, line)) {
        throw std::runtime_error(context + ": missing CSV header");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) record.columns.push_back(cell);

    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(record.columns.size());
        std::stringstream cells(line);
        while (std::getline(cells, cell, ',')) {
            std::size_t used = 0;
            row.push_back(std::stod(cell, &used));
            if (used != cell.size()) {
                throw std::runtime_error(context + ":" + std::to_string(lineno) +
                                         ": malformed number '" + cell + "'");
            }
        }
        if (row.size() != record.columns.size()) {
            throw std::runtime_error(context + ":" + std::to_string(lineno) +
                                     ": row width does not match header");
        }
        record.rows.push_back(std::move(row));
    }
    return record;
}

RunRecord read_jsonl(std::istream& is, const std::string& context) {
    RunRecord record;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::ordered_json obj;
        try {
            obj = nlohmann::ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(context + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (record.columns.empty()) {
            for (const auto& [key, value] : obj.items()) {
                (void)value;
                record.columns.push_back(key);
            }
        }
        std::vector<double> row;
        row.reserve(record.columns.size());
        for (const auto& col : record.columns) {
            if (!obj.contains(col)) {
                throw std::runtime_error(context + ":" + std::to_string(lineno) +
                                         ": missing column '" + col + "'");
            }
            row.push_back(obj[col].get<double>());
        }
        record.rows.push_back(std::move(row));
    }
    return record;
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "jsonl" || name == "json-lines") return OutputFormat::jsonl;
    throw std::invalid_argument("unknown output format '" + name + "' (expected csv or jsonl)");
}

const char* to_string(OutputFormat format) {
    return format == OutputFormat::csv ? "csv" : "jsonl";
}

void export_series(const RunRecord& record, const std::filesystem::path& path,
                   OutputFormat format) {
    for (const auto& row : record.rows) {
        if (row.size() != record.columns.size()) {
            throw std::invalid_argument("export_series: row width does not match column count");
        }
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("export_series: cannot open '" + path.string() + "' for writing");
    }
    if (format == OutputFormat::csv) {
        write_csv(record, os);
    } else {
        write_jsonl(record, os);
    }
    os.flush();
    if (!os) {
        throw std::runtime_error("export_series: write failed for '" + path.string() + "'");
    }
}

RunRecord read_record(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("read_record: cannot open '" + path.string() + "'");
    }
    const std::string ext = path.extension().string();
    RunRecord record;
    if (ext == ".jsonl") {
        record = read_jsonl(is, path.string());
    } else if (ext == ".csv") {
        record = read_csv(is, path.string());
    } else {
        throw std::invalid_argument("read_record: '" + path.string() +
                                    "' must end in .csv or .jsonl");
    }
    record.scenario = path.stem().string();
    return record;
}

}  // namespace tausim
