#pragma once

/**
 * @file output.hpp
 * @brief Machine-readable result envelope shared by the CLI commands. Every
 *        cell is rendered to its final string once and reused verbatim in
 *        both encodings, so CSV and JSON carry identical records and a fixed
 *        invocation produces identical bytes.
 */

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mabinogion/exact.hpp"

namespace mab::output {

enum class Format { csv, json };

struct OutputEnvelope {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != columns.size())
            throw std::logic_error("OutputEnvelope: row width does not match header");
        rows.push_back(std::move(cells));
    }
};

/// Decimal rendering with 15 significant digits.
inline std::string format_decimal(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.15g", value);
    return buffer;
}

/// "num/den" exact fraction (plain integer when the denominator is 1).
inline std::string format_fraction(const Rat& value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

inline void write_csv(const OutputEnvelope& env, std::ostream& out) {
    for (std::size_t i = 0; i < env.columns.size(); ++i) {
        if (i) out << ',';
        out << env.columns[i];
    }
    out << '\n';
    for (const auto& row : env.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
}

inline void write_json(const OutputEnvelope& env, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["command"] = env.command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : env.parameters) params[key] = value;
    doc["parameters"] = params;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : env.rows) {
        nlohmann::ordered_json record = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) record[env.columns[i]] = row[i];
        rows.push_back(std::move(record));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

inline void write(const OutputEnvelope& env, Format format, std::ostream& out) {
    if (format == Format::csv)
        write_csv(env, out);
    else
        write_json(env, out);
}

}  // namespace mab::output
