// SPDX-License-Identifier: Apache-2.0
#include "dfrc/result_table.hpp"

#include "dfrc/config.hpp"
#include "dfrc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <ostream>

namespace dfrc {

namespace {

std::string cell_text(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return "";
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return std::get<std::string>(c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += ch;
        }
    }
    return out + "\"";
}

// Ordering for sort keys: empty < numbers < strings.
int compare(const Cell& a, const Cell& b) {
    auto rank = [](const Cell& c) {
        if (std::holds_alternative<std::monostate>(c)) return 0;
        if (std::holds_alternative<std::string>(c)) return 2;
        return 1;
    };
    auto num = [](const Cell& c) {
        if (const auto* l = std::get_if<long>(&c)) return static_cast<double>(*l);
        return std::get<double>(c);
    };
    const int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    if (ra == 1) {
        const double x = num(a), y = num(b);
        return x < y ? -1 : (y < x ? 1 : 0);
    }
    if (ra == 2) return std::get<std::string>(a).compare(std::get<std::string>(b));
    return 0;
}

}  // namespace

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void ResultTable::new_row() { rows_.emplace_back(columns_.size()); }

std::size_t ResultTable::column_index(const std::string& column) const {
    const auto it = std::find(columns_.begin(), columns_.end(), column);
    if (it == columns_.end()) throw InvalidArgument("unknown column " + column);
    return static_cast<std::size_t>(it - columns_.begin());
}

void ResultTable::set(const std::string& column, Cell value) {
    if (rows_.empty()) throw InvalidArgument("set() before new_row()");
    if (const auto* d = std::get_if<double>(&value); d && !std::isfinite(*d)) value = std::monostate{};
    rows_.back()[column_index(column)] = std::move(value);
}

void ResultTable::set_db(const std::string& column, double linear) {
    set(column, linear);
    set(column + "_db", to_db(linear));
}

const Cell& ResultTable::at(std::size_t row, const std::string& column) const {
    return rows_.at(row)[column_index(column)];
}

double ResultTable::number(std::size_t row, const std::string& column) const {
    const Cell& c = at(row, column);
    if (const auto* l = std::get_if<long>(&c)) return static_cast<double>(*l);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    return std::nan("");
}

std::string ResultTable::text(std::size_t row, const std::string& column) const { return cell_text(at(row, column)); }

void ResultTable::sort_by(const std::vector<std::string>& keys) {
    std::vector<std::size_t> idx;
    for (const auto& k : keys) idx.push_back(column_index(k));
    std::stable_sort(rows_.begin(), rows_.end(), [&](const auto& a, const auto& b) {
        for (auto i : idx) {
            const int c = compare(a[i], b[i]);
            if (c != 0) return c < 0;
        }
        return false;
    });
}

void ResultTable::append(const ResultTable& other) {
    if (other.columns_ != columns_) throw InvalidArgument("appending a table with different columns");
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

void ResultTable::write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << csv_escape(columns_[c]);
    os << '\n';
    for (const auto& r : rows_) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << csv_escape(cell_text(r[c]));
        os << '\n';
    }
}

void ResultTable::write_json(std::ostream& os) const {
    os << "{\n  \"columns\": [";
    for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? ", " : "") << json_escape(columns_[c]);
    os << "],\n  \"rows\": [";
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        os << (i ? ",\n    {" : "\n    {");
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            os << (c ? ", " : "") << json_escape(columns_[c]) << ": ";
            const Cell& v = rows_[i][c];
            if (std::holds_alternative<std::monostate>(v)) os << "null";
            else if (std::holds_alternative<std::string>(v)) os << json_escape(std::get<std::string>(v));
            else os << cell_text(v);
        }
        os << "}";
    }
    os << (rows_.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

std::string format_number(double v) {
    if (!std::isfinite(v)) return "";
    char buf[40];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string format_complex_vector(const CVector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ";" : "") + format_complex(v[i]);
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + format_number(v[i]);
    return out;
}

}  // namespace dfrc
