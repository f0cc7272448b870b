// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dfrc/types.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace dfrc {

/// Empty cells are written as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, long, double, std::string>;

class ResultTable {
public:
    explicit ResultTable(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    /// Starts a new row with every cell empty.
    void new_row();
    /// Sets a cell of the current row. Throws InvalidArgument for unknown columns.
    void set(const std::string& column, Cell value);
    /// Sets `<column>` to the linear value and `<column>_db` to 10 log10 of it.
    void set_db(const std::string& column, double linear);

    const Cell& at(std::size_t row, const std::string& column) const;
    double number(std::size_t row, const std::string& column) const;
    std::string text(std::size_t row, const std::string& column) const;
    std::size_t column_index(const std::string& column) const;

    /// Stable sort by the given key columns.
    void sort_by(const std::vector<std::string>& keys);
    void append(const ResultTable& other);

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// Shortest "%.*g" form that reads back to the same double.
std::string format_number(double v);

/// Entries joined by ';' in "re+imj" form.
std::string format_complex_vector(const CVector& v);
/// Reals joined by ';'.
std::string format_list(const std::vector<double>& v);

}  // namespace dfrc
