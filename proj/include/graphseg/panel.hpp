#pragma once

#include <Eigen/Dense>
#include <compare>
#include <iosfwd>
#include <string>
#include <vector>

#include "graphseg/errors.hpp"

namespace graphseg {

// Calendar month, e.g. 1955-01.
struct MonthStamp {
    int year = 0;
    int month = 1;  // 1..12

    static MonthStamp parse(const std::string& text);
    std::string str() const;

    // Months since year 0, for arithmetic.
    int serial() const { return year * 12 + (month - 1); }
    static MonthStamp from_serial(int s) {
        return MonthStamp{s / 12, s % 12 + 1};
    }
    MonthStamp plus_months(int n) const { return from_serial(serial() + n); }

    auto operator<=>(const MonthStamp&) const = default;
};

// Monthly price-index matrix, dates x countries. Missing entries are NaN.
// Every present value is finite and strictly positive; dates advance by
// exactly one month; each country is observed on a contiguous range
// (leading/trailing missing allowed, internal gaps rejected).
struct PricePanel {
    std::vector<MonthStamp> dates;
    std::vector<std::string> countries;
    Eigen::MatrixXd values;

    int n_months() const { return static_cast<int>(dates.size()); }
    int n_countries() const { return static_cast<int>(countries.size()); }
    bool observed(int row, int col) const {
        return !std::isnan(values(row, col));
    }

    // First/last observed row of a column, -1 if the column is all missing.
    int first_observed(int col) const;
    int last_observed(int col) const;

    void validate() const;
};

// Wide CSV: header `date,<CC1>,<CC2>,...`; date format YYYY-MM; empty
// field = missing; LF or CRLF.
PricePanel load_panel(std::istream& in);
PricePanel load_panel_file(const std::string& path);

// Inverse of load_panel; doubles are written shortest-round-trip so a
// reload reproduces the panel bit for bit.
void write_panel_csv(const PricePanel& panel, std::ostream& out);
std::string panel_to_csv(const PricePanel& panel);

struct WindowSpec {
    int length_months = 72;
    int step_months = 12;

    void validate() const;  // step <= length, length >= 24
};

// One sliding window over a panel. Windows are labelled by the calendar
// year of their last month.
struct WindowView {
    int window_index = 0;
    int start_row = 0;
    int length = 0;
    MonthStamp start;
    MonthStamp end;
    int label_year = 0;
    const PricePanel* panel = nullptr;

    auto values() const { return panel->values.middleRows(start_row, length); }
};

// Windows start at the first month and advance by step_months; the last
// window is the last one fully inside the panel.
std::vector<WindowView> slice_windows(const PricePanel& panel,
                                      const WindowSpec& spec);

}  // namespace graphseg
