#include "graphseg/panel.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "graphseg/io_util.hpp"

namespace graphseg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

}  // namespace

MonthStamp MonthStamp::parse(const std::string& text) {
    auto dash = text.find('-');
    if (dash == std::string::npos)
        throw MalformedDates("cannot parse month stamp '" + text +
                             "': expected YYYY-MM");
    std::string_view y(text.data(), dash);
    std::string_view m(text.data() + dash + 1, text.size() - dash - 1);
    if (!all_digits(y) || !all_digits(m) || y.size() != 4 || m.size() != 2)
        throw MalformedDates("cannot parse month stamp '" + text +
                             "': expected YYYY-MM");
    MonthStamp out;
    out.year = std::stoi(std::string(y));
    out.month = std::stoi(std::string(m));
    if (out.month < 1 || out.month > 12)
        throw MalformedDates("month out of range in '" + text + "'");
    return out;
}

std::string MonthStamp::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

int PricePanel::first_observed(int col) const {
    for (int r = 0; r < n_months(); ++r)
        if (observed(r, col)) return r;
    return -1;
}

int PricePanel::last_observed(int col) const {
    for (int r = n_months() - 1; r >= 0; --r)
        if (observed(r, col)) return r;
    return -1;
}

void PricePanel::validate() const {
    if (dates.empty() || countries.empty())
        throw CsvError("panel has no dates or no countries");
    if (values.rows() != n_months() || values.cols() != n_countries())
        throw CsvError("panel value matrix shape mismatch");
    for (int r = 1; r < n_months(); ++r)
        if (dates[r].serial() != dates[r - 1].serial() + 1)
            throw MalformedDates("dates must advance by exactly one month at " +
                                 dates[r].str());
    std::unordered_set<std::string> seen;
    for (const auto& c : countries)
        if (!seen.insert(c).second)
            throw CsvError("duplicate country code '" + c + "'");
    for (int c = 0; c < n_countries(); ++c) {
        int first = first_observed(c), last = last_observed(c);
        for (int r = (first < 0 ? 0 : first); r <= last; ++r) {
            double v = values(r, c);
            if (std::isnan(v))
                throw GapInSeries(countries[c], "internal gap in series '" +
                                                    countries[c] + "' at " +
                                                    dates[r].str());
            if (!std::isfinite(v) || v <= 0.0)
                throw BadValue(r, countries[c],
                               "non-positive value in '" + countries[c] +
                                   "' at " + dates[r].str());
        }
    }
}

PricePanel load_panel(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.size() < 2) throw CsvError("panel CSV needs a header and data rows");

    auto header = split_csv_line(lines[0]);
    if (header.size() < 2)
        throw CsvError("panel CSV header needs a date column and countries");
    PricePanel panel;
    panel.countries.assign(header.begin() + 1, header.end());
    for (const auto& c : panel.countries)
        if (c.empty()) throw CsvError("empty country code in header");

    const int n_rows = static_cast<int>(lines.size()) - 1;
    const int n_cols = static_cast<int>(panel.countries.size());
    panel.values.setConstant(n_rows, n_cols, kNaN);
    panel.dates.reserve(n_rows);

    for (int r = 0; r < n_rows; ++r) {
        const int line_no = r + 2;  // 1-based, header is line 1
        auto fields = split_csv_line(lines[r + 1]);
        if (static_cast<int>(fields.size()) != n_cols + 1)
            throw CsvError("line " + std::to_string(line_no) + " has " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(n_cols + 1));
        MonthStamp stamp = MonthStamp::parse(fields[0]);
        if (!panel.dates.empty() &&
            stamp.serial() != panel.dates.back().serial() + 1)
            throw MalformedDates("date " + stamp.str() + " on line " +
                                 std::to_string(line_no) +
                                 " does not follow " + panel.dates.back().str() +
                                 " by one month");
        panel.dates.push_back(stamp);
        for (int c = 0; c < n_cols; ++c) {
            const std::string& f = fields[c + 1];
            if (f.empty()) continue;
            auto v = parse_double(f);
            if (!v || !std::isfinite(*v) || *v <= 0.0)
                throw BadValue(line_no, panel.countries[c],
                               "bad price '" + f + "' for " +
                                   panel.countries[c] + " on line " +
                                   std::to_string(line_no));
            panel.values(r, c) = *v;
        }
    }
    panel.validate();
    return panel;
}

PricePanel load_panel_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return load_panel(in);
}

void write_panel_csv(const PricePanel& panel, std::ostream& out) {
    out << "date";
    for (const auto& c : panel.countries) out << ',' << c;
    out << '\n';
    for (int r = 0; r < panel.n_months(); ++r) {
        out << panel.dates[r].str();
        for (int c = 0; c < panel.n_countries(); ++c) {
            out << ',';
            if (panel.observed(r, c)) out << fmt_double(panel.values(r, c));
        }
        out << '\n';
    }
}

std::string panel_to_csv(const PricePanel& panel) {
    std::ostringstream os;
    write_panel_csv(panel, os);
    return os.str();
}

void WindowSpec::validate() const {
    if (length_months < 24)
        throw Error("window length_months must be >= 24, got " +
                    std::to_string(length_months));
    if (step_months < 1 || step_months > length_months)
        throw Error("step_months must be in [1, length_months]");
}

std::vector<WindowView> slice_windows(const PricePanel& panel,
                                      const WindowSpec& spec) {
    spec.validate();
    const int total = panel.n_months();
    if (total < spec.length_months)
        throw PanelTooShort("panel has " + std::to_string(total) +
                            " months, window needs " +
                            std::to_string(spec.length_months));
    const int count = (total - spec.length_months) / spec.step_months + 1;
    std::vector<WindowView> out;
    out.reserve(count);
    for (int t = 0; t < count; ++t) {
        WindowView w;
        w.window_index = t;
        w.start_row = t * spec.step_months;
        w.length = spec.length_months;
        w.start = panel.dates[w.start_row];
        w.end = panel.dates[w.start_row + spec.length_months - 1];
        w.label_year = w.end.year;
        w.panel = &panel;
        out.push_back(w);
    }
    return out;
}

}  // namespace graphseg
