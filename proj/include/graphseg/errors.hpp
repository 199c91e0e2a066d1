#pragma once

#include <stdexcept>
#include <string>

namespace graphseg {

// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- panel ingest ---

struct CsvError : Error {
    using Error::Error;
};

struct MalformedDates : Error {
    using Error::Error;
};

struct BadValue : Error {
    int row;
    std::string column;
    BadValue(int row_, std::string column_, const std::string& what_)
        : Error(what_), row(row_), column(std::move(column_)) {}
};

struct GapInSeries : Error {
    std::string country;
    GapInSeries(std::string country_, const std::string& what_)
        : Error(what_), country(std::move(country_)) {}
};

struct PanelTooShort : Error {
    using Error::Error;
};

// --- dependence graph ---

struct WindowTooSparse : Error {
    int window_index;
    WindowTooSparse(int window_index_, const std::string& what_)
        : Error(what_), window_index(window_index_) {}
};

struct TooFewNodes : Error {
    using Error::Error;
};

// --- topology indices ---

struct NonContiguousWindows : Error {
    using Error::Error;
};

// --- segmenter ---

struct ConstantIndexRow : Error {
    int row;
    ConstantIndexRow(int row_, const std::string& what_) : Error(what_), row(row_) {}
};

struct ShapeError : Error {
    using Error::Error;
};

struct BadInput : Error {
    using Error::Error;
};

struct BadBounds : Error {
    using Error::Error;
};

// --- embedding / report ---

struct BadK : Error {
    using Error::Error;
};

struct ConsistencyError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace graphseg
