#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rwalk/monte_carlo.hpp"
#include "rwalk/spanning.hpp"

namespace rwalk {

// Shortest lossless decimal form of a double; stable across runs.
std::string format_double(double v);

// RFC-style CSV quoting: fields holding commas, quotes or newlines are
// wrapped in double quotes with inner quotes doubled.
std::string csv_field(const std::string& raw);

// CSV sink with a parameter-echo preamble ("# key=value" lines).
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void echo(const std::string& key, const std::string& value);
    void row(const std::vector<std::string>& fields);

private:
    std::ostream& os_;
};

// Line-oriented graph format: "d n lambda boundary" then one
// "edge a b conductance tag" line per edge.
void write_graph(std::ostream& os, const BoxGraph& box);
BoxGraph read_graph(std::istream& is);

// A forest is one line of sorted tags.
void write_forest(std::ostream& os, const ForestSample& sample);

} // namespace rwalk
