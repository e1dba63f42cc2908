#include "rwalk/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace rwalk {

std::string format_double(double v) {
    char buf[40];
    for (int precision : {15, 16, 17}) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::echo(const std::string& key, const std::string& value) {
    os_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os_ << ',';
        os_ << csv_field(fields[i]);
    }
    os_ << "\n";
}

void write_graph(std::ostream& os, const BoxGraph& box) {
    os << box.d << ' ' << box.n << ' ' << format_double(box.lambda) << ' '
       << boundary_name(box.boundary) << "\n";
    for (const auto& e : box.graph.edges()) {
        os << "edge " << e.a << ' ' << e.b << ' ' << format_double(e.conductance) << ' ' << e.tag << "\n";
    }
}

BoxGraph read_graph(std::istream& is) {
    int d = 0, n = 0;
    double lambda = 0;
    std::string boundary;
    if (!(is >> d >> n >> lambda >> boundary)) throw DomainError("read_graph: bad header");

    BoxGraph box = build_box(d, n, lambda, parse_boundary(boundary));
    // re-read the edge list and verify it matches the declared parameters
    std::size_t count = 0;
    std::string word;
    while (is >> word) {
        if (word != "edge") throw DomainError("read_graph: expected 'edge', got '" + word + "'");
        int a = 0, b = 0;
        double c = 0;
        long long tag = 0;
        if (!(is >> a >> b >> c >> tag)) throw DomainError("read_graph: bad edge line");
        if (count >= box.graph.edges().size()) throw DomainError("read_graph: too many edges");
        const auto& e = box.graph.edges()[count];
        if (e.a != a || e.b != b || e.tag != tag || std::abs(e.conductance - c) > 1e-12 * std::max(1.0, e.conductance)) {
            throw DomainError("read_graph: edge " + std::to_string(count) + " does not match the header parameters");
        }
        ++count;
    }
    if (count != box.graph.edges().size()) throw DomainError("read_graph: missing edges");
    return box;
}

void write_forest(std::ostream& os, const ForestSample& sample) {
    for (std::size_t i = 0; i < sample.tags.size(); ++i) {
        if (i) os << ' ';
        os << sample.tags[i];
    }
    os << "\n";
}

} // namespace rwalk
