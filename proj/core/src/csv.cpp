#include "starflow/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "starflow/errors.hpp"

namespace starflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t j = 0; j < fields.size(); ++j) {
        if (j) out += ',';
        out += fields[j];
    }
    out += '\n';
    return out;
}

void write_curve_csv(const ClosedCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write curve file " + path.string());
    out << "v1,v2\n";
    for (const Vec2& p : curve.nodes()) {
        out << format_double(p.x) << ',' << format_double(p.y) << '\n';
    }
}

ClosedCurve read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open curve file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty curve file " + path.string());
    // Tolerate an optional UTF-8 BOM and whitespace around the header.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "v1,v2") {
        throw ValidationError("curve file " + path.string() +
                              " must start with header 'v1,v2', got '" + line + "'");
    }
    std::vector<Vec2> nodes;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b, extra;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
            throw ValidationError("malformed row " + std::to_string(row) + " in " +
                                  path.string());
        }
        if (std::getline(ss, extra, ',')) {
            throw ValidationError("row " + std::to_string(row) + " in " + path.string() +
                                  " has more than two fields");
        }
        try {
            std::size_t pa = 0, pb = 0;
            const double x = std::stod(a, &pa);
            const double y = std::stod(b, &pb);
            if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing");
            nodes.push_back({x, y});
        } catch (const std::exception&) {
            throw ValidationError("non-numeric data at row " + std::to_string(row) +
                                  " in " + path.string());
        }
    }
    return ClosedCurve(std::move(nodes));
}

} // namespace starflow
