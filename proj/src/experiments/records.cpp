#include "subrad/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace subrad {

const std::vector<std::string>& sweep_header() {
    static const std::vector<std::string> h = {"experiment", "n",      "kd",       "sector",   "label",
                                               "re_lambda",  "im_lambda", "decay", "solver",   "residual",
                                               "wall_seconds", "seed", "sample"};
    return h;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv_row(const SweepRecord& r) {
    std::string row;
    auto add = [&row](const std::string& f) {
        if (!row.empty()) row += ',';
        row += f;
    };
    row = csv_field(r.experiment);
    add(std::to_string(r.n));
    add(format_double(r.kd));
    add(csv_field(r.sector));
    add(csv_field(r.label));
    add(format_double(r.lambda.real()));
    add(format_double(r.lambda.imag()));
    add(format_double(r.decay()));
    add(csv_field(r.solver));
    add(format_double(r.residual));
    add(format_double(r.wall_seconds));
    add(std::to_string(r.seed));
    add(std::to_string(r.sample));
    return row;
}

std::string to_csv(const std::vector<SweepRecord>& records) {
    std::string out;
    for (std::size_t i = 0; i < sweep_header().size(); ++i) {
        if (i) out += ',';
        out += sweep_header()[i];
    }
    out += "\r\n";
    for (const auto& r : records) {
        out += to_csv_row(r);
        out += "\r\n";
    }
    return out;
}

namespace {

std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(field);
            rows.push_back(row);
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw std::invalid_argument("parse_csv: unterminated quoted field");
    if (any || !field.empty()) {
        row.push_back(field);
        rows.push_back(row);
    }
    return rows;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("parse_csv: bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<SweepRecord> parse_csv(const std::string& text) {
    const auto rows = parse_rows(text);
    if (rows.empty() || rows.front() != sweep_header()) throw std::invalid_argument("parse_csv: header mismatch");
    std::vector<SweepRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        if (f.size() != sweep_header().size())
            throw std::invalid_argument("parse_csv: row " + std::to_string(i) + " has the wrong field count");
        SweepRecord r;
        r.experiment = f[0];
        r.n = std::stoi(f[1]);
        r.kd = parse_double(f[2]);
        r.sector = f[3];
        r.label = f[4];
        r.lambda = cplx{parse_double(f[5]), parse_double(f[6])};
        r.solver = f[8];
        r.residual = parse_double(f[9]);
        r.wall_seconds = parse_double(f[10]);
        r.seed = std::stoull(f[11]);
        r.sample = std::stoi(f[12]);
        out.push_back(std::move(r));
    }
    return out;
}

nlohmann::json vector_to_json(const Vec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
    return a;
}

}  // namespace subrad
