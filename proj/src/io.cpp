#include "gb2kit/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gb2kit/errors.hpp"

namespace gb2kit::io {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Split one CSV record; honors double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line, std::size_t row) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // swallow CR of CRLF
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw DataError("CSV row " + std::to_string(row) + ": unterminated quote");
    fields.push_back(cur);
    return fields;
}

bool parse_double(const std::string& raw, double& out) {
    const std::string t = trim(raw);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

bool parse_int(const std::string& raw, int& out) {
    const std::string t = trim(raw);
    if (t.empty()) return false;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) return false;
    out = static_cast<int>(v);
    return true;
}

struct CsvTable {
    std::vector<std::string> header;  // empty if the file has none
    std::vector<std::vector<std::string>> rows;
    std::size_t first_data_row = 1;  // 1-based row number of rows[0] in the file
};

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    CsvTable table;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        table.rows.push_back(split_record(line, row));
        if (table.rows.size() == 1) table.first_data_row = row;
    }
    if (table.rows.empty()) throw DataError("empty file: " + path);
    return table;
}

// Resolve a column selector (name or 0-based index) against the first record;
// decides whether that record is a header.
std::size_t resolve_column(CsvTable& table, const std::string& selector, bool& has_header) {
    const auto& first = table.rows.front();
    bool is_index = !selector.empty() &&
                    selector.find_first_not_of("0123456789") == std::string::npos;
    if (is_index) {
        const std::size_t idx = std::stoul(selector);
        if (idx >= first.size())
            throw DataError("column index " + selector + " out of range (" +
                            std::to_string(first.size()) + " columns)");
        double probe;
        has_header = !parse_double(first[idx], probe);
        return idx;
    }
    for (std::size_t i = 0; i < first.size(); ++i) {
        if (trim(first[i]) == selector) {
            has_header = true;
            return i;
        }
    }
    throw DataError("column '" + selector + "' not found in header");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string optional_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("N.A.");
}

const char* method_name(IndexMethod m) {
    switch (m) {
        case IndexMethod::ClosedForm: return "closed_form";
        case IndexMethod::Quadrature: return "quadrature";
        case IndexMethod::Empirical: return "empirical";
    }
    return "?";
}

IndexMethod method_from_name(const std::string& s) {
    if (s == "closed_form") return IndexMethod::ClosedForm;
    if (s == "quadrature") return IndexMethod::Quadrature;
    if (s == "empirical") return IndexMethod::Empirical;
    throw DataError("unknown index method: " + s);
}

json optional_to_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::optional<double> optional_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

IngestResult ingest_csv(const std::string& path, const std::string& column,
                        const std::optional<std::string>& year_column) {
    CsvTable table = read_csv(path);
    bool has_header = false;
    const std::size_t value_col = resolve_column(table, column, has_header);
    std::size_t year_col = 0;
    if (year_column) {
        bool year_header = false;
        year_col = resolve_column(table, *year_column, year_header);
        has_header = has_header || year_header;
    }

    IngestResult out;
    std::vector<double> values;
    std::vector<int> years;
    const std::size_t begin = has_header ? 1 : 0;
    for (std::size_t r = begin; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        const std::size_t file_row = table.first_data_row + r;
        if (value_col >= fields.size())
            throw DataError("row " + std::to_string(file_row) + ": missing column " +
                            std::to_string(value_col));
        double v;
        if (!parse_double(fields[value_col], v))
            throw DataError("row " + std::to_string(file_row) + ": cannot parse '" +
                            trim(fields[value_col]) + "' as a number");
        if (!std::isfinite(v))
            throw DataError("row " + std::to_string(file_row) + ": non-finite value");
        int y = 0;
        if (year_column) {
            if (year_col >= fields.size() || !parse_int(fields[year_col], y))
                throw DataError("row " + std::to_string(file_row) + ": cannot parse year");
        }
        if (v <= 0.0) {
            ++out.stats.rows_skipped_nonpositive;
            continue;
        }
        values.push_back(v);
        if (year_column) years.push_back(y);
        ++out.stats.rows_loaded;
    }
    if (values.empty()) throw DataError("no positive observations loaded from " + path);
    out.sample = year_column ? Sample(std::move(values), std::move(years), path)
                             : Sample(std::move(values), path);
    return out;
}

DeflatorSeries load_deflator_csv(const std::string& path, int base_year,
                                 const std::string& year_column,
                                 const std::string& index_column) {
    CsvTable table = read_csv(path);
    bool has_header = false;
    const std::size_t ycol = resolve_column(table, year_column, has_header);
    bool dummy = false;
    const std::size_t icol = resolve_column(table, index_column, dummy);
    has_header = has_header || dummy;

    DeflatorSeries series;
    series.base_year = base_year;
    const std::size_t begin = has_header ? 1 : 0;
    for (std::size_t r = begin; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        const std::size_t file_row = table.first_data_row + r;
        int year;
        double level;
        if (ycol >= fields.size() || icol >= fields.size() ||
            !parse_int(fields[ycol], year) || !parse_double(fields[icol], level))
            throw DataError("deflator row " + std::to_string(file_row) + ": cannot parse");
        if (!(level > 0.0))
            throw DataError("deflator row " + std::to_string(file_row) +
                            ": index must be positive");
        series.index_by_year[year] = level;
    }
    if (!series.index_by_year.count(base_year))
        throw DataError("deflator series does not contain the base year " +
                        std::to_string(base_year));
    return series;
}

Sample deflate(const Sample& s, const DeflatorSeries& d, int base_year) {
    if (!s.has_years()) throw DataError("deflate: sample has no year column");
    const auto base_it = d.index_by_year.find(base_year);
    if (base_it == d.index_by_year.end())
        throw DataError("deflate: base year missing from the series");
    const double base_level = base_it->second;

    std::vector<double> values;
    values.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const int year = s.years()[i];
        const auto it = d.index_by_year.find(year);
        if (it == d.index_by_year.end())
            throw DataError("deflate: no deflator level for year " + std::to_string(year));
        values.push_back(s.values()[i] * base_level / it->second);
    }
    Sample out(std::move(values), s.years(), s.label());
    out.set_deflator_base(std::to_string(base_year));
    return out;
}

json spec_to_json(const DistributionSpec& d) {
    json j;
    j["family"] = std::string(family_name(d.family()));
    const auto names = param_names(d.family());
    const auto values = param_vector(d);
    for (std::size_t i = 0; i < names.size(); ++i) j[std::string(names[i])] = values[i];
    return j;
}

DistributionSpec spec_from_json(const json& j) {
    const auto fam = family_from_name(j.at("family").get<std::string>());
    if (!fam) throw DataError("unknown family: " + j.at("family").get<std::string>());
    std::vector<double> values;
    for (auto name : param_names(*fam)) {
        const std::string key(name);
        if (!j.contains(key)) throw DataError("spec missing parameter '" + key + "'");
        values.push_back(j.at(key).get<double>());
    }
    return make_spec(*fam, values);
}

json index_report_to_json(const IndexReport& r) {
    json j;
    j["gini"] = optional_to_json(r.gini);
    j["hoover"] = optional_to_json(r.hoover);
    j["theil_t"] = optional_to_json(r.theil_t);
    j["theil_l"] = optional_to_json(r.theil_l);
    j["dmms"] = optional_to_json(r.dmms);
    j["method"] = method_name(r.method);
    return j;
}

IndexReport index_report_from_json(const json& j) {
    IndexReport r;
    r.gini = optional_from_json(j.at("gini"));
    r.hoover = optional_from_json(j.at("hoover"));
    r.theil_t = optional_from_json(j.at("theil_t"));
    r.theil_l = optional_from_json(j.at("theil_l"));
    r.dmms = optional_from_json(j.at("dmms"));
    r.method = method_from_name(j.at("method").get<std::string>());
    return r;
}

json sde_config_to_json(const SdeConfig& c) {
    json j;
    j["gamma_rate"] = c.gamma_rate;
    j["theta"] = c.theta;
    j["kappa2"] = c.kappa2;
    j["kappa_alpha"] = c.kappa_alpha;
    j["alpha"] = c.alpha;
    j["dt"] = c.dt;
    j["burn_in"] = c.burn_in;
    j["thin"] = c.thin;
    j["n_paths"] = c.n_paths;
    return j;
}

SdeConfig sde_config_from_json(const json& j) {
    SdeConfig c;
    if (j.contains("gamma_rate"))
        c.gamma_rate = j.at("gamma_rate").get<double>();
    else
        c.gamma_rate = j.at("gamma").get<double>();
    c.theta = j.at("theta").get<double>();
    c.kappa2 = j.value("kappa2", 0.0);
    if (j.contains("kappa_alpha"))
        c.kappa_alpha = j.at("kappa_alpha").get<double>();
    else
        c.kappa_alpha = j.value("kappa1", 0.0);  // alpha = 1 alias
    c.alpha = j.value("alpha", 1.0);
    c.dt = j.value("dt", 0.0);
    c.burn_in = j.value("burn_in", static_cast<std::int64_t>(-1));
    c.thin = j.value("thin", static_cast<std::int64_t>(-1));
    c.n_paths = j.value("n_paths", 8);
    validate(c);
    return c;
}

json fit_result_to_json(const FitResult& r) {
    json j;
    j["spec"] = spec_to_json(r.spec);
    j["ks"] = r.ks;
    j["log_likelihood"] = r.log_likelihood;
    j["mean_analytic"] = optional_to_json(r.mean_analytic);
    j["rms_analytic"] = optional_to_json(r.rms_analytic);
    j["indices"] = index_report_to_json(r.indices);
    j["diagnostics"] = {{"iterations", r.diagnostics.iterations},
                        {"starts", r.diagnostics.starts},
                        {"converged", r.diagnostics.converged}};
    return j;
}

FitResult fit_result_from_json(const json& j) {
    FitResult r{spec_from_json(j.at("spec")), 0.0, 0.0, std::nullopt, std::nullopt, {}, {}};
    r.ks = j.at("ks").get<double>();
    r.log_likelihood = j.at("log_likelihood").get<double>();
    r.mean_analytic = optional_from_json(j.at("mean_analytic"));
    r.rms_analytic = optional_from_json(j.at("rms_analytic"));
    r.indices = index_report_from_json(j.at("indices"));
    const auto& d = j.at("diagnostics");
    r.diagnostics.iterations = d.at("iterations").get<long>();
    r.diagnostics.starts = d.at("starts").get<int>();
    r.diagnostics.converged = d.at("converged").get<bool>();
    return r;
}

json report_rows_to_json(const std::vector<ReportRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json j;
        j["type"] = row.label;
        if (row.error) {
            j["error"] = *row.error;
        } else if (row.fit) {
            j["fit"] = fit_result_to_json(*row.fit);
        } else {
            j["mean"] = optional_to_json(row.mean);
            j["rms"] = optional_to_json(row.rms);
            j["indices"] = index_report_to_json(row.indices);
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

std::string report_rows_to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "type,parameters,ks,mean,rms,gini,hoover,theil_t,theil_l,dmms\n";
    for (const auto& row : rows) {
        out << row.label << ',';
        if (row.error) {
            out << "\"error: " << *row.error << "\",,,,,,,,\n";
            continue;
        }
        const IndexReport& idx = row.fit ? row.fit->indices : row.indices;
        if (row.fit) {
            const auto values = param_vector(row.fit->spec);
            out << '"' << family_name(row.fit->spec.family()) << '(';
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i) out << ", ";
                out << format_double(values[i]);
            }
            out << ")\"";
            out << ',' << format_double(row.fit->ks);
            out << ',' << optional_cell(row.fit->mean_analytic);
            out << ',' << optional_cell(row.fit->rms_analytic);
        } else {
            out << "N.A.,N.A.";
            out << ',' << optional_cell(row.mean);
            out << ',' << optional_cell(row.rms);
        }
        out << ',' << optional_cell(idx.gini) << ',' << optional_cell(idx.hoover) << ','
            << optional_cell(idx.theil_t) << ',' << optional_cell(idx.theil_l) << ','
            << optional_cell(idx.dmms) << '\n';
    }
    return out.str();
}

void write_values_csv(const std::string& path, const std::vector<double>& values,
                      const std::string& header) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << header << '\n';
    char buf[64];
    for (double v : values) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace gb2kit::io
