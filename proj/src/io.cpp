#include "ulam/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "ulam/error.hpp"

namespace ulam::io {

namespace {

[[noreturn]] void spec_error(const std::string& field, const std::string& what)
{
    throw Error(ErrorKind::InvalidSpec, "field '" + field + "': " + what);
}

Scalar parse_coefficient(const json& entry, std::size_t index)
{
    const std::string field = "a[" + std::to_string(index) + "]";
    if (entry.is_number()) {
        return {entry.get<double>(), 0.0};
    }
    if (entry.is_array() && entry.size() == 2 && entry[0].is_number() && entry[1].is_number()) {
        return {entry[0].get<double>(), entry[1].get<double>()};
    }
    spec_error(field, "expected a number or [re, im]");
}

json complex_pair(Scalar z)
{
    return json::array({z.real(), z.imag()});
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

double parse_number(const std::string& text, std::size_t row, std::size_t column)
{
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::InvalidInput, "CSV row " + std::to_string(row) + ", column "
                                                 + std::to_string(column) + ": not a number '" + text + "'");
    }
    return value;
}

std::string sequence_header(std::size_t dim)
{
    std::string header = "n";
    for (std::size_t c = 0; c < dim; ++c) {
        header += ",comp_" + std::to_string(c) + "_re,comp_" + std::to_string(c) + "_im";
    }
    return header;
}

} // namespace

RecurrenceSpec parse_spec(const json& j)
{
    if (!j.is_object()) {
        spec_error("<root>", "expected a JSON object");
    }
    if (!j.contains("a") || !j["a"].is_array() || j["a"].empty()) {
        spec_error("a", "expected a nonempty array of coefficients");
    }
    std::vector<Scalar> coefficients;
    for (std::size_t i = 0; i < j["a"].size(); ++i) {
        coefficients.push_back(parse_coefficient(j["a"][i], i));
    }
    if (j.contains("p")) {
        if (!j["p"].is_number_integer() || j["p"].get<long long>() < 1) {
            spec_error("p", "expected a positive integer");
        }
        if (j["p"].get<std::size_t>() != coefficients.size()) {
            spec_error("p", "order does not match the number of coefficients");
        }
    }

    bool any_imag = false;
    for (const auto& a : coefficients) {
        any_imag = any_imag || a.imag() != 0.0;
    }
    Field field = any_imag ? Field::Complex : Field::Real;
    if (j.contains("field")) {
        const auto& value = j["field"];
        if (value == "real") {
            field = Field::Real;
        } else if (value == "complex") {
            field = Field::Complex;
        } else {
            spec_error("field", "expected \"real\" or \"complex\"");
        }
        if (field == Field::Real && any_imag) {
            spec_error("a", "real field requires zero imaginary parts");
        }
    }

    std::size_t dim = 1;
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
            spec_error("dim", "expected a positive integer");
        }
        dim = j["dim"].get<std::size_t>();
    }
    Norm norm = Norm::Sup;
    if (j.contains("norm")) {
        const auto& value = j["norm"];
        if (value == "sup") {
            norm = Norm::Sup;
        } else if (value == "euclid") {
            norm = Norm::Euclid;
        } else {
            spec_error("norm", "expected \"sup\" or \"euclid\"");
        }
    }
    if (coefficients.back() == Scalar{0.0}) {
        spec_error("a", "last coefficient a_p must be nonzero");
    }
    return RecurrenceSpec(std::move(coefficients), field, dim, norm);
}

RecurrenceSpec load_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidInput, "cannot open spec file " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidSpec, "spec file " + path + " is not valid JSON: " + e.what());
    }
    return parse_spec(j);
}

json to_json(const RecurrenceSpec& spec)
{
    json a = json::array();
    for (const auto& c : spec.coefficients()) {
        a.push_back(complex_pair(c));
    }
    return {{"p", spec.order()},
            {"a", a},
            {"field", spec.field() == Field::Real ? "real" : "complex"},
            {"dim", spec.dim()},
            {"norm", spec.norm() == Norm::Sup ? "sup" : "euclid"}};
}

json to_json(const RootSet& roots)
{
    json r = json::array();
    for (const auto& z : roots.roots) {
        r.push_back(complex_pair(z));
    }
    return {{"roots", r},
            {"moduli", roots.moduli},
            {"inclusion_radii", roots.radii},
            {"min_separation", roots.min_separation},
            {"residual_bound", roots.residual_bound},
            {"classification", std::string(to_string(roots.classification))},
            {"on_unit_circle", roots.on_unit_circle},
            {"near_degenerate", roots.near_degenerate}};
}

json to_json(const ConstantResult& result)
{
    return {{"value", result.value},
            {"tail_bound", result.tail_bound},
            {"terms", result.terms_used},
            {"kind", std::string(to_string(result.kind))}};
}

json to_json(const SharpnessReport& report)
{
    return {{"ratio", report.achieved_ratio},
            {"kr", report.kr_value},
            {"gap", report.gap},
            {"terms", report.horizon},
            {"tail_budget", report.tail_budget},
            {"sup_ratio", report.sup_ratio},
            {"shadow_coefficient_norm", report.shadow_coefficient_norm},
            {"zero_shadow", report.zero_shadow}};
}

json shadow_summary(const ShadowResult& result, const VerificationReport& report)
{
    return {{"eps", result.eps},
            {"bound", result.bound},
            {"max_deviation", result.max_deviation},
            {"max_cert_error", result.max_cert_error()},
            {"residual", report.residual},
            {"discarded_imag", result.discarded_imag},
            {"pass", report.pass},
            {"message", report.message}};
}

std::string format_double(double value)
{
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) {
        return "nan";
    }
    return {buffer, ptr};
}

void write_sequence_csv(std::ostream& out, const Sequence& values)
{
    out << sequence_header(values.dim()) << '\n';
    for (std::size_t n = 0; n < values.size(); ++n) {
        out << n;
        for (const auto& c : values[n]) {
            out << ',' << format_double(c.real()) << ',' << format_double(c.imag());
        }
        out << '\n';
    }
}

Sequence read_sequence_csv(std::istream& in, std::size_t expected_dim)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::InvalidInput, "CSV is empty (missing header)");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto header = split_line(line);
    if (header.empty() || header[0] != "n" || header.size() % 2 != 1 || header.size() < 3) {
        throw Error(ErrorKind::InvalidInput, "CSV header must be n,comp_0_re,comp_0_im,...");
    }
    const std::size_t dim = (header.size() - 1) / 2;
    if (line != sequence_header(dim)) {
        throw Error(ErrorKind::InvalidInput, "CSV header must be " + sequence_header(dim));
    }
    if (expected_dim != 0 && dim != expected_dim) {
        throw Error(ErrorKind::InvalidInput, "CSV has " + std::to_string(dim) + " components, spec dim is "
                                                 + std::to_string(expected_dim));
    }

    std::vector<Scalar> data;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorKind::InvalidInput, "CSV row " + std::to_string(row) + " has "
                                                     + std::to_string(cells.size()) + " cells, expected "
                                                     + std::to_string(header.size()));
        }
        if (parse_number(cells[0], row, 0) != static_cast<double>(row)) {
            throw Error(ErrorKind::InvalidInput, "CSV rows must be indexed 0, 1, 2, ... (row " + std::to_string(row) + ")");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            data.emplace_back(parse_number(cells[1 + 2 * c], row, 1 + 2 * c),
                              parse_number(cells[2 + 2 * c], row, 2 + 2 * c));
        }
        ++row;
    }
    Sequence out(row, dim);
    for (std::size_t n = 0; n < row; ++n) {
        for (std::size_t c = 0; c < dim; ++c) {
            out[n][c] = data[n * dim + c];
        }
    }
    return out;
}

Sequence load_sequence_csv(const std::string& path, std::size_t expected_dim)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidInput, "cannot open CSV file " + path);
    }
    return read_sequence_csv(in, expected_dim);
}

void write_shadow_csv(std::ostream& out, const ShadowResult& result)
{
    const auto& y = result.shadow.values;
    out << sequence_header(y.dim()) << ",cert_error,deviation\n";
    for (std::size_t n = 0; n < y.size(); ++n) {
        out << n;
        for (const auto& c : y[n]) {
            out << ',' << format_double(c.real()) << ',' << format_double(c.imag());
        }
        out << ',' << format_double(result.cert_error[n]) << ',' << format_double(result.deviation[n]) << '\n';
    }
}

} // namespace ulam::io
