#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "representations.hpp"

namespace gaussopt {

using json = nlohmann::json;

// 9 significant figures, locale independent.
inline std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
    return buf;
}

inline void write_csv(std::ostream& os, const Mat& m)
{
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << (j ? "," : "") << format_number(m(i, j));
        os << '\n';
    }
}

inline Mat parse_csv(std::istream& is)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                size_t used = 0;
                row.push_back(std::stod(cell, &used));
                require(cell.find_first_not_of(" \t\r", used) == std::string::npos, ErrorCode::ParseError,
                        "trailing characters in cell '" + cell + "'");
            } catch (const std::logic_error&) {
                throw Error(ErrorCode::ParseError, "not a number: '" + cell + "'");
            }
        }
        require(rows.empty() || row.size() == rows[0].size(), ErrorCode::ParseError, "ragged CSV rows");
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorCode::ParseError, "empty CSV");
    Mat m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = rows[i][j];
    return m;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path);
    require(static_cast<bool>(out), ErrorCode::InvalidConfig, "cannot write " + path);
    out << content;
}

inline Mat read_csv_file(const std::string& path)
{
    std::stringstream ss(read_file(path));
    return parse_csv(ss);
}

inline json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

inline json to_json(const Mat& m)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        a.push_back(row);
    }
    return a;
}

inline Mat mat_from_json(const json& a)
{
    require(a.is_array() && !a.empty() && a[0].is_array(), ErrorCode::ParseError, "expected a nested array");
    Mat m(a.size(), a[0].size());
    for (size_t i = 0; i < a.size(); ++i) {
        require(a[i].is_array() && a[i].size() == a[0].size(), ErrorCode::ParseError, "ragged matrix");
        for (size_t j = 0; j < a[i].size(); ++j) {
            require(a[i][j].is_number(), ErrorCode::ParseError, "matrix entries must be numbers");
            m(i, j) = a[i][j].get<double>();
        }
    }
    return m;
}

inline json to_json(const CMat& m) { return {{"re", to_json(Mat(m.real()))}, {"im", to_json(Mat(m.imag()))}}; }

inline CMat cmat_from_json(const json& j)
{
    require(j.is_object() && j.contains("re") && j.contains("im"), ErrorCode::ParseError,
            "complex matrix needs re and im");
    Mat re = mat_from_json(j.at("re")), im = mat_from_json(j.at("im"));
    require(re.rows() == im.rows() && re.cols() == im.cols(), ErrorCode::ParseError, "re and im sizes differ");
    CMat m(re.rows(), re.cols());
    m.real() = re;
    m.imag() = im;
    return m;
}

inline Kind parse_kind(const std::string& s)
{
    if (s == "boson")
        return Kind::boson;
    if (s == "fermion")
        return Kind::fermion;
    throw Error(ErrorCode::InvalidConfig, "kind must be boson or fermion, got " + s);
}

// Representations understood by `convert`. Real matrices travel as CSV, the rest as JSON.
enum class Rep { covariance, complex_structure, generator, squeezing, bogoliubov, thermal, wavefunction };

inline Rep parse_rep(const std::string& s)
{
    static const std::pair<const char*, Rep> names[] = {
        {"covariance", Rep::covariance}, {"J", Rep::complex_structure},   {"generator", Rep::generator},
        {"squeezing", Rep::squeezing},   {"bogoliubov", Rep::bogoliubov}, {"thermal", Rep::thermal},
        {"wavefunction", Rep::wavefunction}};
    for (auto& [n, r] : names)
        if (s == n)
            return r;
    throw Error(ErrorCode::InvalidConfig, "unknown representation " + s);
}

inline bool is_csv_rep(Rep r) { return r == Rep::covariance || r == Rep::complex_structure || r == Rep::generator; }

inline Mat rep_to_covariance(Rep rep, Kind kind, const std::string& text)
{
    if (is_csv_rep(rep)) {
        std::stringstream ss(text);
        Mat m = parse_csv(ss);
        require(m.rows() == m.cols() && m.rows() % 2 == 0, ErrorCode::DimensionMismatch, "matrix must be 2N×2N");
        const int n = static_cast<int>(m.rows()) / 2;
        if (rep == Rep::covariance)
            return make_state(kind, m).gamma;
        if (rep == Rep::complex_structure)
            return covariance_from_J(kind, m);
        return generator_to_covariance(m, standard_vacuum(kind, n));
    }
    json j = parse_json(text);
    try {
        switch (rep) {
        case Rep::squeezing:
            return squeezing_to_covariance({kind, cmat_from_json(j.at("gamma"))});
        case Rep::bogoliubov: {
            BogoliubovData d{cmat_from_json(j.at("alpha")), cmat_from_json(j.at("beta"))};
            Mat M = checked_bogoliubov_to_group(d, kind);
            const int n = static_cast<int>(M.rows()) / 2;
            return M * standard_vacuum(kind, n) * M.transpose();
        }
        case Rep::thermal:
            return covariance_from_J(kind, thermal_to_J({kind, mat_from_json(j.at("q")), j.at("c0").get<double>()}));
        case Rep::wavefunction: {
            require(kind == Kind::boson, ErrorCode::InvalidConfig, "wave functions are bosonic");
            WaveFunctionData w;
            w.mixed = j.value("mixed", false);
            w.A = mat_from_json(j.at("A"));
            w.B = mat_from_json(j.at("B"));
            if (w.mixed) {
                w.C = mat_from_json(j.at("C"));
                w.D = mat_from_json(j.at("D"));
            }
            return wavefunction_to_covariance(w);
        }
        default:
            break;
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    throw Error(ErrorCode::InvalidConfig, "unsupported representation");
}

inline std::string covariance_to_rep(Rep rep, Kind kind, const Mat& gamma)
{
    const int n = static_cast<int>(gamma.rows()) / 2;
    std::stringstream os;
    switch (rep) {
    case Rep::covariance:
        write_csv(os, gamma);
        return os.str();
    case Rep::complex_structure:
        write_csv(os, complex_structure(kind, gamma));
        return os.str();
    case Rep::generator:
        write_csv(os, covariance_to_generator(gamma, standard_vacuum(kind, n), kind));
        return os.str();
    default:
        break;
    }
    json j;
    j["kind"] = to_string(kind);
    if (rep == Rep::squeezing) {
        j["gamma"] = to_json(covariance_to_squeezing(gamma, kind).gamma);
    } else if (rep == Rep::bogoliubov) {
        BogoliubovData d = group_to_bogoliubov(gamma, standard_vacuum(kind, n), kind);
        j["alpha"] = to_json(d.alpha);
        j["beta"] = to_json(d.beta);
    } else if (rep == Rep::thermal) {
        ThermalData t = covariance_to_thermal(complex_structure(kind, gamma), kind);
        j["q"] = to_json(t.q);
        j["c0"] = t.c0;
    } else {
        require(kind == Kind::boson, ErrorCode::InvalidConfig, "wave functions are bosonic");
        const bool mixed = purity_defect(complex_structure(kind, gamma)) > 1e-10;
        WaveFunctionData w = covariance_to_wavefunction(gamma, mixed);
        j["mixed"] = mixed;
        j["A"] = to_json(w.A);
        j["B"] = to_json(w.B);
        if (mixed) {
            j["C"] = to_json(w.C);
            j["D"] = to_json(w.D);
        }
    }
    return j.dump(2) + "\n";
}

} // namespace gaussopt
