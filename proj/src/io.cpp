#include "dispt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dispt {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void dump_value(const json& v, std::string& out) {
    switch (v.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump_value(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& e : v) {
                if (!first) out += ',';
                first = false;
                dump_value(e, out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            double d = v.get<double>();
            if (std::isfinite(d))
                out += fmt17(d);
            else
                out += "null";
            break;
        }
        default:
            out += v.dump();
    }
}

}  // namespace

std::string dump_json(const json& doc) {
    std::string out;
    dump_value(doc, out);
    return out;
}

json tensor_to_json(const CoeffTensor& w) {
    json doc;
    doc["n"] = w.n();
    json entries = json::array();
    for (int k = 1; k <= 4; ++k)
        for (int j = 1; j <= w.n(); ++j)
            for (int p = 1; p <= w.n(); ++p)
                for (int q = 1; q <= w.n(); ++q)
                    for (int r = 1; r <= w.n(); ++r) {
                        cplx z = w.omega(k, j, p, q, r);
                        if (z == cplx{0.0, 0.0}) continue;
                        entries.push_back({{"k", k}, {"j", j}, {"p", p}, {"q", q}, {"r", r},
                                           {"re", z.real()}, {"im", z.imag()}});
                    }
    doc["omega"] = std::move(entries);
    return doc;
}

CoeffTensor tensor_from_json(const json& doc) {
    if (!doc.contains("n") || !doc.contains("omega"))
        throw std::invalid_argument("tensor_from_json: need fields n and omega");
    int n = doc.at("n").get<int>();
    CoeffTensor w(n);
    for (const auto& e : doc.at("omega")) {
        int k = e.at("k").get<int>(), j = e.at("j").get<int>(), p = e.at("p").get<int>(),
            q = e.at("q").get<int>(), r = e.at("r").get<int>();
        if (k < 1 || k > 4 || j < 1 || j > n || p < 1 || p > n || q < 1 || q > n || r < 1 || r > n)
            throw std::invalid_argument("tensor_from_json: index out of range");
        w.omega(k, j, p, q, r) = cplx{e.at("re").get<double>(), e.at("im").get<double>()};
    }
    return w;
}

json condition_report_to_json(const ConditionReport& rep) {
    json doc;
    doc["tolerance"] = rep.tol;
    json flags;
    for (const auto& [name, ok] : rep.flags) flags[name] = ok;
    doc["conditions"] = std::move(flags);
    doc["a_set"] = rep.a_set();
    doc["b_set"] = rep.b_set();
    doc["b_extra"] = rep.b_extra();
    doc["c_set"] = rep.c_set();
    doc["g_set"] = rep.g_set();
    doc["admissible"] = rep.admissible();
    json viols = json::array();
    for (const auto& v : rep.violations)
        viols.push_back({{"condition", v.condition},
                         {"index", {v.index[0], v.index[1], v.index[2], v.index[3]}},
                         {"lhs_re", v.lhs.real()}, {"lhs_im", v.lhs.imag()},
                         {"rhs_re", v.rhs.real()}, {"rhs_im", v.rhs.imag()},
                         {"gap", v.gap}});
    doc["violations"] = std::move(viols);
    return doc;
}

json field_to_json(const TorusField& f) {
    json doc;
    doc["n"] = f.n();
    doc["N"] = f.N();
    json entries = json::array();
    for (int c = 0; c < f.n(); ++c) {
        const auto& coeffs = f.coeffs(c);
        for (int i = 0; i < f.N(); ++i) {
            if (coeffs[i] == cplx{0.0, 0.0}) continue;
            int k = i <= f.N() / 2 ? i : i - f.N();
            entries.push_back({{"component", c + 1}, {"k", k}, {"re", coeffs[i].real()},
                               {"im", coeffs[i].imag()}});
        }
    }
    doc["coefficients"] = std::move(entries);
    return doc;
}

TorusField field_from_json(const json& doc) {
    int n = doc.at("n").get<int>();
    int N = doc.at("N").get<int>();
    std::vector<std::vector<cplx>> coeffs(n, std::vector<cplx>(N, cplx{0, 0}));
    for (const auto& e : doc.at("coefficients")) {
        int c = e.at("component").get<int>() - 1;
        int k = e.at("k").get<int>();
        if (c < 0 || c >= n || k < -N / 2 + 1 || k > N / 2)
            throw std::invalid_argument("field_from_json: index out of range");
        coeffs[c][k >= 0 ? k : k + N] = cplx{e.at("re").get<double>(), e.at("im").get<double>()};
    }
    return TorusField::from_coeffs(n, N, std::move(coeffs));
}

json rate_report_to_json(const RateReport& rep) {
    return json{{"name", rep.name},       {"ladder", rep.ladder},
                {"gaps", rep.gaps},       {"slope", rep.slope},
                {"r2", rep.r2},           {"expected", rep.expected},
                {"window", {rep.window_lo, rep.window_hi}},
                {"verdict", rep.verdict}};
}

json energy_report_to_json(const EnergyReport& rep) {
    return json{{"eps", rep.eps},
                {"times", rep.times},
                {"Em", rep.Em_values},
                {"Hm", rep.Hm_values},
                {"equivalence_ratios", rep.equivalence_ratios},
                {"fitted_A", rep.fitted_A},
                {"blew_up", rep.blew_up}};
}

json identity_table_to_json(const std::vector<IdentityResidual>& table) {
    json arr = json::array();
    for (const auto& row : table) arr.push_back({{"name", row.name}, {"residual", row.residual}});
    return arr;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += fmt17(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string svg_loglog_plot(const std::string& title, const std::vector<double>& x,
                            const std::vector<double>& y, double slope, double intercept) {
    const int W = 480, H = 360, pad = 50;
    double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx[i] = std::log10(x[i]);
        ly[i] = std::log10(std::max(y[i], 1e-300));
        lx_min = std::min(lx_min, lx[i]);
        lx_max = std::max(lx_max, lx[i]);
        ly_min = std::min(ly_min, ly[i]);
        ly_max = std::max(ly_max, ly[i]);
    }
    if (lx_max == lx_min) lx_max = lx_min + 1;
    if (ly_max == ly_min) ly_max = ly_min + 1;
    auto px = [&](double v) { return pad + (v - lx_min) / (lx_max - lx_min) * (W - 2 * pad); };
    auto py = [&](double v) { return H - pad - (v - ly_min) / (ly_max - ly_min) * (H - 2 * pad); };
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    svg << "<line x1='" << pad << "' y1='" << H - pad << "' x2='" << W - pad << "' y2='"
        << H - pad << "' stroke='black'/>\n";
    svg << "<line x1='" << pad << "' y1='" << pad << "' x2='" << pad << "' y2='" << H - pad
        << "' stroke='black'/>\n";
    // fitted line in natural-log space: ln y = slope ln x + intercept
    double fy0 = (slope * (lx_min * std::log(10.0)) + intercept) / std::log(10.0);
    double fy1 = (slope * (lx_max * std::log(10.0)) + intercept) / std::log(10.0);
    svg << "<line x1='" << px(lx_min) << "' y1='" << py(fy0) << "' x2='" << px(lx_max) << "' y2='"
        << py(fy1) << "' stroke='steelblue'/>\n";
    for (std::size_t i = 0; i < lx.size(); ++i)
        svg << "<circle cx='" << px(lx[i]) << "' cy='" << py(ly[i])
            << "' r='3' fill='crimson'/>\n";
    svg << "<text x='" << W / 2 << "' y='" << H - 10
        << "' text-anchor='middle' font-size='12'>slope " << slope << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace dispt
