#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relhartree/harness.hpp"

namespace relhartree::harness {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_csv_double(const std::string& tok, const std::string& where) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ConfigError("csv: bad number '" + tok + "' in " + where);
    return v;
}

} // namespace

std::string to_csv(const TimeSeries& ts) {
    ts.validate();
    std::string out = "t";
    for (const auto& name : ts.channel_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < ts.times.size(); ++i) {
        out += fmt_double(ts.times[i]);
        for (const auto& ch : ts.channels) {
            out += ',';
            out += fmt_double(ch[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const TimeSeries& ts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("csv: cannot open '" + path + "' for writing");
    out << to_csv(ts);
}

TimeSeries read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("csv: cannot open '" + path + "'");
    TimeSeries ts;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv: empty file '" + path + "'");
    {
        std::stringstream header(line);
        std::string tok;
        bool first = true;
        while (std::getline(header, tok, ',')) {
            if (first) {
                if (tok != "t") throw ConfigError("csv: first column must be 't'");
                first = false;
            } else {
                ts.channel_names.push_back(tok);
            }
        }
    }
    ts.channels.resize(ts.channel_names.size());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string tok;
        std::size_t col = 0;
        while (std::getline(row, tok, ',')) {
            const double v = parse_csv_double(tok, "line " + std::to_string(lineno));
            if (col == 0) ts.times.push_back(v);
            else if (col <= ts.channels.size()) ts.channels[col - 1].push_back(v);
            else throw ConfigError("csv: too many columns at line " + std::to_string(lineno));
            ++col;
        }
        if (col != ts.channels.size() + 1)
            throw ConfigError("csv: wrong column count at line " + std::to_string(lineno));
    }
    ts.validate();
    return ts;
}

// ---------------------------------------------------------------------------

using json = nlohmann::ordered_json;

namespace {

json fit_to_json(const NamedFit& nf) {
    return json{{"channel", nf.channel},
                {"exponent", nf.fit.exponent},
                {"log_amplitude", nf.fit.log_amplitude},
                {"r_squared", nf.fit.r_squared},
                {"t_min", nf.fit.t_min},
                {"t_max", nf.fit.t_max},
                {"n_samples", nf.fit.n_samples}};
}

NamedFit fit_from_json(const json& j) {
    NamedFit nf;
    nf.channel = j.at("channel").get<std::string>();
    nf.fit.exponent = j.at("exponent").get<double>();
    nf.fit.log_amplitude = j.at("log_amplitude").get<double>();
    nf.fit.r_squared = j.at("r_squared").get<double>();
    nf.fit.t_min = j.at("t_min").get<double>();
    nf.fit.t_max = j.at("t_max").get<double>();
    nf.fit.n_samples = j.at("n_samples").get<int>();
    return nf;
}

json verdict_to_json(const Verdict& v) {
    json j{{"name", v.name}, {"pass", v.pass}, {"measured", v.measured}};
    if (std::isfinite(v.lo)) j["lo"] = v.lo;
    if (std::isfinite(v.hi)) j["hi"] = v.hi;
    return j;
}

Verdict verdict_from_json(const json& j) {
    Verdict v;
    v.name = j.at("name").get<std::string>();
    v.pass = j.at("pass").get<bool>();
    v.measured = j.at("measured").get<double>();
    v.lo = j.contains("lo") ? j.at("lo").get<double>() : -std::numeric_limits<double>::infinity();
    v.hi = j.contains("hi") ? j.at("hi").get<double>() : std::numeric_limits<double>::infinity();
    return v;
}

} // namespace

std::string to_summary_json(const RunRecord& r) {
    json j;
    j["command"] = r.command;
    j["config_hash"] = r.config_hash;
    j["seed"] = r.seed;
    j["config"] = json::object();
    for (const auto& [k, v] : r.config) j["config"][k] = v;
    j["channels"] = r.channels;
    j["csv"] = r.csv_file;
    j["fits"] = json::array();
    for (const auto& f : r.fits) j["fits"].push_back(fit_to_json(f));
    j["verdicts"] = json::array();
    for (const auto& v : r.verdicts) j["verdicts"].push_back(verdict_to_json(v));
    j["warnings"] = r.warnings;
    j["extra"] = json::object();
    for (const auto& [k, v] : r.extra) j["extra"][k] = v;
    return j.dump(2) + "\n";
}

std::string to_meta_json(const RunRecord& r) {
    json j;
    j["started_at"] = r.started_at;
    j["finished_at"] = r.finished_at;
    j["elapsed_seconds"] = r.elapsed_seconds;
    return j.dump(2) + "\n";
}

RunRecord from_json(const std::string& summary_json, const std::string& meta_json) {
    RunRecord r;
    const json j = json::parse(summary_json);
    r.command = j.at("command").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("config").items()) r.config[k] = v.get<std::string>();
    r.channels = j.at("channels").get<std::vector<std::string>>();
    r.csv_file = j.at("csv").get<std::string>();
    for (const auto& f : j.at("fits")) r.fits.push_back(fit_from_json(f));
    for (const auto& v : j.at("verdicts")) r.verdicts.push_back(verdict_from_json(v));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& [k, v] : j.at("extra").items()) r.extra[k] = v.get<std::string>();
    if (!meta_json.empty()) {
        const json m = json::parse(meta_json);
        r.started_at = m.at("started_at").get<std::string>();
        r.finished_at = m.at("finished_at").get<std::string>();
        r.elapsed_seconds = m.at("elapsed_seconds").get<double>();
    }
    return r;
}

// ---------------------------------------------------------------------------
// SVG plotting
// ---------------------------------------------------------------------------

namespace {

struct Axis {
    double lo, hi; // data range (log10 when logscale)
    bool logscale;
};

double map_coord(double v, const Axis& ax, double pix_lo, double pix_hi) {
    const double x = ax.logscale ? std::log10(v) : v;
    const double f = (x - ax.lo) / (ax.hi - ax.lo);
    return pix_lo + f * (pix_hi - pix_lo);
}

Axis make_axis(const std::vector<double>& v, bool want_log) {
    bool logscale = want_log;
    for (double x : v)
        if (!(x > 0.0)) logscale = false;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : v) {
        const double t = logscale ? std::log10(x) : x;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (!(hi > lo)) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad, logscale};
}

} // namespace

std::string plot_svg(const std::vector<double>& t, const std::vector<double>& y,
                     const std::string& channel, const DecayFit* fit) {
    if (t.size() != y.size() || t.empty()) throw UsageError("plot_svg: bad series");
    const double W = 800, H = 560, ml = 70, mr = 20, mt = 20, mb = 50;
    const Axis ax = make_axis(t, true);
    const Axis ay = make_axis(y, true);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"560\" "
           "viewBox=\"0 0 800 560\">\n";
    svg << "<rect width=\"800\" height=\"560\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << fmt_double(ml) << "\" y=\"" << fmt_double(mt) << "\" width=\""
        << fmt_double(W - ml - mr) << "\" height=\"" << fmt_double(H - mt - mb)
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    auto px = [&](double v) { return map_coord(v, ax, ml, W - mr); };
    auto py = [&](double v) { return map_coord(v, ay, H - mb, mt); };

    // decade ticks
    for (int d = int(std::ceil(ax.lo)); d <= int(std::floor(ax.hi)); ++d) {
        const double x = ml + (d - ax.lo) / (ax.hi - ax.lo) * (W - ml - mr);
        svg << "<line x1=\"" << fmt_double(x) << "\" y1=\"" << fmt_double(H - mb) << "\" x2=\""
            << fmt_double(x) << "\" y2=\"" << fmt_double(H - mb + 6) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt_double(x) << "\" y=\"" << fmt_double(H - mb + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << (ax.logscale ? "1e" : "")
            << d << "</text>\n";
    }
    for (int d = int(std::ceil(ay.lo)); d <= int(std::floor(ay.hi)); ++d) {
        const double yy = (H - mb) - (d - ay.lo) / (ay.hi - ay.lo) * (H - mt - mb);
        svg << "<line x1=\"" << fmt_double(ml - 6) << "\" y1=\"" << fmt_double(yy) << "\" x2=\""
            << fmt_double(ml) << "\" y2=\"" << fmt_double(yy) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt_double(ml - 10) << "\" y=\"" << fmt_double(yy + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << (ay.logscale ? "1e" : "") << d
            << "</text>\n";
    }

    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) svg << ' ';
        svg << fmt_double(px(t[i])) << ',' << fmt_double(py(y[i]));
    }
    svg << "\"/>\n";

    if (fit && ax.logscale && ay.logscale) {
        const double t0 = fit->t_min, t1 = fit->t_max;
        const double y0 = std::exp(fit->log_amplitude + fit->exponent * std::log(t0));
        const double y1 = std::exp(fit->log_amplitude + fit->exponent * std::log(t1));
        svg << "<line x1=\"" << fmt_double(px(t0)) << "\" y1=\"" << fmt_double(py(y0))
            << "\" x2=\"" << fmt_double(px(t1)) << "\" y2=\"" << fmt_double(py(y1))
            << "\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << fmt_double(W - mr - 8) << "\" y=\"" << fmt_double(mt + 18)
            << "\" font-size=\"13\" text-anchor=\"end\" fill=\"#d62728\">slope "
            << fmt_double(fit->exponent) << "</text>\n";
    }

    svg << "<text x=\"" << fmt_double(0.5 * W) << "\" y=\"" << fmt_double(H - 12)
        << "\" font-size=\"13\" text-anchor=\"middle\">t</text>\n";
    svg << "<text x=\"" << fmt_double(16.0) << "\" y=\"" << fmt_double(0.5 * H)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fmt_double(0.5 * H) << ")\">" << channel << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace relhartree::harness
