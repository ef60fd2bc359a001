#include "surgecast/report.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "surgecast/error.hpp"
#include "surgecast/jsonio.hpp"

namespace surgecast {

std::string trend_to_csv(const TrendReport& trend) {
    std::string out = "date,probability,predicted,actual\n";
    for (const TrendPoint& p : trend.points) {
        out += p.date.to_iso();
        out += ',';
        out += jsonio::format_double(p.probability);
        out += ',';
        out += std::to_string(p.predicted);
        out += ',';
        out += std::to_string(p.actual);
        out += '\n';
    }
    return out;
}

TrendReport trend_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("trend csv is empty");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != "date,probability,predicted,actual") {
        throw SchemaError("trend csv has unexpected header '" + line + "'");
    }
    TrendReport trend;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string date_s, prob_s, pred_s, act_s;
        if (!std::getline(fields, date_s, ',') || !std::getline(fields, prob_s, ',') ||
            !std::getline(fields, pred_s, ',') || !std::getline(fields, act_s)) {
            throw ParseError("trend csv row " + std::to_string(row) + " is malformed");
        }
        TrendPoint p;
        auto d = Date::parse(date_s);
        if (!d) throw ParseError("trend csv row " + std::to_string(row) + " has a bad date");
        p.date = *d;
        try {
            std::size_t used = 0;
            p.probability = std::stod(prob_s, &used);
            if (used != prob_s.size()) throw std::invalid_argument(prob_s);
            p.predicted = std::stoi(pred_s);
            p.actual = std::stoi(act_s);
        } catch (const std::exception&) {
            throw ParseError("trend csv row " + std::to_string(row) + " has a bad number");
        }
        trend.points.push_back(p);
    }
    return trend;
}

std::string history_to_csv(const TrainHistory& history) {
    std::string out = "epoch,train_loss,dev_loss\n";
    for (std::size_t i = 0; i < history.train_loss.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += jsonio::format_double(history.train_loss[i]);
        out += ',';
        if (i < history.dev_loss.size()) out += jsonio::format_double(history.dev_loss[i]);
        out += '\n';
    }
    return out;
}

std::string eval_to_csv(const EvalReport& report) {
    std::string out = "n,accuracy,auc,tp,fp,tn,fn\n";
    out += std::to_string(report.n);
    out += ',';
    out += jsonio::format_double(report.accuracy);
    out += ',';
    out += jsonio::format_double(report.auc);
    out += ',';
    out += std::to_string(report.tp);
    out += ',';
    out += std::to_string(report.fp);
    out += ',';
    out += std::to_string(report.tn);
    out += ',';
    out += std::to_string(report.fn);
    out += '\n';
    return out;
}

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Step path through the given series, horizontal-first between points.
std::string step_path(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::string d = "M " + fmt2(xs[0]) + " " + fmt2(ys[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        d += " H " + fmt2(xs[i]);
        if (ys[i] != ys[i - 1]) d += " V " + fmt2(ys[i]);
    }
    return d;
}

} // namespace

std::string render_trend_svg(const TrendReport& trend) {
    if (trend.points.empty()) throw ConfigError("cannot render an empty trend");

    const double width = 880, height = 360;
    const double left = 60, right = 860, top = 30, bottom = 310;
    const int first = trend.points.front().date.serial();
    const int last = trend.points.back().date.serial();
    const double span = last > first ? static_cast<double>(last - first) : 1.0;

    auto x_of = [&](Date d) {
        return left + (right - left) * static_cast<double>(d.serial() - first) / span;
    };
    auto y_of = [&](double v) { return bottom - (bottom - top) * v; };

    std::vector<double> xs, prob_y, pred_y, act_y;
    for (const TrendPoint& p : trend.points) {
        xs.push_back(x_of(p.date));
        prob_y.push_back(y_of(p.probability));
        pred_y.push_back(y_of(p.predicted));
        act_y.push_back(y_of(p.actual));
    }

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(width) + "\" height=\"" +
           fmt2(height) + "\" viewBox=\"0 0 " + fmt2(width) + " " + fmt2(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (double v : {0.0, 0.5, 1.0}) {
        svg += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(y_of(v)) + "\" x2=\"" + fmt2(right) +
               "\" y2=\"" + fmt2(y_of(v)) + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + fmt2(left - 8) + "\" y=\"" + fmt2(y_of(v) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt2(v).substr(0, 3) + "</text>\n";
    }

    // Month boundaries as x ticks, plus the endpoints.
    std::vector<Date> ticks{trend.points.front().date};
    for (const TrendPoint& p : trend.points) {
        if (p.date.to_iso().substr(8, 2) == "01") ticks.push_back(p.date);
    }
    if (trend.points.size() > 1) ticks.push_back(trend.points.back().date);
    for (Date t : ticks) {
        svg += "<line x1=\"" + fmt2(x_of(t)) + "\" y1=\"" + fmt2(bottom) + "\" x2=\"" +
               fmt2(x_of(t)) + "\" y2=\"" + fmt2(bottom + 5) + "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + fmt2(x_of(t)) + "\" y=\"" + fmt2(bottom + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               t.to_iso() + "</text>\n";
    }
    svg += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(bottom) + "\" x2=\"" + fmt2(right) +
           "\" y2=\"" + fmt2(bottom) + "\" stroke=\"#333\"/>\n";

    if (trend.points.size() == 1) {
        svg += "<circle cx=\"" + fmt2(xs[0]) + "\" cy=\"" + fmt2(prob_y[0]) +
               "\" r=\"3\" fill=\"#1f77b4\"/>\n";
        svg += "<circle cx=\"" + fmt2(xs[0]) + "\" cy=\"" + fmt2(pred_y[0]) +
               "\" r=\"3\" fill=\"#2ca02c\"/>\n";
        svg += "<circle cx=\"" + fmt2(xs[0]) + "\" cy=\"" + fmt2(act_y[0]) +
               "\" r=\"3\" fill=\"#d62728\"/>\n";
    } else {
        svg += "<path d=\"" + step_path(xs, act_y) +
               "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
        svg += "<path d=\"" + step_path(xs, pred_y) +
               "\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\" "
               "stroke-dasharray=\"6 3\"/>\n";
        std::string d = "M " + fmt2(xs[0]) + " " + fmt2(prob_y[0]);
        for (std::size_t i = 1; i < xs.size(); ++i) {
            d += " L " + fmt2(xs[i]) + " " + fmt2(prob_y[i]);
        }
        svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    }

    const double lx = left + 10;
    svg += "<text x=\"" + fmt2(lx) + "\" y=\"" + fmt2(top - 10) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#1f77b4\">probability</text>\n";
    svg += "<text x=\"" + fmt2(lx + 100) + "\" y=\"" + fmt2(top - 10) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#2ca02c\">predicted</text>\n";
    svg += "<text x=\"" + fmt2(lx + 190) + "\" y=\"" + fmt2(top - 10) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d62728\">actual</text>\n";
    svg += "</svg>\n";
    return svg;
}

void emit_plot(const TrendReport& trend, const TrainHistory& history,
               const std::string& out_dir) {
    if (trend.points.empty()) throw ConfigError("plot requires a non-empty trend");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());
    const std::filesystem::path dir(out_dir);
    jsonio::write_file((dir / "trend.csv").string(), trend_to_csv(trend));
    jsonio::write_file((dir / "trend.svg").string(), render_trend_svg(trend));
    jsonio::write_file((dir / "history.csv").string(), history_to_csv(history));
}

} // namespace surgecast
