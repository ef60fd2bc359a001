#pragma once

#include <string>

#include "surgecast/metrics.hpp"
#include "surgecast/train.hpp"

namespace surgecast {

std::string trend_to_csv(const TrendReport& trend);
TrendReport trend_from_csv(const std::string& text);

std::string history_to_csv(const TrainHistory& history);
std::string eval_to_csv(const EvalReport& report);

// Self-contained line/step chart of predicted probability, predicted label
// and ground-truth label over the trend dates.
std::string render_trend_svg(const TrendReport& trend);

// Writes trend.csv, trend.svg and history.csv into out_dir (created if
// missing). Throws ConfigError on an empty trend, IoError on write failure.
void emit_plot(const TrendReport& trend, const TrainHistory& history, const std::string& out_dir);

} // namespace surgecast
